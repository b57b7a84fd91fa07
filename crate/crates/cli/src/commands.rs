//! One function per subcommand. Each parses its arguments, calls the
//! library and formats the result; nothing else happens here.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use num_bigint::BigUint;
use thiserror::Error;

use ittm_core::engine::{measure_clock, verify_trace, MeasureError, TraceCertificate};
use ittm_core::machine::{encode, parse_program};
use ittm_core::{Ordinal, Program, RunBudget, RunOutcome, Verdict, Word};
use ittm_oracle::{h_alpha_table, halting_order, jump_approx, run_relative, JumpKind, SetOracle, TableError};
use ittm_toolkit::clock::synth_clock;
use ittm_toolkit::fixpoint::fixed_point;
use ittm_toolkit::length::synth_length_input;
use ittm_toolkit::race::race;
use ittm_toolkit::smn::smn_program;
use ittm_toolkit::speedup::{speedup, SpeedupError};
use ittm_toolkit::stdlib;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_REJECTED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Budget(String),
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Budget(_) => EXIT_BUDGET,
            CliError::Rejected(_) => EXIT_REJECTED,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

type Res<T> = Result<T, CliError>;

#[derive(Args, Clone, Debug)]
pub struct BudgetArgs {
    /// Steps allowed inside one omega-block
    #[arg(long, global = true, env = "ITTM_MAX_STEPS")]
    pub max_steps: Option<u64>,
    /// Sub-blocks allowed per level before giving up
    #[arg(long, global = true, env = "ITTM_MAX_BLOCKS")]
    pub max_blocks: Option<u64>,
    /// Highest limit level; runs stop at w^(level+1)
    #[arg(long, global = true, env = "ITTM_MAX_LEVEL")]
    pub max_level: Option<u32>,
}

impl BudgetArgs {
    pub fn budget(&self) -> Res<RunBudget> {
        let d = RunBudget::default();
        let b = RunBudget {
            max_steps_per_block: self.max_steps.unwrap_or(d.max_steps_per_block),
            max_blocks_per_level: self.max_blocks.unwrap_or(d.max_blocks_per_level),
            max_limit_level: self.max_level.unwrap_or(d.max_limit_level),
        };
        b.validate().map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(b)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Records,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Weak,
    Strong,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a machine and report its verdict
    Run {
        file: PathBuf,
        #[arg(long, default_value = "|0", env = "ITTM_INPUT")]
        input: String,
        /// Set oracle for relativized machines: `real <w>`, `prefix <w>` or `set <w>...`
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, value_enum, default_value = "human", env = "ITTM_FORMAT")]
        format: Format,
        /// Also write the certificate here
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Print the clock value of a machine on the zero input
    Measure { file: PathBuf },
    /// Check a certificate against a machine
    Verify {
        file: PathBuf,
        cert: PathBuf,
        #[arg(long)]
        oracle: Option<String>,
    },
    /// Build a machine clocking the given ordinal
    SynthClock {
        alpha: String,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Print an input on which the length machine clocks the given ordinal
    SynthLength { alpha: String },
    /// Remove a finite tail of `n` steps from a clock
    Speedup {
        file: PathBuf,
        n: u64,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Fix the first argument of a two-argument machine
    Smn {
        file: PathBuf,
        k: String,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Fixed point of a program-number transform
    Fixpoint { file: PathBuf },
    /// Race two machines on the zero input
    Race {
        p: PathBuf,
        q: PathBuf,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
    /// Which registry machines halt before stage alpha
    HTable { alpha: String, files: Vec<PathBuf> },
    /// Finite approximation of a weak or strong jump
    JumpTable {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        oracle: String,
        /// Inputs for the strong jump, comma separated
        #[arg(long, default_value = "|0")]
        inputs: String,
        files: Vec<PathBuf>,
    },
    /// Order registry machines by halting stage
    Order { files: Vec<PathBuf> },
    /// List or print the standard library
    Stdlib {
        #[command(subcommand)]
        cmd: StdlibCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum StdlibCmd {
    List,
    Emit {
        name: String,
        #[arg(short = 'o')]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

fn write_out(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

/// Writes to `out` when given, otherwise returns the text for stdout.
fn emit(out: &Option<PathBuf>, text: String) -> Res<String> {
    match out {
        Some(p) => {
            write_out(p, &text)?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text),
    }
}

pub fn load(path: &Path) -> Res<Program> {
    let src = read(path)?;
    parse_program(&src).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn word(s: &str) -> Res<Word> {
    s.parse().map_err(|e| CliError::Parse(format!("{e}")))
}

fn ordinal(s: &str) -> Res<Ordinal> {
    s.parse().map_err(|e| CliError::Parse(format!("{e}")))
}

fn oracle(s: &Option<String>) -> Res<Option<SetOracle>> {
    s.as_deref()
        .map(|t| t.parse().map_err(|e| CliError::Parse(format!("{e}"))))
        .transpose()
}

fn registry(files: &[PathBuf]) -> Res<Vec<BigUint>> {
    files.iter().map(|f| load(f).map(|p| encode(&p))).collect()
}

fn table_err(e: TableError) -> CliError {
    match e {
        TableError::Budget { .. } => CliError::Budget(e.to_string()),
        TableError::Engine(e) => CliError::Failed(e.to_string()),
    }
}

/// The human report for a run.
pub fn format_report(o: &RunOutcome, budget: &RunBudget, mode: Format) -> String {
    if mode == Format::Records {
        return o.certificate.to_text();
    }
    match &o.verdict {
        Verdict::Halted { stage, paper_clock, output } => {
            format!("halted paper_clock={paper_clock} stage={stage}\noutput {output}\n")
        }
        Verdict::NonHalting { repeat_from, repeat_to } => {
            format!("non_halting repeat_from={repeat_from} repeat_to={repeat_to}\n")
        }
        Verdict::BudgetExhausted { last_stage } => format!(
            "budget_exhausted last_stage={last_stage} max_steps={} max_blocks={} max_level={}\n",
            budget.max_steps_per_block, budget.max_blocks_per_level, budget.max_limit_level
        ),
    }
}

fn run_cmd(file: &Path, input: &str, orc: &Option<String>, format: Format, out: &Option<PathBuf>, b: &RunBudget) -> Res<String> {
    let p = load(file)?;
    let x = word(input)?;
    let a = oracle(orc)?;
    let o = match &a {
        Some(a) => run_relative(&p, &x, a, b),
        None => ittm_core::run(&p, &x, b, None),
    }
    .map_err(|e| CliError::Failed(e.to_string()))?;
    if let Some(path) = out {
        write_out(path, &o.certificate.to_text())?;
    }
    let text = format_report(&o, b, format);
    if matches!(o.verdict, Verdict::BudgetExhausted { .. }) {
        return Err(CliError::Budget(text.trim_end().to_string()));
    }
    Ok(text)
}

fn measure_cmd(file: &Path, b: &RunBudget) -> Res<String> {
    match measure_clock(&load(file)?, b) {
        Ok(c) => Ok(format!("{c}\n")),
        Err(e @ MeasureError::Budget(_)) => Err(CliError::Budget(e.to_string())),
        Err(e) => Err(CliError::Failed(e.to_string())),
    }
}

fn verify_cmd(file: &Path, cert: &Path, orc: &Option<String>) -> Res<String> {
    let p = load(file)?;
    let c = TraceCertificate::parse(&read(cert)?).map_err(|e| CliError::Parse(e.to_string()))?;
    let a = oracle(orc)?;
    verify_trace(&p, &c, a.as_ref().map(|a| a as &dyn ittm_core::machine::Oracle))
        .map_err(|r| CliError::Rejected(r.to_string()))?;
    Ok("accepted\n".into())
}

pub fn execute(cmd: &Command, budget: &BudgetArgs) -> Res<String> {
    let b = budget.budget()?;
    match cmd {
        Command::Run { file, input, oracle, format, out } => run_cmd(file, input, oracle, *format, out, &b),
        Command::Measure { file } => measure_cmd(file, &b),
        Command::Verify { file, cert, oracle } => verify_cmd(file, cert, oracle),
        Command::SynthClock { alpha, out } => {
            let p = synth_clock(&ordinal(alpha)?).map_err(|e| CliError::Failed(e.to_string()))?;
            emit(out, p.to_source())
        }
        Command::SynthLength { alpha } => {
            let w = synth_length_input(&ordinal(alpha)?).map_err(|e| CliError::Failed(e.to_string()))?;
            Ok(format!("{w}\n"))
        }
        Command::Speedup { file, n, out } => match speedup(&load(file)?, *n, &b) {
            Ok(p) => emit(out, p.to_source()),
            Err(e @ SpeedupError::NotClockable) => Err(CliError::Budget(e.to_string())),
            Err(e) => Err(CliError::Failed(e.to_string())),
        },
        Command::Smn { file, k, out } => {
            let p = smn_program(&load(file)?, &word(k)?).map_err(|e| CliError::Failed(e.to_string()))?;
            emit(out, p.to_source())
        }
        Command::Fixpoint { file } => match fixed_point(&load(file)?, &b) {
            Ok(n) => Ok(format!("{n}\n")),
            Err(e) => Err(CliError::Failed(e.to_string())),
        },
        Command::Race { p, q, out } => emit(out, race(&load(p)?, &load(q)?).to_source()),
        Command::HTable { alpha, files } => {
            let t = h_alpha_table(&registry(files)?, &ordinal(alpha)?, &b).map_err(table_err)?;
            Ok(t.to_string())
        }
        Command::JumpTable { kind, oracle: orc, inputs, files } => {
            let a = oracle(&Some(orc.clone()))?.expect("given");
            let xs = inputs.split(',').map(word).collect::<Res<Vec<_>>>()?;
            let k = match kind {
                Kind::Weak => JumpKind::Weak,
                Kind::Strong => JumpKind::Strong,
            };
            let t = jump_approx(k, &a, &registry(files)?, &xs, &b).map_err(table_err)?;
            Ok(t.to_string())
        }
        Command::Order { files } => Ok(halting_order(&registry(files)?, &b).map_err(table_err)?.to_string()),
        Command::Stdlib { cmd: StdlibCmd::List } => {
            let mut s = String::new();
            for n in stdlib::names() {
                writeln!(s, "{n}").unwrap();
            }
            Ok(s)
        }
        Command::Stdlib { cmd: StdlibCmd::Emit { name, out } } => {
            let src = stdlib::source(name).ok_or_else(|| CliError::Failed(format!("no stdlib entry named `{name}`")))?;
            emit(out, src.to_string())
        }
    }
}
