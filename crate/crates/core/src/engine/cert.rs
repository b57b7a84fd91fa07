//! Trace certificates and their line format.
//!
//! ```text
//! PROGRAM <n>
//! INPUT <word>
//! ORACLE <word>                                   (relativized runs only)
//! STAGE <ord> SEG <steps> <snapshot>               (stage reached, start snapshot)
//! STAGE <ord> LIMIT <level> <descriptor> <summary> <snapshot>
//! VERDICT halted <stage> <clock> <word> | nonhalting <ord> <ord> | budget <ord>
//! ```
//!
//! Descriptors are `cycle:<start>:<period>`, `lasso:<start>:<period>:<shift>`
//! (offsets counted in steps from the start of the ω-block) and
//! `repeat:<stage>:<blocks>` one level up. A summary is the OR of every
//! tape over the whole block, written `sum:<word>/<word>/...`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use thiserror::Error;

use super::Verdict;
use crate::machine::Snapshot;
use crate::ordinal::Ordinal;
use crate::word::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    Cycle { start: u64, period: u64 },
    Lasso { start: u64, period: u64, shift: u64 },
    Repeat { from: Ordinal, blocks: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    /// `steps` successor steps from `start`, ending at `stage`; the run
    /// started at the limit part of `stage`.
    Seg { stage: Ordinal, steps: u64, start: Snapshot },
    /// A limit reached at `stage` by closing a block at `level`.
    Limit {
        stage: Ordinal,
        level: u32,
        desc: Descriptor,
        summary: Vec<Word>,
        result: Snapshot,
    },
}

impl Record {
    pub fn stage(&self) -> &Ordinal {
        match self {
            Record::Seg { stage, .. } | Record::Limit { stage, .. } => stage,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCertificate {
    pub program: BigUint,
    pub input: Word,
    pub oracle_tape: Option<Word>,
    pub records: Vec<Record>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate line {line}: {msg}")]
pub struct CertError {
    pub line: usize,
    pub msg: String,
}

impl std::fmt::Display for Descriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Descriptor::Cycle { start, period } => write!(f, "cycle:{start}:{period}"),
            Descriptor::Lasso { start, period, shift } => write!(f, "lasso:{start}:{period}:{shift}"),
            Descriptor::Repeat { from, blocks } => write!(f, "repeat:{from}:{blocks}"),
        }
    }
}

fn summary_string(s: &[Word]) -> String {
    let parts: Vec<String> = s.iter().map(Word::to_string).collect();
    format!("sum:{}", parts.join("/"))
}

impl TraceCertificate {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "PROGRAM {}", self.program).unwrap();
        writeln!(out, "INPUT {}", self.input).unwrap();
        if let Some(o) = &self.oracle_tape {
            writeln!(out, "ORACLE {o}").unwrap();
        }
        for r in &self.records {
            match r {
                Record::Seg { stage, steps, start } => {
                    writeln!(out, "STAGE {stage} SEG {steps} {start}").unwrap()
                }
                Record::Limit { stage, level, desc, summary, result } => writeln!(
                    out,
                    "STAGE {stage} LIMIT {level} {desc} {} {result}",
                    summary_string(summary)
                )
                .unwrap(),
            }
        }
        match &self.verdict {
            Verdict::Halted { stage, paper_clock, output } => {
                writeln!(out, "VERDICT halted {stage} {paper_clock} {output}").unwrap()
            }
            Verdict::NonHalting { repeat_from, repeat_to } => {
                writeln!(out, "VERDICT nonhalting {repeat_from} {repeat_to}").unwrap()
            }
            Verdict::BudgetExhausted { last_stage } => writeln!(out, "VERDICT budget {last_stage}").unwrap(),
        }
        out
    }

    pub fn parse(text: &str) -> Result<TraceCertificate, CertError> {
        let mut program = None;
        let mut input = None;
        let mut oracle_tape = None;
        let mut records = Vec::new();
        let mut verdict = None;
        for (idx, line) in text.lines().enumerate() {
            let n = idx + 1;
            let err = |msg: &str| CertError { line: n, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            if verdict.is_some() {
                return Err(err("text after the verdict"));
            }
            let ord = |s: &str| s.parse::<Ordinal>().map_err(|_| err("bad ordinal"));
            let word = |s: &str| s.parse::<Word>().map_err(|_| err("bad word"));
            let snap = |s: &str| Snapshot::from_record(s).ok_or_else(|| err("bad snapshot"));
            let num = |s: &str| s.parse::<u64>().map_err(|_| err("bad number"));
            match toks.as_slice() {
                ["PROGRAM", p] => program = Some(p.parse::<BigUint>().map_err(|_| err("bad program number"))?),
                ["INPUT", w] => input = Some(word(w)?),
                ["ORACLE", w] => oracle_tape = Some(word(w)?),
                ["STAGE", st, "SEG", k, s] => records.push(Record::Seg {
                    stage: ord(st)?,
                    steps: num(k)?,
                    start: snap(s)?,
                }),
                ["STAGE", st, "LIMIT", lvl, desc, sum, s] => {
                    let fields: Vec<&str> = desc.split(':').collect();
                    let desc = match fields.as_slice() {
                        ["cycle", a, b] => Descriptor::Cycle { start: num(a)?, period: num(b)? },
                        ["lasso", a, b, c] => Descriptor::Lasso {
                            start: num(a)?,
                            period: num(b)?,
                            shift: num(c)?,
                        },
                        ["repeat", a, b] => Descriptor::Repeat { from: ord(a)?, blocks: num(b)? },
                        _ => return Err(err("bad descriptor")),
                    };
                    let summary = sum
                        .strip_prefix("sum:")
                        .ok_or_else(|| err("bad summary"))?
                        .split('/')
                        .map(word)
                        .collect::<Result<Vec<_>, _>>()?;
                    records.push(Record::Limit {
                        stage: ord(st)?,
                        level: lvl.parse().map_err(|_| err("bad level"))?,
                        desc,
                        summary,
                        result: snap(s)?,
                    });
                }
                ["VERDICT", "halted", a, b, w] => {
                    verdict = Some(Verdict::Halted { stage: ord(a)?, paper_clock: ord(b)?, output: word(w)? })
                }
                ["VERDICT", "nonhalting", a, b] => {
                    verdict = Some(Verdict::NonHalting { repeat_from: ord(a)?, repeat_to: ord(b)? })
                }
                ["VERDICT", "budget", a] => verdict = Some(Verdict::BudgetExhausted { last_stage: ord(a)? }),
                _ => return Err(err("unrecognized record")),
            }
        }
        let missing = |what: &str| CertError { line: text.lines().count(), msg: format!("missing {what}") };
        Ok(TraceCertificate {
            program: program.ok_or_else(|| missing("PROGRAM"))?,
            input: input.ok_or_else(|| missing("INPUT"))?,
            oracle_tape,
            records,
            verdict: verdict.ok_or_else(|| missing("VERDICT"))?,
        })
    }
}
