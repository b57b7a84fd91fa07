//! `ittm`: run, check and build infinite time Turing machines.
//!
//! Exit codes: 0 success, 1 failure, 2 bad arguments or input files,
//! 3 budget exhausted, 4 certificate rejected.

mod commands;

use clap::Parser;

use commands::{execute, BudgetArgs, Command, EXIT_PARSE};

#[derive(Parser, Debug)]
#[command(name = "ittm", version, about = "Infinite time Turing machines")]
struct Cli {
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match execute(&cli.command, &cli.budget) {
        Ok(text) => print!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
