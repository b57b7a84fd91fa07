//! Oracles and halting tables over finite registries of programs.
//!
//! Every table here is an approximation: it covers the programs and inputs
//! it was given, under a run budget, and says nothing about the rest.

pub mod oracle;
pub mod order;
pub mod tables;

mod text;

pub use oracle::{oracle_answer, run_relative, SetOracle};
pub use order::{halting_order, HaltingOrder};
pub use tables::{h_alpha_table, jump_approx, HTable, JumpKind, JumpTable, TableError};
pub use text::ParseError;
