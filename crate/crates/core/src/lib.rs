//! Infinite time Turing machines.
//!
//! This crate holds the value types ([`Ordinal`], [`Word`]), the program
//! model with its text language and numbering ([`machine`]), and the
//! transfinite [`engine`] that runs programs through limit stages by
//! certified cycle acceleration.

pub mod engine;
pub mod machine;
pub mod ordinal;
pub mod word;

pub use engine::{run, RunBudget, RunOutcome, Verdict};
pub use machine::{Move, Program, Snapshot};
pub use ordinal::Ordinal;
pub use word::Word;
