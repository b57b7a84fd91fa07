//! Transfinite execution with certified limit stages.
//!
//! Successor stages are plain machine steps. An ω-block (the stages between
//! two consecutive limits) is closed as soon as the run inside it is seen to
//! be either an exact cycle or a rightward translated lasso; both shapes
//! determine the limit configuration exactly. Blocks of ω^k stages are
//! closed the same way one level up: as soon as the start snapshot of a
//! sub-block repeats, the remaining sub-blocks repeat too and the limit is
//! the OR of the repeating sub-blocks' summaries.

mod cert;
mod limits;
mod run;
mod verify;

use thiserror::Error;

use crate::machine::{Snapshot, StepError};
use crate::ordinal::Ordinal;
use crate::word::Word;

pub use cert::{CertError, Descriptor, Record, TraceCertificate};
pub use limits::{limit_snapshot, LimitError};
pub use run::{measure_clock, run, run_from, trace_steps, MeasureError};
pub use verify::{verify_trace, Rejection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RunBudget {
    pub max_steps_per_block: u64,
    pub max_blocks_per_level: u64,
    pub max_limit_level: u32,
}

impl Default for RunBudget {
    fn default() -> Self {
        RunBudget {
            max_steps_per_block: 100_000,
            max_blocks_per_level: 1_000,
            max_limit_level: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("every budget field must be positive")]
    NotPositive,
}

impl RunBudget {
    pub fn validate(&self) -> Result<(), BudgetError> {
        if self.max_steps_per_block == 0 || self.max_blocks_per_level == 0 || self.max_limit_level == 0 {
            return Err(BudgetError::NotPositive);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// `stage` is the first stage in the halt state; `paper_clock` counts
    /// the halting transition itself, see [`paper_clock`].
    Halted {
        stage: Ordinal,
        paper_clock: Ordinal,
        output: Word,
    },
    NonHalting {
        repeat_from: Ordinal,
        repeat_to: Ordinal,
    },
    BudgetExhausted {
        last_stage: Ordinal,
    },
}

impl Verdict {
    pub fn is_halted(&self) -> bool {
        matches!(self, Verdict::Halted { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub certificate: TraceCertificate,
    /// The configuration at the halting stage, when there is one.
    pub final_snapshot: Option<Snapshot>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("start snapshot does not fit the program")]
    BadStart,
}

/// The clock value of a halt reached by a transition fired at stage `beta`:
/// the transition is the `1 + beta`-th step. Below ω this is `beta + 1`;
/// from ω on the leading `1` is absorbed, so a halt fired straight from a
/// limit configuration is timed at the limit itself.
pub fn paper_clock(beta: &Ordinal) -> Ordinal {
    Ordinal::one().add(beta)
}
