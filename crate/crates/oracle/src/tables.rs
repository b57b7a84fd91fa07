use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use ittm_core::engine::EngineError;
use ittm_core::machine::decode;
use ittm_core::{run, Ordinal, RunBudget, Verdict, Word};

use crate::oracle::{run_relative, SetOracle};
use crate::text::{bit_string, bits, field, join, numbers, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("registry entry {index} ran out of budget at stage {stage} without a verdict")]
    Budget { index: usize, stage: Ordinal },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Bit `i` is 1 iff registry program `i` halts on input 0 at a stage
/// below `alpha`, the stage being the first one in the halt state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HTable {
    pub alpha: Ordinal,
    pub registry: Vec<BigUint>,
    pub bits: Vec<bool>,
}

pub fn h_alpha_table(registry: &[BigUint], alpha: &Ordinal, budget: &RunBudget) -> Result<HTable, TableError> {
    let mut out = Vec::with_capacity(registry.len());
    for (index, n) in registry.iter().enumerate() {
        let bit = match run(&decode(n), &Word::zero(), budget, None)?.verdict {
            Verdict::Halted { stage, .. } => stage < *alpha,
            Verdict::NonHalting { .. } => false,
            // got to alpha without halting: any halt comes later
            Verdict::BudgetExhausted { last_stage } if last_stage >= *alpha => false,
            Verdict::BudgetExhausted { last_stage } => return Err(TableError::Budget { index, stage: last_stage }),
        };
        out.push(bit);
    }
    Ok(HTable { alpha: alpha.clone(), registry: registry.to_vec(), bits: out })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JumpKind {
    /// Halting on input 0 only.
    Weak,
    /// Halting on each listed input.
    Strong,
}

/// `rows[i][j]` is 1 iff registry program `i` halts on `inputs[j]`
/// relative to `oracle`. A weak table has the single input 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpTable {
    pub kind: JumpKind,
    pub oracle: SetOracle,
    pub registry: Vec<BigUint>,
    pub inputs: Vec<Word>,
    pub rows: Vec<Vec<bool>>,
}

pub fn jump_approx(
    kind: JumpKind,
    oracle: &SetOracle,
    registry: &[BigUint],
    inputs: &[Word],
    budget: &RunBudget,
) -> Result<JumpTable, TableError> {
    let inputs = match kind {
        JumpKind::Weak => vec![Word::zero()],
        JumpKind::Strong => inputs.to_vec(),
    };
    let mut rows = Vec::with_capacity(registry.len());
    for (index, n) in registry.iter().enumerate() {
        let p = decode(n);
        let mut row = Vec::with_capacity(inputs.len());
        for x in &inputs {
            row.push(match run_relative(&p, x, oracle, budget)?.verdict {
                Verdict::Halted { .. } => true,
                Verdict::NonHalting { .. } => false,
                Verdict::BudgetExhausted { last_stage } => return Err(TableError::Budget { index, stage: last_stage }),
            });
        }
        rows.push(row);
    }
    Ok(JumpTable { kind, oracle: oracle.clone(), registry: registry.to_vec(), inputs, rows })
}

impl fmt::Display for HTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TABLE h-alpha {}", self.alpha)?;
        writeln!(f, "REGISTRY {}", join(&self.registry))?;
        writeln!(f, "ROW {}", bit_string(&self.bits))
    }
}

impl FromStr for HTable {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines();
        let head = field(&mut lines, "TABLE")?;
        let alpha = head
            .strip_prefix("h-alpha ")
            .and_then(|a| a.parse().ok())
            .ok_or_else(|| ParseError::Bad(head.to_string()))?;
        let registry = numbers(field(&mut lines, "REGISTRY")?)?;
        let row = bits(field(&mut lines, "ROW")?)?;
        if row.len() != registry.len() {
            return Err(ParseError::Width);
        }
        Ok(HTable { alpha, registry, bits: row })
    }
}

impl fmt::Display for JumpTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            JumpKind::Weak => "weak-jump",
            JumpKind::Strong => "strong-jump",
        };
        writeln!(f, "TABLE {kind} approximation")?;
        writeln!(f, "ORACLE {}", self.oracle)?;
        writeln!(f, "REGISTRY {}", join(&self.registry))?;
        writeln!(f, "INPUTS {}", join(&self.inputs))?;
        for r in &self.rows {
            writeln!(f, "ROW {}", bit_string(r))?;
        }
        Ok(())
    }
}

impl FromStr for JumpTable {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines();
        let head = field(&mut lines, "TABLE")?;
        let kind = match head {
            "weak-jump approximation" => JumpKind::Weak,
            "strong-jump approximation" => JumpKind::Strong,
            _ => return Err(ParseError::Bad(head.to_string())),
        };
        let oracle = field(&mut lines, "ORACLE")?.parse()?;
        let registry = numbers(field(&mut lines, "REGISTRY")?)?;
        let inputs = field(&mut lines, "INPUTS")?
            .split_whitespace()
            .map(|w| w.parse().map_err(|e| ParseError::Word(w.to_string(), e)))
            .collect::<Result<Vec<Word>, _>>()?;
        let mut rows = Vec::new();
        for _ in 0..registry.len() {
            let r = bits(field(&mut lines, "ROW")?)?;
            if r.len() != inputs.len() {
                return Err(ParseError::Width);
            }
            rows.push(r);
        }
        Ok(JumpTable { kind, oracle, registry, inputs, rows })
    }
}
