use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use ittm_core::machine::decode;
use ittm_core::{run, Ordinal, RunBudget, Verdict, Word};

use crate::tables::TableError;
use crate::text::{field, join, numbers, ParseError};

/// Registry programs ordered by the stage at which they halt on input 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaltingOrder {
    pub registry: Vec<BigUint>,
    /// Halting stage of each entry, `None` for a certified non-halter.
    pub stages: Vec<Option<Ordinal>>,
}

pub fn halting_order(registry: &[BigUint], budget: &RunBudget) -> Result<HaltingOrder, TableError> {
    let mut stages = Vec::with_capacity(registry.len());
    for (index, n) in registry.iter().enumerate() {
        stages.push(match run(&decode(n), &Word::zero(), budget, None)?.verdict {
            Verdict::Halted { stage, .. } => Some(stage),
            Verdict::NonHalting { .. } => None,
            Verdict::BudgetExhausted { last_stage } => return Err(TableError::Budget { index, stage: last_stage }),
        });
    }
    Ok(HaltingOrder { registry: registry.to_vec(), stages })
}

impl HaltingOrder {
    /// `i` halts strictly before `j`.
    pub fn precedes(&self, i: usize, j: usize) -> bool {
        match (&self.stages[i], &self.stages[j]) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        }
    }

    /// The entries that halt.
    pub fn field(&self) -> Vec<usize> {
        (0..self.stages.len()).filter(|&i| self.stages[i].is_some()).collect()
    }

    /// Entries halting at the same stage, by increasing stage.
    pub fn classes(&self) -> Vec<(Ordinal, Vec<usize>)> {
        let mut out: Vec<(Ordinal, Vec<usize>)> = Vec::new();
        let mut field = self.field();
        field.sort_by(|&a, &b| self.stages[a].cmp(&self.stages[b]).then(a.cmp(&b)));
        for i in field {
            let s = self.stages[i].clone().unwrap();
            match out.last_mut() {
                Some((t, members)) if *t == s => members.push(i),
                _ => out.push((s, vec![i])),
            }
        }
        out
    }
}

impl fmt::Display for HaltingOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TABLE halting-order")?;
        writeln!(f, "REGISTRY {}", join(&self.registry))?;
        for (stage, members) in self.classes() {
            writeln!(f, "CLASS {stage} {}", join(&members))?;
        }
        let never: Vec<usize> = (0..self.stages.len()).filter(|&i| self.stages[i].is_none()).collect();
        writeln!(f, "NONHALTING {}", join(&never))
    }
}

impl FromStr for HaltingOrder {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s.lines().peekable();
        if field(&mut lines, "TABLE")? != "halting-order" {
            return Err(ParseError::Bad(s.lines().next().unwrap_or("").to_string()));
        }
        let registry = numbers(field(&mut lines, "REGISTRY")?)?;
        let mut stages: Vec<Option<Option<Ordinal>>> = vec![None; registry.len()];
        let mut place = |i: &str, v: Option<Ordinal>| -> Result<(), ParseError> {
            let slot = i
                .parse::<usize>()
                .ok()
                .and_then(|i| stages.get_mut(i))
                .filter(|s| s.is_none())
                .ok_or_else(|| ParseError::Bad(i.to_string()))?;
            *slot = Some(v);
            Ok(())
        };
        while lines.peek().is_some_and(|l| l.starts_with("CLASS ")) {
            let rest = field(&mut lines, "CLASS")?;
            let mut it = rest.split_whitespace();
            let stage: Ordinal = it
                .next()
                .and_then(|o| o.parse().ok())
                .ok_or_else(|| ParseError::Bad(rest.to_string()))?;
            for i in it {
                place(i, Some(stage.clone()))?;
            }
        }
        for i in field(&mut lines, "NONHALTING")?.split_whitespace() {
            place(i, None)?;
        }
        let stages = stages.into_iter().collect::<Option<Vec<_>>>().ok_or(ParseError::Width)?;
        Ok(HaltingOrder { registry, stages })
    }
}
