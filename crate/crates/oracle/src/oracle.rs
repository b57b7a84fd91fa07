use std::fmt;
use std::str::FromStr;

use ittm_core::engine::{run_from, EngineError};
use ittm_core::machine::Oracle;
use ittm_core::{Program, RunBudget, RunOutcome, Snapshot, Word};

use crate::text::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetOracle {
    /// The real `x`, preloaded on the oracle tape. As a set it is `{x}`.
    Real(Word),
    /// `{ (x|n) 0 0 0 ... : n natural }`, the finite approximations to `x`.
    PrefixFamily(Word),
    /// A finite set; everything else is answered No.
    FiniteSet(Vec<Word>),
}

pub fn oracle_answer(a: &SetOracle, w: &Word) -> bool {
    match a {
        SetOracle::Real(x) => w == x,
        // (x|n)0.. = w forces n >= support(w), and n = support(w) suffices
        SetOracle::PrefixFamily(x) => match w.support_len() {
            Some(n) => w.bits(n) == x.bits(n),
            None => false,
        },
        SetOracle::FiniteSet(members) => members.contains(w),
    }
}

impl Oracle for SetOracle {
    fn answer(&self, query: &Word) -> bool {
        oracle_answer(self, query)
    }
}

impl SetOracle {
    /// The start configuration of `p` on `input` relative to this oracle.
    pub fn initial(&self, p: &Program, input: &Word) -> Snapshot {
        match self {
            SetOracle::Real(x) => p.initial_with_oracle_tape(input, x),
            _ => p.initial(input),
        }
    }
}

/// Runs `p` on `input` with `a` attached.
pub fn run_relative(p: &Program, input: &Word, a: &SetOracle, budget: &RunBudget) -> Result<RunOutcome, EngineError> {
    run_from(p, a.initial(p, input), budget, Some(a))
}

impl fmt::Display for SetOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetOracle::Real(x) => write!(f, "real {x}"),
            SetOracle::PrefixFamily(x) => write!(f, "prefix {x}"),
            SetOracle::FiniteSet(m) => {
                write!(f, "set")?;
                for w in m {
                    write!(f, " {w}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for SetOracle {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut it = s.split_whitespace();
        let kind = it.next().ok_or(ParseError::Missing("oracle kind"))?;
        let words: Vec<Word> = it
            .map(|w| w.parse().map_err(|e| ParseError::Word(w.to_string(), e)))
            .collect::<Result<_, _>>()?;
        let one = |words: Vec<Word>| -> Result<Word, ParseError> {
            match <[Word; 1]>::try_from(words) {
                Ok([w]) => Ok(w),
                Err(_) => Err(ParseError::Bad(s.to_string())),
            }
        };
        match kind {
            "real" => Ok(SetOracle::Real(one(words)?)),
            "prefix" => Ok(SetOracle::PrefixFamily(one(words)?)),
            "set" => Ok(SetOracle::FiniteSet(words)),
            _ => Err(ParseError::Bad(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn prefix_members() {
        let x = w("|110");
        let a = SetOracle::PrefixFamily(x.clone());
        // (x|3)0^w = 110|0
        assert!(oracle_answer(&a, &w("11|0")));
        assert!(oracle_answer(&a, &Word::zero()));
        assert!(oracle_answer(&a, &w("11011|0")));
        assert!(!oracle_answer(&a, &w("111|0")));
        // x is not finitely supported, so it is no approximation of itself
        assert!(!oracle_answer(&a, &x));
    }

    #[test]
    fn prefix_members_brute_force() {
        // compare with the definition: some n <= 12 with (x|n)0^w == w
        let xs = ["|110", "1|0", "01|01", "|1"];
        let ws = ["|0", "1|0", "11|0", "0101|0", "110110|0", "|1", "1|01"];
        for x in xs {
            for q in ws {
                let (x, q) = (w(x), w(q));
                let by_def = (0..=12).any(|n| Word::finite(x.bits(n)) == q);
                assert_eq!(oracle_answer(&SetOracle::PrefixFamily(x.clone()), &q), by_def, "{x} {q}");
            }
        }
    }

    #[test]
    fn finite_sets_and_reals() {
        assert!(!oracle_answer(&SetOracle::FiniteSet(vec![]), &w("1|0")));
        let a = SetOracle::FiniteSet(vec![w("1|0"), w("|01")]);
        assert!(oracle_answer(&a, &w("10|0")));
        assert!(oracle_answer(&a, &w("0|10")));
        assert!(!oracle_answer(&a, &Word::zero()));
        assert!(oracle_answer(&SetOracle::Real(w("|1")), &w("1|1")));
    }

    #[test]
    fn text_roundtrip() {
        for a in [
            SetOracle::Real(w("1|01")),
            SetOracle::PrefixFamily(w("|0")),
            SetOracle::FiniteSet(vec![]),
            SetOracle::FiniteSet(vec![w("1|0"), w("|1")]),
        ] {
            assert_eq!(a.to_string().parse::<SetOracle>().unwrap(), a);
        }
        assert!("real".parse::<SetOracle>().is_err());
        assert!("cloud 1|0".parse::<SetOracle>().is_err());
    }
}
