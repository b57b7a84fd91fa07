//! Fixed points of program transforms, sized before they are built.
//!
//! The construction is `p = s(r, r)` where `r` on `(q, x)` computes the
//! code of `s(q, q)`, applies `f` to it and hands the result and `x` to the
//! universal machine. `r` therefore contains the universal machine, and
//! `s(r, r)` hardwires all of `r`'s code bits in a chain of prelude states.
//! [`fixed_point`] checks `f` on sample program numbers, then computes a
//! lower bound on the size of `s(r, r)` from the layout [`smn_program`]
//! uses. That bound is far past anything the engine can run, so the result
//! is reported as [`FixpointError::Infeasible`] instead of being emitted.
//!
//! [`smn_program`]: crate::smn::smn_program

use num_bigint::BigUint;
use thiserror::Error;

use ittm_core::engine::{run, EngineError, RunBudget, Verdict};
use ittm_core::machine::{encode, immediate_halter, nat_to_bits};
use ittm_core::{Program, Word};

use crate::smn::shift_for;
use crate::universal::universal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixpointError {
    #[error("the transform did not halt on program number {number}: {verdict:?}")]
    NotTotal { number: BigUint, verdict: Verdict },
    #[error("the fixed point needs at least {min_states} states and {min_code_bits} code bits")]
    Infeasible { min_states: u64, min_code_bits: u64 },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Fewest code bits of a 3-tape program with `states` non-halt states:
/// a flag, then 8 entries of at least 5 payload bits each, all framed.
pub fn min_code_bits(states: u64) -> u64 {
    2 * (1 + 8 * 5 * states)
}

/// Non-halt states of `s(p, k)` when `p` has `p_states` of them and `k`
/// has `k_len` support digits.
pub fn smn_states(p_states: u64, k_len: u64) -> u64 {
    shift_for(k_len as usize) as u64 + p_states
}

/// Lower bounds on `s(r, r)` for a transform with `f_states` states.
pub fn fixed_point_bound(f_states: u64) -> (u64, u64) {
    // r holds at least the universal machine and f side by side
    let u = universal().state_count() as u64 - 1;
    let r_states = u + f_states;
    let states = smn_states(r_states, min_code_bits(r_states));
    (states, min_code_bits(states))
}

/// The sample a transform must halt on: the halter, a few small
/// numbers and the transform's own number.
fn sample(f: &Program) -> Vec<BigUint> {
    let mut v: Vec<BigUint> = (0u32..3).map(BigUint::from).collect();
    v.push(encode(&immediate_halter()));
    v.push(encode(f));
    v
}

/// A program `p` with `φ_p = φ_{f(p)}`. `f` reads a program number as its
/// binary digits and writes one the same way.
pub fn fixed_point(f: &Program, budget: &RunBudget) -> Result<BigUint, FixpointError> {
    for n in sample(f) {
        let out = run(f, &Word::finite(nat_to_bits(&n)), budget, None)?;
        if !out.verdict.is_halted() {
            return Err(FixpointError::NotTotal { number: n, verdict: out.verdict });
        }
    }
    let (min_states, min_code_bits) = fixed_point_bound(f.state_count() as u64 - 1);
    Err(FixpointError::Infeasible { min_states, min_code_bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smn::smn_program;
    use ittm_core::machine::decode;

    #[test]
    fn state_formula_matches_the_construction() {
        for q in [0u32, 5, 1000] {
            let p = decode(&BigUint::from(q));
            for k in ["|0", "1|0", "1011|0"] {
                let k: Word = k.parse().unwrap();
                let s = smn_program(&p, &k).unwrap();
                let len = k.support_len().unwrap() as u64;
                assert_eq!(s.state_count() as u64 - 1, smn_states(p.state_count() as u64 - 1, len));
            }
        }
    }

    #[test]
    fn code_bits_bound_holds() {
        let p = immediate_halter();
        assert!(nat_to_bits(&encode(&p)).len() as u64 >= min_code_bits(2));
        let u = universal();
        assert!(nat_to_bits(&encode(&u)).len() as u64 >= min_code_bits(u.state_count() as u64 - 1));
    }

    #[test]
    fn non_total_transforms_are_reported() {
        let blinker = crate::stdlib::get_stdlib("blinker").unwrap().program;
        let err = fixed_point(&blinker, &RunBudget::default()).unwrap_err();
        assert!(matches!(err, FixpointError::NotTotal { .. }), "{err}");
    }

    /// Copies the input to the output, then halts at the first limit.
    fn copy() -> Program {
        ittm_core::machine::parse_program(
            "name: copy\nstart: c\nlimit: l\nhalt: h\nc 0** -> ***, R, c\nc 1** -> **1, R, c\nl *** -> ***, R, h\n",
        )
        .unwrap()
    }

    #[test]
    fn identity_fixed_point_is_out_of_reach() {
        let id = copy();
        let x = Word::finite(nat_to_bits(&BigUint::from(45u32)));
        match run(&id, &x, &RunBudget::default(), None).unwrap().verdict {
            Verdict::Halted { output, .. } => assert_eq!(output, x),
            v => panic!("{v:?}"),
        }
        match fixed_point(&id, &RunBudget::default()) {
            Err(FixpointError::Infeasible { min_states, min_code_bits }) => {
                assert!(min_states > 1_000_000);
                assert!(min_code_bits > 80_000_000);
            }
            other => panic!("{other:?}"),
        }
    }
}
