use std::time::Instant;

use ittm_core::machine::encode;
use ittm_core::engine::verify_trace;
use ittm_core::{run, RunBudget, Verdict, Word};
use ittm_toolkit::stdlib::get_stdlib;
use ittm_toolkit::universal::{universal, universal_input, universal_output};

fn budget() -> RunBudget {
    RunBudget { max_steps_per_block: 20_000_000, ..RunBudget::default() }
}

#[test]
fn stdlib_fidelity() {
    let u = universal();
    for name in ["five_counter", "omega_clock", "exists_one", "blinker", "right_mover", "omega2_clock"] {
        let p = get_stdlib(name).unwrap().program;
        for x in ["|0", "1|0", "0001|0"] {
            let x: Word = x.parse().unwrap();
            let t = Instant::now();
            let direct = run(&p, &x, &budget(), None).unwrap().verdict;
            let out = run(&u, &universal_input(&encode(&p), &x), &budget(), None).unwrap();
            assert!(verify_trace(&u, &out.certificate, None).is_ok(), "{name} {x}");
            let sim = out.verdict;
            eprintln!("{name} {x} {:?}", t.elapsed());
            match (&direct, &sim) {
                (Verdict::Halted { output: a, .. }, Verdict::Halted { output: b, .. }) => {
                    assert_eq!(*a, universal_output(b), "{name} {x}")
                }
                (Verdict::NonHalting { .. }, Verdict::NonHalting { .. }) => {}
                _ => panic!("{name} {x}: {direct:?} vs {sim:?}"),
            }
        }
    }
}

mod random {
    use super::*;
    use ittm_core::machine::{Move, Program, Row};
    use ittm_core::Ordinal;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn u() -> &'static Program {
        static U: OnceLock<Program> = OnceLock::new();
        U.get_or_init(universal)
    }

    fn program(states: usize, table: &[(u8, bool, u32)]) -> Program {
        let names = (0..=states).map(|i| format!("q{i}")).collect();
        let rows = (0..=states)
            .map(|s| {
                if s == states {
                    return vec![None; 8];
                }
                (0..8)
                    .map(|p| {
                        let (w, r, n) = table[s * 8 + p];
                        let mv = if r { Move::R } else { Move::L };
                        Some(Row { write: w, mv, next: n % (states as u32 + 1) })
                    })
                    .collect()
            })
            .collect();
        Program::new("random", names, 0, 1, states as u32, None, 3, rows).unwrap()
    }

    fn random_program() -> impl Strategy<Value = Program> {
        (2usize..4).prop_flat_map(|s| {
            prop::collection::vec((0u8..8, any::<bool>(), 0u32..8), s * 8).prop_map(move |t| program(s, &t))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]
        #[test]
        fn random_fidelity(p in random_program(), x in prop::sample::select(vec!["|0", "1|0", "011|0", "|1"])) {
            let x: Word = x.parse().unwrap();
            let direct = run(&p, &x, &budget(), None).unwrap().verdict;
            let small = match &direct {
                Verdict::Halted { stage, .. } => *stage < Ordinal::omega().mul_nat(3),
                Verdict::NonHalting { .. } => true,
                Verdict::BudgetExhausted { .. } => false,
            };
            prop_assume!(small);
            let sim = run(u(), &universal_input(&encode(&p), &x), &budget(), None).unwrap().verdict;
            // a slow lasso only becomes translation invariant for the
            // simulation once the head is past the master code
            prop_assume!(!matches!(sim, Verdict::BudgetExhausted { .. }));
            match (&direct, &sim) {
                (Verdict::Halted { output: a, .. }, Verdict::Halted { output: b, .. }) => {
                    prop_assert_eq!(a, &universal_output(b))
                }
                (Verdict::NonHalting { .. }, Verdict::NonHalting { .. }) => {}
                _ => prop_assert!(false, "{} on {}: {:?} vs {:?}", p.to_source(), x, direct, sim),
            }
        }
    }
}
