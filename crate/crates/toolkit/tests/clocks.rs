use ittm_core::engine::{run, verify_trace};
use ittm_core::{Ordinal, RunBudget, Verdict, Word};
use ittm_testkit::ord::Cnf;
use ittm_toolkit::clock::synth_clock;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn synthesized_clocks_measure_their_ordinal(c0 in 0u64..=3, c1 in 0u64..=3, c2 in 0u64..=3) {
        prop_assume!(c0 + c1 + c2 > 0);
        let alpha = Cnf(vec![c0, c1, c2]).to_ordinal();
        let p = synth_clock(&alpha).unwrap();
        let out = run(&p, &Word::zero(), &RunBudget::default(), None).unwrap();
        match &out.verdict {
            Verdict::Halted { paper_clock, stage, .. } => {
                prop_assert_eq!(paper_clock, &alpha);
                let expect_stage = if alpha.is_finite() { alpha.clone() } else { alpha.succ() };
                prop_assert_eq!(stage, &expect_stage);
            }
            other => prop_assert!(false, "{:?}", other),
        }
        prop_assert_eq!(verify_trace(&p, &out.certificate, None), Ok(()));
    }
}

#[test]
fn cubic_clocks() {
    for c3 in 1..=2u64 {
        let alpha = Cnf(vec![1, 0, 2, c3]).to_ordinal();
        let p = synth_clock(&alpha).unwrap();
        let out = run(&p, &Word::zero(), &RunBudget::default(), None).unwrap();
        assert!(matches!(&out.verdict, Verdict::Halted { paper_clock, .. } if *paper_clock == alpha));
        assert_eq!(verify_trace(&p, &out.certificate, None), Ok(()));
    }
    assert_eq!(Ordinal::omega_pow_nat(3), Cnf(vec![0, 0, 0, 1]).to_ordinal());
}
