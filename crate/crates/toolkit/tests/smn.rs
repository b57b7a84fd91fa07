use ittm_core::machine::{decode, encode, Program};
use ittm_core::{run, RunBudget, Verdict, Word};
use ittm_toolkit::smn::{combine_program, frame_arg, pair_input, smn, smn_program, Combine};
use ittm_toolkit::stdlib::get_stdlib;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn output(p: &Program, input: &Word) -> Word {
    match run(p, input, &RunBudget::default(), None).unwrap().verdict {
        Verdict::Halted { output, .. } => output,
        v => panic!("{}: {v:?}", p.name),
    }
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

#[test]
fn combiners_on_pairs() {
    let cases = [("|0", "|0"), ("1|0", "|0"), ("|0", "011|0"), ("1101|0", "01|0")];
    for (a, b) in cases {
        let (a, b) = (w(a), w(b));
        let input = pair_input(&a, &b).unwrap();
        assert_eq!(output(&combine_program(Combine::First), &input), a);
        assert_eq!(output(&combine_program(Combine::Second), &input), b);
        assert_eq!(output(&combine_program(Combine::Or), &input), a.or(&b));
    }
}

#[test]
fn fixed_projection_ignores_x() {
    let p = encode(&combine_program(Combine::First));
    let s = decode(&smn(&p, &w("1|0")).unwrap());
    for x in ["|0", "1|0", "0110|0"] {
        assert_eq!(output(&s, &frame_arg(&w(x)).unwrap()), w("1|0"));
    }
}

#[test]
fn deterministic() {
    let p = encode(&combine_program(Combine::Or));
    assert_eq!(smn(&p, &w("101|0")).unwrap(), smn(&p, &w("101|0")).unwrap());
    assert!(smn(&p, &Word::ones()).is_err());
}

#[test]
fn halting_behaviour_is_kept() {
    // a program that ignores its input keeps its verdict
    for name in ["five_counter", "blinker", "omega_clock"] {
        let p = get_stdlib(name).unwrap().program;
        let s = smn_program(&p, &w("11|0")).unwrap();
        let direct = run(&p, &pair_input(&w("11|0"), &w("01|0")).unwrap(), &RunBudget::default(), None).unwrap();
        let fixed = run(&s, &frame_arg(&w("01|0")).unwrap(), &RunBudget::default(), None).unwrap();
        assert_eq!(direct.verdict.is_halted(), fixed.verdict.is_halted(), "{name}");
        if let (Verdict::Halted { output: a, .. }, Verdict::Halted { output: b, .. }) = (direct.verdict, fixed.verdict) {
            assert_eq!(a, b, "{name}");
        }
    }
}

fn finite_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(any::<bool>(), 0..7).prop_map(Word::finite)
}

#[test]
fn law_on_fifty_triples() {
    let mut runner = TestRunner::new(Config { cases: 50, ..Config::default() });
    let strat = (prop_oneof![Just(Combine::First), Just(Combine::Second), Just(Combine::Or)], finite_word(), finite_word());
    runner
        .run(&strat, |(c, k, x)| {
            let p = combine_program(c);
            let s = decode(&smn(&encode(&p), &k).unwrap());
            let expect = match c {
                Combine::First => k.clone(),
                Combine::Second => x.clone(),
                Combine::Or => k.or(&x),
            };
            prop_assert_eq!(output(&p, &pair_input(&k, &x).unwrap()), expect.clone());
            prop_assert_eq!(output(&s, &frame_arg(&x).unwrap()), expect);
            Ok(())
        })
        .unwrap();
}
