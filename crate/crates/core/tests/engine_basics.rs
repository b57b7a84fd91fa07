use ittm_core::engine::{measure_clock, run, verify_trace, RunBudget, Verdict};
use ittm_core::machine::parse_program;
use ittm_core::{Ordinal, Word};

const OMEGA: &str = "name: omega_clock\nstart: s\nlimit: l\nhalt: h\ns *** -> ***, R, s\nl *** -> ***, R, h\n";

const OMEGA2: &str = "name: omega2_clock\nstart: s\nlimit: l\nhalt: h\n\
    s *** -> ***, R, s\n\
    l *0* -> *1*, R, f\n\
    l *1* -> ***, R, h\n\
    f *** -> ***, L, g\n\
    g *** -> *0*, R, s\n";

const OMEGA3: &str = "name: omega3_clock\nstart: s\nlimit: l\nhalt: h\n\
    s *** -> ***, R, s\n\
    l *00 -> *10, R, f\n\
    l *10 -> *01, R, f2\n\
    l *11 -> ***, R, h\n\
    l *01 -> ***, R, h\n\
    f *** -> ***, L, g\n\
    g *** -> *0*, R, s\n\
    f2 *** -> ***, L, g2\n\
    g2 *** -> **0, R, s\n";

const BLINKER: &str = "name: blinker\nstart: s\nlimit: l\nhalt: h\n\
    s **0 -> **1, L, s\n\
    s **1 -> **0, L, s\n\
    l *** -> ***, L, s\n";

const RIGHT: &str = "name: right_mover\nstart: s\nlimit: l\nhalt: h\ns *** -> ***, R, s\nl *** -> ***, R, s\n";

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

#[test]
fn clocks() {
    let b = RunBudget::default();
    for (src, want) in [(OMEGA, "w"), (OMEGA2, "w^2"), (OMEGA3, "w^3")] {
        let p = parse_program(src).unwrap();
        assert_eq!(measure_clock(&p, &b).unwrap(), o(want), "{}", p.name);
        let out = run(&p, &Word::zero(), &b, None).unwrap();
        verify_trace(&p, &out.certificate, None).unwrap();
    }
}

#[test]
fn blinker_and_right_mover_repeat() {
    let b = RunBudget::default();
    for src in [BLINKER, RIGHT] {
        let p = parse_program(src).unwrap();
        let out = run(&p, &Word::zero(), &b, None).unwrap();
        assert_eq!(
            out.verdict,
            Verdict::NonHalting { repeat_from: o("w"), repeat_to: o("w*2") },
            "{}",
            p.name
        );
        verify_trace(&p, &out.certificate, None).unwrap();
        println!("{}", out.certificate.to_text());
    }
}
