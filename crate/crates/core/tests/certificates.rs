use ittm_core::engine::{run, verify_trace, RunBudget, TraceCertificate};
use ittm_core::machine::parse_program;
use ittm_core::Word;
use ittm_testkit::mutate::mutations;

const SOURCES: &[&str] = &[
    "start: s\nlimit: l\nhalt: h\ns *** -> ***, R, s\nl *** -> ***, R, h\n",
    "start: s\nlimit: l\nhalt: h\ns **0 -> **1, L, s\ns **1 -> **0, L, s\nl *** -> ***, L, s\n",
    "start: s\nlimit: l\nhalt: h\ns *** -> ***, R, s\nl *0* -> *1*, R, f\nl *1* -> ***, R, h\n\
     f *** -> ***, L, g\ng *** -> *0*, R, s\n",
    "start: a\nlimit: l\nhalt: h\na *** -> **1, R, b\nb *** -> ***, R, c\nc *** -> ***, R, h\nl *** -> ***, R, h\n",
];

#[test]
fn every_single_field_corruption_is_rejected() {
    let mut total = 0;
    for src in SOURCES {
        let p = parse_program(src).unwrap();
        let out = run(&p, &Word::zero(), &RunBudget::default(), None).unwrap();
        let cert = &out.certificate;
        assert_eq!(verify_trace(&p, cert, None), Ok(()));
        assert_eq!(&TraceCertificate::parse(&cert.to_text()).unwrap(), cert);
        for (label, bad) in mutations(cert) {
            total += 1;
            assert!(verify_trace(&p, &bad, None).is_err(), "accepted mutation `{label}`\n{}", bad.to_text());
        }
    }
    assert!(total >= 50, "only {total} mutations");
}

#[test]
fn malformed_text_is_reported_with_a_line() {
    let err = TraceCertificate::parse("PROGRAM 5\nINPUT |0\nSTAGE w LIMIT x\n").unwrap_err();
    assert_eq!(err.line, 3);
    assert!(TraceCertificate::parse("PROGRAM 5\nINPUT |0\n").is_err());
}
