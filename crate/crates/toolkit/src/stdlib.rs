//! The standard library of named machines.
//!
//! Sources live in `stdlib/*.itm`; `stdlib/MANIFEST` lists each entry's
//! expected verdict on the all-zero input. Entries built by the toolkit's
//! constructions are shipped as generated source and checked against the
//! generator by the test suite.

use ittm_core::machine::{parse_program, AsmError};
use ittm_core::{Ordinal, Program, Word};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Halted { clock: Ordinal, output: Word },
    NonHalting { from: Ordinal, to: Ordinal },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StdlibEntry {
    pub name: &'static str,
    pub program: Program,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StdlibError {
    #[error("no stdlib entry named `{0}`")]
    Unknown(String),
    #[error("stdlib source `{0}` does not assemble: {1}")]
    Source(&'static str, AsmError),
    #[error("manifest line {0} is malformed")]
    Manifest(usize),
}

const SOURCES: &[(&str, &str)] = &[
    ("omega_clock", include_str!("../stdlib/omega_clock.itm")),
    ("omega2_clock", include_str!("../stdlib/omega2_clock.itm")),
    ("omega3_clock", include_str!("../stdlib/omega3_clock.itm")),
    ("five_counter", include_str!("../stdlib/five_counter.itm")),
    ("blinker", include_str!("../stdlib/blinker.itm")),
    ("right_mover", include_str!("../stdlib/right_mover.itm")),
    ("exists_one", include_str!("../stdlib/exists_one.itm")),
    ("count_through", include_str!("../stdlib/count_through.itm")),
    ("length_machine", include_str!("../stdlib/length_machine.itm")),
    ("universal", include_str!("../stdlib/universal.itm")),
];

pub const MANIFEST: &str = include_str!("../stdlib/MANIFEST");

/// Entry names in manifest order.
pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

/// The machine-language source of an entry.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

fn expected(name: &str) -> Result<Expected, StdlibError> {
    for (i, line) in MANIFEST.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&name) {
            continue;
        }
        let bad = || StdlibError::Manifest(i + 1);
        let ord = |s: &str| s.parse::<Ordinal>().map_err(|_| bad());
        return match toks.as_slice() {
            [_, "halted", c, w] => Ok(Expected::Halted { clock: ord(c)?, output: w.parse().map_err(|_| bad())? }),
            [_, "nonhalting", a, b] => Ok(Expected::NonHalting { from: ord(a)?, to: ord(b)? }),
            _ => Err(bad()),
        };
    }
    Err(StdlibError::Unknown(name.to_string()))
}

pub fn get_stdlib(name: &str) -> Result<StdlibEntry, StdlibError> {
    let (name, src) = SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| StdlibError::Unknown(name.to_string()))?;
    let program = parse_program(src).map_err(|e| StdlibError::Source(name, e))?;
    Ok(StdlibEntry { name, program, expected: expected(name)? })
}

/// Entries whose source is produced by a toolkit construction, with the
/// generator.
pub fn generated() -> Vec<(&'static str, fn() -> Program)> {
    vec![
        ("count_through", crate::count::count_through as fn() -> Program),
        ("length_machine", crate::length::length_machine),
        ("universal", crate::universal::universal),
    ]
}
