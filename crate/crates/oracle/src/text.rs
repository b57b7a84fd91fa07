use num_bigint::BigUint;
use thiserror::Error;

use ittm_core::word::WordError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("malformed line {0:?}")]
    Bad(String),
    #[error("bad word {0:?}: {1}")]
    Word(String, WordError),
    #[error("row width does not match the header")]
    Width,
}

/// The rest of the next line if it starts with `tag`.
pub(crate) fn field<'a>(lines: &mut impl Iterator<Item = &'a str>, tag: &'static str) -> Result<&'a str, ParseError> {
    let line = lines.next().ok_or(ParseError::Missing(tag))?;
    match line.split_once(' ') {
        Some((t, rest)) if t == tag => Ok(rest.trim()),
        None if line == tag => Ok(""),
        _ => Err(ParseError::Bad(line.to_string())),
    }
}

pub(crate) fn numbers(s: &str) -> Result<Vec<BigUint>, ParseError> {
    s.split_whitespace()
        .map(|n| n.parse().map_err(|_| ParseError::Bad(n.to_string())))
        .collect()
}

pub(crate) fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub(crate) fn bits(s: &str) -> Result<Vec<bool>, ParseError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(ParseError::Bad(s.to_string())),
        })
        .collect()
}

pub(crate) fn bit_string(b: &[bool]) -> String {
    b.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
