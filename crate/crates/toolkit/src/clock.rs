//! Clocks for ordinals in Cantor normal form below `w^4`.
//!
//! For `alpha = lambda + c0` with `lambda` a limit, the machine keeps the
//! CNF digits of the current limit stage on the output tape (one unary
//! block per exponent, highest first) and a flag per exponent on the
//! scratch tape. Flag `k` is flashed after every limit of type at least `k`
//! (the type of a limit is the exponent of its last CNF term), so at a limit
//! it reads 1 exactly when the type exceeds `k`. Cell 0 holds a pending bit
//! `P` and a gate bit `G`. Once the digits say that `lambda` is the next
//! limit of its type, `P` is set and `G` is made to read 1 at that limit, so
//! the limit row itself can decide to stop by looking at cell 0 alone.

use ittm_core::machine::Move;
use ittm_core::{Ordinal, Program};
use thiserror::Error;

use crate::compile::{bit, compile, with_bit, Act, Controller};

const SC: usize = 1;
const OUT: usize = 2;

/// Highest exponent the clocks handle; the engine certifies up to `w^4`.
pub const MAX_EXP: u64 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClockError {
    #[error("zero is not a clock value")]
    Zero,
    #[error("{0} is outside the supported range (below w^4)")]
    OutOfRange(Ordinal),
}

/// Checks `0 < alpha < w^4` and returns the digits `c[0..=3]`.
pub fn clock_digits(alpha: &Ordinal) -> Result<[u64; 4], ClockError> {
    if alpha.is_zero() {
        return Err(ClockError::Zero);
    }
    if !alpha.below_omega_omega() || alpha.leading_exp() > Ordinal::nat(MAX_EXP) {
        return Err(ClockError::OutOfRange(alpha.clone()));
    }
    Ok([0, 1, 2, 3].map(|k| alpha.coeff_of_pow(k)))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum St {
    /// `r` more non-halting steps before the halting one
    Chain(u64),
    Idle,
    Flags { lim: bool, pos: usize, g: bool, p: bool, chain: bool, t: usize },
    Digits { lim: bool, g: bool, p: bool, t: usize, k: usize, i: usize, hi_full: bool, inc: bool, arm: bool },
    Back { pos: usize, lim: bool, g: bool, p: bool, t: usize, arm: bool },
    Bounce { g: bool, p: bool },
    Clear0 { g: bool, p: bool },
    Clear(usize),
    Run,
}

struct Nest {
    c: [u64; 4],
    /// highest exponent with a nonzero digit
    d: usize,
    /// lowest positive exponent with a nonzero digit: the type of the final limit
    tstar: usize,
}

impl Nest {
    fn last_cell(&self) -> usize {
        self.d - 1 + (1..=self.d).map(|k| self.c[k] as usize).sum::<usize>()
    }

    /// Next digit position after `(k, i)`, skipping empty blocks.
    fn next_digit(&self, k: usize, i: usize) -> Option<(usize, usize)> {
        if i + 1 < self.c[k] as usize {
            return Some((k, i + 1));
        }
        (1..k).rev().find(|&j| self.c[j] > 0).map(|j| (j, 0))
    }

    fn first_digit(&self) -> (usize, usize) {
        (self.d, 0)
    }

    fn after_flags(&self, lim: bool, g: bool, p: bool, t: usize) -> St {
        let (k, i) = self.first_digit();
        St::Digits { lim, g, p, t, k, i, hi_full: true, inc: false, arm: true }
    }
}

impl Controller for Nest {
    type State = St;

    fn start(&self) -> St {
        St::Flags { lim: false, pos: 0, g: false, p: false, chain: false, t: 0 }
    }

    fn limit(&self) -> St {
        St::Flags { lim: true, pos: 0, g: false, p: false, chain: true, t: 1 }
    }

    fn step(&self, s: &St, read: u8) -> Act<St> {
        match s.clone() {
            St::Chain(0) | St::Idle => Act::halt(read),
            St::Chain(r) => Act::go(read, Move::R, St::Chain(r - 1)),
            St::Flags { lim, pos: 0, chain, t, .. } => {
                let (g, p) = (bit(read, SC), bit(read, OUT));
                if lim && g && p {
                    return match self.c[0] {
                        0 => Act::halt(read),
                        c0 => Act::go(read, Move::R, St::Chain(c0 - 1)),
                    };
                }
                let next = if self.d > 1 {
                    St::Flags { lim, pos: 1, g, p, chain, t }
                } else {
                    self.after_flags(lim, g, p, t)
                };
                Act::go(read, Move::R, next)
            }
            St::Flags { lim, pos, g, p, chain, t } => {
                let f = bit(read, SC);
                let write = with_bit(read, SC, chain);
                let (chain, t) = if chain && f { (true, t + 1) } else { (false, t) };
                let next = if pos + 1 < self.d {
                    St::Flags { lim, pos: pos + 1, g, p, chain, t }
                } else {
                    self.after_flags(lim, g, p, t)
                };
                Act::go(write, Move::R, next)
            }
            St::Digits { lim, g, p, t, k, i, mut hi_full, mut inc, mut arm } => {
                let x = bit(read, OUT);
                let y = if k > t {
                    x
                } else if k == t {
                    if hi_full && !inc && !x {
                        inc = true;
                        true
                    } else {
                        x
                    }
                } else {
                    false
                };
                let len = self.c[k] as usize;
                let last = i + 1 == len;
                if k > t && last {
                    hi_full &= x;
                }
                if k > self.tstar && last {
                    arm &= y;
                }
                if k == self.tstar && ((i + 2 == len && !y) || (last && y)) {
                    arm = false;
                }
                let next = match self.next_digit(k, i) {
                    Some((k, i)) => St::Digits { lim, g, p, t, k, i, hi_full, inc, arm },
                    None => St::Back { pos: self.last_cell() + 1, lim, g, p, t, arm },
                };
                Act::go(with_bit(read, OUT, y), Move::R, next)
            }
            St::Back { pos, lim, g, p, t, arm } if pos > 0 => {
                Act::go(read, Move::L, St::Back { pos: pos - 1, lim, g, p, t, arm })
            }
            St::Back { lim, g, p, t, arm, .. } => {
                let p = p || arm;
                let (now, fin) = if self.tstar == 1 {
                    (g || arm, g || arm)
                } else {
                    (lim && t + 1 >= self.tstar, false)
                };
                let w = with_bit(with_bit(read, SC, now), OUT, p);
                Act::go(w, Move::R, St::Bounce { g: fin, p })
            }
            St::Bounce { g, p } => Act::go(read, Move::L, St::Clear0 { g, p }),
            St::Clear0 { g, p } => {
                let w = with_bit(with_bit(read, SC, g), OUT, p);
                let next = if self.d > 1 { St::Clear(1) } else { St::Run };
                Act::go(w, Move::R, next)
            }
            St::Clear(pos) => {
                let next = if pos + 1 < self.d { St::Clear(pos + 1) } else { St::Run };
                Act::go(with_bit(read, SC, false), Move::R, next)
            }
            St::Run => Act::go(read, Move::R, St::Run),
        }
    }
}

struct Finite(u64);

impl Controller for Finite {
    type State = St;
    fn start(&self) -> St {
        St::Chain(self.0 - 1)
    }
    fn limit(&self) -> St {
        St::Idle
    }
    fn step(&self, s: &St, read: u8) -> Act<St> {
        match s {
            St::Chain(0) | St::Idle => Act::halt(read),
            St::Chain(r) => Act::go(read, Move::R, St::Chain(r - 1)),
            _ => unreachable!(),
        }
    }
}

/// A program whose clock on the zero input is `alpha`.
pub fn synth_clock(alpha: &Ordinal) -> Result<Program, ClockError> {
    let c = clock_digits(alpha)?;
    let name = format!("clock_{}", sanitize_ordinal(alpha));
    if let Some(n) = alpha.as_nat() {
        return Ok(compile(&name, &Finite(n)));
    }
    let d = (1..=3).rev().find(|&k| c[k] > 0).unwrap();
    let tstar = (1..=3).find(|&k| c[k] > 0).unwrap();
    Ok(compile(&name, &Nest { c, d, tstar }))
}

pub(crate) fn sanitize_ordinal(a: &Ordinal) -> String {
    a.to_string()
        .chars()
        .map(|ch| match ch {
            '^' => 'e',
            '*' => 'x',
            '+' => 'p',
            c if c.is_ascii_alphanumeric() => c,
            _ => '_',
        })
        .collect()
}
