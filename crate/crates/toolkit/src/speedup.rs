//! Removing a finite tail from a clock.
//!
//! If `p` clocks `lambda + m` then from the limit `lambda` on, `p` only looks
//! at cells `0..=m`, so the window `a` of those cells at `lambda` determines
//! the halt, and `lambda` is the first limit where the window reads `a`.
//! The new machine simulates `p` with simulated cell `j` at real cell
//! `2j + 2`. After every simulated step inside the window it recomputes
//! three flags at real cell 0:
//!
//! * `M` (input lane): some cell that `a` says is 0 holds a 1,
//! * `P` (output lane): every cell that `a` says is 1 holds a 1,
//! * `G` (scratch lane): flashed whenever each 1-cell of `a` has been seen
//!   holding 1 since the previous flash, with the seen bits kept on the odd
//!   cells `2j + 1`.
//!
//! At a limit the window equals `a` exactly when `M` reads 0 and one of `G`,
//! `P` reads 1, and that is decided from cell 0 alone. A marker at real cell
//! `2N + 1` tells the simulation when a left move re-enters the window.

use ittm_core::engine::{run, Record, TraceCertificate};
use ittm_core::machine::{Move, StateId};
use ittm_core::{Ordinal, Program, RunBudget, Verdict, Word};
use thiserror::Error;

use crate::compile::{compile, Act, Controller};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpeedupError {
    #[error("the program does not halt on the zero input within the budget")]
    NotClockable,
    #[error("the program clocks {0}, which has no limit part")]
    Finite(Ordinal),
    #[error("the program clocks {clock}, whose finite tail is shorter than {n}")]
    TailTooShort { clock: Ordinal, n: u64 },
    #[error("relativized programs are not supported")]
    Relativized,
    #[error(transparent)]
    Engine(#[from] ittm_core::engine::EngineError),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum S {
    Init { lim: bool },
    Chain(u64),
    Sim { q: StateId, j: usize },
    Far { q: StateId },
    FarR { q: StateId },
    FarL { q: StateId },
    ToZero { q: StateId, j: usize, pos: usize },
    Right { q: StateId, j: usize, pos: usize, s: u8, all: bool, fresh: bool },
    Left { q: StateId, j: usize, pos: usize, v: u8, all: bool, m: bool, p: bool, fresh: bool },
    Bounce { q: StateId, j: usize },
    Clear { q: StateId, j: usize },
    Return { q: StateId, j: usize, pos: usize },
}

struct Speed<'a> {
    p: &'a Program,
    /// the window at the final limit, one pattern per cell
    a: Vec<u8>,
    tail: u64,
}

const M_BIT: u8 = 1;
const G_BIT: u8 = 2;
const P_BIT: u8 = 4;

impl Speed<'_> {
    fn n(&self) -> usize {
        self.a.len()
    }

    fn pass(&self, q: StateId, j: usize, fresh: bool) -> S {
        S::Right { q, j, pos: 1, s: 0, all: true, fresh }
    }

    /// Where the head goes after a pass, and the state it arrives in.
    fn arrive(&self, q: StateId, j: usize) -> (usize, S) {
        if j < self.n() {
            (2 * j + 2, S::Sim { q, j })
        } else {
            (2 * self.n() + 2, S::Far { q })
        }
    }
}

impl Controller for Speed<'_> {
    type State = S;

    fn start(&self) -> S {
        S::Init { lim: false }
    }

    fn limit(&self) -> S {
        S::Init { lim: true }
    }

    fn step(&self, st: &S, r: u8) -> Act<S> {
        let n = self.n();
        let halt = self.p.halt();
        match *st {
            S::Init { lim } => {
                let (m, g, p) = (r & M_BIT != 0, r & G_BIT != 0, r & P_BIT != 0);
                if lim && !m && (g || p) {
                    return match self.tail {
                        0 => Act::halt(r),
                        k => Act::go(r, Move::R, S::Chain(k - 1)),
                    };
                }
                let q = if lim { self.p.limit() } else { self.p.start() };
                Act::go(r, Move::R, self.pass(q, 0, true))
            }
            S::Chain(0) => Act::halt(r),
            S::Chain(k) => Act::go(r, Move::R, S::Chain(k - 1)),
            S::Sim { q, j } => {
                let row = self.p.row(q, r).expect("simulation never reaches the halt state");
                if row.next == halt {
                    return Act::halt(r);
                }
                let j2 = match row.mv {
                    Move::L => j.saturating_sub(1),
                    Move::R => j + 1,
                };
                Act::go(row.write, Move::L, S::ToZero { q: row.next, j: j2, pos: 2 * j + 1 })
            }
            S::Far { q } => {
                let row = self.p.row(q, r).expect("simulation never reaches the halt state");
                if row.next == halt {
                    return Act::halt(r);
                }
                match row.mv {
                    Move::R => Act::go(row.write, Move::R, S::FarR { q: row.next }),
                    Move::L => Act::go(row.write, Move::L, S::FarL { q: row.next }),
                }
            }
            S::FarR { q } => Act::go(r, Move::R, S::Far { q }),
            S::FarL { q } => {
                if r & 1 == 1 {
                    Act::go(r, Move::L, S::Sim { q, j: n - 1 })
                } else {
                    Act::go(r, Move::L, S::Far { q })
                }
            }
            S::ToZero { q, j, pos: 0 } => Act::go(r, Move::R, self.pass(q, j, false)),
            S::ToZero { q, j, pos } => Act::go(r, Move::L, S::ToZero { q, j, pos: pos - 1 }),
            S::Right { q, j, pos, s, all, fresh } => {
                if pos == 2 * n + 1 {
                    let left = S::Left { q, j, pos: 2 * n, v: 0, all, m: false, p: true, fresh };
                    return Act::go(r | 1, Move::L, left);
                }
                let i = (pos - 1) / 2;
                let a = self.a[i];
                if pos % 2 == 1 {
                    let s = if fresh { 0 } else { r & a };
                    Act::go(r, Move::R, S::Right { q, j, pos: pos + 1, s, all, fresh })
                } else {
                    let all = all && (s | r) & a == a;
                    Act::go(r, Move::R, S::Right { q, j, pos: pos + 1, s: 0, all, fresh })
                }
            }
            S::Left { q, j, pos: 0, all, m, p, .. } => {
                let w = ((m as u8) * M_BIT) | ((all as u8) * G_BIT) | ((p as u8) * P_BIT);
                Act::go(w, Move::R, S::Bounce { q, j })
            }
            S::Left { q, j, pos, v, all, m, p, fresh } => {
                let i = (pos - 1) / 2;
                let a = self.a[i];
                if pos % 2 == 0 {
                    let m = m || r & !a & 7 != 0;
                    let p = p && r & a == a;
                    Act::go(r, Move::L, S::Left { q, j, pos: pos - 1, v: r & a, all, m, p, fresh })
                } else {
                    let old = if fresh { 0 } else { r & a };
                    let w = if all { 0 } else { (old | v) & a };
                    Act::go(w, Move::L, S::Left { q, j, pos: pos - 1, v: 0, all, m, p, fresh })
                }
            }
            S::Bounce { q, j } => Act::go(r, Move::L, S::Clear { q, j }),
            S::Clear { q, j } => Act::go(r & !G_BIT, Move::R, S::Return { q, j, pos: 1 }),
            S::Return { q, j, pos } => {
                let (target, there) = self.arrive(q, j);
                let next = if pos + 1 == target { there } else { S::Return { q, j, pos: pos + 1 } };
                Act::go(r, Move::R, next)
            }
        }
    }
}

/// Clock value, final limit and the configuration there, from a run.
fn final_limit(cert: &TraceCertificate) -> Option<(Ordinal, Vec<Word>)> {
    let Verdict::Halted { paper_clock, .. } = &cert.verdict else {
        return None;
    };
    match cert.records.last()? {
        Record::Seg { start, .. } => Some((paper_clock.clone(), start.tapes.clone())),
        Record::Limit { .. } => None,
    }
}

/// A program clocking `measure_clock(p)` minus `n` for a program `p` that
/// clocks `lambda + m` with `lambda` a limit and `n <= m`.
pub fn speedup(p: &Program, n: u64, budget: &RunBudget) -> Result<Program, SpeedupError> {
    if p.tapes() != 3 {
        return Err(SpeedupError::Relativized);
    }
    let out = run(p, &Word::zero(), budget, None)?;
    let (clock, tapes) = final_limit(&out.certificate).ok_or(SpeedupError::NotClockable)?;
    if clock.is_finite() {
        return Err(SpeedupError::Finite(clock));
    }
    let m = clock.finite_part();
    if n > m {
        return Err(SpeedupError::TailTooShort { clock, n });
    }
    let a = (0..=m as usize)
        .map(|i| (0..3).map(|t| (tapes[t].read(i) as u8) << t).sum())
        .collect();
    let s = Speed { p, a, tail: m - n };
    Ok(compile(&format!("{}_minus_{n}", p.name), &s))
}
