//! One program whose running time is set by its input.
//!
//! * `1 0^(n-2) 1`: search for the second 1 and halt on it, taking `n` steps.
//! * `0 1 code`: count through the limit `lambda` written in `code`.
//! * `0 0 0^n 1 code`: move that 1 two cells left (to cell `n`), count
//!   through `code` and then walk from cell 0 to the moved 1, for `lambda + n`.
//!
//! `code` is `1^c3 0 1^c2 0 1^c1 0` for `lambda = w^3*c3 + w^2*c2 + w*c1`.
//! The counting uses the scheme of [`crate::clock`] with the digits kept as
//! marks on the scratch lane under the code's 1s. Input cell 0 is set to 1
//! in the `00` case so that limits can tell the two limit cases apart.

use ittm_core::machine::Move;
use ittm_core::{Ordinal, Program, Word};

use crate::clock::{clock_digits, ClockError};
use crate::compile::{compile, Act, Controller};

const IN: u8 = 1;
const SC: u8 = 2;
const OUT: u8 = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Case {
    /// `01`: code at cell 2
    Limit,
    /// `00`: code three cells after the moved 1
    Tail,
}

/// What the bookkeeping pass has learnt so far.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Pass {
    lim: bool,
    case: Case,
    g: bool,
    p: bool,
    /// type of the current limit, 0 at the start
    t: usize,
}

/// Per-block progress of the digit pass.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Digits {
    k: usize,
    hi_full: bool,
    hi_full_after: bool,
    blk_full: bool,
    blk_full_after: bool,
    inc: bool,
    /// cells seen in this block, capped at 2
    cells: u8,
    last: bool,
    second: bool,
    arm: bool,
    tstar: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum S {
    Start,
    Search,
    Setup1,
    SetupSeek,
    SetupL,
    SetupPut,
    SetupBack { tail: bool },
    /// at cell 0 reading the flags, also the limit state
    Cell0 { lim: bool },
    FinalSeek,
    Cell1 { pass: Pass },
    SkipToOne { pass: Pass },
    Skip { pass: Pass, left: u8 },
    Code { pass: Pass, d: Digits },
    Back { pass: Pass, seps: u8, stage: u8, arm: bool, tstar: usize },
    Bounce { g: bool },
    Clear0 { g: bool },
    Clear1,
    Run,
}

struct Length;

impl Length {
    fn digits() -> Digits {
        Digits {
            k: 3,
            hi_full: true,
            hi_full_after: true,
            blk_full: true,
            blk_full_after: true,
            inc: false,
            cells: 0,
            last: false,
            second: false,
            arm: false,
            tstar: 0,
        }
    }
}

impl Controller for Length {
    type State = S;

    fn start(&self) -> S {
        S::Start
    }

    fn limit(&self) -> S {
        S::Cell0 { lim: true }
    }

    fn step(&self, st: &S, r: u8) -> Act<S> {
        match st.clone() {
            S::Start if r & IN != 0 => Act::go(r, Move::R, S::Search),
            // temporary marker so the setup can find cell 0 again
            S::Start => Act::go(r | SC, Move::R, S::Setup1),
            S::Search if r & IN != 0 => Act::halt(r),
            S::Search => Act::go(r, Move::R, S::Search),
            S::Setup1 if r & IN != 0 => Act::go(r, Move::L, S::SetupBack { tail: false }),
            S::Setup1 => Act::go(r, Move::R, S::SetupSeek),
            S::SetupSeek if r & IN != 0 => Act::go(r & !IN, Move::L, S::SetupL),
            S::SetupSeek => Act::go(r, Move::R, S::SetupSeek),
            S::SetupL => Act::go(r, Move::L, S::SetupPut),
            S::SetupPut => Act::go(r | IN, Move::L, S::SetupBack { tail: true }),
            S::SetupBack { tail } if r & SC != 0 => {
                let r = if tail { r | IN } else { r };
                self.step(&S::Cell0 { lim: false }, r & !SC)
            }
            S::SetupBack { tail } => Act::go(r, Move::L, S::SetupBack { tail }),
            S::Cell0 { lim } => {
                let case = if r & IN != 0 { Case::Tail } else { Case::Limit };
                let (g, p) = (lim && r & SC != 0, lim && r & OUT != 0);
                if g && p {
                    return match case {
                        Case::Limit => Act::halt(r),
                        Case::Tail => Act::go(r, Move::R, S::FinalSeek),
                    };
                }
                Act::go(r, Move::R, S::Cell1 { pass: Pass { lim, case, g, p, t: if lim { 1 } else { 0 } } })
            }
            S::FinalSeek if r & IN != 0 => Act::halt(r),
            S::FinalSeek => Act::go(r, Move::R, S::FinalSeek),
            S::Cell1 { mut pass } => {
                let (f1, f2) = (r & SC != 0, r & OUT != 0);
                if pass.lim {
                    pass.t = 1 + f1 as usize + (f1 && f2) as usize;
                }
                let w = (r & IN) | if pass.lim { SC } else { 0 } | if pass.lim && f1 { OUT } else { 0 };
                let next = match pass.case {
                    Case::Limit => S::Code { pass, d: Self::digits() },
                    Case::Tail if r & IN != 0 => S::Skip { pass, left: 2 },
                    Case::Tail => S::SkipToOne { pass },
                };
                Act::go(w, Move::R, next)
            }
            S::SkipToOne { pass } if r & IN != 0 => Act::go(r, Move::R, S::Skip { pass, left: 2 }),
            S::SkipToOne { pass } => Act::go(r, Move::R, S::SkipToOne { pass }),
            S::Skip { pass, left: 1 } => Act::go(r, Move::R, S::Code { pass, d: Self::digits() }),
            S::Skip { pass, left } => Act::go(r, Move::R, S::Skip { pass, left: left - 1 }),
            S::Code { pass, mut d } => {
                if r & IN != 0 {
                    let x = r & SC != 0;
                    let y = if d.k > pass.t {
                        x
                    } else if d.k == pass.t {
                        if d.hi_full && !d.inc && !x {
                            d.inc = true;
                            true
                        } else {
                            x
                        }
                    } else {
                        false
                    };
                    d.blk_full &= x;
                    d.blk_full_after &= y;
                    d.second = d.last;
                    d.last = y;
                    d.cells = (d.cells + 1).min(2);
                    let w = if y { r | SC } else { r & !SC };
                    return Act::go(w, Move::R, S::Code { pass, d });
                }
                // a separator closes block k
                if d.cells > 0 {
                    let one_short = !d.last && (d.cells == 1 || d.second);
                    d.arm = d.hi_full_after && one_short;
                    d.tstar = d.k;
                    d.hi_full &= d.blk_full;
                    d.hi_full_after &= d.blk_full_after;
                }
                if d.k == 1 {
                    return Act::go(r, Move::L, S::Back { pass, seps: 2, stage: 0, arm: d.arm, tstar: d.tstar });
                }
                d = Digits { k: d.k - 1, blk_full: true, blk_full_after: true, inc: d.inc, cells: 0, last: false, second: false, ..d };
                Act::go(r, Move::R, S::Code { pass, d })
            }
            S::Back { pass, seps, stage, arm, tstar } => {
                let one = r & IN != 0;
                let mut next = S::Back { pass, seps, stage, arm, tstar };
                let mut home = false;
                if seps > 0 {
                    if !one {
                        next = S::Back { pass, seps: seps - 1, stage, arm, tstar };
                    }
                } else {
                    // stage counts the landmarks passed left of the code
                    match (pass.case, stage, one) {
                        (Case::Limit, _, false) => home = true,
                        (Case::Tail, 0, false) => next = S::Back { pass, seps, stage: 1, arm, tstar },
                        (Case::Tail, 1, true) => next = S::Back { pass, seps, stage: 2, arm, tstar },
                        (Case::Tail, 2, true) => home = true,
                        _ => {}
                    }
                }
                if !home {
                    return Act::go(r, Move::L, next);
                }
                let p = pass.p || arm;
                let (now, fin) = if tstar == 1 {
                    (pass.g || arm, pass.g || arm)
                } else {
                    (pass.lim && pass.t + 1 >= tstar, false)
                };
                let w = (r & IN) | if now { SC } else { 0 } | if p { OUT } else { 0 };
                Act::go(w, Move::R, S::Bounce { g: fin })
            }
            S::Bounce { g } => Act::go(r, Move::L, S::Clear0 { g }),
            S::Clear0 { g } => Act::go(if g { r | SC } else { r & !SC }, Move::R, S::Clear1),
            S::Clear1 => Act::go(r & IN, Move::R, S::Run),
            S::Run => Act::go(r, Move::R, S::Run),
        }
    }
}

/// The length machine.
pub fn length_machine() -> Program {
    compile("length_machine", &Length)
}

/// An input on which [`length_machine`] halts with clock `alpha`.
pub fn synth_length_input(alpha: &Ordinal) -> Result<Word, ClockError> {
    let c = clock_digits(alpha)?;
    if let Some(n) = alpha.as_nat() {
        if n < 2 {
            return Err(ClockError::OutOfRange(alpha.clone()));
        }
        let mut bits = vec![false; n as usize];
        bits[0] = true;
        bits[n as usize - 1] = true;
        return Ok(Word::finite(bits));
    }
    let mut code = Vec::new();
    for k in [3, 2, 1] {
        code.extend(std::iter::repeat_n(true, c[k] as usize));
        code.push(false);
    }
    let mut bits = if c[0] == 0 {
        vec![false, true]
    } else {
        let mut b = vec![false; c[0] as usize + 2];
        b.push(true);
        b
    };
    bits.extend(code);
    Ok(Word::finite(bits))
}
