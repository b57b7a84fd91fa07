//! Running two programs side by side to see which halts first.
//!
//! Index `i` of both simulations lives in real cells `4i..4i+4`:
//!
//! ```text
//! 4i    p.in  p.sc        4i+2  q.in  q.sc
//! 4i+1  p.out p.mark      4i+3  q.out q.mark
//! ```
//!
//! on the input and scratch lanes. The output lane is 0 except for left-end
//! markers at real cells 1 and 3, and the result at real cell 0 when done.
//! Each round steps `q` then `p`, so the simulated stages stay in lockstep
//! and simulated limits fall on real limits. At a limit the marks hold
//! garbage; the true mark of a simulation is its leftmost one, and a head
//! moving right past the other one clears the other's garbage it walks
//! onto, so the other head is always the first mark found from here.

use std::cmp::Ordering;

use ittm_core::machine::{Move, StateId};
use ittm_core::Program;

use crate::compile::{compile, Act, Controller};

const IN: u8 = 1;
const SC: u8 = 2;
const OUT: u8 = 4;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Who {
    P,
    Q,
}

impl Who {
    fn base(self) -> usize {
        match self {
            Who::P => 0,
            Who::Q => 2,
        }
    }
    fn other(self) -> Who {
        match self {
            Who::P => Who::Q,
            Who::Q => Who::P,
        }
    }
}

/// Simulated states and the head order `p` versus `q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Sims {
    sp: StateId,
    sq: StateId,
    ord: Ordering,
}

impl Sims {
    fn state(&self, x: Who) -> StateId {
        match x {
            Who::P => self.sp,
            Who::Q => self.sq,
        }
    }
    fn with_state(mut self, x: Who, s: StateId) -> Sims {
        match x {
            Who::P => self.sp = s,
            Who::Q => self.sq = s,
        }
        self
    }
    /// Order of `x`'s head against the other head.
    fn ord_of(&self, x: Who) -> Ordering {
        match x {
            Who::P => self.ord,
            Who::Q => self.ord.reverse(),
        }
    }
    fn with_ord_of(mut self, x: Who, o: Ordering) -> Sims {
        self.ord = match x {
            Who::P => o,
            Who::Q => o.reverse(),
        };
        self
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum S {
    Init { lim: bool, pos: usize },
    Read0 { x: Who, sims: Sims },
    Read1 { x: Who, sims: Sims, lo: u8 },
    Write0 { x: Who, sims: Sims, lo: u8, mv: Move, at0: bool },
    /// walking `left` more cells towards the new mark cell of `x`
    Walk { x: Who, sims: Sims, mv: Move, left: usize },
    SetMark { x: Who, sims: Sims, mv: Move },
    Check { x: Who, sims: Sims, mv: Move, left: usize },
    Seek { y: Who, sims: Sims, mv: Move, phase: usize },
    Finish { res: bool, phase: usize },
    /// clearing the marker at real cell 3 on the way back from real cell 1
    Tidy { res: bool, pos: usize },
    Final { res: bool },
}

struct Race<'a> {
    p: &'a Program,
    q: &'a Program,
}

impl Race<'_> {
    fn prog(&self, x: Who) -> &Program {
        match x {
            Who::P => self.p,
            Who::Q => self.q,
        }
    }

    fn seek_after(&self, y: Who, sims: Sims, x_ord: Ordering, phase: usize) -> S {
        let mv = match x_ord {
            Ordering::Greater => Move::L,
            Ordering::Less => Move::R,
            Ordering::Equal if y == Who::Q => Move::R,
            Ordering::Equal => Move::L,
        };
        S::Seek { y, sims, mv, phase }
    }
}

fn step_pos(phase: usize, mv: Move) -> usize {
    match mv {
        Move::R => (phase + 1) % 4,
        Move::L => (phase + 3) % 4,
    }
}

impl Controller for Race<'_> {
    type State = S;

    fn start(&self) -> S {
        S::Init { lim: false, pos: 0 }
    }

    fn limit(&self) -> S {
        S::Init { lim: true, pos: 0 }
    }

    fn step(&self, st: &S, r: u8) -> Act<S> {
        match *st {
            S::Init { lim, pos } => match pos {
                0 | 2 => Act::go(r, Move::R, S::Init { lim, pos: pos + 1 }),
                1 => Act::go(r | OUT | SC, Move::R, S::Init { lim, pos: 2 }),
                _ => {
                    let (sp, sq) = if lim {
                        (self.p.limit(), self.q.limit())
                    } else {
                        (self.p.start(), self.q.start())
                    };
                    let sims = Sims { sp, sq, ord: Ordering::Equal };
                    Act::go(r | OUT | SC, Move::L, S::Read0 { x: Who::Q, sims })
                }
            },
            S::Read0 { x, sims } => Act::go(r, Move::R, S::Read1 { x, sims, lo: r & (IN | SC) }),
            S::Read1 { x, sims, lo } => {
                let pattern = lo | (r & IN) << 2;
                let at0 = r & OUT != 0;
                let prog = self.prog(x);
                let row = prog.row(sims.state(x), pattern).expect("simulated state is live");
                if row.next == prog.halt() {
                    return self.step(&S::Finish { res: x == Who::P, phase: x.base() + 1 }, r);
                }
                let keep_mark = row.mv == Move::L && at0;
                let w = (r & OUT) | ((row.write >> 2 & 1) * IN) | if keep_mark { SC } else { 0 };
                let sims = sims.with_state(x, row.next);
                Act::go(w, Move::L, S::Write0 { x, sims, lo: row.write & (IN | SC), mv: row.mv, at0 })
            }
            S::Write0 { x, sims, lo, mv, at0 } => {
                let w = (r & OUT) | lo;
                match (mv, at0) {
                    (Move::L, true) => {
                        let seek = self.seek_after(x.other(), sims, sims.ord_of(x), x.base());
                        self.step(&seek, w)
                    }
                    (Move::R, _) => Act::go(w, Move::R, S::Walk { x, sims, mv, left: 4 }),
                    (Move::L, _) => Act::go(w, Move::L, S::Walk { x, sims, mv, left: 2 }),
                }
            }
            S::Walk { x, sims, mv, left: 0 } => self.step(&S::SetMark { x, sims, mv }, r),
            S::Walk { x, sims, mv, left } => Act::go(r, mv, S::Walk { x, sims, mv, left: left - 1 }),
            S::SetMark { x, sims, mv } => {
                // the other mark cell of the same index is two cells away
                let dir = if x == Who::P { Move::R } else { Move::L };
                Act::go(r | SC, dir, S::Check { x, sims, mv, left: 1 })
            }
            S::Check { x, sims, mv, left: 1 } => {
                let dir = if x == Who::P { Move::R } else { Move::L };
                Act::go(r, dir, S::Check { x, sims, mv, left: 0 })
            }
            S::Check { x, sims, mv, .. } => {
                let marked = r & SC != 0;
                let before = sims.ord_of(x);
                let (after, w) = match (mv, before) {
                    (Move::R, Ordering::Less) => (if marked { Ordering::Equal } else { Ordering::Less }, r),
                    (Move::R, _) => (Ordering::Greater, r & !SC),
                    (Move::L, Ordering::Greater) => (if marked { Ordering::Equal } else { Ordering::Greater }, r),
                    (Move::L, _) => (Ordering::Less, r),
                };
                let sims = sims.with_ord_of(x, after);
                let y = x.other();
                let phase = y.base() + 1;
                self.step(&self.seek_after(y, sims, after, phase), w)
            }
            S::Seek { y, sims, mv, phase } => {
                if phase == y.base() + 1 && r & SC != 0 {
                    Act::go(r, Move::L, S::Read0 { x: y, sims })
                } else {
                    Act::go(r, mv, S::Seek { y, sims, mv, phase: step_pos(phase, mv) })
                }
            }
            S::Finish { res, phase } => {
                if phase == 1 && r & OUT != 0 {
                    Act::go(r & !OUT, Move::R, S::Tidy { res, pos: 2 })
                } else {
                    Act::go(r & !OUT, Move::L, S::Finish { res, phase: step_pos(phase, Move::L) })
                }
            }
            S::Tidy { res, pos: 2 } => Act::go(r, Move::R, S::Tidy { res, pos: 3 }),
            S::Tidy { res, pos: 3 } => Act::go(r & !OUT, Move::L, S::Tidy { res, pos: 4 }),
            S::Tidy { res, pos: 4 } => Act::go(r, Move::L, S::Tidy { res, pos: 1 }),
            S::Tidy { res, .. } => Act::go(r, Move::L, S::Final { res }),
            S::Final { res } => Act::halt((r & !OUT) | if res { OUT } else { 0 }),
        }
    }
}

/// Races `p` against `q` on the zero input: halts with output `1|0` when `p`
/// halts strictly first and `|0` when `q` halts first or at the same stage.
pub fn race(p: &Program, q: &Program) -> Program {
    compile(&format!("race_{}_{}", p.name, q.name), &Race { p, q })
}
