//! A universal machine: runs the program numbered `n` on `x`.
//!
//! Simulated cell `v` owns real cells `3v..3v+3`:
//!
//! ```text
//! 3v    simulated in, scratch, out
//! 3v+1  master code | table copy | state mark
//! 3v+2  head mark   | cursor     | count marks
//! ```
//!
//! The master code is the framed payload of `n` from `v = 1` on and is only
//! read. A working copy of it travels with the simulated head `h`, starting
//! at `h + 1`, so every lookup stays within a bounded distance of the head
//! and a simulated lasso is a real lasso. The state mark sits on the first
//! cell of the current state's group of entries. A transition is followed
//! by copying the entry's binary next state onto the count lane and
//! decrementing it while a cursor walks groups from the start of the copy;
//! a cursor that walks off the end means the halt state.
//!
//! At a real limit the simulated cells hold exactly the simulated limit, and
//! the limit state rebuilds the copy at `h = 0` from the master with the
//! state mark on the simulated limit state. Marks left elsewhere by the
//! block before are never read: every scan stays between the head mark and
//! the end of the copy, and moving the copy overwrites what it moves onto.

use ittm_core::machine::{nat_to_bits, Move};
use ittm_core::{Program, Word};
use num_bigint::BigUint;

use crate::compile::{compile, Act, Controller};

const IN: u8 = 1;
const SC: u8 = 2;
const OUT: u8 = 4;

/// Entries per state group.
const GROUP: u8 = 8;

/// Position inside an entry: bits 0..=3 are the write bits and the move
/// bit, then the next state as continuation and digit bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Fld {
    /// The leading relativized-flag bit of the payload.
    Rel,
    Bit(u8),
    IdC,
    IdB,
}

impl Fld {
    /// The field after reading `b`, and whether the entry ended.
    fn feed(self, b: bool) -> (Fld, bool) {
        match self {
            Fld::Rel => (Fld::Bit(0), false),
            Fld::Bit(i) if i < 3 => (Fld::Bit(i + 1), false),
            Fld::Bit(_) | Fld::IdB => (Fld::IdC, false),
            Fld::IdC if b => (Fld::IdB, false),
            Fld::IdC => (Fld::Bit(0), true),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Op {
    Plant,
    Validate { pres: bool, rel: bool, f: Fld, ent: u8, rows: u8 },
    GoH(Box<Op>),
    Back(Box<Op>),
    Init { target: u8 },
    Copy { pres: bool, target: u8, last: bool },
    SetRow { left: u8, pres: bool, f: Fld, ent: u8 },
    Fetch,
    FindS { r: u8 },
    Entry { left: u8, pres: bool, f: Fld, w: u8, m: bool },
    /// Steps over the rest of the current cell.
    Fwd(Box<Op>),
    CopyId { w: u8, m: bool, pres: bool, isb: bool, t: bool },
    WriteW { w: u8, m: bool },
    CursorInit { m: bool, k: u8 },
    Dec { m: bool, started: bool, pres: bool, isb: bool, t: bool },
    FindC { m: bool, t: bool },
    Row { m: bool, pres: bool, f: Fld, ent: u8 },
    SetC { m: bool },
    ClearField { m: bool, started: bool, pres: bool, isb: bool, t: bool },
    FinishC { m: bool, t: bool },
    SetA { m: bool },
    Move { m: bool },
    ShiftR { ct: bool, ca: bool, ch: bool, odd: bool, endc: bool, fin: bool },
    Lt(u8),
    PullIn(u8),
    Pull { seq: u8, carry: u8, odd: bool },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct St {
    op: Op,
    sub: u8,
}

struct Universal;

fn right(write: u8, op: Op, sub: u8) -> Act<St> {
    Act::go(write, Move::R, St { op, sub: (sub + 1) % 3 })
}

fn left(write: u8, op: Op, sub: u8) -> Act<St> {
    Act::go(write, Move::L, St { op, sub: (sub + 2) % 3 })
}

fn go_h(write: u8, then: Op, sub: u8) -> Act<St> {
    left(write, Op::GoH(Box::new(then)), sub)
}

fn back_to(write: u8, then: Op, sub: u8) -> Act<St> {
    go_h(write, Op::Back(Box::new(then)), sub)
}

fn fwd(op: Op) -> Op {
    Op::Fwd(Box::new(op))
}

fn dec(m: bool) -> Op {
    Op::Dec { m, started: false, pres: false, isb: false, t: false }
}

fn b(p: u8, lane: u8) -> bool {
    p & lane != 0
}

fn set(p: u8, lane: u8, v: bool) -> u8 {
    if v {
        p | lane
    } else {
        p & !lane
    }
}

impl Controller for Universal {
    type State = St;

    fn start(&self) -> St {
        St { op: Op::Plant, sub: 0 }
    }

    fn limit(&self) -> St {
        St { op: Op::Init { target: 1 }, sub: 0 }
    }

    fn step(&self, st: &St, p: u8) -> Act<St> {
        let s = st.sub;
        let same = |op: Op| right(p, op, s);
        match st.op.clone() {
            Op::Plant => match s {
                2 => right(p | IN, Op::Validate { pres: true, rel: true, f: Fld::Bit(0), ent: 0, rows: 0 }, s),
                _ => same(Op::Plant),
            },
            Op::Validate { pres, rel, f, ent, rows } => {
                if s != 1 {
                    return same(st.op.clone());
                }
                let bit = b(p, IN);
                if pres {
                    if bit {
                        return same(Op::Validate { pres: false, rel, f, ent, rows });
                    }
                    let valid = !rel && f == Fld::Bit(0) && ent == 0 && rows >= 2;
                    return if valid { go_h(p, Op::Init { target: 0 }, s) } else { Act::halt(p) };
                }
                if rel {
                    // relativized programs are not simulated
                    return if bit {
                        Act::halt(p)
                    } else {
                        same(Op::Validate { pres: true, rel: false, f, ent, rows })
                    };
                }
                let (f, done) = f.feed(bit);
                let (mut ent, mut rows) = (ent, rows);
                if done {
                    ent += 1;
                    if ent == GROUP {
                        ent = 0;
                        rows = (rows + 1).min(2);
                    }
                }
                same(Op::Validate { pres: true, rel, f, ent, rows })
            }
            Op::GoH(then) => {
                if s == 2 && b(p, IN) {
                    self.step(&St { op: *then, sub: 2 }, p)
                } else {
                    left(p, Op::GoH(then), s)
                }
            }
            Op::Back(then) => match s {
                2 => left(p, Op::Back(then), s),
                _ => left(p, *then, s),
            },
            Op::Init { target } => match s {
                0 => same(st.op.clone()),
                1 => right(p & IN, st.op.clone(), s),
                _ => right(IN, Op::Copy { pres: true, target, last: false }, s),
            },
            Op::Copy { pres, target, last } => match s {
                0 => same(st.op.clone()),
                1 => {
                    let ms = b(p, IN);
                    let w = set(p & IN, SC, ms);
                    right(w, Op::Copy { pres, target, last: pres && !ms }, s)
                }
                _ if last => go_h(0, Op::SetRow { left: target, pres: true, f: Fld::Rel, ent: 0 }, s),
                _ => right(0, Op::Copy { pres: !pres, target, last }, s),
            },
            Op::SetRow { left: rows, pres, f, ent } => {
                if s != 1 {
                    return same(st.op.clone());
                }
                let t = b(p, SC);
                if pres {
                    if rows == 0 && f == Fld::Bit(0) {
                        return back_to(p | OUT, Op::Fetch, s);
                    }
                    return same(Op::SetRow { left: rows, pres: false, f, ent });
                }
                let (f, done) = f.feed(t);
                let (mut rows, mut ent) = (rows, ent);
                if done {
                    ent += 1;
                    if ent == GROUP {
                        ent = 0;
                        rows -= 1;
                    }
                }
                same(Op::SetRow { left: rows, pres: true, f, ent })
            }
            Op::Fetch => right(p, Op::FindS { r: p }, s),
            Op::FindS { r } => {
                if s == 1 && b(p, OUT) {
                    right(p & !OUT, Op::Entry { left: r, pres: false, f: Fld::Bit(0), w: 0, m: false }, s)
                } else {
                    same(st.op.clone())
                }
            }
            Op::Entry { left: n, pres, f, w, m } => {
                if s != 1 {
                    return same(st.op.clone());
                }
                if pres {
                    return same(Op::Entry { left: n, pres: false, f, w, m });
                }
                let t = b(p, SC);
                if n > 0 {
                    let (f, done) = f.feed(t);
                    let n = if done { n - 1 } else { n };
                    return same(Op::Entry { left: n, pres: true, f, w, m });
                }
                match f {
                    Fld::Bit(i) if i < 3 => same(Op::Entry {
                        left: 0,
                        pres: true,
                        f: Fld::Bit(i + 1),
                        w: w | (t as u8) << i,
                        m,
                    }),
                    // the move bit: mark the entry for the count passes
                    _ => right(p | OUT, fwd(Op::CopyId { w, m: t, pres: true, isb: false, t: false }), s),
                }
            }
            Op::Fwd(then) => right(p, *then, s),
            Op::CopyId { w, m, pres, isb, t } => match s {
                0 => same(st.op.clone()),
                1 => same(Op::CopyId { w, m, pres, isb, t: b(p, SC) }),
                _ if pres => same(Op::CopyId { w, m, pres: false, isb, t }),
                _ if isb => right(set(p, OUT, t), Op::CopyId { w, m, pres: true, isb: false, t }, s),
                _ if !t => back_to(p, Op::WriteW { w, m }, s),
                _ => same(Op::CopyId { w, m, pres: true, isb: true, t }),
            },
            Op::WriteW { w, m } => right(w, Op::CursorInit { m, k: 0 }, s),
            // group 0 starts after the flag pair, at h + 3
            Op::CursorInit { m, k } => match (s, k) {
                (2, 3) => go_h(p | SC, dec(m), s),
                (2, _) => same(Op::CursorInit { m, k: k + 1 }),
                _ => same(st.op.clone()),
            },
            // Decrement the copied next state, least significant digit first;
            // running out of digits means it was zero.
            Op::Dec { m, started, pres, isb, t } => match s {
                0 => same(st.op.clone()),
                1 if !started => {
                    if b(p, OUT) {
                        same(fwd(Op::Dec { m, started: true, pres: true, isb: false, t }))
                    } else {
                        same(st.op.clone())
                    }
                }
                1 => same(Op::Dec { m, started, pres, isb, t: b(p, SC) }),
                _ if !started => same(st.op.clone()),
                _ if pres => same(Op::Dec { m, started, pres: false, isb, t }),
                _ if isb && b(p, OUT) => go_h(p & !OUT, Op::FindC { m, t: false }, s),
                _ if isb => right(p | OUT, Op::Dec { m, started, pres: true, isb: false, t }, s),
                _ if !t => go_h(p, Op::ClearField { m, started: false, pres: false, isb: false, t: false }, s),
                _ => same(Op::Dec { m, started, pres: true, isb: true, t }),
            },
            Op::FindC { m, t } => match s {
                0 => same(st.op.clone()),
                1 => same(Op::FindC { m, t: b(p, SC) }),
                _ if !b(p, SC) => same(st.op.clone()),
                // the cursor ran off the table: the next state is the halt state
                _ if !t => Act::halt(p & !SC),
                _ => right(p & !SC, Op::Row { m, pres: false, f: Fld::Bit(0), ent: 0 }, s),
            },
            Op::Row { m, pres, f, ent } => {
                if s != 1 {
                    return same(st.op.clone());
                }
                if pres {
                    if ent == GROUP {
                        return same(Op::SetC { m });
                    }
                    return same(Op::Row { m, pres: false, f, ent });
                }
                let (f, done) = f.feed(b(p, SC));
                same(Op::Row { m, pres: true, f, ent: ent + done as u8 })
            }
            Op::SetC { m } => go_h(p | SC, dec(m), s),
            Op::ClearField { m, started, pres, isb, t } => match s {
                0 => same(st.op.clone()),
                1 if !started => {
                    if b(p, OUT) {
                        right(p & !OUT, fwd(Op::ClearField { m, started: true, pres: true, isb: false, t }), s)
                    } else {
                        same(st.op.clone())
                    }
                }
                1 => same(Op::ClearField { m, started, pres, isb, t: b(p, SC) }),
                _ if !started || pres => same(Op::ClearField { m, started, pres: false, isb, t }),
                _ if isb => right(p & !OUT, Op::ClearField { m, started, pres: true, isb: false, t }, s),
                _ if !t => go_h(p, Op::FinishC { m, t: false }, s),
                _ => same(Op::ClearField { m, started, pres: true, isb: true, t }),
            },
            Op::FinishC { m, t } => match s {
                0 => same(st.op.clone()),
                1 => same(Op::FinishC { m, t: b(p, SC) }),
                _ if !b(p, SC) => same(st.op.clone()),
                _ if !t => Act::halt(p & !SC),
                _ => left(p & !SC, Op::SetA { m }, s),
            },
            Op::SetA { m } => back_to(p | OUT, Op::Move { m }, s),
            Op::Move { m: true } => right(p, Op::ShiftR { ct: false, ca: false, ch: false, odd: false, endc: false, fin: false }, s),
            Op::Move { m: false } => right(p, Op::Lt(1), s),
            Op::ShiftR { ct, ca, ch, odd, endc, fin } => match s {
                0 => same(st.op.clone()),
                1 => {
                    let w = (p & IN) | if ct { SC } else { 0 } | if ca { OUT } else { 0 };
                    if endc {
                        right(w, Op::ShiftR { ct, ca, ch, odd, endc, fin: true }, s)
                    } else {
                        let t = b(p, SC);
                        let a = b(p, OUT);
                        right(w, Op::ShiftR { ct: t, ca: a, ch, odd, endc: odd && !t, fin }, s)
                    }
                }
                _ => {
                    let w = if ch { IN } else { 0 };
                    if fin {
                        back_to(w, Op::Fetch, s)
                    } else {
                        right(w, Op::ShiftR { ct, ca, ch: b(p, IN), odd: !odd, endc, fin }, s)
                    }
                }
            },
            // Moving left: first find out whether the head is at cell 0 by
            // marking here and stepping left three times and right twice.
            Op::Lt(k) => {
                let mv = |w: u8, d: Move, k: u8| Act::go(w, d, St { op: Op::Lt(k), sub: 0 });
                match k {
                    1 => mv(p, Move::R, 2),
                    2 => mv(p | SC, Move::L, 3),
                    3 => mv(p, Move::L, 4),
                    4 => mv(p, Move::L, 5),
                    5 => mv(p, Move::R, 6),
                    6 => mv(p, Move::R, 7),
                    7 if b(p, SC) => Act::go(p & !SC, Move::L, St { op: Op::Back(Box::new(Op::Fetch)), sub: 1 }),
                    7 => mv(p, Move::R, 8),
                    _ => Act::go(p & !SC, Move::L, St { op: Op::PullIn(1), sub: 0 }),
                }
            }
            Op::PullIn(k) => {
                if k < 3 {
                    Act::go(p, Move::L, St { op: Op::PullIn(k + 1), sub: 0 })
                } else {
                    Act::go(p, Move::L, St { op: Op::Pull { seq: 0, carry: 0, odd: false }, sub: 0 })
                }
            }
            // Fill cell v (B1 at seq 0) from cell v + 1. The carry holds the
            // two bookkeeping cells of v + 1: lanes of B1 in bits 0..3, B2 in 3..6.
            // seq: 0 B1(v), 3 B1(v+1), 4 B2(v+1), 7 B2(v), 8 B1(v).
            Op::Pull { seq, carry, odd } => {
                let mv = |w: u8, d: Move, seq: u8, carry: u8| {
                    Act::go(w, d, St { op: Op::Pull { seq, carry, odd }, sub: 0 })
                };
                match seq {
                    0..=2 => mv(p, Move::R, seq + 1, carry),
                    3 => mv(p, Move::R, 4, p & (SC | OUT)),
                    4 => mv(p, Move::L, 5, carry | p << 3),
                    5 | 6 => mv(p, Move::L, seq + 1, carry),
                    7 => mv(carry >> 3, Move::L, 8, carry),
                    8 => {
                        let w = (p & IN) | (carry & (SC | OUT));
                        if odd && carry & SC == 0 {
                            back_to(w, Op::Fetch, 1)
                        } else {
                            mv(w, Move::R, 9, 0)
                        }
                    }
                    9 => mv(p, Move::R, 10, 0),
                    _ => Act::go(p, Move::R, St { op: Op::Pull { seq: 0, carry: 0, odd: !odd }, sub: 0 }),
                }
            }
        }
    }
}

/// The universal machine.
pub fn universal() -> Program {
    compile("universal", &Universal)
}

/// The input that makes [`universal`] run program `n` on `x`.
pub fn universal_input(n: &BigUint, x: &Word) -> Word {
    let code = nat_to_bits(n);
    let cell = |i: usize| -> bool {
        match i % 3 {
            0 => x.read(i / 3),
            1 => i / 3 >= 1 && code.get(i / 3 - 1).copied().unwrap_or(false),
            _ => false,
        }
    };
    let pre = 3 * x.prefix().len().max(code.len() + 1);
    let per = 3 * x.period().len();
    Word::new((0..pre).map(cell).collect(), (pre..pre + per).map(cell).collect())
}

/// The simulated output inside a real output word of [`universal`].
pub fn universal_output(w: &Word) -> Word {
    w.stride(0, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ittm_core::machine::{encode, parse_program};
    use ittm_core::{run, RunBudget, Verdict};

    fn budget() -> RunBudget {
        RunBudget { max_steps_per_block: 5_000_000, ..RunBudget::default() }
    }

    fn both(src: &str, x: &str) -> (Verdict, Verdict) {
        let p = parse_program(src).unwrap();
        let x: Word = x.parse().unwrap();
        let direct = run(&p, &x, &budget(), None).unwrap().verdict;
        let u = universal();
        let sim = run(&u, &universal_input(&encode(&p), &x), &budget(), None).unwrap().verdict;
        (direct, sim)
    }

    #[test]
    fn finite_runs() {
        let src = "start: s\nlimit: l\nhalt: h\ns 0** -> 1*1, R, t\ns 1** -> 0**, R, t\n\
                   t *** -> **1, L, u\nu *** -> ***, R, h\nl *** -> ***, R, h\n";
        for x in ["|0", "1|0", "01|0"] {
            let (d, s) = both(src, x);
            match (d, s) {
                (Verdict::Halted { output: a, .. }, Verdict::Halted { output: b, .. }) => {
                    assert_eq!(a, universal_output(&b), "{x}")
                }
                other => panic!("{x}: {other:?}"),
            }
        }
    }
}
