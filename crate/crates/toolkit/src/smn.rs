//! Fixing the first argument of a two-argument program.
//!
//! Arguments are finite words passed framed (`1b` per bit, then a `0x`
//! pair), so a machine can find where each one ends. A two-argument call
//! gets `interleave(frame(k), frame(x))` and a one-argument call gets
//! `frame(x)`.
//!
//! `s(p, k)` runs a prelude and then enters `p` at cell 0 on a clean
//! scratch and output tape. The prelude marks the extent of `frame(x)`,
//! spreads it onto the odd cells one gap at a time, then writes `frame(k)`
//! onto the even cells from a chain of states that hardwires its bits.
//! States are laid out so that, for an unrelativized `p`, its number `j`
//! becomes `j + D` (its limit keeps number 1), where `D` is the prelude's
//! state count.

use num_bigint::BigUint;
use thiserror::Error;

use ittm_core::machine::{decode, encode, Move, Row, StateId};
use ittm_core::{Program, Word};

use crate::compile::{compile, Act, Controller};

const IN: u8 = 1;
const SC: u8 = 2;
const OUT: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmnError {
    #[error("argument {0} is not finitely supported")]
    NotFinite(Word),
}

/// `1b` for every bit of `x` up to its last one.
pub fn frame_arg(x: &Word) -> Result<Word, SmnError> {
    let n = x.support_len().ok_or_else(|| SmnError::NotFinite(x.clone()))?;
    Ok(Word::finite(x.bits(n).into_iter().flat_map(|b| [true, b]).collect()))
}

/// The input of a two-argument call.
pub fn pair_input(k: &Word, x: &Word) -> Result<Word, SmnError> {
    Ok(Word::interleave(&frame_arg(k)?, &frame_arg(x)?))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Pre {
    Start,
    MarkPres,
    MarkData,
    MarkEnd,
    ToZero,
    Carry(u8),
    ToGap,
    Skip,
    Insert,
    Clear,
    Emit(usize),
    Gap(usize),
    Return,
}

/// Where a prelude row goes.
enum To {
    Pre(Pre),
    PStart,
}

fn pre_row(st: Pre, p: u8, fk: &[bool]) -> (u8, Move, To) {
    use Move::{L, R};
    use Pre::*;
    let go = |w: u8, m: Move, s: Pre| (w, m, To::Pre(s));
    let lanes = p & (IN | SC);
    match st {
        Start => go(p | SC | OUT, R, if p & IN != 0 { MarkData } else { MarkEnd }),
        MarkPres => go(p | SC, R, if p & IN != 0 { MarkData } else { MarkEnd }),
        MarkData => go(p | SC, R, MarkPres),
        MarkEnd => go(p | SC, L, ToZero),
        // cell 0 is the only cell with its output bit set
        ToZero if p & OUT != 0 => go((p & !IN) | SC | OUT, R, Carry(lanes)),
        ToZero => go(p, L, ToZero),
        Carry(c) => {
            let w = (p & !(IN | SC)) | c;
            if p & SC == 0 {
                go(w, L, ToGap)
            } else {
                go(w, R, Carry(lanes))
            }
        }
        ToGap if p & OUT != 0 => go(p, R, Skip),
        ToGap => go(p, L, ToGap),
        Skip => go(p, R, Insert),
        Insert if p & SC == 0 => go(p, L, Clear),
        Insert => go((p & !(IN | SC)) | OUT, R, Carry(lanes)),
        Clear if p & OUT != 0 && p & SC != 0 => {
            let next = if fk.is_empty() { Return } else { Emit(0) };
            // moving left from cell 0 stays there
            go((p & !(IN | SC)) | OUT, L, next)
        }
        Clear => go(p & !(SC | OUT), L, Clear),
        Emit(i) => go((p & !IN) | if fk[i] { IN } else { 0 }, R, Gap(i)),
        Gap(i) if i + 1 == fk.len() => go(p, L, Return),
        Gap(i) => go(p, R, Emit(i + 1)),
        Return if p & OUT != 0 => (p & !OUT, L, To::PStart),
        Return => go(p, L, Return),
    }
}

/// Prelude states in numbering order, split around the slot of `p`'s start.
fn pre_states(fk_len: usize) -> (Vec<Pre>, Pre) {
    use Pre::*;
    let mut v = vec![MarkPres, MarkData, MarkEnd, ToZero];
    v.extend((0..4).map(Carry));
    v.extend([ToGap, Skip, Insert, Clear]);
    for i in 0..fk_len {
        v.extend([Emit(i), Gap(i)]);
    }
    (v, Return)
}

/// The number of prelude states when `k` has `len` support digits.
pub fn shift_for(len: usize) -> usize {
    14 + 4 * len
}

/// `p` with its first argument fixed to `k`.
pub fn smn_program(p: &Program, k: &Word) -> Result<Program, SmnError> {
    let fk = frame_arg(k)?.bits(2 * k.support_len().unwrap_or(0));
    let (middle, last) = pre_states(fk.len());

    // p's states in canonical order, as the numbering sees them
    let mut p_order: Vec<StateId> = vec![p.start(), p.limit()];
    p_order.extend(p.query());
    for s in 0..p.state_count() as StateId {
        if !p_order.contains(&s) && s != p.halt() {
            p_order.push(s);
        }
    }
    let head = if p.query().is_some() { 3 } else { 2 };

    enum Slot {
        Pre(Pre),
        P(StateId),
    }
    let mut slots = vec![Slot::Pre(Pre::Start)];
    slots.extend(p_order[1..head].iter().map(|&s| Slot::P(s)));
    slots.extend(middle.iter().map(|&s| Slot::Pre(s)));
    slots.push(Slot::P(p_order[0]));
    slots.push(Slot::Pre(last));
    slots.extend(p_order[head..].iter().map(|&s| Slot::P(s)));

    let halt = slots.len() as StateId;
    let mut pre_id = std::collections::HashMap::new();
    let mut p_id = vec![halt; p.state_count()];
    for (i, s) in slots.iter().enumerate() {
        match s {
            Slot::Pre(x) => {
                pre_id.insert(format!("{x:?}"), i as StateId);
            }
            Slot::P(x) => p_id[*x as usize] = i as StateId,
        }
    }
    let pre = |x: Pre| pre_id[&format!("{x:?}")];

    let mut names: Vec<String> = Vec::with_capacity(slots.len() + 1);
    let mut rows: Vec<Vec<Option<Row>>> = Vec::with_capacity(slots.len() + 1);
    for s in &slots {
        match s {
            Slot::Pre(x) => {
                names.push(format!("s_{x:?}").replace(['(', ')'], ""));
                rows.push(
                    (0..p.patterns() as u8)
                        .map(|pat| {
                            let (write, mv, to) = pre_row(*x, pat, &fk);
                            let next = match to {
                                To::Pre(y) => pre(y),
                                To::PStart => p_id[p.start() as usize],
                            };
                            Some(Row { write, mv, next })
                        })
                        .collect(),
                );
            }
            Slot::P(x) => {
                names.push(format!("p_{}", p.state_name(*x)));
                rows.push(
                    (0..p.patterns() as u8)
                        .map(|pat| {
                            let r = p.row(*x, pat).expect("non-halt rows are total");
                            Some(Row { next: p_id[r.next as usize], ..r })
                        })
                        .collect(),
                );
            }
        }
    }
    names.push("halt".into());
    rows.push(vec![None; p.patterns()]);
    let query = p.query().map(|q| p_id[q as usize]);
    let name = format!("{}_fixed", p.name);
    Ok(Program::new(name, names, 0, 1, halt, query, p.tapes(), rows).expect("prelude tables are complete"))
}

/// `s(p, k)` on program numbers.
pub fn smn(p: &BigUint, k: &Word) -> Result<BigUint, SmnError> {
    Ok(encode(&smn_program(&decode(p), k)?))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Combine {
    First,
    Second,
    Or,
}

/// Two-argument programs that output `a`, `b` or `a | b` unframed.
///
/// Pair `i` of the arguments sits at cells `4i..4i+4` (presence of `a`,
/// presence of `b`, bit of `a`, bit of `b`). A scratch mark at `i` tracks
/// the output cell and one at `4i` the next pair.
struct Gather(Combine);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum G {
    /// Reading a pair at offset `off`.
    Pair { off: u8, pa: bool, pb: bool, a: bool, first: bool },
    /// Back to cell 0 with the first output bit.
    Home { left: u8, bit: bool },
    PlaceD,
    Walk { left: u8 },
    SetS { bit: bool },
    ToD { bit: bool },
    MoveD,
    ToS,
    Limit,
}

impl Gather {
    fn pick(&self, a: bool, b: bool) -> bool {
        match self.0 {
            Combine::First => a,
            Combine::Second => b,
            Combine::Or => a | b,
        }
    }

    fn pair(&self, p: u8, first: bool) -> Act<G> {
        // clear the pair mark as we leave it
        Act::go(p & !SC, Move::R, G::Pair { off: 1, pa: p & IN != 0, pb: false, a: false, first })
    }
}

impl Controller for Gather {
    type State = G;

    fn start(&self) -> G {
        G::Pair { off: 0, pa: false, pb: false, a: false, first: true }
    }

    fn limit(&self) -> G {
        G::Limit
    }

    fn step(&self, st: &G, p: u8) -> Act<G> {
        use Move::{L, R};
        let i = p & IN != 0;
        match st.clone() {
            G::Pair { off: 0, first, .. } => self.pair(p, first),
            G::Pair { off: 1, pa, .. } if !pa && !i => Act::halt(p),
            G::Pair { off: 1, pa, first, .. } => Act::go(p, R, G::Pair { off: 2, pa, pb: i, a: false, first }),
            G::Pair { off: 2, pa, pb, first, .. } => Act::go(p, R, G::Pair { off: 3, pa, pb, a: i, first }),
            G::Pair { a, first, .. } => {
                let bit = self.pick(a, i);
                if first {
                    Act::go(p, L, G::Home { left: 2, bit })
                } else {
                    Act::go(p, R, G::SetS { bit })
                }
            }
            G::Home { left: 0, bit } => Act::go(with_out(p, bit), R, G::PlaceD),
            G::Home { left, bit } => Act::go(p, L, G::Home { left: left - 1, bit }),
            // the output mark starts at cell 1
            G::PlaceD => Act::go(p | SC, R, G::Walk { left: 2 }),
            G::Walk { left: 0 } => self.pair(p, false),
            G::Walk { left } => Act::go(p, R, G::Walk { left: left - 1 }),
            G::SetS { bit } => Act::go(p | SC, L, G::ToD { bit }),
            G::ToD { .. } if p & SC == 0 => Act::go(p, L, st.clone()),
            G::ToD { bit } => Act::go(with_out(p & !SC, bit), R, G::MoveD),
            G::MoveD => Act::go(p | SC, R, G::ToS),
            G::ToS if p & SC == 0 => Act::go(p, R, G::ToS),
            G::ToS => self.pair(p, false),
            G::Limit => Act::halt(p),
        }
    }
}

fn with_out(p: u8, b: bool) -> u8 {
    if b {
        p | OUT
    } else {
        p & !OUT
    }
}

pub fn combine_program(c: Combine) -> Program {
    compile(&format!("{c:?}").to_lowercase(), &Gather(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn framing() {
        let x: Word = "101|0".parse().unwrap();
        assert_eq!(frame_arg(&x).unwrap(), "111011|0".parse().unwrap());
        assert_eq!(frame_arg(&Word::zero()).unwrap(), Word::zero());
        assert!(frame_arg(&Word::ones()).is_err());
    }

    #[test]
    fn layout_shifts_p_by_the_prelude_size() {
        let p = decode(&encode(&ittm_core::machine::immediate_halter()));
        let k: Word = "11|0".parse().unwrap();
        let s = smn_program(&p, &k).unwrap();
        assert_eq!(s.state_count(), shift_for(2) + 2 + 1);
    }
}
