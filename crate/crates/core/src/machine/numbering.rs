//! Every natural number names a program.
//!
//! The binary digits of `n`, least significant first, are read in pairs:
//! `1b` carries payload bit `b` and the first pair starting with `0` ends
//! the payload. The payload is
//!
//! ```text
//! relativized-flag  entry*
//! entry = write-bits  move-bit  (1 b)* 0
//! ```
//!
//! with one entry per (state, read pattern) in state-major order; the move
//! bit is `1` for right. The next state is the binary number formed by the
//! `b` bits, least significant first, so entries delimit themselves and a
//! machine can parse them without knowing the state count. States are
//! numbered with start = 0, limit = 1 and, for relativized programs,
//! query = 2; the halt state is the state count, and any number at or above
//! it also means halt. Payloads that do not split into whole entries forming
//! whole groups for at least two states (three when relativized) decode to
//! the immediate halter, as does `0`.

use num_bigint::BigUint;

use super::{Move, Program, Row, StateId};

/// Halts on the first step and leaves every tape unchanged.
pub fn immediate_halter() -> Program {
    let names = vec!["start".to_string(), "limit".to_string(), "halt".to_string()];
    let rows: Vec<Vec<Option<Row>>> = (0..2)
        .map(|_| {
            (0..8u8)
                .map(|p| Some(Row { write: p, mv: Move::R, next: 2 }))
                .collect()
        })
        .chain(std::iter::once(vec![None; 8]))
        .collect();
    Program::new("halter", names, 0, 1, 2, None, 3, rows).expect("halter is well formed")
}

/// The payload bits of a program.
pub fn payload(p: &Program) -> Vec<bool> {
    // canonical order: start, limit, query, then the rest in table order
    let mut order: Vec<StateId> = vec![p.start(), p.limit()];
    order.extend(p.query());
    for s in 0..p.state_count() as StateId {
        if !order.contains(&s) && s != p.halt() {
            order.push(s);
        }
    }
    let states = order.len();
    let mut index = vec![states; p.state_count()];
    for (i, &s) in order.iter().enumerate() {
        index[s as usize] = i;
    }
    let mut bits = vec![p.tapes() == 4];
    for &s in &order {
        for pat in 0..p.patterns() as u8 {
            let r = p.row(s, pat).expect("non-halt rows are total");
            bits.extend((0..p.tapes()).map(|t| r.write >> t & 1 == 1));
            bits.push(r.mv == Move::R);
            let mut next = index[r.next as usize];
            while next > 0 {
                bits.extend([true, next & 1 == 1]);
                next >>= 1;
            }
            bits.push(false);
        }
    }
    bits
}

/// The tape image of a payload: pairs `1b`, then zeros.
pub fn frame(payload: &[bool]) -> Vec<bool> {
    payload.iter().flat_map(|&b| [true, b]).collect()
}

pub fn bits_to_nat(bits: &[bool]) -> BigUint {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    BigUint::from_bytes_le(&bytes)
}

pub fn nat_to_bits(n: &BigUint) -> Vec<bool> {
    let len = n.bits() as usize;
    (0..len).map(|i| n.bit(i as u64)).collect()
}

/// The number of a program.
pub fn encode(p: &Program) -> BigUint {
    bits_to_nat(&frame(&payload(p)))
}

/// The payload carried by the digits of `n`.
pub fn unframe(bits: &[bool]) -> Vec<bool> {
    let mut out = Vec::new();
    let mut i = 0;
    while bits.get(i).copied().unwrap_or(false) {
        out.push(bits.get(i + 1).copied().unwrap_or(false));
        i += 2;
    }
    out
}

/// The program named by `n`.
pub fn decode(n: &BigUint) -> Program {
    decode_payload(&unframe(&nat_to_bits(n))).unwrap_or_else(immediate_halter)
}

fn decode_payload(bits: &[bool]) -> Option<Program> {
    let (&relativized, mut rest) = bits.split_first()?;
    let tapes = if relativized { 4 } else { 3 };
    let patterns = 1usize << tapes;
    // (write, move right, next); `next` saturates, anything that large halts
    let mut entries: Vec<(u8, bool, usize)> = Vec::new();
    while !rest.is_empty() {
        if rest.len() < tapes + 1 {
            return None;
        }
        let write = (0..tapes).fold(0u8, |a, t| a | (rest[t] as u8) << t);
        let right = rest[tapes];
        rest = &rest[tapes + 1..];
        let mut next = 0usize;
        let mut k = 0;
        loop {
            match rest {
                [false, tail @ ..] => {
                    rest = tail;
                    break;
                }
                [true, b, tail @ ..] => {
                    if *b {
                        next = next.saturating_add(1usize.checked_shl(k).unwrap_or(usize::MAX));
                    }
                    k += 1;
                    rest = tail;
                }
                _ => return None,
            }
        }
        entries.push((write, right, next));
    }
    if !entries.len().is_multiple_of(patterns) {
        return None;
    }
    let states = entries.len() / patterns;
    if states < if relativized { 3 } else { 2 } {
        return None;
    }
    let halt = states as StateId;
    let mut rows: Vec<Vec<Option<Row>>> = Vec::with_capacity(states + 1);
    for group in entries.chunks(patterns) {
        let group = group
            .iter()
            .map(|&(write, right, next)| {
                let mv = if right { Move::R } else { Move::L };
                let next = if next < states { next as StateId } else { halt };
                Some(Row { write, mv, next })
            })
            .collect();
        rows.push(group);
    }
    rows.push(vec![None; patterns]);
    let mut names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    names.push("halt".into());
    Program::new(
        "decoded",
        names,
        0,
        1,
        halt,
        relativized.then_some(2),
        tapes,
        rows,
    )
    .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_program;

    #[test]
    fn zero_is_the_halter() {
        assert!(decode(&BigUint::from(0u32)).equivalent(&immediate_halter()));
        assert!(decode(&BigUint::from(6u32)).equivalent(&immediate_halter()));
    }

    #[test]
    fn roundtrip() {
        let p = parse_program(
            "start: s\nlimit: l\nhalt: h\ns 0** -> 1**, R, t\ns 1** -> ***, L, h\n\
             t *** -> ***, R, s\nl *** -> 000, L, t\n",
        )
        .unwrap();
        let q = decode(&encode(&p));
        assert!(q.equivalent(&p));
        assert_eq!(encode(&q), encode(&p));
    }

    #[test]
    fn right_mover_by_hand() {
        let p = parse_program("start: s\nlimit: l\nhalt: h\ns *** -> ***, R, s\nl *** -> ***, R, s\n").unwrap();
        // flag 0, then per entry: the pattern's bits, R, and next 0 (no digits)
        let mut text = String::from("0");
        for _state in 0..2 {
            for pat in ["000", "100", "010", "110", "001", "101", "011", "111"] {
                text.push_str(pat);
                text.push_str("10");
            }
        }
        let bits: Vec<bool> = text.chars().map(|c| c == '1').collect();
        assert_eq!(payload(&p), bits);
        assert_eq!(encode(&p), bits_to_nat(&frame(&bits)));
        assert!(decode(&encode(&p)).equivalent(&p));
    }

    #[test]
    fn short_payloads_halt() {
        // a lone flag, one state's worth of entries, a cut-off entry
        let one_state: Vec<bool> = std::iter::once(false)
            .chain((0..8).flat_map(|_| [false, false, false, true, false]))
            .collect();
        for pl in [vec![false], one_state, vec![false, true, true, true, false, true]] {
            assert!(decode(&bits_to_nat(&frame(&pl))).equivalent(&immediate_halter()));
        }
    }

    #[test]
    fn frame_roundtrip() {
        let pl = vec![true, false, false, true];
        assert_eq!(unframe(&frame(&pl)), pl);
        assert_eq!(nat_to_bits(&bits_to_nat(&frame(&pl))), frame(&pl));
    }
}
