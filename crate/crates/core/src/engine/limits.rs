//! The limit rule for the two recognized ω-block shapes.

use thiserror::Error;

use crate::machine::{step, Oracle, Program, Snapshot};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("a cycle needs at least one snapshot")]
    Empty,
    #[error("snapshot {0} of the cycle is not the successor of the previous one")]
    NotConsecutive(usize),
    #[error("the cycle does not close up")]
    NotClosed,
    #[error("a translated cycle must move right and never touch its abandoned cells")]
    BadTranslation,
    #[error("stepping failed inside the cycle")]
    Step,
}

/// The limit of repeating `cycle` forever.
///
/// Without a translation, stepping the last snapshot must give the first
/// again. With translation `d`, it must give the first shifted right by `d`
/// cells, agreeing with it on everything from the leftmost cell the cycle
/// visits; those cells are then abandoned one stretch of `d` at a time.
pub fn limit_snapshot(
    prog: &Program,
    cycle: &[Snapshot],
    translation: Option<usize>,
    oracle: Option<&dyn Oracle>,
) -> Result<Snapshot, LimitError> {
    let first = cycle.first().ok_or(LimitError::Empty)?;
    for i in 1..cycle.len() {
        if step(prog, &cycle[i - 1], oracle).map_err(|_| LimitError::Step)? != cycle[i] {
            return Err(LimitError::NotConsecutive(i));
        }
    }
    let after = step(prog, cycle.last().unwrap(), oracle).map_err(|_| LimitError::Step)?;
    let tapes = match translation.filter(|&d| d > 0) {
        None => {
            if after != *first {
                return Err(LimitError::NotClosed);
            }
            (0..first.tapes.len())
                .map(|t| {
                    let column: Vec<Word> = cycle.iter().map(|s| s.tapes[t].clone()).collect();
                    Word::pointwise_or(&column)
                })
                .collect()
        }
        Some(d) => {
            let base = cycle.iter().map(|s| s.head).min().unwrap();
            let clamps = cycle.iter().any(|s| {
                s.head == 0 && prog.row(s.state, read_at(s, 0)).map(|r| r.mv) == Some(crate::machine::Move::L)
            });
            if clamps
                || prog.query().is_some_and(|q| cycle.iter().any(|s| s.state == q))
                || after.state != first.state
                || after.head != first.head + d
                || (0..first.tapes.len())
                    .any(|t| first.tapes[t].suffix(base) != after.tapes[t].suffix(base + d))
            {
                return Err(LimitError::BadTranslation);
            }
            after
                .tapes
                .iter()
                .map(|w| lasso_limit_tape(w, base, d))
                .collect()
        }
    };
    Ok(Snapshot {
        state: prog.limit(),
        head: 0,
        tapes,
    })
}

fn read_at(s: &Snapshot, cell: usize) -> u8 {
    s.tapes
        .iter()
        .enumerate()
        .fold(0u8, |p, (t, w)| p | (w.read(cell) as u8) << t)
}

/// Cells below `base` as they are; from `base` on, the stretch
/// `[base, base + d)` repeated forever.
pub(crate) fn lasso_limit_tape(after_one_period: &Word, base: usize, d: usize) -> Word {
    Word::new(
        after_one_period.bits(base),
        (base..base + d).map(|c| after_one_period.read(c)).collect(),
    )
}

/// The OR over every later stage of a translated lasso, given `visited`, the
/// OR of the tapes over one period starting at the lasso anchor. Cell `c` at
/// or beyond `base` sees the values of cells `c - k*d` over the first
/// period, so the result ORs each residue class mod `d` cumulatively.
pub(crate) fn lasso_tail_or(visited: &Word, base: usize, d: usize) -> Word {
    let per = visited.period().len();
    let lcm = per / gcd(per, d) * d;
    let settle = base.max(visited.prefix().len()) + lcm;
    let total = settle + d;
    let mut out = vec![false; total];
    for c in 0..total {
        out[c] = if c < base {
            visited.read(c)
        } else if c < base + d {
            visited.read(c)
        } else {
            out[c - d] || visited.read(c)
        };
    }
    Word::new(out[..settle].to_vec(), out[settle..].to_vec())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::parse_program;

    #[test]
    fn alternating_cell_limits_to_one() {
        let p = parse_program(
            "start: s\nlimit: l\nhalt: h\ns **0 -> **1, L, s\ns **1 -> **0, L, s\nl *** -> ***, L, s\n",
        )
        .unwrap();
        let a = p.initial(&Word::zero());
        let b = step(&p, &a, None).unwrap();
        let lim = limit_snapshot(&p, &[a, b], None, None).unwrap();
        assert!(lim.tapes[2].read(0));
        assert_eq!(lim.head, 0);
        assert_eq!(lim.state, p.limit());
    }

    #[test]
    fn constant_cycle() {
        let p = parse_program("start: s\nlimit: l\nhalt: h\ns *** -> ***, L, s\nl *** -> ***, L, s\n").unwrap();
        let mut s = p.initial(&"1|0".parse().unwrap());
        s.tapes[1] = "01|0".parse().unwrap();
        let lim = limit_snapshot(&p, &[s.clone()], None, None).unwrap();
        assert_eq!(lim.tapes, s.tapes);
    }

    #[test]
    fn right_mover_writing_ones() {
        let p = parse_program("start: s\nlimit: l\nhalt: h\ns *** -> 111, R, s\nl *** -> ***, R, s\n").unwrap();
        let s = p.initial(&Word::zero());
        let lim = limit_snapshot(&p, &[s], Some(1), None).unwrap();
        for t in &lim.tapes {
            assert_eq!(*t, Word::ones());
        }
        // one hundred naive steps agree on the stabilized cells
        let mut naive = [false; 101];
        for c in naive.iter_mut().take(100) {
            *c = true;
        }
        assert!((0..100).all(|c| naive[c] == lim.tapes[0].read(c)));
    }

    #[test]
    fn rejects_open_cycle() {
        let p = parse_program("start: s\nlimit: l\nhalt: h\ns *** -> 111, R, s\nl *** -> ***, R, s\n").unwrap();
        let s = p.initial(&Word::zero());
        assert_eq!(limit_snapshot(&p, &[s], None, None), Err(LimitError::NotClosed));
    }

    #[test]
    fn tail_or_residues() {
        // a single 1 at the base, shift 2: every other cell from the base
        let v: Word = "0001|0".parse().unwrap();
        let t = lasso_tail_or(&v, 3, 2);
        for c in 0..40 {
            assert_eq!(t.read(c), c >= 3 && (c - 3) % 2 == 0);
        }
    }
}
