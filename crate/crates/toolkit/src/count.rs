//! Deciding well-orders by counting through them.
//!
//! The input codes a relation by `x(<n,k>) = 1` iff `n` is below `k`, with
//! the diagonal pairing `<n,k> = (n+k)(n+k+1)/2 + k`. The machine accepts
//! relations whose field lies in `0..FIELD`:
//!
//! 1. finite checks that the relation is a reflexive linear order on its
//!    field, then an `w`-long scan that halts with output 0 on any 1 coding
//!    a pair outside the bound;
//! 2. alternating `w`-phases: find the least element of what is left,
//!    keeping the guess on the scratch tape and flashing a flag whenever the
//!    guess changes, then erase that element from the input tape.
//!
//! At a limit after a find phase the flag reads 1 iff the guess changed
//! infinitely often (no least element: not a well-order); an empty field
//! means every element was counted through. A second flag flashed at every
//! limit marks compound limits, where the scratch flags are wiped.
//!
//! Scratch cells: 0 guess-changed flag, 1..=2 phase, 3..=4 guess,
//! 5 guess exists, 6 limit flag. The result goes to output cell 0.

use ittm_core::machine::Move;
use ittm_core::Program;

use crate::compile::{compile, Act, Controller};

/// Fields are subsets of `0..FIELD`.
pub const FIELD: usize = 4;

const IN: u8 = 1;
const SC: u8 = 2;
const OUT: u8 = 4;

pub fn pair(n: usize, k: usize) -> usize {
    (n + k) * (n + k + 1) / 2 + k
}

/// First cell past every in-bound pair code.
const REGION: usize = (2 * FIELD - 2) * (2 * FIELD - 1) / 2 + FIELD;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Kind {
    /// the cell codes an out-of-bound pair and must be 0
    Zero,
    /// `x(n,k) -> x(n,n) & x(k,k)`
    Field,
    /// `x(n,n) & x(k,k) -> x(n,k) xor x(k,n)`
    Total,
    /// `x(n,k) & x(k,r) -> x(n,r)`
    Trans,
}

impl Kind {
    fn holds(self, b: &[bool]) -> bool {
        match self {
            Kind::Zero => !b[0],
            Kind::Field => !b[0] || (b[1] && b[2]),
            Kind::Total => !(b[0] && b[1]) || (b[2] != b[3]),
            Kind::Trans => !(b[0] && b[1]) || b[2],
        }
    }
}

const PH_SCAN: u8 = 0;
const PH_FOUND: u8 = 1;
const PH_ERASED: u8 = 2;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Task {
    Chk { i: usize, j: usize, bits: u8 },
    Put { cell: usize, lane: u8, val: bool, then: Box<Task> },
    ToScan,
    Flags { j: usize, bits: u8 },
    Find { n: usize, g: Option<usize>, diag_done: bool },
    Erase { g: usize, k: usize, second: bool },
    Accept,
    Run,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum S {
    At { pos: usize, task: Task },
    Scan,
    Run,
}

struct Count {
    checks: Vec<(Vec<usize>, Kind)>,
}

fn puts(list: &[(usize, u8, bool)], then: Task) -> Task {
    list.iter().rev().fold(then, |t, &(cell, lane, val)| Task::Put { cell, lane, val, then: Box::new(t) })
}

impl Count {
    fn new() -> Count {
        let mut checks = Vec::new();
        let inside: Vec<usize> = (0..FIELD).flat_map(|n| (0..FIELD).map(move |k| pair(n, k))).collect();
        for c in 0..REGION {
            if !inside.contains(&c) {
                checks.push((vec![c], Kind::Zero));
            }
        }
        for n in 0..FIELD {
            for k in 0..FIELD {
                checks.push((vec![pair(n, k), pair(n, n), pair(k, k)], Kind::Field));
            }
        }
        for n in 0..FIELD {
            for k in n + 1..FIELD {
                checks.push((vec![pair(n, n), pair(k, k), pair(n, k), pair(k, n)], Kind::Total));
            }
        }
        for n in 0..FIELD {
            for k in 0..FIELD {
                for r in 0..FIELD {
                    if n != k && k != r && n != r {
                        checks.push((vec![pair(n, k), pair(k, r), pair(n, r)], Kind::Trans));
                    }
                }
            }
        }
        Count { checks }
    }

    fn target(&self, task: &Task) -> usize {
        match task {
            Task::Chk { i, j, .. } => self.checks[*i].0[*j],
            Task::Put { cell, .. } => *cell,
            Task::ToScan => REGION,
            Task::Flags { j, .. } => *j,
            Task::Find { n, g, diag_done } => match (diag_done, g) {
                (true, Some(g)) => pair(*n, *g),
                _ => pair(*n, *n),
            },
            Task::Erase { g, k, second } => {
                if *second {
                    pair(*k, *g)
                } else {
                    pair(*g, *k)
                }
            }
            Task::Accept => 0,
            Task::Run => 0,
        }
    }

    /// Move towards the next task from `pos` after writing `w`.
    fn then(&self, w: u8, pos: usize, task: Task) -> Act<S> {
        if let Task::Run = task {
            return Act::go(w, Move::R, S::Run);
        }
        let t = self.target(&task);
        let (mv, pos) = if t < pos { (Move::L, pos - 1) } else { (Move::R, pos + 1) };
        Act::go(w, mv, S::At { pos, task })
    }

    fn find_from(&self, n: usize, g: Option<usize>) -> Task {
        if n < FIELD {
            return Task::Find { n, g, diag_done: false };
        }
        let g_bits = g.unwrap_or(0);
        puts(
            &[
                (0, SC, false),
                (3, SC, g_bits & 1 == 1),
                (4, SC, g_bits & 2 == 2),
                (5, SC, g.is_some()),
                (1, SC, PH_FOUND & 1 == 1),
                (2, SC, PH_FOUND & 2 == 2),
                (6, SC, false),
            ],
            Task::Run,
        )
    }

    fn after_erase(&self) -> Task {
        puts(&[(1, SC, PH_ERASED & 1 == 1), (2, SC, PH_ERASED & 2 == 2), (6, SC, false)], Task::Run)
    }

    /// Carries out `task` on the cell under the head.
    fn act(&self, pos: usize, task: Task, r: u8) -> Act<S> {
        let x = r & IN != 0;
        match task {
            Task::Chk { i, j, bits } => {
                let bits = bits | (x as u8) << j;
                let (cells, kind) = &self.checks[i];
                if j + 1 < cells.len() {
                    return self.then(r, pos, Task::Chk { i, j: j + 1, bits });
                }
                let b: Vec<bool> = (0..cells.len()).map(|t| bits >> t & 1 == 1).collect();
                if !kind.holds(&b) {
                    return Act::halt(r);
                }
                let next = if i + 1 < self.checks.len() {
                    Task::Chk { i: i + 1, j: 0, bits: 0 }
                } else {
                    puts(&[(1, SC, PH_SCAN & 1 == 1), (2, SC, PH_SCAN & 2 == 2)], Task::ToScan)
                };
                self.then(r, pos, next)
            }
            Task::Put { lane, val, then, .. } => {
                let w = if val { r | lane } else { r & !lane };
                self.then(w, pos, *then)
            }
            Task::ToScan => Act::go(r, Move::R, S::Scan),
            Task::Flags { j, bits } => {
                let f = r & SC != 0;
                let bits = bits | (f as u8) << j;
                if j < 6 {
                    return self.then(r, pos, Task::Flags { j: j + 1, bits });
                }
                // flash the limit flag; every branch below clears it again
                let w = r | SC;
                let bit = |t: usize| bits >> t & 1 == 1;
                let phase = bits >> 1 & 3;
                if bit(6) {
                    let wipe: Vec<(usize, u8, bool)> = (0..6).map(|c| (c, SC, false)).collect();
                    return self.then(w, pos, puts(&wipe, self.find_from(0, None)));
                }
                match phase {
                    PH_FOUND if bit(0) => Act::halt(r),
                    PH_FOUND if !bit(5) => self.then(w, pos, Task::Accept),
                    PH_FOUND => {
                        let g = (bit(3) as usize) | (bit(4) as usize) << 1;
                        self.then(w, pos, Task::Erase { g, k: 0, second: false })
                    }
                    _ => self.then(w, pos, self.find_from(0, None)),
                }
            }
            Task::Find { n, g, diag_done: false } => {
                if !x {
                    return self.then(r, pos, self.find_from(n + 1, g));
                }
                match g {
                    None => self.flash_then(r, pos, self.find_from(n + 1, Some(n))),
                    Some(_) => self.then(r, pos, Task::Find { n, g, diag_done: true }),
                }
            }
            Task::Find { n, g, diag_done: true } => {
                if x {
                    self.flash_then(r, pos, self.find_from(n + 1, Some(n)))
                } else {
                    self.then(r, pos, self.find_from(n + 1, g))
                }
            }
            Task::Erase { g, k, second } => {
                let w = r & !IN;
                let next = match (second, k + 1 < FIELD) {
                    (false, _) => Task::Erase { g, k, second: true },
                    (true, true) => Task::Erase { g, k: k + 1, second: false },
                    (true, false) => self.after_erase(),
                };
                self.then(w, pos, next)
            }
            Task::Accept => Act::halt(r | OUT),
            Task::Run => Act::go(r, Move::R, S::Run),
        }
    }

    /// Flashes the guess-changed flag at cell 0 on the way to `next`.
    fn flash_then(&self, r: u8, pos: usize, next: Task) -> Act<S> {
        self.then(r, pos, Task::Put { cell: 0, lane: SC, val: true, then: Box::new(next) })
    }
}

impl Controller for Count {
    type State = S;

    fn start(&self) -> S {
        S::At { pos: 0, task: Task::Chk { i: 0, j: 0, bits: 0 } }
    }

    fn limit(&self) -> S {
        S::At { pos: 0, task: Task::Flags { j: 0, bits: 0 } }
    }

    fn step(&self, st: &S, r: u8) -> Act<S> {
        match st {
            S::Run => Act::go(r, Move::R, S::Run),
            S::Scan if r & IN != 0 => Act::halt(r),
            S::Scan => Act::go(r, Move::R, S::Scan),
            S::At { pos, task } => {
                let t = self.target(task);
                if t == *pos {
                    self.act(*pos, task.clone(), r)
                } else if t < *pos {
                    Act::go(r, Move::L, S::At { pos: pos - 1, task: task.clone() })
                } else {
                    Act::go(r, Move::R, S::At { pos: pos + 1, task: task.clone() })
                }
            }
        }
    }
}

/// The well-order decider.
pub fn count_through() -> Program {
    compile("count_through", &Count::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ittm_core::{run, RunBudget, Verdict, Word};

    fn decide(rel: &[(usize, usize)]) -> bool {
        let mut bits = vec![false; 60];
        for &(n, k) in rel {
            bits[pair(n, k)] = true;
        }
        let p = count_through();
        match run(&p, &Word::finite(bits), &RunBudget::default(), None).unwrap().verdict {
            Verdict::Halted { output, .. } => output == Word::finite(vec![true]),
            v => panic!("{rel:?}: {v:?}"),
        }
    }

    #[test]
    fn small_orders() {
        assert!(decide(&[]));
        assert!(decide(&[(2, 2)]));
        assert!(decide(&[(0, 0), (1, 1), (1, 0)]));
        assert!(decide(&[(0, 0), (1, 1), (2, 2), (3, 3), (0, 1), (1, 2), (0, 2), (3, 0), (3, 1), (3, 2)]));
        assert!(!decide(&[(0, 0), (1, 1)]));
        assert!(!decide(&[(0, 1)]));
        assert!(!decide(&[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]));
        assert!(!decide(&[(4, 4)]));
        assert!(!decide(&[(0, 0), (5, 0)]));
    }

    #[test]
    fn far_out_of_bound_pairs_are_rejected() {
        let p = count_through();
        let mut bits = vec![false; 200];
        bits[199] = true;
        let out = run(&p, &Word::finite(bits), &RunBudget::default(), None).unwrap();
        assert!(matches!(out.verdict, Verdict::Halted { ref output, .. } if output.is_zero()));
    }
}
