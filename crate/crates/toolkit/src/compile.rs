//! Programs from finite-control descriptions.
//!
//! A [`Controller`] describes a machine by a step function over a Rust state
//! type. [`compile`] walks every state reachable from the start, limit and
//! query states and emits the transition table.

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use ittm_core::machine::{Move, Row, StateId};
use ittm_core::Program;

/// What one step does. `next = None` halts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Act<S> {
    pub write: u8,
    pub mv: Move,
    pub next: Option<S>,
}

impl<S> Act<S> {
    pub fn go(write: u8, mv: Move, next: S) -> Self {
        Act { write, mv, next: Some(next) }
    }

    pub fn halt(write: u8) -> Self {
        Act { write, mv: Move::R, next: None }
    }
}

pub trait Controller {
    type State: Clone + Eq + Hash + Debug;

    fn tapes(&self) -> usize {
        3
    }
    fn start(&self) -> Self::State;
    fn limit(&self) -> Self::State;
    fn query(&self) -> Option<Self::State> {
        None
    }
    fn step(&self, state: &Self::State, read: u8) -> Act<Self::State>;
}

fn sanitize(raw: &str) -> String {
    let mut out = String::new();
    let mut gap = false;
    for c in raw.chars() {
        if c.is_ascii_alphanumeric() {
            if gap && !out.is_empty() {
                out.push('_');
            }
            out.push(c);
            gap = false;
        } else {
            gap = true;
        }
    }
    out.truncate(48);
    if out.is_empty() {
        out.push('q');
    }
    out
}

/// Compiles `c`. Panics if the controller's special states coincide.
pub fn compile<C: Controller>(name: &str, c: &C) -> Program {
    let patterns = 1usize << c.tapes();
    let mut ids: HashMap<C::State, StateId> = HashMap::new();
    let mut states: Vec<C::State> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: C::State, states: &mut Vec<C::State>, queue: &mut VecDeque<StateId>| -> StateId {
        *ids.entry(s.clone()).or_insert_with(|| {
            states.push(s);
            queue.push_back(states.len() as StateId - 1);
            states.len() as StateId - 1
        })
    };
    let start = intern(c.start(), &mut states, &mut queue);
    let limit = intern(c.limit(), &mut states, &mut queue);
    let query = c.query().map(|q| intern(q, &mut states, &mut queue));
    assert!(start != limit && Some(start) != query && Some(limit) != query, "special states coincide");

    // rows refer to the halt state by a placeholder fixed up below
    const HALT: StateId = StateId::MAX;
    let mut table: Vec<Vec<Option<Row>>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let s = states[id as usize].clone();
        let mut rows = Vec::with_capacity(patterns);
        for p in 0..patterns as u8 {
            let act = c.step(&s, p);
            let next = match act.next {
                Some(n) => intern(n, &mut states, &mut queue),
                None => HALT,
            };
            rows.push(Some(Row { write: act.write, mv: act.mv, next }));
        }
        if table.len() <= id as usize {
            table.resize(id as usize + 1, Vec::new());
        }
        table[id as usize] = rows;
    }
    let halt = states.len() as StateId;
    for rows in &mut table {
        for r in rows.iter_mut().flatten() {
            if r.next == HALT {
                r.next = halt;
            }
        }
    }
    table.push(vec![None; patterns]);

    let mut names: Vec<String> = Vec::with_capacity(states.len() + 1);
    let mut used: HashMap<String, usize> = HashMap::new();
    for s in states.iter().map(|s| sanitize(&format!("{s:?}"))).chain(["halt".to_string()]) {
        let n = used.entry(s.clone()).or_insert(0);
        *n += 1;
        names.push(if *n == 1 { s } else { format!("{s}.{n}") });
    }
    Program::new(name, names, start, limit, halt, query, c.tapes(), table).expect("compiled tables are complete")
}

/// Read pattern helpers for three and four tape machines.
pub fn bit(pattern: u8, tape: usize) -> bool {
    pattern >> tape & 1 == 1
}

pub fn with_bit(pattern: u8, tape: usize, b: bool) -> u8 {
    if b {
        pattern | 1 << tape
    } else {
        pattern & !(1 << tape)
    }
}
