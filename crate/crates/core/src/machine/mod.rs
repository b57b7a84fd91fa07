//! The program model and successor-step semantics.
//!
//! A machine has one head over three tapes (input, scratch, output), plus an
//! optional fourth oracle tape for relativized programs. Each step reads the
//! three (or four) cells under the head at once, writes all of them, moves
//! the head and changes state.

mod asm;
mod numbering;
mod tape;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::word::Word;

pub use asm::{parse_program, AsmError};
pub use numbering::{bits_to_nat, decode, encode, frame, immediate_halter, nat_to_bits, payload, unframe};
pub use tape::Tape;

pub type StateId = u32;

pub const INPUT: usize = 0;
pub const SCRATCH: usize = 1;
pub const OUTPUT: usize = 2;
pub const ORACLE: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    L,
    R,
}

/// One transition: bits to write (bit `t` goes to tape `t`), head move and
/// next state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub write: u8,
    pub mv: Move,
    pub next: StateId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("state `{0}` has no row for read pattern {1}")]
    MissingRow(String, String),
    #[error("start, limit, halt and query states must be pairwise distinct")]
    SpecialStatesClash,
    #[error("halt state must not have outgoing rows")]
    HaltHasRows,
    #[error("a query state requires four tapes")]
    QueryNeedsOracleTape,
    #[error("unsupported tape count {0}")]
    TapeCount(usize),
    #[error("row refers to unknown state id {0}")]
    UnknownState(StateId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("cannot step a halted configuration")]
    Halted,
    #[error("query state reached with no oracle attached")]
    NoOracle,
}

/// Membership answers for set oracles.
pub trait Oracle {
    fn answer(&self, query: &Word) -> bool;
}

impl<F: Fn(&Word) -> bool> Oracle for F {
    fn answer(&self, query: &Word) -> bool {
        self(query)
    }
}

/// A finite transition table with distinguished start, limit and halt states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub name: String,
    state_names: Vec<String>,
    start: StateId,
    limit: StateId,
    halt: StateId,
    query: Option<StateId>,
    tapes: usize,
    // indexed by state * patterns + pattern; None exactly on the halt state
    rows: Vec<Option<Row>>,
}

impl Program {
    /// Validates and assembles a table. `rows[s][p]` is the row of state `s`
    /// on read pattern `p`; the halt state's entry must be empty.
    pub fn new(
        name: impl Into<String>,
        state_names: Vec<String>,
        start: StateId,
        limit: StateId,
        halt: StateId,
        query: Option<StateId>,
        tapes: usize,
        rows: Vec<Vec<Option<Row>>>,
    ) -> Result<Program, ProgramError> {
        if tapes != 3 && tapes != 4 {
            return Err(ProgramError::TapeCount(tapes));
        }
        if query.is_some() && tapes != 4 {
            return Err(ProgramError::QueryNeedsOracleTape);
        }
        let mut special = vec![start, limit, halt];
        special.extend(query);
        if special.iter().enumerate().any(|(i, a)| special[..i].contains(a)) {
            return Err(ProgramError::SpecialStatesClash);
        }
        let n = state_names.len() as StateId;
        if special.iter().any(|&s| s >= n) || rows.len() != state_names.len() {
            return Err(ProgramError::UnknownState(n));
        }
        let patterns = 1usize << tapes;
        let mut flat = Vec::with_capacity(rows.len() * patterns);
        for (s, state_rows) in rows.into_iter().enumerate() {
            if s as StateId == halt {
                if state_rows.iter().any(Option::is_some) {
                    return Err(ProgramError::HaltHasRows);
                }
                flat.extend(std::iter::repeat_n(None, patterns));
                continue;
            }
            for p in 0..patterns {
                let row = state_rows.get(p).copied().flatten().ok_or_else(|| {
                    ProgramError::MissingRow(state_names[s].clone(), pattern_string(p as u8, tapes))
                })?;
                if row.next >= n {
                    return Err(ProgramError::UnknownState(row.next));
                }
                flat.push(Some(row));
            }
        }
        Ok(Program {
            name: name.into(),
            state_names,
            start,
            limit,
            halt,
            query,
            tapes,
            rows: flat,
        })
    }

    pub fn start(&self) -> StateId {
        self.start
    }
    pub fn limit(&self) -> StateId {
        self.limit
    }
    pub fn halt(&self) -> StateId {
        self.halt
    }
    pub fn query(&self) -> Option<StateId> {
        self.query
    }
    pub fn tapes(&self) -> usize {
        self.tapes
    }
    pub fn patterns(&self) -> usize {
        1 << self.tapes
    }
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }
    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s as usize]
    }
    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }
    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| i as StateId)
    }

    /// The row for `state` on `pattern`; `None` for the halt state.
    #[inline]
    pub fn row(&self, state: StateId, pattern: u8) -> Option<Row> {
        self.rows[state as usize * self.patterns() + pattern as usize]
    }

    /// States never entered from the start or limit state.
    pub fn unreachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.start, self.limit];
        stack.extend(self.query);
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s as usize], true) {
                continue;
            }
            for p in 0..self.patterns() {
                if let Some(r) = self.row(s, p as u8) {
                    stack.push(r.next);
                }
            }
        }
        (0..self.state_count() as StateId)
            .filter(|s| !seen[*s as usize] && *s != self.halt)
            .collect()
    }

    /// Initial configuration on input `x`: other tapes zero.
    pub fn initial(&self, input: &Word) -> Snapshot {
        let mut tapes = vec![Word::zero(); self.tapes];
        tapes[INPUT] = input.clone();
        Snapshot {
            state: self.start,
            head: 0,
            tapes,
        }
    }

    /// Initial configuration of a real-oracle machine: oracle tape preloaded.
    pub fn initial_with_oracle_tape(&self, input: &Word, oracle_tape: &Word) -> Snapshot {
        let mut s = self.initial(input);
        if self.tapes == 4 {
            s.tapes[ORACLE] = oracle_tape.clone();
        }
        s
    }

    /// Renders the table in the machine language.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("name: {}\n", self.name));
        out.push_str(&format!("start: {}\n", self.state_name(self.start)));
        out.push_str(&format!("limit: {}\n", self.state_name(self.limit)));
        out.push_str(&format!("halt: {}\n", self.state_name(self.halt)));
        if let Some(q) = self.query {
            out.push_str(&format!("query: {}\n", self.state_name(q)));
        }
        if self.tapes == 4 {
            out.push_str("tapes: 4\n");
        }
        for s in 0..self.state_count() as StateId {
            for p in 0..self.patterns() as u8 {
                if let Some(r) = self.row(s, p) {
                    out.push_str(&format!(
                        "{} {} -> {}, {}, {}\n",
                        self.state_name(s),
                        pattern_string(p, self.tapes),
                        pattern_string(r.write, self.tapes),
                        if r.mv == Move::L { "L" } else { "R" },
                        self.state_name(r.next)
                    ));
                }
            }
        }
        out
    }

    /// The same table under new state names (used to freshen and compare).
    pub fn renamed(&self, f: impl Fn(StateId, &str) -> String) -> Program {
        let mut p = self.clone();
        p.state_names = self
            .state_names
            .iter()
            .enumerate()
            .map(|(i, n)| f(i as StateId, n))
            .collect();
        p
    }

    /// Structural equality up to a bijective renaming of states that fixes
    /// the special states. The bijection is found by walking from the
    /// special states, so states unreachable from them must line up by
    /// order of appearance.
    pub fn equivalent(&self, other: &Program) -> bool {
        if self.tapes != other.tapes || self.state_count() != other.state_count() {
            return false;
        }
        if self.query.is_some() != other.query.is_some() {
            return false;
        }
        let mut map: HashMap<StateId, StateId> = HashMap::new();
        let mut back: HashMap<StateId, StateId> = HashMap::new();
        let mut stack = vec![
            (self.start, other.start),
            (self.limit, other.limit),
            (self.halt, other.halt),
        ];
        if let (Some(a), Some(b)) = (self.query, other.query) {
            stack.push((a, b));
        }
        let mut pending_a: Vec<StateId> = (0..self.state_count() as StateId).collect();
        let mut pending_b: Vec<StateId> = (0..other.state_count() as StateId).collect();
        loop {
            while let Some((a, b)) = stack.pop() {
                match (map.get(&a), back.get(&b)) {
                    (Some(&x), _) if x != b => return false,
                    (_, Some(&y)) if y != a => return false,
                    (Some(_), _) => continue,
                    _ => {}
                }
                map.insert(a, b);
                back.insert(b, a);
                for p in 0..self.patterns() as u8 {
                    match (self.row(a, p), other.row(b, p)) {
                        (None, None) => {}
                        (Some(ra), Some(rb)) => {
                            if ra.write != rb.write || ra.mv != rb.mv {
                                return false;
                            }
                            stack.push((ra.next, rb.next));
                        }
                        _ => return false,
                    }
                }
            }
            pending_a.retain(|s| !map.contains_key(s));
            pending_b.retain(|s| !back.contains_key(s));
            match (pending_a.first(), pending_b.first()) {
                (None, None) => return true,
                (Some(&a), Some(&b)) => stack.push((a, b)),
                _ => return false,
            }
        }
    }
}

/// Pattern bits in tape order, e.g. `101` for input=1, scratch=0, output=1.
pub fn pattern_string(p: u8, tapes: usize) -> String {
    (0..tapes)
        .map(|t| if p >> t & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// A complete configuration: state, head position and tape contents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Snapshot {
    pub state: StateId,
    pub head: usize,
    pub tapes: Vec<Word>,
}

impl Snapshot {
    /// `state,head,input,scratch,output[,oracle]` using word literals.
    pub fn to_record(&self) -> String {
        let mut s = format!("{},{}", self.state, self.head);
        for t in &self.tapes {
            s.push(',');
            s.push_str(&t.to_string());
        }
        s
    }

    pub fn from_record(text: &str) -> Option<Snapshot> {
        let mut parts = text.split(',');
        let state = parts.next()?.parse().ok()?;
        let head = parts.next()?.parse().ok()?;
        let tapes: Vec<Word> = parts.map(|p| p.parse().ok()).collect::<Option<_>>()?;
        if tapes.len() != 3 && tapes.len() != 4 {
            return None;
        }
        Some(Snapshot { state, head, tapes })
    }

    pub fn output(&self) -> &Word {
        &self.tapes[OUTPUT]
    }
}

impl fmt::Display for Snapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_record())
    }
}

/// Mutable working configuration with dense tapes; the engine and the
/// certificate checker both step this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub state: StateId,
    pub head: usize,
    pub tapes: Vec<Tape>,
}

/// What one successor step did, for bookkeeping by callers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepInfo {
    /// A left move was requested at cell 0 and the head stayed put.
    pub clamped: bool,
    pub read: u8,
}

impl Config {
    pub fn from_snapshot(s: &Snapshot) -> Config {
        Config {
            state: s.state,
            head: s.head,
            tapes: s.tapes.iter().map(Tape::from_word).collect(),
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            state: self.state,
            head: self.head,
            tapes: self.tapes.iter().map(Tape::to_word).collect(),
        }
    }

    #[inline]
    pub fn read_pattern(&self) -> u8 {
        let mut p = 0u8;
        for (t, tape) in self.tapes.iter().enumerate() {
            p |= (tape.read(self.head) as u8) << t;
        }
        p
    }

    /// One successor step in place.
    pub fn step(&mut self, prog: &Program, oracle: Option<&dyn Oracle>) -> Result<StepInfo, StepError> {
        if self.state == prog.halt {
            return Err(StepError::Halted);
        }
        if Some(self.state) == prog.query {
            let oracle = oracle.ok_or(StepError::NoOracle)?;
            let answer = oracle.answer(&self.tapes[ORACLE].to_word());
            self.tapes[ORACLE].write(self.head, answer);
        }
        let read = self.read_pattern();
        let row = prog.row(self.state, read).expect("non-halt states have total rows");
        for (t, tape) in self.tapes.iter_mut().enumerate() {
            tape.write(self.head, row.write >> t & 1 == 1);
        }
        let mut clamped = false;
        match row.mv {
            Move::R => self.head += 1,
            Move::L if self.head == 0 => clamped = true,
            Move::L => self.head -= 1,
        }
        self.state = row.next;
        Ok(StepInfo { clamped, read })
    }
}

/// One successor step on an immutable snapshot.
pub fn step(prog: &Program, s: &Snapshot, oracle: Option<&dyn Oracle>) -> Result<Snapshot, StepError> {
    let mut c = Config::from_snapshot(s);
    c.step(prog, oracle)?;
    Ok(c.snapshot())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn right_mover() -> Program {
        parse_program(
            "name: right_mover\nstart: s\nlimit: l\nhalt: h\n\
             s *** -> ***, R, s\nl *** -> ***, R, s\n",
        )
        .unwrap()
    }

    #[test]
    fn right_mover_step() {
        let p = right_mover();
        let s0 = p.initial(&Word::zero());
        let s1 = step(&p, &s0, None).unwrap();
        assert_eq!(s1.state, p.start());
        assert_eq!(s1.head, 1);
        assert!(s1.tapes.iter().all(Word::is_zero));
    }

    #[test]
    fn stepping_halted_is_an_error() {
        let p = right_mover();
        let mut s = p.initial(&Word::zero());
        s.state = p.halt();
        assert_eq!(step(&p, &s, None), Err(StepError::Halted));
    }

    #[test]
    fn input_tape_is_writable() {
        let p = parse_program(
            "name: writer\nstart: s\nlimit: l\nhalt: h\n\
             s 000 -> 100, R, s\ns 1** -> ***, R, s\ns 01* -> ***, R, s\ns 001 -> 001, R, s\n\
             l *** -> ***, R, h\n",
        )
        .unwrap();
        let s1 = step(&p, &p.initial(&Word::zero()), None).unwrap();
        assert_eq!(s1.tapes[INPUT], "1|0".parse().unwrap());
        assert_eq!(s1.head, 1);
    }

    #[test]
    fn left_at_zero_stays() {
        let p = parse_program(
            "name: lefty\nstart: s\nlimit: l\nhalt: h\ns *** -> ***, L, s\nl *** -> ***, L, s\n",
        )
        .unwrap();
        let mut c = Config::from_snapshot(&p.initial(&Word::zero()));
        let info = c.step(&p, None).unwrap();
        assert!(info.clamped);
        assert_eq!(c.head, 0);
    }

    #[test]
    fn query_without_oracle() {
        let p = parse_program(
            "name: asker\ntapes: 4\nstart: s\nlimit: l\nhalt: h\nquery: q\n\
             s **** -> ****, R, q\nq **** -> ****, R, h\nl **** -> ****, R, h\n",
        )
        .unwrap();
        let s1 = step(&p, &p.initial(&Word::zero()), None).unwrap();
        assert_eq!(step(&p, &s1, None), Err(StepError::NoOracle));
        let yes = |_: &Word| true;
        let s2 = step(&p, &s1, Some(&yes)).unwrap();
        assert!(s2.tapes[ORACLE].read(1));
    }

    #[test]
    fn snapshot_record_roundtrip() {
        let s = Snapshot {
            state: 3,
            head: 7,
            tapes: vec!["1|0".parse().unwrap(), Word::zero(), "|10".parse().unwrap()],
        };
        assert_eq!(s.to_record(), "3,7,1|0,|0,|10");
        assert_eq!(Snapshot::from_record(&s.to_record()), Some(s));
    }
}
