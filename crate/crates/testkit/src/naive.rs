use ittm_core::machine::{Move, Program, Snapshot};
use ittm_core::Word;

/// Array-backed configuration. Cells past `cells.len()` are read from the
/// words the run started with, so the initial tape can be infinite.
#[derive(Clone, Debug)]
pub struct Naive {
    pub state: u32,
    pub head: usize,
    base: Vec<Word>,
    cells: Vec<Vec<bool>>,
}

impl Naive {
    pub fn new(s: &Snapshot) -> Naive {
        Naive { state: s.state, head: s.head, base: s.tapes.clone(), cells: vec![Vec::new(); s.tapes.len()] }
    }

    fn ensure(&mut self, upto: usize) {
        for (t, col) in self.cells.iter_mut().enumerate() {
            while col.len() <= upto {
                let i = col.len();
                col.push(self.base[t].read(i));
            }
        }
    }

    pub fn cell(&self, tape: usize, i: usize) -> bool {
        match self.cells[tape].get(i) {
            Some(b) => *b,
            None => self.base[tape].read(i),
        }
    }

    /// One step; `None` once halted. Queries are not modelled.
    pub fn step(&mut self, p: &Program) -> Option<()> {
        if self.state == p.halt() {
            return None;
        }
        assert!(Some(self.state) != p.query(), "naive stepper has no oracle");
        self.ensure(self.head + 1);
        let mut pat = 0u8;
        for t in 0..self.cells.len() {
            pat |= (self.cells[t][self.head] as u8) << t;
        }
        let row = p.row(self.state, pat)?;
        for t in 0..self.cells.len() {
            self.cells[t][self.head] = row.write >> t & 1 == 1;
        }
        match row.mv {
            Move::R => self.head += 1,
            Move::L => self.head = self.head.saturating_sub(1),
        }
        self.state = row.next;
        Some(())
    }

    /// Equality with a snapshot on every cell below `cells`.
    pub fn agrees(&self, s: &Snapshot, cells: usize) -> bool {
        self.state == s.state
            && self.head == s.head
            && (0..self.cells.len()).all(|t| (0..cells).all(|i| self.cell(t, i) == s.tapes[t].read(i)))
    }
}

/// Brute-force limit of the ω-block that starts at `start`, reported on
/// cells `0..cells`. Runs `warmup` steps, then records every cell over a
/// further `window` steps; a cell's limit value is whether it held a 1 at
/// any point of the window. Sound when each inspected cell has settled, or
/// entered its final cycle, before the window opens.
pub fn brute_limit(p: &Program, start: &Snapshot, warmup: u64, window: u64, cells: usize) -> Option<Vec<Vec<bool>>> {
    let mut n = Naive::new(start);
    for _ in 0..warmup {
        n.step(p)?;
    }
    let tapes = start.tapes.len();
    let mut seen = vec![vec![false; cells]; tapes];
    for _ in 0..=window {
        for (t, col) in seen.iter_mut().enumerate() {
            for (i, c) in col.iter_mut().enumerate() {
                *c |= n.cell(t, i);
            }
        }
        n.step(p)?;
    }
    Some(seen)
}
