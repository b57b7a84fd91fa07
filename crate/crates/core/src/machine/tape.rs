use crate::word::Word;

/// A dense, growable view of a [`Word`]: cells `[0, len)` are stored
/// explicitly and everything beyond falls back to the base word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tape {
    cells: Vec<bool>,
    base: Word,
}

impl Tape {
    pub fn from_word(w: &Word) -> Tape {
        Tape {
            cells: w.prefix().to_vec(),
            base: w.clone(),
        }
    }

    #[inline]
    pub fn read(&self, i: usize) -> bool {
        match self.cells.get(i) {
            Some(&b) => b,
            None => self.base.read(i),
        }
    }

    #[inline]
    pub fn write(&mut self, i: usize, b: bool) {
        if i >= self.cells.len() {
            if self.base.read(i) == b {
                return;
            }
            let base = &self.base;
            let start = self.cells.len();
            self.cells.extend((start..=i).map(|j| base.read(j)));
        }
        self.cells[i] = b;
    }

    /// Number of explicitly stored cells.
    pub fn dense_len(&self) -> usize {
        self.cells.len()
    }

    pub fn to_word(&self) -> Word {
        self.base.suffix(self.cells.len()).prepend(&self.cells)
    }

    /// The word obtained by dropping the first `k` cells.
    pub fn suffix_word(&self, k: usize) -> Word {
        if k >= self.cells.len() {
            self.base.suffix(k)
        } else {
            self.base.suffix(self.cells.len()).prepend(&self.cells[k..])
        }
    }

    /// True when cells from `a` on agree with cells from `b` on, in `other`.
    pub fn suffix_eq(&self, a: usize, other: &Tape, b: usize) -> bool {
        // compare the explicit parts cell by cell, then the tails as words
        let span = (self.cells.len().saturating_sub(a)).max(other.cells.len().saturating_sub(b));
        if (0..span).any(|i| self.read(a + i) != other.read(b + i)) {
            return false;
        }
        self.suffix_word(a + span) == other.suffix_word(b + span)
    }
}
