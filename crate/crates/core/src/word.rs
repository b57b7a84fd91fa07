//! Eventually periodic infinite binary words.
//!
//! A [`Word`] is `prefix` followed by `period` repeated forever. Words are
//! kept canonical (shortest period, then shortest prefix) so structural
//! equality is equality of the infinite sequences.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("word literal must look like `prefix|period`, got {0:?}")]
    MissingBar(String),
    #[error("invalid bit {0:?} in word literal")]
    BadBit(char),
    #[error("empty period in word literal")]
    EmptyPeriod,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Word {
    /// The all-zero word.
    pub fn zero() -> Self {
        Word {
            prefix: Vec::new(),
            period: vec![false],
        }
    }

    /// The all-one word.
    pub fn ones() -> Self {
        Word {
            prefix: Vec::new(),
            period: vec![true],
        }
    }

    /// Builds and canonicalizes. Panics on an empty period.
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Self {
        assert!(!period.is_empty(), "a word needs a nonempty period");
        let mut w = Word { prefix, period };
        w.canonicalize();
        w
    }

    /// A finitely supported word: `bits` followed by zeros.
    pub fn finite(bits: Vec<bool>) -> Self {
        Self::new(bits, vec![false])
    }

    /// The word `1 0 0 ...` (the real 1) for `true`, zero otherwise.
    pub fn bit(b: bool) -> Self {
        if b {
            Self::finite(vec![true])
        } else {
            Self::zero()
        }
    }

    /// Finitely supported word holding the binary digits of `n`, least
    /// significant first.
    pub fn from_nat_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Self::finite(bits.into_iter().collect())
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    /// Length of the window `prefix + period` that determines the word.
    pub fn window(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.period == [false]
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.is_finitely_supported()
    }

    /// Index one past the last 1, for finitely supported words.
    pub fn support_len(&self) -> Option<usize> {
        self.is_finitely_supported().then_some(self.prefix.len())
    }

    fn canonicalize(&mut self) {
        // shortest period: the primitive root of the period block
        let n = self.period.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| self.period[i] == self.period[i - d]) {
                self.period.truncate(d);
                break;
            }
        }
        // shortest prefix: absorb trailing prefix bits into a rotated period
        while let Some(&last) = self.prefix.last() {
            if last != *self.period.last().unwrap() {
                break;
            }
            self.prefix.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn read(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// The first `n` bits.
    pub fn bits(&self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.read(i)).collect()
    }

    pub fn write(&self, i: usize, b: bool) -> Word {
        if self.read(i) == b {
            return self.clone();
        }
        let mut prefix = self.bits((i + 1).max(self.prefix.len()));
        prefix[i] = b;
        // keep the period phase aligned with the new prefix length
        let start = prefix.len();
        let period = (0..self.period.len()).map(|k| self.read(start + k)).collect();
        Word::new(prefix, period)
    }

    /// The word `self` with its first `k` cells dropped.
    pub fn suffix(&self, k: usize) -> Word {
        let n = self.prefix.len().max(k) - k;
        let prefix = (0..n).map(|i| self.read(k + i)).collect();
        let period = (0..self.period.len()).map(|i| self.read(k + n + i)).collect();
        Word::new(prefix, period)
    }

    /// `bits` followed by `self`.
    pub fn prepend(&self, bits: &[bool]) -> Word {
        let mut prefix = bits.to_vec();
        prefix.extend_from_slice(&self.prefix);
        Word::new(prefix, self.period.clone())
    }

    /// Cellwise maximum of a nonempty list.
    pub fn pointwise_or(words: &[Word]) -> Word {
        assert!(!words.is_empty(), "pointwise_or needs at least one word");
        let pre = words.iter().map(|w| w.prefix.len()).max().unwrap();
        let per = words.iter().map(|w| w.period.len()).fold(1, lcm);
        let bits: Vec<bool> = (0..pre + per)
            .map(|i| words.iter().any(|w| w.read(i)))
            .collect();
        Word::new(bits[..pre].to_vec(), bits[pre..].to_vec())
    }

    pub fn or(&self, other: &Word) -> Word {
        Self::pointwise_or(&[self.clone(), other.clone()])
    }

    /// True when `self` is cellwise below `other`.
    pub fn is_below(&self, other: &Word) -> bool {
        let pre = self.prefix.len().max(other.prefix.len());
        let per = lcm(self.period.len(), other.period.len());
        (0..pre + per).all(|i| !self.read(i) || other.read(i))
    }

    /// True iff every cell that is 0 in `reference` is 0 in each of `others`.
    pub fn zeros_preserved(reference: &Word, others: &[Word]) -> bool {
        others.iter().all(|w| w.is_below(reference))
    }

    /// Equality of the denoted sequences.
    pub fn canonical_eq(&self, other: &Word) -> bool {
        self == other
    }

    /// Interleaves two words: `a` on even cells, `b` on odd cells.
    pub fn interleave(a: &Word, b: &Word) -> Word {
        let pre = a.prefix.len().max(b.prefix.len());
        let per = lcm(a.period.len(), b.period.len());
        let bits: Vec<bool> = (0..2 * (pre + per))
            .map(|i| if i % 2 == 0 { a.read(i / 2) } else { b.read(i / 2) })
            .collect();
        Word::new(bits[..2 * pre].to_vec(), bits[2 * pre..].to_vec())
    }

    /// Cells `offset, offset + stride, offset + 2*stride, ...`.
    pub fn stride(&self, offset: usize, stride: usize) -> Word {
        assert!(stride > 0);
        let pre = self.prefix.len().div_ceil(stride);
        let per = self.period.len();
        let bits: Vec<bool> = (0..pre + per)
            .map(|i| self.read(offset + i * stride))
            .collect();
        Word::new(bits[..pre].to_vec(), bits[pre..].to_vec())
    }
}

impl Default for Word {
    fn default() -> Self {
        Word::zero()
    }
}

fn bits_str(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", bits_str(&self.prefix), bits_str(&self.period))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>, WordError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(WordError::BadBit(other)),
        })
        .collect()
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (pre, per) = s
            .split_once('|')
            .ok_or_else(|| WordError::MissingBar(s.to_string()))?;
        let period = parse_bits(per)?;
        if period.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        Ok(Word::new(parse_bits(pre)?, period))
    }
}
