//! Ordinals below ω^ω as coefficient vectors, lowest exponent first.

use ittm_core::Ordinal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf(pub Vec<u64>);

impl Cnf {
    fn trimmed(mut v: Vec<u64>) -> Cnf {
        while v.last() == Some(&0) {
            v.pop();
        }
        Cnf(v)
    }

    fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|&c| c > 0)
    }

    pub fn add(&self, b: &Cnf) -> Cnf {
        let Some(k) = b.degree() else { return self.clone() };
        let len = self.0.len().max(b.0.len());
        let mut out = vec![0; len];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.0.get(i).copied().unwrap_or(0);
            let bb = b.0.get(i).copied().unwrap_or(0);
            *o = match i.cmp(&k) {
                std::cmp::Ordering::Greater => a,
                std::cmp::Ordering::Equal => a + bb,
                std::cmp::Ordering::Less => bb,
            };
        }
        Cnf::trimmed(out)
    }

    /// `a * b` term by term over `b`, highest term first.
    pub fn mul(&self, b: &Cnf) -> Cnf {
        let Some(d) = self.degree() else { return Cnf(vec![]) };
        let mut acc = Cnf(vec![]);
        for j in (0..b.0.len()).rev() {
            let m = b.0[j];
            if m == 0 {
                continue;
            }
            let piece = if j > 0 {
                let mut v = vec![0; d + j + 1];
                v[d + j] = m;
                Cnf(v)
            } else {
                let mut v = self.0.clone();
                v[d] *= m;
                Cnf::trimmed(v)
            };
            acc = acc.add(&piece);
        }
        acc
    }

    pub fn lt(&self, b: &Cnf) -> bool {
        let len = self.0.len().max(b.0.len());
        for i in (0..len).rev() {
            let x = self.0.get(i).copied().unwrap_or(0);
            let y = b.0.get(i).copied().unwrap_or(0);
            if x != y {
                return x < y;
            }
        }
        false
    }

    pub fn to_ordinal(&self) -> Ordinal {
        Ordinal::from_coeffs(&self.0)
    }

    /// Hand-written notation: `w^k*c` terms joined by `+`, highest first.
    pub fn notation(&self) -> String {
        let mut parts = Vec::new();
        for k in (0..self.0.len()).rev() {
            let c = self.0[k];
            if c == 0 {
                continue;
            }
            let base = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{k}"),
            };
            parts.push(match (k, c) {
                (0, c) => c.to_string(),
                (_, 1) => base,
                (_, c) => format!("{base}*{c}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}
