//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! Values are immutable and canonical: two equal ordinals always carry the
//! same term list, so the derived `Eq`/`Hash` agree with ordinal equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// One `w^exp * coeff` summand of a Cantor normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

/// An ordinal below epsilon-zero. The empty term list is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-canonical notation at byte {pos}: {msg}")]
    NonCanonical { pos: usize, msg: String },
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![Term {
                    exp: Self::zero(),
                    coeff: n,
                }],
            }
        }
    }

    pub fn one() -> Self {
        Self::nat(1)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    /// `w^exp`.
    pub fn omega_pow(exp: Ordinal) -> Self {
        Ordinal {
            terms: vec![Term { exp, coeff: 1 }],
        }
    }

    /// `w^k` for a finite exponent.
    pub fn omega_pow_nat(k: u64) -> Self {
        Self::omega_pow(Self::nat(k))
    }

    /// Builds from raw terms, rejecting anything that is not already canonical.
    pub fn from_terms(terms: Vec<Term>) -> Option<Self> {
        for (i, t) in terms.iter().enumerate() {
            if t.coeff == 0 {
                return None;
            }
            if i > 0 && terms[i - 1].exp <= t.exp {
                return None;
            }
        }
        Some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Finite ordinals are exactly the ones without a positive exponent.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// The trailing finite part `n` in `lambda + n`.
    pub fn finite_part(&self) -> u64 {
        match self.terms.last() {
            Some(t) if t.exp.is_zero() => t.coeff,
            _ => 0,
        }
    }

    /// The `lambda` in `lambda + n`: zero or a limit.
    pub fn limit_part(&self) -> Ordinal {
        let mut terms = self.terms.clone();
        if terms.last().is_some_and(|t| t.exp.is_zero()) {
            terms.pop();
        }
        Ordinal { terms }
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.finite_part() == 0
    }

    pub fn is_successor(&self) -> bool {
        self.finite_part() > 0
    }

    /// Exponent of the leading term; zero for zero.
    pub fn leading_exp(&self) -> Ordinal {
        self.terms
            .first()
            .map(|t| t.exp.clone())
            .unwrap_or_default()
    }

    /// Exponent of the last term: the largest `e` with `w^e` dividing `self`
    /// on the left-hand side (zero is reported as exponent zero).
    pub fn trailing_exp(&self) -> Ordinal {
        self.terms
            .last()
            .map(|t| t.exp.clone())
            .unwrap_or_default()
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    pub fn add_nat(&self, n: u64) -> Ordinal {
        self.add(&Ordinal::nat(n))
    }

    /// Ordinal addition (not commutative).
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(head) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .take_while(|t| t.exp >= head.exp)
            .cloned()
            .collect();
        let mut rest = other.terms.iter();
        if let Some(last) = terms.last_mut() {
            if last.exp == head.exp {
                last.coeff = last
                    .coeff
                    .checked_add(head.coeff)
                    .expect("ordinal coefficient overflow");
                rest.next();
            }
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    /// Ordinal multiplication (not commutative).
    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = self.terms.first() else {
            return Ordinal::zero();
        };
        let mut terms = Vec::new();
        for t in &other.terms {
            if t.exp.is_zero() {
                terms.push(Term {
                    exp: lead.exp.clone(),
                    coeff: lead
                        .coeff
                        .checked_mul(t.coeff)
                        .expect("ordinal coefficient overflow"),
                });
                terms.extend(self.terms[1..].iter().cloned());
            } else {
                terms.push(Term {
                    exp: lead.exp.add(&t.exp),
                    coeff: t.coeff,
                });
            }
        }
        Ordinal { terms }
    }

    pub fn mul_nat(&self, n: u64) -> Ordinal {
        self.mul(&Ordinal::nat(n))
    }

    /// Least limit ordinal strictly above `self`.
    pub fn next_limit(&self) -> Ordinal {
        self.limit_part().add(&Ordinal::omega())
    }

    /// Least multiple of `w^(level+1)` strictly above `self`, i.e. the stage
    /// where a level-`level` block that starts at or before `self` ends.
    pub fn next_multiple_of_omega_pow(&self, power: u64) -> Ordinal {
        let p = Ordinal::nat(power);
        let terms: Vec<Term> = self.terms.iter().filter(|t| t.exp >= p).cloned().collect();
        Ordinal { terms }.add(&Ordinal::omega_pow(p))
    }

    /// True when `self` is a multiple of `w^power` (zero included).
    pub fn is_multiple_of_omega_pow(&self, power: u64) -> bool {
        let p = Ordinal::nat(power);
        self.terms.iter().all(|t| t.exp >= p)
    }

    /// Sum of a list, left to right.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Ordinal>) -> Ordinal {
        items
            .into_iter()
            .fold(Ordinal::zero(), |acc, x| acc.add(x))
    }

    /// True when every exponent is finite, i.e. `self < w^w`.
    pub fn below_omega_omega(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_finite())
    }

    /// Coefficient of `w^k` (zero when absent).
    pub fn coeff_of_pow(&self, k: u64) -> u64 {
        let e = Ordinal::nat(k);
        self.terms
            .iter()
            .find(|t| t.exp == e)
            .map(|t| t.coeff)
            .unwrap_or(0)
    }

    /// Builds `w^(k-1)*c_{k-1} + ... + w*c_1 + c_0` from finite coefficients,
    /// indexed by exponent.
    pub fn from_coeffs(coeffs: &[u64]) -> Ordinal {
        let terms = coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c > 0)
            .map(|(k, c)| Term {
                exp: Ordinal::nat(k as u64),
                coeff: *c,
            })
            .collect();
        Ordinal { terms }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::nat(n)
    }
}

// Exponents print bare when they are a number, `w`, or a coefficient-free
// single power chain; anything else is parenthesised.
fn fmt_exponent(e: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e.terms.as_slice() {
        [t] if t.coeff == 1 && !t.exp.is_zero() => {
            write!(f, "w")?;
            if t.exp != Ordinal::one() {
                write!(f, "^")?;
                fmt_exponent(&t.exp, f)?;
            }
            Ok(())
        }
        _ if e.is_finite() => write!(f, "{}", e.as_nat().unwrap()),
        _ => write!(f, "({e})"),
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
                continue;
            }
            write!(f, "w")?;
            if t.exp != Ordinal::one() {
                write!(f, "^")?;
                fmt_exponent(&t.exp, f)?;
            }
            if t.coeff != 1 {
                write!(f, "*{}", t.coeff)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let o = p.ordinal()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        Ok(o)
    }
}

/// Parses the ASCII notation, e.g. `w^2 + w*3 + 5`.
pub fn parse_ordinal(text: &str) -> Result<Ordinal, OrdinalError> {
    text.parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> OrdinalError {
        OrdinalError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OrdinalError::Syntax {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn ordinal(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut terms: Vec<Term> = Vec::new();
        loop {
            let start = {
                self.skip_ws();
                self.pos
            };
            let term = self.term()?;
            let Some(term) = term else {
                // a bare "0" is only allowed as the whole ordinal
                if !terms.is_empty() || self.peek() == Some(b'+') {
                    return Err(OrdinalError::NonCanonical {
                        pos: start,
                        msg: "zero summand".into(),
                    });
                }
                return Ok(Ordinal::zero());
            };
            if let Some(prev) = terms.last() {
                if prev.exp <= term.exp {
                    return Err(OrdinalError::NonCanonical {
                        pos: start,
                        msg: format!(
                            "exponents must strictly decrease (w^{} followed by w^{})",
                            prev.exp, term.exp
                        ),
                    });
                }
            }
            terms.push(term);
            if !self.eat(b'+') {
                break;
            }
        }
        Ok(Ordinal { terms })
    }

    // `None` is the literal zero.
    fn term(&mut self) -> Result<Option<Term>, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                let coeff = if self.eat(b'*') { self.nat()? } else { 1 };
                if coeff == 0 {
                    return Err(OrdinalError::NonCanonical {
                        pos: self.pos,
                        msg: "zero coefficient".into(),
                    });
                }
                if exp.is_zero() {
                    return Ok(Some(Term {
                        exp: Ordinal::zero(),
                        coeff,
                    }));
                }
                Ok(Some(Term { exp, coeff }))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.nat()?;
                Ok((n > 0).then(|| Term {
                    exp: Ordinal::zero(),
                    coeff: n,
                }))
            }
            _ => Err(self.syntax("expected 'w' or a number")),
        }
    }

    fn exponent(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let o = self.ordinal()?;
                if !self.eat(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(o)
            }
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.eat(b'^') {
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                Ok(Ordinal::omega_pow(exp))
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::nat(self.nat()?)),
            _ => Err(self.syntax("expected an exponent")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        assert!(o("0").is_zero());
        let x = o("w^2 + w*3 + 5");
        let shape: Vec<(u64, u64)> = x
            .terms()
            .iter()
            .map(|t| (t.exp.as_nat().unwrap(), t.coeff))
            .collect();
        assert_eq!(shape, vec![(2, 1), (1, 3), (0, 5)]);
        assert!(matches!(
            "w + w".parse::<Ordinal>(),
            Err(OrdinalError::NonCanonical { .. })
        ));
        assert!(matches!(
            "3 + w".parse::<Ordinal>(),
            Err(OrdinalError::NonCanonical { .. })
        ));
        assert!(matches!(
            "w^".parse::<Ordinal>(),
            Err(OrdinalError::Syntax { pos: 2, .. })
        ));
        assert!("w*0".parse::<Ordinal>().is_err());
        assert!("w+0".parse::<Ordinal>().is_err());
    }

    #[test]
    fn print_canonical() {
        for s in ["0", "7", "w", "w*2+1", "w^2+w*3+5", "w^w", "w^(w+1)*2+w", "w^w^2"] {
            assert_eq!(o(s).to_string(), s);
        }
        assert_eq!(o("w^1*1").to_string(), "w");
        assert_eq!(o("w^0*4").to_string(), "4");
    }

    #[test]
    fn compare_examples() {
        assert!(o("w") < o("w*2"));
        assert!(o("w^2") > o("w*999+7"));
        assert_eq!(o("w+1").cmp(&o("w+1")), Ordering::Equal);
        assert!(o("w^w") > o("w^5*100"));
    }

    #[test]
    fn add_examples() {
        assert_eq!(o("1").add(&o("w")), o("w"));
        assert_eq!(o("w^2").add(&o("w")), o("w^2+w"));
        assert_eq!(o("w+3").add(&o("w")), o("w*2"));
        assert_eq!(o("w*2+5").add(&o("w^2+1")), o("w^2+1"));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(o("2").mul(&o("w")), o("w"));
        assert_eq!(o("w").mul(&o("2")).mul(&o("w")), o("w^2"));
        assert!(o("w^2+3").mul(&o("0")).is_zero());
        assert_eq!(o("w+1").mul(&o("3")), o("w*3+1"));
        assert_eq!(o("w+1").mul(&o("w+1")), o("w^2+w+1"));
    }

    #[test]
    fn next_limit_examples() {
        assert_eq!(o("0").next_limit(), o("w"));
        assert_eq!(o("w+5").next_limit(), o("w*2"));
        assert_eq!(o("w^2").next_limit(), o("w^2+w"));
        assert_eq!(o("w*3+2").next_multiple_of_omega_pow(2), o("w^2"));
        assert_eq!(o("w^2+w").next_multiple_of_omega_pow(2), o("w^2*2"));
        assert_eq!(o("w^2").next_multiple_of_omega_pow(1), o("w^2+w"));
    }
}
