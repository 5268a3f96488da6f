//! Ordinals below ω^ω in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ParseOrdinalError;

/// An ordinal `ω^{e_1}·c_1 + … + ω^{e_k}·c_k` with `e_1 > … > e_k` and every
/// `c_i ≥ 1`. The empty sum is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<(u32, u64)>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(0, n)],
            }
        }
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// `ω^e`.
    pub fn omega_pow(e: u32) -> Self {
        Ordinal {
            terms: vec![(e, 1)],
        }
    }

    /// `ω^e · c`.
    pub fn monomial(e: u32, c: u64) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Ordinal {
                terms: vec![(e, c)],
            }
        }
    }

    /// Builds an ordinal from raw CNF terms, validating the normal form.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, ParseOrdinalError> {
        for w in terms.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err(ParseOrdinalError::NotNormal);
            }
        }
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(ParseOrdinalError::NotNormal);
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|&(e, _)| e == 0)
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    /// Leading exponent; 0 for finite ordinals.
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0)
    }

    /// Least exponent of the normal form (0 for zero). In an ordinal interval
    /// this is the Cantor–Bendixson rank of the point.
    pub fn least_exponent(&self) -> u32 {
        self.terms.last().map_or(0, |t| t.0)
    }

    pub fn is_limit(&self) -> bool {
        self.least_exponent() > 0
    }

    /// Largest coefficient appearing in the normal form.
    pub fn max_coefficient(&self) -> u64 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    pub fn succ(&self) -> Self {
        self.add(&Ordinal::finite(1))
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Self> {
        match self.terms.last() {
            Some(&(0, c)) => {
                let mut terms = self.terms.clone();
                if c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().unwrap().1 -= 1;
                }
                Some(Ordinal { terms })
            }
            _ => None,
        }
    }

    /// Ordinal sum `self + other`.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(&(lead, lc)) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u32, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(e, _)| e >= lead)
            .collect();
        match terms.last_mut() {
            Some(last) if last.0 == lead => {
                last.1 += lc;
                terms.extend_from_slice(&other.terms[1..]);
            }
            _ => terms.extend_from_slice(&other.terms),
        }
        Ordinal { terms }
    }

    /// The `δ` with `self + δ = other`, when `self ≤ other`.
    pub fn left_sub(&self, other: &Ordinal) -> Option<Ordinal> {
        if self > other {
            return None;
        }
        let mut i = 0;
        while i < self.terms.len() && i < other.terms.len() && self.terms[i] == other.terms[i] {
            i += 1;
        }
        if i == other.terms.len() {
            return Some(Ordinal::zero());
        }
        let (oe, oc) = other.terms[i];
        let mut terms = Vec::new();
        match self.terms.get(i) {
            Some(&(se, sc)) if se == oe => terms.push((oe, oc - sc)),
            _ => terms.push((oe, oc)),
        }
        terms.extend_from_slice(&other.terms[i + 1..]);
        Some(Ordinal { terms })
    }

    /// Largest multiple of `ω^j` that is `≤ self` (drops terms of exponent `< j`).
    pub fn floor_to(&self, j: u32) -> Ordinal {
        Ordinal {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|&(e, _)| e >= j)
                .collect(),
        }
    }

    /// `ω^m · self`.
    pub fn shift_up(&self, m: u32) -> Ordinal {
        Ordinal {
            terms: self.terms.iter().map(|&(e, c)| (e + m, c)).collect(),
        }
    }

    /// Inverse of [`Ordinal::shift_up`]; `self` must be a multiple of `ω^m`.
    pub fn shift_down(&self, m: u32) -> Option<Ordinal> {
        if self.terms.iter().any(|&(e, _)| e < m) {
            return None;
        }
        Some(Ordinal {
            terms: self.terms.iter().map(|&(e, c)| (e - m, c)).collect(),
        })
    }

    /// For a nonzero point `q`, the ordinal `γ` with `q = γ + ω^{rank(q)}`.
    pub fn block_base(&self) -> Option<Ordinal> {
        let &(_, c) = self.terms.last()?;
        let mut terms = self.terms.clone();
        if c == 1 {
            terms.pop();
        } else {
            terms.last_mut().unwrap().1 -= 1;
        }
        Some(Ordinal { terms })
    }

    /// Least ordinal of CB-rank exactly `j` strictly above `lower`
    /// (`None` lower means "below zero").
    pub fn next_of_rank(lower: Option<&Ordinal>, j: u32) -> Ordinal {
        match lower {
            None if j == 0 => Ordinal::zero(),
            None => Ordinal::omega_pow(j),
            Some(l) => l.floor_to(j).add(&Ordinal::omega_pow(j)),
        }
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
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
        Ordinal::finite(n)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "w*{c}")?,
                _ => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_term(s: &str) -> Result<Ordinal, ParseOrdinalError> {
    let bad = || ParseOrdinalError::Syntax(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    let (base, coeff) = match s.split_once('*') {
        Some((b, c)) => (b.trim(), c.trim().parse::<u64>().map_err(|_| bad())?),
        None => (s, 1),
    };
    if let Ok(n) = base.parse::<u64>() {
        if s.contains('*') {
            return Err(bad());
        }
        return Ok(Ordinal::finite(n));
    }
    let rest = base
        .strip_prefix('w')
        .or_else(|| base.strip_prefix('ω'))
        .ok_or_else(bad)?;
    let exp = if rest.is_empty() {
        1
    } else {
        rest.strip_prefix('^')
            .ok_or_else(bad)?
            .trim()
            .parse::<u32>()
            .map_err(|_| bad())?
    };
    if exp >= 64 {
        return Err(ParseOrdinalError::ExponentTooLarge(exp));
    }
    Ok(Ordinal::monomial(exp, coeff))
}

impl FromStr for Ordinal {
    type Err = ParseOrdinalError;

    /// Accepts sums such as `w^2*3+w*1+4`; `ω` is accepted for `w`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split('+')
            .map(parse_term)
            .try_fold(Ordinal::zero(), |acc, t| Ok(acc.add(&t?)))
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
