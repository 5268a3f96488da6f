use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ordinal_space::Ordinal;

/// Value rule of one segment. `Linear` is only meaningful on finite points,
/// where point `k` gets `slope·k + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Const(i64),
    Linear { slope: i64, offset: i64 },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RuleJson {
    Const(i64),
    Linear([i64; 2]),
}

impl Rule {
    pub fn linear(slope: i64, offset: i64) -> Rule {
        Rule::Linear { slope, offset }.normalized()
    }

    pub fn normalized(self) -> Rule {
        match self {
            Rule::Linear { slope: 0, offset } => Rule::Const(offset),
            r => r,
        }
    }

    pub fn coeffs(self) -> (i64, i64) {
        match self {
            Rule::Const(c) => (0, c),
            Rule::Linear { slope, offset } => (slope, offset),
        }
    }

    pub fn is_const(self) -> bool {
        matches!(self, Rule::Const(_))
    }

    pub fn at_finite(self, k: u64) -> i64 {
        let (a, b) = self.coeffs();
        a * k as i64 + b
    }

    /// Value at `p`, or `None` for a linear rule at an infinite point.
    pub fn at(self, p: &Ordinal) -> Option<i64> {
        match (self, p.as_finite()) {
            (Rule::Const(c), _) => Some(c),
            (r, Some(k)) => Some(r.at_finite(k)),
            _ => None,
        }
    }

    /// Limit of the rule along the finite points, as seen from a limit point.
    pub fn liminf(self) -> Option<Bound> {
        match self {
            Rule::Const(c) => u64::try_from(c).ok().map(Bound::Finite),
            Rule::Linear { slope, .. } if slope > 0 => Some(Bound::Infinite),
            Rule::Linear { .. } => None,
        }
    }

    pub fn scale(self, t: i64) -> Rule {
        let (a, b) = self.coeffs();
        Rule::linear(a * t, b * t)
    }

    /// Sum or difference of two rules.
    pub fn plus(self, other: Rule, sign: i64) -> Rule {
        let (a1, b1) = self.coeffs();
        let (a2, b2) = other.coeffs();
        Rule::linear(a1 + sign * a2, b1 + sign * b2)
    }

    /// Splits the pointwise minimum (or maximum) of two rules. Returns the
    /// rule that wins on finite points `k ≤ cut` and the one winning above.
    /// `cut = None` means one rule wins everywhere (the first component).
    pub fn min_split(self, other: Rule, take_max: bool) -> (Option<i64>, Rule, Rule) {
        let (a1, b1) = self.coeffs();
        let (a2, b2) = other.coeffs();
        let pick = |first_le: bool| if first_le ^ take_max { self } else { other };
        if a1 == a2 {
            return (None, pick(b1 <= b2), pick(b1 <= b2));
        }
        // d(k) = s·k + c is the difference self - other.
        let (s, c) = (a1 - a2, b1 - b2);
        if s > 0 {
            // d ≤ 0 exactly for k ≤ floor(-c / s).
            let cut = (-c).div_euclid(s);
            (Some(cut), pick(true), pick(false))
        } else {
            // d ≤ 0 exactly for k ≥ ceil(c / -s).
            let first = -((-c).div_euclid(-s));
            (Some(first - 1), pick(false), pick(true))
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Const(c) => write!(f, "{c}"),
            Rule::Linear { slope, offset } => write!(f, "{slope}k{offset:+}"),
        }
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Rule::Const(c) => RuleJson::Const(c),
            Rule::Linear { slope, offset } => RuleJson::Linear([slope, offset]),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match RuleJson::deserialize(d)? {
            RuleJson::Const(c) => Rule::Const(c),
            RuleJson::Linear([a, b]) => Rule::linear(a, b),
        })
    }
}

/// A value in `ℕ ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(u64),
    Infinite,
}

impl Bound {
    pub fn finite(self) -> Option<u64> {
        match self {
            Bound::Finite(n) => Some(n),
            Bound::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Bound::Infinite
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(n) => write!(f, "{n}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(n) => s.serialize_u64(*n),
            Bound::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Bound::Finite(n)),
            Raw::S(s) if s == "inf" => Ok(Bound::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad bound {s}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min(r1: Rule, r2: Rule, k: u64, take_max: bool) -> i64 {
        let (x, y) = (r1.at_finite(k), r2.at_finite(k));
        if take_max {
            x.max(y)
        } else {
            x.min(y)
        }
    }

    #[test]
    fn min_split_matches_pointwise() {
        let rules = [
            Rule::Const(3),
            Rule::Const(0),
            Rule::linear(1, 0),
            Rule::linear(2, -5),
            Rule::linear(-1, 9),
            Rule::linear(-3, 20),
        ];
        for &r1 in &rules {
            for &r2 in &rules {
                for take_max in [false, true] {
                    let (cut, lo, hi) = r1.min_split(r2, take_max);
                    for k in 0..30u64 {
                        let rule = match cut {
                            Some(c) if (k as i64) > c => hi,
                            _ => lo,
                        };
                        assert_eq!(
                            rule.at_finite(k),
                            brute_min(r1, r2, k, take_max),
                            "{r1} {r2} {k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bound_json() {
        assert_eq!(serde_json::to_string(&Bound::Infinite).unwrap(), "\"inf\"");
        assert_eq!(
            serde_json::from_str::<Bound>("7").unwrap(),
            Bound::Finite(7)
        );
        assert!(Bound::Infinite > Bound::Finite(u64::MAX));
        let r: Rule = serde_json::from_str("{\"linear\":[1,0]}").unwrap();
        assert_eq!(r, Rule::linear(1, 0));
        assert_eq!(
            serde_json::to_string(&Rule::Const(2)).unwrap(),
            "{\"const\":2}"
        );
    }
}
