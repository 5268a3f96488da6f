//! Compact ordinal spaces standing in for maximal spectra, and their point sets.

mod order_type;
mod ordinal;
mod pointset;

pub use order_type::OrderIso;
pub use ordinal::Ordinal;
pub use pointset::{Piece, PieceJson, PointSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A maximal spectrum with its constructible topology.
///
/// `OrdinalInterval { top }` is `[0, top]` with the order topology (compact,
/// scattered). `CountableDiscrete` is `ℕ` with the discrete topology; it is
/// handled internally as `[0, ω]` with the point `ω` removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSpace {
    OrdinalInterval { top: Ordinal },
    CountableDiscrete,
}

impl SpectrumSpace {
    pub fn interval(top: Ordinal) -> Self {
        SpectrumSpace::OrdinalInterval { top }
    }

    /// Upper bound of the underlying ordinal interval.
    pub fn bound(&self) -> Ordinal {
        match self {
            SpectrumSpace::OrdinalInterval { top } => top.clone(),
            SpectrumSpace::CountableDiscrete => Ordinal::omega(),
        }
    }

    /// Largest CB-rank a point can have.
    pub fn rank_cap(&self) -> u32 {
        match self {
            SpectrumSpace::OrdinalInterval { top } => top.degree(),
            SpectrumSpace::CountableDiscrete => 0,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, SpectrumSpace::OrdinalInterval { .. })
    }

    pub fn contains(&self, p: &Ordinal) -> bool {
        match self {
            SpectrumSpace::OrdinalInterval { top } => p <= top,
            SpectrumSpace::CountableDiscrete => p.is_finite(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.rank_cap() >= 63 {
            return Err(Error::UnsupportedShape("space rank exceeds 62".into()));
        }
        Ok(())
    }

    /// Cantor–Bendixson rank of `p`: the least exponent of its normal form.
    pub fn cb_rank(&self, p: &Ordinal) -> Result<u32> {
        if !self.contains(p) {
            return Err(Error::OutsideSpace(p.clone()));
        }
        Ok(p.least_exponent())
    }

    /// Bitmask of the CB-ranks occurring in the interval `(lower, upper]`.
    /// The result is always a prefix `{0, …, R}` or empty.
    pub fn present_ranks(&self, lower: Option<&Ordinal>, upper: &Ordinal) -> u64 {
        let mut mask = 0u64;
        for j in 0..=self.rank_cap() {
            if Ordinal::next_of_rank(lower, j) <= *upper {
                mask |= 1 << j;
            } else {
                break;
            }
        }
        mask
    }

    /// Sample of the space: every point whose normal-form coefficients are all
    /// at most `depth`, together with the top point.
    pub fn truncation(&self, depth: u64) -> Vec<Ordinal> {
        match self {
            SpectrumSpace::CountableDiscrete => (0..=depth).map(Ordinal::finite).collect(),
            SpectrumSpace::OrdinalInterval { top } => {
                // Build all sums ω^{k}·c_k + … + c_0 with c_i ≤ depth.
                let cap = top.degree();
                let mut acc: Vec<Vec<(u32, u64)>> = vec![Vec::new()];
                for e in (0..=cap).rev() {
                    let mut next = Vec::with_capacity(acc.len() * (depth as usize + 1));
                    for terms in &acc {
                        next.push(terms.clone());
                        for c in 1..=depth {
                            let mut t = terms.clone();
                            t.push((e, c));
                            next.push(t);
                        }
                    }
                    acc = next;
                }
                let mut out = Vec::with_capacity(acc.len());
                for terms in acc {
                    let p = Ordinal::from_terms(terms).expect("descending by construction");
                    if p <= *top {
                        out.push(p);
                    }
                }
                if !out.contains(top) {
                    out.push(top.clone());
                }
                out.sort();
                out
            }
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
    fn cb_rank_examples() {
        let sp = SpectrumSpace::interval(o("w^2"));
        assert_eq!(sp.cb_rank(&o("w*3+5")).unwrap(), 0);
        assert_eq!(sp.cb_rank(&o("w*3")).unwrap(), 1);
        assert_eq!(sp.cb_rank(&o("w^2")).unwrap(), 2);
        assert_eq!(
            sp.cb_rank(&o("w^2+1")),
            Err(Error::OutsideSpace(o("w^2+1")))
        );
        assert!(SpectrumSpace::CountableDiscrete.cb_rank(&o("w")).is_err());
    }

    #[test]
    fn present_ranks_are_prefixes() {
        let sp = SpectrumSpace::interval(o("w^2"));
        assert_eq!(sp.present_ranks(None, &o("w^2")), 0b111);
        assert_eq!(sp.present_ranks(Some(&o("w*3+5")), &o("w*4")), 0b11);
        assert_eq!(sp.present_ranks(Some(&o("w*3+5")), &o("w*3+9")), 0b1);
        assert_eq!(sp.present_ranks(Some(&o("w")), &o("w")), 0);
    }

    #[test]
    fn truncation_shape() {
        let sp = SpectrumSpace::interval(o("w^2"));
        let pts = sp.truncation(3);
        assert_eq!(pts.len(), 16 + 1);
        assert_eq!(pts.last(), Some(&o("w^2")));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }
}
