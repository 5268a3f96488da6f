//! Monotone families of generator functions indexed by a cut parameter `t`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal_fn::{IdealFunction, Rule};
use crate::ordinal_space::{Ordinal, PointSet, SpectrumSpace};

/// Largest cut tried when deciding whether a member stays positive for all `t`.
pub const T_BIG: u64 = 1 << 40;

/// Upper end of a template segment.
///
/// `Cut { base, step }` evaluates to `γ ⊕ (base + ω^step·t)`, where `γ` is the
/// block base of the anchor (or the bottom of the space for unanchored
/// families). Below the bottom, `⊕ k` means `k - 1`, so `bottom ⊕ 0` is an
/// empty segment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutExpr {
    Top,
    Cut {
        base: Ordinal,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        step: Option<u32>,
    },
}

impl CutExpr {
    pub fn fixed(base: Ordinal) -> CutExpr {
        CutExpr::Cut { base, step: None }
    }

    pub fn moving(base: Ordinal, step: u32) -> CutExpr {
        CutExpr::Cut {
            base,
            step: Some(step),
        }
    }

    pub fn moves(&self) -> bool {
        matches!(self, CutExpr::Cut { step: Some(_), .. })
    }

    /// `None` denotes the empty initial segment.
    pub fn eval(&self, space: &SpectrumSpace, gamma: Option<&Ordinal>, t: u64) -> Option<Ordinal> {
        match self {
            CutExpr::Top => Some(space.bound()),
            CutExpr::Cut { base, step } => {
                let x = match step {
                    Some(e) => base.add(&Ordinal::monomial(*e, t)),
                    None => base.clone(),
                };
                let v = match gamma {
                    Some(g) => g.add(&x),
                    None => match x.as_finite() {
                        Some(0) => return None,
                        Some(k) => Ordinal::finite(k - 1),
                        None => x,
                    },
                };
                Some(v.min(space.bound()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateSegment {
    pub upper: CutExpr,
    pub rule: Rule,
}

/// Anchor points of an anchored family: each point `q` of `region` (all of
/// CB-rank `rank`) carries its own member, supported in the block
/// `(γ, q]` with `q = γ + ω^rank`.
#[derive(Clone, Debug)]
pub struct Anchors {
    pub rank: u32,
    pub region: PointSet,
}

/// A family `{f_t}` (one per anchor when anchored) that is pointwise
/// nonincreasing in `t`.
#[derive(Clone, Debug)]
pub struct ChainTemplate {
    pub anchors: Option<Anchors>,
    pub segments: Vec<TemplateSegment>,
    pub limit_overrides: BTreeMap<Ordinal, i64>,
    pub anchor_value: Option<i64>,
}

/// How far the cut may move while the member stays positive at a point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TRange {
    All,
    UpTo(u64),
}

impl TRange {
    /// The largest admissible cut not exceeding `t`.
    pub fn clamp(self, t: u64) -> u64 {
        match self {
            TRange::All => t,
            TRange::UpTo(b) => b.min(t),
        }
    }
}

impl ChainTemplate {
    pub fn unanchored(
        segments: Vec<TemplateSegment>,
        limit_overrides: BTreeMap<Ordinal, i64>,
    ) -> Self {
        ChainTemplate {
            anchors: None,
            segments,
            limit_overrides,
            anchor_value: None,
        }
    }

    fn gamma(&self, anchor: Option<&Ordinal>) -> Option<Ordinal> {
        block_start(anchor?)
    }

    /// The member at `anchor` with cut `t`.
    pub fn instance(
        &self,
        space: &SpectrumSpace,
        anchor: Option<&Ordinal>,
        t: u64,
    ) -> Result<IdealFunction> {
        if self.anchors.is_some() != anchor.is_some() {
            return Err(Error::InvalidModel(
                "anchor given to an unanchored family or missing".into(),
            ));
        }
        let gamma = self.gamma(anchor);
        let mut steps: Vec<(Ordinal, Rule)> = Vec::new();
        for seg in &self.segments {
            let Some(upper) = seg.upper.eval(space, gamma.as_ref(), t) else {
                continue;
            };
            if steps.last().is_some_and(|(u, _)| *u >= upper) {
                continue;
            }
            steps.push((upper, seg.rule));
        }
        match steps.last_mut() {
            Some(last) if last.0 < space.bound() => steps.push((space.bound(), Rule::Const(0))),
            None => steps.push((space.bound(), Rule::Const(0))),
            _ => {}
        }
        let mut overrides: BTreeMap<Ordinal, i64> = self
            .limit_overrides
            .iter()
            .filter(|(p, _)| space.contains(p))
            .map(|(p, v)| (p.clone(), *v))
            .collect();
        if let (Some(q), Some(v)) = (anchor, self.anchor_value) {
            overrides.insert(q.clone(), v);
        }
        IdealFunction::new(space, steps, overrides, true)
    }

    /// The anchor whose member can be positive at `p`.
    pub fn anchor_for(&self, p: &Ordinal) -> Option<Ordinal> {
        let a = self.anchors.as_ref()?;
        let rank = p.least_exponent();
        let q = if (p.is_zero() && a.rank == 0) || (rank == a.rank && !p.is_zero()) {
            p.clone()
        } else if rank < a.rank {
            p.floor_to(a.rank).add(&Ordinal::omega_pow(a.rank))
        } else {
            return None;
        };
        a.region.contains(&q).then_some(q)
    }

    /// Whether some member is positive at `p`, and for which cuts.
    pub fn positive_range(
        &self,
        space: &SpectrumSpace,
        p: &Ordinal,
    ) -> Result<Option<(Option<Ordinal>, TRange)>> {
        let anchor = match &self.anchors {
            None => None,
            Some(_) => match self.anchor_for(p) {
                Some(q) => Some(q),
                None => return Ok(None),
            },
        };
        let positive = |t: u64| -> Result<bool> {
            Ok(self.instance(space, anchor.as_ref(), t)?.value(p)? >= 1)
        };
        if !positive(0)? {
            return Ok(None);
        }
        if positive(T_BIG)? {
            return Ok(Some((anchor, TRange::All)));
        }
        let (mut lo, mut hi) = (0u64, T_BIG);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if positive(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Some((anchor, TRange::UpTo(lo))))
    }

    /// Sufficient symbolic condition for monotonicity: whenever a cut moves
    /// up, the rule it uncovers below is pointwise no larger.
    pub fn monotone_violation(&self) -> Option<usize> {
        for (i, w) in self.segments.windows(2).enumerate() {
            if !w[0].upper.moves() {
                continue;
            }
            let (a0, b0) = w[0].rule.coeffs();
            let (a1, b1) = w[1].rule.coeffs();
            if a0 > a1 || b0 > b1 {
                return Some(i);
            }
        }
        None
    }

    /// Ordinals appearing in the template, used as breakpoints.
    pub fn fixed_points(&self) -> Vec<Ordinal> {
        let mut pts: Vec<Ordinal> = self.limit_overrides.keys().cloned().collect();
        if self.anchors.is_some() {
            return pts;
        }
        for seg in &self.segments {
            if let CutExpr::Cut { base, step } = &seg.upper {
                let b = match base.as_finite() {
                    Some(k) if k > 0 => Ordinal::finite(k - 1),
                    _ => base.clone(),
                };
                pts.push(b);
                if let Some(e) = step {
                    pts.push(base.add(&Ordinal::omega_pow(e + 1)));
                }
            }
        }
        pts
    }

    pub fn max_coefficient(&self) -> u64 {
        let mut m = 0;
        for seg in &self.segments {
            if let CutExpr::Cut { base, .. } = &seg.upper {
                m = m.max(base.max_coefficient());
            }
            let (a, b) = seg.rule.coeffs();
            m = m.max(a.unsigned_abs()).max(b.unsigned_abs());
        }
        for (p, v) in &self.limit_overrides {
            m = m.max(p.max_coefficient()).max(v.unsigned_abs());
        }
        if let Some(a) = &self.anchors {
            for pc in a.region.pieces() {
                m = m.max(pc.upper.max_coefficient());
            }
        }
        m
    }
}

/// Exclusive start of the block of anchor `q`. Point 0 only starts a block
/// of rank-0 anchors; higher blocks reaching down to 0 start at the bottom.
pub(crate) fn block_start(q: &Ordinal) -> Option<Ordinal> {
    q.block_base()
        .filter(|g| !g.is_zero() || q.least_exponent() == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn y_chain(r: i64) -> ChainTemplate {
        ChainTemplate::unanchored(
            vec![
                TemplateSegment {
                    upper: CutExpr::moving(o("1"), 0),
                    rule: Rule::Const(0),
                },
                TemplateSegment {
                    upper: CutExpr::Top,
                    rule: Rule::Const(r),
                },
            ],
            BTreeMap::from([(o("w"), 1)]),
        )
    }

    #[test]
    fn y_chain_values() {
        let sp = SpectrumSpace::interval(o("w"));
        let y = y_chain(2);
        for t in 0..6u64 {
            let f = y.instance(&sp, None, t).unwrap();
            for k in 0..12u64 {
                let expect = if k <= t { 0 } else { 2 };
                assert_eq!(f.value(&Ordinal::finite(k)).unwrap(), expect);
            }
            assert_eq!(f.value(&o("w")).unwrap(), 1);
        }
        assert_eq!(
            y.positive_range(&sp, &o("5")).unwrap(),
            Some((None, TRange::UpTo(4)))
        );
        assert_eq!(
            y.positive_range(&sp, &o("w")).unwrap(),
            Some((None, TRange::All))
        );
        assert_eq!(y.positive_range(&sp, &o("0")).unwrap(), None);
        assert_eq!(y.monotone_violation(), None);
    }

    #[test]
    fn anchored_indicators() {
        let sp = SpectrumSpace::interval(o("w"));
        let fam = ChainTemplate {
            anchors: Some(Anchors {
                rank: 0,
                region: PointSet::rank_exactly(&sp, 0),
            }),
            segments: vec![
                TemplateSegment {
                    upper: CutExpr::fixed(o("0")),
                    rule: Rule::Const(0),
                },
                TemplateSegment {
                    upper: CutExpr::fixed(o("1")),
                    rule: Rule::Const(1),
                },
                TemplateSegment {
                    upper: CutExpr::Top,
                    rule: Rule::Const(0),
                },
            ],
            limit_overrides: BTreeMap::new(),
            anchor_value: None,
        };
        for k in [0u64, 1, 7] {
            let q = Ordinal::finite(k);
            let f = fam.instance(&sp, Some(&q), 3).unwrap();
            assert_eq!(f.support(), PointSet::singleton(&sp, &q).unwrap());
            assert_eq!(
                fam.positive_range(&sp, &q).unwrap(),
                Some((Some(q), TRange::All))
            );
        }
        assert_eq!(fam.positive_range(&sp, &o("w")).unwrap(), None);
    }
}
