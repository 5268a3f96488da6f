use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Bound, Rule};
use crate::error::{Error, Result};
use crate::ordinal_space::{OrderIso, Ordinal, PointSet, SpectrumSpace};

/// One segment `(previous upper, upper]` of a piecewise function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub upper: Ordinal,
    pub rule: Rule,
}

/// A piecewise natural-valued function on a spectrum.
///
/// Values come from the segment rule unless the point carries an override.
/// Linear rules only live on finite points; a linear segment ending at `ω`
/// needs an override there.
#[derive(Clone, Debug)]
pub struct IdealFunction {
    space: SpectrumSpace,
    segments: Vec<Segment>,
    overrides: BTreeMap<Ordinal, i64>,
    fg: bool,
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Min,
    Max,
}

impl IdealFunction {
    /// Builds and validates a function from `(upper, rule)` steps.
    pub fn new(
        space: &SpectrumSpace,
        steps: Vec<(Ordinal, Rule)>,
        overrides: BTreeMap<Ordinal, i64>,
        fg: bool,
    ) -> Result<IdealFunction> {
        let f = IdealFunction::raw(space, steps, overrides, fg)?;
        f.check_nonnegative()?;
        Ok(f)
    }

    fn raw(
        space: &SpectrumSpace,
        steps: Vec<(Ordinal, Rule)>,
        overrides: BTreeMap<Ordinal, i64>,
        fg: bool,
    ) -> Result<IdealFunction> {
        let bound = space.bound();
        let segments: Vec<Segment> = steps
            .into_iter()
            .map(|(upper, rule)| Segment {
                upper,
                rule: rule.normalized(),
            })
            .collect();
        if segments.last().map(|s| &s.upper) != Some(&bound) {
            return Err(Error::InvalidFunction(format!(
                "segments must end at {bound}"
            )));
        }
        if segments.windows(2).any(|w| w[0].upper >= w[1].upper) {
            return Err(Error::InvalidFunction(
                "segment bounds must increase".into(),
            ));
        }
        if let Some(p) = overrides.keys().find(|p| !space.contains(p)) {
            return Err(Error::OutsideSpace(p.clone()));
        }
        let omega = Ordinal::omega();
        for s in &segments {
            if s.rule.is_const() {
                continue;
            }
            if s.upper > omega {
                return Err(Error::InvalidFunction(format!(
                    "linear rule beyond the finite points (segment ending at {})",
                    s.upper
                )));
            }
            if s.upper == omega && space.contains(&omega) && !overrides.contains_key(&omega) {
                return Err(Error::InvalidFunction(
                    "linear segment needs a value at w".into(),
                ));
            }
        }
        let mut f = IdealFunction {
            space: space.clone(),
            segments,
            overrides,
            fg,
        };
        f.normalize();
        Ok(f)
    }

    pub fn zero(space: &SpectrumSpace) -> IdealFunction {
        IdealFunction::constant(space, 0)
    }

    pub fn constant(space: &SpectrumSpace, c: u64) -> IdealFunction {
        IdealFunction {
            space: space.clone(),
            segments: vec![Segment {
                upper: space.bound(),
                rule: Rule::Const(c as i64),
            }],
            overrides: BTreeMap::new(),
            fg: true,
        }
    }

    /// The 0/1 function of a point set. Pieces that keep only some CB-ranks
    /// are handled when the exceptional points are finitely many.
    pub fn indicator(set: &PointSet) -> Result<IdealFunction> {
        let space = set.space().clone();
        let mut steps = Vec::new();
        let mut overrides = BTreeMap::new();
        for (lower, piece, present) in set.pieces_with_bounds() {
            let (value, exceptions) = if piece.mask == present {
                (1, None)
            } else if piece.mask == 0 {
                (0, None)
            } else {
                let inside = PointSet::interval_ranks(&space, lower, &piece.upper, piece.mask);
                let outside =
                    PointSet::interval_ranks(&space, lower, &piece.upper, present & !piece.mask);
                if inside.count().is_some() {
                    (0, Some((inside, 1)))
                } else if outside.count().is_some() {
                    (1, Some((outside, 0)))
                } else {
                    return Err(Error::UnsupportedShape(format!(
                        "indicator of a rank-filtered piece ending at {}",
                        piece.upper
                    )));
                }
            };
            if let Some((pts, v)) = exceptions {
                overrides.extend(pts.points().map(|p| (p, v)));
            }
            steps.push((piece.upper.clone(), Rule::Const(value)));
        }
        IdealFunction::new(&space, steps, overrides, true)
    }

    pub fn space(&self) -> &SpectrumSpace {
        &self.space
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn overrides(&self) -> &BTreeMap<Ordinal, i64> {
        &self.overrides
    }

    pub fn is_fg(&self) -> bool {
        self.fg
    }

    pub fn with_fg(mut self, fg: bool) -> IdealFunction {
        self.fg = fg;
        self
    }

    /// Segments paired with their lower bounds.
    pub fn segments_with_bounds(&self) -> impl Iterator<Item = (Option<&Ordinal>, &Segment)> {
        let mut prev = None;
        self.segments.iter().map(move |s| {
            let lower = prev;
            prev = Some(&s.upper);
            (lower, s)
        })
    }

    fn segment_of(&self, p: &Ordinal) -> &Segment {
        self.segments
            .iter()
            .find(|s| *p <= s.upper)
            .expect("segments cover the space")
    }

    /// Signed value at `p` (never negative for a validated function).
    pub fn value_signed(&self, p: &Ordinal) -> Result<i64> {
        if !self.space.contains(p) {
            return Err(Error::OutsideSpace(p.clone()));
        }
        if let Some(&v) = self.overrides.get(p) {
            return Ok(v);
        }
        self.segment_of(p)
            .rule
            .at(p)
            .ok_or_else(|| Error::InvalidFunction(format!("no value at {p}")))
    }

    pub fn value(&self, p: &Ordinal) -> Result<u64> {
        let v = self.value_signed(p)?;
        u64::try_from(v).map_err(|_| Error::NegativeValue(p.clone()))
    }

    fn normalize(&mut self) {
        let mut merged: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for s in self.segments.drain(..) {
            match merged.last_mut() {
                Some(last) if last.rule == s.rule => last.upper = s.upper,
                _ => merged.push(s),
            }
        }
        self.segments = merged;
        let segments = &self.segments;
        self.overrides.retain(|p, v| {
            let seg = segments.iter().find(|s| *p <= s.upper).expect("covering");
            seg.rule.at(p) != Some(*v)
        });
    }

    fn override_set(&self) -> PointSet {
        PointSet::from_points(&self.space, self.overrides.keys()).expect("overrides lie in space")
    }

    fn combine(&self, other: &IdealFunction, op: Op) -> Result<IdealFunction> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        let mut steps: Vec<(Ordinal, Rule)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        let mut lower: Option<Ordinal> = None;
        while i < self.segments.len() && j < other.segments.len() {
            let (a, b) = (&self.segments[i], &other.segments[j]);
            let upper = a.upper.clone().min(b.upper.clone());
            match op {
                Op::Add => steps.push((upper.clone(), a.rule.plus(b.rule, 1))),
                Op::Sub => steps.push((upper.clone(), a.rule.plus(b.rule, -1))),
                Op::Min | Op::Max => {
                    let (cut, lo, hi) = a.rule.min_split(b.rule, matches!(op, Op::Max));
                    split_at(&mut steps, lower.as_ref(), &upper, cut, lo, hi);
                }
            }
            if a.upper == upper {
                i += 1;
            }
            if b.upper == upper {
                j += 1;
            }
            lower = Some(upper);
        }
        let points: Vec<Ordinal> = self
            .overrides
            .keys()
            .chain(other.overrides.keys())
            .cloned()
            .collect();
        let mut overrides = BTreeMap::new();
        for p in points {
            let (x, y) = (self.value_signed(&p)?, other.value_signed(&p)?);
            let v = match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Min => x.min(y),
                Op::Max => x.max(y),
            };
            overrides.insert(p, v);
        }
        IdealFunction::raw(&self.space, steps, overrides, self.fg && other.fg)
    }

    /// Pointwise sum: the product of ideals.
    pub fn add(&self, other: &IdealFunction) -> Result<IdealFunction> {
        self.combine(other, Op::Add)
    }

    /// Pointwise minimum: the sum of ideals.
    pub fn min_fn(&self, other: &IdealFunction) -> Result<IdealFunction> {
        self.combine(other, Op::Min)
    }

    /// Pointwise maximum: the intersection of ideals.
    pub fn max_fn(&self, other: &IdealFunction) -> Result<IdealFunction> {
        self.combine(other, Op::Max)
    }

    /// Pointwise difference, defined when `other ≤ self`.
    pub fn sub_exact(&self, other: &IdealFunction) -> Result<IdealFunction> {
        let d = self.combine(other, Op::Sub)?;
        d.check_nonnegative()?;
        Ok(d)
    }

    /// Pointwise difference without the sign check.
    pub(crate) fn sub_signed(&self, other: &IdealFunction) -> Result<IdealFunction> {
        self.combine(other, Op::Sub)
    }

    pub fn scale(&self, t: u64) -> IdealFunction {
        let t = t as i64;
        let steps = self
            .segments
            .iter()
            .map(|s| (s.upper.clone(), s.rule.scale(t)))
            .collect();
        let overrides = self
            .overrides
            .iter()
            .map(|(p, v)| (p.clone(), v * t))
            .collect();
        IdealFunction::raw(&self.space, steps, overrides, self.fg).expect("scaling keeps shape")
    }

    /// Points of the segment that take the segment rule.
    fn rule_points(&self, lower: Option<&Ordinal>, s: &Segment) -> PointSet {
        PointSet::interval(&self.space, lower, &s.upper)
            .difference(&self.override_set())
            .expect("same space")
    }

    /// Extreme values of the function on `within` (the whole space for
    /// `None`); `None` stands for an unbounded side.
    fn extremes_on(&self, within: Option<&PointSet>) -> (Option<i64>, Option<i64>) {
        let mut lo: Option<i64> = Some(i64::MAX);
        let mut hi: Option<i64> = Some(i64::MIN);
        let mut see = |l: Option<i64>, h: Option<i64>| {
            lo = match (lo, l) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            };
            hi = match (hi, h) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        };
        for (lower, s) in self.segments_with_bounds() {
            let mut pts = self.rule_points(lower, s);
            if let Some(w) = within {
                pts = pts.intersect(w).expect("same space");
            }
            if pts.is_empty() {
                continue;
            }
            match s.rule {
                Rule::Const(c) => see(Some(c), Some(c)),
                r @ Rule::Linear { slope, .. } => {
                    for (a, b) in pts.finite_runs() {
                        let first = Some(r.at_finite(a));
                        let last = b.map(|b| r.at_finite(b));
                        if slope > 0 {
                            see(first, last);
                        } else {
                            see(last, first);
                        }
                    }
                }
            }
        }
        for (p, &v) in &self.overrides {
            if within.is_none_or(|w| w.contains(p)) {
                see(Some(v), Some(v));
            }
        }
        (lo, hi)
    }

    fn extremes(&self) -> (Option<i64>, Option<i64>) {
        self.extremes_on(None)
    }

    fn check_nonnegative(&self) -> Result<()> {
        if self.extremes().0.is_some_and(|m| m >= 0) {
            return Ok(());
        }
        let witness = self
            .overrides
            .iter()
            .find(|(_, v)| **v < 0)
            .map(|(p, _)| p.clone())
            .or_else(|| {
                self.segments_with_bounds().find_map(|(lower, s)| {
                    self.rule_points(lower, s)
                        .points()
                        .take(1 << 16)
                        .find(|p| s.rule.at(p).is_some_and(|v| v < 0))
                })
            })
            .unwrap_or_else(|| self.space.bound());
        Err(Error::NegativeValue(witness))
    }

    /// Exact supremum.
    pub fn sup(&self) -> Bound {
        match self.extremes().1 {
            None => Bound::Infinite,
            Some(v) => Bound::Finite(v.max(0) as u64),
        }
    }

    /// Infimum (0 for the empty space never arises; spaces are nonempty).
    pub fn inf(&self) -> i64 {
        self.extremes().0.unwrap_or(i64::MIN)
    }

    /// Supremum over the points of `set` (0 on the empty set).
    pub fn sup_on(&self, set: &PointSet) -> Result<Bound> {
        if set.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(match self.extremes_on(Some(set)).1 {
            None => Bound::Infinite,
            Some(v) => Bound::Finite(v.max(0) as u64),
        })
    }

    /// `{p : f(p) ≥ j}`.
    pub fn level_set(&self, j: u64) -> PointSet {
        let j = j as i64;
        let sp = &self.space;
        let mut set = PointSet::empty(sp);
        for (lower, s) in self.segments_with_bounds() {
            let part = match s.rule {
                Rule::Const(c) if c >= j => PointSet::interval(sp, lower, &s.upper),
                Rule::Const(_) => continue,
                Rule::Linear { slope, offset } if slope > 0 => {
                    let first = ceil_div(j - offset, slope).max(0);
                    let from = (first > 0).then(|| Ordinal::finite(first as u64 - 1));
                    let low = match (lower, from) {
                        (Some(l), Some(f)) => Some(l.clone().max(f)),
                        (l, f) => l.cloned().or(f),
                    };
                    PointSet::interval_ranks(sp, low.as_ref(), &s.upper, 1)
                }
                Rule::Linear { slope, offset } => {
                    let last = (offset - j).div_euclid(-slope);
                    if last < 0 {
                        continue;
                    }
                    let up = s.upper.clone().min(Ordinal::finite(last as u64));
                    PointSet::interval_ranks(sp, lower, &up, 1)
                }
            };
            set = set.union(&part).expect("same space");
        }
        for (p, &v) in &self.overrides {
            let single = PointSet::singleton(sp, p).expect("override in space");
            set = if v >= j {
                set.union(&single)
            } else {
                set.difference(&single)
            }
            .expect("same space");
        }
        set
    }

    /// `{p : f(p) > n}`.
    pub fn level_above(&self, n: u64) -> PointSet {
        self.level_set(n + 1)
    }

    pub fn support(&self) -> PointSet {
        self.level_set(1)
    }

    /// Indicator of the support.
    pub fn radical(&self) -> Result<IdealFunction> {
        Ok(IdealFunction::indicator(&self.support())?.with_fg(self.fg))
    }

    /// First limit point where lower semicontinuity fails, if any.
    pub fn lsc_violation(&self) -> Option<Ordinal> {
        self.overrides
            .iter()
            .filter(|(p, _)| p.is_limit())
            .find(|(p, &v)| match self.segment_of(p).rule.liminf() {
                Some(Bound::Infinite) => false,
                Some(Bound::Finite(m)) => v > m as i64,
                None => true,
            })
            .map(|(p, _)| p.clone())
    }

    pub fn is_lsc(&self) -> bool {
        self.lsc_violation().is_none()
    }

    /// Values at which level sets can change shape; enough to decide
    /// whether every level set is clopen.
    fn thresholds(&self) -> Vec<u64> {
        let mut ts: Vec<u64> = self
            .segments
            .iter()
            .filter_map(|s| match s.rule {
                Rule::Const(c) => Some(c),
                Rule::Linear { .. } => None,
            })
            .chain(self.overrides.values().copied())
            .filter(|&v| v >= 1)
            .map(|v| v as u64)
            .collect();
        ts.push(1);
        ts.sort_unstable();
        ts.dedup();
        ts
    }

    /// First level `j` whose level set is not clopen, with a boundary point.
    pub fn continuity_violation(&self) -> Option<(u64, Ordinal)> {
        if !self.space.is_compact() {
            return None;
        }
        let sup = match self.sup() {
            Bound::Infinite => {
                let top = self.overrides.keys().find(|p| p.is_limit()).cloned();
                return Some((u64::MAX, top.unwrap_or_else(|| self.space.bound())));
            }
            Bound::Finite(s) => s,
        };
        for j in self.thresholds().into_iter().filter(|&j| j <= sup) {
            let l = self.level_set(j);
            if !l.is_clopen() {
                let boundary = l
                    .closure()
                    .difference(&l)
                    .ok()?
                    .first_point()
                    .or_else(|| l.complement().closure().intersect(&l).ok()?.first_point());
                return Some((j, boundary.unwrap_or_else(|| self.space.bound())));
            }
        }
        None
    }

    pub fn is_continuous(&self) -> bool {
        self.continuity_violation().is_none()
    }

    /// Semantic equality.
    pub fn same_values(&self, other: &IdealFunction) -> bool {
        self.sub_signed(other).is_ok_and(|d| {
            let (lo, hi) = d.extremes();
            lo == Some(0) && hi == Some(0)
        })
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &IdealFunction) -> bool {
        other
            .sub_signed(self)
            .is_ok_and(|d| d.extremes().0.is_some_and(|m| m >= 0))
    }

    /// Re-indexes the function along the order isomorphism of a closed set.
    pub fn restrict(&self, set: &PointSet) -> Result<IdealFunction> {
        if set.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        if !self.space.is_compact() {
            return self.restrict_discrete(set);
        }
        let iso = OrderIso::new(set)?;
        let target = iso.target_space();
        let index = |p: &Ordinal| {
            iso.index_of(p)
                .ok_or_else(|| shape("point outside the set"))
        };
        let mut steps: Vec<(Ordinal, Rule)> = Vec::new();
        for (lower, s) in self.segments_with_bounds() {
            let part = PointSet::interval(&self.space, lower, &s.upper).intersect(set)?;
            if part.is_empty() {
                continue;
            }
            match s.rule {
                Rule::Const(c) => {
                    let local = OrderIso::new(&part)?;
                    let last = local
                        .point_at(local.last_index())
                        .ok_or_else(|| shape("last point"))?;
                    push_step(&mut steps, index(&last)?, Rule::Const(c));
                }
                Rule::Linear { slope, offset } => {
                    // Each run of finite points maps onto a run of indices.
                    for (a, b) in part.finite_runs() {
                        let ia = index(&Ordinal::finite(a))?
                            .as_finite()
                            .ok_or_else(|| shape("finite point at infinite index"))?;
                        let shift = a as i64 - ia as i64;
                        let end = match b {
                            Some(b) => Ordinal::finite(b),
                            None => s.upper.clone(),
                        };
                        push_step(
                            &mut steps,
                            index(&end)?,
                            Rule::linear(slope, offset + slope * shift),
                        );
                    }
                }
            }
        }
        let mut overrides = BTreeMap::new();
        for (p, &v) in &self.overrides {
            if set.contains(p) {
                overrides.insert(index(p)?, v);
            }
        }
        fill_to(&mut steps, &target.bound());
        IdealFunction::new(&target, steps, overrides, self.fg)
    }

    fn restrict_discrete(&self, set: &PointSet) -> Result<IdealFunction> {
        match set.count() {
            Some(0) => Err(shape("restriction to the empty set")),
            Some(n) => {
                let target = SpectrumSpace::interval(Ordinal::finite(n - 1));
                let mut steps = Vec::new();
                for (i, p) in set.points().enumerate() {
                    steps.push((
                        Ordinal::finite(i as u64),
                        Rule::Const(self.value_signed(&p)?),
                    ));
                }
                IdealFunction::new(&target, steps, BTreeMap::new(), self.fg)
            }
            None if set.same_points(&PointSet::full(&self.space)) => Ok(self.clone()),
            None => Err(shape(
                "restriction to an infinite proper subset of a discrete space",
            )),
        }
    }
}

fn shape(what: &str) -> Error {
    Error::UnsupportedShape(what.into())
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

fn push_step(steps: &mut Vec<(Ordinal, Rule)>, upper: Ordinal, rule: Rule) {
    match steps.last_mut() {
        Some(last) if last.0 >= upper => {}
        _ => steps.push((upper, rule)),
    }
}

fn fill_to(steps: &mut Vec<(Ordinal, Rule)>, bound: &Ordinal) {
    match steps.last_mut() {
        Some(last) if last.0 < *bound => last.0 = bound.clone(),
        None => steps.push((bound.clone(), Rule::Const(0))),
        _ => {}
    }
}

/// Appends the minimum/maximum of two rules on `(lower, upper]`, split at
/// the finite cut where the winner changes.
fn split_at(
    steps: &mut Vec<(Ordinal, Rule)>,
    lower: Option<&Ordinal>,
    upper: &Ordinal,
    cut: Option<i64>,
    lo: Rule,
    hi: Rule,
) {
    let Some(cut) = cut else {
        steps.push((upper.clone(), lo));
        return;
    };
    let below_all = cut < 0 || lower.is_some_and(|l| l.as_finite().is_none_or(|l| cut <= l as i64));
    let above_all = upper.as_finite().is_some_and(|u| cut >= u as i64);
    if below_all {
        steps.push((upper.clone(), hi));
    } else if above_all {
        steps.push((upper.clone(), lo));
    } else {
        steps.push((Ordinal::finite(cut as u64), lo));
        steps.push((upper.clone(), hi));
    }
}

impl PartialEq for IdealFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_values(other)
    }
}

#[derive(Serialize, Deserialize)]
struct SegmentJson {
    lower: Option<Ordinal>,
    upper: Ordinal,
    rule: Rule,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    space: SpectrumSpace,
    segments: Vec<SegmentJson>,
    #[serde(default)]
    overrides: BTreeMap<Ordinal, i64>,
    #[serde(default)]
    fg: bool,
}

impl Serialize for IdealFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FunctionJson {
            space: self.space.clone(),
            segments: self
                .segments_with_bounds()
                .map(|(lower, seg)| SegmentJson {
                    lower: lower.cloned(),
                    upper: seg.upper.clone(),
                    rule: seg.rule,
                })
                .collect(),
            overrides: self.overrides.clone(),
            fg: self.fg,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdealFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FunctionJson::deserialize(d)?;
        let mut prev: Option<Ordinal> = None;
        for seg in &raw.segments {
            if seg.lower != prev {
                return Err(serde::de::Error::custom("segments must be contiguous"));
            }
            prev = Some(seg.upper.clone());
        }
        let steps = raw
            .segments
            .into_iter()
            .map(|s| (s.upper, s.rule))
            .collect();
        IdealFunction::new(&raw.space, steps, raw.overrides, raw.fg)
            .map_err(serde::de::Error::custom)
    }
}
