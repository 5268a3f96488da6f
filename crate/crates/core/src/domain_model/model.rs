use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::template::{block_start, Anchors, ChainTemplate, TRange, TemplateSegment};
use crate::error::{Error, Result};
use crate::ideal_fn::IdealFunction;
use crate::ordinal_space::{Ordinal, PieceJson, PointSet, SpectrumSpace};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub enum GeneratorSpec {
    Single(IdealFunction),
    Chain(ChainTemplate),
}

/// A spectrum together with generators of the finitely generated ideal
/// functions (closed under pointwise sum and minimum).
#[derive(Clone, Debug)]
pub struct DomainModel {
    pub name: String,
    pub space: SpectrumSpace,
    pub generators: Vec<GeneratorSpec>,
}

/// One generator member positive at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub generator: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Ordinal>,
    /// Cuts for which the member is positive; `None` for singles.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_range: Option<TRange>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvalidSpace { message: String },
    SpaceMismatch { generator: usize },
    SemicontinuityViolation { generator: usize, point: Ordinal },
    NotFinitelyGenerated { generator: usize, message: String },
    NotProper { generator: usize },
    NonMonotoneChain { generator: usize, t: u64 },
    AnchorOutsideBlock { generator: usize, anchor: Ordinal },
    InvalidGenerator { generator: usize, message: String },
    UncoveredPoint { point: Ordinal },
}

/// Cuts at which chain members are sampled during validation.
const SAMPLE_CUTS: [u64; 8] = [0, 1, 2, 3, 5, 8, 16, 32];

impl DomainModel {
    pub fn new(
        name: impl Into<String>,
        space: SpectrumSpace,
        generators: Vec<GeneratorSpec>,
    ) -> Self {
        DomainModel {
            name: name.into(),
            space,
            generators,
        }
    }

    /// The Jacobson radical is nonzero exactly when the spectrum is compact.
    pub fn jacobson_nonzero(&self) -> bool {
        self.space.is_compact()
    }

    /// The function of one member.
    pub fn member_function(&self, m: &Member, t: u64) -> Result<IdealFunction> {
        match &self.generators[m.generator] {
            GeneratorSpec::Single(f) => Ok(f.clone()),
            GeneratorSpec::Chain(c) => {
                let t = m.t_range.map_or(t, |r| r.clamp(t));
                c.instance(&self.space, m.anchor.as_ref(), t)
            }
        }
    }

    /// Generator members positive at `p`; for chains only the relevant
    /// anchor and the range of admissible cuts.
    pub fn generators_positive_at(&self, p: &Ordinal) -> Result<Vec<Member>> {
        self.space.cb_rank(p)?;
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            match g {
                GeneratorSpec::Single(f) => {
                    if f.value(p)? >= 1 {
                        out.push(Member {
                            generator: i,
                            anchor: None,
                            t_range: None,
                        });
                    }
                }
                GeneratorSpec::Chain(c) => {
                    if let Some((anchor, range)) = c.positive_range(&self.space, p)? {
                        out.push(Member {
                            generator: i,
                            anchor,
                            t_range: Some(range),
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sample anchors of an anchored family: the first few region points.
    fn sample_anchors(&self, a: &Anchors) -> Vec<Ordinal> {
        let mut v: Vec<Ordinal> = a.region.points().take(4).collect();
        if let Some(last) = a.region.points().take(64).last() {
            v.push(last);
        }
        v.dedup();
        v
    }

    fn check_member(&self, i: usize, f: &IdealFunction, out: &mut Vec<Violation>) {
        if f.space() != &self.space {
            out.push(Violation::SpaceMismatch { generator: i });
            return;
        }
        if let Some(p) = f.lsc_violation() {
            out.push(Violation::SemicontinuityViolation {
                generator: i,
                point: p,
            });
        }
        if !f.support().is_clopen() {
            out.push(Violation::NotFinitelyGenerated {
                generator: i,
                message: "support is not clopen".into(),
            });
        }
        if f.sup() == crate::ideal_fn::Bound::Finite(0) {
            out.push(Violation::NotProper { generator: i });
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if let Err(e) = self.space.check() {
            out.push(Violation::InvalidSpace {
                message: e.to_string(),
            });
            return out;
        }
        for (i, g) in self.generators.iter().enumerate() {
            match g {
                GeneratorSpec::Single(f) => self.check_member(i, f, &mut out),
                GeneratorSpec::Chain(c) => self.check_chain(i, c, &mut out),
            }
        }
        if out.is_empty() {
            if let Err(v) = self.check_coverage() {
                out.push(v);
            }
        }
        out.dedup();
        out
    }

    fn check_chain(&self, i: usize, c: &ChainTemplate, out: &mut Vec<Violation>) {
        if let Some(k) = c.monotone_violation() {
            out.push(Violation::NonMonotoneChain {
                generator: i,
                t: k as u64,
            });
        }
        let anchors: Vec<Option<Ordinal>> = match &c.anchors {
            None => vec![None],
            Some(a) => {
                if a.region.space() != &self.space {
                    out.push(Violation::SpaceMismatch { generator: i });
                    return;
                }
                if a.region.is_empty() {
                    out.push(Violation::InvalidGenerator {
                        generator: i,
                        message: "empty anchor region".into(),
                    });
                }
                let bad = a
                    .region
                    .difference(&PointSet::rank_exactly(&self.space, a.rank));
                if bad.is_ok_and(|b| !b.is_empty()) {
                    out.push(Violation::InvalidGenerator {
                        generator: i,
                        message: format!("anchor region has points of rank other than {}", a.rank),
                    });
                }
                self.sample_anchors(a).into_iter().map(Some).collect()
            }
        };
        for anchor in anchors {
            let mut prev: Option<IdealFunction> = None;
            for t in SAMPLE_CUTS {
                let f = match c.instance(&self.space, anchor.as_ref(), t) {
                    Ok(f) => f,
                    Err(e) => {
                        out.push(Violation::InvalidGenerator {
                            generator: i,
                            message: e.to_string(),
                        });
                        return;
                    }
                };
                self.check_member(i, &f, out);
                if let Some(q) = &anchor {
                    let block = PointSet::interval(&self.space, block_start(q).as_ref(), q);
                    if !f.support().is_subset(&block).unwrap_or(false) {
                        out.push(Violation::AnchorOutsideBlock {
                            generator: i,
                            anchor: q.clone(),
                        });
                    }
                }
                if prev.as_ref().is_some_and(|g| !f.le(g)) {
                    out.push(Violation::NonMonotoneChain { generator: i, t });
                }
                prev = Some(f);
            }
        }
    }

    /// Every isolated point must carry a positive generator.
    fn check_coverage(&self) -> std::result::Result<(), Violation> {
        let classes = self
            .profile_classes(None)
            .map_err(|e| Violation::InvalidGenerator {
                generator: usize::MAX,
                message: e.to_string(),
            })?;
        for class in classes.iter().filter(|c| c.rank == 0) {
            for p in &class.samples {
                if self
                    .generators_positive_at(p)
                    .map(|g| g.is_empty())
                    .unwrap_or(true)
                {
                    return Err(Violation::UncoveredPoint { point: p.clone() });
                }
            }
        }
        Ok(())
    }

    /// Largest coefficient of any ordinal or value in the model.
    pub fn max_coefficient(&self) -> u64 {
        let mut m = self.space.bound().max_coefficient();
        for g in &self.generators {
            m = m.max(match g {
                GeneratorSpec::Single(f) => function_coefficient(f),
                GeneratorSpec::Chain(c) => c.max_coefficient(),
            });
        }
        m
    }

    /// Fixed ordinals where generator behavior can change.
    fn breakpoints(&self, within: Option<&PointSet>) -> BTreeSet<Ordinal> {
        let mut pts: BTreeSet<Ordinal> = BTreeSet::new();
        let add_point = |pts: &mut BTreeSet<Ordinal>, p: &Ordinal| {
            if let Some(b) = p.block_base() {
                pts.insert(b);
            }
            pts.insert(p.clone());
        };
        for g in &self.generators {
            match g {
                GeneratorSpec::Single(f) => {
                    for s in f.segments() {
                        pts.insert(s.upper.clone());
                    }
                    for p in f.overrides().keys() {
                        add_point(&mut pts, p);
                    }
                }
                GeneratorSpec::Chain(c) => {
                    for p in c.fixed_points() {
                        add_point(&mut pts, &p);
                    }
                    if let Some(a) = &c.anchors {
                        for pc in a.region.pieces() {
                            pts.insert(pc.upper.clone());
                            // Past the last anchor of a piece the family stops.
                            add_point(&mut pts, &pc.upper.floor_to(a.rank));
                        }
                    }
                }
            }
        }
        if let Some(x) = within {
            for pc in x.pieces() {
                pts.insert(pc.upper.clone());
            }
        }
        let bound = self.space.bound();
        pts.insert(bound.clone());
        pts.into_iter().filter(|p| *p <= bound).collect()
    }

    /// Partition of the space (or of `within`) into classes on which the
    /// positive generator families look alike: intervals between model
    /// breakpoints, split by CB-rank.
    pub fn profile_classes(&self, within: Option<&PointSet>) -> Result<Vec<ProfileClass>> {
        let mut classes = Vec::new();
        let mut lower: Option<Ordinal> = None;
        for upper in self.breakpoints(within) {
            let present = self.space.present_ranks(lower.as_ref(), &upper);
            for r in 0..64u32 {
                if present & (1 << r) == 0 {
                    continue;
                }
                let mut set = PointSet::interval_ranks(&self.space, lower.as_ref(), &upper, 1 << r);
                if let Some(x) = within {
                    set = set.intersect(x)?;
                }
                if set.is_empty() {
                    continue;
                }
                let samples = class_samples(&set, r);
                classes.push(ProfileClass {
                    set,
                    rank: r,
                    samples,
                });
            }
            lower = Some(upper);
        }
        Ok(classes)
    }
}

/// One profile class with the points used to evaluate it.
#[derive(Clone, Debug)]
pub struct ProfileClass {
    pub set: PointSet,
    pub rank: u32,
    pub samples: Vec<Ordinal>,
}

impl ProfileClass {
    pub fn representative(&self) -> &Ordinal {
        &self.samples[0]
    }
}

/// First points of a class plus a few far inside it.
fn class_samples(set: &PointSet, rank: u32) -> Vec<Ordinal> {
    let mut v: Vec<Ordinal> = set.points().take(3).collect();
    if let Some(first) = v.first().cloned() {
        let far = first.add(&Ordinal::monomial(rank, 97));
        v.extend(set.next_point(Some(&far)));
        let farther = first.add(&Ordinal::monomial(rank + 1, 5));
        v.extend(set.next_point(Some(&farther)));
    }
    if let Some(last) = set
        .pieces()
        .iter()
        .rev()
        .find(|p| p.mask != 0)
        .map(|p| p.upper.clone())
    {
        if set.contains(&last) {
            v.push(last);
        }
    }
    v.sort();
    v.dedup();
    v
}

fn function_coefficient(f: &IdealFunction) -> u64 {
    let mut m = 0;
    for s in f.segments() {
        let (a, b) = s.rule.coeffs();
        m = m
            .max(s.upper.max_coefficient())
            .max(a.unsigned_abs())
            .max(b.unsigned_abs());
    }
    for (p, v) in f.overrides() {
        m = m.max(p.max_coefficient()).max(v.unsigned_abs());
    }
    m
}

// JSON form.

#[derive(Serialize, Deserialize)]
struct AnchorsJson {
    rank: u32,
    region: Vec<PieceJson>,
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    cut: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchors: Option<AnchorsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchor_value: Option<i64>,
    segments_template: Vec<TemplateSegment>,
    #[serde(default)]
    limit_overrides: BTreeMap<Ordinal, i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum GeneratorJson {
    Single(IdealFunction),
    Chain(ChainJson),
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    schema: u32,
    name: String,
    space: SpectrumSpace,
    generators: Vec<GeneratorJson>,
}

impl DomainModel {
    pub fn to_json(&self) -> String {
        let raw = ModelJson {
            schema: SCHEMA_VERSION,
            name: self.name.clone(),
            space: self.space.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| match g {
                    GeneratorSpec::Single(f) => GeneratorJson::Single(f.clone()),
                    GeneratorSpec::Chain(c) => GeneratorJson::Chain(ChainJson {
                        cut: "t".into(),
                        anchors: c.anchors.as_ref().map(|a| AnchorsJson {
                            rank: a.rank,
                            region: a.region.to_json_pieces(),
                        }),
                        anchor_value: c.anchor_value,
                        segments_template: c.segments.clone(),
                        limit_overrides: c.limit_overrides.clone(),
                    }),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<DomainModel> {
        let raw: ModelJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))?;
        if raw.schema != SCHEMA_VERSION {
            return Err(Error::InvalidModel(format!(
                "unsupported schema {}",
                raw.schema
            )));
        }
        raw.space.check()?;
        let mut generators = Vec::new();
        for g in raw.generators {
            generators.push(match g {
                GeneratorJson::Single(f) => GeneratorSpec::Single(f),
                GeneratorJson::Chain(c) => {
                    if c.cut != "t" {
                        return Err(Error::InvalidModel(format!(
                            "unknown cut parameter {}",
                            c.cut
                        )));
                    }
                    let anchors = match c.anchors {
                        None => None,
                        Some(a) => Some(Anchors {
                            rank: a.rank,
                            region: PointSet::from_json_pieces(&raw.space, &a.region)?,
                        }),
                    };
                    GeneratorSpec::Chain(ChainTemplate {
                        anchors,
                        segments: c.segments_template,
                        limit_overrides: c.limit_overrides,
                        anchor_value: c.anchor_value,
                    })
                }
            });
        }
        Ok(DomainModel {
            name: raw.name,
            space: raw.space,
            generators,
        })
    }
}
