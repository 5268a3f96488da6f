//! Built-in models.

use std::collections::BTreeMap;

use super::model::{DomainModel, GeneratorSpec};
use super::template::{Anchors, ChainTemplate, CutExpr, TemplateSegment};
use crate::ideal_fn::Rule;
use crate::ordinal_space::{Ordinal, PointSet, SpectrumSpace};

/// Names listed by `builtin list`. Families accept other parameters too.
pub fn builtin_names() -> Vec<String> {
    let mut v: Vec<String> = ["example-2", "example-3", "example-5", "example-growing"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    v.extend((1..=3).map(|k| format!("ladder-{k}")));
    v.push("dedekind-finite-5".into());
    v.push("dedekind-discrete".into());
    v
}

pub fn builtin(name: &str) -> Option<DomainModel> {
    if name == "example-growing" {
        return Some(example_growing());
    }
    if name == "dedekind-discrete" {
        return Some(dedekind_discrete());
    }
    let param = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|s| s.parse::<u64>().ok())
    };
    if let Some(r) = param("example-") {
        return (r >= 2).then(|| example_r(r));
    }
    if let Some(k) = param("ladder-") {
        return (1..=8).contains(&k).then(|| ladder(k as u32));
    }
    if let Some(n) = param("dedekind-finite-") {
        return (n >= 1).then(|| dedekind_finite(n));
    }
    None
}

fn seg(upper: CutExpr, rule: Rule) -> TemplateSegment {
    TemplateSegment { upper, rule }
}

/// Indicators of all isolated points, as one anchored family.
pub fn isolated_indicators(space: &SpectrumSpace) -> GeneratorSpec {
    GeneratorSpec::Chain(ChainTemplate {
        anchors: Some(Anchors {
            rank: 0,
            region: PointSet::rank_exactly(space, 0),
        }),
        segments: vec![
            seg(CutExpr::fixed(Ordinal::zero()), Rule::Const(0)),
            seg(CutExpr::fixed(Ordinal::finite(1)), Rule::Const(1)),
            seg(CutExpr::Top, Rule::Const(0)),
        ],
        limit_overrides: BTreeMap::new(),
        anchor_value: None,
    })
}

/// Members vanish up to the cut `t`, take `tail` on later finite points and
/// 1 at `ω`.
fn tail_chain(tail: Rule) -> GeneratorSpec {
    GeneratorSpec::Chain(ChainTemplate::unanchored(
        vec![
            seg(CutExpr::moving(Ordinal::finite(1), 0), Rule::Const(0)),
            seg(CutExpr::Top, tail),
        ],
        BTreeMap::from([(Ordinal::omega(), 1)]),
    ))
}

pub fn example_r(r: u64) -> DomainModel {
    let space = SpectrumSpace::interval(Ordinal::omega());
    let gens = vec![
        isolated_indicators(&space),
        tail_chain(Rule::Const(r as i64)),
    ];
    DomainModel::new(format!("example-{r}"), space, gens)
}

pub fn example_growing() -> DomainModel {
    let space = SpectrumSpace::interval(Ordinal::omega());
    let gens = vec![isolated_indicators(&space), tail_chain(Rule::linear(1, 0))];
    DomainModel::new("example-growing", space, gens)
}

/// A family anchored at the rank-`j` points: `value` on a window below the
/// anchor that shrinks with the cut, `anchor_value` at the anchor.
pub fn rank_family(space: &SpectrumSpace, j: u32, value: i64, anchor_value: i64) -> GeneratorSpec {
    GeneratorSpec::Chain(ChainTemplate {
        anchors: Some(Anchors {
            rank: j,
            region: PointSet::rank_exactly(space, j),
        }),
        segments: vec![
            seg(CutExpr::moving(Ordinal::zero(), j - 1), Rule::Const(0)),
            seg(CutExpr::fixed(Ordinal::omega_pow(j)), Rule::Const(value)),
            seg(CutExpr::Top, Rule::Const(0)),
        ],
        limit_overrides: BTreeMap::new(),
        anchor_value: Some(anchor_value),
    })
}

/// On `[0, ω^k]`: indicators of isolated points and, for each rank `j ≥ 1`,
/// a family worth 2 below each rank-`j` point and 1 at it.
pub fn ladder(k: u32) -> DomainModel {
    let space = SpectrumSpace::interval(Ordinal::omega_pow(k));
    let mut gens = vec![isolated_indicators(&space)];
    gens.extend((1..=k).map(|j| rank_family(&space, j, 2, 1)));
    DomainModel::new(format!("ladder-{k}"), space, gens)
}

pub fn dedekind_finite(n: u64) -> DomainModel {
    let space = SpectrumSpace::interval(Ordinal::finite(n - 1));
    let gens = vec![isolated_indicators(&space)];
    DomainModel::new(format!("dedekind-finite-{n}"), space, gens)
}

pub fn dedekind_discrete() -> DomainModel {
    let space = SpectrumSpace::CountableDiscrete;
    let gens = vec![isolated_indicators(&space)];
    DomainModel::new("dedekind-discrete", space, gens)
}
