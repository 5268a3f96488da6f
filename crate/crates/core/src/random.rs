//! Seeded generators for randomized property runs.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain_model::{DomainModel, GeneratorSpec};
use crate::ideal_fn::{IdealFunction, Rule};
use crate::ordinal_space::{Ordinal, PointSet, SpectrumSpace};

/// Default seed for randomized runs.
pub const DEFAULT_SEED: u64 = 0xAD1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed from `ADKLAB_SEED` (decimal or `0x` hex), else the default.
pub fn seed_from_env() -> u64 {
    std::env::var("ADKLAB_SEED")
        .ok()
        .and_then(
            |s| match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
                Some(h) => u64::from_str_radix(h, 16).ok(),
                None => s.parse().ok(),
            },
        )
        .unwrap_or(DEFAULT_SEED)
}

/// Candidate breakpoints: points of the space with small coefficients.
pub fn small_points(space: &SpectrumSpace, coeff: u64) -> Vec<Ordinal> {
    let mut pts = space.truncation(coeff);
    pts.retain(|p| space.contains(p));
    pts
}

/// Random sorted breakpoints ending at the space bound.
pub fn random_breaks(rng: &mut impl Rng, space: &SpectrumSpace, max: usize) -> Vec<Ordinal> {
    let pool = small_points(space, 5);
    let k = rng.gen_range(0..=max);
    let mut cuts: Vec<Ordinal> = pool.choose_multiple(rng, k).cloned().collect();
    cuts.push(space.bound());
    cuts.sort();
    cuts.dedup();
    cuts
}

/// A random step function with optional linear pieces and overrides. It need
/// not be lower semicontinuous.
pub fn random_function(rng: &mut impl Rng, space: &SpectrumSpace, max_value: i64) -> IdealFunction {
    let omega = Ordinal::omega();
    let cuts = random_breaks(rng, space, 4);
    let mut overrides = BTreeMap::new();
    let steps: Vec<(Ordinal, Rule)> = cuts
        .into_iter()
        .map(|u| {
            let linear_ok = u <= omega;
            let rule = if linear_ok && rng.gen_bool(0.25) {
                Rule::linear(rng.gen_range(1..=2), rng.gen_range(0..=max_value))
            } else {
                Rule::Const(rng.gen_range(0..=max_value))
            };
            if !rule.is_const() && u == omega && space.contains(&omega) {
                overrides.insert(omega.clone(), rng.gen_range(0..=max_value));
            }
            (u, rule)
        })
        .collect();
    let pool = small_points(space, 5);
    for _ in 0..rng.gen_range(0..=3) {
        let p = pool.choose(rng).expect("nonempty space").clone();
        overrides.insert(p, rng.gen_range(0..=max_value));
    }
    IdealFunction::new(space, steps, overrides, false).expect("generated shape is valid")
}

/// A random lower semicontinuous function: overrides at limit points are
/// pushed down to the surrounding value.
pub fn random_lsc_function(
    rng: &mut impl Rng,
    space: &SpectrumSpace,
    max_value: i64,
) -> IdealFunction {
    let f = random_function(rng, space, max_value);
    let mut overrides = f.overrides().clone();
    for (p, v) in overrides.iter_mut() {
        if !p.is_limit() {
            continue;
        }
        let seg = f
            .segments()
            .iter()
            .find(|s| *p <= s.upper)
            .expect("covering");
        if let Rule::Const(c) = seg.rule {
            *v = (*v).min(c);
        }
    }
    let steps = f
        .segments()
        .iter()
        .map(|s| (s.upper.clone(), s.rule))
        .collect();
    IdealFunction::new(space, steps, overrides, false).expect("same shape")
}

/// A random clopen set: a union of intervals between random breakpoints.
pub fn random_clopen(rng: &mut impl Rng, space: &SpectrumSpace) -> PointSet {
    let cuts = random_breaks(rng, space, 4);
    let mut set = PointSet::empty(space);
    let mut lower: Option<Ordinal> = None;
    for u in cuts {
        if rng.gen_bool(0.5) {
            set = set
                .union(&PointSet::interval(space, lower.as_ref(), &u))
                .expect("same space");
        }
        lower = Some(u);
    }
    set
}

/// A random continuous function: a sum of indicators of clopen sets.
pub fn random_continuous(
    rng: &mut impl Rng,
    space: &SpectrumSpace,
    layers: usize,
) -> IdealFunction {
    let mut f = IdealFunction::zero(space);
    for _ in 0..rng.gen_range(1..=layers) {
        let ind = IdealFunction::indicator(&random_clopen(rng, space)).expect("clopen");
        f = f.add(&ind).expect("same space");
    }
    f
}

/// A random set in the rank-mask fragment.
pub fn random_pointset(rng: &mut impl Rng, space: &SpectrumSpace) -> PointSet {
    let cuts = random_breaks(rng, space, 4);
    let mut set = PointSet::empty(space);
    let mut lower: Option<Ordinal> = None;
    for u in cuts {
        let mask = rng.gen_range(0..8u64);
        let piece = PointSet::interval_ranks(space, lower.as_ref(), &u, mask);
        set = set.union(&piece).expect("same space");
        lower = Some(u);
    }
    set
}

/// One random member instance of a model generator.
pub fn random_member(rng: &mut impl Rng, model: &DomainModel) -> IdealFunction {
    let i = rng.gen_range(0..model.generators.len());
    match &model.generators[i] {
        GeneratorSpec::Single(f) => f.clone(),
        GeneratorSpec::Chain(c) => {
            let anchor = c.anchors.as_ref().map(|a| {
                let pts: Vec<Ordinal> = a.region.points().take(6).collect();
                pts.choose(rng).expect("nonempty anchor region").clone()
            });
            let t = rng.gen_range(0..8);
            c.instance(&model.space, anchor.as_ref(), t)
                .expect("valid model")
        }
    }
}

/// A random nonzero element of the finitely generated family: sums and
/// minima of up to `terms` member instances.
pub fn random_family_element(
    rng: &mut impl Rng,
    model: &DomainModel,
    terms: usize,
) -> IdealFunction {
    loop {
        let mut f = random_member(rng, model);
        for _ in 1..rng.gen_range(1..=terms.max(1)) {
            let g = random_member(rng, model);
            f = if rng.gen_bool(0.6) {
                f.add(&g)
            } else {
                f.min_fn(&g)
            }
            .expect("same space");
        }
        if !f.support().is_empty() {
            return f.with_fg(true);
        }
    }
}

fn random_space(rng: &mut impl Rng) -> SpectrumSpace {
    match rng.gen_range(0..10) {
        0 => SpectrumSpace::CountableDiscrete,
        1 => SpectrumSpace::interval(Ordinal::finite(rng.gen_range(0..12))),
        _ => {
            let deg = rng.gen_range(1..=3u32);
            let mut terms = vec![(deg, rng.gen_range(1..=2u64))];
            for e in (0..deg).rev() {
                if rng.gen_bool(0.3) {
                    terms.push((e, rng.gen_range(1..=3)));
                }
            }
            SpectrumSpace::interval(Ordinal::from_terms(terms).expect("descending exponents"))
        }
    }
}

/// A random model that passes validation: indicators of isolated points, a
/// family per rank worth 1 at its anchors and a random value below them,
/// continuous singles and constants.
pub fn random_model(rng: &mut impl Rng, name: impl Into<String>) -> DomainModel {
    let name = name.into();
    loop {
        let space = random_space(rng);
        let mut gens = vec![crate::domain_model::isolated_indicators(&space)];
        for j in 1..=space.rank_cap() {
            gens.push(crate::domain_model::rank_family(
                &space,
                j,
                rng.gen_range(1..=4),
                1,
            ));
        }
        for _ in 0..rng.gen_range(0..=2) {
            let f = random_continuous(rng, &space, 2).with_fg(true);
            if f.sup() >= crate::ideal_fn::Bound::Finite(1) {
                gens.push(GeneratorSpec::Single(f));
            }
        }
        if rng.gen_bool(0.3) {
            gens.push(GeneratorSpec::Single(
                IdealFunction::constant(&space, rng.gen_range(1..=3)).with_fg(true),
            ));
        }
        let m = DomainModel::new(name.clone(), space, gens);
        if !m.generators.is_empty() && m.validate().is_empty() {
            return m;
        }
    }
}
