//! Critical sets, the transfinite criticality chain and related diagnostics.
//!
//! For a point `p` of a subspace `X`, `m_p` is the least supremum over `X` of
//! a finitely generated ideal function positive at `p`. Sums only raise
//! values and a minimum is positive at `p` iff all its terms are, so it is
//! enough to take the pointwise minimum of every generator member positive at
//! `p`, with each chain pushed to its largest admissible cut.

mod chain;
mod diagnostics;

pub use chain::{crit_chain, sp_height, ChainReport, ChainStage, Contradiction};
pub use diagnostics::{
    completely_unbounded_check, noncritical_density, unbounded_level_diagnostics, LevelDiagnostic,
    UnboundedDiagnostics, UnboundedVerdict,
};

use serde::Serialize;

use crate::domain_model::{DomainModel, Member};
use crate::error::{Error, Result};
use crate::ideal_fn::{Bound, IdealFunction};
use crate::ordinal_space::{Ordinal, PointSet};

/// Rounds of cut doubling before giving up on stabilization.
const MAX_DOUBLINGS: usize = 8;

/// A criticality level `n` or `ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    Finite(u64),
    Omega,
}

impl Level {
    pub fn holds(self, m: Bound) -> bool {
        match self {
            Level::Finite(n) => m > Bound::Finite(n),
            Level::Omega => m == Bound::Infinite,
        }
    }
}

fn coefficient_of(set: &PointSet) -> u64 {
    set.pieces()
        .iter()
        .map(|p| p.upper.max_coefficient())
        .max()
        .unwrap_or(0)
}

/// The smallest finitely generated function positive at `p`, at cut `t`.
pub fn member_min(model: &DomainModel, members: &[Member], t: u64) -> Result<IdealFunction> {
    let mut acc: Option<IdealFunction> = None;
    for m in members {
        let f = model.member_function(m, t)?;
        acc = Some(match acc {
            None => f,
            Some(a) => a.min_fn(&f)?,
        });
    }
    acc.ok_or_else(|| Error::InvalidModel("no generator positive at the point".into()))
}

/// First cut worth trying: beyond every constant of the model and the point.
pub fn initial_cut(model: &DomainModel, p: &Ordinal, within: Option<&PointSet>) -> u64 {
    let c = model
        .max_coefficient()
        .max(p.max_coefficient())
        .max(within.map_or(0, coefficient_of));
    2 + c
}

/// `m_p` relative to the subspace `within`, together with the cut used.
pub fn bounded_sup_with_cut(
    model: &DomainModel,
    p: &Ordinal,
    within: Option<&PointSet>,
) -> Result<(Bound, Option<u64>)> {
    let members = model.generators_positive_at(p)?;
    if members.is_empty() {
        return Ok((Bound::Infinite, None));
    }
    let full;
    let x = match within {
        Some(x) => x,
        None => {
            full = PointSet::full(&model.space);
            &full
        }
    };
    let mut t = initial_cut(model, p, within);
    let mut prev = member_min(model, &members, t)?.sup_on(x)?;
    for _ in 0..MAX_DOUBLINGS {
        let next = member_min(model, &members, t * 2)?.sup_on(x)?;
        if next == prev {
            return Ok((prev, Some(t)));
        }
        prev = next;
        t *= 2;
    }
    Err(Error::UnsupportedShape(format!(
        "bounded supremum at {p} does not stabilize"
    )))
}

/// `m_p` on the whole space.
pub fn bounded_sup_at(model: &DomainModel, p: &Ordinal) -> Result<Bound> {
    Ok(bounded_sup_with_cut(model, p, None)?.0)
}

/// `m_p` on a subspace.
pub fn bounded_sup_on(model: &DomainModel, p: &Ordinal, within: &PointSet) -> Result<Bound> {
    Ok(bounded_sup_with_cut(model, p, Some(within))?.0)
}

/// The value of `m` on one profile class.
#[derive(Clone, Debug, Serialize)]
pub struct ClassValue {
    pub class: PointSet,
    pub rank: u32,
    pub representative: Ordinal,
    pub m: Bound,
}

/// `m` on every profile class of `within`; fails when a class is not uniform.
pub fn class_values(model: &DomainModel, within: Option<&PointSet>) -> Result<Vec<ClassValue>> {
    let mut out = Vec::new();
    for class in model.profile_classes(within)? {
        let mut m: Option<Bound> = None;
        for p in &class.samples {
            let v = bounded_sup_with_cut(model, p, within)?.0;
            match m {
                None => m = Some(v),
                Some(prev) if prev != v => {
                    return Err(Error::UnsupportedShape(format!(
                        "profile class through {} is not uniform ({prev} vs {v} at {p})",
                        class.representative()
                    )))
                }
                _ => {}
            }
        }
        out.push(ClassValue {
            class: class.set.clone(),
            rank: class.rank,
            representative: class.representative().clone(),
            m: m.expect("classes are nonempty"),
        });
    }
    Ok(out)
}

fn union_where(
    model: &DomainModel,
    values: &[ClassValue],
    pred: impl Fn(Bound) -> bool,
) -> PointSet {
    values
        .iter()
        .filter(|v| pred(v.m))
        .fold(PointSet::empty(&model.space), |acc, v| {
            acc.union(&v.class).expect("same space")
        })
}

/// `Crit^n` or `Crit^ω`.
pub fn crit_set(model: &DomainModel, level: Level) -> Result<PointSet> {
    let values = class_values(model, None)?;
    let set = union_where(model, &values, |m| level.holds(m));
    if !set.is_closed() {
        return Err(Error::UnsupportedShape(format!(
            "critical set at level {level:?} is not closed"
        )));
    }
    Ok(set)
}

#[derive(Clone, Debug, Serialize)]
pub struct CritLevel {
    pub n: u64,
    pub set: PointSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct CritReport {
    pub max_n: u64,
    pub m_values: Vec<ClassValue>,
    pub crit_n: Vec<CritLevel>,
    pub crit_omega: PointSet,
    /// Largest finite `m`: from this level on, `Crit^n = Crit^ω`.
    pub stable_from: u64,
    pub all_closed: bool,
    pub nested: bool,
}

impl CritReport {
    pub fn level(&self, n: u64) -> PointSet {
        if n >= self.stable_from || n > self.max_n {
            return self.crit_omega.clone();
        }
        self.crit_n
            .iter()
            .find(|c| c.n == n)
            .map(|c| c.set.clone())
            .expect("computed level")
    }
}

pub fn crit_report(model: &DomainModel, max_n: u64) -> Result<CritReport> {
    let values = class_values(model, None)?;
    let crit_n: Vec<CritLevel> = (1..=max_n)
        .map(|n| CritLevel {
            n,
            set: union_where(model, &values, |m| Level::Finite(n).holds(m)),
        })
        .collect();
    let crit_omega = union_where(model, &values, |m| m.is_infinite());
    let stable_from = values
        .iter()
        .filter_map(|v| v.m.finite())
        .max()
        .unwrap_or(0);
    let all_closed = crit_n.iter().all(|c| c.set.is_closed()) && crit_omega.is_closed();
    let nested = crit_n
        .windows(2)
        .all(|w| w[1].set.is_subset(&w[0].set).unwrap_or(false))
        && crit_n
            .last()
            .is_none_or(|c| crit_omega.is_subset(&c.set).unwrap_or(false));
    Ok(CritReport {
        max_n,
        m_values: values,
        crit_n,
        crit_omega,
        stable_from,
        all_closed,
        nested,
    })
}
