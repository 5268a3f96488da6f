//! Density of the noncritical set, level sets of unbounded functions and the
//! search for bounded elements.

use serde::Serialize;

use super::{bounded_sup_with_cut, class_values, crit_set, member_min, Level};
use crate::domain_model::DomainModel;
use crate::error::Result;
use crate::ideal_fn::{Bound, IdealFunction};
use crate::ordinal_space::{Ordinal, PointSet};

/// The complement of `Crit^1` and whether it is dense.
pub fn noncritical_density(model: &DomainModel) -> Result<(PointSet, bool)> {
    let crit = crit_set(model, Level::Finite(1))?;
    let non = crit.complement();
    let dense = non.is_dense();
    Ok((non, dense))
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDiagnostic {
    pub n: u64,
    pub set: PointSet,
    pub open: bool,
    pub dense: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnboundedDiagnostics {
    pub levels: Vec<LevelDiagnostic>,
    pub sup: Bound,
    /// Positive on the whole of a compact space.
    pub jacobson_supported: bool,
    pub all_dense: bool,
    /// First level that fails to be dense.
    pub first_sparse: Option<u64>,
}

/// The sets `Y_n = {f > n}` for `n ≤ max_n`.
pub fn unbounded_level_diagnostics(
    model: &DomainModel,
    f: &IdealFunction,
    max_n: u64,
) -> Result<UnboundedDiagnostics> {
    if f.space() != &model.space {
        return Err(crate::error::Error::SpaceMismatch);
    }
    let levels: Vec<LevelDiagnostic> = (0..=max_n)
        .map(|n| {
            let set = f.level_above(n);
            LevelDiagnostic {
                n,
                open: set.is_open(),
                dense: set.is_dense(),
                set,
            }
        })
        .collect();
    let first_sparse = levels.iter().find(|l| !l.dense).map(|l| l.n);
    let jacobson_supported =
        model.space.is_compact() && f.support() == PointSet::full(&model.space);
    Ok(UnboundedDiagnostics {
        sup: f.sup(),
        all_dense: first_sparse.is_none(),
        first_sparse,
        jacobson_supported,
        levels,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum UnboundedVerdict {
    /// The spectrum is not compact, so the radical is zero.
    NotApplicable,
    /// A bounded generator combination positive at `point`.
    Witness {
        point: Ordinal,
        generators: Vec<usize>,
        function: IdealFunction,
        bound: u64,
        avoids_crit_omega: bool,
    },
    /// Every point is `ω`-critical; impossible for a genuine domain.
    ModelContradiction { crit_omega: PointSet },
}

/// Looks for a bounded element, preferring one whose support misses `Crit^ω`.
pub fn completely_unbounded_check(model: &DomainModel) -> Result<UnboundedVerdict> {
    if !model.space.is_compact() {
        return Ok(UnboundedVerdict::NotApplicable);
    }
    let crit_omega = crit_set(model, Level::Omega)?;
    let mut fallback = None;
    for class in class_values(model, None)? {
        let Bound::Finite(bound) = class.m else {
            continue;
        };
        let p = class.representative;
        let members = model.generators_positive_at(&p)?;
        let (_, cut) = bounded_sup_with_cut(model, &p, None)?;
        let function = member_min(model, &members, cut.unwrap_or(0))?;
        let avoids = function.support().intersect(&crit_omega)?.is_empty();
        let mut generators: Vec<usize> = members.iter().map(|m| m.generator).collect();
        generators.dedup();
        let w = UnboundedVerdict::Witness {
            point: p,
            generators,
            function,
            bound,
            avoids_crit_omega: avoids,
        };
        if avoids {
            return Ok(w);
        }
        fallback.get_or_insert(w);
    }
    Ok(fallback.unwrap_or(UnboundedVerdict::ModelContradiction { crit_omega }))
}
