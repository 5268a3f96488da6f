//! Finite covers of a support by bounded family elements.

use serde::Serialize;

use crate::criticality::{bounded_sup_with_cut, member_min};
use crate::domain_model::DomainModel;
use crate::error::{Error, Result};
use crate::ideal_fn::{Bound, IdealFunction};
use crate::ordinal_space::{Ordinal, PointSet};

/// Cover steps before giving up (non-compact supports never finish).
const MAX_PIECES: usize = 100_000;

#[derive(Clone, Debug, Serialize)]
pub struct CoverPiece {
    pub point: Ordinal,
    pub element: IdealFunction,
}

/// Family elements positive at `p`: each member alone, then their minimum.
fn candidates(model: &DomainModel, p: &Ordinal) -> Result<Vec<IdealFunction>> {
    let members = model.generators_positive_at(p)?;
    if members.is_empty() {
        return Ok(Vec::new());
    }
    let (_, cut) = bounded_sup_with_cut(model, p, None)?;
    let t = cut.unwrap_or(0);
    let mut out = members
        .iter()
        .map(|m| model.member_function(m, t))
        .collect::<Result<Vec<_>>>()?;
    if members.len() > 1 {
        out.push(member_min(model, &members, t)?);
    }
    Ok(out)
}

/// The element used at `p`. With a bound `n`: the candidate with smallest
/// sup (ties to the smallest support), scaled as far as `n` allows.
fn choose(model: &DomainModel, p: &Ordinal, n: Option<u64>) -> Result<IdealFunction> {
    let mut best: Option<(u64, Option<u64>, IdealFunction)> = None;
    for g in candidates(model, p)? {
        let Bound::Finite(s) = g.sup() else { continue };
        if n.is_some_and(|n| s > n) {
            continue;
        }
        let size = g.support().count();
        let key = (s, size.unwrap_or(u64::MAX));
        if best
            .as_ref()
            .is_none_or(|(bs, bz, _)| key < (*bs, bz.unwrap_or(u64::MAX)))
        {
            best = Some((s, size, g));
        }
    }
    let Some((s, _, g)) = best else {
        return Err(match n {
            Some(_) => Error::CriticalObstruction(p.clone()),
            None => Error::OmegaCriticalObstruction(p.clone()),
        });
    };
    Ok(match n {
        Some(n) => g.scale(n / s),
        None => g,
    })
}

/// Covers `target` greedily, highest rank first, then in space order.
pub fn bounded_cover(
    model: &DomainModel,
    target: &PointSet,
    n: Option<u64>,
) -> Result<Vec<CoverPiece>> {
    let mut uncovered = target.clone();
    let mut pieces = Vec::new();
    while let Some(p) = highest_point(&uncovered) {
        if pieces.len() >= MAX_PIECES {
            return Err(Error::UnsupportedShape(
                "support has no finite cover".into(),
            ));
        }
        let element = choose(model, &p, n)?;
        uncovered = uncovered.difference(&element.support())?;
        pieces.push(CoverPiece { point: p, element });
    }
    Ok(pieces)
}

/// First point of the largest rank present in `set`.
pub(crate) fn highest_point(set: &PointSet) -> Option<Ordinal> {
    let top = set.max_rank()?;
    (0..=top).rev().find_map(|r| {
        set.intersect(&PointSet::rank_exactly(set.space(), r))
            .ok()
            .and_then(|s| s.first_point())
    })
}
