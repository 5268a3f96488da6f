//! The transfinite criticality chain `Crit_0 ⊇ Crit_1 ⊇ ...`.

use serde::Serialize;

use super::{class_values, ClassValue};
use crate::domain_model::DomainModel;
use crate::error::{Error, Result};
use crate::ideal_fn::Bound;
use crate::ordinal_space::{Ordinal, PointSet};

/// Chains longer than this are reported as unsupported.
const MAX_STAGES: u64 = 64;

#[derive(Clone, Debug, Serialize)]
pub struct ChainStage {
    pub alpha: Ordinal,
    pub set: PointSet,
    /// `m` on the profile classes of this stage.
    pub m_values: Vec<ClassValue>,
}

/// A nonempty stage that maps onto itself: no model of the valuation data
/// can realize it.
#[derive(Clone, Debug, Serialize)]
pub struct Contradiction {
    pub set: PointSet,
    pub point: Ordinal,
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub stages: Vec<ChainStage>,
    /// First stage that is empty.
    pub emptiness: Option<Ordinal>,
    /// First stage equal to its successor.
    pub stabilization: Ordinal,
    pub sp_rank: Ordinal,
    pub contradiction: Option<Contradiction>,
    /// Stages whose successor was not closed.
    pub non_closed: Vec<Ordinal>,
}

impl ChainReport {
    /// Largest `α` with `p ∈ Crit_α`.
    pub fn height(&self, p: &Ordinal) -> Option<Ordinal> {
        self.stages
            .iter()
            .rev()
            .find(|s| s.set.contains(p))
            .map(|s| s.alpha.clone())
    }

    /// Height assigned to each profile class of the full space.
    pub fn heights(&self) -> Vec<(PointSet, Ordinal)> {
        let Some(first) = self.stages.first() else {
            return Vec::new();
        };
        first
            .m_values
            .iter()
            .map(|c| {
                (
                    c.class.clone(),
                    self.height(&c.representative).unwrap_or_else(Ordinal::zero),
                )
            })
            .collect()
    }
}

pub fn crit_chain(model: &DomainModel) -> Result<ChainReport> {
    let mut x = PointSet::full(&model.space);
    let mut stages = Vec::new();
    let mut non_closed = Vec::new();
    for alpha in 0..=MAX_STAGES {
        let values = if x.is_empty() {
            Vec::new()
        } else {
            class_values(model, Some(&x))?
        };
        let next = values
            .iter()
            .filter(|v| v.m > Bound::Finite(1))
            .fold(PointSet::empty(&model.space), |acc, v| {
                acc.union(&v.class).expect("same space")
            });
        let alpha_ord = Ordinal::finite(alpha);
        let stable = next == x;
        stages.push(ChainStage {
            alpha: alpha_ord.clone(),
            set: x.clone(),
            m_values: values,
        });
        if stable {
            let emptiness = stages
                .iter()
                .find(|s| s.set.is_empty())
                .map(|s| s.alpha.clone());
            let contradiction = if x.is_empty() {
                None
            } else {
                Some(contradiction_at(model, &x)?)
            };
            return Ok(ChainReport {
                stages,
                emptiness,
                stabilization: alpha_ord.clone(),
                sp_rank: alpha_ord,
                contradiction,
                non_closed,
            });
        }
        if !next.is_closed() {
            non_closed.push(alpha_ord);
        }
        x = next;
    }
    Err(Error::UnsupportedShape(format!(
        "criticality chain longer than {MAX_STAGES} stages"
    )))
}

fn contradiction_at(model: &DomainModel, set: &PointSet) -> Result<Contradiction> {
    let point = set.first_point().expect("nonempty");
    let mut generators: Vec<usize> = model
        .generators_positive_at(&point)?
        .into_iter()
        .map(|m| m.generator)
        .collect();
    generators.dedup();
    Ok(Contradiction {
        set: set.clone(),
        point,
        generators,
    })
}

/// Height of `p` in the criticality chain.
pub fn sp_height(model: &DomainModel, p: &Ordinal) -> Result<Ordinal> {
    model.space.cb_rank(p)?;
    let report = crit_chain(model)?;
    Ok(report.height(p).unwrap_or_else(Ordinal::zero))
}
