//! Splitting an element along the layers `Crit_α \ Crit_{α+1}`.

use serde::Serialize;

use super::GroupElement;
use crate::criticality::crit_chain;
use crate::domain_model::DomainModel;
use crate::error::{Error, Result};
use crate::ideal_fn::Rule;
use crate::ordinal_space::{Ordinal, PointSet};

/// Points of a layer on which the element follows one rule.
#[derive(Clone, Debug, Serialize)]
pub struct LayerPiece {
    pub set: PointSet,
    pub rule: Rule,
}

#[derive(Clone, Debug, Serialize)]
pub struct Layer {
    pub alpha: Ordinal,
    pub set: PointSet,
    pub support: PointSet,
    pub pieces: Vec<LayerPiece>,
    pub points: Vec<(Ordinal, i64)>,
}

impl Layer {
    /// Value of the layer component, zero off the layer.
    pub fn value_at(&self, p: &Ordinal) -> i64 {
        if let Some((_, v)) = self.points.iter().find(|(q, _)| q == p) {
            return *v;
        }
        self.pieces
            .iter()
            .find(|pc| pc.set.contains(p))
            .and_then(|pc| pc.rule.at(p))
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentProfile {
    pub layers: Vec<Layer>,
}

impl ComponentProfile {
    /// Sum of all layer components at `p`.
    pub fn value_at(&self, p: &Ordinal) -> i64 {
        self.layers.iter().map(|l| l.value_at(p)).sum()
    }

    /// Layer supports are disjoint and together give the support of `g`.
    pub fn supports_match(&self, g: &GroupElement) -> bool {
        let mut union = PointSet::empty(g.space());
        for l in &self.layers {
            if !union.intersect(&l.support).is_ok_and(|s| s.is_empty()) {
                return false;
            }
            union = union.union(&l.support).expect("same space");
        }
        union == g.support()
    }
}

pub fn component_profile(model: &DomainModel, g: &GroupElement) -> Result<ComponentProfile> {
    if g.space() != &model.space {
        return Err(Error::SpaceMismatch);
    }
    let chain = crit_chain(model)?;
    if chain.contradiction.is_some() {
        return Err(Error::InvalidModel(
            "criticality chain does not reach the empty set".into(),
        ));
    }
    let d = g.value.num().sub_signed(g.value.den())?;
    let support = g.support();
    let overridden = PointSet::from_points(&model.space, d.overrides().keys())?;
    let mut layers = Vec::new();
    for w in chain.stages.windows(2) {
        let set = w[0].set.difference(&w[1].set)?;
        let mut pieces = Vec::new();
        for (lower, s) in d.segments_with_bounds() {
            let part = PointSet::interval(&model.space, lower, &s.upper)
                .intersect(&set)?
                .difference(&overridden)?;
            if !part.is_empty() && s.rule != Rule::Const(0) {
                pieces.push(LayerPiece {
                    set: part,
                    rule: s.rule,
                });
            }
        }
        let points = d
            .overrides()
            .iter()
            .filter(|(p, v)| **v != 0 && set.contains(p))
            .map(|(p, v)| (p.clone(), *v))
            .collect();
        layers.push(Layer {
            alpha: w[0].alpha.clone(),
            support: support.intersect(&set)?,
            set,
            pieces,
            points,
        });
    }
    Ok(ComponentProfile { layers })
}
