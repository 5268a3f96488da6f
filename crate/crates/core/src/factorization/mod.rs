//! Radical and `n`-bounded factorizations, boundedness witnesses.
//!
//! Products of ideals correspond to pointwise sums of their functions, so a
//! factorization here is a list of functions adding up to the input.

mod cover;

pub(crate) use cover::highest_point;
pub use cover::{bounded_cover, CoverPiece};

use serde::Serialize;

use crate::criticality::{crit_set, Level};
use crate::domain_model::DomainModel;
use crate::error::{Error, Result};
use crate::ideal_fn::{Bound, IdealFunction};
use crate::ordinal_space::PointSet;

/// Rounds of the bounded loop before giving up.
const MAX_ROUNDS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Radical,
    NBounded { n: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorCertificate {
    pub sup: Bound,
    pub support: PointSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct Factorization {
    pub mode: Mode,
    pub factors: Vec<IdealFunction>,
    pub certificate: Vec<FactorCertificate>,
}

impl Factorization {
    fn new(mode: Mode, factors: Vec<IdealFunction>) -> Self {
        let certificate = factors
            .iter()
            .map(|f| FactorCertificate {
                sup: f.sup(),
                support: f.support(),
            })
            .collect();
        Factorization {
            mode,
            factors,
            certificate,
        }
    }

    /// Pointwise sum of the factors.
    pub fn compose(&self, like: &IdealFunction) -> Result<IdealFunction> {
        self.factors
            .iter()
            .try_fold(IdealFunction::zero(like.space()), |acc, g| acc.add(g))
    }

    /// Sum equals `f` and every factor respects the mode.
    pub fn is_valid_for(&self, f: &IdealFunction) -> bool {
        let sums = self.compose(f).is_ok_and(|s| s.same_values(f));
        let modes = self.factors.iter().all(|g| {
            let proper = g.sup() >= Bound::Finite(1);
            proper
                && g.is_fg()
                && match self.mode {
                    Mode::Radical => g.sup() == Bound::Finite(1) && g.support().is_clopen(),
                    Mode::NBounded { n } => g.sup() <= Bound::Finite(n),
                }
        });
        sums && modes
    }
}

fn check_input(f: &IdealFunction) -> Result<()> {
    if !f.is_fg() {
        return Err(Error::InvalidFunction(
            "function is not finitely generated".into(),
        ));
    }
    if f.support().is_empty() {
        return Err(Error::InvalidFunction("function is zero".into()));
    }
    Ok(())
}

/// `f` as a sum of indicators of its level sets; needs `f` continuous.
pub fn radical_factorization(f: &IdealFunction) -> Result<Factorization> {
    check_input(f)?;
    if let Some((level, witness)) = f.continuity_violation() {
        return Err(Error::NotContinuous { level, witness });
    }
    let top = f.sup().finite().ok_or(Error::Unbounded)?;
    let factors = (1..=top)
        .map(|j| IdealFunction::indicator(&f.level_set(j)).map(|g| g.with_fg(true)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Factorization::new(Mode::Radical, factors))
}

/// `f` as a sum of functions bounded by `n`.
pub fn n_bounded_factorization(
    model: &DomainModel,
    f: &IdealFunction,
    n: u64,
) -> Result<Factorization> {
    check_input(f)?;
    if n == 0 {
        return Err(Error::InvalidFunction("bound must be positive".into()));
    }
    if f.space() != &model.space {
        return Err(Error::SpaceMismatch);
    }
    let mode = Mode::NBounded { n };
    if f.sup() <= Bound::Finite(n) {
        return Ok(Factorization::new(mode, vec![f.clone()]));
    }
    let bad = f.support().intersect(&crit_set(model, Level::Finite(n))?)?;
    if let Some(p) = bad.first_point() {
        return Err(Error::CriticalObstruction(p));
    }
    let cover = bounded_cover(model, &f.support(), Some(n))?;
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for _ in 0..MAX_ROUNDS {
        if rest.sup() <= Bound::Finite(n) {
            factors.push(rest);
            return Ok(Factorization::new(mode, factors));
        }
        let mut l = IdealFunction::zero(f.space());
        for piece in &cover {
            l = l.max_fn(&rest.min_fn(&piece.element)?)?;
        }
        debug_assert!(l.support() == rest.support());
        rest = rest.sub_exact(&l)?;
        factors.push(l.with_fg(true));
    }
    Err(Error::UnsupportedShape(
        "bounded factorization did not terminate".into(),
    ))
}

/// A bound on `f` from a bounded element `l` with the same support:
/// `f ≤ t·l` and `bound = sup(t·l)`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundedWitness {
    pub bound: u64,
    pub l: IdealFunction,
    pub t: u64,
}

/// Least `t` with `f ≤ t·l`, given `supp f ⊆ supp l` and `sup f` finite.
fn multiplier(f: &IdealFunction, l: &IdealFunction) -> Result<u64> {
    let top = f.sup().finite().ok_or(Error::Unbounded)?;
    let fits = |t: u64| -> Result<bool> { Ok(l.scale(t).sub_signed(f)?.inf() >= 0) };
    let (mut lo, mut hi) = (0u64, top.max(1));
    if !fits(hi)? {
        return Err(Error::Unbounded);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Bounds `f` when its support avoids `Crit^ω`. A bounded `f` certifies
/// itself; otherwise a finite cover by bounded elements is used.
pub fn bounded_witness(model: &DomainModel, f: &IdealFunction) -> Result<BoundedWitness> {
    check_input(f)?;
    if f.space() != &model.space {
        return Err(Error::SpaceMismatch);
    }
    let bad = f.support().intersect(&crit_set(model, Level::Omega)?)?;
    if let Some(p) = bad.first_point() {
        return Err(Error::OmegaCriticalObstruction(p));
    }
    let l = match f.sup() {
        Bound::Finite(_) => f.clone(),
        Bound::Infinite => cover_element(model, f)?,
    };
    let t = multiplier(f, &l)?;
    let bound = l.scale(t).sup().finite().ok_or(Error::Unbounded)?;
    Ok(BoundedWitness { bound, l, t })
}

/// Maximum of a finite cover of `supp f` by bounded family elements.
pub fn cover_element(model: &DomainModel, f: &IdealFunction) -> Result<IdealFunction> {
    let cover = bounded_cover(model, &f.support(), None)?;
    cover
        .iter()
        .try_fold(IdealFunction::zero(f.space()), |acc, p| {
            acc.max_fn(&p.element)
        })
}

/// `{p ∈ supp f : f(p) ≤ n}`, read off `(n+1)·rad(f) − f`. For `f` with
/// clopen support it is closed exactly when `f` is lower semicontinuous.
pub fn semicont_construction(f: &IdealFunction, n: u64) -> Result<PointSet> {
    if !f.support().is_clopen() {
        return Err(Error::InvalidFunction("support is not clopen".into()));
    }
    let g = f.radical()?.scale(n + 1).sub_signed(f)?;
    let set = g.level_set(1).intersect(&f.support())?;
    if !set.is_closed() {
        let witness = set
            .closure()
            .difference(&set)?
            .first_point()
            .expect("closure adds a point");
        return Err(Error::NotSemicontinuous(witness));
    }
    Ok(set)
}
