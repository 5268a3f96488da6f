use super::{Context, Status};
use crate::criticality::{
    bounded_sup_with_cut, completely_unbounded_check, crit_chain, crit_set, initial_cut,
    member_min, noncritical_density, Level, UnboundedVerdict,
};
use crate::domain_model::{DomainModel, Violation};
use crate::error::{Error, Result};
use crate::factorization::{
    bounded_witness, highest_point, n_bounded_factorization, semicont_construction,
};
use crate::ideal_fn::{Bound, IdealFunction};
use crate::inv_group::{component_profile, window, zrank, GroupElement};
use crate::ordinal_space::{Ordinal, PointSet};

/// Levels `n` probed by the sampled checks.
const PROBE_LEVELS: std::ops::RangeInclusive<u64> = 1..=3;

const MAX_WINDOW: usize = 2000;

fn fail(witness: impl Into<String>) -> Result<Status> {
    Ok(Status::Fail {
        witness: witness.into(),
    })
}

fn not_applicable(reason: impl Into<String>) -> Result<Status> {
    Ok(Status::NotApplicable {
        reason: reason.into(),
    })
}

fn avoids(f: &IdealFunction, set: &PointSet) -> Result<bool> {
    Ok(f.support().intersect(set)?.is_empty())
}

/// The smallest element positive at `p` with its supremum.
fn tightest_at(model: &DomainModel, p: &Ordinal) -> Result<Option<IdealFunction>> {
    let members = model.generators_positive_at(p)?;
    if members.is_empty() {
        return Ok(None);
    }
    let (_, cut) = bounded_sup_with_cut(model, p, None)?;
    Ok(Some(member_min(
        model,
        &members,
        cut.unwrap_or_else(|| initial_cut(model, p, None)),
    )?))
}

pub(super) fn semicont(c: &Context) -> Result<Status> {
    for v in c.model.validate() {
        if let Violation::SemicontinuityViolation { generator, point } = v {
            return fail(format!("generator {generator} drops at {point}"));
        }
    }
    for (i, f) in c.samples.iter().enumerate() {
        if let Some(p) = f.lsc_violation() {
            return fail(format!("sample {i} drops at {p}"));
        }
        for n in 0..=3 {
            if let Err(e) = semicont_construction(f, n) {
                return fail(format!("sample {i}, level {n}: {e}"));
            }
        }
    }
    Ok(Status::Pass)
}

pub(super) fn critx_a(c: &Context) -> Result<Status> {
    for v in c.values()? {
        let p = &v.representative;
        if v.m <= Bound::Finite(1) {
            let radical = tightest_at(c.model, p)?;
            if !radical.is_some_and(|f| f.sup() <= Bound::Finite(1)) {
                return fail(format!("no radical element certifies {p}"));
            }
        } else if let Some(i) = c
            .samples
            .iter()
            .position(|f| f.value(p).is_ok_and(|x| x >= 1) && f.sup() <= Bound::Finite(1))
        {
            return fail(format!(
                "sample {i} is radical and positive at the critical point {p}"
            ));
        }
    }
    Ok(Status::Pass)
}

pub(super) fn critx_b(c: &Context) -> Result<Status> {
    let r = c.report()?;
    if !r.nested {
        return fail("chain of critical sets is not descending");
    }
    if let Some(l) = r.crit_n.iter().find(|l| !l.set.is_closed()) {
        return fail(format!("Crit^{} is not closed", l.n));
    }
    Ok(Status::Pass)
}

pub(super) fn critx_c(c: &Context) -> Result<Status> {
    let r = c.report()?;
    let meet = r
        .crit_n
        .iter()
        .try_fold(PointSet::full(&c.model.space), |acc, l| {
            acc.intersect(&l.set)
        })?;
    let certified = crit_set(c.model, Level::Finite(r.stable_from.max(1)))?;
    if !r.crit_omega.is_closed() {
        return fail("Crit^ω is not closed");
    }
    if r.stable_from <= c.config.max_n && meet != r.crit_omega {
        return fail("Crit^ω differs from the intersection of the probed levels");
    }
    if r.stable_from >= 1 && certified != r.crit_omega {
        return fail(format!("Crit^{} differs from Crit^ω", r.stable_from));
    }
    Ok(Status::Pass)
}

pub(super) fn idbounded(c: &Context) -> Result<Status> {
    let omega = c.crit(Level::Omega)?;
    for (i, f) in c.samples.iter().enumerate() {
        let a = avoids(f, &omega)?;
        if a != f.sup().finite().is_some() {
            return fail(format!(
                "sample {i}: boundedness {} but avoidance {a}",
                f.sup()
            ));
        }
        match bounded_witness(c.model, f) {
            Ok(w) if a && f.sup() <= Bound::Finite(w.bound) => {}
            Err(Error::OmegaCriticalObstruction(_)) if !a => {}
            other => return fail(format!("sample {i}: unexpected witness outcome {other:?}")),
        }
    }
    Ok(Status::Pass)
}

pub(super) fn nfact(c: &Context) -> Result<Status> {
    for n in PROBE_LEVELS {
        let crit = c.crit(Level::Finite(n))?;
        for (i, f) in c.samples.iter().enumerate() {
            let a = avoids(f, &crit)?;
            match n_bounded_factorization(c.model, f, n) {
                Ok(fac) if a && fac.is_valid_for(f) => {}
                Err(Error::CriticalObstruction(_)) if !a => {}
                Ok(_) => {
                    return fail(format!(
                        "sample {i}, n={n}: factorization where none should exist"
                    ))
                }
                Err(e) => return fail(format!("sample {i}, n={n}: {e}")),
            }
        }
    }
    Ok(Status::Pass)
}

pub(super) fn sp_bounded_cor(c: &Context) -> Result<Status> {
    let omega = c.crit(Level::Omega)?;
    match omega.first_point() {
        None => match c.samples.iter().position(|f| f.sup().is_infinite()) {
            Some(i) => fail(format!("sample {i} is unbounded although Crit^ω is empty")),
            None => Ok(Status::Pass),
        },
        Some(p) => match tightest_at(c.model, &p)? {
            Some(f) if f.sup().is_infinite() => Ok(Status::Pass),
            _ => fail(format!("no unbounded element at the ω-critical point {p}")),
        },
    }
}

pub(super) fn nsp_bounded_cor(c: &Context) -> Result<Status> {
    for n in PROBE_LEVELS {
        let crit = c.crit(Level::Finite(n))?;
        match crit.first_point() {
            None => {
                for (i, f) in c.samples.iter().enumerate() {
                    if n_bounded_factorization(c.model, f, n).is_err() {
                        return fail(format!("sample {i} has no {n}-bounded factorization"));
                    }
                }
            }
            Some(p) => {
                let Some(f) = tightest_at(c.model, &p)? else {
                    continue;
                };
                if n_bounded_factorization(c.model, &f.with_fg(true), n).is_ok() {
                    return fail(format!(
                        "element positive at the {n}-critical point {p} factors"
                    ));
                }
            }
        }
    }
    Ok(Status::Pass)
}

pub(super) fn inscrit_full(c: &Context) -> Result<Status> {
    let full = PointSet::full(&c.model.space);
    let r = c.report()?;
    let values = c.values()?;
    let all_full: Vec<bool> = r.crit_n.iter().map(|l| l.set == full).collect();
    let flags = [
        r.crit_n.first().is_some_and(|l| l.set == full),
        all_full.iter().any(|b| *b),
        all_full.iter().all(|b| *b),
        r.crit_omega == full,
        values.iter().all(|v| v.m.is_infinite()) && c.samples.iter().all(|f| f.sup().is_infinite()),
    ];
    if flags.iter().all(|b| *b == flags[0]) {
        Ok(Status::Pass)
    } else {
        fail(format!("equivalent conditions disagree: {flags:?}"))
    }
}

/// A sum of elements whose supports cover the space.
fn jacobson_element(model: &DomainModel) -> Result<Option<IdealFunction>> {
    let mut uncovered = PointSet::full(&model.space);
    let mut acc = IdealFunction::zero(&model.space);
    for _ in 0..10_000 {
        let Some(p) = highest_point(&uncovered) else {
            return Ok(Some(acc.with_fg(true)));
        };
        let members = model.generators_positive_at(&p)?;
        if members.is_empty() {
            return Ok(None);
        }
        let f = member_min(model, &members, initial_cut(model, &p, None))?;
        uncovered = uncovered.difference(&f.support())?;
        acc = acc.add(&f)?;
    }
    Ok(None)
}

pub(super) fn lemma_dense(c: &Context) -> Result<Status> {
    if !c.model.space.is_compact() {
        return not_applicable("the Jacobson radical is zero");
    }
    let Some(f) = jacobson_element(c.model)? else {
        return not_applicable("no element inside the Jacobson radical was found");
    };
    let values = c.values()?;
    for n in 0..=c.config.max_n.min(4) {
        let y = f.level_above(n);
        if y.is_dense() {
            continue;
        }
        // Off the closure of Y_n some point must carry an element bounded by n.
        let outside = y.closure().complement();
        let ok = values.iter().any(|v| {
            v.m <= Bound::Finite(n) && !v.class.intersect(&outside).is_ok_and(|s| s.is_empty())
        });
        if !ok {
            return fail(format!(
                "Y_{n} is not dense yet no point off its closure is {n}-bounded"
            ));
        }
    }
    Ok(Status::Pass)
}

pub(super) fn exist_noncrit(c: &Context) -> Result<Status> {
    let (non, _) = noncritical_density(c.model)?;
    if non.is_empty() {
        return fail("every point is critical");
    }
    Ok(Status::Pass)
}

pub(super) fn dense(c: &Context) -> Result<Status> {
    let (non, dense) = noncritical_density(c.model)?;
    if !dense {
        let gap = non.closure().complement().first_point();
        return fail(format!(
            "noncritical set misses a neighbourhood of {}",
            gap.map_or("?".into(), |p| p.to_string())
        ));
    }
    Ok(Status::Pass)
}

fn witness_status(c: &Context) -> Result<Status> {
    match completely_unbounded_check(c.model)? {
        UnboundedVerdict::NotApplicable => not_applicable("the spectrum is not compact"),
        UnboundedVerdict::Witness {
            avoids_crit_omega: true,
            ..
        } => Ok(Status::Pass),
        UnboundedVerdict::Witness { point, .. } => {
            fail(format!("bounded element at {point} meets Crit^ω"))
        }
        UnboundedVerdict::ModelContradiction { .. } => fail("every point is ω-critical"),
    }
}

pub(super) fn compl_unbound_jac(c: &Context) -> Result<Status> {
    witness_status(c)
}

pub(super) fn jac_complunbounded(c: &Context) -> Result<Status> {
    if !c.model.jacobson_nonzero() {
        return not_applicable("the Jacobson radical is zero");
    }
    witness_status(c)
}

pub(super) fn sp_scat(c: &Context) -> Result<Status> {
    let chain = crit_chain(c.model)?;
    if let Some(k) = chain.contradiction {
        return fail(format!(
            "stage {} is stable and nonempty at {}; positive generators {:?}",
            chain.stabilization, k.point, k.generators
        ));
    }
    if chain.emptiness.is_none() {
        return fail("chain never becomes empty");
    }
    Ok(Status::Pass)
}

fn sample_elements(c: &Context) -> Result<Vec<GroupElement>> {
    let plain: Vec<GroupElement> = c
        .samples
        .iter()
        .enumerate()
        .map(|(i, f)| GroupElement::from_ideal(f.clone(), format!("s{i}")))
        .collect();
    let mut out = Vec::new();
    for w in plain.windows(2) {
        out.push(w[0].sub(&w[1])?);
    }
    Ok(out)
}

pub(super) fn freekernel(c: &Context) -> Result<Status> {
    let omega = c.crit(Level::Omega)?;
    for (i, g) in sample_elements(c)?.iter().enumerate() {
        let k = crate::inv_group::kernel_membership(c.model, g, Level::Omega)?;
        let disjoint = g.support().intersect(&omega)?.is_empty();
        let bounded = k.num_bound.is_some() && k.den_bound.is_some();
        if k.in_kernel != disjoint || k.in_kernel != bounded {
            return fail(format!(
                "element {i}: kernel {}, disjoint {disjoint}, bounded {bounded}",
                k.in_kernel
            ));
        }
        let actually_bounded =
            g.value.num().sup().finite().is_some() && g.value.den().sup().finite().is_some();
        if k.in_kernel && !actually_bounded {
            return fail(format!("element {i} is in the kernel but unbounded"));
        }
    }
    Ok(Status::Pass)
}

/// Window depth keeping the truncation near `MAX_WINDOW` points.
fn capped_depth(c: &Context) -> u64 {
    let dims = c.model.space.rank_cap() as f64 + 1.0;
    let cap = (MAX_WINDOW as f64).powf(1.0 / dims).floor() as u64;
    c.config.window_depth.min(cap.saturating_sub(1).max(2))
}

pub(super) fn invfree(c: &Context) -> Result<Status> {
    let elements = sample_elements(c)?;
    let pts = window(&c.model.space, capped_depth(c));
    for (i, g) in elements.iter().enumerate() {
        let profile = component_profile(c.model, g)?;
        if !profile.supports_match(g) {
            return fail(format!(
                "element {i}: layer supports do not partition the support"
            ));
        }
        for p in &pts {
            if profile.value_at(p) != g.value_at(p)? {
                return fail(format!("element {i}: layers do not reassemble at {p}"));
            }
        }
    }
    let mut distinct: Vec<GroupElement> = Vec::new();
    for g in elements {
        if !g.is_zero() && !distinct.contains(&g) {
            distinct.push(g);
        }
    }
    let mut depth = capped_depth(c);
    for _ in 0..3 {
        match zrank(&distinct, &window(&c.model.space, depth)) {
            Ok(cert) if cert.rank == cert.rank_mod_p => return Ok(Status::Pass),
            Ok(cert) => {
                return fail(format!(
                    "integer rank {} but rank {} modulo a prime",
                    cert.rank, cert.rank_mod_p
                ))
            }
            Err(Error::WindowTooSmall(..)) => depth *= 2,
            Err(e) => return Err(e),
        }
    }
    not_applicable("no window separates the sampled elements")
}
