//! A harness that checks the structural statements of the theory on one
//! model and reports each as pass, fail or not applicable.

mod checks;

use serde::Serialize;

use std::sync::OnceLock;

use crate::criticality::{crit_report, crit_set, ClassValue, CritReport, Level};
use crate::domain_model::DomainModel;
use crate::error::Result;
use crate::ideal_fn::IdealFunction;
use crate::ordinal_space::PointSet;
use crate::random::{random_family_element, rng, DEFAULT_SEED};

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail { witness: String },
    NotApplicable { reason: String },
}

impl Status {
    pub fn is_fail(&self) -> bool {
        matches!(self, Status::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremCheck {
    pub id: &'static str,
    /// The statement being checked, in short form.
    pub anchor: &'static str,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_n: u64,
    pub seed: u64,
    /// Random family elements drawn per check.
    pub samples: usize,
    /// Truncation depth for pointwise comparisons.
    pub window_depth: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 16,
            seed: DEFAULT_SEED,
            samples: 12,
            window_depth: 10,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub model: String,
    pub checks: Vec<TheoremCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crit_omega: Option<PointSet>,
    /// Some statement failed: the model cannot come from a genuine domain.
    pub model_contradiction: bool,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        !self.model_contradiction
    }

    pub fn get(&self, id: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Shared inputs of the checks.
pub(crate) struct Context<'a> {
    pub model: &'a DomainModel,
    pub config: &'a SuiteConfig,
    pub samples: Vec<IdealFunction>,
    report: OnceLock<Result<CritReport>>,
}

impl Context<'_> {
    pub fn report(&self) -> Result<&CritReport> {
        self.report
            .get_or_init(|| crit_report(self.model, self.config.max_n))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn values(&self) -> Result<&[ClassValue]> {
        Ok(&self.report()?.m_values)
    }

    pub fn crit(&self, level: Level) -> Result<PointSet> {
        let r = self.report()?;
        match level {
            Level::Omega => Ok(r.crit_omega.clone()),
            Level::Finite(n) if n >= 1 && (n <= r.max_n || n >= r.stable_from) => Ok(r.level(n)),
            _ => crit_set(self.model, level),
        }
    }
}

type CheckFn = fn(&Context) -> Result<Status>;

const CHECKS: [(&str, &str, CheckFn); 17] = [
    (
        "semicont",
        "the valuation function of a proper finitely generated ideal is lower semicontinuous",
        checks::semicont,
    ),
    (
        "critx-a",
        "Crit^1 is the set of critical maximal ideals",
        checks::critx_a,
    ),
    (
        "critx-b",
        "the sets Crit^n form a descending chain of closed sets",
        checks::critx_b,
    ),
    (
        "critx-c",
        "Crit^ω is the intersection of all Crit^n and is closed",
        checks::critx_c,
    ),
    (
        "idbounded",
        "a finitely generated ideal is bounded iff V(I) misses Crit^ω",
        checks::idbounded,
    ),
    (
        "nfact",
        "a finitely generated ideal is a product of n-bounded ones iff V(I) misses Crit^n",
        checks::nfact,
    ),
    (
        "sp-bounded-cor",
        "Crit^ω is empty iff every finitely generated proper ideal is bounded",
        checks::sp_bounded_cor,
    ),
    (
        "nsp-bounded-cor",
        "Crit^n is empty iff every finitely generated ideal factors into n-bounded ideals",
        checks::nsp_bounded_cor,
    ),
    (
        "inscrit-full",
        "all points critical, all n-critical for some or all n, all ω-critical are equivalent",
        checks::inscrit_full,
    ),
    (
        "lemma-dense",
        "with every point critical, the level sets Y_n of an ideal inside the radical are dense",
        checks::lemma_dense,
    ),
    (
        "exist-noncrit",
        "the noncritical set is nonempty",
        checks::exist_noncrit,
    ),
    (
        "compl-unbound-jac",
        "a nonzero radical of the ω-critical localization yields a bounded principal element",
        checks::compl_unbound_jac,
    ),
    (
        "jac-complunbounded",
        "a nonzero Jacobson radical yields a bounded principal element",
        checks::jac_complunbounded,
    ),
    (
        "sp-scat",
        "the criticality chain reaches the empty set",
        checks::sp_scat,
    ),
    ("dense", "the noncritical set is dense", checks::dense),
    (
        "freekernel",
        "an element vanishing on Crit^ω is bounded, and conversely",
        checks::freekernel,
    ),
    (
        "invfree",
        "the group splits along the chain layers and finite families have full integer rank",
        checks::invfree,
    ),
];

pub fn run_suite(model: &DomainModel, config: &SuiteConfig) -> SuiteReport {
    let mut r = rng(config.seed);
    let samples = if model.validate().is_empty() {
        (0..config.samples)
            .map(|_| random_family_element(&mut r, model, 3))
            .collect()
    } else {
        Vec::new()
    };
    let ctx = Context {
        model,
        config,
        samples,
        report: OnceLock::new(),
    };
    let mut checks: Vec<TheoremCheck> = std::thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .map(|(id, anchor, f)| {
                let ctx = &ctx;
                s.spawn(move || {
                    let status = f(ctx).unwrap_or_else(|e| Status::Fail {
                        witness: format!("analysis error: {e}"),
                    });
                    TheoremCheck { id, anchor, status }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check panicked"))
            .collect()
    });
    checks.sort_by_key(|c| c.id);
    let crit_omega = crit_set(model, Level::Omega).ok();
    let model_contradiction = checks.iter().any(|c| c.status.is_fail());
    SuiteReport {
        model: model.name.clone(),
        checks,
        crit_omega,
        model_contradiction,
    }
}

#[cfg(test)]
mod tests;
