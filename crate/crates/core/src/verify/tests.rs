use super::*;
use crate::domain_model::{builtin, builtin_names, example_r, GeneratorSpec};
use crate::ideal_fn::IdealFunction;
use crate::ordinal_space::Ordinal;

#[test]
fn builtins_pass() {
    for name in builtin_names() {
        let m = builtin(&name).unwrap();
        let r = run_suite(&m, &SuiteConfig::default());
        let failed: Vec<_> = r.checks.iter().filter(|c| c.status.is_fail()).collect();
        assert!(failed.is_empty(), "{name}: {failed:?}");
        assert_eq!(r.checks.len(), 17);
    }
}

#[test]
fn growing_records_omega_critical_set() {
    let m = builtin("example-growing").unwrap();
    let r = run_suite(&m, &SuiteConfig::default());
    assert!(r.all_pass());
    let w = PointSet::singleton(&m.space, &Ordinal::omega()).unwrap();
    assert_eq!(r.crit_omega, Some(w));
}

#[test]
fn corrupted_model_fails_semicontinuity() {
    let mut m = example_r(2);
    let bad = IdealFunction::indicator(&PointSet::singleton(&m.space, &Ordinal::omega()).unwrap())
        .unwrap();
    m.generators.push(GeneratorSpec::Single(bad));
    let r = run_suite(&m, &SuiteConfig::default());
    assert!(r.get("semicont").unwrap().status.is_fail());
    assert!(r.model_contradiction);
}

#[test]
fn report_is_deterministic() {
    let m = builtin("ladder-2").unwrap();
    let a = serde_json::to_string(&run_suite(&m, &SuiteConfig::default())).unwrap();
    let b = serde_json::to_string(&run_suite(&m, &SuiteConfig::default())).unwrap();
    assert_eq!(a, b);
}

#[test]
fn random_models_pass() {
    let mut r = crate::random::rng(crate::random::DEFAULT_SEED);
    for i in 0..20 {
        let m = crate::random::random_model(&mut r, format!("random-{i}"));
        let rep = run_suite(
            &m,
            &SuiteConfig {
                samples: 6,
                window_depth: 6,
                ..SuiteConfig::default()
            },
        );
        let failed: Vec<_> = rep.checks.iter().filter(|c| c.status.is_fail()).collect();
        assert!(
            failed.is_empty(),
            "{}: {:?}\n{}",
            m.name,
            failed,
            m.to_json()
        );
    }
}
