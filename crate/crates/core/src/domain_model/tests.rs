use std::collections::BTreeMap;

use super::*;
use crate::ideal_fn::{IdealFunction, Rule};
use crate::ordinal_space::{Ordinal, PointSet, SpectrumSpace};

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn all_builtins() -> Vec<DomainModel> {
    builtin_names()
        .iter()
        .map(|n| builtin(n).unwrap())
        .collect()
}

#[test]
fn builtins_validate() {
    for m in all_builtins() {
        assert_eq!(m.validate(), vec![], "{}", m.name);
    }
}

#[test]
fn chain_values_match_table() {
    for r in [2u64, 3, 5] {
        let m = example_r(r);
        let GeneratorSpec::Chain(y) = &m.generators[1] else {
            panic!()
        };
        for t in 0..8u64 {
            let f = y.instance(&m.space, None, t).unwrap();
            for k in 0..20u64 {
                let expect = if k > t { r } else { 0 };
                assert_eq!(f.value(&Ordinal::finite(k)).unwrap(), expect);
            }
            assert_eq!(f.value(&o("w")).unwrap(), 1);
        }
    }
}

#[test]
fn chains_are_monotone_on_samples() {
    for m in all_builtins() {
        for g in &m.generators {
            let GeneratorSpec::Chain(c) = g else { continue };
            let anchors: Vec<Option<Ordinal>> = match &c.anchors {
                None => vec![None],
                Some(a) => a.region.points().take(5).map(Some).collect(),
            };
            for q in anchors {
                for t in 0..32u64 {
                    let f = c.instance(&m.space, q.as_ref(), t).unwrap();
                    let g = c.instance(&m.space, q.as_ref(), t + 1).unwrap();
                    assert!(g.le(&f), "{} at t={t}", m.name);
                }
            }
        }
    }
}

#[test]
fn positive_generators() {
    let m = example_r(2);
    let at_omega = m.generators_positive_at(&o("w")).unwrap();
    assert_eq!(
        at_omega,
        vec![Member {
            generator: 1,
            anchor: None,
            t_range: Some(TRange::All)
        }]
    );
    let at5 = m.generators_positive_at(&o("5")).unwrap();
    assert_eq!(
        at5,
        vec![
            Member {
                generator: 0,
                anchor: Some(o("5")),
                t_range: Some(TRange::All)
            },
            Member {
                generator: 1,
                anchor: None,
                t_range: Some(TRange::UpTo(4))
            },
        ]
    );
    // Cross-check against direct evaluation of instances.
    for k in 0..30u64 {
        let p = Ordinal::finite(k);
        let members = m.generators_positive_at(&p).unwrap();
        let GeneratorSpec::Chain(y) = &m.generators[1] else {
            panic!()
        };
        for t in 0..35u64 {
            let positive = y.instance(&m.space, None, t).unwrap().value(&p).unwrap() >= 1;
            let listed = members
                .iter()
                .any(|mb| mb.generator == 1 && mb.t_range.unwrap().clamp(t) == t);
            assert_eq!(positive, listed, "k={k} t={t}");
        }
    }
    let d = dedekind_finite(5);
    assert_eq!(d.generators_positive_at(&o("3")).unwrap().len(), 1);
}

#[test]
fn ladder_anchors() {
    let m = ladder(2);
    let at = m.generators_positive_at(&o("w*3+4")).unwrap();
    let anchors: Vec<_> = at
        .iter()
        .map(|mb| (mb.generator, mb.anchor.clone(), mb.t_range))
        .collect();
    assert_eq!(
        anchors,
        vec![
            (0, Some(o("w*3+4")), Some(TRange::All)),
            (1, Some(o("w*4")), Some(TRange::UpTo(3))),
            (2, Some(o("w^2")), Some(TRange::UpTo(3))),
        ]
    );
    let at_limit = m.generators_positive_at(&o("w*3")).unwrap();
    assert_eq!(at_limit.len(), 2);
    assert_eq!(at_limit[0].t_range, Some(TRange::All));
}

#[test]
fn invalid_models_are_reported() {
    let sp = SpectrumSpace::interval(o("w"));
    let at_omega = IdealFunction::indicator(&PointSet::singleton(&sp, &o("w")).unwrap()).unwrap();
    let mut m = example_r(2);
    m.generators.push(GeneratorSpec::Single(at_omega));
    assert!(m.validate().contains(&Violation::SemicontinuityViolation {
        generator: 2,
        point: o("w")
    }));

    let tail = IdealFunction::new(
        &sp,
        vec![(o("3"), Rule::Const(0)), (o("w"), Rule::Const(1))],
        BTreeMap::new(),
        true,
    )
    .unwrap();
    let uncovered = DomainModel::new("gap", sp, vec![GeneratorSpec::Single(tail)]);
    assert!(matches!(
        uncovered.validate().as_slice(),
        [Violation::UncoveredPoint { .. }]
    ));
}

#[test]
fn profile_classes_cover_space() {
    for m in all_builtins() {
        let classes = m.profile_classes(None).unwrap();
        let mut union = PointSet::empty(&m.space);
        for c in &classes {
            assert!(union.intersect(&c.set).unwrap().is_empty(), "{}", m.name);
            union = union.union(&c.set).unwrap();
        }
        assert_eq!(union, PointSet::full(&m.space), "{}", m.name);
    }
    let e = example_r(2);
    let classes = e.profile_classes(None).unwrap();
    assert_eq!(classes.iter().filter(|c| c.rank == 1).count(), 1);
    let d = dedekind_finite(4);
    assert!(d
        .profile_classes(None)
        .unwrap()
        .iter()
        .all(|c| c.set.count() <= Some(4)));
}

#[test]
fn json_round_trip_is_identity() {
    for m in all_builtins() {
        let text = m.to_json();
        let back = DomainModel::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text, "{}", m.name);
        assert_eq!(back.validate(), vec![]);
    }
    assert!(DomainModel::from_json(
        "{\"schema\":9,\"name\":\"x\",\"space\":\"countable_discrete\",\"generators\":[]}"
    )
    .is_err());
}
