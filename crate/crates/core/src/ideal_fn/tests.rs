use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::ordinal_space::{Ordinal, PointSet, SpectrumSpace};
use crate::random;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn omega_space() -> SpectrumSpace {
    SpectrumSpace::interval(o("w"))
}

/// Value 0 up to `t`, `r` on later finite points, 1 at `ω`.
fn y_profile(t: u64, r: i64) -> IdealFunction {
    IdealFunction::new(
        &omega_space(),
        vec![
            (Ordinal::finite(t), Rule::Const(0)),
            (o("w"), Rule::Const(r)),
        ],
        BTreeMap::from([(o("w"), 1)]),
        true,
    )
    .unwrap()
}

fn growing_profile() -> IdealFunction {
    IdealFunction::new(
        &omega_space(),
        vec![(o("w"), Rule::linear(1, 0))],
        BTreeMap::from([(o("w"), 1)]),
        true,
    )
    .unwrap()
}

fn sample(space: &SpectrumSpace) -> Vec<Ordinal> {
    let depth = if space.rank_cap() == 0 { 24 } else { 12 };
    space
        .truncation(depth)
        .into_iter()
        .filter(|p| space.contains(p))
        .collect()
}

#[test]
fn pointwise_algebra_examples() {
    let y0 = y_profile(0, 2);
    let sq = y0.add(&y0).unwrap();
    assert_eq!(sq.value(&o("5")).unwrap(), 4);
    assert_eq!(sq.value(&o("w")).unwrap(), 2);
    assert_eq!(sq.value(&o("0")).unwrap(), 0);
    assert_eq!(sq.sub_exact(&y0).unwrap(), y0);
    assert_eq!(
        y0.sub_exact(&y0).unwrap(),
        IdealFunction::zero(&omega_space())
    );
    let z = IdealFunction::zero(&omega_space());
    assert_eq!(y0.max_fn(&z).unwrap(), y0);
    let three =
        IdealFunction::indicator(&PointSet::singleton(&omega_space(), &o("3")).unwrap()).unwrap();
    let m = y0.min_fn(&three).unwrap();
    assert_eq!(m, three);
    assert!(matches!(
        three.sub_exact(&y0),
        Err(crate::error::Error::NegativeValue(_))
    ));
    let tail = IdealFunction::indicator(&y0.support()).unwrap();
    let rest = y0.sub_exact(&tail).unwrap();
    assert_eq!(rest.value(&o("w")).unwrap(), 0);
    assert_eq!(rest.value(&o("7")).unwrap(), 1);
}

#[test]
fn sup_examples() {
    assert_eq!(y_profile(0, 2).sup(), Bound::Finite(2));
    assert_eq!(growing_profile().sup(), Bound::Infinite);
    assert_eq!(IdealFunction::zero(&omega_space()).sup(), Bound::Finite(0));
    let tail = PointSet::interval(&omega_space(), Some(&o("5")), &o("w"));
    assert_eq!(growing_profile().sup_on(&tail).unwrap(), Bound::Infinite);
    let head = PointSet::interval(&omega_space(), None, &o("5"));
    assert_eq!(growing_profile().sup_on(&head).unwrap(), Bound::Finite(5));
}

#[test]
fn semicontinuity_examples() {
    assert!(y_profile(0, 2).is_lsc());
    let at_omega =
        IdealFunction::indicator(&PointSet::singleton(&omega_space(), &o("w")).unwrap()).unwrap();
    assert!(!at_omega.is_lsc());
    assert_eq!(at_omega.lsc_violation(), Some(o("w")));
    assert!(IdealFunction::constant(&omega_space(), 3).is_lsc());
    assert!(growing_profile().is_lsc());
}

#[test]
fn continuity_examples() {
    let flat = y_profile(0, 2)
        .max_fn(&IdealFunction::constant(&omega_space(), 0))
        .unwrap();
    assert!(!flat.is_continuous());
    assert_eq!(flat.continuity_violation().map(|v| v.0), Some(2));
    let two = IdealFunction::new(
        &omega_space(),
        vec![(o("0"), Rule::Const(0)), (o("w"), Rule::Const(2))],
        BTreeMap::new(),
        true,
    )
    .unwrap();
    assert!(two.is_continuous());
    assert!(IdealFunction::zero(&omega_space()).is_continuous());
    assert!(!growing_profile().is_continuous());
}

#[test]
fn level_sets() {
    let y0 = y_profile(0, 2);
    let y1 = y0.level_above(1);
    assert!(y1.is_open() && !y1.is_closed());
    assert_eq!(
        y1,
        PointSet::interval_ranks(&omega_space(), Some(&o("0")), &o("w"), 1)
    );
    assert_eq!(y0.level_set(1), y0.support());
    let g = growing_profile();
    assert_eq!(
        g.level_above(4),
        PointSet::interval_ranks(&omega_space(), Some(&o("4")), &o("w"), 1)
    );
}

#[test]
fn restriction() {
    let sp = SpectrumSpace::interval(o("w^2"));
    let s = PointSet::rank_at_least(&sp, 1);
    let z = IdealFunction::zero(&sp);
    assert_eq!(
        z.restrict(&s).unwrap(),
        IdealFunction::zero(&SpectrumSpace::interval(o("w")))
    );
    let f = IdealFunction::new(
        &sp,
        vec![(o("w*3+2"), Rule::Const(1)), (o("w^2"), Rule::Const(4))],
        BTreeMap::from([(o("w^2"), 2)]),
        true,
    )
    .unwrap();
    let r = f.restrict(&s).unwrap();
    for i in 0..10u64 {
        let p = Ordinal::finite(i + 1).shift_up(1);
        assert_eq!(r.value(&Ordinal::finite(i)).unwrap(), f.value(&p).unwrap());
    }
    assert_eq!(r.value(&o("w")).unwrap(), 2);
    let lin = growing_profile();
    let set = PointSet::interval(&omega_space(), Some(&o("3")), &o("w"));
    let rl = lin.restrict(&set).unwrap();
    assert_eq!(rl.value(&o("0")).unwrap(), 4);
    assert_eq!(rl.value(&o("10")).unwrap(), 14);
    assert_eq!(rl.value(&o("w")).unwrap(), 1);
}

#[test]
fn fractional_normal_form() {
    let y0 = y_profile(0, 2);
    let three =
        IdealFunction::indicator(&PointSet::singleton(&omega_space(), &o("3")).unwrap()).unwrap();
    let q = FractionalFunction::new(three.clone(), y0.clone()).unwrap();
    assert_eq!(q.value(&o("3")).unwrap(), -1);
    assert_eq!(q.value(&o("4")).unwrap(), -2);
    assert_eq!(q.num().value(&o("3")).unwrap(), 0);
    let back = q.add(&FractionalFunction::from_ideal(y0)).unwrap();
    assert_eq!(back, FractionalFunction::from_ideal(three));
}

#[test]
fn json_round_trip() {
    let f = growing_profile();
    let text = serde_json::to_string(&f).unwrap();
    let back: IdealFunction = serde_json::from_str(&text).unwrap();
    assert_eq!(back, f);
    assert!(text.contains("\"linear\":[1,0]"));
}

fn spaces() -> Vec<SpectrumSpace> {
    vec![
        SpectrumSpace::interval(o("20")),
        omega_space(),
        SpectrumSpace::interval(o("w^2")),
        SpectrumSpace::CountableDiscrete,
    ]
}

/// Brute-force left liminf at a limit point: least value over sampled
/// points strictly between a late approximant and `p`.
fn brute_liminf(f: &IdealFunction, pts: &[Ordinal], p: &Ordinal) -> i64 {
    let r = p.least_exponent();
    let base = p.block_base().unwrap();
    let from = base.add(&Ordinal::monomial(r - 1, 8));
    pts.iter()
        .filter(|q| **q > from && *q < p)
        .map(|q| f.value_signed(q).unwrap())
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn algebra_agrees_with_pointwise(seed in any::<u64>(), which in 0usize..4) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let f = random::random_function(&mut rng, sp, 4);
        let g = random::random_function(&mut rng, sp, 4);
        let (a, mi, ma) = (f.add(&g).unwrap(), f.min_fn(&g).unwrap(), f.max_fn(&g).unwrap());
        for p in sample(sp) {
            let (x, y) = (f.value(&p).unwrap(), g.value(&p).unwrap());
            prop_assert_eq!(a.value(&p).unwrap(), x + y);
            prop_assert_eq!(mi.value(&p).unwrap(), x.min(y));
            prop_assert_eq!(ma.value(&p).unwrap(), x.max(y));
        }
        if g.le(&f) {
            let d = f.sub_exact(&g).unwrap();
            prop_assert_eq!(d.add(&g).unwrap(), f.clone());
        } else {
            prop_assert!(f.sub_exact(&g).is_err());
        }
    }

    #[test]
    fn level_sets_and_sup_agree_with_pointwise(seed in any::<u64>(), which in 0usize..4, j in 0u64..6) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let f = random::random_function(&mut rng, sp, 4);
        let level = f.level_set(j);
        let pts = sample(sp);
        for p in &pts {
            prop_assert_eq!(level.contains(p), f.value(p).unwrap() >= j);
        }
        let sampled = pts.iter().map(|p| f.value(p).unwrap()).max().unwrap();
        match f.sup() {
            Bound::Finite(s) => prop_assert_eq!(s, sampled),
            Bound::Infinite => prop_assert!(f.segments().iter().any(|s| !s.rule.is_const())),
        }
    }

    #[test]
    fn lsc_agrees_with_brute_force(seed in any::<u64>(), which in 1usize..3) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let f = random::random_function(&mut rng, sp, 3);
        let pts = sample(sp);
        let brute = pts
            .iter()
            .filter(|p| p.is_limit())
            .all(|p| f.value_signed(p).unwrap() <= brute_liminf(&f, &pts, p));
        prop_assert_eq!(f.is_lsc(), brute);
        let g = random::random_lsc_function(&mut rng, sp, 3);
        prop_assert!(g.is_lsc());
    }

    #[test]
    fn lsc_preserved_by_lattice_ops(seed in any::<u64>(), which in 0usize..4) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let f = random::random_lsc_function(&mut rng, sp, 3);
        let g = random::random_lsc_function(&mut rng, sp, 3);
        prop_assert!(f.add(&g).unwrap().is_lsc());
        prop_assert!(f.min_fn(&g).unwrap().is_lsc());
        prop_assert!(f.max_fn(&g).unwrap().is_lsc());
    }

    #[test]
    fn continuous_functions_rebuild_from_levels(seed in any::<u64>(), which in 0usize..3) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let f = random::random_continuous(&mut rng, sp, 4);
        prop_assert!(f.is_continuous());
        let mut sum = IdealFunction::zero(sp);
        for j in 1..=f.sup().finite().unwrap() {
            sum = sum.add(&IdealFunction::indicator(&f.level_set(j)).unwrap()).unwrap();
        }
        prop_assert_eq!(sum, f);
    }
}
