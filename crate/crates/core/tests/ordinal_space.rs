use adklab::ordinal_space::{OrderIso, Ordinal, PointSet, SpectrumSpace};
use adklab::random;
use proptest::prelude::*;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn sample(space: &SpectrumSpace, depth: u64) -> Vec<Ordinal> {
    space.truncation(depth)
}

/// Whether some point of `d` lies strictly between the largest sampled point
/// below `p` and `p`, looking for witnesses in a finer sample. This uses only
/// the order: `p` is a limit of `d` iff every interval `(q, p)` meets `d`.
fn approached(
    p: &Ordinal,
    coarse: &[Ordinal],
    fine: &[Ordinal],
    d: &dyn Fn(&Ordinal) -> bool,
) -> bool {
    let Some(q) = coarse.iter().filter(|q| *q < p).max() else {
        return false;
    };
    fine.iter().any(|w| w > q && w < p && d(w))
}

/// Cantor–Bendixson rank by iterated derived sets on nested samples.
fn brute_cb(p: &Ordinal, level: u32, depth: u64, space: &SpectrumSpace) -> bool {
    if level == 0 {
        return true;
    }
    let coarse = sample(space, depth);
    let fine = sample(space, depth * 2);
    brute_cb(p, level - 1, depth, space)
        && approached(p, &coarse, &fine, &|w| {
            brute_cb(w, level - 1, depth * 2, space)
        })
}

#[test]
fn cb_rank_matches_derived_sets() {
    let space = SpectrumSpace::interval(o("w*4"));
    for p in sample(&space, 50)
        .into_iter()
        .step_by(7)
        .chain([o("w*3"), o("w*4"), o("w*3+5")])
    {
        let rank = (0..3)
            .take_while(|&k| brute_cb(&p, k, 50, &space))
            .last()
            .unwrap();
        assert_eq!(space.cb_rank(&p).unwrap(), rank, "{p}");
    }
    let space = SpectrumSpace::interval(o("w^2"));
    for p in [o("w*3+5"), o("w*3"), o("w^2")] {
        let rank = (0..4)
            .take_while(|&k| brute_cb(&p, k, 6, &space))
            .last()
            .unwrap();
        assert_eq!(space.cb_rank(&p).unwrap(), rank, "{p}");
    }
}

#[test]
fn closure_and_order_type_examples() {
    let sp = SpectrumSpace::interval(o("w^2"));
    let s = PointSet::rank_exactly(&sp, 1);
    let closed = s.closure();
    assert!(closed.contains(&o("w^2")) && closed.contains(&o("w*7")) && !closed.contains(&o("3")));
    assert!(PointSet::rank_exactly(&sp, 0).is_dense());
    assert_eq!(OrderIso::new(&closed).unwrap().last_index(), &o("w"));
    let finite = PointSet::from_points(&sp, &[o("1"), o("w"), o("w*5+2")]).unwrap();
    assert_eq!(OrderIso::new(&finite).unwrap().last_index(), &o("2"));
    let w = SpectrumSpace::interval(o("w"));
    assert_eq!(
        OrderIso::new(&PointSet::full(&w)).unwrap().last_index(),
        &o("w")
    );
}

fn spaces() -> Vec<SpectrumSpace> {
    vec![
        SpectrumSpace::interval(o("w")),
        SpectrumSpace::interval(o("w^2")),
        SpectrumSpace::interval(o("w^2*2+w")),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_matches_brute_force(seed in any::<u64>(), which in 0usize..3) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let s = random::random_pointset(&mut rng, sp);
        let c = s.closure();
        let coarse = sample(sp, 7);
        let fine = sample(sp, 14);
        for p in &coarse {
            let brute = s.contains(p) || approached(p, &coarse, &fine, &|w| s.contains(w));
            prop_assert_eq!(c.contains(p), brute, "{}", p);
        }
        prop_assert_eq!(c.closure(), c.clone());
        prop_assert!(s.is_subset(&c).unwrap());
        prop_assert!(c.is_closed());
        prop_assert_eq!(s.complement().complement(), s.clone());
        prop_assert_eq!(s.is_dense(), c == PointSet::full(sp));
        prop_assert_eq!(s.is_clopen(), s.is_closed() && s.is_open());
    }

    #[test]
    fn boolean_ops_are_pointwise(seed in any::<u64>(), which in 0usize..3) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let a = random::random_pointset(&mut rng, sp);
        let b = random::random_pointset(&mut rng, sp);
        let (u, i, d) = (a.union(&b).unwrap(), a.intersect(&b).unwrap(), a.difference(&b).unwrap());
        for p in sample(sp, 7) {
            prop_assert_eq!(u.contains(&p), a.contains(&p) || b.contains(&p));
            prop_assert_eq!(i.contains(&p), a.contains(&p) && b.contains(&p));
            prop_assert_eq!(d.contains(&p), a.contains(&p) && !b.contains(&p));
            prop_assert_eq!(a.complement().contains(&p), !a.contains(&p));
        }
    }

    #[test]
    fn enumeration_and_order_type(seed in any::<u64>(), which in 0usize..3) {
        let sp = &spaces()[which];
        let mut rng = random::rng(seed);
        let s = random::random_pointset(&mut rng, sp).closure();
        let brute: Vec<Ordinal> = sample(sp, 7).into_iter().filter(|p| s.contains(p)).collect();
        let listed: Vec<Ordinal> = s.points().take(40).collect();
        prop_assert_eq!(listed.first(), brute.first());
        for w in listed.windows(2) {
            prop_assert!(w[0] < w[1] && s.contains(&w[1]));
            prop_assert!(!brute.iter().any(|p| *p > w[0] && *p < w[1]));
        }
        if !s.is_empty() {
            let iso = OrderIso::new(&s).unwrap();
            for (i, p) in s.points().take(30).enumerate() {
                let idx = iso.index_of(&p).unwrap();
                prop_assert_eq!(idx.clone(), Ordinal::finite(i as u64));
                prop_assert_eq!(iso.point_at(&idx), Some(p));
            }
            for p in brute {
                let idx = iso.index_of(&p).unwrap();
                prop_assert_eq!(iso.point_at(&idx), Some(p));
            }
        }
    }

    #[test]
    fn interval_order_type_is_cnf_difference(a in 0u64..6, b in 0u64..6, c in 1u64..6, d in 0u64..6) {
        let sp = SpectrumSpace::interval(o("w^3"));
        let lo = Ordinal::monomial(1, a).add(&Ordinal::finite(b));
        let hi = Ordinal::monomial(2, c).add(&Ordinal::monomial(1, d));
        let set = PointSet::interval(&sp, Some(&lo), &hi);
        let iso = OrderIso::new(&set).unwrap();
        let len = lo.succ().left_sub(&hi.succ()).unwrap();
        prop_assert_eq!(iso.last_index().succ(), len);
    }
}
