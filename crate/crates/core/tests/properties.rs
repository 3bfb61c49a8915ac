use std::sync::Arc;

use proptest::prelude::*;
use sofic::constructions::*;
use sofic::experiments::{run_sequence, ApproximationSequence};
use sofic::group::{GroupElement, GroupKind, GroupModel};
use sofic::rng::seeded;
use sofic::space::*;

fn groups() -> Vec<GroupModel<f64>> {
    vec![
        GroupModel::real_vector(2).unwrap(),
        GroupModel::integer_lattice(2).unwrap(),
        GroupModel::cyclic(7).unwrap(),
        GroupModel::complex_plane(),
        GroupModel::affine_line(),
        GroupModel::product(vec![GroupKind::AffineLine, GroupKind::Cyclic(3)]).unwrap(),
    ]
}

fn triple(g: &GroupModel<f64>, seed: u64) -> [GroupElement<f64>; 3] {
    let mut rng = seeded(seed);
    let id = g.identity();
    [0; 3].map(|_| g.sample_ball(&id, 2.0, &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_law(which in 0usize..6, seed in any::<u64>()) {
        let g = &groups()[which];
        let [x, y, z] = triple(g, seed);
        prop_assert!(g.approx_eq(&g.mul(&g.mul(&x, &y), &z), &g.mul(&x, &g.mul(&y, &z))));
        prop_assert!(g.approx_eq(&g.mul(&x, &g.inv(&x)), &g.identity()));
        prop_assert!(g.approx_eq(&g.mul(&g.identity(), &x), &x));
    }

    #[test]
    fn metric_is_left_invariant(which in 0usize..6, seed in any::<u64>()) {
        let g = &groups()[which];
        let [x, y, k] = triple(g, seed);
        let d = g.dist(&x, &y);
        prop_assert!((g.dist(&g.mul(&k, &x), &g.mul(&k, &y)) - d).abs() < 1e-9 * (1.0 + d));
        prop_assert!((g.dist(&x, &y) - g.dist(&y, &x)).abs() < 1e-12);
        prop_assert!((g.norm(&x) - g.dist(&g.identity(), &x)).abs() < 1e-12);
        prop_assert!(g.dist(&x, &k) <= g.dist(&x, &y) + g.dist(&y, &k) + 1e-9);
    }

    #[test]
    fn modular_is_a_homomorphism(which in 0usize..6, seed in any::<u64>()) {
        let g = &groups()[which];
        let [x, y, _] = triple(g, seed);
        let lhs = g.modular(&g.mul(&x, &y));
        prop_assert!((lhs - g.modular(&x) * g.modular(&y)).abs() < 1e-12 * (1.0 + lhs));
        prop_assert!((g.modular(&g.inv(&x)) * g.modular(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_balls_stay_inside(which in 0usize..6, seed in any::<u64>(), r in 0.1f64..4.0) {
        let g = &groups()[which];
        let mut rng = seeded(seed);
        let c = g.sample_ball(&g.identity(), 1.0, &mut rng);
        let x = g.sample_ball(&c, r, &mut rng);
        prop_assert!(g.dist(&c, &x) < r);
        prop_assert!(WindowSet::ball(r).sample(g, &mut rng).is_some_and(|y| g.norm(&y) < r));
    }

    #[test]
    fn cocycle_equation(x in 0.0f64..1.0, a in -20.0f64..20.0, b in -20.0f64..20.0, shift in -2.0f64..2.0) {
        let d = FundamentalDomain::shifted(&[shift]).unwrap();
        let c = make_cocycle(&d);
        let x = d.section(&[x + shift]).unwrap();
        prop_assert!(c.equation_holds(&x, &[a], &[b]).unwrap());
        prop_assert_eq!(c.value(&x, &[0.0]).unwrap(), vec![0]);
    }

    #[test]
    fn omega_grows_with_f(x in 0.0f64..1.0, r in 0.3f64..1.5, f in 0i64..6) {
        let c = make_cocycle(&FundamentalDomain::<f64>::unit(1));
        let small = |k: &[i64]| k[0].abs() <= f;
        let large = |k: &[i64]| k[0].abs() <= f + 1;
        if c.omega_contains(&[x], r, &small, 24).unwrap() {
            prop_assert!(c.omega_contains(&[x], r, &large, 24).unwrap());
        }
        prop_assert!(c.omega_contains(&[x], r, &|k: &[i64]| k[0].abs() <= default_f_radius(r), 24).unwrap());
    }

    #[test]
    fn membership_shrinks_with_the_window(c in 2.0f64..30.0, r1 in 0.1f64..10.0, dr in 0.0f64..5.0, x in 0.0f64..1.0) {
        let m = CosetSpace::<f64>::circle(c).unwrap();
        let p = m.make_point(&[], &[x * c]).unwrap();
        let opts = MembershipOptions::default();
        let mut rng = seeded(1);
        let big = member_mu(&m, &p, &WindowSet::ball(r1 + dr), &opts, &mut rng).member;
        let small = member_mu(&m, &p, &WindowSet::ball(r1), &opts, &mut rng).member;
        prop_assert!(!big || small);
        // the exact answer on a circle is a threshold at half the circumference
        prop_assert_eq!(small, r1 <= c / 2.0);
    }

    #[test]
    fn box_membership_shrinks_with_the_window(side in 3.0f64..40.0, r1 in 0.1f64..5.0, dr in 0.0f64..3.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let m = folner_box_space::<f64>(2, side).unwrap();
        let p = m.make_point(&[], &[u * side, v * side]);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let opts = MembershipOptions::default();
        let mut rng = seeded(2);
        let big = member_mu(&m, &p, &WindowSet::ball(r1 + dr), &opts, &mut rng).member;
        let small = member_mu(&m, &p, &WindowSet::ball(r1), &opts, &mut rng).member;
        prop_assert!(!big || small);
    }

    #[test]
    fn open_subset_action_is_injective(seed in any::<u64>()) {
        let m = open_subset_space(&GroupModel::<f64>::affine_line(), sofic::group::CoordBox::reals(&[(0.5, 4.0), (-2.0, 2.0)])).unwrap();
        let g = m.group().clone();
        let mut rng = seeded(seed);
        let p = m.sample_point(&mut rng);
        let a = g.sample_ball(&g.identity(), 1.0, &mut rng);
        let b = g.sample_ball(&g.identity(), 1.0, &mut rng);
        if let (Some(pa), Some(pb)) = (m.act(&p, &a), m.act(&p, &b)) {
            if m.same_point(&pa, &pb) {
                prop_assert!(g.dist(&a, &b) < 1e-6);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corrupted_maps_stay_permutations(m in 20usize..120, delta in 0.0f64..0.5, seed in any::<u64>()) {
        let exact = DiscreteSoficMap::exact_cyclic(m, 6).unwrap();
        let bad = exact.corrupt(delta, seed).unwrap();
        for i in 0..bad.support().len() {
            let mut seen = vec![false; m];
            for &v in bad.perm_at(i) {
                prop_assert!(!seen[v as usize]);
                seen[v as usize] = true;
            }
        }
        let back = DiscreteSoficMap::from_json(&bad.to_json().unwrap()).unwrap();
        prop_assert!(back == bad);
    }

    #[test]
    fn normalization_is_idempotent(m in 30usize..150, delta in 0.0f64..0.4, seed in any::<u64>(), r in 1i64..3) {
        let bad = DiscreteSoficMap::exact_cyclic(m, 4 * r + 2).unwrap().corrupt(delta, seed).unwrap();
        let u: Vec<Vec<i64>> = (-r..=r).map(|n| vec![n]).collect();
        let once = normalize_discrete(&bad, &u).unwrap();
        prop_assert!(once.map.is_normalized());
        let twice = normalize_discrete(&once.map, &u).unwrap();
        prop_assert!(twice.map == once.map);
        if let Some(w) = once.w_size {
            prop_assert!(once.good_size >= w);
        }
    }

    #[test]
    fn sequences_are_deterministic_and_windows_shrink_fractions(seed in any::<u64>(), k in 2usize..5) {
        let spaces: Vec<Arc<dyn LocalSpace<f64>>> = (0..k).map(|i| Arc::new(folner_box_space::<f64>(2, 12.0 * (i + 1) as f64).unwrap()) as Arc<dyn LocalSpace<f64>>).collect();
        let windows: Vec<SoficWindow<f64>> = (0..k).map(|i| SoficWindow::ball(1.0 + i as f64, 0.9)).collect();
        let seq = ApproximationSequence::new(spaces.clone(), windows).unwrap();
        let opts = SoficOptions::monte_carlo(200, seed);
        let a = run_sequence(&seq, &opts).unwrap();
        let b = run_sequence(&seq, &opts).unwrap();
        prop_assert_eq!(&a, &b);
        let m = spaces[k - 1].as_ref();
        let lo = sofic_check(m, &SoficWindow::ball(1.0, 0.5), &SoficOptions::default()).unwrap().fraction;
        let hi = sofic_check(m, &SoficWindow::ball(3.0, 0.5), &SoficOptions::default()).unwrap().fraction;
        prop_assert!(hi <= lo);
    }
}
