use capra_core::cone::ConeSpec;
use capra_core::conjugacy::{box_grid, capra_biconjugate, capra_conjugate, indicator, l0, l0_function, support_function};
use capra_core::decision::{decide_capra_convex, Conditions, Verdict};
use capra_core::hulls::{origin_in_convex_hull, PointSet};
use capra_core::scalar::{rational, Rational};
use capra_core::SourceNorm;
use proptest::prelude::*;

fn norms() -> impl Strategy<Value = SourceNorm> {
    prop_oneof![
        Just(SourceNorm::l1()),
        Just(SourceNorm::l2()),
        Just(SourceNorm::linf()),
        (1.1f64..6.0).prop_map(|p| SourceNorm::lp(p).unwrap()),
    ]
}

fn small_points(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, dim), 1..=max)
}

fn to_rational(v: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    v.iter().map(|p| p.iter().map(|&c| rational(c, 1)).collect()).collect()
}

fn nonzero(v: &[Vec<i64>]) -> bool {
    v.iter().all(|p| p.iter().any(|&c| c != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn projection_is_scale_invariant_and_lands_on_the_sphere(
        x in prop::collection::vec(-10.0f64..10.0, 2..5),
        lambda in 0.01f64..100.0,
        n in norms(),
    ) {
        prop_assume!(n.norm_f64(&x) > 1e-6);
        let r = n.project_f64(&x).unwrap();
        let scaled: Vec<f64> = x.iter().map(|c| c * lambda).collect();
        let rs = n.project_f64(&scaled).unwrap();
        for (a, b) in r.iter().zip(&rs) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        // Negative scalings land on the antipode.
        let flipped: Vec<f64> = x.iter().map(|c| -c * lambda).collect();
        for (a, b) in r.iter().zip(&n.project_f64(&flipped).unwrap()) {
            prop_assert!((a + b).abs() < 1e-9);
        }
        prop_assert!((n.norm_f64(&r) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn l0_ignores_order_and_signs(x in prop::collection::vec(-3i32..=3, 1..8), flips in prop::collection::vec(any::<bool>(), 8), seed in any::<u64>()) {
        let v: Vec<f64> = x.iter().map(|&c| c as f64).collect();
        let mut w: Vec<f64> = v.iter().zip(&flips).map(|(c, f)| if *f { -c } else { *c }).collect();
        let shift = (seed as usize) % w.len();
        w.rotate_left(shift);
        w.reverse();
        prop_assert_eq!(l0(&v), l0(&w));
    }

    #[test]
    fn conjugate_of_an_indicator_is_a_support_function(
        points in prop::collection::vec(prop::collection::vec(-2.0f64..2.0, 2), 1..6),
        n in norms(),
    ) {
        let grid = points.clone();
        let member_set = points.clone();
        let f = indicator("set", grid, move |x| member_set.iter().any(|p| p.as_slice() == x));
        let duals = box_grid(2, 3.0, 7);
        let image: Vec<Vec<f64>> = points.iter().map(|p| n.project_f64(p).unwrap_or(vec![0.0, 0.0])).collect();
        let conj = capra_conjugate(&f, &duals, &n);
        for (y, v) in duals.iter().zip(&conj.values) {
            prop_assert!((v - support_function(&image, y)).abs() < 1e-12);
        }
    }

    #[test]
    fn biconjugate_is_zero_homogeneous_and_below_the_function(
        x in prop::collection::vec(-2.0f64..2.0, 2),
        n in norms(),
    ) {
        prop_assume!(n.norm_f64(&x) > 1e-3);
        let primal = vec![x.clone(), x.iter().map(|c| 2.0 * c).collect()];
        let b = capra_biconjugate(&l0_function(box_grid(2, 2.0, 9)), &primal, &box_grid(2, 3.0, 21), &n);
        prop_assert!((b.values.values[0] - b.values.values[1]).abs() < 1e-9);
        prop_assert!(b.max_violation() <= b.slack);
    }

    #[test]
    fn hull_certificates_verify(points in small_points(2, 5)) {
        let set = PointSet::new(to_rational(&points)).unwrap();
        let (inside, cert) = origin_in_convex_hull(&set);
        prop_assert!(cert.verify(set.points()));
        prop_assert_eq!(inside, cert.is_combination());
    }

    #[test]
    fn hull_certificates_verify_in_three_dimensions(points in small_points(3, 5)) {
        let set = PointSet::new(to_rational(&points)).unwrap();
        let (inside, cert) = origin_in_convex_hull(&set);
        prop_assert!(cert.verify(set.points()));
        prop_assert_eq!(inside, cert.is_combination());
    }

    #[test]
    fn capra_convex_verdicts_satisfy_the_necessary_conditions(
        points in small_points(2, 4),
        n in prop_oneof![Just(SourceNorm::l1()), Just(SourceNorm::l2()), Just(SourceNorm::linf())],
        convex in any::<bool>(),
        with_origin in any::<bool>(),
    ) {
        prop_assume!(nonzero(&points));
        let set = PointSet::new(to_rational(&points)).unwrap();
        let k = if convex { ConeSpec::convex_cone(set, with_origin) } else { ConeSpec::ray_fan(set, with_origin) }.unwrap();
        let r = decide_capra_convex(&k, &n).unwrap();
        if r.verdict == Verdict::CapraConvex {
            prop_assert!(Conditions::of(&k).all());
        }
        if r.verdict != Verdict::UndecidedExact {
            prop_assert!(r.verify(&k).unwrap());
        }
    }
}
