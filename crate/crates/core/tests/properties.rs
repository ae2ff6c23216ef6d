use num_complex::Complex64;
use proptest::prelude::*;
use schiffer_core::bessel::{bessel_j, bessel_j_sequence};
use schiffer_core::{build_curve, CurveSpec};

fn perturbed(terms: &[(i32, f64, f64)]) -> CurveSpec {
    let base = std::iter::once((1, Complex64::new(1.0, 0.0)));
    CurveSpec::new(base.chain(terms.iter().map(|&(k, re, im)| (k, Complex64::new(re, im)))))
        .unwrap()
}

fn small_coef() -> impl Strategy<Value = (f64, f64)> {
    (-0.012..0.012f64, -0.012..0.012f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tangent_integrates_to_zero((a, b) in small_coef(), (c, d) in small_coef(), k in 2i32..5) {
        let spec = perturbed(&[(-k, a, b), (k, c, d)]);
        let curve = build_curve(&spec, 256).unwrap();
        let ds = curve.ds();
        let closure: Complex64 = curve.theta().iter().map(|t| Complex64::from_polar(ds, *t)).sum();
        prop_assert!(closure.norm() < 1e-10 * curve.length());
        let turning = curve.kappa().iter().sum::<f64>() * ds;
        prop_assert!((turning + 2.0 * std::f64::consts::PI).abs() < 1e-9);
    }

    #[test]
    fn odd_modes_are_centrally_symmetric((a, b) in small_coef(), (c, d) in small_coef(), e in 0.005..0.012f64) {
        let odd = perturbed(&[(-1, a, b), (3, c, d), (-3, a, d)]);
        prop_assert!(odd.is_centrally_symmetric());
        let curve = build_curve(&odd, 256).unwrap();
        prop_assert!(curve.central_symmetry_defect() < 1e-12);
        let even = perturbed(&[(-1, a, b), (2, e, 0.0)]);
        prop_assert!(!even.is_centrally_symmetric());
        prop_assert!(build_curve(&even, 256).unwrap().central_symmetry_defect() > 1e-4);
    }

    #[test]
    fn bessel_three_term_recurrence(x in 0.5..50.0f64, n in 1u32..30) {
        let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
        let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()), "{lhs} {rhs}");
    }

    #[test]
    fn bessel_sequence_matches_pointwise(x in 0.5..50.0f64) {
        let seq = bessel_j_sequence(20, x);
        for (n, v) in seq.iter().enumerate() {
            prop_assert!((v - bessel_j(n as u32, x).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn rigid_motions_preserve_geometry(angle in -3.0..3.0f64, factor in 0.5..2.0f64) {
        let spec = perturbed(&[(-1, 0.2, 0.0), (3, 0.01, 0.004)]);
        let base = build_curve(&spec, 256).unwrap();
        let moved = build_curve(&spec.rotated(angle).scaled(factor), 256).unwrap();
        prop_assert!((moved.length() - factor * base.length()).abs() < 1e-11 * moved.length());
        prop_assert!((moved.area() - factor * factor * base.area()).abs() < 1e-11 * moved.area());
        for (a, b) in base.kappa().iter().zip(moved.kappa()) {
            prop_assert!((a - factor * b).abs() < 1e-9);
        }
    }
}
