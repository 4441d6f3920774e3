mod common;

use normctl_core::algebra::{AlgebraElement, AlgebraPair};
use normctl_core::inversion::{neumann_invert, terms_needed};
use normctl_core::sample::{element_with_condition, random_unitary, trial_rng, SampleConfig};
use normctl_core::visibility::{
    control_h_from_phi, nikolski_phi_wiener, phi_lower_bound, pseudospectrum, PhiValue, Rect,
};
use normctl_core::{ComplexMatrix, Error, TorusPolynomial};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matrix_inverse_within_error_bound(seed in any::<u64>(), kappa in 1.0f64..40.0) {
        let pair = AlgebraPair::approx_default();
        let a = element_with_condition(&pair, &mut trial_rng(seed, 0), kappa, &SampleConfig::default()).unwrap();
        let r = neumann_invert(&pair, &a, 1e-10, 10_000_000).unwrap();
        let m = a.as_matrix().unwrap();
        let oracle = common::to_nalgebra(m).try_inverse().unwrap();
        let got = common::to_nalgebra(r.inverse.as_matrix().unwrap());
        let err = (got - &oracle).singular_values().max();
        prop_assert!(err <= r.error_bound_b * 1.01 + 1e-12, "err {err} > bound {}", r.error_bound_b);
        prop_assert!(r.residual_b <= 1e-10);
        prop_assert!((r.kappa - kappa).abs() < 1e-8 * kappa);
    }

    #[test]
    fn torus_inverse_is_pointwise_reciprocal(seed in any::<u64>(), kappa in 1.0f64..20.0) {
        let pair = AlgebraPair::c1();
        let cfg = SampleConfig { max_degree: 10, ..SampleConfig::default() };
        let a = element_with_condition(&pair, &mut trial_rng(seed, 0), kappa, &cfg).unwrap();
        let r = neumann_invert(&pair, &a, 1e-10, 10_000_000).unwrap();
        let (p, q) = (a.as_torus().unwrap(), r.inverse.as_torus().unwrap());
        for i in 0..257 {
            let t = i as f64 / 257.0;
            let prod = common::brute_eval(p, t) * common::brute_eval(q, t);
            prop_assert!((prod - 1.0).norm() < 1e-9);
        }
        prop_assert!(r.residual_b <= r.residual_bound * (1.0 + 1e-6) + 1e-13);
    }

    #[test]
    fn terms_needed_meets_tolerance(q in 0.0f64..0.9999, lt in -14.0f64..-1.0) {
        let tol = 10f64.powf(lt);
        let k = terms_needed(q, tol);
        prop_assert!(q.powf((k + 1) as f64) / (1.0 - q) <= tol);
    }
}

#[test]
fn noninvertible_torus_is_rejected() {
    let f = AlgebraElement::Torus(TorusPolynomial::cosine_bump(2, 1.0));
    assert!(matches!(neumann_invert(&AlgebraPair::c1(), &f, 1e-10, 1000), Err(Error::NotInvertible { .. })));
}

#[test]
fn kind_mismatch_is_structural() {
    let m = AlgebraElement::Matrix(ComplexMatrix::identity(2));
    assert!(matches!(neumann_invert(&AlgebraPair::c1(), &m, 1e-10, 1000), Err(Error::Structural(_))));
}

#[test]
fn wiener_inverse_of_an() {
    let pair = AlgebraPair::wiener();
    let a = AlgebraElement::Torus(TorusPolynomial::cosine_bump(1, 0.25));
    let r = neumann_invert(&pair, &a, 1e-12, 1_000_000).unwrap();
    // 1/(1 + ¼cos 2πt) has Fourier coefficients ρ^{|k|}/√(1 − 1/16) with ρ = 4 − √15
    let rho = 4.0 - 15f64.sqrt();
    let want = (1.0 + rho) / (1.0 - rho) / (1.0 - 1.0 / 16.0f64).sqrt();
    assert!((r.norm_a_inverse - want).abs() < 1e-9, "{} vs {want}", r.norm_a_inverse);
}

#[test]
fn wiener_phi_closed_form() {
    assert!((nikolski_phi_wiener(0.9).unwrap().finite().unwrap() - 1.6129).abs() < 1e-4);
    assert_eq!(nikolski_phi_wiener(0.4).unwrap(), PhiValue::Infinite);
    assert_eq!(nikolski_phi_wiener(0.7).unwrap(), PhiValue::Unknown);
    assert!((nikolski_phi_wiener(0.72).unwrap().finite().unwrap() - 27.17).abs() < 0.01);
    let h = control_h_from_phi(1.0, 1.0 / 0.9, |d| nikolski_phi_wiener(d).unwrap()).unwrap();
    assert!((h.finite().unwrap() - 1.0 / 0.62).abs() < 1e-9);
}

#[test]
fn search_is_monotone_in_delta() {
    let pair = AlgebraPair::wiener();
    let deltas = [0.6, 0.75, 0.85, 0.95];
    let values: Vec<f64> = deltas.iter().map(|&d| phi_lower_bound(&pair, d, 400, 3).unwrap().lower_bound).collect();
    for w in values.windows(2) {
        assert!(w[0] >= w[1] * (1.0 - 1e-9), "{values:?}");
    }
}

#[test]
fn c1_search_near_one() {
    let est = phi_lower_bound(&AlgebraPair::c1(), 0.999, 2000, 11).unwrap();
    assert!(est.feasible > 0);
    assert!(est.lower_bound >= 1.0 - 1e-9 && est.lower_bound < 1.1, "{}", est.lower_bound);
    // the witness sits on the boundary ‖a⁻¹‖_B = 1/δ and satisfies ‖a‖_A‖a⁻¹‖_B ≤ 1/δ
    let (na, nbinv) = (est.witness_norm_a.unwrap(), est.witness_norm_b_inverse.unwrap());
    assert!((nbinv - 1.0 / 0.999).abs() < 1e-9);
    assert!(na * nbinv <= 1.0 / 0.999 + 1e-9);
}

#[test]
fn search_is_deterministic() {
    let pair = AlgebraPair::approx_default();
    let a = phi_lower_bound(&pair, 0.8, 300, 5).unwrap();
    let b = phi_lower_bound(&pair, 0.8, 300, 5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn normal_matrix_resolvent_is_distance_to_spectrum() {
    let mut rng = trial_rng(12, 0);
    for _ in 0..10 {
        let n = rng.gen_range(2..=6);
        let eig: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let u = random_unitary(&mut rng, n);
        let a = u.multiply(&ComplexMatrix::from_diagonal(&eig)).unwrap().multiply(&u.adjoint()).unwrap();
        let rect = Rect { re_min: -3.0, re_max: 3.0, im_min: -3.0, im_max: 3.0 };
        let grid = pseudospectrum(&a, rect, 15, 0.5).unwrap();
        let mut oracle_eigs = common::eigenvalues(&a);
        oracle_eigs.sort_by(|x, y| x.re.total_cmp(&y.re));
        for (l, s) in grid.lambdas.iter().zip(&grid.sigma_min) {
            let dist = eig.iter().map(|z| (l - z).norm()).fold(f64::INFINITY, f64::min);
            let dist_oracle = oracle_eigs.iter().map(|z| (l - z).norm()).fold(f64::INFINITY, f64::min);
            assert!((s - dist).abs() < 1e-9, "{s} vs {dist}");
            assert!((dist - dist_oracle).abs() < 1e-9);
        }
        let (m1, m2) = (grid.mask(0.3), grid.mask(0.6));
        assert!(m1.iter().zip(&m2).all(|(x, y)| !*x || *y));
    }
}

#[test]
fn pseudospectrum_csv_layout() {
    let a = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
    let rect = Rect { re_min: -2.0, re_max: 2.0, im_min: -1.0, im_max: 1.0 };
    let grid = pseudospectrum(&a, rect, 3, 0.5).unwrap();
    let mut buf = Vec::new();
    grid.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re,im,resolvent_norm");
    assert_eq!(lines.len(), 10);
    assert_eq!(lines[1], "-2,-1,0.7071067811865475");
}
