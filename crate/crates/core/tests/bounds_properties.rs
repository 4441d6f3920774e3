mod common;

use std::path::PathBuf;

use normctl_core::algebra::{AlgebraElement, AlgebraPair};
use normctl_core::bounds::{self, AsymptoticConstants, BoundInputs, CorollaryConstants, K_CONST, PRODUCT_EPS};
use normctl_core::inversion::neumann_invert;
use normctl_core::io::element_to_json;
use normctl_core::sample::{element_with_condition, random_torus, trial_rng, SampleConfig};
use normctl_core::torus::SupOptions;
use normctl_core::Error;
use proptest::prelude::*;

/// Direct product in linear space, for parameters where nothing overflows.
fn product_oracle(u: f64, v: f64, c: f64) -> f64 {
    let mut prod = 1.0;
    let mut vp = v;
    let mut uk = 1.0;
    for _ in 0..60 {
        prod *= 1.0 + c * uk * vp;
        uk *= u;
        vp *= vp;
    }
    prod
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_matches_linear_oracle(u in 1.5f64..4.0, v in 0.01f64..0.9, c in 0.0f64..20.0) {
        let inputs = BoundInputs::new(u, v, c).unwrap();
        let got = bounds::product_f(&inputs, 1e-15).unwrap();
        let want = product_oracle(u, v, c);
        prop_assert!((got - want).abs() <= 1e-11 * want, "got {got}, want {want}");
    }

    #[test]
    fn factors_below_maximum(u in 2.0f64..16.0, xi in 4.0f64..14.0, lc in 0.0f64..14.0) {
        let inputs = BoundInputs::from_xi(u, xi, lc.exp()).unwrap();
        let max_ln = bounds::max_factor_bound_ln(&inputs);
        for k in 0..=64u32 {
            let f = inputs.factor_ln(k);
            prop_assert!(f <= max_ln + 1e-12 * max_ln.abs().max(1.0), "k={k}: {f} > {max_ln}");
        }
    }

    #[test]
    fn condition_exponent_bound(kappa in 1.0001f64..1e4) {
        // 1/ln v⁻¹ ≤ κ² with v = 1 − κ⁻²
        let v = 1.0 - 1.0 / (kappa * kappa);
        prop_assert!(1.0 / -v.ln() <= kappa * kappa);
    }

    #[test]
    fn xi_identity(u in 1.1f64..64.0, v in 0.001f64..0.999) {
        prop_assert!(bounds::xi_identity_residual(u, v).unwrap() < 1e-9);
    }

    #[test]
    fn corollary_h_is_monotone(x in 1.0f64..50.0, y in 1.0f64..50.0, ln_c1 in 0.0f64..100.0, c2 in 0.1f64..50.0) {
        let h = bounds::corollary_h_ln(x, y, ln_c1, c2).unwrap();
        prop_assert!(bounds::corollary_h_ln(2.0 * x, y, ln_c1, c2).unwrap() >= h);
        prop_assert!(bounds::corollary_h_ln(x, 2.0 * y, ln_c1, c2).unwrap() >= h);
    }

    #[test]
    fn corollary_dominates_asymptotic_bound(
        kappa in 5.0f64..1e3,
        ratio in 1.0f64..100.0,
        nb in 0.1f64..10.0,
        c_struct in 1.0f64..4.0,
    ) {
        let (na, nbinv) = (ratio * nb, kappa / nb);
        let t = bounds::theorem41_bound(na, nb, nbinv, c_struct).unwrap();
        let k = AsymptoticConstants::new(2.0 * c_struct).unwrap();
        let cc = CorollaryConstants::from_asymptotic(&k);
        let h = bounds::corollary_h_ln(na, nbinv, cc.ln_c1, cc.c2).unwrap();
        prop_assert!(t.ln_value <= h * (1.0 + 1e-12), "theorem {} > h {}", t.ln_value, h);
    }

    #[test]
    fn dyadic_and_summed_power_bounds(seed in any::<u64>(), scale in 0.2f64..0.95) {
        let pair = AlgebraPair::c1();
        let p = random_torus(&mut trial_rng(seed, 0), 6);
        let sup = p.sup_abs(&SupOptions::default()).unwrap().value;
        let c = AlgebraElement::Torus(p.scale_real(scale / sup));
        let (na, nb) = (pair.norm_a(&c).unwrap(), pair.norm_b(&c).unwrap());
        let ratio = na / nb;
        let mut power = c.clone();
        let mut sum = 0.0;
        for n in 1..=64u64 {
            let got = pair.norm_a(&power).unwrap();
            sum += got;
            let bound = bounds::dyadic_power_bound_ln(ratio, 1.0, nb, n);
            prop_assert!(got.ln() <= bound + 1e-9, "n={n}: ln {} > {}", got.ln(), bound);
            power = pair.multiply(&power, &c).unwrap();
        }
        let inputs = BoundInputs::new(2.0, nb, ratio).unwrap();
        let f = bounds::product_f_ln(&inputs, PRODUCT_EPS).unwrap();
        prop_assert!(sum.ln() <= f + 1e-12);
    }
}

#[test]
fn gamma_estimate_examples() {
    for x in [0.5, 1.0, 3.0, 10.0] {
        let est = bounds::gamma_tail_estimate(1.0, x).unwrap();
        assert!(est >= (-x).exp());
        assert!((common::upper_gamma_quadrature(1.0, x) - (-x).exp()).abs() < 1e-12);
    }
    let est = bounds::gamma_tail_estimate(2.0, 4.0).unwrap();
    assert!((common::upper_gamma_integer(2, 4.0) - 5.0 * (-4.0f64).exp()).abs() < 1e-15);
    assert!((est - 4.0 * (-4.0f64).exp() / (1.0 - 1.0 / 4f64.ln())).abs() < 1e-15);
    assert!(est >= 5.0 * (-4.0f64).exp());
    assert!(matches!(bounds::gamma_tail_estimate(3.0, 3.0), Err(Error::Domain(_))));
}

#[test]
fn gamma_quadrature_oracle_agrees_with_closed_form() {
    for n in [2u32, 3, 5] {
        for x in [2.0, 7.5, 20.0, 40.0] {
            let q = common::upper_gamma_quadrature(n as f64, x);
            let c = common::upper_gamma_integer(n, x);
            assert!((q - c).abs() <= 1e-10 * c, "n={n} x={x}: {q} vs {c}");
        }
    }
}

#[test]
fn gamma_estimate_dominates_on_fine_grid() {
    for a in [1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0] {
        for j in 0..=64 {
            let x = (2.0 + 0.125 * j as f64) * (a - 1.0f64).max(0.25);
            let est = bounds::gamma_tail_estimate(a, x).unwrap();
            assert!(est >= common::upper_gamma_quadrature(a, x), "a={a} x={x}");
        }
    }
}

#[test]
fn printed_constants() {
    assert!((K_CONST - 5.1774).abs() < 5e-5);
    assert!((bounds::kappa_threshold(2.0) - 4.857).abs() < 5e-4);
    let k = AsymptoticConstants::new(2.0).unwrap();
    assert!((k.gamma2 - 16.0 / 2f64.ln()).abs() < 1e-12);
    assert!((k.gamma2 - 23.083).abs() < 1e-3);
    assert_eq!(k.gamma2_prime(), 4.0 * k.gamma2);
}

#[test]
fn cutoff_example_and_tail() {
    // ln(Kc)/ln u ≤ 4: the bracket gives M + 1 ∈ [8, 9]
    let inputs = BoundInputs::from_xi(2.0, 4.0, 1.0).unwrap();
    let x = bounds::cutoff_target(&inputs).unwrap();
    assert!((x - 8.0).abs() < 1e-12);
    assert_eq!(bounds::cutoff_m(&inputs).unwrap(), 7);
    let tail = bounds::tail_product_ln(&inputs, 8).unwrap();
    assert!(tail <= 1.0);
    assert!(matches!(bounds::cutoff_m(&BoundInputs::from_xi(2.0, 3.0, 1.0).unwrap()), Err(Error::Domain(_))));
}

#[test]
fn asf_branches() {
    let cond = bounds::asf_bound(&BoundInputs::from_xi(2.0, 8.0, 1.0).unwrap()).unwrap();
    assert_eq!(cond.branch, bounds::Branch::ConditionDominated);
    assert_eq!(cond.ln_value, cond.ln_proof_variant);
    let ratio = bounds::asf_bound(&BoundInputs::from_xi(2.0, 4.0, 1e6).unwrap()).unwrap();
    assert_eq!(ratio.branch, bounds::Branch::RatioDominated);
    assert!(matches!(bounds::asf_bound(&BoundInputs::from_xi(2.0, 4.0, 0.5).unwrap()), Err(Error::Domain(_))));
}

#[test]
fn small_condition_disables_asymptotic_path() {
    let r = bounds::bound_report(2.0, 1.0, 3.0, 1.0, None).unwrap();
    assert!(r.asymptotic_bound.is_none() && r.asymptotic_bound_ln.is_none() && r.branch.is_none());
    assert!(r.product_bound.is_some());
    let json = serde_json::to_value(&r).unwrap();
    assert!(json["asymptotic_bound"].is_null());
    assert!(json.get("M").is_some());
}

#[test]
fn example_grid_point_kappa5() {
    let r = bounds::bound_report(1.0, 1.0, 5.0, 1.0, None).unwrap();
    let asym = r.asymptotic_bound_ln.unwrap();
    assert!(r.product_bound_ln <= asym);
}

fn repro_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("repro")
}

/// Writes a failing case where it can be replayed with the CLI.
fn dump_repro(name: &str, a: &AlgebraElement) -> PathBuf {
    let dir = repro_dir();
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, element_to_json(a)).unwrap();
    path
}

#[test]
fn domination_chain() {
    let cfg = SampleConfig { max_degree: 12, ..SampleConfig::default() };
    let mut checked = 0;
    for (p, pair) in [AlgebraPair::c1(), AlgebraPair::approx_default()].into_iter().enumerate() {
        for i in 0..40u64 {
            let mut rng = trial_rng(900 + p as u64, i);
            let kappa = 5.5 + 44.5 * (i as f64 / 40.0);
            let a = element_with_condition(&pair, &mut rng, kappa, &cfg).unwrap();
            let inv = neumann_invert(&pair, &a, 1e-10, 10_000_000).unwrap();
            if inv.kappa < bounds::KAPPA_MIN {
                continue;
            }
            let nc = bounds::ncicstar_bound(inv.norm_a, inv.norm_b, inv.norm_b_inverse, 1.0).unwrap();
            let t = bounds::theorem41_bound(inv.norm_a, inv.norm_b, inv.norm_b_inverse, 1.0).unwrap();
            let measured = inv.norm_a_inverse.ln();
            if measured > nc.ln_value || nc.ln_value > t.ln_value {
                let path = dump_repro(&format!("chain-{}-{i}", pair.name()), &a);
                panic!(
                    "chain broken: ln measured {measured}, ln series bound {}, ln asymptotic {} (repro {})",
                    nc.ln_value,
                    t.ln_value,
                    path.display()
                );
            }
            checked += 1;
        }
    }
    assert!(checked >= 60);
}

#[test]
fn gram_residual_norms() {
    let cfg = SampleConfig::default();
    for (p, pair) in [AlgebraPair::c1(), AlgebraPair::approx_default()].into_iter().enumerate() {
        for i in 0..30u64 {
            let kappa = 1.5 + i as f64;
            let a = element_with_condition(&pair, &mut trial_rng(40 + p as u64, i), kappa, &cfg).unwrap();
            let (na, nb) = (pair.norm_a(&a).unwrap(), pair.norm_b(&a).unwrap());
            let b = pair.multiply(&a.adjoint(), &a).unwrap().scale_real(1.0 / (nb * nb));
            let c = a.identity_like().sub(&b).unwrap();
            let ca = pair.norm_a(&c).unwrap();
            assert!(ca <= 2.0 * na * na / (nb * nb) * (1.0 + 1e-12));
            if let AlgebraElement::Matrix(_) = a {
                let k = nb / pair.invertibility_measure(&a).unwrap();
                assert!((pair.norm_b(&c).unwrap() - (1.0 - 1.0 / (k * k))).abs() < 1e-9);
            }
        }
    }
}
