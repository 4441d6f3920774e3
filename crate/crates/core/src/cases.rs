//! Worked examples: the quotient rule in `C¹(T)`, the family
//! `a_n = 1 + ½cos 2πnt`, the tail-function bound in the Wiener algebra, and
//! the θ-modified differential inequality.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::error::{Error, Result};
use crate::inversion::{neumann_invert, INVERTIBILITY_RTOL};
use crate::sample::{random_element, trial_rng, SampleConfig};
use crate::torus::{periodic_sup, SupOptions, TorusPolynomial};

/// Tolerance of the golden-section refinement in [`periodic_sup`].
const LOCATE_TOL: f64 = 1e-13;

/// `ψ_a(x) = Σ_{|j| ≥ x} |a_j|` for real `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFunction {
    /// `m[k] = |a_k| + |a_{−k}|` (just `|a_0|` at `k = 0`).
    mass: Vec<f64>,
}

impl TailFunction {
    pub fn new(a: &TorusPolynomial) -> Self {
        let n = a.degree() as i64;
        let mass = (0..=n)
            .map(|k| if k == 0 { a.coeff(0).norm() } else { a.coeff(k).norm() + a.coeff(-k).norm() })
            .collect();
        Self { mass }
    }

    pub fn psi(&self, x: f64) -> f64 {
        let start = if x <= 0.0 { 0 } else { x.ceil() as usize };
        self.mass.iter().skip(start).sum()
    }

    pub fn degree(&self) -> usize {
        self.mass.len() - 1
    }
}

fn inf_checked(f: &TorusPolynomial, opts: &SupOptions) -> Result<(f64, f64)> {
    let sup = f.sup_abs(opts)?.value;
    let inf = f.inf_abs(opts)?.value;
    let threshold = INVERTIBILITY_RTOL * sup;
    if !(inf > threshold) {
        return Err(Error::NotInvertible { measure: inf, threshold });
    }
    Ok((inf, sup))
}

/// `sup_t |f′(t)| / |f(t)|² = ‖(1/f)′‖_∞`.
fn reciprocal_derivative_sup(f: &TorusPolynomial, opts: &SupOptions) -> f64 {
    let g = |t: f64| {
        let [v, d, _] = f.eval_with_derivatives(t);
        d.norm() / v.norm_sqr()
    };
    periodic_sup(g, opts.oversampling.max(4) * (f.degree() + 1), LOCATE_TOL).value
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    /// `‖1/f‖_{C¹}`.
    pub lhs: f64,
    /// `(‖f‖_{C¹}‖1/f‖_C + 1)‖1/f‖_C`.
    pub rhs: f64,
    pub holds: bool,
    pub slack: f64,
}

/// Quotient-rule estimate `‖1/f‖_{C¹} ≤ (‖f‖_{C¹}‖1/f‖_C + 1)‖1/f‖_C`.
pub fn quotient_rule_check(f: &TorusPolynomial) -> Result<QuotientReport> {
    let opts = SupOptions::default();
    let (inf, _) = inf_checked(f, &opts)?;
    let inv_c = 1.0 / inf;
    let lhs = inv_c + reciprocal_derivative_sup(f, &opts);
    let rhs = (f.c1_norm(&opts)? * inv_c + 1.0) * inv_c;
    Ok(QuotientReport { lhs, rhs, holds: lhs <= rhs * (1.0 + 1e-12), slack: rhs - lhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnFamilyReport {
    pub n: usize,
    pub kappa: f64,
    /// Measured `‖a_n‖_{C¹}/‖a_n‖_C`.
    pub ratio: f64,
    /// `(3 + 2πn)/3`.
    pub ratio_formula: f64,
    /// Measured `‖a_n⁻¹‖_{C¹}`.
    pub inverse_c1_norm: f64,
    /// `‖a_n⁻¹‖_{C¹}/n`.
    pub slope: f64,
    /// `2πn`, the order-of-growth claim this family is usually quoted with.
    pub claimed_lower_bound: f64,
    pub meets_claimed_bound: bool,
}

/// `a_n(t) = 1 + ½cos 2πnt`: `κ = 3` for every `n` while the embedding ratio grows linearly.
pub fn an_family_report(n: usize) -> Result<AnFamilyReport> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let opts = SupOptions::default();
    let a = TorusPolynomial::cosine_bump(n, 0.5);
    let (inf, sup) = inf_checked(&a, &opts)?;
    let ratio = a.c1_norm(&opts)? / sup;
    let inverse_c1_norm = 1.0 / inf + reciprocal_derivative_sup(&a, &opts);
    let claimed = 2.0 * PI * n as f64;
    Ok(AnFamilyReport {
        n,
        kappa: sup / inf,
        ratio,
        ratio_formula: (3.0 + 2.0 * PI * n as f64) / 3.0,
        inverse_c1_norm,
        slope: inverse_c1_norm / n as f64,
        claimed_lower_bound: claimed,
        meets_claimed_bound: inverse_c1_norm >= claimed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaskakovReport {
    pub norm_inf: f64,
    pub inverse_norm_inf: f64,
    /// `x = 1/(4 + 32‖a‖_∞‖a⁻¹‖_∞²)`.
    pub psi_argument: f64,
    /// `ψ_a(x)` with the real-argument convention.
    pub psi_literal: f64,
    /// `ψ_a(⌈1/x⌉)`.
    pub psi_ceil_reciprocal: f64,
    pub bound_literal: f64,
    pub bound_ceil_reciprocal: f64,
    /// `‖a⁻¹‖_{A(T)}` of the truncated series inverse.
    pub measured: f64,
    pub holds_literal: bool,
    pub holds_ceil_reciprocal: bool,
}

/// `‖a⁻¹‖_A ≤ 64‖a‖_∞‖a⁻¹‖_∞² ψ_a(1/(4 + 32‖a‖_∞‖a⁻¹‖_∞²))` in the Wiener algebra.
pub fn baskakov_bound(a: &TorusPolynomial, tol: f64, k_max: u64) -> Result<BaskakovReport> {
    let opts = SupOptions::default();
    let (inf, sup) = inf_checked(a, &opts)?;
    let inv = 1.0 / inf;
    let x = 1.0 / (4.0 + 32.0 * sup * inv * inv);
    let tail = TailFunction::new(a);
    let psi_literal = tail.psi(x);
    let psi_ceil = tail.psi((1.0 / x).ceil());
    let pre = 64.0 * sup * inv * inv;
    let measured = neumann_invert(&AlgebraPair::wiener(), &AlgebraElement::Torus(a.clone()), tol, k_max)?.norm_a_inverse;
    let (bl, bc) = (pre * psi_literal, pre * psi_ceil);
    Ok(BaskakovReport {
        norm_inf: sup,
        inverse_norm_inf: inv,
        psi_argument: x,
        psi_literal,
        psi_ceil_reciprocal: psi_ceil,
        bound_literal: bl,
        bound_ceil_reciprocal: bc,
        measured,
        holds_literal: measured <= bl,
        holds_ceil_reciprocal: measured <= bc,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SunCheckConfig {
    pub theta: f64,
    pub samples: usize,
    pub seed: u64,
}

impl SunCheckConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::Domain(format!("theta must lie in (0, 1), got {}", self.theta)));
        }
        if self.samples == 0 {
            return Err(Error::Domain("at least one sample is required".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SunReport {
    pub pair: AlgebraPair,
    pub config: SunCheckConfig,
    /// `C_θ` at the configured exponent.
    pub c_theta: f64,
    /// Grid `θ = 0, 0.1, …, 0.9`.
    pub theta_grid: Vec<f64>,
    pub c_theta_grid: Vec<f64>,
    pub nonincreasing: bool,
    pub sample_count: usize,
}

/// `‖a²‖_A / (2‖a‖_A^{1+θ}‖a‖_B^{1−θ})` from the three norms.
pub fn sun_ratio(norm_a: f64, norm_b: f64, norm_a_sq: f64, theta: f64) -> f64 {
    norm_a_sq / (2.0 * norm_a.powf(1.0 + theta) * norm_b.powf(1.0 - theta))
}

/// Smallest constant `C_θ` with `‖a²‖_A ≤ 2C_θ‖a‖_A^{1+θ}‖a‖_B^{1−θ}` on a seeded sample.
pub fn sun_theta_check(pair: &AlgebraPair, config: &SunCheckConfig) -> Result<SunReport> {
    config.validate()?;
    let cfg = SampleConfig { max_degree: 16, ..SampleConfig::default() };
    let norms = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| {
            let a = random_element(pair, &mut trial_rng(config.seed, i), &cfg);
            let (na, nb) = (pair.norm_a(&a)?, pair.norm_b(&a)?);
            if !(nb > 0.0) {
                return Ok(None);
            }
            Ok(Some((na, nb, pair.norm_a(&pair.multiply(&a, &a)?)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let norms: Vec<(f64, f64, f64)> = norms.into_iter().flatten().collect();
    let c_of = |theta: f64| norms.iter().map(|&(a, b, s)| sun_ratio(a, b, s, theta)).fold(0.0, f64::max);
    let theta_grid: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let c_theta_grid: Vec<f64> = theta_grid.iter().map(|&t| c_of(t)).collect();
    let nonincreasing = c_theta_grid.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    Ok(SunReport {
        pair: pair.clone(),
        config: *config,
        c_theta: c_of(config.theta),
        theta_grid,
        c_theta_grid,
        nonincreasing,
        sample_count: norms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn constant_quotient() {
        let r = quotient_rule_check(&TorusPolynomial::constant(Complex64::new(2.0, 0.0))).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        assert!(r.holds);
    }

    #[test]
    fn vanishing_function_is_rejected() {
        let f = TorusPolynomial::cosine_bump(1, 2.0);
        assert!(matches!(quotient_rule_check(&f), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn an_first_member() {
        let r = an_family_report(1).unwrap();
        assert!((r.kappa - 3.0).abs() < 1e-9);
        assert!((r.ratio - (3.0 + 2.0 * PI) / 3.0).abs() < 1e-9);
        assert!(((3.0 + 2.0 * PI) / 3.0 - 3.0944).abs() < 1e-4);
    }

    #[test]
    fn tail_function_conventions() {
        let a = TorusPolynomial::cosine_bump(3, 0.5);
        let t = TailFunction::new(&a);
        assert!((t.psi(0.0) - a.l1_norm()).abs() < 1e-15);
        assert!((t.psi(0.3) - 0.5).abs() < 1e-15);
        assert_eq!(t.psi(4.0), 0.0);
    }

    #[test]
    fn constant_baskakov_stress_case() {
        let r = baskakov_bound(&TorusPolynomial::constant(Complex64::new(2.0, 0.0)), 1e-12, 100).unwrap();
        assert_eq!(r.bound_literal, 0.0);
        assert!(!r.holds_literal);
        assert!((r.measured - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sun_identity_ratio() {
        for theta in [0.0, 0.3, 0.9] {
            assert_eq!(sun_ratio(1.0, 1.0, 1.0, theta), 0.5);
        }
    }
}
