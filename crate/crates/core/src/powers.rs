//! Normalized power sequences `β_n = ‖cⁿ‖_A ‖c‖_B^{-n}` and spectral radii.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::error::{Error, Result};

/// Relative slack for comparisons between independently evaluated norms.
pub const CHECK_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaReport {
    pub structure_constant: f64,
    /// `β_1, …, β_{2^{k_max}}`.
    pub beta: Vec<f64>,
    /// Pairs `(m, n)` with `β_{m+n} > β_m β_n`.
    pub submultiplicativity_violations: Vec<(usize, usize)>,
    /// Exponents `k` with `β_{2^k} > (2C)^k β_1`.
    pub dyadic_violations: Vec<u32>,
}

impl BetaReport {
    pub fn beta_at(&self, n: usize) -> f64 {
        self.beta[n - 1]
    }

    pub fn is_consistent(&self) -> bool {
        self.submultiplicativity_violations.is_empty() && self.dyadic_violations.is_empty()
    }
}

/// `c/‖c‖_B` and `‖c‖_B`; powers of the quotient neither overflow nor underflow
/// faster than the true spectral behaviour.
fn normalized(pair: &AlgebraPair, c: &AlgebraElement) -> Result<(AlgebraElement, f64)> {
    let s = pair.norm_b(c)?;
    if !(s > 0.0) {
        return Err(Error::Domain("power sequences need a nonzero element".into()));
    }
    Ok((c.scale_real(1.0 / s), s))
}

/// `β_n` for `n = 1 … 2^{k_max}`, with both structural checks evaluated
/// against the structure constant `c_struct`.
pub fn beta_sequence(pair: &AlgebraPair, c: &AlgebraElement, k_max: u32, c_struct: f64) -> Result<BetaReport> {
    let (d, _) = normalized(pair, c)?;
    let len = 1usize << k_max;
    let mut beta = Vec::with_capacity(len);
    let mut p = d.clone();
    beta.push(pair.norm_a(&p)?);
    for _ in 1..len {
        p = pair.multiply(&p, &d)?;
        beta.push(pair.norm_a(&p)?);
    }
    let b = |n: usize| beta[n - 1];
    let mut sub = Vec::new();
    for m in 1..len {
        for n in m..=len - m {
            if b(m + n) > b(m) * b(n) * (1.0 + CHECK_RTOL) {
                sub.push((m, n));
            }
        }
    }
    let mut dyadic = Vec::new();
    for k in 0..=k_max {
        let bound = (2.0 * c_struct).powi(k as i32) * b(1);
        if b(1 << k) > bound * (1.0 + CHECK_RTOL) {
            dyadic.push(k);
        }
    }
    Ok(BetaReport { structure_constant: c_struct, beta, submultiplicativity_violations: sub, dyadic_violations: dyadic })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralRadiusReport {
    /// `‖c^{2^k}‖_A^{1/2^k}` for `k = 0 … k_max`.
    pub a_roots: Vec<f64>,
    /// `‖c^{2^k}‖_B^{1/2^k}` for `k = 0 … k_max`.
    pub b_roots: Vec<f64>,
    /// `a_roots[k_max] − b_roots[k_max]`.
    pub gap: f64,
}

/// Repeated squaring of `c`; both root sequences decrease towards the
/// common spectral radius.
pub fn spectral_radius_check(pair: &AlgebraPair, c: &AlgebraElement, k_max: u32) -> Result<SpectralRadiusReport> {
    // q = c^{2^k}/‖c^{2^k}‖_B and ln_b = ln‖c^{2^k}‖_B, so no power under- or overflows
    let (mut q, s) = normalized(pair, c)?;
    let mut ln_b = s.ln();
    let mut a_roots = Vec::with_capacity(k_max as usize + 1);
    let mut b_roots = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let root = 1.0 / (1u64 << k) as f64;
        a_roots.push(((ln_b + pair.norm_a(&q)?.ln()) * root).exp());
        b_roots.push((ln_b * root).exp());
        if k < k_max {
            let sq = pair.multiply(&q, &q)?;
            let nb = pair.norm_b(&sq)?;
            if !(nb > 0.0) {
                // nilpotent: every later power vanishes
                a_roots.resize(k_max as usize + 1, 0.0);
                b_roots.resize(k_max as usize + 1, 0.0);
                break;
            }
            ln_b = 2.0 * ln_b + nb.ln();
            q = sq.scale_real(1.0 / nb);
        }
    }
    let gap = a_roots[k_max as usize] - b_roots[k_max as usize];
    Ok(SpectralRadiusReport { a_roots, b_roots, gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::torus::TorusPolynomial;
    use num_complex::Complex64;

    #[test]
    fn identity_has_unit_betas() {
        let e = AlgebraElement::Torus(TorusPolynomial::identity());
        let r = beta_sequence(&AlgebraPair::c1(), &e, 4, 1.0).unwrap();
        assert!(r.beta.iter().all(|&b| (b - 1.0).abs() < 1e-15));
        assert!(r.is_consistent());
    }

    #[test]
    fn first_beta_is_the_embedding_ratio() {
        let pair = AlgebraPair::c1();
        let c = AlgebraElement::Torus(TorusPolynomial::cosine_bump(3, 0.4));
        let r = beta_sequence(&pair, &c, 2, 1.0).unwrap();
        let ratio = pair.norm_a(&c).unwrap() / pair.norm_b(&c).unwrap();
        assert!((r.beta_at(1) - ratio).abs() < 1e-12 * ratio);
    }

    #[test]
    fn half_identity_radius() {
        let c = AlgebraElement::Matrix(ComplexMatrix::identity(3).scale_real(0.5));
        let r = spectral_radius_check(&AlgebraPair::approx_default(), &c, 5).unwrap();
        assert!(r.a_roots.iter().chain(&r.b_roots).all(|&x| (x - 0.5).abs() < 1e-14));
    }

    #[test]
    fn hermitian_b_roots_are_constant() {
        let h = ComplexMatrix::from_row_major(
            2,
            vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(-1.0, 0.0)],
        )
        .unwrap();
        let rho = h.op_norm().unwrap();
        let r = spectral_radius_check(&AlgebraPair::approx_default(), &AlgebraElement::Matrix(h), 6).unwrap();
        assert!(r.b_roots.iter().all(|&x| (x - rho).abs() < 1e-12 * rho));
    }

    #[test]
    fn zero_is_rejected() {
        let z = AlgebraElement::Torus(TorusPolynomial::zero());
        assert!(matches!(beta_sequence(&AlgebraPair::c1(), &z, 2, 1.0), Err(Error::Domain(_))));
    }
}
