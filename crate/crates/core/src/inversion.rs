//! Inversion through the Neumann series of `b = a*a/‖a*a‖_B`:
//! `a⁻¹ = (Σ_k cᵏ) a*/‖a*a‖_B` with `c = e − b` and `‖c‖_B = 1 − κ⁻² < 1`.

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::torus::TorusPolynomial;

/// Relative invertibility threshold: `σ_min` (or `inf |a|`) must exceed this
/// multiple of `‖a‖_B`.
pub const INVERTIBILITY_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseReport {
    pub inverse: AlgebraElement,
    /// Number of series terms `K + 1` in `Σ_{k=0}^{K} cᵏ`.
    pub terms_used: usize,
    /// Measured `‖e − a·inverse‖_B`.
    pub residual_b: f64,
    /// `q^{K+1}/(1 − q)` with `q = ‖c‖_B`; bounds the residual.
    pub residual_bound: f64,
    /// `q^{K+1}/(1 − q) · ‖a*‖_B/‖a*a‖_B`; bounds `‖a⁻¹ − inverse‖_B`.
    pub error_bound_b: f64,
    pub norm_a_inverse: f64,
    pub norm_b_inverse: f64,
    pub norm_a: f64,
    pub norm_b: f64,
    pub kappa: f64,
    pub embedding_ratio: f64,
    /// Measured `‖c‖_B`.
    pub c_norm_b: f64,
    /// ℓ¹ mass of torus coefficients dropped by support pruning.
    pub discarded_mass: f64,
    pub products: usize,
}

/// `‖a‖_B / inf-measure`, after the invertibility check.
pub fn condition_number(pair: &AlgebraPair, a: &AlgebraElement) -> Result<f64> {
    let nb = pair.norm_b(a)?;
    let m = checked_measure(pair, a, nb)?;
    Ok(nb / m)
}

fn checked_measure(pair: &AlgebraPair, a: &AlgebraElement, nb: f64) -> Result<f64> {
    let m = pair.invertibility_measure(a)?;
    let threshold = INVERTIBILITY_RTOL * nb;
    if !(m > threshold) {
        return Err(Error::NotInvertible { measure: m, threshold });
    }
    Ok(m)
}

/// LU inverse with partial pivoting.
pub fn exact_invert_matrix(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.lu_inverse()
}

/// Smallest `K ≥ 0` with `q^{K+1}/(1 − q) ≤ tol`.
pub fn terms_needed(q: f64, tol: f64) -> u64 {
    if q <= 0.0 {
        return 0;
    }
    let est = ((tol * (1.0 - q)).ln() / q.ln()).ceil();
    let mut k = if est.is_finite() && est > 1.0 { est as u64 - 1 } else { 0 };
    while k > 0 && q.powf(k as f64) / (1.0 - q) <= tol {
        k -= 1;
    }
    while q.powf((k + 1) as f64) / (1.0 - q) > tol {
        k += 1;
    }
    k
}

/// Drops the outermost coefficient pairs while their ℓ¹ mass stays within
/// `budget`, then enforces `|k| ≤ cap`. Returns the pruned polynomial and
/// the mass removed.
fn prune_edges(p: &TorusPolynomial, budget: f64, cap: usize) -> (TorusPolynomial, f64) {
    let n = p.degree();
    let mut width = n;
    let mut removed = 0.0;
    while width > 0 {
        let w = width as i64;
        let m = p.coeff(w).norm() + p.coeff(-w).norm();
        if removed + m > budget {
            break;
        }
        removed += m;
        width -= 1;
    }
    while width > cap {
        let w = width as i64;
        removed += p.coeff(w).norm() + p.coeff(-w).norm();
        width -= 1;
    }
    (p.restrict(width), removed)
}

struct SeriesState {
    budget: f64,
    cap: usize,
    discarded: f64,
    products: usize,
}

impl SeriesState {
    fn mul(&mut self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.products += 1;
        let p = x.multiply(y)?;
        Ok(self.prune(p))
    }

    fn prune(&mut self, p: AlgebraElement) -> AlgebraElement {
        match p {
            AlgebraElement::Torus(t) => {
                let (t, m) = prune_edges(&t, self.budget, self.cap);
                self.discarded += m;
                AlgebraElement::Torus(t)
            }
            m => m,
        }
    }
}

/// `Σ_{k=0}^{n-1} cᵏ` by binary doubling over the bits of `n`, tracking
/// `(S_len, c^len)`: `O(log n)` products.
fn geometric_sum(c: &AlgebraElement, n: u64, state: &mut SeriesState) -> Result<AlgebraElement> {
    let e = c.identity_like();
    let mut s = e.clone();
    let mut p = c.clone();
    let top = 63 - n.leading_zeros();
    for bit in (0..top).rev() {
        // S_{2l} = S_l + c^l S_l, c^{2l} = (c^l)²
        let ps = state.mul(&p, &s)?;
        s = state.prune(s.add(&ps)?);
        p = state.mul(&p, &p)?;
        if (n >> bit) & 1 == 1 {
            // S_{l+1} = S_l + c^l, c^{l+1} = c^l c
            s = state.prune(s.add(&p)?);
            p = state.mul(&p, c)?;
        }
    }
    Ok(s)
}

/// Neumann-series inverse. Stops at the first `K` whose geometric residual
/// bound `q^{K+1}/(1 − q)` is at most `tol`; `k_max` caps `K`.
pub fn neumann_invert(pair: &AlgebraPair, a: &AlgebraElement, tol: f64, k_max: u64) -> Result<InverseReport> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    pair.check(a)?;
    let nb = pair.norm_b(a)?;
    let measure = checked_measure(pair, a, nb)?;
    let na = pair.norm_a(a)?;
    let kappa = nb / measure;
    let a_star = a.adjoint();
    let gram_norm = nb * nb;
    let b = a_star.multiply(a)?.scale_real(1.0 / gram_norm);
    let c = a.identity_like().sub(&b)?;
    let q = pair.norm_b(&c)?;
    if !(q < 1.0) {
        return Err(Error::NotInvertible { measure: 1.0 - q, threshold: 0.0 });
    }
    let k = terms_needed(q, tol);
    if k > k_max {
        let achieved = q.powf((k_max + 1) as f64) / (1.0 - q);
        return Err(Error::Truncation { reason: format!("{} terms needed, k_max = {k_max}", k + 1), achieved });
    }
    let n_terms = k + 1;
    let bits = 64 - n_terms.leading_zeros() as usize;
    let deg = a.as_torus().map_or(0, |t| t.degree());
    let mut state = SeriesState {
        // one prune for c, at most five per doubling step
        budget: tol / (10.0 * (5 * bits + 1) as f64),
        cap: deg.saturating_mul(k_max.saturating_add(2).min(usize::MAX as u64) as usize).max(2 * deg),
        discarded: 0.0,
        products: 0,
    };
    let c = state.prune(c);
    let s = geometric_sum(&c, n_terms, &mut state)?;
    if state.discarded > tol / 10.0 {
        return Err(Error::Truncation { reason: "discarded coefficient mass exceeds tol/10".into(), achieved: state.discarded });
    }
    let inverse = s.multiply(&a_star)?.scale_real(1.0 / gram_norm);
    let residual = a.identity_like().sub(&a.multiply(&inverse)?)?;
    let residual_b = pair.norm_b(&residual)?;
    let residual_bound = q.powf(n_terms as f64) / (1.0 - q);
    if residual_b > tol {
        return Err(Error::Truncation { reason: "measured residual exceeds tolerance".into(), achieved: residual_b });
    }
    Ok(InverseReport {
        norm_a_inverse: pair.norm_a(&inverse)?,
        norm_b_inverse: pair.norm_b(&inverse)?,
        inverse,
        terms_used: n_terms as usize,
        residual_b,
        residual_bound,
        error_bound_b: residual_bound * nb / gram_norm,
        norm_a: na,
        norm_b: nb,
        kappa,
        embedding_ratio: na / nb,
        c_norm_b: q,
        discarded_mass: state.discarded,
        products: state.products,
    })
}
