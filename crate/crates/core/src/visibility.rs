//! Visibility constants `φ(δ) = sup{‖a⁻¹‖_A : ‖a‖_A ≤ 1, ‖a⁻¹‖_B ≤ 1/δ}`,
//! the control function derived from `φ`, and pseudospectra.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::error::{Error, Result};
use crate::inversion::neumann_invert;
use crate::matrix::ComplexMatrix;
use crate::sample::{random_matrix, trial_rng, unit_disc};
use crate::torus::TorusPolynomial;

/// Value of a visibility constant where it may be infinite or not known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum PhiValue {
    Finite(f64),
    Infinite,
    Unknown,
}

impl PhiValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(*v),
            _ => None,
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// Visibility constants of the Wiener algebra in `C(T)`: `(2δ² − 1)⁻¹` above
/// `1/√2`, infinite up to `1/2`, unknown in between.
pub fn nikolski_phi_wiener(delta: f64) -> Result<PhiValue> {
    check_delta(delta)?;
    Ok(if delta > FRAC_1_SQRT_2 {
        PhiValue::Finite(1.0 / (2.0 * delta * delta - 1.0))
    } else if delta <= 0.5 {
        PhiValue::Infinite
    } else {
        PhiValue::Unknown
    })
}

/// `h(‖a‖_A, ‖a⁻¹‖_B) = φ(1/(‖a‖_A‖a⁻¹‖_B)) / ‖a‖_A`.
pub fn control_h_from_phi(norm_a: f64, norm_b_inverse: f64, phi: impl Fn(f64) -> PhiValue) -> Result<PhiValue> {
    let p = norm_a * norm_b_inverse;
    if !(norm_a > 0.0) || !(p >= 1.0) {
        return Err(Error::Domain(format!("control function needs ‖a‖_A‖a⁻¹‖_B >= 1, got {p}")));
    }
    Ok(match phi(1.0 / p) {
        PhiValue::Finite(v) => PhiValue::Finite(v / norm_a),
        other => other,
    })
}

/// Best witness of a randomized search for `φ(δ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VisibilityEstimate {
    pub pair: AlgebraPair,
    pub delta: f64,
    /// Re-evaluated `‖witness⁻¹‖_A`; 0 when no feasible candidate was found.
    pub lower_bound: f64,
    pub witness: Option<AlgebraElement>,
    pub witness_norm_a: Option<f64>,
    pub witness_norm_b_inverse: Option<f64>,
    pub best_trial: Option<u64>,
    pub feasible: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Candidate `index` of the seeded proposal schedule; independent of `δ`.
pub fn proposal(pair: &AlgebraPair, seed: u64, index: u64) -> AlgebraElement {
    let mut rng = trial_rng(seed, index);
    match pair {
        AlgebraPair::ApproxSpace { .. } => {
            let n = rng.gen_range(2..=6);
            let eps = 0.5 * rng.gen::<f64>().powi(2);
            let p = random_matrix(&mut rng, n, n);
            let scale = eps / p.op_norm().unwrap_or(1.0).max(1e-300);
            AlgebraElement::Matrix(ComplexMatrix::identity(n).add(&p.scale_real(scale)).expect("same size"))
        }
        _ => {
            // every 97th proposal is a member of the family 1 + ½cos 2πnt
            if index % 97 == 96 {
                let n = 1 + (index / 97) as usize % 16;
                return AlgebraElement::Torus(TorusPolynomial::cosine_bump(n, 0.5));
            }
            let s = [0.5, 1.0, 2.0][rng.gen_range(0..3)];
            let deg = rng.gen_range(1..=16usize);
            let eps = 0.5 * rng.gen::<f64>().powi(2);
            let mut coeffs: Vec<Complex64> = (0..2 * deg + 1)
                .map(|i| {
                    let k = i as f64 - deg as f64;
                    unit_disc(&mut rng) * (1.0 + k.abs()).powf(-s)
                })
                .collect();
            coeffs[deg] = Complex64::new(0.0, 0.0);
            let l1: f64 = coeffs.iter().map(|z| z.norm()).sum();
            let lead: i64 = rng.gen_range(-2..=2);
            let p = TorusPolynomial::from_symmetric(coeffs).expect("odd length").scale_real(eps / l1.max(1e-300));
            let base = TorusPolynomial::identity().add(&p);
            let phase = TorusPolynomial::from_pairs(&[(lead, Complex64::new(1.0, 0.0))]);
            AlgebraElement::Torus(phase.multiply(&base))
        }
    }
}

/// Objective of a candidate after the optimal rescaling `a ↦ δ‖a⁻¹‖_B a`:
/// `‖a⁻¹‖_A / (δ‖a⁻¹‖_B)`, feasible iff `‖a‖_A ‖a⁻¹‖_B ≤ 1/δ`.
struct Candidate {
    value: f64,
    scale: f64,
}

const SEARCH_TOL: f64 = 1e-12;
const SEARCH_KMAX: u64 = 100_000;

fn evaluate(pair: &AlgebraPair, a: &AlgebraElement, delta: f64) -> Result<Option<Candidate>> {
    let na = pair.norm_a(a)?;
    let m = pair.invertibility_measure(a)?;
    if !(m > 0.0) || !(na > 0.0) {
        return Ok(None);
    }
    let y = 1.0 / m;
    if na * y > 1.0 / delta {
        return Ok(None);
    }
    let inv = match neumann_invert(pair, a, SEARCH_TOL, SEARCH_KMAX) {
        Ok(r) => r,
        Err(Error::Truncation { .. } | Error::NotInvertible { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let scale = delta * y;
    Ok(Some(Candidate { value: inv.norm_a_inverse / scale, scale }))
}

/// Seeded random search for a lower bound on `φ(δ)`. Candidates are pushed
/// onto the boundary `‖a⁻¹‖_B = 1/δ`, which never lowers `‖a⁻¹‖_A`; the
/// witness norms are recomputed from scratch.
pub fn phi_lower_bound(pair: &AlgebraPair, delta: f64, trials: usize, seed: u64) -> Result<VisibilityEstimate> {
    check_delta(delta)?;
    pair.validate()?;
    let scored: Vec<Result<Option<(f64, f64)>>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let a = proposal(pair, seed, i);
            Ok(evaluate(pair, &a, delta)?.map(|c| (c.value, c.scale)))
        })
        .collect();
    let mut best: Option<(f64, f64, u64)> = None;
    let mut feasible = 0;
    for (i, r) in scored.into_iter().enumerate() {
        if let Some((v, s)) = r? {
            feasible += 1;
            if best.map_or(true, |(bv, _, _)| v > bv) {
                best = Some((v, s, i as u64));
            }
        }
    }
    let mut est = VisibilityEstimate {
        pair: pair.clone(),
        delta,
        lower_bound: 0.0,
        witness: None,
        witness_norm_a: None,
        witness_norm_b_inverse: None,
        best_trial: None,
        feasible,
        trials,
        seed,
    };
    if let Some((_, scale, i)) = best {
        let w = proposal(pair, seed, i).scale_real(scale);
        let inv = neumann_invert(pair, &w, SEARCH_TOL, SEARCH_KMAX)?;
        est.lower_bound = inv.norm_a_inverse;
        est.witness_norm_a = Some(pair.norm_a(&w)?);
        est.witness_norm_b_inverse = Some(1.0 / pair.invertibility_measure(&w)?);
        est.witness = Some(w);
        est.best_trial = Some(i);
    }
    Ok(est)
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

/// Resolvent norms `‖(λ − a)⁻¹‖_op = 1/σ_min(λ − a)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudospectrumGrid {
    pub rect: Rect,
    pub resolution: usize,
    pub delta: f64,
    /// Grid points, row-major in the imaginary direction.
    pub lambdas: Vec<Complex64>,
    pub sigma_min: Vec<f64>,
}

impl PseudospectrumGrid {
    /// `1/σ_min`, infinite on the spectrum.
    pub fn resolvent_norms(&self) -> Vec<f64> {
        self.sigma_min.iter().map(|&s| resolvent_from_sigma(s)).collect()
    }

    /// Membership in `σ_δ`: resolvent norm above `1/δ`, or `λ` in the spectrum.
    pub fn mask(&self, delta: f64) -> Vec<bool> {
        self.sigma_min.iter().map(|&s| in_pseudospectrum(s, delta)).collect()
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Structural(format!("csv output failed: {e}"));
        out.write_record(["re", "im", "resolvent_norm"]).map_err(io)?;
        for (l, r) in self.lambdas.iter().zip(self.resolvent_norms()) {
            out.write_record([l.re.to_string(), l.im.to_string(), r.to_string()]).map_err(io)?;
        }
        out.flush().map_err(|e| Error::Structural(format!("csv output failed: {e}")))?;
        Ok(())
    }
}

fn resolvent_from_sigma(s: f64) -> f64 {
    if s > 0.0 {
        1.0 / s
    } else {
        f64::INFINITY
    }
}

fn in_pseudospectrum(sigma_min: f64, delta: f64) -> bool {
    sigma_min == 0.0 || resolvent_from_sigma(sigma_min) > 1.0 / delta
}

pub fn pseudospectrum(a: &ComplexMatrix, rect: Rect, resolution: usize, delta: f64) -> Result<PseudospectrumGrid> {
    if resolution < 2 {
        return Err(Error::Domain("resolution must be at least 2".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    // exact at both ends and at the midpoint of a symmetric range
    let step = |lo: f64, hi: f64, i: usize| {
        let t = i as f64 / (resolution - 1) as f64;
        lo * (1.0 - t) + hi * t
    };
    let lambdas: Vec<Complex64> = (0..resolution)
        .flat_map(|j| {
            (0..resolution)
                .map(move |i| Complex64::new(step(rect.re_min, rect.re_max, i), step(rect.im_min, rect.im_max, j)))
        })
        .collect();
    let sigma_min = lambdas
        .par_iter()
        .map(|&l| Ok(a.shift(l).extreme_singular_values()?.0 .max(0.0)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(PseudospectrumGrid { rect, resolution, delta, lambdas, sigma_min })
}

/// Both sides of the zero-exclusion equivalence at `λ = 0`:
/// `(0 ∉ σ_δ(a), σ_min(a) > δ)`.
pub fn zero_exclusion(a: &ComplexMatrix, delta: f64) -> Result<(bool, bool)> {
    let s = a.extreme_singular_values()?.0.max(0.0);
    Ok((!in_pseudospectrum(s, delta), s > delta))
}
