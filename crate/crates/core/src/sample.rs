//! Seeded random elements. Every draw is a pure function of `(seed, index)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::torus::TorusPolynomial;

/// Independent stream for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on the closed unit disc.
pub fn unit_disc(rng: &mut impl Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, 2.0 * PI * rng.gen::<f64>())
}

/// Size limits for random elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub max_degree: usize,
    pub min_dim: usize,
    pub max_dim: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { max_degree: 32, min_dim: 2, max_dim: 8 }
    }
}

/// Degree drawn uniformly from `0..=max_degree`, coefficients i.i.d. on the unit disc.
pub fn random_torus(rng: &mut impl Rng, max_degree: usize) -> TorusPolynomial {
    let n = rng.gen_range(0..=max_degree);
    let coeffs = (0..2 * n + 1).map(|_| unit_disc(rng)).collect();
    TorusPolynomial::from_symmetric(coeffs).expect("odd length")
}

/// Dimension drawn uniformly from `min_dim..=max_dim`, entries i.i.d. on the unit disc.
pub fn random_matrix(rng: &mut impl Rng, min_dim: usize, max_dim: usize) -> ComplexMatrix {
    let n = rng.gen_range(min_dim.max(1)..=max_dim.max(min_dim.max(1)));
    let data = (0..n * n).map(|_| unit_disc(rng)).collect();
    ComplexMatrix::from_row_major(n, data).expect("n² entries")
}

/// A random element of the kind `pair` works on.
pub fn random_element(pair: &AlgebraPair, rng: &mut impl Rng, cfg: &SampleConfig) -> AlgebraElement {
    match pair {
        AlgebraPair::ApproxSpace { .. } => AlgebraElement::Matrix(random_matrix(rng, cfg.min_dim, cfg.max_dim)),
        _ => AlgebraElement::Torus(random_torus(rng, cfg.max_degree)),
    }
}

/// Two random elements that can be multiplied together (matrices share a dimension).
pub fn random_pair(pair: &AlgebraPair, rng: &mut impl Rng, cfg: &SampleConfig) -> (AlgebraElement, AlgebraElement) {
    match pair {
        AlgebraPair::ApproxSpace { .. } => {
            let n = rng.gen_range(cfg.min_dim.max(1)..=cfg.max_dim.max(cfg.min_dim.max(1)));
            let a = random_matrix(rng, n, n);
            let b = random_matrix(rng, n, n);
            (AlgebraElement::Matrix(a), AlgebraElement::Matrix(b))
        }
        _ => (random_element(pair, rng, cfg), random_element(pair, rng, cfg)),
    }
}

/// Random real trigonometric polynomial of exact degree `n`.
pub fn random_real_torus(rng: &mut impl Rng, n: usize) -> TorusPolynomial {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    coeffs[n] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
    for k in 1..=n {
        let z = unit_disc(rng);
        coeffs[n + k] = z;
        coeffs[n - k] = z.conj();
    }
    TorusPolynomial::from_symmetric(coeffs).expect("odd length")
}

/// Householder reflector `I − 2vv*/‖v‖²` for a random `v`.
fn random_reflector(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..n).map(|_| unit_disc(rng) + Complex64::new(1e-3, 0.0)).collect();
    let nrm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut h = ComplexMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] -= 2.0 * v[i] * v[j].conj() / nrm2;
        }
    }
    h
}

/// Product of two random Householder reflectors: a random unitary.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    random_reflector(rng, n).multiply(&random_reflector(rng, n)).expect("square factors")
}

/// Element with condition number `kappa` in the ambient algebra, up to the
/// accuracy of the refined sup/inf.
///
/// Torus: `e^{2πijt}(s + r(t))` with `r ≥ 0` real, so `|a| = s + r`.
/// Matrix: `U diag(σ) V` with `σ_max = 1` and `σ_min = 1/κ`.
pub fn element_with_condition(
    pair: &AlgebraPair,
    rng: &mut impl Rng,
    kappa: f64,
    cfg: &SampleConfig,
) -> Result<AlgebraElement> {
    if !(kappa >= 1.0) {
        return Err(Error::Domain(format!("condition number must be >= 1, got {kappa}")));
    }
    match pair {
        AlgebraPair::ApproxSpace { .. } => {
            let n = rng.gen_range(cfg.min_dim.max(2)..=cfg.max_dim.max(cfg.min_dim.max(2)));
            let mut sigma = vec![1.0, 1.0 / kappa];
            sigma.extend((2..n).map(|_| rng.gen_range(1.0 / kappa..=1.0)));
            let d = ComplexMatrix::from_real_diagonal(&sigma);
            let u = random_unitary(rng, n);
            let v = random_unitary(rng, n);
            Ok(AlgebraElement::Matrix(u.multiply(&d)?.multiply(&v)?))
        }
        _ => {
            let opts = pair.sup_options();
            let deg = rng.gen_range(1..=cfg.max_degree.max(1));
            let q = random_real_torus(rng, deg);
            let shift = q.sup_abs(&opts)?.value;
            let r = q.add(&TorusPolynomial::constant(Complex64::new(shift, 0.0)));
            let lo = r.inf_abs(&opts)?.value;
            let hi = r.sup_abs(&opts)?.value;
            let base = if kappa == 1.0 || hi <= lo {
                TorusPolynomial::constant(Complex64::new(1.0, 0.0))
            } else {
                let s = (hi - kappa * lo) / (kappa - 1.0);
                r.add(&TorusPolynomial::constant(Complex64::new(s, 0.0)))
            };
            let j: i64 = rng.gen_range(-3..=3);
            let phase = TorusPolynomial::from_pairs(&[(j, Complex64::new(1.0, 0.0))]);
            let a = phase.multiply(&base);
            Ok(AlgebraElement::Torus(a))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = trial_rng(7, 3).gen();
        let b: f64 = trial_rng(7, 3).gen();
        let c: f64 = trial_rng(7, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unit_disc_samples_stay_inside() {
        let mut rng = trial_rng(1, 0);
        assert!((0..1000).all(|_| unit_disc(&mut rng).norm() <= 1.0));
    }

    #[test]
    fn prescribed_condition_number() {
        for (pair, kappa) in [(AlgebraPair::c1(), 7.5), (AlgebraPair::approx_default(), 12.0)] {
            let mut rng = trial_rng(11, 0);
            let a = element_with_condition(&pair, &mut rng, kappa, &SampleConfig { max_degree: 6, ..Default::default() })
                .unwrap();
            let got = pair.norm_b(&a).unwrap() / pair.invertibility_measure(&a).unwrap();
            assert!((got - kappa).abs() < 1e-8 * kappa, "{got} vs {kappa}");
        }
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary(&mut trial_rng(2, 0), 5);
        let err = u.adjoint().multiply(&u).unwrap().sub(&ComplexMatrix::identity(5)).unwrap().frobenius_norm();
        assert!(err < 1e-13);
    }
}
