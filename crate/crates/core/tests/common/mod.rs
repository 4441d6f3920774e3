//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, Schur};
use normctl_core::{ComplexMatrix, TorusPolynomial};
use num_complex::Complex64;

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let f: &dyn Fn(f64) -> f64 = &f;
    let (fa, fb) = (f(a), f(b));
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `Γ(a, x) = ∫_x^∞ t^{a−1} e^{−t} dt` by quadrature on `[x, x + 200]`,
/// split into unit panels so the integrand scale is resolved everywhere.
pub fn upper_gamma_quadrature(a: f64, x: f64) -> f64 {
    let g = |t: f64| ((a - 1.0) * t.ln() - t).exp();
    // the integrand peaks at t = a − 1
    let scale = g(x.max(a - 1.0));
    (0..200)
        .map(|i| {
            let lo = x + i as f64;
            integrate(g, lo, lo + 1.0, 1e-15 * scale)
        })
        .sum()
}

/// `Γ(n, x) = (n − 1)! e^{−x} Σ_{k<n} x^k/k!` for integer `n ≥ 1`.
pub fn upper_gamma_integer(n: u32, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..n {
        term *= x / k as f64;
        sum += term;
    }
    let fact: f64 = (1..n).map(|k| k as f64).product();
    fact * (-x).exp() * sum
}

pub fn to_nalgebra(a: &ComplexMatrix) -> DMatrix<Complex64> {
    let n = a.dim();
    DMatrix::from_fn(n, n, |i, j| a[(i, j)])
}

/// Smallest singular value by nalgebra's SVD.
pub fn sigma_min(a: &ComplexMatrix) -> f64 {
    to_nalgebra(a).singular_values().min()
}

pub fn sigma_max(a: &ComplexMatrix) -> f64 {
    to_nalgebra(a).singular_values().max()
}

/// Eigenvalues via a complex Schur decomposition.
pub fn eigenvalues(a: &ComplexMatrix) -> Vec<Complex64> {
    Schur::new(to_nalgebra(a)).eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

pub fn spectral_radius(a: &ComplexMatrix) -> f64 {
    eigenvalues(a).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dense-grid sup of `|p|` by direct summation of the Fourier series.
pub fn brute_sup(p: &TorusPolynomial, points: usize) -> f64 {
    (0..points).map(|i| brute_eval(p, i as f64 / points as f64).norm()).fold(0.0, f64::max)
}

pub fn brute_inf(p: &TorusPolynomial, points: usize) -> f64 {
    (0..points).map(|i| brute_eval(p, i as f64 / points as f64).norm()).fold(f64::INFINITY, f64::min)
}

pub fn brute_eval(p: &TorusPolynomial, t: f64) -> Complex64 {
    p.terms().map(|(k, c)| c * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 * t)).sum()
}

/// Coefficients of the derivative, from the symbolic rule `(e^{2πikt})' = 2πik e^{2πikt}`.
pub fn symbolic_derivative(p: &TorusPolynomial) -> TorusPolynomial {
    let pairs: Vec<(i64, Complex64)> = p
        .terms()
        .map(|(k, c)| (k, c * Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64)))
        .collect();
    TorusPolynomial::from_pairs(&pairs)
}

/// Plain convolution of coefficient sequences.
pub fn convolve(p: &TorusPolynomial, q: &TorusPolynomial) -> TorusPolynomial {
    let mut pairs: Vec<(i64, Complex64)> = Vec::new();
    for (i, a) in p.terms() {
        for (j, b) in q.terms() {
            pairs.push((i + j, a * b));
        }
    }
    TorusPolynomial::from_pairs(&pairs)
}
