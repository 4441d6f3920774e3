//! Trigonometric polynomials `f(t) = Σ_{|k|≤N} a_k e^{2πikt}` on the torus
//! `T = R/Z`, with exact convolution products and refined sup/inf of `|f|`.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Products whose operand lengths multiply to more than this use the FFT.
const DIRECT_CONVOLUTION_LIMIT: usize = 1 << 14;
/// Grid candidates within this fraction of the extreme value are refined.
const CANDIDATE_BAND: f64 = 0.02;
const MAX_CANDIDATES: usize = 64;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Settings for sup/inf evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupOptions {
    /// Grid points per `(N + 1)`.
    pub oversampling: usize,
    /// Relative tolerance of the Newton refinement.
    pub refine_tol: f64,
    pub max_iter: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        Self { oversampling: 64, refine_tol: 1e-12, max_iter: 100 }
    }
}

/// Location and value of a refined extremum of `|f|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub at: f64,
    /// Best grid value before refinement.
    pub grid_value: f64,
}

/// Trigonometric polynomial with coefficients stored for `k = -N..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "crate::io::ElementRepr", try_from = "crate::io::ElementRepr")]
pub struct TorusPolynomial {
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl TorusPolynomial {
    pub fn zero() -> Self {
        Self { degree: 0, coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    pub fn constant(z: Complex64) -> Self {
        Self { degree: 0, coeffs: vec![z] }
    }

    pub fn identity() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    /// Coefficients for `k = -N..=N`; the length must be odd.
    pub fn from_symmetric(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::Structural(format!(
                "symmetric coefficient vector needs odd length, got {}",
                coeffs.len()
            )));
        }
        let degree = coeffs.len() / 2;
        Ok(Self { degree, coeffs })
    }

    /// Builds a polynomial from `(k, a_k)` pairs; repeated frequencies add up.
    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Self {
        let degree = pairs.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        for &(k, z) in pairs {
            coeffs[(k + degree as i64) as usize] += z;
        }
        Self { degree, coeffs }
    }

    /// `1 + amplitude · cos(2π n t)`.
    pub fn cosine_bump(n: usize, amplitude: f64) -> Self {
        let half = Complex64::new(amplitude / 2.0, 0.0);
        Self::from_pairs(&[(0, Complex64::new(1.0, 0.0)), (n as i64, half), (-(n as i64), half)])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients for `k = -N..=N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.degree {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + self.degree as i64) as usize]
        }
    }

    /// Iterator over `(k, a_k)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.degree as i64;
        self.coeffs.iter().enumerate().map(move |(i, z)| (i as i64 - n, *z))
    }

    /// Drops vanishing outer coefficients.
    pub fn trimmed(&self) -> Self {
        let n = self.degree;
        let mut d = n;
        while d > 0 && self.coeff(d as i64) == Complex64::new(0.0, 0.0) && self.coeff(-(d as i64)) == Complex64::new(0.0, 0.0)
        {
            d -= 1;
        }
        self.restrict(d)
    }

    /// Keeps frequencies `|k| ≤ width`.
    pub fn restrict(&self, width: usize) -> Self {
        if width >= self.degree {
            return self.clone();
        }
        let start = self.degree - width;
        Self { degree: width, coeffs: self.coeffs[start..start + 2 * width + 1].to_vec() }
    }

    pub fn padded(&self, degree: usize) -> Self {
        if degree <= self.degree {
            return self.clone();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
        let off = degree - self.degree;
        coeffs[off..off + self.coeffs.len()].copy_from_slice(&self.coeffs);
        Self { degree, coeffs }
    }

    /// Exact product: convolution of the coefficient sequences.
    pub fn multiply(&self, other: &Self) -> Self {
        let degree = self.degree + other.degree;
        let coeffs = if self.coeffs.len() * other.coeffs.len() <= DIRECT_CONVOLUTION_LIMIT {
            let mut out = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
            for (i, a) in self.coeffs.iter().enumerate() {
                if *a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (j, b) in other.coeffs.iter().enumerate() {
                    out[i + j] += a * b;
                }
            }
            out
        } else {
            fft_convolve(&self.coeffs, &other.coeffs)
        };
        Self { degree, coeffs }
    }

    /// `f*(t) = conj(f(t))`, i.e. `a*_k = conj(a_{-k})`.
    pub fn adjoint(&self) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.iter().rev().map(|z| z.conj()).collect() }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .terms()
            .map(|(k, z)| z * Complex64::new(0.0, 2.0 * PI * k as f64))
            .collect();
        Self { degree: self.degree, coeffs }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { degree: self.degree, coeffs: self.coeffs.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.degree.max(other.degree);
        let (a, b) = (self.padded(d), other.padded(d));
        Self { degree: d, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-1.0))
    }

    /// `Σ |a_k|`, the Wiener-algebra norm.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).sum()
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.eval_with_derivatives(t)[0]
    }

    /// `[f(t), f'(t), f''(t)]`.
    pub fn eval_with_derivatives(&self, t: f64) -> [Complex64; 3] {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, z) in self.terms() {
            if z == Complex64::new(0.0, 0.0) {
                continue;
            }
            let w = 2.0 * PI * k as f64;
            // Reduce k t mod 1 before the trig call to keep large frequencies accurate.
            let phase = (k as f64 * t).rem_euclid(1.0) * 2.0 * PI;
            let e = Complex64::from_polar(1.0, phase) * z;
            out[0] += e;
            out[1] += e * Complex64::new(0.0, w);
            out[2] += e * (-w * w);
        }
        out
    }

    /// Values at `t_j = j / m`, `j = 0..m`, with `m > 2N`.
    pub fn grid_values(&self, m: usize) -> Vec<Complex64> {
        let m = m.max(2 * self.degree + 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, z) in self.terms() {
            buf[k.rem_euclid(m as i64) as usize] += z;
        }
        PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m).process(&mut buf));
        buf
    }

    fn grid_size(&self, opts: &SupOptions) -> usize {
        opts.oversampling.max(4) * (self.degree + 1)
    }

    /// Plain maximum of `|f|` over the seeding grid.
    pub fn grid_sup_abs(&self, opts: &SupOptions) -> f64 {
        self.grid_values(self.grid_size(opts)).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `sup_t |f(t)|`: dense grid seeding plus safeguarded Newton on `|f|²`.
    pub fn sup_abs(&self, opts: &SupOptions) -> Result<Extremum> {
        self.extremum(opts, true)
    }

    /// `inf_t |f(t)|`.
    pub fn inf_abs(&self, opts: &SupOptions) -> Result<Extremum> {
        self.extremum(opts, false)
    }

    fn extremum(&self, opts: &SupOptions, maximize: bool) -> Result<Extremum> {
        let m = self.grid_size(opts);
        let g: Vec<f64> = self.grid_values(m).iter().map(|z| z.norm_sqr()).collect();
        let sign = if maximize { 1.0 } else { -1.0 };
        let (best_idx, best_val) = g
            .iter()
            .enumerate()
            .map(|(i, v)| (i, sign * v))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("grid is never empty");
        let gmax = g.iter().copied().fold(0.0, f64::max);
        if gmax == 0.0 {
            return Ok(Extremum { value: 0.0, at: 0.0, grid_value: 0.0 });
        }
        let band = CANDIDATE_BAND * gmax;
        let mut candidates: Vec<(usize, f64)> = (0..m)
            .filter(|&i| {
                let (l, r) = (g[(i + m - 1) % m], g[(i + 1) % m]);
                let v = sign * g[i];
                v >= sign * l && v >= sign * r && v >= best_val - band
            })
            .map(|i| (i, sign * g[i]))
            .collect();
        candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        candidates.truncate(MAX_CANDIDATES);
        if candidates.is_empty() {
            candidates.push((best_idx, best_val));
        }
        let h = 1.0 / m as f64;
        let mut best = (best_val, best_idx as f64 * h);
        for (i, _) in candidates {
            let (v, t) = self.refine(i as f64 * h, h, sign, opts)?;
            if v > best.0 {
                best = (v, t);
            }
        }
        Ok(Extremum {
            value: (sign * best.0).max(0.0).sqrt(),
            at: best.1.rem_euclid(1.0),
            grid_value: (sign * best_val).max(0.0).sqrt(),
        })
    }

    /// Maximizes `sign · |f|²` starting from `t0`, staying inside `[t0 - h, t0 + h]`.
    fn refine(&self, t0: f64, h: f64, sign: f64, opts: &SupOptions) -> Result<(f64, f64)> {
        let objective = |t: f64| {
            let [f, d1, d2] = self.eval_with_derivatives(t);
            let g = f.norm_sqr();
            let g1 = 2.0 * (f.conj() * d1).re;
            let g2 = 2.0 * (d1.norm_sqr() + (f.conj() * d2).re);
            (sign * g, sign * g1, sign * g2)
        };
        let (mut lo, mut hi) = (t0 - h, t0 + h);
        let mut t = t0;
        let (mut val, mut d1, mut d2) = objective(t);
        for _ in 0..opts.max_iter {
            let mut step = if d2 < 0.0 { -d1 / d2 } else { d1.signum() * (hi - lo) / 4.0 };
            if d1 == 0.0 {
                return Ok((val, t));
            }
            step = step.clamp(lo - t, hi - t);
            let mut accepted = false;
            for _ in 0..60 {
                let cand = t + step;
                let (v, c1, c2) = objective(cand);
                if v >= val {
                    if d1 > 0.0 {
                        lo = t;
                    } else {
                        hi = t;
                    }
                    let gain = v - val;
                    t = cand;
                    val = v;
                    d1 = c1;
                    d2 = c2;
                    accepted = true;
                    if gain <= opts.refine_tol * val.abs() * 1e-4 || step.abs() <= 1e-15 {
                        return Ok((val, t));
                    }
                    break;
                }
                step *= 0.5;
                if step.abs() < 1e-17 {
                    break;
                }
            }
            if !accepted {
                // No ascent direction left at working precision.
                return Ok((val, t));
            }
        }
        Err(Error::NonConvergent { lo, hi })
    }

    /// `sup|f| + sup|f'|`.
    pub fn c1_norm(&self, opts: &SupOptions) -> Result<f64> {
        Ok(self.sup_abs(opts)?.value + self.derivative().sup_abs(opts)?.value)
    }
}

/// `sup_{t ∈ [0,1)} g(t)` for a continuous 1-periodic `g`: seeded on `grid`
/// equispaced points, then golden-section search around every local grid
/// maximum within 2% of the best one.
pub fn periodic_sup(g: impl Fn(f64) -> f64, grid: usize, tol: f64) -> Extremum {
    let m = grid.max(8);
    let h = 1.0 / m as f64;
    let vals: Vec<f64> = (0..m).map(|i| g(i as f64 * h)).collect();
    let (best_idx, best_val) =
        vals.iter().copied().enumerate().max_by(|a, b| a.1.total_cmp(&b.1)).expect("grid is never empty");
    let band = CANDIDATE_BAND * best_val.abs().max(f64::MIN_POSITIVE);
    let mut candidates: Vec<usize> = (0..m)
        .filter(|&i| {
            let v = vals[i];
            v >= vals[(i + m - 1) % m] && v >= vals[(i + 1) % m] && v >= best_val - band
        })
        .collect();
    candidates.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    candidates.truncate(MAX_CANDIDATES);
    let mut best = (best_val, best_idx as f64 * h);
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    for i in candidates {
        let (mut a, mut b) = (i as f64 * h - h, i as f64 * h + h);
        let mut x1 = b - invphi * (b - a);
        let mut x2 = a + invphi * (b - a);
        let (mut f1, mut f2) = (g(x1), g(x2));
        while b - a > tol {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = g(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = g(x1);
            }
        }
        for (v, t) in [(f1, x1), (f2, x2)] {
            if v > best.0 {
                best = (v, t);
            }
        }
    }
    Extremum { value: best.0, at: best.1.rem_euclid(1.0), grid_value: best_val }
}

/// Linear convolution of two coefficient vectors via the FFT.
fn fft_convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let len = a.len() + b.len() - 1;
    let m = len.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); m];
    let mut fb = vec![Complex64::new(0.0, 0.0); m];
    fa[..a.len()].copy_from_slice(a);
    fb[..b.len()].copy_from_slice(b);
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let fwd = p.plan_fft_forward(m);
        fwd.process(&mut fa);
        fwd.process(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x *= y;
        }
        p.plan_fft_inverse(m).process(&mut fa);
    });
    let inv = 1.0 / m as f64;
    fa.truncate(len);
    fa.iter_mut().for_each(|z| *z *= inv);
    fa
}
