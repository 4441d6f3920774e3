//! Dense complex matrices: products, adjoints, band truncation, a cyclic
//! Jacobi eigensolver for Hermitian matrices and LU inversion.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const JACOBI_MAX_SWEEPS: usize = 80;
const JACOBI_REL_TOL: f64 = 1e-15;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "crate::io::ElementRepr", try_from = "crate::io::ElementRepr")]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be `n * n`.
    pub fn from_row_major(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Structural(format!(
                "matrix of dimension {n} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Self { n, data: entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Structural("rows must form a square matrix".into()));
            }
            data.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Structural(format!(
                "cannot multiply {0}x{0} by {1}x{1}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_out = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Structural(format!(
                "dimension mismatch: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    /// `self - z * I`.
    pub fn shift(&self, z: Complex64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] -= z;
        }
        out
    }

    /// Keeps entries with `|i - j| < k` and zeroes the rest, so `k = 0`
    /// gives the zero matrix and `k = 1` the diagonal part.
    pub fn band_truncate(&self, k: usize) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if i.abs_diff(j) < k {
                    out.data[i * n + j] = self.data[i * n + j];
                }
            }
        }
        out
    }

    /// Smallest `k` such that every nonzero entry has `|i - j| < k`.
    pub fn bandwidth(&self) -> usize {
        let n = self.n;
        let mut bw = 0;
        for i in 0..n {
            for j in 0..n {
                if self.data[i * n + j] != Complex64::new(0.0, 0.0) {
                    bw = bw.max(i.abs_diff(j) + 1);
                }
            }
        }
        bw
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.n;
        let scale = self.frobenius_norm().max(1.0);
        (0..n).all(|i| (0..n).all(|j| (self.data[i * n + j] - self.data[j * n + i].conj()).norm() <= tol * scale))
    }

    /// Gram matrix `A* A`.
    pub fn gram(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                out.data[i * n + j] = s;
                out.data[j * n + i] = s.conj();
            }
            out.data[i * n + i].im = 0.0;
        }
        out
    }

    /// Eigenvalues of a Hermitian matrix in ascending order, by cyclic
    /// Jacobi rotations. Only the Hermitian part is used.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.n;
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut h = self.data.clone();
        for i in 0..n {
            h[i * n + i] = Complex64::new(h[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let avg = (h[i * n + j] + h[j * n + i].conj()) * 0.5;
                h[i * n + j] = avg;
                h[j * n + i] = avg.conj();
            }
        }
        let total: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if total == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| h[i * n + j].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= JACOBI_REL_TOL * total {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    jacobi_rotate(&mut h, n, p, q);
                }
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        let mut eig: Vec<f64> = (0..n).map(|i| h[i * n + i].re).collect();
        eig.sort_by(|a, b| a.total_cmp(b));
        Ok(eig)
    }

    /// Singular values in ascending order (square roots of the eigenvalues of `A* A`).
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        Ok(self
            .gram()
            .hermitian_eigenvalues()?
            .into_iter()
            .map(|l| l.max(0.0).sqrt())
            .collect())
    }

    /// Operator norm `σ_max`.
    pub fn op_norm(&self) -> Result<f64> {
        Ok(self.singular_values()?.last().copied().unwrap_or(0.0))
    }

    /// `(σ_min, σ_max)`.
    pub fn extreme_singular_values(&self) -> Result<(f64, f64)> {
        let s = self.singular_values()?;
        Ok((s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0)))
    }

    /// Inverse by LU factorization with partial pivoting.
    pub fn lu_inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut lu = self.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let singular_tol = f64::EPSILON * scale * n as f64;
        for col in 0..n {
            let (piv, pmax) = (col..n)
                .map(|r| (r, lu[r * n + col].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap_or((col, 0.0));
            if pmax <= singular_tol || pmax == 0.0 {
                return Err(Error::NotInvertible { measure: pmax, threshold: singular_tol });
            }
            if piv != col {
                for j in 0..n {
                    lu.swap(col * n + j, piv * n + j);
                }
                perm.swap(col, piv);
            }
            let d = lu[col * n + col];
            for r in (col + 1)..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                for j in (col + 1)..n {
                    let u = lu[col * n + j];
                    lu[r * n + j] -= f * u;
                }
            }
        }
        let mut inv = Self::zeros(n);
        for (c, &p) in perm.iter().enumerate() {
            // P A = L U, so A^{-1} e_{perm[c]} solves L U x = e_c.
            let mut x = vec![Complex64::new(0.0, 0.0); n];
            x[c] = Complex64::new(1.0, 0.0);
            for i in 0..n {
                let mut s = x[i];
                for j in 0..i {
                    s -= lu[i * n + j] * x[j];
                }
                x[i] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[i];
                for j in (i + 1)..n {
                    s -= lu[i * n + j] * x[j];
                }
                x[i] = s / lu[i * n + i];
            }
            for i in 0..n {
                inv.data[i * n + p] = x[i];
            }
        }
        Ok(inv)
    }
}

/// One complex Jacobi rotation annihilating `h[p][q]`.
fn jacobi_rotate(h: &mut [Complex64], n: usize, p: usize, q: usize) {
    let hpq = h[p * n + q];
    let g = hpq.norm();
    if g == 0.0 {
        return;
    }
    let alpha = h[p * n + p].re;
    let beta = h[q * n + q].re;
    // Phase d makes the (p, q) entry real, then a real rotation finishes it.
    let d = (hpq / g).conj();
    let tau = (beta - alpha) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = [[c, s], [-s d, c d]] on the (p, q) plane; H <- U^H H U.
    for k in 0..n {
        let hkp = h[k * n + p];
        let hkq = h[k * n + q];
        h[k * n + p] = hkp * c - hkq * (d * s);
        h[k * n + q] = hkp * s + hkq * (d * c);
    }
    let dc = d.conj();
    for k in 0..n {
        let hpk = h[p * n + k];
        let hqk = h[q * n + k];
        h[p * n + k] = hpk * c - hqk * (dc * s);
        h[q * n + k] = hpk * s + hqk * (dc * c);
    }
    h[p * n + q] = Complex64::new(0.0, 0.0);
    h[q * n + p] = Complex64::new(0.0, 0.0);
    h[p * n + p].im = 0.0;
    h[q * n + q].im = 0.0;
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}
