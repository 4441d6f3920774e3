//! Computable algebra pairs `(A, B)` with `A ⊆ B`: the elements, the two
//! norms, and the approximation errors behind the approximation-space norm.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::torus::{SupOptions, TorusPolynomial};
use crate::weight::WeightFunction;

/// A member of one of the computable algebras.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "crate::io::ElementRepr", try_from = "crate::io::ElementRepr")]
pub enum AlgebraElement {
    Torus(TorusPolynomial),
    Matrix(ComplexMatrix),
}

impl AlgebraElement {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Torus(_) => "torus_poly",
            Self::Matrix(_) => "matrix",
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Torus(a), Self::Torus(b)) => Ok(Self::Torus(a.multiply(b))),
            (Self::Matrix(a), Self::Matrix(b)) => Ok(Self::Matrix(a.multiply(b)?)),
            _ => Err(Error::Structural(format!(
                "cannot multiply {} by {}",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    pub fn adjoint(&self) -> Self {
        match self {
            Self::Torus(a) => Self::Torus(a.adjoint()),
            Self::Matrix(a) => Self::Matrix(a.adjoint()),
        }
    }

    /// The unit of the algebra this element lives in.
    pub fn identity_like(&self) -> Self {
        match self {
            Self::Torus(_) => Self::Torus(TorusPolynomial::identity()),
            Self::Matrix(m) => Self::Matrix(ComplexMatrix::identity(m.dim())),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        match self {
            Self::Torus(a) => Self::Torus(a.scale(s)),
            Self::Matrix(a) => Self::Matrix(a.scale(s)),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        match self {
            Self::Torus(a) => Self::Torus(a.scale_real(s)),
            Self::Matrix(a) => Self::Matrix(a.scale_real(s)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Torus(a), Self::Torus(b)) => Ok(Self::Torus(a.add(b))),
            (Self::Matrix(a), Self::Matrix(b)) => Ok(Self::Matrix(a.add(b)?)),
            _ => Err(Error::Structural("cannot add elements of different kinds".into())),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_real(-1.0))
    }

    pub fn as_torus(&self) -> Option<&TorusPolynomial> {
        match self {
            Self::Torus(p) => Some(p),
            Self::Matrix(_) => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&ComplexMatrix> {
        match self {
            Self::Matrix(m) => Some(m),
            Self::Torus(_) => None,
        }
    }
}

impl From<TorusPolynomial> for AlgebraElement {
    fn from(p: TorusPolynomial) -> Self {
        Self::Torus(p)
    }
}

impl From<ComplexMatrix> for AlgebraElement {
    fn from(m: ComplexMatrix) -> Self {
        Self::Matrix(m)
    }
}

/// Exponent `p ∈ [1, ∞]` of the approximation-space norm. Serialized as a
/// number, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Finite(p) if !(p >= 1.0 && p.is_finite()) => {
                Err(Error::Domain(format!("exponent p must be >= 1, got {p}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(p) => s.serialize_f64(*p),
            Self::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Ok(Self::Finite(p)),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => Ok(Self::Infinity),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("invalid exponent {s:?}"))),
        }
    }
}

/// A concrete pair `(A, B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraPair {
    /// `C¹(T) ⊆ C(T)` on trigonometric polynomials.
    C1InC {
        #[serde(default = "default_oversampling")]
        oversampling: usize,
        #[serde(default = "default_refine_tol")]
        refine_tol: f64,
    },
    /// Weighted approximation space over banded matrices inside `(M_n, ‖·‖_op)`.
    ApproxSpace {
        p: Exponent,
        #[serde(default)]
        weight: WeightFunction,
        n_max: usize,
    },
    /// Wiener algebra `A(T) ⊆ C(T)` at finite degree. Not a differential
    /// pair; only the visibility search accepts it.
    Wiener {
        #[serde(default = "default_oversampling")]
        oversampling: usize,
        #[serde(default = "default_refine_tol")]
        refine_tol: f64,
    },
}

fn default_oversampling() -> usize {
    64
}

fn default_refine_tol() -> f64 {
    1e-12
}

impl AlgebraPair {
    pub fn c1() -> Self {
        Self::C1InC { oversampling: default_oversampling(), refine_tol: default_refine_tol() }
    }

    pub fn approx(p: Exponent, weight: WeightFunction, n_max: usize) -> Self {
        Self::ApproxSpace { p, weight, n_max }
    }

    /// `p = 1`, `w ≡ 1`, bands up to 16.
    pub fn approx_default() -> Self {
        Self::approx(Exponent::Finite(1.0), WeightFunction::Constant, 16)
    }

    pub fn wiener() -> Self {
        Self::Wiener { oversampling: default_oversampling(), refine_tol: default_refine_tol() }
    }

    /// Parses a preset name (`c1`, `approx`, `wiener`) or a JSON pair config.
    pub fn from_spec(text: &str) -> Result<Self> {
        match text.trim() {
            "c1" | "c1_in_c" => Ok(Self::c1()),
            "approx" | "approx_space" => Ok(Self::approx_default()),
            "wiener" => Ok(Self::wiener()),
            other => {
                let pair: Self = serde_json::from_str(other)
                    .map_err(|e| Error::Structural(format!("invalid pair config: {e}")))?;
                pair.validate()?;
                Ok(pair)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::C1InC { oversampling, refine_tol } | Self::Wiener { oversampling, refine_tol } => {
                if *oversampling < 4 || !(*refine_tol > 0.0) {
                    return Err(Error::Domain("oversampling must be >= 4 and refine_tol > 0".into()));
                }
                Ok(())
            }
            Self::ApproxSpace { p, weight, .. } => {
                p.validate()?;
                weight.validate()
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::C1InC { .. } => "c1_in_c",
            Self::ApproxSpace { .. } => "approx_space",
            Self::Wiener { .. } => "wiener",
        }
    }

    /// Whether the A-norm is a differential norm, so the bounds apply.
    pub fn is_differential(&self) -> bool {
        !matches!(self, Self::Wiener { .. })
    }

    pub fn sup_options(&self) -> SupOptions {
        match self {
            Self::C1InC { oversampling, refine_tol } | Self::Wiener { oversampling, refine_tol } => {
                SupOptions { oversampling: *oversampling, refine_tol: *refine_tol, ..SupOptions::default() }
            }
            Self::ApproxSpace { .. } => SupOptions::default(),
        }
    }

    /// Accepts the element kind this pair works on.
    pub fn check(&self, a: &AlgebraElement) -> Result<()> {
        match (self, a) {
            (Self::C1InC { .. } | Self::Wiener { .. }, AlgebraElement::Torus(_))
            | (Self::ApproxSpace { .. }, AlgebraElement::Matrix(_)) => Ok(()),
            _ => Err(Error::Structural(format!(
                "{} element does not belong to the {} pair",
                a.kind_name(),
                self.name()
            ))),
        }
    }

    pub fn identity(&self, like: &AlgebraElement) -> AlgebraElement {
        like.identity_like()
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(a)?;
        self.check(b)?;
        a.multiply(b)
    }

    /// Norm of the ambient C*-algebra: sup-norm or operator norm.
    pub fn norm_b(&self, a: &AlgebraElement) -> Result<f64> {
        self.check(a)?;
        match a {
            AlgebraElement::Torus(p) => Ok(p.sup_abs(&self.sup_options())?.value),
            AlgebraElement::Matrix(m) => m.op_norm(),
        }
    }

    /// Norm of the subalgebra.
    pub fn norm_a(&self, a: &AlgebraElement) -> Result<f64> {
        self.check(a)?;
        match (self, a) {
            (Self::C1InC { .. }, AlgebraElement::Torus(p)) => p.c1_norm(&self.sup_options()),
            (Self::Wiener { .. }, AlgebraElement::Torus(p)) => Ok(p.l1_norm()),
            (Self::ApproxSpace { p, weight, n_max }, AlgebraElement::Matrix(m)) => {
                approx_space_norm(m, *p, weight, *n_max)
            }
            _ => unreachable!("checked above"),
        }
    }

    /// Smallest singular value or `inf_t |a(t)|`; equals `1/‖a⁻¹‖_B`.
    pub fn invertibility_measure(&self, a: &AlgebraElement) -> Result<f64> {
        self.check(a)?;
        match a {
            AlgebraElement::Torus(p) => Ok(p.inf_abs(&self.sup_options())?.value),
            AlgebraElement::Matrix(m) => Ok(m.extreme_singular_values()?.0),
        }
    }
}

/// Truncation error `Ê_k(a) = ‖a − T_k(a)‖_op`, with `T_k` keeping the
/// entries with `|i − j| < k`.
pub fn approx_error(a: &ComplexMatrix, k: usize) -> Result<f64> {
    if k >= a.bandwidth() {
        return Ok(0.0);
    }
    a.sub(&a.band_truncate(k))?.op_norm()
}

/// `(Σ_{k=0}^{n_max} (Ê_k(a) w(k))^p)^{1/p}`, or the weighted max for `p = ∞`.
pub fn approx_space_norm(a: &ComplexMatrix, p: Exponent, weight: &WeightFunction, n_max: usize) -> Result<f64> {
    let bw = a.bandwidth();
    let mut terms = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max.min(bw) {
        let e = approx_error(a, k)?;
        terms.push(e * weight.value(k));
    }
    Ok(match p {
        Exponent::Infinity => terms.into_iter().fold(0.0, f64::max),
        Exponent::Finite(p) if p == 1.0 => terms.into_iter().sum(),
        Exponent::Finite(p) => terms.into_iter().map(|t| t.powf(p)).sum::<f64>().powf(1.0 / p),
    })
}
