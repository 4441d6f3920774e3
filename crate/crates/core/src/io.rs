//! On-disk JSON formats for algebra elements.
//!
//! ```json
//! {"type": "torus_poly", "coeffs": [[k, re, im], ...]}
//! {"type": "matrix", "n": 2, "entries": [[re, im], ...]}
//! ```
//!
//! Matrix entries are row-major; a flat `[re, im, re, im, ...]` list is
//! accepted on input as well.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::torus::TorusPolynomial;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ElementRepr {
    TorusPoly { coeffs: Vec<(i64, f64, f64)> },
    Matrix { n: usize, entries: MatrixEntries },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixEntries {
    Pairs(Vec<[f64; 2]>),
    Flat(Vec<f64>),
}

impl From<TorusPolynomial> for ElementRepr {
    fn from(p: TorusPolynomial) -> Self {
        Self::TorusPoly { coeffs: p.terms().filter(|(_, z)| z.norm() != 0.0).map(|(k, z)| (k, z.re, z.im)).collect() }
    }
}

impl From<ComplexMatrix> for ElementRepr {
    fn from(m: ComplexMatrix) -> Self {
        Self::Matrix { n: m.dim(), entries: MatrixEntries::Pairs(m.entries().iter().map(|z| [z.re, z.im]).collect()) }
    }
}

impl From<AlgebraElement> for ElementRepr {
    fn from(e: AlgebraElement) -> Self {
        match e {
            AlgebraElement::Torus(p) => p.into(),
            AlgebraElement::Matrix(m) => m.into(),
        }
    }
}

impl TryFrom<ElementRepr> for AlgebraElement {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        match r {
            ElementRepr::TorusPoly { coeffs } => {
                let pairs: Vec<(i64, Complex64)> = coeffs.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im))).collect();
                Ok(AlgebraElement::Torus(TorusPolynomial::from_pairs(&pairs)))
            }
            ElementRepr::Matrix { n, entries } => {
                let data: Vec<Complex64> = match entries {
                    MatrixEntries::Pairs(p) => p.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
                    MatrixEntries::Flat(f) => {
                        if f.len() % 2 != 0 {
                            return Err(Error::Structural("flat entry list must hold re, im pairs".into()));
                        }
                        f.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
                    }
                };
                Ok(AlgebraElement::Matrix(ComplexMatrix::from_row_major(n, data)?))
            }
        }
    }
}

impl TryFrom<ElementRepr> for TorusPolynomial {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        match AlgebraElement::try_from(r)? {
            AlgebraElement::Torus(p) => Ok(p),
            AlgebraElement::Matrix(_) => Err(Error::Structural("expected a torus_poly element".into())),
        }
    }
}

impl TryFrom<ElementRepr> for ComplexMatrix {
    type Error = Error;
    fn try_from(r: ElementRepr) -> Result<Self> {
        match AlgebraElement::try_from(r)? {
            AlgebraElement::Matrix(m) => Ok(m),
            AlgebraElement::Torus(_) => Err(Error::Structural("expected a matrix element".into())),
        }
    }
}

pub fn element_from_json(text: &str) -> Result<AlgebraElement> {
    serde_json::from_str(text).map_err(|e| Error::Structural(format!("invalid element JSON: {e}")))
}

pub fn element_to_json(e: &AlgebraElement) -> String {
    serde_json::to_string(e).expect("element serialization is infallible")
}

pub fn read_element(path: &Path) -> Result<AlgebraElement> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Structural(format!("cannot read {}: {e}", path.display())))?;
    element_from_json(&text)
}
