//! Empirical certification of the differential inequality
//! `‖ab‖_A ≤ C(‖a‖_A‖b‖_B + ‖b‖_A‖a‖_B)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::error::{Error, Result};
use crate::sample::{random_pair, trial_rng, SampleConfig};

/// Largest observed Leibniz ratio over a seeded sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffNormCertificate {
    pub pair: AlgebraPair,
    pub measured_c: f64,
    /// Pairs that entered the maximum (degenerate draws excluded).
    pub sample_count: usize,
    pub skipped: usize,
    /// Trial index of the maximizing pair.
    pub worst_pair_id: u64,
    pub seed: u64,
    pub witness: Option<(AlgebraElement, AlgebraElement)>,
}

impl DiffNormCertificate {
    /// Constant usable in the bounds: the structure constant is at least 1
    /// unless the two norms are equivalent.
    pub fn certified_c(&self) -> f64 {
        self.measured_c.max(1.0)
    }
}

/// `‖ab‖_A / (‖a‖_A‖b‖_B + ‖b‖_A‖a‖_B)`, or `None` when the denominator vanishes.
pub fn leibniz_ratio(pair: &AlgebraPair, a: &AlgebraElement, b: &AlgebraElement) -> Result<Option<f64>> {
    let (na_a, nb_a) = (pair.norm_a(a)?, pair.norm_b(a)?);
    let (na_b, nb_b) = (pair.norm_a(b)?, pair.norm_b(b)?);
    let denom = na_a * nb_b + na_b * nb_a;
    if !(denom > 0.0) {
        return Ok(None);
    }
    let ab = pair.multiply(a, b)?;
    Ok(Some(pair.norm_a(&ab)? / denom))
}

/// Runs `samples` seeded random pairs through [`leibniz_ratio`].
pub fn measure_diff_constant(pair: &AlgebraPair, samples: usize, seed: u64) -> Result<DiffNormCertificate> {
    measure_diff_constant_with(pair, samples, seed, &SampleConfig::default())
}

pub fn measure_diff_constant_with(
    pair: &AlgebraPair,
    samples: usize,
    seed: u64,
    cfg: &SampleConfig,
) -> Result<DiffNormCertificate> {
    if samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    pair.validate()?;
    let results: Vec<Result<Option<(f64, AlgebraElement, AlgebraElement)>>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let (a, b) = random_pair(pair, &mut rng, cfg);
            Ok(leibniz_ratio(pair, &a, &b)?.map(|r| (r, a, b)))
        })
        .collect();
    let mut cert = DiffNormCertificate {
        pair: pair.clone(),
        measured_c: 0.0,
        sample_count: 0,
        skipped: 0,
        worst_pair_id: 0,
        seed,
        witness: None,
    };
    for (i, r) in results.into_iter().enumerate() {
        match r? {
            None => cert.skipped += 1,
            Some((ratio, a, b)) => {
                cert.sample_count += 1;
                if ratio > cert.measured_c || cert.witness.is_none() {
                    cert.measured_c = ratio;
                    cert.worst_pair_id = i as u64;
                    cert.witness = Some((a, b));
                }
            }
        }
    }
    Ok(cert)
}

/// Same maximum over an explicit list of pairs; ids are list positions.
pub fn measure_on_pairs(pair: &AlgebraPair, pairs: &[(AlgebraElement, AlgebraElement)]) -> Result<DiffNormCertificate> {
    let mut cert = DiffNormCertificate {
        pair: pair.clone(),
        measured_c: 0.0,
        sample_count: 0,
        skipped: 0,
        worst_pair_id: 0,
        seed: 0,
        witness: None,
    };
    for (i, (a, b)) in pairs.iter().enumerate() {
        match leibniz_ratio(pair, a, b)? {
            None => cert.skipped += 1,
            Some(ratio) => {
                cert.sample_count += 1;
                if ratio > cert.measured_c || cert.witness.is_none() {
                    cert.measured_c = ratio;
                    cert.worst_pair_id = i as u64;
                    cert.witness = Some((a.clone(), b.clone()));
                }
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::torus::TorusPolynomial;

    #[test]
    fn identity_pair_gives_one_half() {
        let e = AlgebraElement::Torus(TorusPolynomial::identity());
        let cert = measure_on_pairs(&AlgebraPair::c1(), &[(e.clone(), e)]).unwrap();
        assert_eq!(cert.measured_c, 0.5);
        assert_eq!(cert.certified_c(), 1.0);
    }

    #[test]
    fn zero_element_is_skipped() {
        let z = AlgebraElement::Matrix(ComplexMatrix::zeros(3));
        let cert = measure_on_pairs(&AlgebraPair::approx_default(), &[(z.clone(), z)]).unwrap();
        assert_eq!((cert.sample_count, cert.skipped), (0, 1));
    }

    #[test]
    fn leibniz_constant_for_c1() {
        let cert = measure_diff_constant(&AlgebraPair::c1(), 64, 3).unwrap();
        assert!(cert.measured_c <= 1.0 + 1e-9);
        assert!(cert.measured_c > 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let pair = AlgebraPair::approx_default();
        let a = measure_diff_constant(&pair, 16, 9).unwrap();
        let b = measure_diff_constant(&pair, 16, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.measured_c.is_finite() && a.witness.is_some());
    }
}
