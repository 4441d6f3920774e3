//! Batch experiments over parameter grids, emitted as CSV rows in grid order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraPair};
use crate::bounds::{self, BoundInputs, PRODUCT_EPS};
use crate::diffnorm::measure_diff_constant;
use crate::error::{Error, Result};
use crate::inversion::neumann_invert;
use crate::sample::{element_with_condition, trial_rng, SampleConfig};

pub const CSV_HEADER: [&str; 11] = [
    "u",
    "v",
    "c",
    "xi",
    "M",
    "product_bound_ln",
    "branch",
    "asymptotic_bound_ln",
    "measured_ln",
    "refinement_ratio_ln",
    "status",
];

/// Samples used to certify the structure constant when none is given.
pub const CERTIFY_SAMPLES: usize = 256;

fn default_tolerance() -> f64 {
    1e-10
}

fn default_k_max() -> u64 {
    1_000_000
}

fn default_samples() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepGrid {
    /// Product `f(u, v, c)` against its closed-form estimate on `u × ξ × c`.
    ProductGrid { u: Vec<f64>, xi: Vec<f64>, c: Vec<f64> },
    /// Inversion experiments on seeded elements of prescribed condition number
    /// followed by any explicitly listed element files.
    Inversion {
        pair: AlgebraPair,
        #[serde(default)]
        kappa: Vec<f64>,
        #[serde(default = "default_samples")]
        samples_per_kappa: usize,
        #[serde(default)]
        elements: Vec<String>,
        #[serde(default)]
        structure_constant: Option<f64>,
        #[serde(default = "default_k_max")]
        k_max: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: SweepGrid,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub output: Option<String>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Structural(format!("sweep config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::Structural(format!("tolerance must lie in (0, 1), got {}", self.tolerance)));
        }
        match &self.grid {
            SweepGrid::ProductGrid { u, xi, c } => {
                if u.is_empty() || xi.is_empty() || c.is_empty() {
                    return Err(Error::Structural("product_grid grid needs nonempty u, xi and c lists".into()));
                }
            }
            SweepGrid::Inversion { pair, kappa, elements, samples_per_kappa, .. } => {
                pair.validate()?;
                if !pair.is_differential() {
                    return Err(Error::Structural(format!("pair {} has no differential norm", pair.name())));
                }
                if kappa.is_empty() && elements.is_empty() {
                    return Err(Error::Structural("inversion grid needs kappa values or element files".into()));
                }
                if !kappa.is_empty() && *samples_per_kappa == 0 {
                    return Err(Error::Structural("samples_per_kappa must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// One CSV line; `None` prints as an empty field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub u: f64,
    pub v: f64,
    pub c: f64,
    pub xi: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<i64>,
    pub product_bound_ln: f64,
    pub branch: Option<bounds::Branch>,
    pub asymptotic_bound_ln: Option<f64>,
    pub measured_ln: Option<f64>,
    pub refinement_ratio_ln: Option<f64>,
    /// `ok`, `proof_variant` (only the alternative constants dominate) or `violation`.
    pub status: String,
}

impl SweepRow {
    fn fields(&self) -> [String; 11] {
        let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        [
            self.u.to_string(),
            self.v.to_string(),
            self.c.to_string(),
            f(self.xi),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.product_bound_ln.to_string(),
            self.branch.map(|b| b.as_str().to_string()).unwrap_or_default(),
            f(self.asymptotic_bound_ln),
            f(self.measured_ln),
            f(self.refinement_ratio_ln),
            self.status.clone(),
        ]
    }
}

fn product_grid_row(u: f64, xi: f64, c: f64) -> Result<SweepRow> {
    let inputs = BoundInputs::from_xi(u, xi, c)?;
    let product = bounds::product_f_ln(&inputs, PRODUCT_EPS)?;
    let asf = bounds::asf_bound(&inputs)?;
    let status = if product <= asf.ln_value {
        "ok"
    } else if product <= asf.ln_proof_variant {
        "proof_variant"
    } else {
        "violation"
    };
    Ok(SweepRow {
        u,
        v: inputs.v,
        c,
        xi: Some(xi),
        m: Some(bounds::cutoff_m(&inputs)?),
        product_bound_ln: product,
        branch: Some(asf.branch),
        asymptotic_bound_ln: Some(asf.ln_value),
        measured_ln: None,
        refinement_ratio_ln: None,
        status: status.into(),
    })
}

/// Row of one inversion experiment, together with its full report.
pub fn inversion_row(
    pair: &AlgebraPair,
    a: &AlgebraElement,
    c_struct: f64,
    tol: f64,
    k_max: u64,
) -> Result<(SweepRow, bounds::BoundReport)> {
    let inv = neumann_invert(pair, a, tol, k_max)?;
    let report = bounds::bound_report(inv.norm_a, inv.norm_b, inv.norm_b_inverse, c_struct, Some(inv.norm_a_inverse))?;
    let measured_ln = inv.norm_a_inverse.ln();
    let refinement = report.asymptotic_bound_ln.map(|_| {
        let k = bounds::AsymptoticConstants::new(2.0 * c_struct).expect("u > 1 when C >= 1");
        bounds::refinement_ratio_ln(measured_ln, inv.norm_a.ln() - 2.0 * inv.norm_b.ln(), report.kappa, k.gamma2)
    });
    // relative slack for the last bits of the log-space product
    let status = if measured_ln <= report.product_bound_ln + 1e-12 * report.product_bound_ln.abs().max(1.0) {
        "ok"
    } else {
        "violation"
    };
    let row = SweepRow {
        u: report.inputs.u,
        v: report.inputs.v,
        c: report.inputs.c,
        xi: report.xi,
        m: report.m,
        product_bound_ln: report.product_bound_ln,
        branch: report.branch,
        asymptotic_bound_ln: report.asymptotic_bound_ln,
        measured_ln: Some(measured_ln),
        refinement_ratio_ln: refinement,
        status: status.into(),
    };
    Ok((row, report))
}

/// Structure constant used for bounds: the configured one, or a seeded certificate.
pub fn resolve_structure_constant(pair: &AlgebraPair, given: Option<f64>, seed: u64) -> Result<f64> {
    match given {
        Some(c) if c >= 1.0 => Ok(c),
        Some(c) => Err(Error::Domain(format!("structure constant must be >= 1, got {c}"))),
        None => Ok(measure_diff_constant(pair, CERTIFY_SAMPLES, seed)?.certified_c()),
    }
}

/// Evaluates every grid point; `elements` are the decoded element files, in
/// the order listed in the config.
pub fn run_sweep(config: &SweepConfig, elements: &[AlgebraElement]) -> Result<Vec<SweepRow>> {
    config.validate()?;
    match &config.grid {
        SweepGrid::ProductGrid { u, xi, c } => {
            let points: Vec<(f64, f64, f64)> = u
                .iter()
                .flat_map(|&u| xi.iter().flat_map(move |&x| c.iter().map(move |&c| (u, x, c))))
                .collect();
            points.par_iter().map(|&(u, x, c)| product_grid_row(u, x, c)).collect()
        }
        SweepGrid::Inversion { pair, kappa, samples_per_kappa, structure_constant, k_max, .. } => {
            let c_struct = resolve_structure_constant(pair, *structure_constant, config.seed)?;
            let cfg = SampleConfig::default();
            let seeded: Vec<(u64, f64)> = kappa
                .iter()
                .flat_map(|&k| (0..*samples_per_kappa).map(move |_| k))
                .enumerate()
                .map(|(i, k)| (i as u64, k))
                .collect();
            let mut rows: Vec<SweepRow> = seeded
                .par_iter()
                .map(|&(i, k)| {
                    let a = element_with_condition(pair, &mut trial_rng(config.seed, i), k, &cfg)?;
                    Ok(inversion_row(pair, &a, c_struct, config.tolerance, *k_max)?.0)
                })
                .collect::<Result<_>>()?;
            let listed: Vec<SweepRow> = elements
                .par_iter()
                .map(|a| Ok(inversion_row(pair, a, c_struct, config.tolerance, *k_max)?.0))
                .collect::<Result<_>>()?;
            rows.extend(listed);
            Ok(rows)
        }
    }
}

pub fn write_csv(rows: &[SweepRow], w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Numeric(format!("csv output: {e}"));
    out.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        out.write_record(r.fields()).map_err(io)?;
    }
    out.flush().map_err(|e| Error::Numeric(format!("csv output: {e}")))?;
    Ok(())
}
