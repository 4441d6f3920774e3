use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use normctl_core::algebra::{AlgebraElement, AlgebraPair};
use normctl_core::bounds;
use normctl_core::cases;
use normctl_core::diffnorm::measure_diff_constant_with;
use normctl_core::io::read_element;
use normctl_core::sample::SampleConfig;
use normctl_core::sweep::{self, resolve_structure_constant, SweepConfig, SweepGrid};
use normctl_core::visibility::{self, Rect};
use normctl_core::Error;
use serde::Serialize;

use crate::{CaseCommand, Common};

/// Bad invocation or configuration; maps to exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    let is_usage = e.chain().any(|c| {
        c.downcast_ref::<UsageError>().is_some() || matches!(c.downcast_ref::<Error>(), Some(Error::Structural(_)))
    });
    if is_usage {
        2
    } else {
        1
    }
}

pub fn configure_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("NORMCTL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("NORMCTL_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    Ok(())
}

fn parse_pair(spec: Option<&str>, default: AlgebraPair) -> anyhow::Result<AlgebraPair> {
    let Some(spec) = spec else {
        return Ok(default);
    };
    let text = if Path::new(spec).is_file() {
        std::fs::read_to_string(spec).map_err(|e| usage(format!("cannot read pair config {spec}: {e}")))?
    } else {
        spec.to_string()
    };
    AlgebraPair::from_spec(&text).map_err(|e| usage(format!("pair config: {e}")))
}

/// Pair for an element: the explicit one, else the natural pair of its kind.
fn pair_for(spec: Option<&str>, a: &AlgebraElement) -> anyhow::Result<AlgebraPair> {
    let default = match a {
        AlgebraElement::Torus(_) => AlgebraPair::c1(),
        AlgebraElement::Matrix(_) => AlgebraPair::approx_default(),
    };
    let pair = parse_pair(spec, default)?;
    pair.check(a)?;
    Ok(pair)
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn write_json(out: Option<&Path>, value: &impl Serialize) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_output(out, text.as_bytes())
}

fn check_tol(tol: f64) -> anyhow::Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

pub fn verify_diffnorm(common: &Common, samples: usize, max_degree: usize) -> anyhow::Result<()> {
    let pair = parse_pair(common.pair.as_deref(), AlgebraPair::c1())?;
    if samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let cfg = SampleConfig { max_degree, ..SampleConfig::default() };
    let cert = measure_diff_constant_with(&pair, samples, common.seed, &cfg)?;
    write_json(common.out.as_deref(), &cert)
}

pub fn invert(
    element: &Path,
    common: &Common,
    tol: f64,
    kmax: u64,
    structure_constant: Option<f64>,
    emit: Option<&Path>,
) -> anyhow::Result<()> {
    check_tol(tol)?;
    let a = read_element(element)?;
    let pair = pair_for(common.pair.as_deref(), &a)?;
    if !pair.is_differential() {
        return Err(usage(format!("pair {} has no differential norm; bounds do not apply", pair.name())));
    }
    if structure_constant.is_some_and(|c| !(c >= 1.0)) {
        return Err(usage("--structure-constant must be at least 1"));
    }
    let c_struct = resolve_structure_constant(&pair, structure_constant, common.seed)?;
    let (_, report) = sweep::inversion_row(&pair, &a, c_struct, tol, kmax)?;
    let measured = report.measured.expect("inversion reports carry the measurement");
    let dominated = measured.ln() <= report.product_bound_ln + 1e-12 * report.product_bound_ln.abs().max(1.0);
    write_json(emit.or(common.out.as_deref()), &report)?;
    eprintln!(
        "normctl: kappa = {:.6}, measured = {measured:.6e}, ln product bound = {:.6}, dominated = {dominated}",
        report.kappa, report.product_bound_ln
    );
    if !dominated {
        bail!("measured inverse norm exceeds the series bound");
    }
    Ok(())
}

pub fn bound(na: f64, nb: f64, nbinv: f64, c_struct: f64, out: Option<&Path>) -> anyhow::Result<()> {
    if !(na > 0.0 && nb > 0.0 && nbinv > 0.0) || !(na >= nb) {
        return Err(usage("norms must be positive with --norm-a >= --norm-b"));
    }
    let report = bounds::bound_report(na, nb, nbinv, c_struct, None)?;
    write_json(out, &report)
}

pub fn sweep(config: &Path, out: Option<&Path>, seed: Option<u64>, tol: Option<f64>) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(config).map_err(|e| usage(format!("cannot read {}: {e}", config.display())))?;
    let mut cfg = SweepConfig::from_json(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = tol {
        cfg.tolerance = t;
    }
    cfg.validate()?;
    // element files and the output path are relative to the config file
    let base = config.parent().map(Path::to_path_buf).unwrap_or_default();
    let elements = match &cfg.grid {
        SweepGrid::Inversion { elements, .. } => {
            elements.iter().map(|p| read_element(&base.join(p))).collect::<normctl_core::Result<Vec<_>>>()?
        }
        SweepGrid::ProductGrid { .. } => Vec::new(),
    };
    let rows = sweep::run_sweep(&cfg, &elements)?;
    let mut buf = Vec::new();
    sweep::write_csv(&rows, &mut buf)?;
    let target: Option<PathBuf> = out.map(Path::to_path_buf).or_else(|| cfg.output.as_ref().map(|o| base.join(o)));
    write_output(target.as_deref(), &buf)?;
    let flagged = rows.iter().filter(|r| r.status != "ok").count();
    if flagged > 0 {
        eprintln!("normctl: {flagged} of {} rows flagged", rows.len());
    }
    Ok(())
}

pub fn visibility(common: &Common, delta: f64, trials: usize) -> anyhow::Result<()> {
    let pair = parse_pair(common.pair.as_deref(), AlgebraPair::wiener())?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(usage(format!("--delta must lie in (0, 1), got {delta}")));
    }
    let est = visibility::phi_lower_bound(&pair, delta, trials, common.seed)?;
    write_json(common.out.as_deref(), &est)
}

pub fn pseudospectrum(
    element: &Path,
    delta: f64,
    grid: usize,
    rect: Option<&[f64]>,
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let a = read_element(element)?;
    let m = a.as_matrix().ok_or_else(|| usage("pseudospectra need a matrix element"))?;
    if grid < 2 {
        return Err(usage("--grid must be at least 2"));
    }
    if !(delta > 0.0) {
        return Err(usage("--delta must be positive"));
    }
    let rect = match rect {
        Some(&[re_min, re_max, im_min, im_max]) if re_min < re_max && im_min < im_max => {
            Rect { re_min, re_max, im_min, im_max }
        }
        Some(_) => return Err(usage("--rect needs four values re_min,re_max,im_min,im_max with min < max")),
        None => {
            let r = m.op_norm()? + delta;
            Rect { re_min: -r, re_max: r, im_min: -r, im_max: r }
        }
    };
    let g = visibility::pseudospectrum(m, rect, grid, delta)?;
    let mut buf = Vec::new();
    g.write_csv(&mut buf)?;
    write_output(out, &buf)
}

fn torus_element(path: &Path) -> anyhow::Result<normctl_core::TorusPolynomial> {
    match read_element(path)? {
        AlgebraElement::Torus(t) => Ok(t),
        AlgebraElement::Matrix(_) => Err(usage("this case needs a torus_poly element")),
    }
}

pub fn cases(cmd: CaseCommand) -> anyhow::Result<()> {
    match cmd {
        CaseCommand::Quotient { element, out } => {
            let f = torus_element(&element)?;
            write_json(out.as_deref(), &cases::quotient_rule_check(&f)?)
        }
        CaseCommand::AnFamily { n_max, out } => {
            if n_max == 0 {
                return Err(usage("--n-max must be positive"));
            }
            let reports = (1..=n_max).map(cases::an_family_report).collect::<normctl_core::Result<Vec<_>>>()?;
            write_json(out.as_deref(), &reports)
        }
        CaseCommand::Baskakov { element, tol, kmax, out } => {
            check_tol(tol)?;
            let a = torus_element(&element)?;
            write_json(out.as_deref(), &cases::baskakov_bound(&a, tol, kmax)?)
        }
        CaseCommand::Sun { common, theta, samples } => {
            let pair = parse_pair(common.pair.as_deref(), AlgebraPair::c1())?;
            let cfg = cases::SunCheckConfig { theta, samples, seed: common.seed };
            cfg.validate().map_err(|e| anyhow!(UsageError(e.to_string())))?;
            write_json(common.out.as_deref(), &cases::sun_theta_check(&pair, &cfg)?)
        }
    }
}
