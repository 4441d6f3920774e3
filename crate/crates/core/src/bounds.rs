//! Explicit bounds on `‖a⁻¹‖_A`: the infinite product
//! `f(u, v, c) = Π_{k≥0} (1 + c u^k v^{2^k})`, its cutoff analysis, and the
//! asymptotic two-branch estimate. Everything that can overflow is carried
//! in log space.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `K = (ln 2 − 1/2)⁻¹`.
pub const K_CONST: f64 = 1.0 / (LN_2 - 0.5);

/// Condition numbers from this value on admit the asymptotic estimate.
pub const KAPPA_MIN: f64 = 5.0;

/// Relative accuracy of the product evaluation used by the reports.
pub const PRODUCT_EPS: f64 = 1e-14;

/// `ln(1 + e^t)` without overflow.
fn ln1p_exp(t: f64) -> f64 {
    if t > 36.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Parameters of `f(u, v, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// `2C`.
    pub u: f64,
    /// `1 − κ⁻²`.
    pub v: f64,
    /// `2 (‖a‖_A/‖a‖_B)² / v`.
    pub c: f64,
}

impl BoundInputs {
    pub fn new(u: f64, v: f64, c: f64) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) || !(v >= 0.0) || !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("invalid product parameters u={u}, v={v}, c={c}")));
        }
        Ok(Self { u, v, c })
    }

    /// `v = exp(−ln u · 2^{−ξ})`, so that `ln u / ln v⁻¹ = 2^ξ`.
    pub fn from_xi(u: f64, xi: f64, c: f64) -> Result<Self> {
        if !(u > 1.0) {
            return Err(Error::Domain(format!("u must exceed 1, got {u}")));
        }
        Self::new(u, (-u.ln() * (-xi).exp2()).exp(), c)
    }

    /// Inputs derived from the three norms and the structure constant.
    pub fn from_norms(norm_a: f64, norm_b: f64, norm_b_inverse: f64, c_struct: f64) -> Result<Self> {
        let kappa = checked_kappa(norm_b, norm_b_inverse)?;
        let v = 1.0 - 1.0 / (kappa * kappa);
        let ratio = norm_a / norm_b;
        let c = if v == 0.0 { 0.0 } else { 2.0 * ratio * ratio / v };
        Self::new(2.0 * c_struct, v, c)
    }

    /// `ln v⁻¹`.
    pub fn ln_v_inv(&self) -> f64 {
        -self.v.ln()
    }

    /// `ln(c u^k v^{2^k})`.
    pub fn ln_term(&self, k: u32) -> f64 {
        self.c.ln() + k as f64 * self.u.ln() + (k as f64).exp2() * self.v.ln()
    }

    /// `1 + c u^k v^{2^k}`.
    pub fn factor(&self, k: u32) -> f64 {
        1.0 + self.ln_term(k).exp()
    }

    /// `ln(1 + c u^k v^{2^k})` without overflow.
    pub fn factor_ln(&self, k: u32) -> f64 {
        ln1p_exp(self.ln_term(k))
    }
}

fn checked_kappa(norm_b: f64, norm_b_inverse: f64) -> Result<f64> {
    let kappa = norm_b * norm_b_inverse;
    if !(norm_b > 0.0) || !(kappa >= 1.0 - 1e-12) {
        return Err(Error::Domain(format!("condition number must be >= 1, got {kappa}")));
    }
    Ok(kappa.max(1.0))
}

/// `ln f(u, v, c)` to relative accuracy `eps` in `f`.
pub fn product_f_ln(inputs: &BoundInputs, eps: f64) -> Result<f64> {
    if inputs.v >= 1.0 {
        return Err(Error::Divergence(inputs.v));
    }
    if inputs.c == 0.0 || inputs.v == 0.0 {
        return Ok(0.0);
    }
    let (lnu, lnv) = (inputs.u.ln(), inputs.v.ln());
    let mut sum = 0.0;
    for k in 0..4096u32 {
        let t = inputs.ln_term(k);
        sum += ln1p_exp(t);
        // ln of the ratio between terms k+1 and k; decreasing in k
        let ln_ratio = lnu + (k as f64).exp2() * lnv;
        if ln_ratio < -LN_2 {
            let tail = 2.0 * (t + ln_ratio).exp();
            if tail < eps {
                return Ok(sum);
            }
        }
    }
    Err(Error::Numeric("product did not reach its tail tolerance".into()))
}

pub fn product_f(inputs: &BoundInputs, eps: f64) -> Result<f64> {
    Ok(product_f_ln(inputs, eps)?.exp())
}

/// `Σ_{k ≥ from} ln(1 + c u^k v^{2^k})`.
pub fn tail_product_ln(inputs: &BoundInputs, from: u32) -> Result<f64> {
    if inputs.v >= 1.0 {
        return Err(Error::Divergence(inputs.v));
    }
    if inputs.c == 0.0 || inputs.v == 0.0 {
        return Ok(0.0);
    }
    let (lnu, lnv) = (inputs.u.ln(), inputs.v.ln());
    let mut sum = 0.0;
    for k in from..from + 4096 {
        let t = inputs.ln_term(k);
        sum += ln1p_exp(t);
        let ln_ratio = lnu + (k as f64).exp2() * lnv;
        if ln_ratio < -LN_2 && 2.0 * (t + ln_ratio).exp() < 1e-16 * sum.max(1e-300) {
            return Ok(sum);
        }
        if t < -745.0 && ln_ratio < 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::Numeric("tail product did not converge".into()))
}

/// Inverse-norm bound of the series construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NcicstarBound {
    pub inputs: BoundInputs,
    /// `ln(‖a‖_A/‖a‖_B²)`.
    pub prefactor_ln: f64,
    /// `ln` of the bound with `‖e − b‖_A ≤ 2(‖a‖_A/‖a‖_B)²`.
    pub standard_ln: f64,
    /// `ln` of the bound with `‖e − b‖_A ≤ (1 + 2C)‖a‖_A/‖a‖_B`, when that is smaller.
    pub tightened_ln: Option<f64>,
    /// The smaller of the two.
    pub ln_value: f64,
}

impl NcicstarBound {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    pub fn tightened(&self) -> bool {
        self.tightened_ln.is_some()
    }
}

/// `‖a⁻¹‖_A ≤ (‖a‖_A/‖a‖_B²) Π_k (1 + 2(‖a‖_A/‖a‖_B)² (2C)^k (1 − κ⁻²)^{2^k − 1})`.
///
/// For `κ = 1` the element `c = e − b` vanishes and the product is 1.
pub fn ncicstar_bound(norm_a: f64, norm_b: f64, norm_b_inverse: f64, c_struct: f64) -> Result<NcicstarBound> {
    if !(c_struct >= 1.0) {
        return Err(Error::Domain(format!("structure constant must be >= 1, got {c_struct}")));
    }
    let inputs = BoundInputs::from_norms(norm_a, norm_b, norm_b_inverse, c_struct)?;
    let prefactor_ln = norm_a.ln() - 2.0 * norm_b.ln();
    let standard_ln = prefactor_ln + product_f_ln(&inputs, PRODUCT_EPS)?;
    let ratio = norm_a / norm_b;
    let tightened_ln = if ratio >= 0.5 + c_struct && inputs.v > 0.0 {
        let t = BoundInputs { c: (1.0 + 2.0 * c_struct) * ratio / inputs.v, ..inputs };
        let ln = prefactor_ln + product_f_ln(&t, PRODUCT_EPS)?;
        (ln < standard_ln).then_some(ln)
    } else {
        None
    };
    Ok(NcicstarBound { inputs, prefactor_ln, standard_ln, tightened_ln, ln_value: tightened_ln.unwrap_or(standard_ln) })
}

/// `ξ = log₂(ln u / ln v⁻¹)`.
pub fn xi(u: f64, v: f64) -> Result<f64> {
    if !(u > 1.0) || !(v > 0.0 && v < 1.0) {
        return Err(Error::Domain(format!("xi needs u > 1 and 0 < v < 1, got u={u}, v={v}")));
    }
    Ok((u.ln() / -v.ln()).log2())
}

/// `|v^{2^ξ} u − 1|`, which vanishes identically.
pub fn xi_identity_residual(u: f64, v: f64) -> Result<f64> {
    let x = xi(u, v)?;
    Ok(((x.exp2() * v.ln() + u.ln()).exp() - 1.0).abs())
}

/// `ln(1 + c u^ξ)`, dominating every factor of the product.
pub fn max_factor_bound_ln(inputs: &BoundInputs) -> f64 {
    if inputs.c == 0.0 {
        return 0.0;
    }
    let lnu = inputs.u.ln();
    let scaled = if inputs.v == 0.0 || lnu == 0.0 {
        // u^ξ → 0 as v → 0 for u > 1; u = 1 gives 1
        if lnu == 0.0 { 0.0 } else { f64::NEG_INFINITY }
    } else {
        (lnu / inputs.ln_v_inv()).log2() * lnu
    };
    ln1p_exp(inputs.c.ln() + scaled)
}

/// `1 + c u^ξ`.
pub fn max_factor_bound(inputs: &BoundInputs) -> Result<f64> {
    if !(inputs.u >= 1.0) || !(inputs.v < 1.0) {
        return Err(Error::Domain("max factor bound needs u >= 1 and v < 1".into()));
    }
    Ok(max_factor_bound_ln(inputs).exp())
}

fn require_xi_at_least_4(inputs: &BoundInputs) -> Result<f64> {
    let x = xi(inputs.u, inputs.v)?;
    if x < 4.0 - 1e-12 {
        return Err(Error::Domain(format!(
            "ln u / ln v⁻¹ = {:.6} < 16 (xi = {x:.6} < 4); use the exact product instead",
            x.exp2()
        )));
    }
    Ok(x)
}

/// `ξ + 2 log₂ max(ξ, ln(Kc)/ln u)`, the quantity bracketed by `M + 1` and `M + 2`.
pub fn cutoff_target(inputs: &BoundInputs) -> Result<f64> {
    let x = require_xi_at_least_4(inputs)?;
    let r = (K_CONST * inputs.c).ln() / inputs.u.ln();
    Ok(x + 2.0 * x.max(r).log2())
}

/// Integer `M` with `M + 1 ≤ ξ + 2 log₂ max(ξ, ln(Kc)/ln u) ≤ M + 2`; the
/// larger choice when both fit.
pub fn cutoff_m(inputs: &BoundInputs) -> Result<i64> {
    Ok(cutoff_target(inputs)?.floor() as i64 - 1)
}

/// `2^M ln v⁻¹ − M ln u − ln(Kc)`; nonnegative exactly when the tail
/// estimate `K c u^M e^{−2^M ln v⁻¹} ≤ 1` holds.
pub fn cutoff_margin(inputs: &BoundInputs, m: i64) -> f64 {
    (m as f64).exp2() * inputs.ln_v_inv() - m as f64 * inputs.u.ln() - (K_CONST * inputs.c).ln()
}

/// `x^{a−1} e^{−x} / (1 − 1/ln 4)`, an upper bound for `Γ(a, x)` when
/// `(a − 1)/x ≤ 1/ln 4`.
pub fn gamma_tail_estimate(a: f64, x: f64) -> Result<f64> {
    if !(a >= 1.0) || !(x > 0.0) || x < 2.0 * (a - 1.0) {
        return Err(Error::Domain(format!("gamma tail estimate needs a >= 1, x > 0, x >= 2(a-1); got a={a}, x={x}")));
    }
    Ok(((a - 1.0) * x.ln() - x).exp() / (1.0 - 1.0 / 4f64.ln()))
}

/// Which term of the two-branch estimate is in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ConditionDominated,
    RatioDominated,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ConditionDominated => "condition_dominated",
            Self::RatioDominated => "ratio_dominated",
        }
    }
}

/// Closed-form upper estimate of `f(u, v, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsfBound {
    pub branch: Branch,
    pub ln_value: f64,
    /// Second branch with the constants `(4 ln²K/ln u, 8/ln u)` in place of
    /// `(8 ln²K/ln u, 4/ln u)`; equals `ln_value` on the first branch.
    pub ln_proof_variant: f64,
    /// First-branch expression, evaluated regardless of the branch taken.
    pub ln_condition_expr: f64,
    /// Second-branch expression, evaluated regardless of the branch taken.
    pub ln_ratio_expr: f64,
}

/// Two-branch estimate of `f(u, v, c)`, valid for `ln u / ln v⁻¹ ≥ 16` and `c ≥ 1`.
pub fn asf_bound(inputs: &BoundInputs) -> Result<AsfBound> {
    let x = require_xi_at_least_4(inputs)?;
    if !(inputs.c >= 1.0) {
        return Err(Error::Domain(format!("asymptotic estimate needs c >= 1, got {}", inputs.c)));
    }
    let lnu = inputs.u.ln();
    let ln2sq = LN_2 * LN_2;
    let lnk = K_CONST.ln();
    let lnc = inputs.c.ln();
    let ln_condition_expr = 1.0
        + 8.0 * lnu * lnu.ln().powi(2) / ln2sq
        + 8.0 * lnu / ln2sq * (1.0 / inputs.ln_v_inv()).ln().powi(2);
    let ln_ratio_expr = 1.0 + 8.0 * lnk * lnk / lnu + 4.0 / lnu * lnc * lnc;
    let ln_ratio_variant = 1.0 + 4.0 * lnk * lnk / lnu + 8.0 / lnu * lnc * lnc;
    // ln u/ln v⁻¹ ≥ (Kc)^{ln 2/ln u}  ⇔  ξ ≥ ln(Kc)/ln u
    let branch = if x >= (K_CONST * inputs.c).ln() / lnu { Branch::ConditionDominated } else { Branch::RatioDominated };
    let (ln_value, ln_proof_variant) = match branch {
        Branch::ConditionDominated => (ln_condition_expr, ln_condition_expr),
        Branch::RatioDominated => (ln_ratio_expr, ln_ratio_variant),
    };
    Ok(AsfBound { branch, ln_value, ln_proof_variant, ln_condition_expr, ln_ratio_expr })
}

/// Constants of the asymptotic estimate; all functions of `u = 2C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants {
    pub u: f64,
    pub k: f64,
    pub ln_gamma1: f64,
    pub gamma2: f64,
    pub ln_gamma3: f64,
    pub gamma4: f64,
}

impl AsymptoticConstants {
    pub fn new(u: f64) -> Result<Self> {
        if !(u > 1.0) {
            return Err(Error::Domain(format!("u must exceed 1, got {u}")));
        }
        let lnu = u.ln();
        let ln2sq = LN_2 * LN_2;
        let lnk = K_CONST.ln();
        Ok(Self {
            u,
            k: K_CONST,
            ln_gamma1: 1.0 + 8.0 * lnu * lnu.ln().powi(2) / ln2sq,
            gamma2: 16.0 * lnu / ln2sq,
            ln_gamma3: 1.0 + 8.0 * lnk * lnk / lnu,
            gamma4: 4.0 / lnu,
        })
    }

    pub fn gamma1(&self) -> f64 {
        self.ln_gamma1.exp()
    }

    pub fn gamma3(&self) -> f64 {
        self.ln_gamma3.exp()
    }

    /// `4γ₂`: the exponent constant when the first branch is written with `ln²κ`.
    pub fn gamma2_prime(&self) -> f64 {
        4.0 * self.gamma2
    }
}

/// `(1 − u^{−1/16})^{−1/2}`: below this condition number the asymptotic
/// estimate does not apply.
pub fn kappa_threshold(u: f64) -> f64 {
    (1.0 - u.powf(-1.0 / 16.0)).powf(-0.5)
}

/// Evaluation of the two-branch asymptotic estimate on concrete norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem41Bound {
    pub constants: AsymptoticConstants,
    pub kappa: f64,
    pub embedding_ratio: f64,
    pub prefactor_ln: f64,
    /// `ln(γ₁ ‖a‖_A/‖a‖_B² e^{γ₂ ln²(κ²)})`.
    pub branch1_ln: f64,
    /// `ln(γ₃ ‖a‖_A/‖a‖_B² e^{γ₄ ln²(2u^{16}(‖a‖_A/‖a‖_B)²)})`.
    pub branch2_ln: f64,
    pub ln_value: f64,
    pub branch: Branch,
    /// `κ² ≥ (ln u)⁻¹ (10 (‖a‖_A/‖a‖_B)²)^{ln 2/ln u}`: the first branch alone suffices.
    pub first_branch_sufficient: bool,
}

pub fn theorem41_bound(norm_a: f64, norm_b: f64, norm_b_inverse: f64, c_struct: f64) -> Result<Theorem41Bound> {
    if !(c_struct >= 1.0) {
        return Err(Error::Domain(format!("structure constant must be >= 1, got {c_struct}")));
    }
    let kappa = checked_kappa(norm_b, norm_b_inverse)?;
    if kappa < KAPPA_MIN {
        return Err(Error::Domain(format!("asymptotic estimate needs kappa >= {KAPPA_MIN}, got {kappa}")));
    }
    let u = 2.0 * c_struct;
    let constants = AsymptoticConstants::new(u)?;
    let ratio = norm_a / norm_b;
    let prefactor_ln = norm_a.ln() - 2.0 * norm_b.ln();
    let branch1_ln = constants.ln_gamma1 + prefactor_ln + constants.gamma2 * (kappa * kappa).ln().powi(2);
    let arg_ln = 2f64.ln() + 16.0 * u.ln() + 2.0 * ratio.ln();
    let branch2_ln = constants.ln_gamma3 + prefactor_ln + constants.gamma4 * arg_ln * arg_ln;
    let (ln_value, branch) = if branch1_ln >= branch2_ln {
        (branch1_ln, Branch::ConditionDominated)
    } else {
        (branch2_ln, Branch::RatioDominated)
    };
    let first_branch_sufficient =
        2.0 * kappa.ln() >= -u.ln().ln() + LN_2 / u.ln() * (10.0 * ratio * ratio).ln();
    Ok(Theorem41Bound {
        constants,
        kappa,
        embedding_ratio: ratio,
        prefactor_ln,
        branch1_ln,
        branch2_ln,
        ln_value,
        branch,
        first_branch_sufficient,
    })
}

/// Constants of `h(x, y) = C₁ x y² e^{C₂ ln²(xy)}`; `C₁` in log form since
/// it overflows already at `u = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryConstants {
    pub ln_c1: f64,
    pub c2: f64,
}

impl CorollaryConstants {
    /// `C₁ = max(γ₁, γ₃ e^{2γ₄ ln²(2u^{16})})`, `C₂ = max(4γ₂, 8γ₄)`.
    pub fn from_asymptotic(k: &AsymptoticConstants) -> Self {
        let l = 2f64.ln() + 16.0 * k.u.ln();
        Self {
            ln_c1: k.ln_gamma1.max(k.ln_gamma3 + 2.0 * k.gamma4 * l * l),
            c2: (4.0 * k.gamma2).max(8.0 * k.gamma4),
        }
    }
}

/// `ln h(x, y) = ln C₁ + ln x + 2 ln y + C₂ ln²(xy)`.
pub fn corollary_h_ln(x: f64, y: f64, ln_c1: f64, c2: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) || x * y < 1.0 {
        return Err(Error::Domain(format!("h needs x, y > 0 and xy >= 1, got x={x}, y={y}")));
    }
    Ok(ln_c1 + x.ln() + 2.0 * y.ln() + c2 * (x * y).ln().powi(2))
}

pub fn corollary_h(x: f64, y: f64, c1: f64, c2: f64) -> Result<f64> {
    if !(c1 > 0.0) {
        return Err(Error::Domain("C1 must be positive".into()));
    }
    Ok(corollary_h_ln(x, y, c1.ln(), c2)?.exp())
}

/// `ln Π_k ((‖c‖_A/‖c‖_B)(2C)^k ‖c‖_B^{2^k})^{ε_k}` over the binary digits `ε_k` of `n`.
pub fn dyadic_power_bound_ln(ratio: f64, c_struct: f64, norm_b_c: f64, n: u64) -> f64 {
    (0..64)
        .filter(|k| (n >> k) & 1 == 1)
        .map(|k| ratio.ln() + k as f64 * (2.0 * c_struct).ln() + (k as f64).exp2() * norm_b_c.ln())
        .sum()
}

/// `ln(measured / (‖a‖_A/‖a‖_B² · e^{γ₂ ln²(κ²)}))`, whose decay tracks the
/// little-o refinement of the first branch.
pub fn refinement_ratio_ln(measured_ln: f64, prefactor_ln: f64, kappa: f64, gamma2: f64) -> f64 {
    measured_ln - prefactor_ln - gamma2 * (kappa * kappa).ln().powi(2)
}

/// Everything known about one inversion experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub norm_a: f64,
    pub norm_b: f64,
    pub norm_b_inverse: f64,
    pub structure_constant: f64,
    pub kappa: f64,
    pub embedding_ratio: f64,
    pub inputs: BoundInputs,
    pub xi: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<i64>,
    pub product_bound: Option<f64>,
    pub product_bound_ln: f64,
    pub tightened: bool,
    pub asymptotic_bound: Option<f64>,
    pub asymptotic_bound_ln: Option<f64>,
    pub branch: Option<Branch>,
    pub first_branch_sufficient: Option<bool>,
    /// `ln(‖a‖_A/‖a‖_B² · asf)` with the stated and the proof-variant constants.
    pub asf_ln: Option<f64>,
    pub asf_proof_variant_ln: Option<f64>,
    /// Set when some bound exceeds the double range; only its ln form is kept.
    pub overflow: bool,
    pub measured: Option<f64>,
}

fn finite_exp(ln: f64, overflow: &mut bool) -> Option<f64> {
    let v = ln.exp();
    if v.is_finite() {
        Some(v)
    } else {
        *overflow = true;
        None
    }
}

/// Chains the series bound and, for `κ ≥ 5`, the asymptotic estimate.
pub fn bound_report(
    norm_a: f64,
    norm_b: f64,
    norm_b_inverse: f64,
    c_struct: f64,
    measured: Option<f64>,
) -> Result<BoundReport> {
    let nc = ncicstar_bound(norm_a, norm_b, norm_b_inverse, c_struct)?;
    let inputs = nc.inputs;
    let kappa = checked_kappa(norm_b, norm_b_inverse)?;
    let mut overflow = false;
    let product_bound = finite_exp(nc.ln_value, &mut overflow);
    let xi_val = (inputs.v > 0.0).then(|| xi(inputs.u, inputs.v)).transpose()?;
    let m = if xi_val.is_some_and(|x| x >= 4.0 - 1e-12) { Some(cutoff_m(&inputs)?) } else { None };
    let (mut asymptotic_bound, mut asymptotic_bound_ln, mut branch, mut first, mut asf_ln, mut asf_pv) =
        (None, None, None, None, None, None);
    if kappa >= KAPPA_MIN {
        let t = theorem41_bound(norm_a, norm_b, norm_b_inverse, c_struct)?;
        asymptotic_bound = finite_exp(t.ln_value, &mut overflow);
        asymptotic_bound_ln = Some(t.ln_value);
        branch = Some(t.branch);
        first = Some(t.first_branch_sufficient);
        if m.is_some() && inputs.c >= 1.0 {
            let a = asf_bound(&inputs)?;
            asf_ln = Some(nc.prefactor_ln + a.ln_value);
            asf_pv = Some(nc.prefactor_ln + a.ln_proof_variant);
        }
    }
    Ok(BoundReport {
        norm_a,
        norm_b,
        norm_b_inverse,
        structure_constant: c_struct,
        kappa,
        embedding_ratio: norm_a / norm_b,
        inputs,
        xi: xi_val,
        m,
        product_bound,
        product_bound_ln: nc.ln_value,
        tightened: nc.tightened(),
        asymptotic_bound,
        asymptotic_bound_ln,
        branch,
        first_branch_sufficient: first,
        asf_ln,
        asf_proof_variant_ln: asf_pv,
        overflow,
        measured,
    })
}
