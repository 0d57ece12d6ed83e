//! Determinant expressions assembled from the completed zeta factors.

use crate::elliptic::{c_const, check_weight};
use crate::error::{Error, Result};
use crate::field::{EllipticLocus, QuadraticField};
use crate::geodesic::GeodesicClass;
use crate::numeric::fmt17;
use crate::zeta::{log_zhat, p_polynomial};

fn check_s(s: f64) -> Result<f64> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::domain(format!("s must be > 1, got {s}")));
    }
    Ok(s * (s - 1.0))
}

/// Real parts of log Ẑ₂^{1/2}(s), log Ẑ₄(s), …, log Ẑ_m(s).
fn log_zhats(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
    primitives: &[GeodesicClass],
    k_max: u32,
) -> Result<Vec<f64>> {
    (2..=m)
        .step_by(2)
        .map(|j| {
            Ok(log_zhat(s, j, field, locus, primitives, k_max)?
                .log_total
                .re)
        })
        .collect()
}

fn assemble(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
    logs: &[f64],
) -> Result<f64> {
    let h = s - 0.5;
    let q = field.zeta_m1_f64();
    let mut c_sum = 0.0;
    for j in (2..=m).step_by(2) {
        c_sum += c_const(j, field, locus)?;
    }
    let mut v =
        -((m - 1) as f64) * h * h * q - c_sum + logs[..(m / 2) as usize].iter().sum::<f64>();
    if m == 2 {
        v += (s * (s - 1.0)).ln();
    }
    Ok(v)
}

/// log Det(□_m + s(s−1)) from the closed product: for m = 2,
/// log s(s−1) − (s−½)²ζ_K(−1) − C₂ + log Ẑ₂^{1/2}(s); for m ≥ 4,
/// −(m−1)(s−½)²ζ_K(−1) − (C₂+⋯+C_m) + log Ẑ₂^{1/2}(s) + Σ_{j=4}^m log Ẑ_j(s).
pub fn corollary_log_det(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
    primitives: &[GeodesicClass],
    k_max: u32,
) -> Result<f64> {
    check_weight(m)?;
    check_s(s)?;
    let logs = log_zhats(s, m, field, locus, primitives, k_max)?;
    assemble(s, m, field, locus, &logs)
}

/// |log Ẑ − (P_m + L_m − L_{m−2} + δ_{m,4} log s(s−1))| with L the
/// determinant expression above (L₀ := 0, and for m = 2 the comparison is
/// log Ẑ₂^{1/2} against P₂ + L₂ − log s(s−1)). Zero up to rounding when the
/// product formula and the exponent polynomials are mutually consistent.
pub fn telescoping_residual(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
    primitives: &[GeodesicClass],
    k_max: u32,
) -> Result<f64> {
    check_weight(m)?;
    let x = check_s(s)?;
    let logs = log_zhats(s, m, field, locus, primitives, k_max)?;
    let p = p_polynomial(s, m, field, locus)?;
    let l_m = assemble(s, m, field, locus, &logs)?;
    let lhs = logs[logs.len() - 1];
    let rhs = if m == 2 {
        p + l_m - x.ln()
    } else {
        let l_prev = assemble(s, m - 2, field, locus, &logs)?;
        let delta = if m == 4 { x.ln() } else { 0.0 };
        p + l_m - l_prev + delta
    };
    Ok((lhs - rhs).abs())
}

/// Det(□_m) at s = 1, with the residue of Ẑ₂^{1/2} and the values of Ẑ_j at
/// s = 1 left symbolic; the exponential prefactor is evaluated.
pub fn det_at_one_symbolic(
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
) -> Result<String> {
    check_weight(m)?;
    let mut c_sum = 0.0;
    let mut c_names = Vec::new();
    for j in (2..=m).step_by(2) {
        c_sum += c_const(j, field, locus)?;
        c_names.push(format!("C_{j}"));
    }
    let exponent = -((m - 1) as f64) / 4.0 * field.zeta_m1_f64() - c_sum;
    let mut factors = vec!["Res_{s=1} Zhat_2^{1/2}(s)".to_string()];
    if m >= 4 {
        factors.push("Zhat_4'(1)".into());
    }
    for j in (6..=m).step_by(2) {
        factors.push(format!("Zhat_{j}(1)"));
    }
    Ok(format!(
        "Det(box_{m}) = exp(-({m}-1)/4*zeta_K(-1) - ({})) * {}\n  exponent = {}\n  prefactor = {}",
        c_names.join(" + "),
        factors.join(" * "),
        fmt17(exponent),
        fmt17(exponent.exp())
    ))
}
