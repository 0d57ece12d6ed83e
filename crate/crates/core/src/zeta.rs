//! The completed zeta functions Ẑ₂^{1/2}(s) and Ẑ_m(s) (m ≥ 4), factor by
//! factor, on the real axis s > 0; the hyperbolic-elliptic Euler product is
//! truncated and needs Re s > 1.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::elliptic::{c_const, check_weight, ell_exponents, elliptic_weight};
use crate::error::{Error, Result};
use crate::field::{EllipticLocus, QuadraticField};
use crate::geodesic::GeodesicClass;
use crate::numeric::{fmt17, NeumaierSum};
use crate::special::{ln_gamma, log_gamma2};

/// A truncated Euler-product value and the size of the largest term left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedSum {
    pub value: Complex64,
    pub first_omitted: f64,
}

/// log Z_m(s) = Σ_p Σ_{k≥1} (1/k)·e^{ik(m−2)ω}·N(p)^{−ks}/(1 − N(p)^{−k}),
/// halved for m = 2 (log √Z₂). Only primitive entries are used; each is
/// weighted by its multiplicity and summed up to k = `k_max`.
pub fn log_z_he(
    s: Complex64,
    m: u32,
    primitives: &[GeodesicClass],
    k_max: u32,
) -> Result<TruncatedSum> {
    check_weight(m)?;
    if s.re <= 1.0 {
        return Err(Error::domain(format!(
            "the Euler product needs Re s > 1, got {s}"
        )));
    }
    if k_max < 1 {
        return Err(Error::domain("k_max must be >= 1"));
    }
    let half = if m == 2 { 0.5 } else { 1.0 };
    let phase = (m as f64) - 2.0;
    let term = |p: &GeodesicClass, k: u32| -> Complex64 {
        let kf = k as f64;
        let ln_n = p.norm.ln();
        let nk = (-kf * ln_n).exp();
        let z = Complex64::new(0.0, kf * phase * p.omega) - s * (kf * ln_n);
        z.exp() * (half * p.mult as f64 / (kf * (1.0 - nk)))
    };
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let mut omitted = 0.0f64;
    for p in primitives.iter().filter(|p| p.primitive) {
        for k in 1..=k_max {
            let t = term(p, k);
            re.add(t.re);
            im.add(t.im);
        }
        omitted = omitted.max(term(p, k_max + 1).norm());
    }
    Ok(TruncatedSum {
        value: Complex64::new(re.value(), im.value()),
        first_omitted: omitted,
    })
}

/// log Z_id^{1/2}(s) = ζ_K(−1)(log Γ₂(s) + log Γ₂(s+1)) for m = 2, twice that
/// for m ≥ 4.
pub fn log_z_id(s: f64, field: &QuadraticField, m: u32) -> Result<f64> {
    check_weight(m)?;
    if s <= 0.0 {
        return Err(Error::domain(format!("log_z_id needs s > 0, got {s}")));
    }
    let mult = if m == 2 { 1.0 } else { 2.0 };
    Ok(mult * field.zeta_m1_f64() * (log_gamma2(s)? + log_gamma2(s + 1.0)?))
}

/// log Z_ell(s; m) = Σ_j count_j Σ_l e_l·log Γ((s + l)/ν_j), with the half
/// factor's exponents at m = 2.
pub fn log_z_ell(s: f64, m: u32, locus: &EllipticLocus) -> Result<f64> {
    check_weight(m)?;
    let mut acc = NeumaierSum::new();
    for (j, p) in locus.points().iter().enumerate() {
        let exps = ell_exponents(m, p.nu, p.t)?;
        let mut inner = NeumaierSum::new();
        for (l, e) in exps.iter().enumerate() {
            if *e.numer() == 0 {
                continue;
            }
            let arg = (s + l as f64) / p.nu as f64;
            if arg <= 0.0 {
                if arg.fract() == 0.0 {
                    return Err(Error::GammaPole { entry: j, l, arg });
                }
                return Err(Error::domain(format!(
                    "elliptic factor is only evaluated for (s + l)/nu > 0 (entry {j}, l = {l}, argument {arg})"
                )));
            }
            inner.add(e.to_f64().unwrap_or(f64::NAN) * ln_gamma(arg)?);
        }
        acc.add(p.count as f64 * inner.value());
    }
    Ok(acc.value())
}

/// log Z_par/sct^{1/2}(s; 2) = −s·log ε.
pub fn log_z_parsct(s: f64, field: &QuadraticField) -> f64 {
    -s * field.log_eps()
}

/// log ζ_ε(x) = −log|1 − ε^{−2x}|.
fn log_zeta_eps(x: f64, log_eps: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(Error::domain("zeta_eps has a pole at argument 0"));
    }
    let e = (-2.0 * x * log_eps).exp();
    Ok(if x > 0.0 {
        -(-e).ln_1p()
    } else {
        -(e - 1.0).ln()
    })
}

/// log ζ_ε(s) for m = 2; log ζ_ε(s + m/2 − 1) − log ζ_ε(s + m/2 − 2) for m ≥ 4.
pub fn log_z_hyp2sct(s: f64, field: &QuadraticField, m: u32) -> Result<f64> {
    check_weight(m)?;
    let le = field.log_eps();
    if m == 2 {
        return log_zeta_eps(s, le);
    }
    let h = (m / 2) as f64;
    Ok(log_zeta_eps(s + h - 1.0, le)? - log_zeta_eps(s + h - 2.0, le)?)
}

/// Per-factor logarithms of Ẑ₂^{1/2}(s) (m = 2) or Ẑ_m(s) (m ≥ 4).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaFactorization {
    pub s: Complex64,
    pub m: u32,
    pub log_he: Complex64,
    pub log_id: f64,
    pub log_ell: f64,
    pub log_parsct: Option<f64>,
    pub log_hyp2sct: f64,
    pub log_total: Complex64,
    pub truncation_norm: f64,
}

impl ZetaFactorization {
    /// One-line JSON record.
    pub fn to_json(&self) -> String {
        let parsct = self.log_parsct.map_or_else(|| "null".to_string(), fmt17);
        format!(
            "{{\"s_re\":{},\"s_im\":{},\"m\":{},\"log_he_re\":{},\"log_he_im\":{},\"log_id\":{},\"log_ell\":{},\"log_parsct\":{},\"log_hyp2sct\":{},\"log_total_re\":{},\"log_total_im\":{},\"truncation_norm\":{}}}",
            fmt17(self.s.re),
            fmt17(self.s.im),
            self.m,
            fmt17(self.log_he.re),
            fmt17(self.log_he.im),
            fmt17(self.log_id),
            fmt17(self.log_ell),
            parsct,
            fmt17(self.log_hyp2sct),
            fmt17(self.log_total.re),
            fmt17(self.log_total.im),
            fmt17(self.truncation_norm),
        )
    }
}

/// Assembles every factor at real s. The Euler product is skipped (and Re s
/// unrestricted) when `primitives` is empty.
pub fn log_zhat(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
    primitives: &[GeodesicClass],
    k_max: u32,
) -> Result<ZetaFactorization> {
    check_weight(m)?;
    let (log_he, truncation_norm) = if primitives.is_empty() {
        (Complex64::new(0.0, 0.0), 0.0)
    } else {
        let t = log_z_he(Complex64::new(s, 0.0), m, primitives, k_max)?;
        (t.value, t.first_omitted)
    };
    let log_id = log_z_id(s, field, m)?;
    let log_ell = log_z_ell(s, m, locus)?;
    let log_parsct = (m == 2).then(|| log_z_parsct(s, field));
    let log_hyp2sct = log_z_hyp2sct(s, field, m)?;
    let closed = log_id + log_ell + log_parsct.unwrap_or(0.0) + log_hyp2sct;
    Ok(ZetaFactorization {
        s: Complex64::new(s, 0.0),
        m,
        log_he,
        log_id,
        log_ell,
        log_parsct,
        log_hyp2sct,
        log_total: log_he + closed,
        truncation_norm,
    })
}

/// ζ_K(−1)·{(3/2)s² − s − (s² − s + 1/3)·log s}.
fn id_main(s: f64, q: f64) -> f64 {
    q * (1.5 * s * s - s - (s * s - s + 1.0 / 3.0) * s.ln())
}

/// −Σ_j count_j·w_j/(12ν_j or 6ν_j)·log(s/ν_j), the logarithmic growth of
/// the elliptic factor.
pub fn ell_main(s: f64, m: u32, locus: &EllipticLocus) -> Result<f64> {
    check_weight(m)?;
    let denom = if m == 2 { 12.0 } else { 6.0 };
    let mut acc = 0.0;
    for p in locus.points() {
        let w = elliptic_weight(p.nu, p.t, m)? as f64;
        let nu = p.nu as f64;
        acc -= p.count as f64 * w / (denom * nu) * (s / nu).ln();
    }
    Ok(acc)
}

/// log Z_id^{1/2}(s) minus its large-s main term.
pub fn id_asymptotic_remainder(s: f64, field: &QuadraticField) -> Result<f64> {
    Ok(log_z_id(s, field, 2)? - id_main(s, field.zeta_m1_f64()))
}

/// log Z_ell(s; m) minus its logarithmic main term.
pub fn ell_asymptotic_remainder(s: f64, m: u32, locus: &EllipticLocus) -> Result<f64> {
    Ok(log_z_ell(s, m, locus)? - ell_main(s, m, locus)?)
}

/// log Ẑ(s) with the Euler product dropped, minus the large-s main terms:
/// for m = 2, ζ_K(−1){…} − Σ (ν²−1)/(12ν) log(s/ν) − s log ε; for m ≥ 4,
/// 2ζ_K(−1){…} − Σ (ν²−1−6α₀(ν−α₀))/(6ν) log(s/ν).
pub fn asymptotic_remainder(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
) -> Result<f64> {
    let z = log_zhat(s, m, field, locus, &[], 1)?;
    let q = field.zeta_m1_f64();
    let main = if m == 2 {
        id_main(s, q) + ell_main(s, m, locus)? - s * field.log_eps()
    } else {
        2.0 * id_main(s, q) + ell_main(s, m, locus)?
    };
    Ok(z.log_total.re - main)
}

/// P₂(s) = (s − ½)²ζ_K(−1) + C₂ and P_m(s) = 2(s − ½)²ζ_K(−1) + C_m.
pub fn p_polynomial(s: f64, m: u32, field: &QuadraticField, locus: &EllipticLocus) -> Result<f64> {
    let c = c_const(m, field, locus)?;
    let coef = if m == 2 { 1.0 } else { 2.0 };
    let h = s - 0.5;
    Ok(coef * h * h * field.zeta_m1_f64() + c)
}

/// log Ẑ(s) − log Ẑ(1 − s) for the closed factors alone (no Euler product).
/// Not expected to vanish: the exact symmetry involves Z_m itself.
pub fn functional_equation_defect(
    s: f64,
    m: u32,
    field: &QuadraticField,
    locus: &EllipticLocus,
) -> Result<f64> {
    let a = log_zhat(s, m, field, locus, &[], 1)?;
    let b = log_zhat(1.0 - s, m, field, locus, &[], 1)?;
    Ok(a.log_total.re - b.log_total.re)
}
