//! Geometric side of the double-difference trace formulas with the heat
//! pair h₁(r) = e^{−t(r²+¼)}, g₁(u) = (4πt)^{−½}·exp(−t/4 − u²/4t).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::elliptic::check_weight;
use crate::error::{Error, Result};
use crate::field::{EllipticLocus, QuadraticField};
use crate::geodesic::{is_power_closed, GeodesicClass};
use crate::numeric::{fmt17, NeumaierSum};
use crate::quadrature::{integrate, integrate_to_infinity, QuadOptions};

/// Largest |imaginary part| tolerated in sums that must be real.
pub const IMAG_TOL: f64 = 1e-10;

/// Half-width of the Gaussian window, in units of √t: e^{−V²/4} < 1e−17.
const GAUSS_HALF_WIDTH: f64 = 12.5;

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    Ok(())
}

/// g₁(u) = (4πt)^{−½}·exp(−t/4 − u²/(4t)).
pub fn g1(u: f64, t: f64) -> f64 {
    (-t / 4.0 - u * u / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

fn quad_opts() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-12,
        rel_tol: 0.0,
        max_intervals: 4000,
    }
}

/// (vol/16π² or vol/8π²)·∫_ℝ e^{−t(r²+¼)} r tanh(πr) dr, i.e. prefactor
/// ζ_K(−1)/2 for m = 2 and ζ_K(−1) for m ≥ 4.
pub fn identity_term(field: &QuadraticField, m: u32, t: f64) -> Result<f64> {
    check_weight(m)?;
    check_t(t)?;
    let pref = if m == 2 { 0.5 } else { 1.0 } * field.zeta_m1_f64();
    // tanh(πr) = 1 − 2/(e^{2πr} + 1); the first part integrates in closed form
    let e = (-t / 4.0).exp();
    let gauss = e / (2.0 * t);
    let corr = integrate_to_infinity(
        |r: f64| {
            let x = (-2.0 * PI * r).exp();
            (-t * r * r).exp() * r * x / (1.0 + x)
        },
        0.0,
        quad_opts(),
    )?;
    Ok(pref * 2.0 * (gauss - 2.0 * e * corr.value))
}

/// ∫ g₁(u) e^{−u/2}(e^u − e^{2iθ})/(cosh u − cos 2θ) du, after u = √t·v.
fn elliptic_integral(theta: f64, t: f64) -> Result<Complex64> {
    let st = t.sqrt();
    let e2 = Complex64::from_polar(1.0, 2.0 * theta);
    // cosh u − cos 2θ = 2 sinh²(u/2) + 2 sin²θ, without cancellation
    let sin2 = theta.sin().powi(2);
    let pref = (-t / 4.0).exp() / (4.0 * PI).sqrt();
    let f = |v: f64| -> Complex64 {
        let u = st * v;
        let sh = (0.5 * u).sinh();
        let den = 2.0 * sh * sh + 2.0 * sin2;
        let num = Complex64::new(u.exp(), 0.0) - e2;
        num * ((-0.25 * v * v).exp() * (-0.5 * u).exp() / den)
    };
    let half = GAUSS_HALF_WIDTH;
    let r = integrate(f, -half, half, quad_opts())?;
    Ok(r.value * pref)
}

/// Σ over the elliptic classes: each locus entry (ν, t_j) contributes the
/// classes k = 1, …, ν−1 with angles (kπ/ν, k·t_j·π/ν) and weight 1/ν.
pub fn elliptic_term(locus: &EllipticLocus, m: u32, t: f64) -> Result<f64> {
    check_weight(m)?;
    check_t(t)?;
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    let denom = if m == 2 { 8.0 } else { 4.0 };
    for p in locus.points() {
        let nu = p.nu as f64;
        for k in 1..p.nu {
            let th1 = k as f64 * PI / nu;
            let th2 = (k as u64 * p.t as u64 % (2 * p.nu as u64)) as f64 * PI / nu;
            let mut coef =
                -Complex64::i() * Complex64::from_polar(1.0, -th1) / (denom * nu * th1.sin());
            if m > 2 {
                coef *= Complex64::from_polar(1.0, (m - 2) as f64 * th2);
            }
            let v = coef * elliptic_integral(th1, t)? * p.count as f64;
            re.add(v.re);
            im.add(v.im);
        }
    }
    let imag = im.value();
    if imag.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidual {
            term: "elliptic term",
            residual: imag.abs(),
            tolerance: IMAG_TOL,
        });
    }
    Ok(re.value())
}

/// Hyperbolic-elliptic heat term and whether the supplied list looked
/// closed under taking powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeTerm {
    pub value: f64,
    pub power_closed: bool,
}

/// −½Σ log N(γ₀)·g₁(log N(γ))/(N^{½} − N^{−½}) for m = 2; for m ≥ 4 without
/// the ½ and with the phase e^{i(m−2)ω}. Sums over every listed class.
pub fn he_term(geodesics: &[GeodesicClass], m: u32, t: f64) -> Result<HeTerm> {
    check_weight(m)?;
    check_t(t)?;
    let half = if m == 2 { 0.5 } else { 1.0 };
    let mut re = NeumaierSum::new();
    let mut im = NeumaierSum::new();
    for g in geodesics {
        let ln = g.norm.ln();
        let w = -half * g.mult as f64 * g.primitive_norm.ln() * g1(ln, t)
            / (g.norm.sqrt() - 1.0 / g.norm.sqrt());
        let z = Complex64::from_polar(w, (m - 2) as f64 * g.omega);
        re.add(z.re);
        im.add(z.im);
    }
    let imag = im.value();
    if imag.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidual {
            term: "hyperbolic-elliptic term",
            residual: imag.abs(),
            tolerance: IMAG_TOL,
        });
    }
    Ok(HeTerm {
        value: re.value(),
        power_closed: is_power_closed(geodesics),
    })
}

/// (PS, HS). PS = −log ε·g₁(0) for m = 2 and 0 otherwise;
/// HS = −2 log ε Σ_k g₁(2k log ε)·ε^{−k} for m = 2 and
/// −2 log ε Σ_k g₁(2k log ε)(ε^{−k(m−1)} − ε^{−k(m−3)}) for m ≥ 4.
pub fn parabolic_and_hyp2_terms(field: &QuadraticField, m: u32, t: f64) -> Result<(f64, f64)> {
    check_weight(m)?;
    check_t(t)?;
    let le = field.log_eps();
    let ps = if m == 2 { -le * g1(0.0, t) } else { 0.0 };
    let mut hs = NeumaierSum::new();
    for k in 1..=100_000u32 {
        let kf = k as f64;
        let weight = if m == 2 {
            (-kf * le).exp()
        } else {
            (-kf * (m - 1) as f64 * le).exp() - (-kf * (m - 3) as f64 * le).exp()
        };
        let term = -2.0 * le * g1(2.0 * kf * le, t) * weight;
        hs.add(term);
        if term.abs() < 1e-18 {
            break;
        }
    }
    Ok((ps, hs.value()))
}

/// All terms of the geometric side at one t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricSideBreakdown {
    pub t: f64,
    pub m: u32,
    pub i: f64,
    pub e: f64,
    pub he: f64,
    pub ps: f64,
    pub hs: f64,
    pub total: f64,
}

impl GeometricSideBreakdown {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"t\":{},\"m\":{},\"I\":{},\"E\":{},\"HE\":{},\"PS\":{},\"HS\":{},\"total\":{}}}",
            fmt17(self.t),
            self.m,
            fmt17(self.i),
            fmt17(self.e),
            fmt17(self.he),
            fmt17(self.ps),
            fmt17(self.hs),
            fmt17(self.total)
        )
    }

    pub const CSV_HEADER: &'static str = "t,I,E,HE,PS,HS,total";

    pub fn to_csv_row(&self) -> String {
        [
            self.t, self.i, self.e, self.he, self.ps, self.hs, self.total,
        ]
        .iter()
        .map(|&x| fmt17(x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// I + E + HE + PS + HS at one t. For m = 2 this equals θ₂(t) − 1; for
/// m ≥ 4 it equals θ_m(t) − θ_{m−2}(t) + δ_{m,4}.
pub fn geometric_theta(
    field: &QuadraticField,
    locus: &EllipticLocus,
    geodesics: &[GeodesicClass],
    m: u32,
    t: f64,
) -> Result<GeometricSideBreakdown> {
    let i = identity_term(field, m, t)?;
    let e = elliptic_term(locus, m, t)?;
    let he = he_term(geodesics, m, t)?.value;
    let (ps, hs) = parabolic_and_hyp2_terms(field, m, t)?;
    Ok(GeometricSideBreakdown {
        t,
        m,
        i,
        e,
        he,
        ps,
        hs,
        total: i + e + he + ps + hs,
    })
}

/// θ_m(t) implied by the geometric sides: θ₂ = total₂ + 1 and
/// θ_m = θ_{m−2} + total_m − δ_{m,4}, i.e. total₂ + total₄ + ⋯ + total_m.
pub fn theta_from_geometry(
    field: &QuadraticField,
    locus: &EllipticLocus,
    geodesics: &[GeodesicClass],
    m: u32,
    t: f64,
) -> Result<f64> {
    check_weight(m)?;
    let mut acc = 1.0;
    for j in (2..=m).step_by(2) {
        acc += geometric_theta(field, locus, geodesics, j, t)?.total;
        if j == 4 {
            acc -= 1.0;
        }
    }
    Ok(acc)
}

/// Least-squares fit of a/t + b/√t + c to (t, value) samples.
pub fn small_t_fit(samples: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if samples.len() < 3 {
        return Err(Error::domain(format!(
            "small_t_fit needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    for &(t, v) in samples {
        check_t(t)?;
        if !v.is_finite() {
            return Err(Error::domain(format!("non-finite sample value at t = {t}")));
        }
    }
    let n = samples.len();
    let a = DMatrix::from_fn(n, 3, |r, c| {
        let t = samples[r].0;
        match c {
            0 => 1.0 / t,
            1 => 1.0 / t.sqrt(),
            _ => 1.0,
        }
    });
    let y = DVector::from_iterator(n, samples.iter().map(|s| s.1));
    let sol = a
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|e| Error::domain(format!("least squares failed: {e}")))?;
    Ok((sol[0], sol[1], sol[2]))
}

/// lim_{t→0⁺} f(t) for f(t) = L + c₁t + c₂t² + …, by Richardson
/// extrapolation over t₀, t₀/2, …, t₀/2^{levels−1}.
pub fn richardson_limit<F>(f: F, t0: f64, levels: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if levels == 0 {
        return Err(Error::domain("richardson_limit needs at least one level"));
    }
    check_t(t0)?;
    let mut row: Vec<f64> = (0..levels)
        .map(|i| f(t0 / f64::powi(2.0, i as i32)))
        .collect::<Result<_>>()?;
    for j in 1..levels {
        let p = f64::powi(2.0, j as i32);
        row = row
            .windows(2)
            .map(|w| (p * w[1] - w[0]) / (p - 1.0))
            .collect();
    }
    Ok(row[0])
}

/// lim_{t→0⁺} E_m(t) (three levels, ratio 2); equals b₀(m).
pub fn elliptic_limit(locus: &EllipticLocus, m: u32, t0: f64) -> Result<f64> {
    richardson_limit(|t| elliptic_term(locus, m, t), t0, 3)
}
