//! Gamma-type special functions on the positive real axis (log Γ also off
//! it): log Γ, Barnes G, the double Gamma function Γ₂, and a slow
//! Euler–Maclaurin evaluation of Γ₂ straight from its double-zeta definition.
//!
//! Normalisation of Γ₂ is fixed by
//! log Γ₂(x) = ζ′(−1) + ((x − 1)/2)·log 2π − log G(x).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;

/// ζ′(−1).
pub const ZETA_PRIME_M1: f64 = -0.165_421_143_700_450_93;
/// log 2π.
pub const LOG_TWO_PI: f64 = 1.837_877_066_409_345_5;
/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The named constants used by the Γ₂ relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialConstants {
    pub zeta_prime_m1: f64,
    pub log_two_pi: f64,
    pub euler_gamma: f64,
}

impl SpecialConstants {
    pub const STANDARD: SpecialConstants = SpecialConstants {
        zeta_prime_m1: ZETA_PRIME_M1,
        log_two_pi: LOG_TWO_PI,
        euler_gamma: EULER_GAMMA,
    };
}

impl Default for SpecialConstants {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// B_2, B_4, …, B_20.
pub(crate) const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Arguments below this are shifted upward before Stirling's series is used.
const STIRLING_SHIFT: f64 = 15.0;

/// Crossover from recurrence to the large-argument expansion of log G.
const BARNES_ASYMPTOTIC_FROM: f64 = 50.0;

fn stirling_tail_complex(w: Complex64) -> Complex64 {
    let w2 = w * w;
    let mut pow = w;
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        sum += *b / (k2 * (k2 - 1.0)) / pow;
        pow *= w2;
    }
    sum
}

fn stirling_tail(w: f64) -> f64 {
    let w2 = w * w;
    let mut pow = w;
    let mut sum = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        let k2 = 2.0 * (k as f64 + 1.0);
        sum += b / (k2 * (k2 - 1.0)) / pow;
        pow *= w2;
    }
    sum
}

/// Principal branch of log Γ(z) for Re z > 0.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 {
        return ln_gamma(z.re).map(|v| Complex64::new(v, 0.0));
    }
    if z.re <= 0.0 {
        return Err(Error::domain(format!("log_gamma needs Re z > 0, got {z}")));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < STIRLING_SHIFT {
        shift += w.ln();
        w += 1.0;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * LOG_TWO_PI + stirling_tail_complex(w) - shift)
}

/// log Γ(x) for real x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        if x <= 0.0 && x.fract() == 0.0 {
            return Err(Error::domain(format!("Gamma has a pole at {x}")));
        }
        return Err(Error::domain(format!("ln_gamma needs x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut w = x;
    let mut prod = 1.0;
    while w < STIRLING_SHIFT {
        prod *= w;
        w += 1.0;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * LOG_TWO_PI + stirling_tail(w) - prod.ln())
}

/// Γ(z) for complex z off the poles.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.re >= 0.5 {
        return Ok(log_gamma(z)?.exp());
    }
    let s = (PI * z).sin();
    if s.norm() == 0.0 {
        return Err(Error::domain(format!("Gamma has a pole at {z}")));
    }
    Ok(PI / (s * log_gamma(1.0 - z)?.exp()))
}

/// 1/Γ(z), entire.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        // Re z >= 0.5 is inside the domain of log_gamma
        (-log_gamma(z).expect("Re z >= 0.5")).exp()
    } else {
        (PI * z).sin() / PI * log_gamma(1.0 - z).expect("Re(1 - z) > 0.5").exp()
    }
}

/// Hurwitz zeta ζ(s, a) for real s > 1 and a ≥ 10, by Euler–Maclaurin at a.
fn hurwitz_zeta_large_a(s: f64, a: f64) -> f64 {
    debug_assert!(s > 1.0 && a >= 10.0);
    let mut sum = a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising factorial (s)_{2k−1} and (2k)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut apow = a.powf(-s - 1.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rising * apow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let k2 = 2.0 * (k as f64 + 1.0);
        rising *= (s + k2 - 1.0) * (s + k2);
        fact *= (k2 + 1.0) * (k2 + 2.0);
        apow /= a * a;
    }
    sum
}

/// log G(1 + z) for −1 < z ≤ 2 from the Weierstrass product
/// G(1+z) = (2π)^{z/2} e^{−(z + z²(1+γ))/2} ∏_k (1 + z/k)^k e^{−z + z²/(2k)}.
fn log_barnes_g_product(z: f64) -> f64 {
    const DIRECT_TERMS: usize = 64;
    let mut acc = NeumaierSum::new();
    acc.add(0.5 * z * LOG_TWO_PI);
    acc.add(-0.5 * (z + z * z * (1.0 + EULER_GAMMA)));
    for k in 1..=DIRECT_TERMS {
        let k = k as f64;
        acc.add(k * (z / k).ln_1p() - z + z * z / (2.0 * k));
    }
    // tail: k ln(1 + z/k) − z + z²/(2k) = Σ_{j≥3} (−1)^{j+1} z^j / (j k^{j−1})
    let a = (DIRECT_TERMS + 1) as f64;
    let mut zj = z * z * z;
    for j in 3..=16 {
        let jf = j as f64;
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * zj / jf * hurwitz_zeta_large_a(jf - 1.0, a);
        acc.add(term);
        if term.abs() < 1e-20 {
            break;
        }
        zj *= z;
    }
    acc.value()
}

/// Large-z expansion of log G(1 + z).
pub fn log_barnes_g1p_asymptotic(z: f64) -> f64 {
    let lz = z.ln();
    let mut sum =
        (0.5 * z * z - 1.0 / 12.0) * lz - 0.75 * z * z + 0.5 * z * LOG_TWO_PI + ZETA_PRIME_M1;
    let z2 = z * z;
    let mut pow = z2;
    // Σ_{k≥1} B_{2k+2} / (4k(k+1) z^{2k})
    for (k, b) in BERNOULLI_EVEN.iter().skip(1).take(8).enumerate() {
        let k = k as f64 + 1.0;
        sum += b / (4.0 * k * (k + 1.0) * pow);
        pow *= z2;
    }
    sum
}

/// log G(x) for x > 0.
pub fn log_barnes_g(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain(format!("log_barnes_g needs x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x <= 3.0 {
        return Ok(log_barnes_g_product(x - 1.0));
    }
    if x >= BARNES_ASYMPTOTIC_FROM {
        return Ok(log_barnes_g1p_asymptotic(x - 1.0));
    }
    // G(x0 + n) = G(x0) ∏_{k<n} Γ(x0 + k), with x0 in (2, 3]
    let n = (x - 2.0).ceil() - 1.0;
    let x0 = x - n;
    let mut acc = NeumaierSum::new();
    acc.add(log_barnes_g_product(x0 - 1.0));
    for k in 0..n as usize {
        acc.add(ln_gamma(x0 + k as f64)?);
    }
    Ok(acc.value())
}

/// log Γ₂(x) = ζ′(−1) + ((x − 1)/2)·log 2π − log G(x).
pub fn log_gamma2(x: f64) -> Result<f64> {
    if x <= 0.0 || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma2 needs x > 0, got {x}")));
    }
    Ok(ZETA_PRIME_M1 + 0.5 * (x - 1.0) * LOG_TWO_PI - log_barnes_g(x)?)
}

/// p(p−1)…(p−n+1) and its derivative in p.
fn falling_with_derivative(p: f64, n: usize) -> (f64, f64) {
    let mut val = 1.0;
    let mut der = 0.0;
    for i in 0..n {
        let f = p - i as f64;
        der = der * f + val;
        val *= f;
    }
    (val, der)
}

/// ∂/∂s|_{s=0} Σ_{m,n≥0} (m + n + x)^{−s}, evaluated independently of the
/// Barnes G route: the double sum is regrouped as Σ_k (k+1)(k+x)^{−s} and
/// continued to s = 0 with Euler–Maclaurin.
pub fn double_zeta_oracle(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 10.0) {
        return Err(Error::domain(format!(
            "double_zeta_oracle is limited to 0 < x <= 10, got {x}"
        )));
    }
    const N: usize = 40;
    let c = 1.0 - x;
    let mut acc = NeumaierSum::new();
    for k in 0..N {
        let k = k as f64;
        acc.add(-(k + 1.0) * (k + x).ln());
    }
    let u = N as f64 + x;
    let lu = u.ln();
    // ∫_N^∞ (k+1)(k+x)^{−s} dk = u^{2−s}/(s−2) + c·u^{1−s}/(s−1)
    acc.add(0.5 * u * u * lu - 0.25 * u * u);
    acc.add(c * (u * lu - u));
    // f(N)/2
    acc.add(-0.5 * (N as f64 + 1.0) * lu);
    // −Σ_j B_{2j}/(2j)! · ∂_s f^{(2j−1)}(u)|_{s=0}, f(u) = u^{1−s} + c·u^{−s}
    let mut fact = 2.0;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2 * j + 1;
        let (p1, dp1) = falling_with_derivative(1.0, n);
        let (p0, dp0) = falling_with_derivative(0.0, n);
        let t1 = -(dp1 + p1 * lu) * u.powi(1 - n as i32);
        let t2 = -c * (dp0 + p0 * lu) * u.powi(-(n as i32));
        acc.add(-b / fact * (t1 + t2));
        let k2 = (2 * j + 2) as f64;
        fact *= (k2 + 1.0) * (k2 + 2.0);
    }
    Ok(acc.value())
}

/// log Γ₂(z+1) − [(3/4)z² − (z²/2 − 1/12)·log z].
pub fn gamma2_stirling_remainder(z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::domain(format!(
            "gamma2_stirling_remainder needs z > 0, got {z}"
        )));
    }
    Ok(log_gamma2(z + 1.0)? - (0.75 * z * z - (0.5 * z * z - 1.0 / 12.0) * z.ln()))
}
