//! Finite combinatorics of the elliptic fixed points: the residues α_l, ᾱ_l,
//! the Γ-exponents of the elliptic zeta factors, the heat coefficient b₀(m)
//! and the determinant constants C_m.
//!
//! Everything is exact over Q; floats appear only where a logarithm does.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{EllipticLocus, QuadraticField};

/// Rejects odd weights and m < 2.
pub fn check_weight(m: u32) -> Result<()> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidWeight(m as i64));
    }
    Ok(())
}

/// The residues α_l(m), ᾱ_l(m) for one elliptic datum (ν, t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTable {
    pub nu: u32,
    pub t: u32,
    pub m: u32,
    pub alpha: Vec<u32>,
    pub alpha_bar: Vec<u32>,
}

impl AlphaTable {
    pub fn alpha0(&self) -> u32 {
        self.alpha[0]
    }

    /// Both residue lists are permutations of {0, …, ν−1}.
    pub fn is_permutation(&self) -> bool {
        let n = self.nu as usize;
        let mut seen = vec![(false, false); n];
        for (&a, &ab) in self.alpha.iter().zip(&self.alpha_bar) {
            seen[a as usize].0 = true;
            seen[ab as usize].1 = true;
        }
        seen.iter().all(|&(x, y)| x && y)
    }
}

/// α_l ≡ l + t(m−2)/2, ᾱ_l ≡ l − t(m−2)/2 (mod ν), l = 0, …, ν−1.
pub fn alpha_table(nu: u32, t: u32, m: u32) -> Result<AlphaTable> {
    check_weight(m)?;
    if nu < 2 {
        return Err(Error::domain(format!("nu = {nu} must be >= 2")));
    }
    if t.gcd(&nu) != 1 {
        return Err(Error::domain(format!(
            "t = {t} is not coprime to nu = {nu}"
        )));
    }
    let n = nu as u64;
    let shift = (t as u64 * ((m as u64 - 2) / 2)) % n;
    let alpha = (0..n).map(|l| ((l + shift) % n) as u32).collect();
    let alpha_bar = (0..n).map(|l| ((l + n - shift) % n) as u32).collect();
    Ok(AlphaTable {
        nu,
        t,
        m,
        alpha,
        alpha_bar,
    })
}

/// Checks α_l = α₀ + l for l ≤ ν − α₀ − 1 and α_l = α₀ − ν + l beyond.
pub fn piecewise_alpha_check(table: &AlphaTable) -> bool {
    let nu = table.nu as i64;
    let a0 = table.alpha0() as i64;
    table.alpha.iter().enumerate().all(|(l, &a)| {
        let l = l as i64;
        let expected = if l < nu - a0 { a0 + l } else { a0 - nu + l };
        a as i64 == expected
    })
}

/// Both sides of Σ_l l·α_l/ν² = (ν−1)(2ν−1)/(6ν) + α₀(α₀−ν)/(2ν).
pub fn weighted_sum_identity(table: &AlphaTable) -> (Rational64, Rational64) {
    let nu = table.nu as i64;
    let a0 = table.alpha0() as i64;
    let lhs = table
        .alpha
        .iter()
        .enumerate()
        .fold(Rational64::zero(), |acc, (l, &a)| {
            acc + Rational64::new(l as i64 * a as i64, nu * nu)
        });
    let rhs =
        Rational64::new((nu - 1) * (2 * nu - 1), 6 * nu) + Rational64::new(a0 * (a0 - nu), 2 * nu);
    (lhs, rhs)
}

/// Floating evaluation of Σ_{k=1}^{ν−1} 1/(1 − cos(2πk/ν)).
pub fn cosecant_sum_f64(nu: u32) -> f64 {
    (1..nu)
        .map(|k| {
            let half = std::f64::consts::PI * k as f64 / nu as f64;
            // 1 − cos 2x = 2 sin² x
            0.5 / (half.sin() * half.sin())
        })
        .sum()
}

/// Σ_{k=1}^{ν−1} 1/(1 − cos(2πk/ν)) = (ν² − 1)/6, checked against the
/// trigonometric sum.
pub fn cosecant_sum(nu: u32) -> Result<Rational64> {
    if nu < 2 {
        return Err(Error::domain(format!("nu = {nu} must be >= 2")));
    }
    let n = nu as i64;
    let exact = Rational64::new(n * n - 1, 6);
    let float = cosecant_sum_f64(nu);
    let diff = (float - exact.to_f64().unwrap_or(f64::NAN)).abs();
    if diff > 1e-10 * float.max(1.0) {
        return Err(Error::domain(format!(
            "cosecant sum for nu = {nu} disagrees with (nu^2 - 1)/6 by {diff:e}"
        )));
    }
    Ok(exact)
}

/// ν² − 1 − 6α₀(ν − α₀): the weight each elliptic datum carries in b₀(m),
/// C_m and the logarithmic growth of Z_ell. Reduces to ν² − 1 at m = 2.
pub fn elliptic_weight(nu: u32, t: u32, m: u32) -> Result<i64> {
    let table = alpha_table(nu, t, m)?;
    let n = nu as i64;
    let a0 = table.alpha0() as i64;
    Ok(n * n - 1 - 6 * a0 * (n - a0))
}

/// b₀(2) = −Σ_j (ν_j² − 1)/(24ν_j) and, for m ≥ 4,
/// b₀(m) = −Σ_j (ν_j² − 1 − 6α₀(ν_j − α₀))/(12ν_j); entries counted with
/// multiplicity.
pub fn b0(m: u32, locus: &EllipticLocus) -> Result<Rational64> {
    check_weight(m)?;
    let denom = if m == 2 { 24 } else { 12 };
    let mut acc = Rational64::zero();
    for p in locus.points() {
        let w = elliptic_weight(p.nu, p.t, m)?;
        acc -= Rational64::new(w * p.count as i64, denom * p.nu as i64);
    }
    Ok(acc)
}

/// The constant C_m of the determinant formula.
///
/// C₂ = −½ log ε + Σ (ν² − 1)/(12ν)·log ν and, for m ≥ 4,
/// C_m = Σ (ν² − 1 − 6α₀(ν − α₀))/(6ν)·log ν.
pub fn c_const(m: u32, field: &QuadraticField, locus: &EllipticLocus) -> Result<f64> {
    check_weight(m)?;
    let (mut acc, denom) = if m == 2 {
        (-0.5 * field.log_eps(), 12.0)
    } else {
        (0.0, 6.0)
    };
    for p in locus.points() {
        let w = elliptic_weight(p.nu, p.t, m)? as f64;
        let nu = p.nu as f64;
        acc += p.count as f64 * w / (denom * nu) * nu.ln();
    }
    Ok(acc)
}

/// Exponent of Γ((s+l)/ν) in the elliptic factor: (ν−1−2l)/(2ν) in the m = 2
/// half factor, (ν−1−α_l−ᾱ_l)/ν for m ≥ 4.
pub fn ell_exponent(l: u32, m: u32, nu: u32, t: u32) -> Result<Rational64> {
    let table = alpha_table(nu, t, m)?;
    if l >= nu {
        return Err(Error::domain(format!("l = {l} out of range for nu = {nu}")));
    }
    let n = nu as i64;
    Ok(if m == 2 {
        Rational64::new(n - 1 - 2 * l as i64, 2 * n)
    } else {
        let i = l as usize;
        Rational64::new(n - 1 - table.alpha[i] as i64 - table.alpha_bar[i] as i64, n)
    })
}

/// All ν exponents at once.
pub fn ell_exponents(m: u32, nu: u32, t: u32) -> Result<Vec<Rational64>> {
    (0..nu).map(|l| ell_exponent(l, m, nu, t)).collect()
}
