//! η_p(w, s) = Γ(w − p)·(s(s−1))^{p−w}/Γ(w) and its w-derivative at 0.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{gamma_complex, rgamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaOrder {
    Zero,
    Half,
    One,
}

impl EtaOrder {
    pub fn from_f64(p: f64) -> Result<Self> {
        if p == 0.0 {
            Ok(EtaOrder::Zero)
        } else if p == 0.5 {
            Ok(EtaOrder::Half)
        } else if p == 1.0 {
            Ok(EtaOrder::One)
        } else {
            Err(Error::domain(format!("eta order must be 0, 1/2 or 1, got {p}")))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            EtaOrder::Zero => 0.0,
            EtaOrder::Half => 0.5,
            EtaOrder::One => 1.0,
        }
    }
}

fn check_x(s: f64) -> Result<f64> {
    let x = s * (s - 1.0);
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!(
            "s(s - 1) must be positive, got s = {s}"
        )));
    }
    Ok(x)
}

/// η_p(w, s). Γ(w − p)/Γ(w) is simplified exactly for p ∈ {0, 1}.
pub fn eta(w: Complex64, s: f64, p: EtaOrder) -> Result<Complex64> {
    let x = check_x(s)?;
    let xp = |e: Complex64| (e * x.ln()).exp();
    match p {
        EtaOrder::Zero => Ok(xp(-w)),
        EtaOrder::One => {
            let d = w - 1.0;
            if d.norm() == 0.0 {
                return Err(Error::domain("eta_1 has a pole at w = 1"));
            }
            Ok(xp(1.0 - w) / d)
        }
        EtaOrder::Half => {
            let g = gamma_complex(w - 0.5)?;
            Ok(g * rgamma(w) * xp(0.5 - w))
        }
    }
}

/// ∂_w η_p(w, s) at w = 0, with X = s(s−1): −log X, −2√π·√X, X(log X − 1).
pub fn eta_deriv0(s: f64, p: EtaOrder) -> Result<f64> {
    let x = check_x(s)?;
    Ok(match p {
        EtaOrder::Zero => -x.ln(),
        EtaOrder::Half => -2.0 * PI.sqrt() * x.sqrt(),
        EtaOrder::One => x * (x.ln() - 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        let z = Complex64::new(0.0, 0.0);
        assert!((eta(z, 2.0, EtaOrder::One).unwrap().re + 2.0).abs() < 1e-15);
        assert!((eta(z, 2.0, EtaOrder::Zero).unwrap().re - 1.0).abs() < 1e-15);
        assert!(eta(z, 2.0, EtaOrder::Half).unwrap().norm() < 1e-15);
        assert!(eta(z, 0.5, EtaOrder::Zero).is_err());
        assert!(EtaOrder::from_f64(0.25).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        for p in [EtaOrder::Zero, EtaOrder::Half, EtaOrder::One] {
            for s in [1.5, 2.0, 7.25] {
                let f = |w: f64| eta(Complex64::new(w, 0.0), s, p).unwrap().re;
                let fd = (f(h) - f(-h)) / (2.0 * h);
                let d = eta_deriv0(s, p).unwrap();
                assert!(
                    (fd - d).abs() < 1e-7 * d.abs().max(1.0),
                    "{p:?} s={s}: {fd} vs {d}"
                );
            }
        }
    }
}
