//! The numerical check suite run by `hilzeta verify`.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::config::Surface;
use crate::elliptic::{
    alpha_table, b0, cosecant_sum_f64, piecewise_alpha_check, weighted_sum_identity,
};
use crate::field::validate_surface;
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::special::{double_zeta_oracle, gamma2_stirling_remainder, log_gamma2};
use crate::spectral::{
    elliptic_limit, eta, eta_deriv0, small_t_fit, telescoping_residual, theta_from_geometry,
    EtaOrder,
};
use crate::zeta::asymptotic_remainder;

/// Starting t for the three-level Richardson extrapolation of E₂(t).
pub const ELLIPTIC_LIMIT_T0: f64 = 0.005;

/// One check: what was measured, against which tolerance, and what it
/// exercises.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub anchor: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn within(
        name: impl Into<String>,
        measured: f64,
        tolerance: f64,
        anchor: &'static str,
    ) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            anchor,
            pass: measured.is_finite() && measured.abs() <= tolerance,
            detail: String::new(),
        }
    }

    fn flag(name: impl Into<String>, pass: bool, anchor: &'static str, detail: String) -> Self {
        Check {
            name: name.into(),
            measured: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            anchor,
            pass,
            detail,
        }
    }

    fn failed(name: impl Into<String>, anchor: &'static str, e: crate::Error) -> Self {
        Check::flag(name, false, anchor, e.to_string())
    }
}

/// Kronecker symbol (D/n) for n ≥ 1.
pub fn kronecker(d: i64, n: i64) -> i64 {
    let mut n = n;
    let mut res = 1;
    while n % 2 == 0 {
        n /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => res = -res,
            _ => return 0,
        }
    }
    // Jacobi symbol (d/n) for odd n
    let mut a = d.rem_euclid(n);
    let mut n = n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            res = -res;
        }
        a %= n;
    }
    if n == 1 {
        res
    } else {
        0
    }
}

/// ζ_K(−1) = B_{2,χ_D}/24 with B_{2,χ} = D·Σ_{a=1}^{D} χ_D(a)·B₂(a/D).
pub fn zeta_m1_bernoulli_oracle(disc: i64) -> Rational64 {
    let mut acc = Rational64::zero();
    for a in 1..=disc {
        let chi = kronecker(disc, a);
        if chi != 0 {
            let x = Rational64::new(a, disc);
            acc += Rational64::from_integer(chi) * (x * x - x + Rational64::new(1, 6));
        }
    }
    acc * disc / 24
}

fn field_checks(s: &Surface, out: &mut Vec<Check>) {
    const A: &str = "Euler characteristic parity of X_K";
    match validate_surface(&s.field, &s.locus) {
        Ok(e) => out.push(Check {
            name: "euler characteristic is a positive even integer".into(),
            measured: e.to_f64().unwrap_or(f64::NAN),
            tolerance: 0.0,
            anchor: A,
            pass: true,
            detail: format!("E(X_K) = {e}"),
        }),
        Err(e) => out.push(Check::failed(
            "euler characteristic is a positive even integer",
            A,
            e,
        )),
    }
    let oracle = zeta_m1_bernoulli_oracle(s.field.disc());
    out.push(Check::flag(
        "zeta_K(-1) divisor sum equals B_{2,chi}/24",
        oracle == s.field.zeta_m1(),
        "value of zeta_K(-1)",
        format!("divisor sum {}, Bernoulli {}", s.field.zeta_m1(), oracle),
    ));
    let n = s.field.eps().norm();
    out.push(Check::flag(
        "fundamental unit has norm +-1",
        n.abs() == 1,
        "fundamental unit",
        format!("N(eps) = {n}"),
    ));
}

fn gamma2_checks(out: &mut Vec<Check>) {
    const A: &str = "Stirling asymptotics of the double Gamma function";
    let zs = [10.0, 30.0, 100.0, 300.0];
    match zs
        .iter()
        .map(|&z| gamma2_stirling_remainder(z))
        .collect::<crate::Result<Vec<_>>>()
    {
        Ok(r) => {
            let trend = r
                .iter()
                .map(|v| format!("{v:.3e}"))
                .collect::<Vec<_>>()
                .join(", ");
            let decreasing = r.windows(2).all(|w| w[1].abs() < w[0].abs());
            out.push(Check::within(
                "|Gamma2 Stirling remainder| at z = 100",
                r[2],
                1e-2,
                A,
            ));
            out.push(Check::flag(
                "Gamma2 Stirling remainder decreasing over z = 10, 30, 100, 300",
                decreasing,
                A,
                format!("remainders: {trend}"),
            ));
        }
        Err(e) => out.push(Check::failed("Gamma2 Stirling remainder", A, e)),
    }
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 2.5, 7.0] {
        match (log_gamma2(x), double_zeta_oracle(x)) {
            (Ok(a), Ok(b)) => worst = worst.max((a - b).abs()),
            (Err(e), _) | (_, Err(e)) => {
                out.push(Check::failed("log Gamma2 vs double-zeta oracle", A, e));
                return;
            }
        }
    }
    out.push(Check::within(
        "log Gamma2 vs double-zeta oracle (4 points)",
        worst,
        1e-6,
        A,
    ));
}

fn combinatorics_checks(out: &mut Vec<Check>) {
    const A: &str = "shift permutation identities of the elliptic exponents";
    let mut bad = Vec::new();
    for nu in 2..=30u32 {
        for t in (1..nu).filter(|t| num_integer::gcd(*t, nu) == 1) {
            for m in (2..=20).step_by(2) {
                let Ok(tab) = alpha_table(nu, t, m) else {
                    bad.push((nu, t, m));
                    continue;
                };
                let zero_sum: i64 = tab
                    .alpha
                    .iter()
                    .zip(&tab.alpha_bar)
                    .map(|(&a, &b)| nu as i64 - 1 - a as i64 - b as i64)
                    .sum();
                let (lhs, rhs) = weighted_sum_identity(&tab);
                if !tab.is_permutation()
                    || zero_sum != 0
                    || !piecewise_alpha_check(&tab)
                    || lhs != rhs
                {
                    bad.push((nu, t, m));
                }
            }
        }
    }
    out.push(Check::flag(
        "permutation, zero-sum, piecewise and weighted-sum identities for nu <= 30, m <= 20",
        bad.is_empty(),
        A,
        format!("{} failing (nu, t, m) triples", bad.len()),
    ));
    let worst = (2..=50u32)
        .map(|nu| (cosecant_sum_f64(nu) - (nu as f64 * nu as f64 - 1.0) / 6.0).abs())
        .fold(0.0, f64::max);
    out.push(Check::within(
        "cosecant sum vs (nu^2-1)/6 for nu <= 50",
        worst,
        1e-10,
        A,
    ));
}

fn asymptotic_checks(s: &Surface, out: &mut Vec<Check>) {
    const A: &str = "large-s asymptotics of the completed zeta factors";
    for m in [2, 4] {
        match asymptotic_remainder(30.0, m, &s.field, &s.locus) {
            Ok(r) => out.push(Check::within(
                format!("|asymptotic remainder| at s = 30, m = {m}"),
                r,
                1e-2,
                A,
            )),
            Err(e) => out.push(Check::failed(
                format!("asymptotic remainder, m = {m}"),
                A,
                e,
            )),
        }
        let rs: crate::Result<Vec<f64>> = [10.0, 20.0, 40.0]
            .iter()
            .map(|&x| asymptotic_remainder(x, m, &s.field, &s.locus))
            .collect();
        match rs {
            Ok(r) => out.push(Check::flag(
                format!("asymptotic remainder decreasing over s = 10, 20, 40, m = {m}"),
                r.windows(2).all(|w| w[1].abs() < w[0].abs()),
                A,
                format!("{:.4e}, {:.4e}, {:.4e}", r[0], r[1], r[2]),
            )),
            Err(e) => out.push(Check::failed(
                format!("asymptotic remainder trend, m = {m}"),
                A,
                e,
            )),
        }
    }
}

fn heat_checks(s: &Surface, out: &mut Vec<Check>) {
    const A: &str = "small-t heat asymptotics";
    let q = s.field.zeta_m1_f64();
    let le = s.field.log_eps();
    let b = match b0(2, &s.locus) {
        Ok(b) => b.to_f64().unwrap_or(f64::NAN),
        Err(e) => {
            out.push(Check::failed("b0(2)", A, e));
            return;
        }
    };
    let samples: crate::Result<Vec<(f64, f64)>> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&t| Ok((t, theta_from_geometry(&s.field, &s.locus, &[], 2, t)?)))
        .collect();
    match samples.and_then(|sm| small_t_fit(&sm)) {
        Ok((a, bb, c)) => {
            out.push(Check::within(
                "small-t fit 1/t coefficient (relative)",
                (a - q / 2.0) / (q / 2.0),
                1e-4,
                A,
            ));
            out.push(Check::within(
                "small-t fit t^{-1/2} coefficient",
                bb + le / (2.0 * std::f64::consts::PI.sqrt()),
                1e-3,
                A,
            ));
            out.push(Check::within(
                "small-t fit constant term",
                c - (-q / 6.0 + b + 1.0),
                1e-2,
                A,
            ));
        }
        Err(e) => out.push(Check::failed("small-t fit", A, e)),
    }
    match elliptic_limit(&s.locus, 2, ELLIPTIC_LIMIT_T0) {
        Ok(l) => out.push(Check::within(
            "elliptic heat limit vs b0(2)",
            l - b,
            1e-6,
            A,
        )),
        Err(e) => out.push(Check::failed("elliptic heat limit", A, e)),
    }
}

fn eta_checks(out: &mut Vec<Check>) {
    const A: &str = "w-derivatives of the eta continuation functions";
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for p in [EtaOrder::Zero, EtaOrder::Half, EtaOrder::One] {
        for s in [2.0, 3.0, 5.0] {
            let f = |w: f64| eta(num_complex::Complex64::new(w, 0.0), s, p).map(|z| z.re);
            match (f(h), f(-h), eta_deriv0(s, p)) {
                (Ok(a), Ok(b), Ok(d)) => match (f(2.0 * h), f(-2.0 * h)) {
                    (Ok(a2), Ok(b2)) => {
                        let fd = (8.0 * (a - b) - (a2 - b2)) / (12.0 * h);
                        worst = worst.max((fd - d).abs());
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        out.push(Check::failed("eta derivative", A, e));
                        return;
                    }
                },
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    out.push(Check::failed("eta derivative", A, e));
                    return;
                }
            }
        }
    }
    out.push(Check::within(
        "eta_deriv0 vs fourth-order central differences, step 1e-4",
        worst,
        1e-6,
        A,
    ));
}

fn telescoping_checks(s: &Surface, out: &mut Vec<Check>) {
    const A: &str = "determinant product formula vs exponent polynomials";
    let mut worst: f64 = 0.0;
    for m in [2, 4, 6] {
        for x in [2.0, 3.5, 10.0] {
            match telescoping_residual(x, m, &s.field, &s.locus, &[], 1) {
                Ok(r) => worst = worst.max(r),
                Err(e) => {
                    out.push(Check::failed("telescoping residual", A, e));
                    return;
                }
            }
        }
    }
    out.push(Check::within(
        "telescoping residual, m in {2,4,6}, s in {2,3.5,10}",
        worst,
        1e-12,
        A,
    ));
}

fn quadrature_checks(out: &mut Vec<Check>) {
    const A: &str = "integral of r^2/cosh^2(pi r)";
    let pi = std::f64::consts::PI;
    let r = integrate_to_infinity(
        |r: f64| {
            let c = (pi * r).cosh();
            if c.is_finite() {
                r * r / (c * c)
            } else {
                0.0
            }
        },
        0.0,
        QuadOptions::default(),
    );
    match r {
        Ok(v) => out.push(Check::within(
            "int_0^inf r^2/cosh^2(pi r) dr = 1/(12 pi)",
            v.value - 1.0 / (12.0 * pi),
            1e-10,
            A,
        )),
        Err(e) => out.push(Check::failed("sech^2 moment", A, e)),
    }
}

/// Runs every check against the given surface, field checks first.
pub fn run_suite(surface: &Surface) -> Vec<Check> {
    let mut out = Vec::new();
    field_checks(surface, &mut out);
    gamma2_checks(&mut out);
    combinatorics_checks(&mut out);
    asymptotic_checks(surface, &mut out);
    heat_checks(surface, &mut out);
    eta_checks(&mut out);
    telescoping_checks(surface, &mut out);
    quadrature_checks(&mut out);
    out
}
