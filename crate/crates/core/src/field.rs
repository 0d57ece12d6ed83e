//! Exact arithmetic in the ring of integers of a real quadratic field
//! K = Q(√d), together with the field invariants needed downstream: the
//! discriminant, the fundamental unit and the special value ζ_K(−1).
//!
//! Elements of 𝒪_K are stored in half-integral coordinates (x + y√D)/2 with
//! x ≡ y·D (mod 2). Class number one is a caller-side assumption; nothing in
//! here checks it.

use std::cmp::Ordering;
use std::fmt;

use num_integer::{Integer, Roots};
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Upper limit on the y-coordinate explored by the fundamental unit search.
const UNIT_SEARCH_LIMIT: i64 = 50_000_000;

/// An element (x + y√D)/2 of 𝒪_K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraicInteger {
    x: i64,
    y: i64,
    disc: i64,
}

impl AlgebraicInteger {
    pub fn new(x: i64, y: i64, disc: i64) -> Result<Self> {
        if (x - y * (disc & 1)).rem_euclid(2) != 0 {
            return Err(Error::domain(format!(
                "({x} + {y}√{disc})/2 is not an algebraic integer"
            )));
        }
        Ok(AlgebraicInteger { x, y, disc })
    }

    /// The rational integer `n` viewed in 𝒪_K.
    pub fn from_int(n: i64, disc: i64) -> Self {
        AlgebraicInteger {
            x: 2 * n,
            y: 0,
            disc,
        }
    }

    pub fn zero(disc: i64) -> Self {
        Self::from_int(0, disc)
    }

    pub fn one(disc: i64) -> Self {
        Self::from_int(1, disc)
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn is_rational(&self) -> bool {
        self.y == 0
    }

    /// Trace a + a′ (always a rational integer).
    pub fn trace(&self) -> i64 {
        self.x
    }

    /// Field norm a·a′.
    pub fn norm(&self) -> i64 {
        let (x, y, d) = (self.x as i128, self.y as i128, self.disc as i128);
        ((x * x - y * y * d) / 4) as i64
    }

    pub fn to_f64(&self) -> f64 {
        (self.x as f64 + self.y as f64 * (self.disc as f64).sqrt()) / 2.0
    }

    /// Numeric value of the Galois conjugate.
    pub fn conj_f64(&self) -> f64 {
        (self.x as f64 - self.y as f64 * (self.disc as f64).sqrt()) / 2.0
    }

    /// Exact sign of the real number (x + y√D)/2.
    pub fn signum(&self) -> Ordering {
        surd_sign(self.x as i128, self.y as i128, self.disc as i128)
    }

    /// Exact comparison of the embedded value with the rational `q/2`.
    pub fn cmp_half_int(&self, q: i64) -> Ordering {
        surd_sign(
            self.x as i128 - q as i128,
            self.y as i128,
            self.disc as i128,
        )
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.disc, other.disc);
        Some(AlgebraicInteger {
            x: self.x.checked_add(other.x)?,
            y: self.y.checked_add(other.y)?,
            disc: self.disc,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.disc, other.disc);
        Some(AlgebraicInteger {
            x: self.x.checked_sub(other.x)?,
            y: self.y.checked_sub(other.y)?,
            disc: self.disc,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.disc, other.disc);
        let (x1, y1) = (self.x as i128, self.y as i128);
        let (x2, y2) = (other.x as i128, other.y as i128);
        let d = self.disc as i128;
        let x = (x1 * x2 + y1 * y2 * d) / 2;
        let y = (x1 * y2 + x2 * y1) / 2;
        Some(AlgebraicInteger {
            x: i64::try_from(x).ok()?,
            y: i64::try_from(y).ok()?,
            disc: self.disc,
        })
    }

    /// `self / other` if the quotient lies in 𝒪_K, `None` otherwise (or on
    /// division by zero).
    pub fn checked_div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        // self/other = self·other′ / N(other)
        let num = self.checked_mul(&galois_conjugate(other))?;
        let n = other.norm();
        if num.x % n != 0 || num.y % n != 0 {
            return None;
        }
        let q = AlgebraicInteger {
            x: num.x / n,
            y: num.y / n,
            disc: self.disc,
        };
        // parity must still hold for q to be integral
        AlgebraicInteger::new(q.x, q.y, q.disc).ok()
    }

    /// Returns `Some(b)` with b² = self if self is a square in 𝒪_K.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(*self);
        }
        let n = self.norm();
        if n < 0 {
            return None;
        }
        let r = n.sqrt();
        if r * r != n {
            return None;
        }
        // b = (u + v√D)/2 with b² = self: u² + v²D = 2x, uv = y, u² − v²D = ±4r
        for nb in [r, -r] {
            let u2 = self.x + 2 * nb;
            let v2d = self.x - 2 * nb;
            if u2 < 0 || v2d < 0 || v2d % self.disc != 0 {
                continue;
            }
            let v2 = v2d / self.disc;
            let (u, v) = (u2.sqrt(), v2.sqrt());
            if u * u != u2 || v * v != v2 {
                continue;
            }
            for (su, sv) in [(u, v), (u, -v)] {
                if let Ok(b) = AlgebraicInteger::new(su, sv, self.disc) {
                    if b.checked_mul(&b) == Some(*self) {
                        return Some(b);
                    }
                }
            }
        }
        None
    }
}

impl std::ops::Neg for AlgebraicInteger {
    type Output = Self;
    fn neg(self) -> Self {
        AlgebraicInteger {
            x: -self.x,
            y: -self.y,
            disc: self.disc,
        }
    }
}

impl fmt::Display for AlgebraicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.y < 0 { '-' } else { '+' };
        write!(f, "({} {} {}√{})/2", self.x, sign, self.y.abs(), self.disc)
    }
}

/// Sign of p + q√d for d > 0 not a perfect square.
fn surd_sign(p: i128, q: i128, d: i128) -> Ordering {
    match (p.cmp(&0), q.cmp(&0)) {
        (Ordering::Equal, Ordering::Equal) => Ordering::Equal,
        (a, b) if a != Ordering::Less && b != Ordering::Less => Ordering::Greater,
        (a, b) if a != Ordering::Greater && b != Ordering::Greater => Ordering::Less,
        (Ordering::Greater, _) => (p * p).cmp(&(q * q * d)),
        _ => (q * q * d).cmp(&(p * p)),
    }
}

/// σ: (x + y√D)/2 ↦ (x − y√D)/2.
pub fn galois_conjugate(a: &AlgebraicInteger) -> AlgebraicInteger {
    AlgebraicInteger {
        x: a.x,
        y: -a.y,
        disc: a.disc,
    }
}

/// Invariants of K = Q(√d).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticField {
    d: i64,
    disc: i64,
    eps: AlgebraicInteger,
    log_eps: f64,
    zeta_m1: Rational64,
}

impl QuadraticField {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// Fundamental unit ε > 1.
    pub fn eps(&self) -> AlgebraicInteger {
        self.eps
    }

    pub fn eps_f64(&self) -> f64 {
        self.eps.to_f64()
    }

    pub fn log_eps(&self) -> f64 {
        self.log_eps
    }

    /// ζ_K(−1) as an exact rational.
    pub fn zeta_m1(&self) -> Rational64 {
        self.zeta_m1
    }

    pub fn zeta_m1_f64(&self) -> f64 {
        rational_to_f64(self.zeta_m1)
    }
}

/// Builds the field invariants for squarefree `d ≥ 2`.
pub fn make_field(d: i64) -> Result<QuadraticField> {
    if d < 2 {
        return Err(Error::domain(format!("d = {d} must be >= 2")));
    }
    if !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
    let eps = fundamental_unit(disc)?;
    // log ε = log((x + y√D)/2), evaluated via asinh/acosh to avoid cancellation
    let log_eps = log_unit(&eps);
    let zeta_m1 = zeta_k_minus1(disc)?;
    Ok(QuadraticField {
        d,
        disc,
        eps,
        log_eps,
        zeta_m1,
    })
}

fn log_unit(eps: &AlgebraicInteger) -> f64 {
    // ε + ε′ = x with ε′ = N(ε)/ε: asinh(x/2) for N = −1, acosh(x/2) for N = +1
    if eps.norm() == -1 {
        (eps.x as f64 / 2.0).asinh()
    } else {
        (eps.x as f64 / 2.0).acosh()
    }
}

pub fn is_squarefree(n: i64) -> bool {
    let n = n.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// True when `disc` is the discriminant of a real quadratic field.
pub fn is_fundamental_discriminant(disc: i64) -> bool {
    if disc <= 1 {
        return false;
    }
    match disc.rem_euclid(4) {
        1 => is_squarefree(disc),
        0 => {
            let d = disc / 4;
            matches!(d.rem_euclid(4), 2 | 3) && is_squarefree(d)
        }
        _ => false,
    }
}

/// Smallest unit ε > 1 of 𝒪_K, found by scanning y = 1, 2, … for
/// x² − y²D = ±4 with x > 0.
pub fn fundamental_unit(disc: i64) -> Result<AlgebraicInteger> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::InvalidDiscriminant(disc));
    }
    let dd = disc as i128;
    let mut y: i64 = 1;
    loop {
        if y > UNIT_SEARCH_LIMIT {
            return Err(Error::Overflow {
                context: "fundamental unit search",
                bound: y - 1,
            });
        }
        let y2d = (y as i128) * (y as i128) * dd;
        if y2d + 4 > i64::MAX as i128 {
            return Err(Error::Overflow {
                context: "fundamental unit search",
                bound: y - 1,
            });
        }
        // norm −1 first: for equal y it gives the smaller unit
        for shift in [-4i128, 4] {
            let x2 = y2d + shift;
            if x2 <= 0 {
                continue;
            }
            let x = x2.sqrt();
            if x * x == x2 {
                if let Ok(u) = AlgebraicInteger::new(x as i64, y, disc) {
                    return Ok(u);
                }
            }
        }
        y += 1;
    }
}

/// Sum of divisors σ₁(n), n ≥ 1.
pub fn sigma1(n: u64) -> u64 {
    let mut total = 0;
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            total += k;
            if k * k != n {
                total += n / k;
            }
        }
        k += 1;
    }
    total
}

/// ζ_K(−1) = (1/60)·Σ_{b² < D, b ≡ D (mod 2)} σ₁((D − b²)/4).
pub fn zeta_k_minus1(disc: i64) -> Result<Rational64> {
    if !is_fundamental_discriminant(disc) {
        return Err(Error::InvalidDiscriminant(disc));
    }
    let mut total: u64 = 0;
    let b_max = (disc - 1).sqrt();
    for b in -b_max..=b_max {
        if (b - disc).rem_euclid(2) != 0 || b * b >= disc {
            continue;
        }
        total += sigma1(((disc - b * b) / 4) as u64);
    }
    Ok(Rational64::new(total as i64, 60))
}

/// One elliptic fixed-point datum: order ν, rotation type t, and the number
/// of classes carrying it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EllipticPoint {
    pub nu: u32,
    pub t: u32,
    pub count: u32,
}

impl EllipticPoint {
    pub fn new(nu: i64, t: i64, count: i64) -> Result<Self> {
        Self::checked(0, nu, t, count)
    }

    fn checked(index: usize, nu: i64, t: i64, count: i64) -> Result<Self> {
        let bad = |reason| Error::InvalidLocus {
            index,
            nu,
            t,
            count,
            reason,
        };
        if nu < 2 || nu > u32::MAX as i64 {
            return Err(bad("nu must be >= 2"));
        }
        if t < 1 || t >= nu {
            return Err(bad("t must satisfy 1 <= t < nu"));
        }
        if t.gcd(&nu) != 1 {
            return Err(bad("t must be coprime to nu"));
        }
        if count < 1 || count > u32::MAX as i64 {
            return Err(bad("count must be positive"));
        }
        Ok(EllipticPoint {
            nu: nu as u32,
            t: t as u32,
            count: count as u32,
        })
    }
}

/// The elliptic fixed-point data of X_K, as supplied by the user.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EllipticLocus {
    points: Vec<EllipticPoint>,
}

impl EllipticLocus {
    pub fn new(points: Vec<EllipticPoint>) -> Self {
        EllipticLocus { points }
    }

    /// Validates raw `(nu, t, count)` triples, reporting the first bad entry
    /// by its position.
    pub fn from_triples(triples: &[(i64, i64, i64)]) -> Result<Self> {
        let points = triples
            .iter()
            .enumerate()
            .map(|(i, &(nu, t, count))| EllipticPoint::checked(i, nu, t, count))
            .collect::<Result<Vec<_>>>()?;
        Ok(EllipticLocus { points })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn points(&self) -> &[EllipticPoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// E(X_K) = 2ζ_K(−1) + Σ_j (ν_j − 1)/ν_j, counting each entry `count` times.
pub fn euler_characteristic(zeta_m1: Rational64, locus: &EllipticLocus) -> Rational64 {
    locus.points().iter().fold(zeta_m1 * 2, |acc, p| {
        let nu = p.nu as i64;
        acc + Rational64::new((nu - 1) * p.count as i64, nu)
    })
}

/// Checks that E(X_K) is a positive even integer and returns it.
pub fn validate_surface(field: &QuadraticField, locus: &EllipticLocus) -> Result<Rational64> {
    check_parity(euler_characteristic(field.zeta_m1(), locus))
}

pub(crate) fn check_parity(euler: Rational64) -> Result<Rational64> {
    let two = Rational64::from_integer(2);
    if euler.is_integer() && euler > Rational64::zero() && (euler / two).is_integer() {
        Ok(euler)
    } else {
        Err(Error::ParityViolation {
            euler: euler.to_string(),
        })
    }
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn small_fields() {
        let k5 = make_field(5).unwrap();
        assert_eq!(k5.disc(), 5);
        assert_eq!((k5.eps().x(), k5.eps().y()), (1, 1));
        assert!((k5.eps_f64() - 1.618_033_988_7).abs() < 1e-10);
        assert_eq!(k5.zeta_m1(), r(1, 30));

        let k2 = make_field(2).unwrap();
        assert_eq!(k2.disc(), 8);
        assert!((k2.eps_f64() - 2.414_213_562_4).abs() < 1e-10);
        assert_eq!(k2.zeta_m1(), r(1, 12));

        let k13 = make_field(13).unwrap();
        assert_eq!(k13.disc(), 13);
        assert!((k13.eps_f64() - 3.302_775_637_7).abs() < 1e-10);
        assert_eq!(k13.zeta_m1(), r(1, 6));
    }

    #[test]
    fn log_eps_matches_direct_log() {
        for d in [2, 3, 5, 6, 7, 13, 94] {
            let k = make_field(d).unwrap();
            let direct = k.eps_f64().ln();
            assert!(
                (k.log_eps() - direct).abs() < 1e-12 * direct.max(1.0),
                "d={d}"
            );
        }
    }

    #[test]
    fn rejects_bad_d() {
        assert!(matches!(make_field(12), Err(Error::NotSquarefree(12))));
        assert!(make_field(1).is_err());
        assert!(matches!(
            zeta_k_minus1(20),
            Err(Error::InvalidDiscriminant(20))
        ));
        assert!(zeta_k_minus1(7).is_err());
    }

    #[test]
    fn zeta_divisor_sums() {
        assert_eq!(zeta_k_minus1(5).unwrap(), r(1, 30));
        assert_eq!(zeta_k_minus1(8).unwrap(), r(1, 12));
        assert_eq!(zeta_k_minus1(13).unwrap(), r(1, 6));
        assert_eq!(sigma1(12), 28);
    }

    #[test]
    fn conjugation() {
        let phi = AlgebraicInteger::new(1, 1, 5).unwrap();
        let c = galois_conjugate(&phi);
        assert_eq!((c.x(), c.y()), (1, -1));
        assert!((c.to_f64() - (1.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        let three = AlgebraicInteger::new(6, 0, 5).unwrap();
        assert_eq!(galois_conjugate(&three), three);
    }

    #[test]
    fn parity_rule() {
        assert!(AlgebraicInteger::new(1, 2, 5).is_err());
        assert!(AlgebraicInteger::new(1, 1, 8).is_err());
        assert!(AlgebraicInteger::new(2, 1, 8).is_ok());
    }

    #[test]
    fn exact_division_and_sqrt() {
        let phi = AlgebraicInteger::new(1, 1, 5).unwrap();
        let phi2 = phi.checked_mul(&phi).unwrap();
        assert_eq!((phi2.x(), phi2.y()), (3, 1));
        assert_eq!(phi2.checked_div_exact(&phi), Some(phi));
        let two = AlgebraicInteger::from_int(2, 5);
        assert_eq!(phi.checked_div_exact(&two), None);
        assert_eq!(
            phi2.sqrt_exact().map(|b| b.checked_mul(&b).unwrap()),
            Some(phi2)
        );
        // 5 = (√5)² with √5 = (0 + 2√5)/2
        let s5 = AlgebraicInteger::new(0, 2, 5).unwrap();
        assert_eq!(
            AlgebraicInteger::from_int(5, 5)
                .sqrt_exact()
                .map(|b| b.checked_mul(&b)),
            Some(Some(AlgebraicInteger::from_int(5, 5)))
        );
        assert_eq!(s5.checked_mul(&s5), Some(AlgebraicInteger::from_int(5, 5)));
        assert_eq!(AlgebraicInteger::from_int(3, 5).sqrt_exact(), None);
    }

    #[test]
    fn exact_signs() {
        let a = AlgebraicInteger::new(5, 1, 5).unwrap(); // 3.618…
        assert_eq!(a.cmp_half_int(4), Ordering::Greater);
        assert_eq!(galois_conjugate(&a).cmp_half_int(4), Ordering::Less);
        assert_eq!(galois_conjugate(&a).cmp_half_int(-4), Ordering::Greater);
        let b = AlgebraicInteger::new(-3, 1, 5).unwrap(); // −0.38…
        assert_eq!(b.signum(), Ordering::Less);
    }

    #[test]
    fn euler_characteristic_examples() {
        let k5 = make_field(5).unwrap();
        let locus =
            EllipticLocus::from_triples(&[(2, 1, 2), (3, 1, 2), (5, 1, 1), (5, 2, 1)]).unwrap();
        assert_eq!(validate_surface(&k5, &locus).unwrap(), r(4, 1));

        assert_eq!(
            check_parity(euler_characteristic(r(1, 1), &EllipticLocus::empty())).unwrap(),
            r(2, 1)
        );

        let bad = EllipticLocus::from_triples(&[(2, 1, 1)]).unwrap();
        assert_eq!(euler_characteristic(k5.zeta_m1(), &bad), r(17, 30));
        assert!(matches!(
            validate_surface(&k5, &bad),
            Err(Error::ParityViolation { .. })
        ));
        // odd integer is rejected too
        assert!(check_parity(r(3, 1)).is_err());
        assert!(check_parity(r(0, 1)).is_err());
    }

    #[test]
    fn locus_validation_names_entry() {
        let err = EllipticLocus::from_triples(&[(2, 1, 1), (4, 2, 1)]).unwrap_err();
        match err {
            Error::InvalidLocus { index, nu, t, .. } => assert_eq!((index, nu, t), (1, 4, 2)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(EllipticPoint::new(3, 3, 1).is_err());
        assert!(EllipticPoint::new(1, 0, 1).is_err());
        assert!(EllipticPoint::new(3, 1, 0).is_err());
    }
}
