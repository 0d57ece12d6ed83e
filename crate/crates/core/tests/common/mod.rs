#![allow(dead_code)]

use hilzeta_core::field::EllipticLocus;

/// Fundamental unit of O_K from the period of the continued fraction of the
/// reduced generator β = (P₀ + √d)/Q₀: ε = q_{l−1}β + q_{l−2}. Returns (x, y)
/// with ε = (x + y√D)/2.
pub fn cf_unit(d: i64) -> (i64, i64) {
    let r = (d as f64).sqrt().floor() as i64;
    let (p0, q0) = if d % 4 == 1 {
        // β = (1 + √d)/2 + ⌊(√d − 1)/2⌋
        let k = (r - 1) / 2;
        (2 * k + 1, 2)
    } else {
        (r, 1)
    };
    let (mut p, mut q) = (p0, q0);
    let (mut qm2, mut qm1) = (0i64, 1i64);
    let mut first = true;
    loop {
        let a = (p + r) / q;
        if !first {
            let next = a * qm1 + qm2;
            qm2 = qm1;
            qm1 = next;
        }
        first = false;
        let np = a * q - p;
        let nq = (d - np * np) / q;
        p = np;
        q = nq;
        if (p, q) == (p0, q0) {
            break;
        }
    }
    // after the loop qm1 = q_{l−1}, qm2 = q_{l−2}
    if q0 == 2 {
        (qm1 * p0 + 2 * qm2, qm1)
    } else {
        (2 * (qm1 * p0 + qm2), qm1)
    }
}

/// The D = 5 sample: (2,1)×2, (3,1)×2, (5,1), (5,2).
pub fn sample_locus() -> EllipticLocus {
    EllipticLocus::from_triples(&[(2, 1, 2), (3, 1, 2), (5, 1, 1), (5, 2, 1)]).unwrap()
}
