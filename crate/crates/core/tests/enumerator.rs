use std::collections::HashMap;
use std::sync::Mutex;

use hilzeta_core::field::{make_field, AlgebraicInteger};
use hilzeta_core::geodesic::{
    angle_distance, classify, enumerate_he, expand_powers, for_each_in_box, he_invariants,
    read_geodesics, write_geodesics, ElementTag, GeodesicClass, GroupElement,
};
use proptest::prelude::*;

fn ai(x: i64, y: i64) -> AlgebraicInteger {
    AlgebraicInteger::new(x, y, 5).unwrap()
}

fn companion(tr: AlgebraicInteger) -> GroupElement {
    GroupElement::new(ai(0, 0), ai(-2, 0), ai(2, 0), tr).unwrap()
}

#[test]
fn height_six_contains_companion_class() {
    let k = make_field(5).unwrap();
    let classes = enumerate_he(&k, 6).unwrap();
    let hit = classes
        .iter()
        .find(|c| (c.norm - 10.99925).abs() < 1e-3 && (c.omega - 0.8081).abs() < 1e-3)
        .expect("companion class present");
    let (n, w) = he_invariants(&companion(ai(5, 1))).unwrap();
    assert!((hit.norm - n).abs() < 1e-12 && angle_distance(hit.omega, w) < 1e-12);
    assert!(enumerate_he(&k, 1).unwrap().is_empty());
}

#[test]
fn classification_is_exhaustive_on_height_three() {
    let tally = Mutex::new(HashMap::new());
    for_each_in_box(5, 3, |g| {
        let tag = classify(&g).expect("every element gets a tag").tag;
        // independent reading of the two traces in floating point
        let (t1, t2) = (g.trace().to_f64().abs(), g.trace().conj_f64().abs());
        let side = |t: f64| {
            if (t - 2.0).abs() < 1e-12 {
                0
            } else if t > 2.0 {
                1
            } else {
                -1
            }
        };
        let expected = match (side(t1), side(t2)) {
            (0, 0) if g.b.is_zero() && g.c.is_zero() && g.a == g.d => ElementTag::Identity,
            (0, 0) => ElementTag::Parabolic,
            (1, 1) => ElementTag::Hyperbolic,
            (-1, -1) => ElementTag::Elliptic,
            (1, -1) => ElementTag::HyperbolicElliptic,
            (-1, 1) => ElementTag::EllipticHyperbolic,
            other => panic!("mixed parabolic type {other:?} for {g:?}"),
        };
        assert_eq!(tag, expected, "{g:?}");
        *tally
            .lock()
            .unwrap()
            .entry(format!("{tag:?}"))
            .or_insert(0usize) += 1;
    })
    .unwrap();
    let tally = tally.into_inner().unwrap();
    for t in [
        "Identity",
        "Parabolic",
        "Hyperbolic",
        "Elliptic",
        "HyperbolicElliptic",
        "EllipticHyperbolic",
    ] {
        assert!(
            tally.get(t).copied().unwrap_or(0) > 0,
            "no {t} in the box: {tally:?}"
        );
    }
}

#[test]
fn classes_persist_with_height() {
    let k = make_field(5).unwrap();
    let small = enumerate_he(&k, 3).unwrap();
    let big = enumerate_he(&k, 4).unwrap();
    for c in &small {
        assert!(
            big.iter().any(|b| (b.norm - c.norm).abs() <= 1e-9 * c.norm
                && angle_distance(b.omega, c.omega) <= 1e-9),
            "{c:?} lost at height 4"
        );
    }
}

#[test]
fn invariants_are_conjugation_invariant() {
    let conj = Mutex::new(Vec::new());
    for_each_in_box(5, 1, |g| conj.lock().unwrap().push(g)).unwrap();
    let conj = conj.into_inner().unwrap();
    let gamma = companion(ai(5, 1));
    let (n, w) = he_invariants(&gamma).unwrap();
    for h in conj.iter().take(200) {
        let c = h
            .checked_mul(&gamma)
            .and_then(|x| x.checked_mul(&h.inverse()))
            .unwrap();
        let (n2, w2) = he_invariants(&c).unwrap();
        assert!((n - n2).abs() < 1e-9 * n && angle_distance(w, w2) < 1e-9);
    }
}

#[test]
fn powers_expand_consistently() {
    let g = GeodesicClass::primitive(11.0, 0.8).unwrap();
    let all = expand_powers(&[g], 2000.0).unwrap();
    assert_eq!(all.len(), 3);
    assert!((all[2].norm - 1331.0).abs() < 1e-9);
    assert!(angle_distance(all[1].omega, 1.6) < 1e-12);
    let sq = companion(ai(5, 1)).checked_pow(2).unwrap();
    let (n2, w2) = he_invariants(&sq).unwrap();
    let (n, w) = he_invariants(&companion(ai(5, 1))).unwrap();
    assert!((n2 - n * n).abs() < 1e-9 * n2 && angle_distance(w2, 2.0 * w) < 1e-9);
}

proptest! {
    #[test]
    fn csv_round_trip(entries in prop::collection::vec((1.001f64..1e6, 0.001f64..3.14, 1u32..5), 0..20)) {
        let classes: Vec<GeodesicClass> = entries
            .iter()
            .map(|&(n, w, k)| GeodesicClass::new(n, w, k, true, n).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_geodesics(&mut buf, &classes).unwrap();
        let back = read_geodesics(buf.as_slice(), "mem").unwrap();
        prop_assert_eq!(back, classes);
    }
}
