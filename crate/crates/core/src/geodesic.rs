//! Elements of the Hilbert modular group PSL(2, 𝒪_K), their classification
//! by the traces of both embeddings, and a bounded-height search for
//! hyperbolic-elliptic classes.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fs::File;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{galois_conjugate, AlgebraicInteger, QuadraticField};
use crate::numeric::fmt17;

/// Tolerance used to merge classes with equal invariants.
pub const DEDUP_TOL: f64 = 1e-9;

/// Upper limit on (box size)³ for [`enumerate_he`].
const MAX_SEARCH: u128 = 1 << 40;

/// A matrix [[a, b], [c, d]] over 𝒪_K with ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub a: AlgebraicInteger,
    pub b: AlgebraicInteger,
    pub c: AlgebraicInteger,
    pub d: AlgebraicInteger,
}

fn overflow(context: &'static str) -> Error {
    Error::Overflow {
        context,
        bound: i64::MAX,
    }
}

impl GroupElement {
    pub fn new(
        a: AlgebraicInteger,
        b: AlgebraicInteger,
        c: AlgebraicInteger,
        d: AlgebraicInteger,
    ) -> Result<Self> {
        let g = GroupElement { a, b, c, d };
        let det = g.det()?;
        if det != AlgebraicInteger::one(a.disc()) {
            return Err(Error::domain(format!("determinant is {det}, not 1")));
        }
        Ok(g)
    }

    pub fn identity(disc: i64) -> Self {
        let (o, z) = (AlgebraicInteger::one(disc), AlgebraicInteger::zero(disc));
        GroupElement {
            a: o,
            b: z,
            c: z,
            d: o,
        }
    }

    fn det(&self) -> Result<AlgebraicInteger> {
        let ad = self
            .a
            .checked_mul(&self.d)
            .ok_or_else(|| overflow("determinant"))?;
        let bc = self
            .b
            .checked_mul(&self.c)
            .ok_or_else(|| overflow("determinant"))?;
        ad.checked_sub(&bc).ok_or_else(|| overflow("determinant"))
    }

    pub fn trace(&self) -> AlgebraicInteger {
        self.a
            .checked_add(&self.d)
            .expect("trace of a box element fits in i64")
    }

    /// The second embedding γ′, written as an element over 𝒪_K again.
    pub fn galois(&self) -> Self {
        GroupElement {
            a: galois_conjugate(&self.a),
            b: galois_conjugate(&self.b),
            c: galois_conjugate(&self.c),
            d: galois_conjugate(&self.d),
        }
    }

    /// Swaps the roles of the two embeddings (γ, γ′) ↦ (γ′, γ).
    pub fn swap_embeddings(&self) -> Self {
        self.galois()
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let dot = |p: &AlgebraicInteger,
                   q: &AlgebraicInteger,
                   r: &AlgebraicInteger,
                   s: &AlgebraicInteger| {
            p.checked_mul(q)?.checked_add(&r.checked_mul(s)?)
        };
        Some(GroupElement {
            a: dot(&self.a, &o.a, &self.b, &o.c)?,
            b: dot(&self.a, &o.b, &self.b, &o.d)?,
            c: dot(&self.c, &o.a, &self.d, &o.c)?,
            d: dot(&self.c, &o.b, &self.d, &o.d)?,
        })
    }

    pub fn checked_pow(&self, k: u32) -> Option<Self> {
        let mut acc = GroupElement::identity(self.a.disc());
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Some(acc)
    }

    fn is_scalar(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementTag {
    Identity,
    Hyperbolic,
    Elliptic,
    HyperbolicElliptic,
    EllipticHyperbolic,
    Parabolic,
}

/// Type 1: no fixed point shared with a parabolic element; type 2 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperbolicSubtype {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ElementClass {
    pub tag: ElementTag,
    pub hyperbolic_subtype: Option<HyperbolicSubtype>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TraceKind {
    Large,
    Small,
    Two,
}

fn trace_kind(tr: &AlgebraicInteger) -> TraceKind {
    // |tr| vs 2, exactly: compare with ±4/2
    let above = tr.cmp_half_int(4);
    let below = tr.cmp_half_int(-4);
    match (above, below) {
        (Ordering::Greater, _) | (_, Ordering::Less) => TraceKind::Large,
        (Ordering::Equal, _) | (_, Ordering::Equal) => TraceKind::Two,
        _ => TraceKind::Small,
    }
}

/// Classifies γ = (γ₁, γ₂) by |tr γ₁| and |tr γ₂| against 2.
pub fn classify(g: &GroupElement) -> Result<ElementClass> {
    let det = g.det()?;
    if det != AlgebraicInteger::one(g.a.disc()) {
        return Err(Error::domain(format!("determinant is {det}, not 1")));
    }
    let tr = g.trace();
    let k1 = trace_kind(&tr);
    let k2 = trace_kind(&galois_conjugate(&tr));
    let tag = match (k1, k2) {
        (TraceKind::Two, TraceKind::Two) if g.is_scalar() => ElementTag::Identity,
        (TraceKind::Two, TraceKind::Two) => ElementTag::Parabolic,
        (TraceKind::Large, TraceKind::Large) => ElementTag::Hyperbolic,
        (TraceKind::Small, TraceKind::Small) => ElementTag::Elliptic,
        (TraceKind::Large, TraceKind::Small) => ElementTag::HyperbolicElliptic,
        (TraceKind::Small, TraceKind::Large) => ElementTag::EllipticHyperbolic,
        _ => {
            return Err(Error::domain(format!(
                "traces {tr} and its conjugate give a mixed parabolic type"
            )))
        }
    };
    let hyperbolic_subtype = if tag == ElementTag::Hyperbolic {
        Some(hyperbolic_subtype(g)?)
    } else {
        None
    };
    Ok(ElementClass {
        tag,
        hyperbolic_subtype,
    })
}

/// Fixed points (a − d ± √(tr² − 4))/(2c) lie in K ∪ {∞} iff c = 0 or
/// tr² − 4 is a square in 𝒪_K.
fn hyperbolic_subtype(g: &GroupElement) -> Result<HyperbolicSubtype> {
    if g.c.is_zero() {
        return Ok(HyperbolicSubtype::Type2);
    }
    let tr = g.trace();
    let disc = tr
        .checked_mul(&tr)
        .and_then(|t2| t2.checked_sub(&AlgebraicInteger::from_int(4, tr.disc())))
        .ok_or_else(|| overflow("fixed-point discriminant"))?;
    Ok(if disc.sqrt_exact().is_some() {
        HyperbolicSubtype::Type2
    } else {
        HyperbolicSubtype::Type1
    })
}

/// Reduces an angle into [0, π).
pub fn fold_angle(x: f64) -> f64 {
    let r = x.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Distance between two angles modulo π.
pub fn angle_distance(x: f64, y: f64) -> f64 {
    let d = fold_angle(x - y);
    d.min(PI - d)
}

/// (N(γ), ω) for a hyperbolic-elliptic element.
///
/// ω carries the rotation sense of γ₂ (sign of its lower-left entry), so γ
/// and γ⁻¹ get ω and π − ω; both are invariant under γ ↦ −γ.
pub fn he_invariants(g: &GroupElement) -> Result<(f64, f64)> {
    let class = classify(g)?;
    if class.tag != ElementTag::HyperbolicElliptic {
        return Err(Error::domain(format!(
            "he_invariants needs a hyperbolic-elliptic element, got {:?}",
            class.tag
        )));
    }
    let tr = g.trace();
    let t = tr.to_f64().abs();
    let t2 = tr.conj_f64();
    let root = t * 0.5 + (0.25 * t * t - 1.0).sqrt();
    let norm = root * root;
    let c2 = galois_conjugate(&g.c);
    let sign = if c2.signum() == Ordering::Less {
        -1.0
    } else {
        1.0
    };
    let theta = (0.5 * t2).clamp(-1.0, 1.0).acos();
    Ok((norm, fold_angle(sign * theta)))
}

/// One hyperbolic-elliptic class: N(γ) > 1, ω ∈ (0, π), a multiplicity, and
/// the norm of the primitive class it is a power of.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicClass {
    pub norm: f64,
    pub omega: f64,
    pub mult: u32,
    pub primitive: bool,
    pub primitive_norm: f64,
}

impl GeodesicClass {
    pub fn new(
        norm: f64,
        omega: f64,
        mult: u32,
        primitive: bool,
        primitive_norm: f64,
    ) -> Result<Self> {
        let g = GeodesicClass {
            norm,
            omega,
            mult,
            primitive,
            primitive_norm,
        };
        g.validate().map_err(Error::domain)?;
        Ok(g)
    }

    pub fn primitive(norm: f64, omega: f64) -> Result<Self> {
        Self::new(norm, omega, 1, true, norm)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(self.norm.is_finite() && self.norm > 1.0) {
            return Err(format!("norm {} must be > 1", self.norm));
        }
        if !(self.omega > 0.0 && self.omega < PI) {
            return Err(format!("omega {} must lie in (0, pi)", self.omega));
        }
        if self.mult == 0 {
            return Err("mult must be positive".into());
        }
        if !(self.primitive_norm.is_finite() && self.primitive_norm > 1.0) {
            return Err(format!(
                "primitive_norm {} must be > 1",
                self.primitive_norm
            ));
        }
        if self.primitive && (self.primitive_norm - self.norm).abs() > 1e-12 * self.norm {
            return Err(format!(
                "primitive class has primitive_norm {} != norm {}",
                self.primitive_norm, self.norm
            ));
        }
        if self.primitive_norm > self.norm * (1.0 + 1e-12) {
            return Err(format!(
                "primitive_norm {} exceeds norm {}",
                self.primitive_norm, self.norm
            ));
        }
        Ok(())
    }
}

fn cmp_classes(x: &GeodesicClass, y: &GeodesicClass) -> Ordering {
    x.norm.total_cmp(&y.norm).then(x.omega.total_cmp(&y.omega))
}

/// All (x + y√D)/2 in 𝒪_K with |x|, |y| ≤ h.
pub fn height_box(disc: i64, h: i64) -> Vec<AlgebraicInteger> {
    let mut out = Vec::new();
    for y in -h..=h {
        for x in -h..=h {
            if let Ok(a) = AlgebraicInteger::new(x, y, disc) {
                out.push(a);
            }
        }
    }
    out
}

fn in_box(a: &AlgebraicInteger, h: i64) -> bool {
    a.x().abs() <= h && a.y().abs() <= h
}

/// Visits every unimodular [[a, b], [c, d]] with all entries in the height-h
/// box, grouped by the index of `a` so the scan can run in parallel.
pub fn for_each_in_box<F>(disc: i64, height: i64, f: F) -> Result<()>
where
    F: Fn(GroupElement) + Sync,
{
    let elems = height_box(disc, height);
    let n = elems.len() as u128;
    if n * n * n > MAX_SEARCH {
        return Err(Error::Overflow {
            context: "height box search space",
            bound: height,
        });
    }
    let one = AlgebraicInteger::one(disc);
    elems.par_iter().for_each(|a| {
        for d in &elems {
            let Some(ad) = a.checked_mul(d) else { continue };
            let Some(bc) = ad.checked_sub(&one) else {
                continue;
            };
            for b in &elems {
                if b.is_zero() {
                    if bc.is_zero() {
                        for c in &elems {
                            f(GroupElement {
                                a: *a,
                                b: *b,
                                c: *c,
                                d: *d,
                            });
                        }
                    }
                    continue;
                }
                if let Some(c) = bc.checked_div_exact(b) {
                    if in_box(&c, height) {
                        f(GroupElement {
                            a: *a,
                            b: *b,
                            c,
                            d: *d,
                        });
                    }
                }
            }
        }
    });
    Ok(())
}

/// Scans the height box for hyperbolic-elliptic elements and returns one
/// record per distinct (N, ω), sorted by (N, ω), with primitivity marked.
/// Multiplicities are lower bounds (always 1).
pub fn enumerate_he(field: &QuadraticField, height: i64) -> Result<Vec<GeodesicClass>> {
    if height < 1 {
        return Err(Error::domain(format!("height must be >= 1, got {height}")));
    }
    let found = std::sync::Mutex::new(Vec::new());
    let disc = field.disc();
    with_thread_cap(|| {
        for_each_in_box(disc, height, |g| {
            let tr = g.trace();
            if trace_kind(&tr) == TraceKind::Large
                && trace_kind(&galois_conjugate(&tr)) == TraceKind::Small
            {
                if let Ok(inv) = he_invariants(&g) {
                    found.lock().expect("no panics while locked").push(inv);
                }
            }
        })
    })?;
    let mut pairs = found.into_inner().expect("no panics while locked");
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut classes: Vec<GeodesicClass> = Vec::new();
    for (norm, omega) in pairs {
        if !(omega > 0.0 && omega < PI) {
            continue;
        }
        let dup = classes
            .iter()
            .rev()
            .take_while(|c| norm - c.norm <= DEDUP_TOL * norm)
            .any(|c| {
                (norm - c.norm).abs() <= DEDUP_TOL * norm
                    && angle_distance(omega, c.omega) <= DEDUP_TOL
            });
        if !dup {
            classes.push(GeodesicClass {
                norm,
                omega,
                mult: 1,
                primitive: true,
                primitive_norm: norm,
            });
        }
    }
    mark_primitivity(&mut classes);
    classes.sort_by(cmp_classes);
    Ok(classes)
}

/// Runs `f` on a rayon pool capped by `HILZETA_THREADS` when set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    match std::env::var("HILZETA_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        None => f(),
    }
}

/// Marks a class non-primitive when (N, ω) ≈ (N₀ᵏ, kω₀ mod π) for a smaller
/// class in the list and some k ≥ 2. Expects `classes` sorted by norm.
pub fn mark_primitivity(classes: &mut [GeodesicClass]) {
    for i in 0..classes.len() {
        let (norm, omega) = (classes[i].norm, classes[i].omega);
        let ln = norm.ln();
        let root = classes[..i].iter().filter(|c| c.primitive).find(|c| {
            let ratio = ln / c.norm.ln();
            let k = ratio.round();
            k >= 2.0
                && (ratio - k).abs() <= DEDUP_TOL * k
                && angle_distance(omega, k * c.omega) <= DEDUP_TOL * k
        });
        if let Some(r) = root {
            let n0 = r.norm;
            classes[i].primitive = false;
            classes[i].primitive_norm = n0;
        }
    }
}

/// All powers (N₀ᵏ, kω₀ mod π), k ≥ 1, of the primitive entries with
/// N₀ᵏ ≤ cutoff. Non-primitive input entries are ignored.
pub fn expand_powers(primitives: &[GeodesicClass], norm_cutoff: f64) -> Result<Vec<GeodesicClass>> {
    if !(norm_cutoff > 1.0) {
        return Err(Error::domain(format!(
            "norm cutoff must be > 1, got {norm_cutoff}"
        )));
    }
    let mut out = Vec::new();
    for p in primitives.iter().filter(|p| p.primitive) {
        let mut k = 1u32;
        loop {
            let norm = p.norm.powi(k as i32);
            if norm > norm_cutoff || !norm.is_finite() {
                break;
            }
            out.push(GeodesicClass {
                norm,
                omega: fold_angle(k as f64 * p.omega),
                mult: p.mult,
                primitive: k == 1,
                primitive_norm: p.norm,
            });
            k += 1;
        }
    }
    out.sort_by(cmp_classes);
    Ok(out)
}

/// True if every primitive class whose square is within the largest norm in
/// the list also has that square listed.
pub fn is_power_closed(classes: &[GeodesicClass]) -> bool {
    let max = classes.iter().map(|c| c.norm).fold(0.0, f64::max);
    classes.iter().filter(|c| c.primitive).all(|p| {
        let n2 = p.norm * p.norm;
        n2 > max
            || classes.iter().any(|c| {
                !c.primitive
                    && (c.norm - n2).abs() <= 1e-9 * n2
                    && angle_distance(c.omega, 2.0 * p.omega) <= 1e-9
            })
    })
}

pub const CSV_HEADER: [&str; 5] = ["norm", "omega", "mult", "primitive", "primitive_norm"];

pub fn save_geodesics(path: &Path, classes: &[GeodesicClass]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: path.display().to_string(),
        source: e,
    };
    let file = File::create(path).map_err(io)?;
    write_geodesics(file, classes).map_err(|e| match e {
        Error::Io { source, .. } => io(source),
        other => other,
    })
}

pub fn write_geodesics<W: std::io::Write>(w: W, classes: &[GeodesicClass]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| Error::Io {
        path: "<csv>".into(),
        source: e.into(),
    };
    wr.write_record(CSV_HEADER).map_err(io)?;
    for c in classes {
        wr.write_record([
            fmt17(c.norm),
            fmt17(c.omega),
            c.mult.to_string(),
            u8::from(c.primitive).to_string(),
            fmt17(c.primitive_norm),
        ])
        .map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Io {
        path: "<csv>".into(),
        source: e,
    })
}

pub fn load_geodesics(path: &Path) -> Result<Vec<GeodesicClass>> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    read_geodesics(file, &path.display().to_string())
}

pub fn read_geodesics<R: std::io::Read>(r: R, name: &str) -> Result<Vec<GeodesicClass>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: name.to_string(),
        line,
        message,
    };
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = rd
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(parse_err(
            1,
            format!("expected header {}", CSV_HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let float = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|_| {
                parse_err(
                    line,
                    format!("{}: cannot parse {:?}", CSV_HEADER[i], &rec[i]),
                )
            })
        };
        let mult = rec[2]
            .parse::<u32>()
            .map_err(|_| parse_err(line, format!("mult: cannot parse {:?}", &rec[2])))?;
        let primitive = match &rec[3] {
            "0" => false,
            "1" => true,
            other => {
                return Err(parse_err(
                    line,
                    format!("primitive must be 0 or 1, got {other:?}"),
                ))
            }
        };
        let g = GeodesicClass {
            norm: float(0)?,
            omega: float(1)?,
            mult,
            primitive,
            primitive_norm: float(4)?,
        };
        g.validate().map_err(|m| parse_err(line, m))?;
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    fn ai(x: i64, y: i64, d: i64) -> AlgebraicInteger {
        AlgebraicInteger::new(x, y, d).unwrap()
    }

    fn companion(tr: AlgebraicInteger) -> GroupElement {
        let d = tr.disc();
        GroupElement::new(
            AlgebraicInteger::zero(d),
            -AlgebraicInteger::one(d),
            AlgebraicInteger::one(d),
            tr,
        )
        .unwrap()
    }

    #[test]
    fn classify_examples() {
        let id = GroupElement::identity(5);
        assert_eq!(classify(&id).unwrap().tag, ElementTag::Identity);
        let minus = GroupElement {
            a: -id.a,
            b: id.b,
            c: id.c,
            d: -id.d,
        };
        assert_eq!(classify(&minus).unwrap().tag, ElementTag::Identity);
        let o = AlgebraicInteger::one(5);
        let z = AlgebraicInteger::zero(5);
        let t = GroupElement::new(o, o, z, o).unwrap();
        assert_eq!(classify(&t).unwrap().tag, ElementTag::Parabolic);
        let g = companion(ai(5, 1, 5));
        assert_eq!(classify(&g).unwrap().tag, ElementTag::HyperbolicElliptic);
        assert_eq!(
            classify(&g.swap_embeddings()).unwrap().tag,
            ElementTag::EllipticHyperbolic
        );
        let bad = GroupElement {
            a: o,
            b: o,
            c: o,
            d: o,
        };
        assert!(classify(&bad).is_err());
    }

    #[test]
    fn hyperbolic_subtypes() {
        // diag(ε, ε⁻¹) fixes 0 and ∞
        let eps = ai(1, 1, 5);
        let inv = ai(-1, 1, 5);
        let z = AlgebraicInteger::zero(5);
        let g = GroupElement::new(eps, z, z, inv).unwrap();
        // tr = √5: |tr| > 2 and |tr′| = √5 > 2
        let c = classify(&g).unwrap();
        assert_eq!(c.tag, ElementTag::Hyperbolic);
        assert_eq!(c.hyperbolic_subtype, Some(HyperbolicSubtype::Type2));
        // companion of trace 3 over Q(√5): tr² − 4 = 5 = (√5)², fixed points in K
        let g = companion(AlgebraicInteger::from_int(3, 5));
        assert_eq!(
            classify(&g).unwrap().hyperbolic_subtype,
            Some(HyperbolicSubtype::Type2)
        );
        // trace 4: 12 is not a square in Q(√5)
        let g = companion(AlgebraicInteger::from_int(4, 5));
        assert_eq!(
            classify(&g).unwrap().hyperbolic_subtype,
            Some(HyperbolicSubtype::Type1)
        );
    }

    #[test]
    fn companion_invariants() {
        let g = companion(ai(5, 1, 5));
        let (n, w) = he_invariants(&g).unwrap();
        assert!((n - 10.999_25).abs() < 1e-3, "{n}");
        assert!((w - 0.808_08).abs() < 1e-3, "{w}");
        let exact = ((5.0 - 5f64.sqrt()) / 4.0).acos();
        assert!((w - exact).abs() < 1e-14);
        let (ni, wi) = he_invariants(&g.inverse()).unwrap();
        assert!((ni - n).abs() < 1e-12);
        assert!((wi - (PI - w)).abs() < 1e-12);
        assert!(he_invariants(&GroupElement::identity(5)).is_err());
    }

    #[test]
    fn conjugation_invariance() {
        let g = companion(ai(5, 1, 5));
        let o = AlgebraicInteger::one(5);
        let z = AlgebraicInteger::zero(5);
        let phi = ai(1, 1, 5);
        let hs = [
            GroupElement::new(o, o, z, o).unwrap(),
            GroupElement::new(o, phi, z, o).unwrap(),
            GroupElement::new(z, -o, o, z).unwrap(),
            GroupElement::new(o, z, phi, o).unwrap(),
        ];
        let (n, w) = he_invariants(&g).unwrap();
        for h in hs {
            let c = h
                .checked_mul(&g)
                .unwrap()
                .checked_mul(&h.inverse())
                .unwrap();
            let (nc, wc) = he_invariants(&c).unwrap();
            assert!((nc - n).abs() < 1e-12 * n && (wc - w).abs() < 1e-12);
        }
    }

    #[test]
    fn fold_examples() {
        assert!((fold_angle(4.0 * 0.8) - (3.2 - PI)).abs() < 1e-15);
        assert!((fold_angle(-0.5) - (PI - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn expand_examples() {
        let p = GeodesicClass::primitive(11.0, 0.8).unwrap();
        let out = expand_powers(&[p], 200.0).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[1].norm, 121.0);
        assert!(!out[1].primitive && out[1].primitive_norm == 11.0);
        assert!(expand_powers(&[], 10.0).unwrap().is_empty());
        assert!(expand_powers(&[p], 1.0).is_err());
        assert!(is_power_closed(&out));
        assert!(!is_power_closed(&[
            p,
            GeodesicClass::primitive(200.0, 0.3).unwrap()
        ]));
    }

    #[test]
    fn small_boxes() {
        let k = make_field(5).unwrap();
        assert!(enumerate_he(&k, 1).unwrap().is_empty());
        assert!(enumerate_he(&k, 0).is_err());
    }

    #[test]
    fn csv_round_trip_and_validation() {
        let list = vec![
            GeodesicClass::primitive(10.999_247_958_426_1, 0.808_083_983_4).unwrap(),
            GeodesicClass::new(120.983_455_2, 1.616_167_9, 2, false, 10.999_247_958_426_1).unwrap(),
            GeodesicClass::primitive(1.0 + 1.0 / 3.0, PI / 7.0).unwrap(),
        ];
        let mut buf = Vec::new();
        write_geodesics(&mut buf, &list).unwrap();
        let back = read_geodesics(&buf[..], "mem").unwrap();
        assert_eq!(back, list);

        let bad = "norm,omega,mult,primitive,primitive_norm\n11,0.5,1,1,11\n11,3.5,1,1,11\n";
        match read_geodesics(bad.as_bytes(), "f.csv") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let bad = "norm,omega,mult,primitive,primitive_norm\n0.9,0.5,1,1,0.9\n";
        assert!(matches!(
            read_geodesics(bad.as_bytes(), "f.csv"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
