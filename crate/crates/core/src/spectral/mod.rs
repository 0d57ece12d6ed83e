//! Heat traces and determinants over finite spectra, and the closed
//! geometric and determinant expressions they are compared against.

pub mod det;
pub mod eta;
pub mod heat;

use std::fs::File;
use std::path::Path;

use crate::elliptic::check_weight;
use crate::error::{Error, Result};
use crate::numeric::{fmt17, NeumaierSum};

pub use det::{corollary_log_det, det_at_one_symbolic, telescoping_residual};
pub use eta::{eta, eta_deriv0, EtaOrder};
pub use heat::{
    elliptic_limit, elliptic_term, g1, geometric_theta, he_term, identity_term,
    parabolic_and_hyp2_terms, richardson_limit, small_t_fit, theta_from_geometry,
    GeometricSideBreakdown, HeTerm,
};

/// Eigenvalues λ_j(m) of the weight-m Laplacian, ascending and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    m: u32,
    lambdas: Vec<f64>,
}

impl Spectrum {
    /// Sorts the input; rejects non-finite or non-positive entries.
    pub fn new(m: u32, mut lambdas: Vec<f64>) -> Result<Self> {
        check_weight(m)?;
        if let Some(bad) = lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::domain(format!(
                "eigenvalues must be positive and finite, got {bad}"
            )));
        }
        lambdas.sort_by(f64::total_cmp);
        Ok(Spectrum { m, lambdas })
    }

    pub fn empty(m: u32) -> Result<Self> {
        Spectrum::new(m, Vec::new())
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }
}

/// θ_m(t) = Σ_j e^{−tλ_j}.
pub fn theta(spectrum: &Spectrum, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("t must be > 0, got {t}")));
    }
    Ok(spectrum
        .lambdas
        .iter()
        .map(|l| (-t * l).exp())
        .collect::<NeumaierSum>()
        .value())
}

/// Σ_n log(λ_n + s(s−1)), the exact zeta-regularized log-determinant of a
/// finite spectrum.
pub fn finite_log_det(spectrum: &Spectrum, s: f64) -> Result<f64> {
    let x = s * (s - 1.0);
    let mut acc = NeumaierSum::new();
    for &l in &spectrum.lambdas {
        let v = l + x;
        if !(v > 0.0) {
            return Err(Error::domain(format!(
                "shifted eigenvalue {l} + s(s-1) = {v} is not positive"
            )));
        }
        acc.add(v.ln());
    }
    Ok(acc.value())
}

/// Least-squares slope of T ↦ #{λ_j ≤ T} over the grid (through the origin
/// for a single grid point).
pub fn weyl_slope(spectrum: &Spectrum, grid: &[f64]) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::domain("weyl_slope needs a nonempty grid"));
    }
    let count = |t: f64| spectrum.lambdas.partition_point(|&l| l <= t) as f64;
    if grid.len() == 1 {
        let t = grid[0];
        if t == 0.0 {
            return Err(Error::domain("single grid point must be nonzero"));
        }
        return Ok(count(t) / t);
    }
    let n = grid.len() as f64;
    let mx = grid.iter().sum::<f64>() / n;
    let my = grid.iter().map(|&t| count(t)).sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &t in grid {
        sxy += (t - mx) * (count(t) - my);
        sxx += (t - mx) * (t - mx);
    }
    if sxx == 0.0 {
        return Err(Error::domain("grid points must not all coincide"));
    }
    Ok(sxy / sxx)
}

pub const SPECTRUM_HEADER: &str = "lambda";

pub fn read_spectrum<R: std::io::Read>(r: R, name: &str, m: u32) -> Result<Spectrum> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: name.to_string(),
        line,
        message,
    };
    let mut rd = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    let header = rd
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if header.len() != 1 || &header[0] != SPECTRUM_HEADER {
        return Err(parse_err(1, format!("expected header {SPECTRUM_HEADER}")));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec
            .map_err(|e| parse_err(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let v: f64 = rec[0]
            .parse()
            .map_err(|_| parse_err(line, format!("cannot parse {:?}", &rec[0])))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(parse_err(
                line,
                format!("eigenvalue must be positive, got {v}"),
            ));
        }
        out.push(v);
    }
    Spectrum::new(m, out)
}

pub fn load_spectrum(path: &Path, m: u32) -> Result<Spectrum> {
    let file = File::open(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    read_spectrum(file, &path.display().to_string(), m)
}

pub fn save_spectrum(path: &Path, spectrum: &Spectrum) -> Result<()> {
    let mut body = String::from(SPECTRUM_HEADER);
    body.push('\n');
    for &l in &spectrum.lambdas {
        body.push_str(&fmt17(l));
        body.push('\n');
    }
    std::fs::write(path, body).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })
}
