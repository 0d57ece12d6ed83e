use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hilzeta_core::config::{load_surface, Surface};
use hilzeta_core::elliptic::{b0, c_const};
use hilzeta_core::field::{rational_to_f64, validate_surface};
use hilzeta_core::geodesic::{
    enumerate_he, load_geodesics, with_thread_cap, write_geodesics, GeodesicClass,
};
use hilzeta_core::numeric::fmt17;
use hilzeta_core::spectral::{
    corollary_log_det, det_at_one_symbolic, finite_log_det, geometric_theta, he_term,
    load_spectrum, small_t_fit, telescoping_residual, theta, theta_from_geometry,
    GeometricSideBreakdown,
};
use hilzeta_core::verify::run_suite;
use hilzeta_core::zeta::log_zhat;
use hilzeta_core::Error;
use rayon::prelude::*;

const TELESCOPING_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "hilzeta",
    version,
    about = "Selberg-type zeta functions and determinants for Hilbert modular surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Field invariants and the Euler characteristic parity check.
    Field(Common),
    /// Enumerate hyperbolic-elliptic classes in a height box (CSV).
    Enumerate(Common),
    /// Completed zeta factorization on an s-grid (JSON lines).
    Zeta(Common),
    /// Determinant expression and telescoping residual.
    Det(Common),
    /// Geometric heat-trace sides on a t-grid (CSV) and the small-t fit.
    Theta(Common),
    /// Run the numerical check suite.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// Surface configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Even weight m >= 2.
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Comma-separated s values.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    s: Vec<f64>,
    /// Comma-separated t values.
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.01,0.005")]
    t: Vec<f64>,
    /// Height bound for the enumeration box.
    #[arg(long, default_value_t = 6)]
    height: i64,
    /// Largest power k in the truncated Euler product.
    #[arg(long = "k-max", default_value_t = 8)]
    k_max: u32,
    /// Geodesic CSV (norm,omega,mult,primitive,primitive_norm).
    #[arg(long)]
    geodesics: Option<PathBuf>,
    /// Spectrum CSV (header `lambda`).
    #[arg(long)]
    spectrum: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    Io(PathBuf, io::Error),
    Checks(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Io(p.clone(), e)),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn put(w: &mut dyn Write, path: &Option<PathBuf>, line: &str) -> Outcome {
    writeln!(w, "{line}")
        .map_err(|e| Failure::Io(path.clone().unwrap_or_else(|| PathBuf::from("<stdout>")), e))
}

fn geodesics(c: &Common) -> Result<Vec<GeodesicClass>, Failure> {
    Ok(match &c.geodesics {
        Some(p) => load_geodesics(p)?,
        None => Vec::new(),
    })
}

fn cmd_field(c: &Common, s: &Surface) -> Outcome {
    let k = &s.field;
    let mut w = output(&c.out)?;
    let lines = [
        format!("d = {}", k.d()),
        format!("D = {}", k.disc()),
        format!("eps = {}", k.eps()),
        format!("eps_numeric = {}", fmt17(k.eps_f64())),
        format!("N(eps) = {}", k.eps().norm()),
        format!("log_eps = {}", fmt17(k.log_eps())),
        format!("zeta_K(-1) = {}", k.zeta_m1()),
        format!("zeta_K(-1)_numeric = {}", fmt17(k.zeta_m1_f64())),
        format!("elliptic_entries = {}", s.locus.points().len()),
    ];
    for l in &lines {
        put(&mut w, &c.out, l)?;
    }
    let e = validate_surface(k, &s.locus)?;
    put(&mut w, &c.out, &format!("E(X_K) = {e} (even: ok)"))?;
    Ok(())
}

fn cmd_enumerate(c: &Common, s: &Surface) -> Outcome {
    let classes = enumerate_he(&s.field, c.height)?;
    let w = output(&c.out)?;
    write_geodesics(w, &classes)?;
    match classes.first() {
        Some(g) => eprintln!("{} classes; smallest norm {}", classes.len(), fmt17(g.norm)),
        None => eprintln!("0 classes"),
    }
    Ok(())
}

fn cmd_zeta(c: &Common, s: &Surface) -> Outcome {
    let g = geodesics(c)?;
    let recs: Vec<_> = with_thread_cap(|| {
        c.s.par_iter()
            .map(|&x| log_zhat(x, c.m, &s.field, &s.locus, &g, c.k_max))
            .collect::<hilzeta_core::Result<Vec<_>>>()
    })?;
    let mut w = output(&c.out)?;
    for r in recs {
        put(&mut w, &c.out, &r.to_json())?;
    }
    Ok(())
}

fn cmd_det(c: &Common, s: &Surface) -> Outcome {
    let g = geodesics(c)?;
    let spectrum = match &c.spectrum {
        Some(p) => Some(load_spectrum(p, c.m)?),
        None => None,
    };
    let mut w = output(&c.out)?;
    let mut failures = 0;
    for &x in &c.s {
        if x == 1.0 {
            put(
                &mut w,
                &c.out,
                "s = 1: the Euler product is not evaluated there; symbolic form:",
            )?;
            put(
                &mut w,
                &c.out,
                &det_at_one_symbolic(c.m, &s.field, &s.locus)?,
            )?;
            continue;
        }
        let ld = corollary_log_det(x, c.m, &s.field, &s.locus, &g, c.k_max)?;
        let res = telescoping_residual(x, c.m, &s.field, &s.locus, &g, c.k_max)?;
        let mut csum = Vec::new();
        for j in (2..=c.m).step_by(2) {
            csum.push(format!(
                "C_{j} = {}",
                fmt17(c_const(j, &s.field, &s.locus)?)
            ));
        }
        put(&mut w, &c.out, &format!("s = {}", fmt17(x)))?;
        put(&mut w, &c.out, &format!("  log_det = {}", fmt17(ld)))?;
        put(&mut w, &c.out, &format!("  {}", csum.join(", ")))?;
        let ok = res <= TELESCOPING_TOL;
        put(
            &mut w,
            &c.out,
            &format!(
                "  telescoping_residual = {} ({})",
                fmt17(res),
                if ok { "ok" } else { "FAIL" }
            ),
        )?;
        if !ok {
            failures += 1;
        }
        if let Some(sp) = &spectrum {
            put(
                &mut w,
                &c.out,
                &format!(
                    "  finite_spectrum_log_det = {}",
                    fmt17(finite_log_det(sp, x)?)
                ),
            )?;
        }
    }
    if failures > 0 {
        return Err(Failure::Checks(failures));
    }
    Ok(())
}

fn cmd_theta(c: &Common, s: &Surface) -> Outcome {
    let g = geodesics(c)?;
    let m = c.m;
    let rows: Vec<(GeometricSideBreakdown, f64)> = with_thread_cap(|| {
        c.t.par_iter()
            .map(|&t| {
                let b = geometric_theta(&s.field, &s.locus, &g, m, t)?;
                Ok((b, theta_from_geometry(&s.field, &s.locus, &g, m, t)?))
            })
            .collect::<hilzeta_core::Result<Vec<_>>>()
    })?;
    if !g.is_empty() && !he_term(&g, m, 1.0)?.power_closed {
        eprintln!("warning: geodesic list is not closed under powers");
    }
    let mut w = output(&c.out)?;
    put(&mut w, &c.out, GeometricSideBreakdown::CSV_HEADER)?;
    for (b, _) in &rows {
        put(&mut w, &c.out, &b.to_csv_row())?;
    }
    if let Some(p) = &c.spectrum {
        let sp = load_spectrum(p, m)?;
        for (b, est) in &rows {
            eprintln!(
                "t = {}: theta(spectrum) = {}, geometric estimate = {}",
                fmt17(b.t),
                fmt17(theta(&sp, b.t)?),
                fmt17(*est)
            );
        }
    }
    if rows.len() < 3 {
        eprintln!("fit skipped: needs at least 3 t values");
        return Ok(());
    }
    let samples: Vec<(f64, f64)> = rows.iter().map(|(b, est)| (b.t, *est)).collect();
    let (a, bb, cc) = small_t_fit(&samples)?;
    let q = s.field.zeta_m1_f64();
    let mf = (m - 1) as f64;
    let mut bsum = 0.0;
    for j in (2..=m).step_by(2) {
        bsum += rational_to_f64(b0(j, &s.locus)?);
    }
    let expected = [
        mf / 2.0 * q,
        -s.field.log_eps() / (2.0 * std::f64::consts::PI.sqrt()),
        -mf / 6.0 * q + bsum + if m == 2 { 1.0 } else { 0.0 },
    ];
    for (name, (got, want)) in ["c_-1", "c_-1/2", "c_0"]
        .iter()
        .zip([a, bb, cc].iter().zip(expected))
    {
        eprintln!(
            "fit {name} = {} (closed form {}, diff {})",
            fmt17(*got),
            fmt17(want),
            fmt17(got - want)
        );
    }
    Ok(())
}

fn cmd_verify(c: &Common, s: &Surface) -> Outcome {
    let checks = run_suite(s);
    let mut w = output(&c.out)?;
    let mut failed = 0;
    for ch in &checks {
        let tag = if ch.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{tag} {} | measured {} | tolerance {} | {}",
            ch.name,
            fmt17(ch.measured),
            fmt17(ch.tolerance),
            ch.anchor
        );
        if !ch.detail.is_empty() {
            line.push_str(&format!(" | {}", ch.detail));
        }
        put(&mut w, &c.out, &line)?;
        if !ch.pass {
            failed += 1;
        }
    }
    put(
        &mut w,
        &c.out,
        &format!("{} checks, {} failed", checks.len(), failed),
    )?;
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome {
    let (c, f): (&Common, fn(&Common, &Surface) -> Outcome) = match &cli.command {
        Command::Field(c) => (c, cmd_field),
        Command::Enumerate(c) => (c, cmd_enumerate),
        Command::Zeta(c) => (c, cmd_zeta),
        Command::Det(c) => (c, cmd_det),
        Command::Theta(c) => (c, cmd_theta),
        Command::Verify(c) => (c, cmd_verify),
    };
    let surface = load_surface(Path::new(&c.config))?;
    f(c, &surface)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(p, e)) => {
            eprintln!("error: {}: {e}", p.display());
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
        Err(Failure::Checks(n)) => {
            eprintln!("{n} numeric check(s) failed");
            ExitCode::from(3)
        }
    }
}
