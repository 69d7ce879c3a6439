//! `dragonfold` — generate dragon curves of any unfolding angle, test them
//! for self-intersection, and certify the simple-arc band.
//!
//! Exit codes: 0 success (clean curve / certified / file written), 2 usage
//! or input error, 3 negative verdict (self-intersective curve, or a
//! certification that did not go through), 4 internal inconsistency (the
//! two intersection engines disagree, or a cross-check inside the
//! certification pipeline fails).
//!
//! The environment variable `DRAGONFOLD_TOL` overrides the default
//! geometric tolerance (1e-9) everywhere.

mod render;

use anyhow::{ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dragonfold::certify::{certify, CertReport, CertifyConfig, CertifyError, Verdict};
use dragonfold::geometry::DEFAULT_TOL;
use dragonfold::ifs::{curve, ModelParams};
use dragonfold::intersect::{brute_force, first_bad_order, sweep, IntersectionReport};
use dragonfold::roots::solve_constants;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_BAD_VERDICT: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Parser)]
#[command(name = "dragonfold", version, about = "Dragon curves of any unfolding angle: generation, self-intersection checks, simple-arc certification", long_about = None)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Angle of the model, exactly one of the two parametrizations.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct AngleArg {
    /// Unfolding angle θ in degrees, 60 < θ ≤ 180
    #[arg(long, value_name = "DEG")]
    theta_deg: Option<f64>,
    /// Fold parameter ξ in radians, 0 ≤ ξ < π/3 (θ = 180° − 2ξ·180°/π)
    #[arg(long, value_name = "RAD")]
    xi: Option<f64>,
}

impl AngleArg {
    fn params(&self) -> Result<ModelParams> {
        Ok(match (self.theta_deg, self.xi) {
            (Some(t), None) => ModelParams::from_theta_deg(t)?,
            (None, Some(x)) => ModelParams::from_xi(x)?,
            _ => unreachable!("clap enforces exactly one angle flag"),
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Engine {
    Brute,
    Sweep,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate the order-k broken line and write its vertices
    Generate {
        #[command(flatten)]
        angle: AngleArg,
        /// Order k: the curve has 2^k segments
        #[arg(long)]
        order: u32,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Test the order-k curve for self-intersection
    Check {
        #[command(flatten)]
        angle: AngleArg,
        #[arg(long)]
        order: u32,
        /// brute = quadratic oracle (≤ 8192 segments), sweep = fast engine,
        /// both = run both and compare
        #[arg(long, value_enum, default_value_t = Engine::Sweep)]
        engine: Engine,
    },
    /// Run the open-set-condition certificate at one angle
    Certify {
        #[command(flatten)]
        angle: AngleArg,
        /// Truncation depth for the inclusion check
        #[arg(long, default_value_t = 40)]
        depth: u32,
        /// Interior samples per polygon edge in the inclusion check
        #[arg(long, default_value_t = 3)]
        samples: u32,
        /// Also run the half-plane cone search as a cross-check
        #[arg(long)]
        cone_search: bool,
    },
    /// Print the critical constants x₀, ξ₀, θ₀
    Constants {
        /// Machine-readable output
        #[arg(long)]
        json: bool,
        /// Digits shown in the table (ignored with --json)
        #[arg(long, default_value_t = 12)]
        digits: usize,
    },
    /// Scan a θ grid: first self-intersective order and certification verdict per row
    Scan {
        #[arg(long, value_name = "DEG")]
        theta_min: f64,
        #[arg(long, value_name = "DEG")]
        theta_max: f64,
        #[arg(long, value_name = "DEG")]
        step: f64,
        /// Highest curve order tried per angle
        #[arg(long, default_value_t = 12)]
        k_max: u32,
        /// Certification truncation depth (shallower is faster; the verdict
        /// is depth-stable far beyond this)
        #[arg(long, default_value_t = 16)]
        depth: u32,
        /// Output CSV file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render curves, regions, and points from a JSON spec to SVG
    Render {
        /// JSON render spec (see `render` module docs for the layer grammar)
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn global_tol() -> Result<f64> {
    match std::env::var("DRAGONFOLD_TOL") {
        Ok(s) => {
            let tol: f64 = s
                .parse()
                .with_context(|| format!("DRAGONFOLD_TOL={s:?} is not a number"))?;
            ensure!(tol.is_finite() && tol > 0.0, "DRAGONFOLD_TOL must be positive");
            Ok(tol)
        }
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let tol = global_tol()?;
    match cli.cmd {
        Cmd::Generate { angle, order, out, format } => cmd_generate(&angle, order, out, format),
        Cmd::Check { angle, order, engine } => cmd_check(&angle, order, engine, tol),
        Cmd::Certify { angle, depth, samples, cone_search } => {
            cmd_certify(&angle, depth, samples, cone_search, tol)
        }
        Cmd::Constants { json, digits } => cmd_constants(json, digits),
        Cmd::Scan { theta_min, theta_max, step, k_max, depth, out } => {
            cmd_scan(theta_min, theta_max, step, k_max, depth, out, tol)
        }
        Cmd::Render { spec, out } => cmd_render(&spec, &out),
    }
}

fn write_out(out: Option<&PathBuf>, content: &str, what: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
            println!("{what} -> {}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_generate(angle: &AngleArg, order: u32, out: Option<PathBuf>, format: Format) -> Result<u8> {
    let p = angle.params()?;
    let poly = curve(&p, order)?;
    let seg_len = p.x.powi(-(order as i32));
    let content = match format {
        Format::Json => {
            let doc = serde_json::json!({
                "schema": 1,
                "xi": p.xi,
                "theta_deg": p.theta_deg(),
                "order": order,
                "n_segments": poly.segment_count(),
                "segment_length": seg_len,
                "vertices": poly.vertices().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string(&doc)?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("x,y\n");
            for z in poly.vertices() {
                let _ = writeln!(s, "{},{}", z.re, z.im);
            }
            s
        }
    };
    let summary = format!(
        "order={} segments={} segment_length={}",
        order,
        poly.segment_count(),
        seg_len
    );
    match &out {
        Some(_) => {
            write_out(out.as_ref(), &content, &summary)?;
        }
        None => {
            print!("{content}");
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn print_report(rep: &IntersectionReport) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(rep)?);
    Ok(())
}

fn cmd_check(angle: &AngleArg, order: u32, engine: Engine, tol: f64) -> Result<u8> {
    let p = angle.params()?;
    let poly = curve(&p, order)?;
    let rep = match engine {
        Engine::Brute => brute_force(&poly, tol)?.with_curve_info(order, p.xi),
        Engine::Sweep => sweep(&poly, tol).with_curve_info(order, p.xi),
        Engine::Both => {
            let b = brute_force(&poly, tol)?.with_curve_info(order, p.xi);
            let s = sweep(&poly, tol).with_curve_info(order, p.xi);
            let key = |r: &IntersectionReport| {
                r.events.iter().map(|e| (e.seg_i, e.seg_j, e.kind)).collect::<Vec<_>>()
            };
            if key(&b) != key(&s) {
                eprintln!("engine disagreement; both reports follow");
                eprintln!("brute: {}", serde_json::to_string(&b)?);
                eprintln!("sweep: {}", serde_json::to_string(&s)?);
                print_report(&s)?;
                return Ok(EXIT_INCONSISTENT);
            }
            s
        }
    };
    let bad = rep.self_intersective;
    print_report(&rep)?;
    Ok(if bad { EXIT_BAD_VERDICT } else { 0 })
}

fn cmd_certify(angle: &AngleArg, depth: u32, samples: u32, cone_search: bool, tol: f64) -> Result<u8> {
    let p = angle.params()?;
    let cfg = CertifyConfig { n_max: depth, samples, tol, cone_search };
    let rep = certify(p.xi, &cfg)?;
    println!("{}", serde_json::to_string_pretty(&rep)?);
    Ok(match rep.overall {
        Verdict::CertifiedSimpleArc => 0,
        Verdict::NotCertified => EXIT_BAD_VERDICT,
    })
}

fn cmd_constants(json: bool, digits: usize) -> Result<u8> {
    ensure!((1..=17).contains(&digits), "--digits must be in 1..=17");
    let c = solve_constants(1e-14)?;
    if json {
        let doc = serde_json::json!({
            "schema": 1,
            "x0": c.x0,
            "xi0": c.xi0,
            "theta0_rad": c.theta0_rad,
            "theta0_deg": c.theta0_deg,
            "residual": c.residual,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        println!("x0           {:.digits$}", c.x0);
        println!("xi0 (rad)    {:.digits$}", c.xi0);
        println!("theta0 (rad) {:.digits$}", c.theta0_rad);
        println!("theta0 (deg) {:.digits$}", c.theta0_deg);
        println!("|P(x0)|      {:.2e}", c.residual);
    }
    Ok(0)
}

/// One scan row; `cert` is None when ξ is outside the certification range.
struct ScanRow {
    theta: f64,
    xi: f64,
    first_bad: Option<u32>,
    cert: Option<CertReport>,
}

fn scan_row(theta: f64, k_max: u32, cfg: &CertifyConfig, tol: f64) -> Result<ScanRow> {
    let p = ModelParams::from_theta_deg(theta)?;
    let first_bad = first_bad_order(&p, k_max, tol)?.and_then(|r| r.order);
    let cert = match certify(p.xi, cfg) {
        Ok(rep) => Some(rep),
        Err(CertifyError::XiOutOfRange(_)) => None,
        Err(e) => return Err(e).context("certification cross-check failed during scan"),
    };
    Ok(ScanRow { theta, xi: p.xi, first_bad, cert })
}

fn cmd_scan(
    theta_min: f64,
    theta_max: f64,
    step: f64,
    k_max: u32,
    depth: u32,
    out: Option<PathBuf>,
    tol: f64,
) -> Result<u8> {
    ensure!(step.is_finite() && step > 0.0, "--step must be positive");
    ensure!(
        theta_min.is_finite() && theta_max.is_finite() && theta_min <= theta_max,
        "need --theta-min ≤ --theta-max"
    );
    let n_rows = ((theta_max - theta_min) / step + 1e-9).floor() as usize + 1;
    ensure!(n_rows <= 200_000, "grid of {n_rows} rows is too large");
    ensure!(k_max >= 1, "--k-max must be at least 1");

    let cfg = CertifyConfig { n_max: depth, tol, ..CertifyConfig::default() };
    let rows: Vec<ScanRow> = (0..n_rows)
        .into_par_iter()
        .map(|i| scan_row(theta_min + i as f64 * step, k_max, &cfg, tol))
        .collect::<Result<_>>()?;

    let mut csv = String::from("theta_deg,xi,N,verdict,first_bad_order,margin\n");
    for r in &rows {
        let (n, verdict, margin) = match &r.cert {
            Some(c) => (
                c.n.to_string(),
                match c.overall {
                    Verdict::CertifiedSimpleArc => "certified_simple_arc",
                    Verdict::NotCertified => "not_certified",
                },
                c.condition_ii_separation.margin_n.to_string(),
            ),
            None => (String::new(), "out_of_range", String::new()),
        };
        let first_bad = r.first_bad.map_or_else(|| "none".to_string(), |k| k.to_string());
        let _ = writeln!(csv, "{},{},{},{},{},{}", r.theta, r.xi, n, verdict, first_bad, margin);
    }
    // The empirical boundary: the smallest grid angle from which every row
    // up to theta_max is free of self-intersections at the tried orders.
    let boundary = rows.iter().rev().take_while(|r| r.first_bad.is_none()).last();
    match boundary {
        Some(r) => {
            let _ = writeln!(csv, "# empirical_boundary_theta_deg={} (k_max={})", r.theta, k_max);
        }
        None => {
            let _ = writeln!(csv, "# empirical_boundary_theta_deg=none (k_max={})", k_max);
        }
    }
    write_out(out.as_ref(), &csv, "scan")?;
    Ok(0)
}

fn cmd_render(spec_path: &PathBuf, out: &PathBuf) -> Result<u8> {
    let text =
        fs::read_to_string(spec_path).with_context(|| format!("reading {}", spec_path.display()))?;
    let spec: render::RenderSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", spec_path.display()))?;
    let svg = render::render_svg(&spec)?;
    fs::write(out, &svg).with_context(|| format!("writing {}", out.display()))?;
    println!("render -> {}", out.display());
    Ok(0)
}
