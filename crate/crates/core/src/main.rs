use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ellsub::bounds::main_delta_chain;
use ellsub::check::run_checks;
use ellsub::config::{load_points, parse_cli_real, RunConfig};
use ellsub::elliptic::{Curve, HeightEngine, PointVector};
use ellsub::error::{Error, Result};
use ellsub::morphism::{count_gauss_reduced, count_special, enumerate_gauss_reduced, enumerate_special, gauss_reduce, kernel_contains_up_to_torsion, GaussReducedForm, IntMorphism};
use ellsub::rational::parse_rational;
use ellsub::report::render_scan_report;
use ellsub::scan::scan;

#[derive(Parser)]
#[command(name = "ellsub", version, about = "Heights, Gauss-reduced morphisms and tube scans on powers of an elliptic curve")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical height and norm of a point or point vector.
    Height {
        /// `O`, `x,y`, or coordinates separated by `;`.
        point: String,
        /// Curve coefficients `A,B` (alternative to --config).
        #[arg(long, allow_hyphen_values = true)]
        curve: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "1e-8")]
        tol: String,
    },
    /// Gauss-reduced morphism whose kernel contains the kernel of MATRIX up to torsion.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Gauss-reduced (or, with -s, Special) morphisms of bounded height.
    Enumerate {
        #[arg(short)]
        g: usize,
        #[arg(short)]
        r: usize,
        /// Height bound.
        #[arg(short = 'M', long = "max-height")]
        m: u64,
        /// Extra columns; enumerates Special morphisms when given.
        #[arg(short)]
        s: Option<usize>,
        /// Pivots in the leading columns only (the default).
        #[arg(long, conflicts_with = "permuted")]
        canonical_only: bool,
        /// Also print every distinct column reordering.
        #[arg(long)]
        permuted: bool,
        /// Largest number of morphisms to print.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
    },
    /// The chain of effective constants for the configured parameters.
    Bounds {
        #[arg(long)]
        config: PathBuf,
        /// Also write the text report here, and a JSON variant next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Tube scan of a points file against bounded-height morphisms.
    Scan {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comparison tolerance, overriding the config.
        #[arg(long)]
        tol: Option<String>,
        /// Height cap M_cap, overriding the config.
        #[arg(long)]
        cap: Option<u64>,
        #[arg(long)]
        canonical_only: bool,
    },
    /// Fast self-check of the core invariants.
    Check,
}

fn curve_arg(curve: &Option<String>, config: &Option<PathBuf>) -> Result<Curve> {
    match (curve, config) {
        (Some(c), _) => {
            let (a, b) = c.split_once(',').ok_or_else(|| Error::Parse(format!("curve `{c}` is not `A,B`")))?;
            Curve::new(parse_rational(a)?, parse_rational(b)?)
        }
        (None, Some(p)) => RunConfig::load(p)?.curve(),
        (None, None) => Err(Error::Validation("give --curve A,B or --config PATH".into())),
    }
}

fn shape(f: &GaussReducedForm) -> String {
    let c = f.canonical();
    let r = c.rows();
    let rows: Vec<String> = (0..r)
        .map(|i| {
            let left: Vec<String> = c.row(i)[..r].iter().map(|v| v.to_string()).collect();
            let right: Vec<String> = c.row(i)[r..].iter().map(|v| v.to_string()).collect();
            if right.is_empty() {
                format!("({})", left.join(","))
            } else {
                format!("({}|{})", left.join(","), right.join(","))
            }
        })
        .collect();
    rows.join(" ")
}

fn height(point: &str, curve: &Curve, tol: f64) -> Result<i32> {
    let x: PointVector = point.parse()?;
    x.check_on(curve)?;
    let eng = HeightEngine::new(curve);
    let h = eng.vector_height(&x, tol)?;
    let (lo, hi) = h.norm_bounds();
    println!("point = {x}");
    println!("height = {} +/- {:e}", h.value, h.tol);
    println!("norm = {} in [{lo}, {hi}]", h.norm());
    if x.dim() == 1 {
        println!("torsion = {}", curve.is_torsion(&x.coords()[0])?);
    }
    Ok(0)
}

fn reduce(matrix: &str) -> Result<i32> {
    let psi: IntMorphism = matrix.parse()?;
    let f = gauss_reduce(&psi)?;
    let pivots: Vec<String> = f.pivot_columns().iter().map(|k| (k + 1).to_string()).collect();
    println!("input = {psi}");
    println!("reduced = {}, perm {}", shape(&f), f.perm_display());
    println!("matrix = {}", f.matrix);
    println!("pivot = {}", f.pivot);
    println!("pivot_columns = ({})", pivots.join(","));
    println!("containment = {}", kernel_contains_up_to_torsion(&psi, &f.matrix)?);
    Ok(0)
}

fn enumerate(g: usize, r: usize, m: u64, s: Option<usize>, canonical_only: bool, cap: u64) -> Result<i32> {
    if !(1 <= r && r <= g) || m == 0 {
        return Err(Error::Validation("need 1 <= r <= g and M >= 1".into()));
    }
    let upper = match s {
        Some(s) => count_special(g, s, r, m),
        None if canonical_only => count_gauss_reduced(g, r, m),
        None => count_gauss_reduced(g, r, m).saturating_mul((1..=g as u128).product()),
    };
    if upper > cap as u128 {
        return Err(Error::Budget(format!("up to {upper} morphisms exceed --cap {cap}")));
    }
    let mut n = 0u64;
    match s {
        Some(s) => {
            for f in enumerate_special(g, s, r, m) {
                println!("{}", f.to_wire());
                n += 1;
            }
        }
        None => {
            for f in enumerate_gauss_reduced(g, r, m, canonical_only) {
                println!("{}", f.matrix.to_wire());
                n += 1;
            }
        }
    }
    println!("count = {n}");
    Ok(0)
}

fn bounds(config: &Path, out: &Option<PathBuf>, json: bool) -> Result<i32> {
    let cfg = RunConfig::load(config)?;
    let rep = main_delta_chain(&cfg.bound_params()?)?;
    let text = rep.to_text();
    let js = serde_json::to_string_pretty(&rep.to_json()).expect("report serializes") + "\n";
    if json {
        print!("{js}");
    } else {
        print!("{text}");
    }
    if let Some(path) = out {
        std::fs::write(path, &text)?;
        std::fs::write(path.with_extension("json"), &js)?;
    }
    Ok(if rep.diagnostics.is_empty() { 0 } else { 2 })
}

#[allow(clippy::too_many_arguments)]
fn run_scan(
    config: &Path,
    points: &Option<PathBuf>,
    out: &Option<PathBuf>,
    tol: &Option<String>,
    cap: Option<u64>,
    canonical_only: bool,
) -> Result<i32> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(t) = tol {
        parse_cli_real(t)?;
        cfg.tolerances.compare = ellsub::rational::parse_exact_decimal(t)?;
    }
    if let Some(c) = cap {
        cfg.caps.m_cap = c;
    }
    if canonical_only {
        cfg.scan.canonical_only = true;
    }
    let path = match points {
        Some(p) => p.clone(),
        None => {
            let p = cfg.scan.points.clone().ok_or_else(|| Error::Validation("no points file given".into()))?;
            if p.is_relative() {
                config.parent().map(|d| d.join(&p)).unwrap_or(p)
            } else {
                p
            }
        }
    };
    if points.is_some() {
        cfg.scan.points = Some(path.clone());
    }
    let pts = load_points(&path)?;
    let curve = cfg.curve()?;
    let result = scan(&curve, &pts, &cfg.gamma()?, &cfg.scan_config())?;
    let report = render_scan_report(&cfg, &pts, &result);
    match out {
        Some(p) => std::fs::write(p, &report)?,
        None => print!("{report}"),
    }
    let s = &result.summary;
    eprintln!(
        "scanned {} points x {} morphisms: {} HIT, {} MISS, {} BOUNDARY, {} FAILED",
        s.points_in_ball + s.points_on_ball_boundary,
        s.morphisms,
        s.hit,
        s.miss,
        s.boundary,
        s.failed
    );
    Ok(if s.failed > 0 { 3 } else { 0 })
}

fn check() -> i32 {
    let mut failed = 0;
    for (l, secs) in run_checks() {
        println!("{} {} ({:.2}s) {}", if l.passed { "PASS" } else { "FAIL" }, l.name, secs, l.detail);
        failed += usize::from(!l.passed);
    }
    i32::from(failed > 0)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Height { point, curve, config, tol } => height(&point, &curve_arg(&curve, &config)?, parse_cli_real(&tol)?),
        Cmd::Reduce { matrix } => reduce(&matrix),
        Cmd::Enumerate { g, r, m, s, canonical_only: _, permuted, cap } => enumerate(g, r, m, s, !permuted, cap),
        Cmd::Bounds { config, out, json } => bounds(&config, &out, json),
        Cmd::Scan { config, points, out, tol, cap, canonical_only } => run_scan(&config, &points, &out, &tol, cap, canonical_only),
        Cmd::Check => Ok(check()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
