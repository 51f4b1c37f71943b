mod output;
mod scene;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use warpcurve::biharmonic::verdict_with;
use warpcurve::expr::parse_in;
use warpcurve::gallery::{self, Outcome};
use warpcurve::solver::{self, format_decimal, Case3Locus};
use warpcurve::{AnalysisOptions, Error};

use crate::scene::Scene;

#[derive(Parser)]
#[command(
    name = "warpcurve",
    version,
    about = "Biharmonic curves in warped products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the curve described by a scene file
    Analyze {
        scene: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a built-in curve against its known values
    Verify {
        /// geodesic | example1 | example2:u=<v> | latitude:t0=<v> | slant-helix:theta=<v>,rho=<v>
        selector: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run one of the inverse solvers
    Solve {
        #[command(subcommand)]
        kind: SolveKind,
    },
}

#[derive(Args)]
struct Common {
    /// Number of grid samples
    #[arg(long)]
    grid: Option<usize>,
    /// Biharmonicity tolerance on sup |tau2|
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for report.json and samples.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SolveKind {
    /// Warping functions carrying a biharmonic helix with B = 0
    #[command(name = "case1-warping")]
    Case1Warping {
        #[arg(long, allow_hyphen_values = true)]
        k1: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        k2: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
    },
    /// Curvature target K for a biharmonic slant helix
    #[command(name = "slant-K")]
    SlantK {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        c1: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
    },
    /// Base levels carrying biharmonic Legendre circles
    #[command(name = "case3-locus")]
    Case3Locus {
        /// Warping function in t
        #[arg(long)]
        f: String,
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["A", "B"])]
        interval: Vec<f64>,
    },
}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_input_error() {
        EXIT_INPUT
    } else {
        EXIT_NUMERIC
    })
}

fn options(base: AnalysisOptions, common: &Common) -> Result<AnalysisOptions, Error> {
    let mut o = base;
    if let Some(g) = common.grid {
        if g < 2 {
            return Err(Error::Invalid("--grid must be at least 2".into()));
        }
        o.grid_points = g;
    }
    if let Some(t) = common.tol {
        if !(t > 0.0) {
            return Err(Error::Invalid("--tol must be positive".into()));
        }
        o.tol = t;
    }
    Ok(o)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { scene, common } => analyze(&scene, &common),
        Command::Verify { selector, common } => verify(&selector, &common),
        Command::Solve { kind } => solve(kind),
    }
}

fn analyze(path: &Path, common: &Common) -> ExitCode {
    let built = Scene::load(path).and_then(|s| s.build());
    let (curve, opts) = match built.and_then(|(c, o)| Ok((c, options(o, common)?))) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let grid = curve.grid(opts.grid_points);
    let report = match verdict_with(&curve, &grid, &opts) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = output::write_all(&out, &report) {
        eprintln!("error: cannot write to {}: {e}", out.display());
        return ExitCode::from(EXIT_INPUT);
    }
    println!(
        "verdict = {}, sup |tau2| = {:.3e}, cases = {}, classification = {}",
        report.verdict,
        report.sup_norm,
        report.case_tags,
        report.classification.name()
    );
    ExitCode::SUCCESS
}

fn verify(selector: &str, common: &Common) -> ExitCode {
    let entry = match gallery::from_selector(selector) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let opts = match options(AnalysisOptions::default(), common) {
        Ok(o) => o,
        Err(e) => return fail(&e),
    };
    let v = match gallery::verify(&entry, &opts) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    println!("{}", entry.name);
    for o in &v.outcomes {
        print_outcome(o);
    }
    if let Some(out) = &common.out {
        if let Err(e) = output::write_all(out, &v.report) {
            eprintln!("error: cannot write to {}: {e}", out.display());
            return ExitCode::from(EXIT_INPUT);
        }
    }
    if v.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

fn print_outcome(o: &Outcome) {
    println!("  {o}");
}

fn solve(kind: SolveKind) -> ExitCode {
    match kind {
        SolveKind::Case1Warping { k1, k2, c } => match solver::solve_case1_warping(k1, k2, c) {
            Ok(Some(sol)) => println!("{}", sol.form()),
            Ok(None) => println!("no global solution (requires c > 0)"),
            Err(e) => return fail(&e),
        },
        SolveKind::SlantK { c, c1, theta } => match solver::slant_curvature_target(c, c1, theta) {
            Ok(k) => println!("K = {}", format_decimal(k, 10)),
            Err(Error::NoSolution(why)) => println!("no solution ({why})"),
            Err(e) => return fail(&e),
        },
        SolveKind::Case3Locus { f, interval } => {
            let f = match parse_in(&f, "t") {
                Ok(f) => f,
                Err(e) => return fail(&e),
            };
            let (a, b) = (interval[0], interval[1]);
            match solver::find_case3_locus(&f, (a, b)) {
                Ok(Case3Locus::Identically) => println!("identically satisfied on ({a}, {b})"),
                Ok(Case3Locus::Roots(r)) if r.is_empty() => println!("no solution on ({a}, {b})"),
                Ok(Case3Locus::Roots(r)) => {
                    for p in r {
                        println!(
                            "t0 = {}, k1 = {}, eps = {}",
                            format_decimal(p.t0, 10),
                            format_decimal(p.k1, 10),
                            p.eps
                        );
                    }
                }
                Err(e) => return fail(&e),
            }
        }
    }
    ExitCode::SUCCESS
}
