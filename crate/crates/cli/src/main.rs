//! wittkit: exact formal calculus, Witt/Weyl operator algebras, pseudomonoid
//! combinatorics and graded spectral analysis from the command line.

mod output;
mod spec;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wittkit_core::graded::{self, EndoSpec};
use wittkit_core::parse;
use wittkit_core::pseudomonoid::{self as pm, Window};
use wittkit_core::scalar::Scalar;
use wittkit_core::series::DEFAULT_PREC;
use wittkit_core::verify;
use wittkit_core::witt::{self, StableAlgebraId};

use output::Render;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser)]
#[command(name = "wittkit", version, about = "exact Witt-algebra toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PrecArg {
    /// Working precision in known terms (WITTKIT_PREC overrides the default).
    #[arg(long, env = "WITTKIT_PREC", default_value_t = DEFAULT_PREC)]
    prec: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate and canonically print a series expression.
    Series {
        #[command(subcommand)]
        cmd: SeriesCmd,
    },
    /// Operator-algebra commands.
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Lie-algebra commands on elements f*D.
    Witt {
        #[command(subcommand)]
        cmd: WittCmd,
    },
    /// Pseudomonoid commands.
    Pm {
        #[command(subcommand)]
        cmd: PmCmd,
    },
    /// Strongly graded Lie-algebra commands.
    Graded {
        #[command(subcommand)]
        cmd: GradedCmd,
    },
    /// Run the seeded invariant suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Evaluate an expression to a canonical series.
    Eval {
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        prec: PrecArg,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Normalize an operator expression to the canonical form Σ fᵢDⁱ.
    Normalize {
        #[arg(long)]
        expr: String,
    },
}

#[derive(Subcommand)]
enum WittCmd {
    /// Bracket [f*D, g*D].
    Bracket {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Eigenvector candidate of ad(f*D) for eigenvalue a.
    Eig {
        #[arg(long)]
        f: String,
        #[arg(long)]
        a: String,
        #[command(flatten)]
        prec: PrecArg,
    },
    /// Classify the spectrum and test candidate eigenvalues for membership.
    Spec {
        #[arg(long)]
        f: String,
        /// poly | laurent | powerseries | fraction
        #[arg(long)]
        alg: String,
        /// Range `a..b` (integers, inclusive) or comma list of rationals.
        #[arg(long)]
        candidates: String,
        #[arg(long, default_value_t = 16)]
        degree_bound: i64,
        #[command(flatten)]
        prec: PrecArg,
    },
}

#[derive(Subcommand)]
enum PmCmd {
    /// Enumerate all ideal subsets of G on the window.
    Ideals {
        #[arg(long)]
        pm: String,
        #[arg(long, default_value = "-8:8")]
        window: String,
    },
    /// Simplicity verdict.
    Simple {
        #[arg(long)]
        pm: String,
        #[arg(long, default_value = "-8:8")]
        window: String,
    },
    /// Self-containment verdict.
    SelfContaining {
        #[arg(long)]
        pm: String,
        #[arg(long, default_value_t = 8)]
        search_bound: i64,
    },
    /// Equivalence G1 = k·G2.
    Equiv {
        #[arg(long)]
        pm1: String,
        #[arg(long)]
        pm2: String,
        #[arg(long, default_value = "-8:8")]
        window: String,
    },
}

#[derive(Subcommand)]
enum GradedCmd {
    /// Windowed spectrum of ad(alpha) for the supported forms.
    Spec {
        /// Graded element literal, e.g. "{0: 1, -1: 5}".
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "Z")]
        pm: String,
        #[arg(long, default_value = "-8:8")]
        window: String,
    },
    /// Verify an endomorphism spec on the window basis.
    Endo {
        /// "virasoro:<a>" or "scale:<k>".
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "Z")]
        pm: String,
        #[arg(long, default_value = "-8:8")]
        window: String,
    },
}

/// Domain failures exit with 1; parse/usage failures with 2.
enum CliError {
    Parse(String),
    Domain(String),
}

impl CliError {
    fn render(&self, format: Format) -> (String, i32) {
        let (kind, msg, code) = match self {
            CliError::Parse(m) => ("parse", m, 2),
            CliError::Domain(m) => ("domain", m, 1),
        };
        let text = match format {
            Format::Text => format!("error ({}): {}", kind, msg),
            Format::Json => serde_json::json!({"error": {"kind": kind, "message": msg}}).to_string(),
        };
        (text, code)
    }
}

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

fn domain_err(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn parse_window(s: &str) -> Result<Window, CliError> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| CliError::Parse(format!("window '{}' is not lo:hi", s)))?;
    let lo = parse::parse_scalar(lo).map_err(parse_err)?;
    let hi = parse::parse_scalar(hi).map_err(parse_err)?;
    Window::new(lo, hi).map_err(domain_err)
}

fn parse_alg(s: &str) -> Result<StableAlgebraId, CliError> {
    match s {
        "poly" => Ok(StableAlgebraId::Poly),
        "laurent" => Ok(StableAlgebraId::LaurentPoly),
        "powerseries" => Ok(StableAlgebraId::PowerSeries),
        "fraction" => Ok(StableAlgebraId::FractionField),
        other => Err(CliError::Parse(format!(
            "unknown algebra '{}': expected poly|laurent|powerseries|fraction",
            other
        ))),
    }
}

fn parse_candidates(s: &str) -> Result<Vec<Scalar>, CliError> {
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| parse_err("bad range start"))?;
        let b: i64 = b.trim().parse().map_err(|_| parse_err("bad range end"))?;
        if a > b {
            return Err(CliError::Parse("empty candidate range".into()));
        }
        return Ok((a..=b).map(wittkit_core::scalar::int).collect());
    }
    s.split(',')
        .map(|p| parse::parse_scalar(p.trim()).map_err(parse_err))
        .collect()
}

fn parse_endo_spec(s: &str) -> Result<EndoSpec, CliError> {
    if let Some(a) = s.strip_prefix("virasoro:") {
        let a: i64 = a.parse().map_err(|_| parse_err("virasoro:<a> needs an integer"))?;
        if a == 0 {
            return Err(CliError::Domain("virasoro scale must be nonzero".into()));
        }
        return Ok(EndoSpec::VirasoroScale(a));
    }
    if let Some(k) = s.strip_prefix("scale:") {
        let k = parse::parse_scalar(k).map_err(parse_err)?;
        return Ok(EndoSpec::GradeScale(k));
    }
    Err(CliError::Parse(format!("unknown endo spec '{}'", s)))
}

fn run(cmd: &Cmd) -> Result<Render, CliError> {
    match cmd {
        Cmd::Series { cmd: SeriesCmd::Eval { expr, prec } } => {
            let v = parse::parse_series(expr).map_err(parse_err)?;
            let v = match v.prec() {
                wittkit_core::series::Precision::Trunc(p) if p > prec.prec => v.truncate(prec.prec),
                _ => v,
            };
            Ok(output::series_result("series-eval", &v))
        }
        Cmd::Weyl { cmd: WeylCmd::Normalize { expr } } => {
            let op = parse::parse_operator(expr).map_err(parse_err)?;
            Ok(output::weyl_result(&op))
        }
        Cmd::Witt { cmd } => match cmd {
            WittCmd::Bracket { f, g } => {
                let f = parse::parse_witt(f).map_err(parse_err)?;
                let g = parse::parse_witt(g).map_err(parse_err)?;
                let b = witt::witt_bracket(&f, &g);
                Ok(output::witt_result("witt-bracket", &b))
            }
            WittCmd::Eig { f, a, prec } => {
                let f = parse::parse_series(f).map_err(parse_err)?;
                let a = parse::parse_scalar(a).map_err(parse_err)?;
                let v = witt::eigenvector_candidate(&f, &a, prec.prec).map_err(domain_err)?;
                Ok(output::witt_result("witt-eig", &v))
            }
            WittCmd::Spec { f, alg, candidates, degree_bound, prec } => {
                let fs = parse::parse_series(f).map_err(parse_err)?;
                let alg_id = parse_alg(alg)?;
                let cands = parse_candidates(candidates)?;
                let classification = witt::spectrum_classify(&fs).map_err(domain_err)?;
                let rows = witt::spectrum_in_algebra(&fs, alg_id, &cands, *degree_bound, prec.prec);
                Ok(output::spectrum_result(&classification, &rows))
            }
        },
        Cmd::Pm { cmd } => match cmd {
            PmCmd::Ideals { pm: spec_str, window } => {
                let g = spec::parse_pm(spec_str)?;
                let w = parse_window(window)?;
                let ideals = pm::enumerate_ideal_subsets(&g, &w).map_err(domain_err)?;
                Ok(output::ideals_result(&ideals))
            }
            PmCmd::Simple { pm: spec_str, window } => {
                let g = spec::parse_pm(spec_str)?;
                let w = parse_window(window)?;
                Ok(output::simplicity_result(&pm::simplicity_verdict(&g, &w)))
            }
            PmCmd::SelfContaining { pm: spec_str, search_bound } => {
                let g = spec::parse_pm(spec_str)?;
                Ok(output::self_containing_result(&pm::is_self_containing(&g, *search_bound)))
            }
            PmCmd::Equiv { pm1, pm2, window } => {
                let g1 = spec::parse_pm(pm1)?;
                let g2 = spec::parse_pm(pm2)?;
                let w = parse_window(window)?;
                Ok(output::equiv_result(&pm::equivalence_test(&g1, &g2, &w)))
            }
        },
        Cmd::Graded { cmd } => match cmd {
            GradedCmd::Spec { alpha, pm: spec_str, window } => {
                let a = parse::parse_graded(alpha).map_err(parse_err)?;
                let g = spec::parse_pm(spec_str)?;
                let w = parse_window(window)?;
                let rep = graded::spectrum_window(&a, &g, &w).map_err(domain_err)?;
                Ok(output::graded_spectrum_result(&rep))
            }
            GradedCmd::Endo { spec: espec, pm: spec_str, window } => {
                let e = parse_endo_spec(espec)?;
                let g = spec::parse_pm(spec_str)?;
                let w = parse_window(window)?;
                let rep = graded::endo_verify(&e, &g, &w).map_err(domain_err)?;
                Ok(output::endo_result(&rep))
            }
        },
        Cmd::Verify { seed } => {
            let reports = verify::run_all(*seed);
            Ok(output::verify_result(*seed, &reports))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok(render) => {
            match cli.format {
                Format::Text => println!("{}", render.text),
                Format::Json => println!("{}", render.json),
            }
            let code = if render.failed { 1 } else { 0 };
            std::process::exit(code);
        }
        Err(e) => {
            let (msg, code) = e.render(cli.format);
            eprintln!("{}", msg);
            std::process::exit(code);
        }
    }
}
