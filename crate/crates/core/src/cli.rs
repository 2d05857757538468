//! Command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 1 for usage, validation and file errors, 2 when an
//! iterative method fails to converge. [`run_with`] does the same against
//! caller-supplied streams, which is what the tests drive.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::decompose::{self, DecompositionResult};
use crate::error::Error;
use crate::kfamily::KPoint;
use crate::measure::{Measure, SecondMomentParam};
use crate::quadrature::{self, ConvexTestFunction, MomentVector, Quadrature, RadauEnd, MEMBERSHIP_TOL};
use crate::represent::{self, Grid, Representation, TestBasis};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "EXTREMAL_MOMENTS_SEED";

const DEFAULT_SEED: u64 = 1;
const DEFAULT_SLACK: f64 = 1e-10;
const CURVE_SAMPLES: usize = 200;

const CATALOG: &str = "\
Commands:
  quad gauss N | lobatto N | radau N --end left|right
  quad classify --moments-degree K --quadrature FILE
  extremality --n N [--trials T] [--seed S]
  measure moments FILE --max-degree K
  measure split FILE
  measure decompose FILE [--a A] [--out-prefix P]
  decompose FILE --a A [--out-prefix P]
  kfamily --b B --x X --y Y
  represent FILE --b B [--grid NXxNY] [--max-degree K] [--out FILE]

Every command accepts --format human|json|csv (default human).
The extremality seed falls back to $EXTREMAL_MOMENTS_SEED.";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: Error,
    },
    #[error(transparent)]
    Compute(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(e) | CliError::Input { source: e, .. } if e.is_numeric() => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "extremal-moments",
    about = "Extreme quadratures and extreme symmetric measures with prescribed moments",
    after_help = CATALOG,
    arg_required_else_help = true
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build or classify quadratures.
    #[command(subcommand)]
    Quad(QuadCommand),
    /// Check G_n[f] <= T[f] <= Lob_{n+1}[f] on seeded candidates T.
    Extremality {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=40))]
        n: u64,
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(0..=100_000))]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Operations on measure files.
    #[command(subcommand)]
    Measure(MeasureCommand),
    /// Split a continuous symmetric measure into two parts with equal second moment.
    Decompose(DecomposeArgs),
    /// Build the extreme measure mu_(x,y) for second moment b^2.
    Kfamily {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Fit a mixing measure over extreme measures to a target measure.
    Represent {
        file: PathBuf,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value = "101x101")]
        grid: String,
        #[arg(long, default_value_t = represent::DEFAULT_MAX_DEGREE)]
        max_degree: usize,
        /// Write the CSV mixing measure here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum QuadCommand {
    /// Gauss-Legendre rule with N nodes.
    Gauss {
        #[arg(value_parser = clap::value_parser!(u64).range(1..=1000))]
        n: u64,
    },
    /// Lobatto rule with N nodes including both endpoints.
    Lobatto {
        #[arg(value_parser = clap::value_parser!(u64).range(2..=1000))]
        n: u64,
    },
    /// Radau rule with N nodes, one at the chosen endpoint.
    Radau {
        #[arg(value_parser = clap::value_parser!(u64).range(1..=1000))]
        n: u64,
        #[arg(long, value_enum)]
        end: EndArg,
    },
    /// Extreme-point test for a quadrature file against its own moments.
    Classify {
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=200))]
        moments_degree: u64,
        #[arg(long)]
        quadrature: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EndArg {
    Left,
    Right,
}

impl From<EndArg> for RadauEnd {
    fn from(e: EndArg) -> Self {
        match e {
            EndArg::Left => RadauEnd::Left,
            EndArg::Right => RadauEnd::Right,
        }
    }
}

#[derive(Debug, Subcommand)]
enum MeasureCommand {
    /// Moments m_0..m_K.
    Moments {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(0..=200))]
        max_degree: u64,
    },
    /// Continuous/discrete split.
    Split { file: PathBuf },
    /// Same as the top-level `decompose`.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Args)]
struct DecomposeArgs {
    file: PathBuf,
    /// Defaults to sqrt(m_2) of the input.
    #[arg(long)]
    a: Option<f64>,
    /// Writes P_result.json, P_nu1.json, P_nu2.json and P_curves.csv.
    #[arg(long)]
    out_prefix: Option<String>,
}

/// Runs against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs with explicit output streams; `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<String> {
    let fmt = cli.format;
    match &cli.command {
        Command::Quad(q) => quad(q, fmt),
        Command::Extremality { n, trials, seed } => extremality(*n as usize, *trials as usize, *seed, fmt),
        Command::Measure(MeasureCommand::Moments { file, max_degree }) => moments(file, *max_degree as usize, fmt),
        Command::Measure(MeasureCommand::Split { file }) => split(file, fmt),
        Command::Measure(MeasureCommand::Decompose(args)) | Command::Decompose(args) => decompose_cmd(args, fmt),
        Command::Kfamily { b, x, y } => kfamily(*b, *x, *y, fmt),
        Command::Represent {
            file,
            b,
            grid,
            max_degree,
            out,
        } => represent_cmd(file, *b, grid, *max_degree, out.as_deref(), fmt),
    }
}

/// Rounds to 12 significant digits and prints the shortest form of the result.
pub fn human(x: f64) -> String {
    if !x.is_finite() || x == 0.0 {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if (1e-4..1e15).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("output serializes");
    s.push('\n');
    s
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_measure(path: &Path) -> CliResult<Measure> {
    Measure::from_json(&read_file(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn read_quadrature(path: &Path) -> CliResult<Quadrature> {
    let text = read_file(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        source: Error::Validation {
            field: "quadrature".into(),
            message: e.to_string(),
        },
    })
}

/// Writes every file to a sibling temporary first and renames only once all
/// of them are complete, so a failure leaves the targets untouched.
fn write_all_atomic(files: &[(PathBuf, String)]) -> CliResult<()> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    let mut staged = Vec::with_capacity(files.len());
    for (path, contents) in files {
        let name = path
            .file_name()
            .ok_or_else(|| CliError::Usage(format!("{} is not a file path", path.display())))?;
        let mut tmp_name = OsString::from(".");
        tmp_name.push(name);
        tmp_name.push(format!(".tmp{}", std::process::id()));
        let tmp = path.with_file_name(tmp_name);
        if let Err(e) = fs::write(&tmp, contents) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(io(path)(e));
        }
        staged.push((tmp, path.clone()));
    }
    for (tmp, path) in &staged {
        fs::rename(tmp, path).map_err(io(path))?;
    }
    Ok(())
}

fn quadrature_output(q: &Quadrature, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(q),
        Format::Csv => {
            let mut s = String::from("node,weight\n");
            for (x, w) in q.nodes().iter().zip(q.weights()) {
                s.push_str(&format!("{x:?},{w:?}\n"));
            }
            s
        }
        Format::Human => {
            let mut s = format!("{:>4}  {:>20}  {:>20}\n", "k", "node", "weight");
            for (k, (x, w)) in q.nodes().iter().zip(q.weights()).enumerate() {
                s.push_str(&format!("{:>4}  {:>20}  {:>20}\n", k + 1, human(*x), human(*w)));
            }
            s
        }
    }
}

fn quad(cmd: &QuadCommand, fmt: Format) -> CliResult<String> {
    let q = match cmd {
        QuadCommand::Gauss { n } => quadrature::gauss(*n as usize)?,
        QuadCommand::Lobatto { n } => quadrature::lobatto(*n as usize)?,
        QuadCommand::Radau { n, end } => quadrature::radau(*n as usize, (*end).into())?,
        QuadCommand::Classify {
            moments_degree,
            quadrature,
        } => return classify(quadrature, *moments_degree as usize, fmt),
    };
    Ok(quadrature_output(&q, fmt))
}

#[derive(Serialize)]
struct Classification<'a> {
    nodes: &'a [f64],
    weights: &'a [f64],
    moments_degree: usize,
    moments: &'a [f64],
    node_count: usize,
    extreme: bool,
    lebesgue_exact: bool,
}

fn classify(path: &Path, k: usize, fmt: Format) -> CliResult<String> {
    let q = read_quadrature(path)?;
    let m = q.moment_vector(k);
    let extreme = quadrature::is_extreme(&q, &m, MEMBERSHIP_TOL)?;
    let lebesgue_exact = quadrature::is_exact(&q, &MomentVector::lebesgue(k), MEMBERSHIP_TOL);
    let c = Classification {
        nodes: q.nodes(),
        weights: q.weights(),
        moments_degree: k,
        moments: m.values(),
        node_count: q.len(),
        extreme,
        lebesgue_exact,
    };
    Ok(match fmt {
        Format::Json => to_json(&c),
        Format::Csv => {
            let mut s = String::from("k,moment\n");
            for (i, v) in m.values().iter().enumerate() {
                s.push_str(&format!("{i},{v:?}\n"));
            }
            s
        }
        Format::Human => format!(
            "nodes: {}\norder: {k}\nextreme: {}\nexact for Lebesgue moments: {}\n",
            q.len(),
            if extreme { "yes" } else { "no" },
            if lebesgue_exact { "yes" } else { "no" },
        ),
    })
}

#[derive(Serialize)]
struct CandidateResult {
    label: String,
    nodes: usize,
    pass: bool,
    rows: Vec<quadrature::ExtremalityRow>,
}

fn resolve_seed(seed: Option<u64>) -> CliResult<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn extremality(n: usize, trials: usize, seed: Option<u64>, fmt: Format) -> CliResult<String> {
    let seed = resolve_seed(seed)?;
    let catalog = ConvexTestFunction::default_catalog();
    let pool = quadrature::exact_rule_pool(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = pool.clone();
    for _ in 0..trials {
        candidates.push(quadrature::random_mixture(&pool, &mut rng)?);
    }
    let mut results = Vec::with_capacity(candidates.len());
    for (label, t) in candidates {
        let report = quadrature::verify_extremality(n, &t, &catalog, DEFAULT_SLACK)?;
        results.push(CandidateResult {
            label,
            nodes: t.len(),
            pass: report.pass(),
            rows: report.rows,
        });
    }
    let pass = results.iter().all(|r| r.pass);
    Ok(match fmt {
        Format::Json => to_json(&json!({
            "n": n,
            "seed": seed,
            "trials": trials,
            "slack": DEFAULT_SLACK,
            "pass": pass,
            "candidates": results,
        })),
        Format::Csv => {
            let mut s = String::from("candidate,function,gauss,candidate_value,lobatto,pass\n");
            for (i, r) in results.iter().enumerate() {
                for row in &r.rows {
                    s.push_str(&format!(
                        "{i},{},{:?},{:?},{:?},{}\n",
                        row.function.label(),
                        row.gauss,
                        row.candidate,
                        row.lobatto,
                        row.pass
                    ));
                }
            }
            s
        }
        Format::Human => {
            let failed = results.iter().filter(|r| !r.pass).count();
            let mut s = format!(
                "n = {n}, seed = {seed}, {} candidates, {} functions\n",
                results.len(),
                catalog.len()
            );
            if let Some(first) = results.first() {
                s.push_str(&format!("{:<16} {:>16} {:>16} {:>16}\n", "f", "G_n", first.label, "Lob_n+1"));
                for row in &first.rows {
                    s.push_str(&format!(
                        "{:<16} {:>16} {:>16} {:>16}\n",
                        row.function.label(),
                        human(row.gauss),
                        human(row.candidate),
                        human(row.lobatto)
                    ));
                }
            }
            s.push_str(&format!(
                "{}: {failed} of {} candidates violate the sandwich\n",
                if pass { "PASS" } else { "FAIL" },
                results.len()
            ));
            s
        }
    })
}

fn moments(path: &Path, k: usize, fmt: Format) -> CliResult<String> {
    let mu = read_measure(path)?;
    let m = mu.moments(k);
    Ok(match fmt {
        Format::Json => to_json(&json!({ "moments": m })),
        Format::Csv => {
            let mut s = String::from("k,moment\n");
            for (i, v) in m.iter().enumerate() {
                s.push_str(&format!("{i},{v:?}\n"));
            }
            s
        }
        Format::Human => m.iter().enumerate().map(|(i, v)| format!("m_{i} = {}\n", human(*v))).collect(),
    })
}

fn split(path: &Path, fmt: Format) -> CliResult<String> {
    let mu = read_measure(path)?;
    let s = mu.split_continuous_discrete()?;
    Ok(match fmt {
        Format::Json | Format::Csv => to_json(&json!({
            "beta": s.beta,
            "continuous": s.continuous,
            "discrete": s.discrete,
        })),
        Format::Human => format!(
            "beta = {}\ncontinuous: {}\ndiscrete: {}\n",
            human(s.beta),
            s.continuous.to_json(),
            s.discrete.to_json()
        ),
    })
}

fn curves_csv(mu: &Measure, r: &DecompositionResult) -> String {
    let mut s = String::from("x,g,h\n");
    for i in 1..=CURVE_SAMPLES {
        let x = i as f64 / CURVE_SAMPLES as f64;
        let g = decompose::g_fn(mu, x).map(|v| format!("{v:?}")).unwrap_or_default();
        let h = if x < r.b1 {
            decompose::h_fn(mu, r.b1, x).map(|v| format!("{v:?}")).unwrap_or_default()
        } else {
            String::new()
        };
        s.push_str(&format!("{x:?},{g},{h}\n"));
    }
    s
}

fn decompose_cmd(args: &DecomposeArgs, fmt: Format) -> CliResult<String> {
    let mu = read_measure(&args.file)?;
    let a = match args.a {
        Some(a) => a,
        None => mu.moment(2).max(0.0).sqrt(),
    };
    let a = SecondMomentParam::new(a)?;
    let r = decompose::decompose(&mu, a)?;
    if let Some(prefix) = &args.out_prefix {
        write_all_atomic(&[
            (PathBuf::from(format!("{prefix}_result.json")), r.to_json() + "\n"),
            (PathBuf::from(format!("{prefix}_nu1.json")), r.nu1.to_json() + "\n"),
            (PathBuf::from(format!("{prefix}_nu2.json")), r.nu2.to_json() + "\n"),
            (PathBuf::from(format!("{prefix}_curves.csv")), curves_csv(&mu, &r)),
        ])?;
    }
    Ok(match fmt {
        Format::Json => r.to_json() + "\n",
        Format::Csv => format!("a,a1,b1,alpha\n{:?},{:?},{:?},{:?}\n", a.value(), r.a1, r.b1, r.alpha),
        Format::Human => format!(
            "a = {}\nb1 = {}\na1 = {}\nalpha = {}\nE1 = [-b1, -a1] U [a1, b1]\n",
            human(a.value()),
            human(r.b1),
            human(r.a1),
            human(r.alpha)
        ),
    })
}

fn kfamily(b: f64, x: f64, y: f64, fmt: Format) -> CliResult<String> {
    let k = KPoint::new(b, x, y)?;
    let mu = k.to_measure();
    Ok(match fmt {
        Format::Json => to_json(&json!({
            "b": k.b, "x": k.x, "y": k.y, "p": k.p, "q": k.q,
            "class": k.classify(),
            "measure": mu,
        })),
        Format::Csv => {
            let mut s = String::from("x,mass\n");
            for atom in mu.atoms() {
                s.push_str(&format!("{:?},{:?}\n", atom.x, atom.mass));
            }
            s
        }
        Format::Human => format!(
            "p={}, q={}\nclass: {}\nmeasure: {}\n",
            human(k.p),
            human(k.q),
            match k.classify() {
                crate::kfamily::KClass::TwoPoint => "two-point",
                crate::kfamily::KClass::ThreePoint => "three-point",
                crate::kfamily::KClass::FourPoint => "four-point",
            },
            mu.to_json()
        ),
    })
}

fn representation_json(r: &Representation) -> String {
    let points: Vec<[f64; 3]> = r
        .gamma
        .points()
        .iter()
        .zip(r.gamma.weights())
        .map(|(&(x, y), &w)| [x, y, w])
        .collect();
    to_json(&json!({
        "b": r.gamma.b(),
        "grid": [r.grid.nx, r.grid.ny],
        "residual": r.residual,
        "max_degree": r.max_degree,
        "kkt_residual": r.kkt_residual,
        "residuals": r.residuals,
        "gamma": points,
    }))
}

fn represent_cmd(path: &Path, b: f64, grid: &str, k: usize, out: Option<&Path>, fmt: Format) -> CliResult<String> {
    let b = SecondMomentParam::new(b)?;
    let grid: Grid = grid.parse()?;
    let basis = TestBasis::new(k)?;
    let sigma = read_measure(path)?;
    let r = represent::represent(&sigma, b, grid, basis)?;
    if let Some(out) = out {
        write_all_atomic(&[(out.to_path_buf(), r.to_csv())])?;
    }
    Ok(match fmt {
        Format::Json => representation_json(&r),
        Format::Csv if out.is_none() => r.to_csv(),
        _ => format!(
            "b = {}\ngrid = {}x{}\nmax degree = {}\nresidual = {}\nsupport points = {}\n",
            human(b.value()),
            r.grid.nx,
            r.grid.ny,
            r.max_degree,
            human(r.residual),
            r.gamma.points().len()
        ),
    })
}
