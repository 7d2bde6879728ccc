//! `blaschke-lab`: experiments on finite Blaschke products from the shell.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage or parse
//! error, 3 numerical failure, 4 I/O error.

mod error;
mod spec_file;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blaschke_core::lab::{self, SequenceMode, SequenceSpec};
use blaschke_core::verify::{self, CriterionReport, SuiteConfig, Tolerances};
use blaschke_core::{random, Complex64, FiniteBlaschkeProduct};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use error::{CliError, CliResult};
use spec_file::ProductSpecFile;

const TOL_ENV: &str = "BLASCHKE_LAB_TOL_OVERRIDES";

#[derive(Parser)]
#[command(
    name = "blaschke-lab",
    version,
    about = "Experiments on finite Blaschke products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Radial,
    Spiral,
    Alternating,
}

impl From<Mode> for SequenceMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Radial => SequenceMode::Radial,
            Mode::Spiral => SequenceMode::Spiral,
            Mode::Alternating => SequenceMode::Alternating,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteName {
    Hull,
    CriticalCount,
    Converge,
    Counterexample,
    DerivativeIdentity,
    BoundaryDerivative,
    Fatou,
    Valence,
    Separation,
    Density,
    Geometry,
    All,
}

#[derive(clap::Args)]
struct ProductSource {
    /// Product file: {"gamma": [re, im], "zeros": [[re, im], ...]}.
    #[arg(required_unless_present = "random")]
    spec: Option<PathBuf>,
    /// Use a random product of this order instead of a file.
    #[arg(long, conflicts_with = "spec")]
    random: Option<usize>,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ProductSource {
    fn load(&self) -> CliResult<FiniteBlaschkeProduct> {
        match (&self.spec, self.random) {
            (_, Some(order)) => random_product(order, self.seed),
            (Some(path), None) => ProductSpecFile::load(path),
            (None, None) => Err(CliError::Usage("no product given".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Critical points of B with multiplicities.
    CriticalPoints {
        #[command(flatten)]
        source: ProductSource,
        /// Check each interior point against the hyperbolic hull of the zeros.
        #[arg(long)]
        hull: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Sup-norm distance of renormalized conjugates from the limit rotation.
    Converge {
        spec: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Boundary point as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        gamma0: String,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        count: usize,
        /// Radius of the sampling grid.
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = lab::DEFAULT_GRID)]
        grid: usize,
    },
    /// SVG figure: unit circle, zeros, critical points and the hull.
    Plot {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run property suites; prints a JSON summary.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteName,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Print a random product file.
    Random {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn random_product(order: usize, seed: u64) -> CliResult<FiniteBlaschkeProduct> {
    if order == 0 {
        return Err(CliError::Usage("order must be positive".into()));
    }
    Ok(random::product(&mut random::rng(seed), order, 0.9))
}

fn tolerances() -> CliResult<Tolerances> {
    let mut tol = Tolerances::default();
    if let Ok(spec) = std::env::var(TOL_ENV) {
        tol.apply_overrides(&spec)
            .map_err(|e| CliError::Usage(format!("{TOL_ENV}: {e}")))?;
    }
    Ok(tol)
}

fn parse_complex(text: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [re, im] = parts.as_slice() else {
        return Err(CliError::Usage(format!("expected \"re,im\", got {text:?}")));
    };
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::Usage(format!("not a number: {s:?}")))
    };
    Ok(Complex64::new(parse(re)?, parse(im)?))
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_out(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("writing output", e))
}

#[derive(Serialize)]
struct CriticalRow {
    re: f64,
    im: f64,
    multiplicity: usize,
    region: &'static str,
    in_hull: Option<bool>,
}

fn critical_points(
    b: &FiniteBlaschkeProduct,
    hull: bool,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<()> {
    let set = b.critical_points()?;
    let verdicts = if hull {
        Some(lab::hull_check(b, tolerances()?.hull_klein)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for (i, &(z, m)) in set.interior.iter().enumerate() {
        rows.push(CriticalRow {
            re: z.re,
            im: z.im,
            multiplicity: m,
            region: "interior",
            in_hull: verdicts.as_ref().map(|v| v[i].in_hull),
        });
    }
    for &(z, m) in &set.exterior {
        rows.push(CriticalRow {
            re: z.re,
            im: z.im,
            multiplicity: m,
            region: "exterior",
            in_hull: None,
        });
    }

    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["re", "im", "multiplicity", "region", "in_hull"])?;
            for r in &rows {
                let verdict = match r.in_hull {
                    Some(true) => "true",
                    Some(false) => "false",
                    None => "n/a",
                };
                w.write_record([
                    float(r.re),
                    float(r.im),
                    r.multiplicity.to_string(),
                    r.region.to_string(),
                    verdict.to_string(),
                ])?;
            }
            w.flush().map_err(|e| CliError::io("writing output", e))?;
        }
        Format::Json => {
            let text = serde_json::to_string_pretty(&rows).expect("rows serialize");
            write_out(out, &(text + "\n"))?;
        }
    }

    let outside = rows.iter().filter(|r| r.in_hull == Some(false)).count();
    if outside > 0 {
        return Err(CliError::Violation(format!(
            "{outside} interior critical point(s) outside the hyperbolic hull"
        )));
    }
    Ok(())
}

fn converge(
    b: &FiniteBlaschkeProduct,
    spec: &SequenceSpec,
    radius: f64,
    grid: usize,
    out: &mut dyn Write,
) -> CliResult<()> {
    let records = lab::convergence_experiment(b, spec, radius, grid)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "k",
        "a_re",
        "a_im",
        "gamma_re",
        "gamma_im",
        "sup_deviation",
        "rot_re",
        "rot_im",
    ])?;
    for r in records {
        w.write_record([
            r.k.to_string(),
            float(r.a.re),
            float(r.a.im),
            float(r.gamma.re),
            float(r.gamma.im),
            float(r.sup_deviation),
            float(r.rotation_constant.re),
            float(r.rotation_constant.im),
        ])?;
    }
    w.flush().map_err(|e| CliError::io("writing output", e))?;
    Ok(())
}

fn plot(b: &FiniteBlaschkeProduct, path: &Path) -> CliResult<()> {
    let hull = blaschke_core::hyperbolic::hyperbolic_convex_hull(b.zeros())?;
    let critical = b.critical_points()?.interior;
    std::fs::write(path, svg::render(b, &hull, &critical))
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

#[derive(Serialize)]
struct VerifySummary {
    suite: &'static str,
    seed: u64,
    trials: Option<usize>,
    passed: bool,
    criteria: Vec<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<CounterexampleSummary>,
}

#[derive(Serialize)]
struct CounterexampleSummary {
    #[serde(flatten)]
    values: lab::CounterexampleResult,
    even_limit_is_z: bool,
    odd_limit_is_minus_z: bool,
    renormalized_limit_is_z: bool,
}

fn suites(name: SuiteName) -> (&'static str, Vec<verify::Suite>) {
    use verify::*;
    match name {
        SuiteName::Hull => ("hull", vec![hull_containment]),
        SuiteName::CriticalCount => ("critical-count", vec![critical_count_reflection]),
        SuiteName::Converge => ("converge", vec![convergence]),
        SuiteName::Counterexample => ("counterexample", vec![counterexample]),
        SuiteName::DerivativeIdentity => ("derivative-identity", vec![derivative_identity]),
        SuiteName::BoundaryDerivative => ("boundary-derivative", vec![boundary_derivative]),
        SuiteName::Fatou => ("fatou", vec![fatou]),
        SuiteName::Valence => ("valence", vec![valence]),
        SuiteName::Separation => ("separation", vec![separation]),
        SuiteName::Density => ("density", vec![density]),
        SuiteName::Geometry => ("geometry", vec![geometry]),
        SuiteName::All => ("all", ALL.to_vec()),
    }
}

fn run_verify(
    name: SuiteName,
    trials: Option<usize>,
    seed: u64,
    out: &mut dyn Write,
) -> CliResult<()> {
    if trials == Some(0) {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let cfg = SuiteConfig {
        seed,
        trials,
        tolerances: tolerances()?,
    };
    let (label, list) = suites(name);
    let criteria: Vec<CriterionReport> = list.iter().map(|s| s(&cfg)).collect();
    let counterexample = if matches!(name, SuiteName::Counterexample | SuiteName::All) {
        let values = lab::counterexample_run(verify::CONVERGENCE_COUNT)?;
        let tol = cfg.tolerances.convergence_sup;
        Some(CounterexampleSummary {
            even_limit_is_z: values.even_limit_deviation < tol,
            odd_limit_is_minus_z: values.odd_limit_deviation < tol,
            renormalized_limit_is_z: values.renormalized_deviation < tol,
            values,
        })
    } else {
        None
    };
    let passed = criteria.iter().all(|c| c.passed);
    let summary = VerifySummary {
        suite: label,
        seed,
        trials,
        passed,
        criteria,
        counterexample,
    };
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_out(out, &(text + "\n"))?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<String> = summary
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.line())
            .collect();
        Err(CliError::Violation(failed.join("\n")))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::CriticalPoints {
            source,
            hull,
            format,
        } => critical_points(&source.load()?, hull, format, &mut out),
        Command::Converge {
            spec,
            mode,
            gamma0,
            rate,
            count,
            radius,
            grid,
        } => {
            let b = ProductSpecFile::load(&spec)?;
            let seq = SequenceSpec::new(parse_complex(&gamma0)?, mode.into(), rate, count)?;
            converge(&b, &seq, radius, grid, &mut out)
        }
        Command::Plot { spec, out: path } => plot(&ProductSpecFile::load(&spec)?, &path),
        Command::Verify {
            suite,
            trials,
            seed,
        } => run_verify(suite, trials, seed, &mut out),
        Command::Random { order, seed } => {
            let spec = ProductSpecFile::from_product(&random_product(order, seed)?);
            let text = serde_json::to_string_pretty(&spec).expect("spec serializes");
            write_out(&mut out, &(text + "\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("blaschke-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
