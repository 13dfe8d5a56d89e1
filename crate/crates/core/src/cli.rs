//! Command-line front end.
//!
//! Exit codes: `0` success, `1` computational failure (a failed check or a
//! violated precondition), `2` usage or input-schema error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::coframe::{connection_curvature, make_example_coframe, structure_residuals, CoframeGrid, ExampleCoframe};
use crate::diffeo::{act_on_hill, DiffeoLift, HillPotential};
use crate::error::Error;
use crate::hill::{ds_normalize, hill_from_asu, monodromy, BoundaryConnection, GaugeMap};
use crate::spectral::{self, PeriodicFn};
use crate::teich::{boundary_moment, FNPoint};
use crate::trumpet::{darboux_u, TrumpetPoint};
use crate::verify::{run_suite, Suite, SuiteReport, VerifyConfig, MIN_SUITE_SAMPLES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "virateich", version, about = "Hill potentials, coframes and the trumpet symplectic form")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded verification suites and write a JSON report.
    Verify(VerifyArgs),
    /// Compute with Hill potentials and boundary connections.
    Hill(HillArgs),
    /// Tabulate boundary data as CSV.
    Emit(EmitArgs),
    /// Trumpet symplectic form checks.
    Trumpet {
        #[command(subcommand)]
        action: ModuleAction,
    },
    /// Groupoid 2-form checks.
    Groupoid {
        #[command(subcommand)]
        action: ModuleAction,
    },
}

fn parse_grid_size(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if !n.is_power_of_two() || n < MIN_SUITE_SAMPLES {
        return Err(format!("{n} is not a power of two ≥ {MIN_SUITE_SAMPLES}"));
    }
    Ok(n)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v <= 0.0 || !v.is_finite() {
        return Err(format!("{s} is not a positive number"));
    }
    Ok(v)
}

#[derive(Debug, Clone, Args)]
pub struct SuiteFlags {
    /// Grid size (power of two, at least 64).
    #[arg(long, default_value_t = 256, value_parser = parse_grid_size)]
    pub n: usize,
    /// Random samples per check (the diffeo and hill suites draw twice as many).
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Seed for the ChaCha8 generator.
    #[arg(long, env = "VIRATEICH_SEED", default_value_t = 7)]
    pub seed: u64,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub tol_scale: f64,
    /// Record wall time per check (makes the report run-dependent).
    #[arg(long)]
    pub timings: bool,
}

impl SuiteFlags {
    fn config(&self) -> VerifyConfig {
        VerifyConfig {
            n: self.n,
            trials: self.trials as usize,
            seed: self.seed,
            tol_scale: self.tol_scale,
            timings: self.timings,
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[command(flatten)]
    pub flags: SuiteFlags,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ModuleAction {
    /// Run the module's checks and print a residual table.
    Verify {
        #[command(flatten)]
        flags: SuiteFlags,
        /// Also write the residuals as CSV (columns: identity,max_residual,tolerance,trials,pass).
        #[arg(long)]
        csv_out: Option<PathBuf>,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum HillAction {
    /// Potential of a positive connection `{"a", "s", "u"}` by the closed formula.
    FromAsu,
    /// `F⁻¹·T` for a potential and a `--diffeo` lift `{"phi", "winding"}`.
    Transform,
    /// Monodromy matrix, trace and orbit class of a potential.
    Monodromy,
    /// Drinfeld–Sokolov gauge and potential of a positive connection.
    DsNormalize,
}

#[derive(Debug, Args)]
pub struct HillArgs {
    #[arg(value_enum)]
    pub action: HillAction,
    /// Input JSON: a connection for from_asu/ds_normalize, a potential
    /// `{"n", "weight", "values"}` for transform/monodromy.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub diffeo: Option<PathBuf>,
    /// Output JSON. Potentials also get a companion `<out>.csv` with columns x,T.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum EmitKind {
    /// Trumpet point `{"ell", "F"}` → columns x,u.
    Darboux,
    /// Fenchel–Nielsen point `{"g", "r", "interior", "boundary"}` → columns x,phi_1,…,phi_r.
    BoundaryMoment,
    /// Coframe grid, or `{"example": {"kind": …}, "nx": N, "y": [...]}` →
    /// columns x,y,r1,r2,K,multiplier (residuals are divided by the volume form).
    CurvatureTable,
}

#[derive(Debug, Args)]
pub struct EmitArgs {
    #[arg(value_enum)]
    pub kind: EmitKind,
    #[arg(long)]
    pub input: PathBuf,
    /// Output CSV with a header row.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_FAILURE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(a.suite, &a.flags.config(), a.json_out.as_deref()),
        Command::Hill(a) => cmd_hill(a.action, &a.input, a.diffeo.as_deref(), &a.out),
        Command::Emit(a) => cmd_emit(a.kind, &a.input, &a.out),
        Command::Trumpet { action } => cmd_module(Suite::Trumpet, action),
        Command::Groupoid { action } => cmd_module(Suite::Groupoid, action),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text, path)
}

fn parse_json<T: DeserializeOwned>(text: &str, path: &Path) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        CliError::Usage(format!("{}: invalid input at `{field}`: {}", path.display(), e.inner()))
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn report_table(report: &SuiteReport) -> String {
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(8).max(8);
    let mut out = format!("{:<width$}  {:>12}  {:>10}  {:>6}  result\n", "identity", "max residual", "tolerance", "trials");
    for c in &report.checks {
        let residual = c.max_residual.map_or_else(|| "-".to_string(), |r| format!("{r:.3e}"));
        let _ = write!(out, "{:<width$}  {residual:>12}  {:>10.1e}  {:>6}  {}", c.name, c.tolerance, c.trials, if c.pass { "pass" } else { "FAIL" });
        if let Some(e) = &c.error {
            let _ = write!(out, " ({e})");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "{} (seed {}, n {})", if report.pass { "all checks passed" } else { "FAILED" }, report.seed, report.n);
    out
}

pub fn report_csv(report: &SuiteReport) -> String {
    let mut out = String::from("identity,max_residual,tolerance,trials,pass\n");
    for c in &report.checks {
        let residual = c.max_residual.map_or_else(String::new, |r| format!("{r:e}"));
        let _ = writeln!(out, "{},{residual},{:e},{},{}", c.name, c.tolerance, c.trials, c.pass);
    }
    out
}

/// Runs `suite` and writes the JSON report to `json_out` (stdout if absent).
pub fn cmd_verify(suite: Suite, cfg: &VerifyConfig, json_out: Option<&Path>) -> CliResult<i32> {
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = run_suite(suite, cfg)?;
    match json_out {
        Some(path) => {
            write_file(path, &report.to_json())?;
            print!("{}", report_table(&report));
        }
        None => print!("{}", report.to_json()),
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_module(suite: Suite, action: ModuleAction) -> CliResult<i32> {
    let ModuleAction::Verify { flags, csv_out, json_out } = action;
    let cfg = flags.config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let report = run_suite(suite, &cfg)?;
    print!("{}", report_table(&report));
    if let Some(path) = csv_out {
        write_file(&path, &report_csv(&report))?;
    }
    if let Some(path) = json_out {
        write_file(&path, &report.to_json())?;
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAILURE })
}

fn companion_csv(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".csv");
    PathBuf::from(s)
}

fn potential_csv(t: &PeriodicFn) -> String {
    let mut out = String::from("x,T\n");
    for (x, v) in t.grid().iter().zip(t.values()) {
        let _ = writeln!(out, "{x},{v}");
    }
    out
}

#[derive(Serialize)]
struct DsRecord<'a> {
    gauge: &'a GaugeMap,
    potential: &'a HillPotential,
}

pub fn cmd_hill(action: HillAction, input: &Path, diffeo: Option<&Path>, out: &Path) -> CliResult<i32> {
    if diffeo.is_some() && action != HillAction::Transform {
        return Err(CliError::Usage("--diffeo is only used by `transform`".into()));
    }
    let potential = match action {
        HillAction::FromAsu => {
            let conn: BoundaryConnection = read_json(input)?;
            hill_from_asu(&conn)?
        }
        HillAction::DsNormalize => {
            let conn: BoundaryConnection = read_json(input)?;
            let (h, t) = ds_normalize(&conn)?;
            write_file(out, &to_json(&DsRecord { gauge: &h, potential: &t }))?;
            write_file(&companion_csv(out), &potential_csv(t.as_fn()))?;
            return Ok(EXIT_OK);
        }
        HillAction::Transform => {
            let path = diffeo.ok_or_else(|| CliError::Usage("`transform` needs --diffeo".into()))?;
            let t: HillPotential = read_json(input)?;
            let f: DiffeoLift = read_json(path)?;
            if f.n() != t.n() {
                return Err(Error::GridMismatch { expected: t.n(), found: f.n() }.into());
            }
            act_on_hill(&f, &t)
        }
        HillAction::Monodromy => {
            let t: HillPotential = read_json(input)?;
            write_file(out, &to_json(&monodromy(&t)?))?;
            return Ok(EXIT_OK);
        }
    };
    write_file(out, &to_json(&potential))?;
    write_file(&companion_csv(out), &potential_csv(potential.as_fn()))?;
    Ok(EXIT_OK)
}

#[derive(serde::Deserialize)]
struct ExampleInput {
    example: ExampleCoframe,
    nx: usize,
    y: Vec<f64>,
}

fn read_coframe(path: &Path) -> CliResult<CoframeGrid> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = parse_json(&text, path)?;
    if value.get("example").is_some() {
        let ex: ExampleInput = parse_json(&text, path)?;
        spectral::check_sample_count(ex.nx).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(make_example_coframe(&ex.example, ex.nx, &ex.y)?)
    } else {
        parse_json(&text, path)
    }
}

pub fn cmd_emit(kind: EmitKind, input: &Path, out: &Path) -> CliResult<i32> {
    let mut csv = String::new();
    match kind {
        EmitKind::Darboux => {
            let p: TrumpetPoint = read_json(input)?;
            let u = darboux_u(&p);
            csv.push_str("x,u\n");
            for (x, v) in u.grid().iter().zip(u.values()) {
                let _ = writeln!(csv, "{x},{v}");
            }
        }
        EmitKind::BoundaryMoment => {
            let p: FNPoint = read_json(input)?;
            let phis = boundary_moment(&p);
            csv.push('x');
            for j in 1..=phis.len() {
                let _ = write!(csv, ",phi_{j}");
            }
            csv.push('\n');
            if let Some(first) = phis.first() {
                for (i, x) in first.as_fn().grid().iter().enumerate() {
                    let _ = write!(csv, "{x}");
                    for phi in &phis {
                        let _ = write!(csv, ",{}", phi.values()[i]);
                    }
                    csv.push('\n');
                }
            }
        }
        EmitKind::CurvatureTable => {
            let c = read_coframe(input)?;
            let res = structure_residuals(&c)?;
            let m = connection_curvature(&c)?.multiplier;
            let xs = spectral::grid(c.nx());
            csv.push_str("x,y,r1,r2,K,multiplier\n");
            for (j, y) in c.heights().iter().enumerate() {
                for (k, x) in xs.iter().enumerate() {
                    let vol = res.volume.get(j, k);
                    let _ = writeln!(
                        csv,
                        "{x},{y},{},{},{},{}",
                        res.r1.get(j, k) / vol,
                        res.r2.get(j, k) / vol,
                        res.curvature.get(j, k),
                        m.get(j, k)
                    );
                }
            }
        }
    }
    write_file(out, &csv)?;
    Ok(EXIT_OK)
}
