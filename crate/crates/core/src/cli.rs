//! Command-line front end. Argument definitions live here so the binary
//! stays a thin wrapper and commands are callable from tests.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::frames::{Frame, FramesSpec};
use crate::repr::{
    equator_minimum, minimize_wcan_with, pauli_coefficients, pole_minimum, wcan_discrete,
    ConfigurationMinimum, GridKind, MinimizeOptions, PauliCoefficients, SphereGrid, WcanMinimum,
};
use crate::separability::{ppt_min_eigenvalue, witness_ghz, witness_werner, WitnessReport};
use crate::states::{
    bound_cat, bound_duer, bound_general, build_state, ensemble_to_table, ghz_ensemble,
    werner_ensemble, ProductEnsemble, Rational, StateSpec,
};

pub const MAX_BOUNDS_N: usize = 24;
pub const DEFAULT_VERIFY_TOL: f64 = 1e-10;
pub const DEFAULT_BISECTION_TOL: f64 = 1e-7;

#[derive(Debug, Parser)]
#[command(
    name = "qsep",
    version,
    about = "Product-state representations and separability of multi-qubit states"
)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Csv)]
    pub format: Format,
    /// Pass tolerance for verify-ensemble, bisection tolerance for
    /// min-wcan --threshold-search.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Recorded in reports; no command draws random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnsembleName {
    Werner,
    Ghz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form separability bounds per qubit count.
    Bounds {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Print exact fractions instead of decimals.
        #[arg(long)]
        exact: bool,
    },
    /// Write the canonical discrete table of a state to CSV.
    Coeffs {
        /// State spec, inline JSON or a file path.
        #[arg(long)]
        state: String,
        /// Frame spec (one shared or a list per qubit), inline JSON or a file path.
        #[arg(long)]
        frames: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare an explicit product ensemble with a target state.
    VerifyEnsemble(VerifyArgs),
    /// Minimize the canonical expansion function over product states.
    MinWcan {
        #[arg(long)]
        state: String,
        /// Grid points per Bloch sphere.
        #[arg(long, default_value_t = 24)]
        grid: usize,
        /// Coordinate refinement sweeps.
        #[arg(long, default_value_t = 3)]
        refine: usize,
        #[arg(long, value_enum, default_value_t = GridChoice::Uniform)]
        grid_kind: GridChoice,
        /// Bisect on epsilon for the largest value with a nonnegative minimum.
        #[arg(long)]
        threshold_search: bool,
    },
    /// Evaluate a correlation witness.
    Witness {
        #[arg(long, value_enum)]
        name: EnsembleName,
        #[command(flatten)]
        source: CoeffSource,
    },
    /// Smallest eigenvalue of a two-qubit partial transpose.
    Ppt {
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1)]
        side: usize,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(
        long,
        value_enum,
        required_unless_present = "file",
        conflicts_with = "file"
    )]
    pub name: Option<EnsembleName>,
    /// Ensemble listing `{"n": N, "terms": [{"probability": p, "vectors": [[x,y,z], ...]}]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub state: String,
    /// Also write the ensemble as a table over each qubit's frame.
    #[arg(long, requires = "frames")]
    pub table_out: Option<PathBuf>,
    #[arg(long)]
    pub frames: Option<String>,
    /// Also write the ensemble listing as JSON.
    #[arg(long)]
    pub listing_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CoeffSource {
    #[arg(long)]
    pub state: Option<String>,
    /// Pauli coefficients `{"n": N, "coeffs": {"111": c, ...}}`, inline or a file path.
    #[arg(long)]
    pub coeffs: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridChoice {
    Uniform,
    Fibonacci,
}

impl From<GridChoice> for GridKind {
    fn from(g: GridChoice) -> Self {
        match g {
            GridChoice::Uniform => GridKind::Uniform,
            GridChoice::Fibonacci => GridKind::Fibonacci,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::Io { .. }) | CliError::Output(_) => 5,
            CliError::Core(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_path(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Inline JSON when the argument starts with `{` or `[`, otherwise a path.
fn json_arg(arg: &str) -> Result<String> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        Ok(arg.to_owned())
    } else {
        read_path(Path::new(arg))
    }
}

pub fn parse_state(arg: &str) -> Result<StateSpec> {
    let spec = StateSpec::from_json_str(&json_arg(arg)?)?;
    spec.validate()?;
    Ok(spec)
}

pub fn parse_frames(arg: &str, qubits: usize) -> Result<Vec<Frame>> {
    FramesSpec::from_json_str(&json_arg(arg)?)?.build(qubits)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
}

fn io_at(path: &Path) -> impl Fn(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_owned(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub general: Rational,
    pub cat: Option<Rational>,
    pub duer: Rational,
}

/// All three bound curves for `n_min..=n_max`. The eps-cat curve is undefined
/// at `N = 1`, where every state is separable and the exact threshold is 1.
pub fn cmd_bounds(n_min: usize, n_max: usize) -> CliResult<Vec<BoundsRow>> {
    if n_min < 1 || n_min > n_max || n_max > MAX_BOUNDS_N {
        return Err(CliError::Usage(format!(
            "need 1 <= n-min <= n-max <= {MAX_BOUNDS_N}, got {n_min}..{n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| {
            Ok(BoundsRow {
                n,
                general: bound_general(n)?,
                cat: if n >= 2 { Some(bound_cat(n)?) } else { None },
                duer: if n >= 2 {
                    bound_duer(n)?
                } else {
                    Rational { num: 1, den: 1 }
                },
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub epsilon: f64,
    pub tolerance: f64,
    pub evaluations: usize,
}

/// Largest `eps` in `[0, 1]` for which the minimized canonical function of
/// `spec` at `eps` is nonnegative, by bisection re-running the minimizer.
pub fn threshold_search(
    spec: &StateSpec,
    opts: &MinimizeOptions,
    tol: f64,
) -> Result<ThresholdResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain(format!(
            "bisection tolerance must be positive, got {tol}"
        )));
    }
    let at = |eps: f64| -> Result<f64> {
        let s = spec
            .with_epsilon(eps)
            .ok_or_else(|| domain(format!("family {} has no epsilon parameter", spec.family())))?;
        Ok(minimize_wcan_with(&pauli_coefficients(&build_state(&s)?)?, opts)?.value)
    };
    let mut evaluations = 1;
    if at(1.0)? >= 0.0 {
        return Ok(ThresholdResult {
            epsilon: 1.0,
            tolerance: 0.0,
            evaluations,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        evaluations += 1;
        if at(mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ThresholdResult {
        epsilon: 0.5 * (lo + hi),
        tolerance: 0.5 * (hi - lo),
        evaluations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MinWcanReport {
    pub state: StateSpec,
    pub grid_per_sphere: usize,
    pub grid_points: usize,
    pub grid_kind: GridKind,
    pub refine: usize,
    pub min: f64,
    pub grid_min: f64,
    pub argmin_angles: Vec<(f64, f64)>,
    pub argmin: Vec<crate::operator::BlochVector>,
    pub pole_min: ConfigurationMinimum,
    pub equator_min: Option<ConfigurationMinimum>,
    pub threshold: Option<ThresholdResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn min_wcan_report(
    spec: &StateSpec,
    opts: &MinimizeOptions,
    threshold_tol: Option<f64>,
    seed: Option<u64>,
) -> Result<MinWcanReport> {
    let c = pauli_coefficients(&build_state(spec)?)?;
    let grid = SphereGrid::new(opts.grid_kind, opts.grid_per_sphere)?;
    let WcanMinimum {
        value,
        grid_value,
        angles,
        vectors,
        ..
    } = minimize_wcan_with(&c, opts)?;
    let threshold = threshold_tol
        .map(|t| threshold_search(spec, opts, t))
        .transpose()?;
    Ok(MinWcanReport {
        state: spec.clone(),
        grid_per_sphere: opts.grid_per_sphere,
        grid_points: grid.len(),
        grid_kind: opts.grid_kind,
        refine: opts.refine_iters,
        min: value,
        grid_min: grid_value,
        argmin_angles: angles,
        argmin: vectors,
        pole_min: pole_minimum(&c),
        equator_min: equator_minimum(&c, grid.phi_count().unwrap_or(opts.grid_per_sphere)),
        threshold,
        seed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub ensemble: String,
    pub terms: usize,
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn positive_tol(tol: Option<f64>, default: f64) -> CliResult<f64> {
    match tol {
        Some(t) if t.is_nan() || t <= 0.0 => {
            Err(CliError::Usage(format!("--tol must be positive, got {t}")))
        }
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn write_row<W: Write>(out: &mut W, header: &[&str], row: &[String]) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    writeln!(out, "{}", row.join(","))
}

fn write_json<W: Write, T: Serialize>(out: &mut W, v: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(Error::from)?;
    writeln!(out)?;
    Ok(())
}

pub fn run<W: Write>(cli: &Cli, out: &mut W) -> CliResult<()> {
    match &cli.command {
        Command::Bounds {
            n_min,
            n_max,
            exact,
        } => {
            let rows = cmd_bounds(*n_min, *n_max)?;
            match cli.format {
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            json!({
                                "N": r.n,
                                "general": r.general.to_f64(),
                                "cat": r.cat.map(Rational::to_f64),
                                "duer": r.duer.to_f64(),
                                "exact": {
                                    "general": r.general.to_string(),
                                    "cat": r.cat.map(|c| c.to_string()),
                                    "duer": r.duer.to_string(),
                                },
                            })
                        })
                        .collect();
                    write_json(out, &v)?;
                }
                Format::Csv => {
                    let show = |r: Rational| {
                        if *exact {
                            r.to_string()
                        } else {
                            r.to_f64().to_string()
                        }
                    };
                    writeln!(out, "N,general,cat,duer")?;
                    for r in &rows {
                        let cat = r.cat.map(show).unwrap_or_default();
                        writeln!(out, "{},{},{},{}", r.n, show(r.general), cat, show(r.duer))?;
                    }
                }
            }
        }
        Command::Coeffs {
            state,
            frames,
            out: path,
        } => {
            let spec = parse_state(state)?;
            let rho = build_state(&spec)?;
            let frames = parse_frames(frames, rho.qubits())?;
            let table = wcan_discrete(&rho, &frames)?;
            let kinds: Vec<String> = frames
                .iter()
                .map(|f| {
                    serde_json::to_value(f.kind()).map(|v| v.as_str().unwrap_or("").to_owned())
                })
                .collect::<std::result::Result<_, _>>()
                .map_err(Error::from)?;
            let comments = vec![
                "canonical expansion weights w(a_1..a_N) = tr(rho Q_a1 x ... x Q_aN) over product frame projectors".into(),
                format!("state: {}", serde_json::to_string(&spec).map_err(Error::from)?),
                format!("frames: {}", kinds.join(" ")),
                "idx_i: 0-based vertex index into qubit i's frame".into(),
            ];
            let mut file = create(path)?;
            table.write_csv(&mut file, &comments)?;
            file.flush().map_err(io_at(path))?;
            let (rows, min, sum) = (table.len(), table.min(), table.sum());
            match cli.format {
                Format::Json => write_json(
                    out,
                    &json!({"out": path, "rows": rows, "min": min, "sum": sum}),
                )?,
                Format::Csv => write_row(
                    out,
                    &["out", "rows", "min", "sum"],
                    &[
                        path.display().to_string(),
                        rows.to_string(),
                        min.to_string(),
                        sum.to_string(),
                    ],
                )?,
            }
        }
        Command::VerifyEnsemble(args) => {
            let tol = positive_tol(cli.tol, DEFAULT_VERIFY_TOL)?;
            let (label, ensemble) = match (&args.name, &args.file) {
                (Some(EnsembleName::Werner), _) => ("werner".to_owned(), werner_ensemble()),
                (Some(EnsembleName::Ghz), _) => ("ghz".to_owned(), ghz_ensemble()),
                (None, Some(path)) => (path.display().to_string(), ProductEnsemble::read(path)?),
                (None, None) => {
                    return Err(CliError::Usage(
                        "one of --name or --file is required".into(),
                    ))
                }
            };
            let rho = build_state(&parse_state(&args.state)?)?;
            if rho.qubits() != ensemble.qubits() {
                return Err(Error::DimensionMismatch {
                    expected: rho.qubits(),
                    found: ensemble.qubits(),
                }
                .into());
            }
            if let Some(path) = &args.listing_out {
                let mut f = create(path)?;
                f.write_all(ensemble.to_json_string()?.as_bytes())
                    .and_then(|_| f.flush())
                    .map_err(io_at(path))?;
            }
            if let (Some(path), Some(frames)) = (&args.table_out, &args.frames) {
                let frames = parse_frames(frames, ensemble.qubits())?;
                let table = ensemble_to_table(&ensemble, &frames)?;
                let mut f = create(path)?;
                table.write_csv(
                    &mut f,
                    &[format!(
                        "ensemble {label} as weights over product frame projectors"
                    )],
                )?;
                f.flush().map_err(io_at(path))?;
            }
            let deviation = ensemble.mixture().max_abs_diff(&rho)?;
            let report = VerifyReport {
                ensemble: label,
                terms: ensemble.terms().len(),
                deviation,
                tolerance: tol,
                passed: deviation < tol,
            };
            match cli.format {
                Format::Json => write_json(out, &report)?,
                Format::Csv => write_row(
                    out,
                    &["ensemble", "terms", "deviation", "tolerance", "result"],
                    &[
                        report.ensemble.clone(),
                        report.terms.to_string(),
                        format!("{:e}", report.deviation),
                        format!("{:e}", report.tolerance),
                        if report.passed { "pass" } else { "fail" }.into(),
                    ],
                )?,
            }
            if !report.passed {
                return Err(CliError::Verification(format!(
                    "deviation {:e} exceeds tolerance {:e}",
                    report.deviation, report.tolerance
                )));
            }
        }
        Command::MinWcan {
            state,
            grid,
            refine,
            grid_kind,
            threshold_search,
        } => {
            if *grid < crate::repr::MIN_GRID_PER_SPHERE {
                return Err(CliError::Usage(format!(
                    "--grid must be at least 6, got {grid}"
                )));
            }
            let tol = positive_tol(cli.tol, DEFAULT_BISECTION_TOL)?;
            let spec = parse_state(state)?;
            if *threshold_search && spec.epsilon().is_none() {
                return Err(CliError::Usage(format!(
                    "--threshold-search needs a family with epsilon, got {}",
                    spec.family()
                )));
            }
            let opts = MinimizeOptions {
                grid_per_sphere: *grid,
                refine_iters: *refine,
                grid_kind: (*grid_kind).into(),
            };
            let report = min_wcan_report(&spec, &opts, threshold_search.then_some(tol), cli.seed)?;
            match cli.format {
                Format::Json => write_json(out, &report)?,
                Format::Csv => {
                    let mut header = vec!["min", "grid_min", "pole_min", "equator_min"];
                    let mut row = vec![
                        report.min.to_string(),
                        report.grid_min.to_string(),
                        report.pole_min.value.to_string(),
                        report
                            .equator_min
                            .as_ref()
                            .map(|e| e.value.to_string())
                            .unwrap_or_default(),
                    ];
                    if let Some(t) = &report.threshold {
                        header.push("threshold");
                        row.push(t.epsilon.to_string());
                    }
                    write_row(out, &header, &row)?;
                }
            }
        }
        Command::Witness { name, source } => {
            let c = match (&source.state, &source.coeffs) {
                (Some(s), _) => pauli_coefficients(&build_state(&parse_state(s)?)?)?,
                (None, Some(c)) => PauliCoefficients::from_json_str(&json_arg(c)?)?,
                (None, None) => {
                    return Err(CliError::Usage(
                        "one of --state or --coeffs is required".into(),
                    ))
                }
            };
            let report: WitnessReport = match name {
                EnsembleName::Werner => witness_werner(&c)?,
                EnsembleName::Ghz => witness_ghz(&c)?,
            };
            match cli.format {
                Format::Json => write_json(out, &report)?,
                Format::Csv => {
                    let verdict = serde_json::to_value(report.verdict).map_err(Error::from)?;
                    write_row(
                        out,
                        &["witness", "value", "threshold", "verdict"],
                        &[
                            report.witness.clone(),
                            report.value.to_string(),
                            report.threshold.to_string(),
                            verdict.as_str().unwrap_or_default().to_owned(),
                        ],
                    )?
                }
            }
        }
        Command::Ppt { state, side } => {
            let rho = build_state(&parse_state(state)?)?;
            let min = ppt_min_eigenvalue(&rho, *side)?;
            let verdict = if min < -crate::separability::WITNESS_TOL {
                "nonseparable"
            } else {
                "separable"
            };
            match cli.format {
                Format::Json => write_json(
                    out,
                    &json!({"side": side, "min_eigenvalue": min, "verdict": verdict}),
                )?,
                Format::Csv => write_row(
                    out,
                    &["side", "min_eigenvalue", "verdict"],
                    &[side.to_string(), min.to_string(), verdict.into()],
                )?,
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CliResult<String> {
        let cli = Cli::try_parse_from(std::iter::once("qsep").chain(args.iter().copied()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let mut buf = Vec::new();
        run(&cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn bounds_rows() {
        let out = run_args(&["bounds", "--n-min", "1", "--n-max", "3", "--exact"]).unwrap();
        assert_eq!(
            out,
            "N,general,cat,duer\n1,1/3,,1\n2,1/9,1/9,1/3\n3,1/33,1/27,1/5\n"
        );
        assert_eq!(
            run_args(&["bounds", "--n-min", "3", "--n-max", "2"])
                .unwrap_err()
                .exit_code(),
            2
        );
        assert_eq!(
            run_args(&["bounds", "--n-max", "25"])
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn exit_codes() {
        let e = run_args(&["ppt", "--state", r#"{"family":"eps_ghz","epsilon":0.1}"#]).unwrap_err();
        assert_eq!(e.exit_code(), 3);
        let e = run_args(&["ppt", "--state", "/nonexistent/state.json"]).unwrap_err();
        assert_eq!(e.exit_code(), 5);
        let e = run_args(&[
            "verify-ensemble",
            "--name",
            "ghz",
            "--state",
            r#"{"family":"eps_ghz","epsilon":0.3}"#,
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 4);
        let e = run_args(&[
            "min-wcan",
            "--state",
            r#"{"family":"cat","n":2}"#,
            "--grid",
            "4",
        ])
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn threshold_for_two_qubit_cat() {
        let opts = MinimizeOptions {
            grid_per_sphere: 12,
            refine_iters: 1,
            grid_kind: GridKind::Uniform,
        };
        let t = threshold_search(&StateSpec::eps_cat(2, 0.5), &opts, 1e-7).unwrap();
        assert!((t.epsilon - 1.0 / 9.0).abs() < 1e-6, "{}", t.epsilon);
    }
}
