//! Command-line experiment runners.
//!
//! Five subcommands cover the experiment set: `free-decay` (dephasing of
//! the prepared state and the sudden transition), `dd-preserve` (two-flip
//! decoupling sweep), `revival` (repeated blocks with decay and revival),
//! `state-prep` (stage-by-stage preparation report) and `correlations`
//! (report for a density matrix read from a JSON file).
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 numerical
//! failure. All runs are deterministic: a fixed config and seed yield
//! byte-identical output.

mod config;
mod output;

pub use config::{DensityMatrixFile, MatrixScale, Model, RunConfig};
pub use output::{label_regimes, rows_to_csv, CurveRow, Regime, Summary};

use crate::correlations::{
    self, classical_correlation, discord_analytic_bell, geometric_discord_analytic,
    geometric_discord_zero_bloch, mutual_information, mutual_information_analytic_bell,
    taylor_correlations, AnalyticBellColumns, CorrelationReport, ElementErrors, ErrorBarSpec,
};
use crate::dynamics::{
    dd_revival, dd_two_flip, detect_transition_time, deviation_matrix, fit_gaussian_decay,
    run_prep, run_sequence, stage_predictions, trajectory_from_analytic, DynamicsError,
    PulseSequence, Trajectory,
};
use crate::qmat::{CMat4, DensityMatrix};
use crate::states::{recognition_tol, BellDiagonalCoeffs};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "discord-dynamics",
    version,
    about = "Correlation dynamics of a dephasing electron-nuclear two-qubit system"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Free dephasing of the prepared state; detects the sudden
    /// transition and the fitted decay time
    FreeDecay(SweepArgs),
    /// Two-flip decoupling sweep over tau with readout at 4*tau
    DdPreserve(SweepArgs),
    /// Repeated two-flip blocks: decay to near zero and revival at echoes
    Revival(SweepArgs),
    /// Stage-by-stage preparation of the Bell-diagonal initial state
    StatePrep(StatePrepArgs),
    /// Correlation report for a density matrix read from a JSON file
    Correlations(CorrelationsArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// JSON run configuration; defaults reproduce the reference setup
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV destination (stdout if omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Summary JSON destination (stdout when --output is set, else stderr)
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Evolution model
    #[arg(long, value_enum, default_value = "ensemble")]
    pub model: Model,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Free-decay window override (ns)
    #[arg(long = "tmax-ns")]
    pub tmax_ns: Option<f64>,
    /// Sweep sample count override
    #[arg(long)]
    pub points: Option<usize>,
    /// Largest tau of the decoupling sweep (ns)
    #[arg(long = "tau-ns")]
    pub tau_ns: Option<f64>,
    /// Block quarter-period of the revival sequence (ns)
    #[arg(long = "tau4-ns")]
    pub tau4_ns: Option<f64>,
    /// Number of revival blocks
    #[arg(long)]
    pub blocks: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StatePrepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Stage dump destination (stdout if omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Report JSON destination (appended to stdout if omitted)
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CorrelationsArgs {
    /// Density-matrix JSON file
    pub input: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report JSON destination (stdout if omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Measured subsystem: b (nucleus, default) or a (electron); the
    /// discord is asymmetric under this choice
    #[arg(long, value_enum, default_value = "b")]
    pub side: MeasuredSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum MeasuredSide {
    A,
    B,
}

impl From<MeasuredSide> for crate::qmat::Subsystem {
    fn from(side: MeasuredSide) -> Self {
        match side {
            MeasuredSide::A => crate::qmat::Subsystem::A,
            MeasuredSide::B => crate::qmat::Subsystem::B,
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    let cfg = match path {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    Ok(cfg)
}

fn apply_sweep_overrides(cfg: &mut RunConfig, args: &SweepArgs) {
    let e = &mut cfg.experiment;
    if let Some(v) = args.seed {
        e.seed = v;
    }
    if let Some(v) = args.tmax_ns {
        e.t_max_ns = v;
    }
    if let Some(v) = args.points {
        e.points = v;
    }
    if let Some(v) = args.tau_ns {
        e.tau_ns = v;
    }
    if let Some(v) = args.tau4_ns {
        e.tau4_ns = v;
    }
    if let Some(v) = args.blocks {
        e.n_blocks = v;
    }
}

/// Rows plus summary of one experiment sweep.
#[derive(Debug)]
pub struct ExperimentOutput {
    pub rows: Vec<CurveRow>,
    pub summary: Summary,
}

fn numeric_row_values(state: &DensityMatrix, cfg: &RunConfig) -> Result<(f64, f64, f64), CliError> {
    let mutual = mutual_information(state);
    let (classical, _) = classical_correlation(state, &cfg.optimizer).map_err(numerical)?;
    Ok((mutual, classical, mutual - classical))
}

fn prepared_state(cfg: &RunConfig) -> Result<(DensityMatrix, BellDiagonalCoeffs), CliError> {
    let outcome = run_prep(&cfg.prep.to_params(), &cfg.physics).map_err(numerical)?;
    let (coeffs, _) = outcome.final_coeffs();
    Ok((outcome.final_state, coeffs))
}

/// Free decay of the prepared state over [0, t_max].
pub fn free_decay(cfg: &RunConfig, model: Model) -> Result<ExperimentOutput, CliError> {
    cfg.validate()?;
    let (rho0, c0) = prepared_state(cfg)?;
    let e = &cfg.experiment;
    let times: Vec<f64> = if e.points == 1 {
        vec![0.0]
    } else {
        (0..e.points)
            .map(|k| k as f64 * e.t_max_ns / (e.points - 1) as f64)
            .collect()
    };
    let traj = match model {
        Model::Analytic => trajectory_from_analytic(&c0, &times, &cfg.physics),
        Model::Ensemble => {
            let seq = PulseSequence {
                events: vec![],
                readout_times: times.clone(),
            };
            run_sequence(&seq, &rho0, &cfg.ensemble.to_model(), &cfg.physics).map_err(numerical)?
        }
    };

    let with_taylor = taylor_correlations(c0.c2, c0.c3).is_ok();
    let coeffs: Vec<BellDiagonalCoeffs> = traj.samples.iter().map(|s| s.coeffs).collect();
    let regimes = label_regimes(&coeffs);
    let mut rows = Vec::with_capacity(traj.samples.len());
    for (s, regime) in traj.samples.iter().zip(regimes) {
        let (mutual, classical, discord) = numeric_row_values(&s.state, cfg)?;
        rows.push(CurveRow {
            t_ns: s.t_ns,
            coeffs: s.coeffs,
            mutual_bits: mutual,
            classical_bits: classical,
            discord_bits: discord,
            geo_discord: geometric_discord_zero_bloch(&s.state),
            regime,
            err: None,
            taylor: with_taylor
                .then(|| taylor_correlations(s.coeffs.c2, s.coeffs.c3))
                .transpose()
                .map_err(numerical)?,
            analytic: Some(AnalyticBellColumns {
                mutual_bits: mutual_information_analytic_bell(&s.coeffs),
                classical_bits: correlations::classical_correlation_analytic_bell(&s.coeffs),
                discord_bits: discord_analytic_bell(&s.coeffs),
                geo_discord: geometric_discord_analytic(&s.coeffs),
            }),
        });
    }

    let mut summary = Summary::default();
    match detect_transition_time(&traj) {
        Ok(t) => summary.t_c_ns = Some(t),
        Err(err) => summary.warnings.push(format!("transition time: {err}")),
    }
    let ys: Vec<f64> = traj
        .samples
        .iter()
        .map(|s| s.state.entry(1, 2).norm())
        .collect();
    match fit_gaussian_decay(&times, &ys) {
        Ok(t) => summary.t_decay_ns = Some(t),
        Err(err) => summary.warnings.push(format!("decay fit: {err}")),
    }
    Ok(ExperimentOutput { rows, summary })
}

/// Two-flip decoupling sweep: τ from τ_max/points to τ_max, readout at 4τ.
pub fn dd_preserve(cfg: &RunConfig, model: Model) -> Result<ExperimentOutput, CliError> {
    cfg.validate()?;
    if model == Model::Analytic {
        return Err(CliError::Config(
            "dd-preserve requires the ensemble model".into(),
        ));
    }
    let (rho0, c0) = prepared_state(cfg)?;
    let e = &cfg.experiment;
    let ensemble = cfg.ensemble.to_model();

    let mut samples = Vec::with_capacity(e.points);
    for j in 1..=e.points {
        let tau = j as f64 * e.tau_ns / e.points as f64;
        let seq = dd_two_flip(tau).map_err(|err| CliError::Config(err.to_string()))?;
        let traj = run_sequence(&seq, &rho0, &ensemble, &cfg.physics).map_err(numerical)?;
        samples.extend(traj.samples);
    }
    let traj = Trajectory { samples };

    let coeffs: Vec<BellDiagonalCoeffs> = traj.samples.iter().map(|s| s.coeffs).collect();
    let regimes = label_regimes(&coeffs);
    let mut rows = Vec::with_capacity(traj.samples.len());
    for (s, regime) in traj.samples.iter().zip(regimes) {
        let (mutual, classical, discord) = numeric_row_values(&s.state, cfg)?;
        rows.push(CurveRow {
            t_ns: s.t_ns,
            coeffs: s.coeffs,
            mutual_bits: mutual,
            classical_bits: classical,
            discord_bits: discord,
            geo_discord: geometric_discord_zero_bloch(&s.state),
            regime,
            err: None,
            taylor: None,
            analytic: None,
        });
    }

    let mut summary = Summary::default();
    match detect_transition_time(&traj) {
        Ok(t) => {
            summary.t_c_ns = Some(t);
            match correlations::critical_time(c0.c2, c0.c3, cfg.physics.t2e_star_ns) {
                Ok(free) if !free.degenerate => {
                    summary.prolongation_factor = Some(t / free.t_ns);
                }
                Ok(_) => summary
                    .warnings
                    .push("free-decay critical time is degenerate".into()),
                Err(err) => summary.warnings.push(format!("free critical time: {err}")),
            }
        }
        Err(err @ DynamicsError::NoTransitionFound) => {
            summary
                .warnings
                .push(format!("{err}; extend the tau sweep to reach the crossing"));
        }
        Err(err) => return Err(numerical(err)),
    }
    Ok(ExperimentOutput { rows, summary })
}

/// Repeated two-flip blocks with intra-block sampling.
pub fn revival(cfg: &RunConfig, model: Model) -> Result<ExperimentOutput, CliError> {
    cfg.validate()?;
    if model == Model::Analytic {
        return Err(CliError::Config(
            "revival requires the ensemble model".into(),
        ));
    }
    let (rho0, _) = prepared_state(cfg)?;
    let e = &cfg.experiment;
    let seq = dd_revival(e.tau4_ns, e.n_blocks, e.samples_per_block)
        .map_err(|err| CliError::Config(err.to_string()))?;
    let traj =
        run_sequence(&seq, &rho0, &cfg.ensemble.to_model(), &cfg.physics).map_err(numerical)?;

    let coeffs: Vec<BellDiagonalCoeffs> = traj.samples.iter().map(|s| s.coeffs).collect();
    let regimes = label_regimes(&coeffs);
    let mut rows = Vec::with_capacity(traj.samples.len());
    for (s, regime) in traj.samples.iter().zip(regimes) {
        let (mutual, classical, discord) = numeric_row_values(&s.state, cfg)?;
        rows.push(CurveRow {
            t_ns: s.t_ns,
            coeffs: s.coeffs,
            mutual_bits: mutual,
            classical_bits: classical,
            discord_bits: discord,
            geo_discord: geometric_discord_zero_bloch(&s.state),
            regime,
            err: None,
            taylor: None,
            analytic: None,
        });
    }

    let c2_initial = traj.samples[0].coeffs.c2.abs();
    let ratios: Vec<f64> = (1..=e.n_blocks)
        .map(|k| {
            let idx = k * e.samples_per_block;
            traj.samples[idx].coeffs.c2.abs() / c2_initial
        })
        .collect();
    Ok(ExperimentOutput {
        rows,
        summary: Summary {
            revival_ratios: Some(ratios),
            ..Summary::default()
        },
    })
}

fn format_complex_matrix(m: &CMat4) -> String {
    let mut out = String::new();
    for i in 0..4 {
        out.push_str("    ");
        for j in 0..4 {
            let v = m[(i, j)];
            let _ = write!(out, "{:+.4}{:+.4}i  ", v.re, v.im);
        }
        out.push('\n');
    }
    out
}

fn max_element_dev(a: &CMat4, b: &CMat4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

/// JSON report of the `state-prep` command.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StatePrepReport {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub bell_residual: f64,
    /// Max |executed − predicted| per stage, in ε units.
    pub stage_max_deviation: Vec<f64>,
    pub correlations: CorrelationReport,
}

/// Stage dump text plus machine-readable report.
#[derive(Debug)]
pub struct StatePrepOutput {
    pub text: String,
    pub report: StatePrepReport,
}

/// Executes the preparation stage by stage and compares each intermediate
/// deviation matrix with its closed-form prediction.
pub fn state_prep(cfg: &RunConfig) -> Result<StatePrepOutput, CliError> {
    cfg.validate()?;
    let prep = cfg.prep.to_params();
    let outcome = run_prep(&prep, &cfg.physics).map_err(numerical)?;
    let predictions = stage_predictions(&prep);
    let eps = cfg.physics.epsilon;

    let mut text = String::new();
    let mut stage_max_deviation = Vec::with_capacity(4);
    for (stage, predicted) in outcome.stages.iter().zip(&predictions) {
        let executed = deviation_matrix(&stage.state, eps);
        let dev = max_element_dev(&executed, predicted);
        stage_max_deviation.push(dev);
        let _ = writeln!(text, "stage: {}", stage.label);
        let _ = writeln!(text, "  executed deviation (units of epsilon):");
        text.push_str(&format_complex_matrix(&executed));
        let _ = writeln!(text, "  closed-form prediction:");
        text.push_str(&format_complex_matrix(predicted));
        let _ = writeln!(text, "  max element deviation: {dev:.3e}\n");
    }

    let (coeffs, residual) = outcome.final_coeffs();
    let errs_owned = match (cfg.experiment.element_error, cfg.experiment.error_samples) {
        (Some(w), n) if n > 0 => Some(
            ElementErrors::new([[w; 4]; 4])
                .and_then(|e| e.scaled(eps))
                .map_err(|e| CliError::Config(e.to_string()))?,
        ),
        _ => None,
    };
    let report = correlations::report(
        &outcome.final_state,
        &cfg.optimizer,
        recognition_tol(eps),
        errs_owned.as_ref().map(|errs| ErrorBarSpec {
            errs,
            n_samples: cfg.experiment.error_samples,
            seed: cfg.experiment.seed,
        }),
    )
    .map_err(numerical)?;

    let _ = writeln!(
        text,
        "final coefficients: c1 = {:+.6e}, c2 = {:+.6e}, c3 = {:+.6e}",
        coeffs.c1, coeffs.c2, coeffs.c3
    );
    let _ = writeln!(text, "bell-diagonal residual: {residual:.3e}");
    let _ = writeln!(
        text,
        "correlations (bits): I = {:.6e}, C = {:.6e}, D = {:.6e}",
        report.mutual_bits, report.classical_bits, report.discord_bits
    );

    Ok(StatePrepOutput {
        text,
        report: StatePrepReport {
            c1: coeffs.c1,
            c2: coeffs.c2,
            c3: coeffs.c3,
            bell_residual: residual,
            stage_max_deviation,
            correlations: report,
        },
    })
}

/// Builds the state and optional element errors from a matrix file.
pub fn state_from_file(
    file: &DensityMatrixFile,
    default_epsilon: f64,
) -> Result<(DensityMatrix, Option<ElementErrors>, f64), CliError> {
    let epsilon = file.epsilon.unwrap_or(default_epsilon);
    let mut m = CMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = num_complex::Complex64::new(file.re[i][j], file.im[i][j]);
        }
    }
    let m = match file.scale {
        MatrixScale::Absolute => m,
        MatrixScale::DeviationEpsilon => {
            CMat4::identity() * num_complex::Complex64::new(0.25, 0.0)
                + m * num_complex::Complex64::new(epsilon, 0.0)
        }
    };
    let rho = DensityMatrix::new(m).map_err(|e| CliError::Input(e.to_string()))?;
    let errs = match file.errors {
        Some(widths) => {
            let e = ElementErrors::new(widths).map_err(|e| CliError::Input(e.to_string()))?;
            Some(match file.scale {
                MatrixScale::Absolute => e,
                MatrixScale::DeviationEpsilon => e
                    .scaled(epsilon)
                    .map_err(|e| CliError::Input(e.to_string()))?,
            })
        }
        None => None,
    };
    Ok((rho, errs, epsilon))
}

/// Correlation report for a density matrix loaded from disk.
pub fn correlations_from_file(
    file: &DensityMatrixFile,
    cfg: &RunConfig,
    measured: crate::qmat::Subsystem,
) -> Result<CorrelationReport, CliError> {
    cfg.validate()?;
    let (rho, errs, epsilon) = state_from_file(file, cfg.physics.epsilon)?;
    correlations::report_on(
        &rho,
        measured,
        &cfg.optimizer,
        recognition_tol(epsilon),
        errs.as_ref().map(|errs| ErrorBarSpec {
            errs,
            n_samples: cfg.experiment.error_samples,
            seed: cfg.experiment.seed,
        }),
    )
    .map_err(numerical)
}

fn write_text(path: &Option<PathBuf>, text: &str, fallback_stdout: bool) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            if fallback_stdout {
                print!("{text}");
            } else {
                eprint!("{text}");
            }
            Ok(())
        }
    }
}

fn emit_sweep(args: &SweepArgs, out: ExperimentOutput) -> Result<(), CliError> {
    let csv = rows_to_csv(&out.rows);
    write_text(&args.output, &csv, true)?;
    let json = serde_json::to_string_pretty(&out.summary)
        .map_err(|e| CliError::Numerical(e.to_string()))?;
    let json = format!("{json}\n");
    // keep stdout machine-readable: the summary goes there only when the
    // CSV went to a file
    write_text(&args.summary, &json, args.output.is_some())
}

fn parse_matrix_file(path: &Path) -> Result<DensityMatrixFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("bad matrix file {}: {e}", path.display())))
}

/// Runs one parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::FreeDecay(args) => {
            let mut cfg = load_config(&args.config)?;
            apply_sweep_overrides(&mut cfg, &args);
            warn_on_regime(&cfg);
            let out = free_decay(&cfg, args.model)?;
            emit_sweep(&args, out)
        }
        Command::DdPreserve(args) => {
            let mut cfg = load_config(&args.config)?;
            apply_sweep_overrides(&mut cfg, &args);
            warn_on_regime(&cfg);
            let out = dd_preserve(&cfg, args.model)?;
            emit_sweep(&args, out)
        }
        Command::Revival(args) => {
            let mut cfg = load_config(&args.config)?;
            apply_sweep_overrides(&mut cfg, &args);
            warn_on_regime(&cfg);
            let out = revival(&cfg, args.model)?;
            emit_sweep(&args, out)
        }
        Command::StatePrep(args) => {
            let mut cfg = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.experiment.seed = seed;
            }
            warn_on_regime(&cfg);
            let out = state_prep(&cfg)?;
            write_text(&args.output, &out.text, true)?;
            let json = serde_json::to_string_pretty(&out.report)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            write_text(&args.summary, &format!("{json}\n"), true)
        }
        Command::Correlations(args) => {
            let mut cfg = load_config(&args.config)?;
            if let Some(seed) = args.seed {
                cfg.experiment.seed = seed;
            }
            let file = parse_matrix_file(&args.input)?;
            let report = correlations_from_file(&file, &cfg, args.side.into())?;
            let json = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            write_text(&args.output, &format!("{json}\n"), true)
        }
    }
}

fn warn_on_regime(cfg: &RunConfig) {
    if let Some(w) = cfg.physics.regime_warning() {
        eprintln!("warning: {w}");
    }
}
