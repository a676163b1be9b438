//! Command-line driver: runs ITE, RGD, SRGD and ensembles from a TOML config
//! and writes CSV and JSON artifacts.
//!
//! Exit codes: 0 when every bound verdict passes, 2 when any verdict fails
//! (artifacts are still written), 1 on usage or config errors.

pub mod output;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use itegrad::bounds::{BoundInputs, BoundReport, GradNormConvention};
use itegrad::config::{self, Overrides};
use itegrad::ensemble::{run_experiment_with_jobs, EnsembleResult, VerdictKind};
use itegrad::evolution::IteReference;
use itegrad::report::Scalar;
use itegrad::{ExperimentConfig, InitialState, PauliBasis};

use output::{path_csv, state_csv, trajectory_csv, write, Summary};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERDICT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "itegrad",
    version,
    about = "Imaginary time evolution as Riemannian gradient descent"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact imaginary time evolution.
    Ite(RunArgs),
    /// Deterministic Riemannian gradient descent against exact ITE.
    Rgd(RunArgs),
    /// One stochastic trajectory (trajectory 0 of the ensemble seed).
    Srgd(RunArgs),
    /// RGD plus an ensemble of stochastic trajectories, with every bound
    /// checked.
    Ensemble(RunArgs),
    /// Evaluate the closed-form bounds at a parameter point.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Experiment config (TOML).
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, env = "ITEGRAD_OUT_DIR", default_value = "itegrad-out")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// hs-exact or variance.
    #[arg(long)]
    pub convention: Option<GradNormConvention>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long = "h-norm")]
    pub h_norm: f64,
    /// Hilbert-space dimension d.
    #[arg(long = "dim", short = 'd', default_value_t = 2)]
    pub dim: usize,
    /// Sampled directions D; defaults to d² - 1.
    #[arg(long = "basis-size", short = 'D')]
    pub basis_size: Option<usize>,
    #[arg(long, default_value_t = config::DEFAULT_DELTA)]
    pub delta: f64,
    /// Defaults to delta / 2.
    #[arg(long = "delta-tilde")]
    pub delta_tilde: Option<f64>,
    /// Energy variance at the evaluation state.
    #[arg(long, default_value_t = 1.0)]
    pub variance: f64,
    /// Also write summary.json here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Ite(a) => cmd_ite(a),
        Command::Rgd(a) => cmd_rgd(a),
        Command::Srgd(a) => cmd_srgd(a),
        Command::Ensemble(a) => cmd_ensemble(a),
        Command::Bounds(a) => cmd_bounds(a),
    }
}

struct Prepared {
    config: ExperimentConfig,
    jobs: usize,
    out_dir: PathBuf,
}

fn prepare(args: &RunArgs) -> Result<Prepared> {
    if !args.config.is_file() {
        anyhow::bail!("config file not found: {}", args.config.display());
    }
    let overrides = Overrides {
        beta: args.beta,
        steps: args.steps,
        trajectories: args.trajectories,
        seed: args.seed,
        delta: args.delta,
        convention: args.convention,
        jobs: args.jobs,
    };
    let loaded = config::load(&args.config, &overrides)
        .with_context(|| format!("invalid config {}", args.config.display()))?;
    let jobs = loaded.jobs.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(usize::from)
            .unwrap_or(1)
    });
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    Ok(Prepared {
        config: loaded.experiment,
        jobs,
        out_dir: args.out_dir.clone(),
    })
}

fn config_echo(summary: &mut Summary, config: &ExperimentConfig, command: &str) {
    let h = &config.hamiltonian;
    summary.push("command", command);
    summary.push(
        "config.hamiltonian",
        h.to_text().trim_end().replace('\n', "; "),
    );
    summary.push("config.num_qubits", h.num_qubits());
    summary.push("config.h_norm", h.spectral_norm());
    let state = match &config.initial_state {
        InitialState::Plus => "plus".to_owned(),
        InitialState::Basis(bits) => format!("basis:{bits}"),
        InitialState::Amplitudes(a) => format!("amplitudes:{}", a.len()),
    };
    summary.push("config.initial_state", state);
    summary.push("config.beta", config.schedule.beta());
    summary.push("config.steps", config.schedule.num_steps());
    summary.push("config.trajectories", config.num_trajectories);
    summary.push("config.seed", config.base_seed);
    let restriction = match &config.basis_restriction {
        Some(r) => r
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        None => "all".into(),
    };
    summary.push("config.restriction", restriction);
    summary.push("config.delta", config.delta);
    summary.push("config.delta_tilde", config.delta_tilde);
    summary.push("config.convention", config.convention.name());
}

pub fn cmd_ite(args: &RunArgs) -> Result<u8> {
    let p = prepare(args)?;
    let h = &p.config.hamiltonian;
    let psi0 = p.config.initial_state.build(h.num_qubits())?;
    let ite = IteReference::compute(h, &psi0, p.config.schedule)?;
    let records = ite.records(h)?;
    write(&p.out_dir, "ite.csv", &trajectory_csv(&records))?;
    write(&p.out_dir, "initial_state.csv", &state_csv(ite.initial()))?;
    write(&p.out_dir, "final_state.csv", &state_csv(ite.target()))?;
    let mut summary = Summary::new();
    config_echo(&mut summary, &p.config, "ite");
    let last = records.last().expect("records");
    summary.push("ite.terminal_energy", last.energy);
    summary.push("ite.ground_energy", h.spectrum().eigenvalues[0]);
    finish(&p.out_dir, &summary, EXIT_OK)
}

pub fn cmd_rgd(args: &RunArgs) -> Result<u8> {
    let mut p = prepare(args)?;
    p.config.num_trajectories = 0;
    let result = run_experiment_with_jobs(&p.config, p.jobs)?;
    write_common(&p.out_dir, &result)?;
    write(
        &p.out_dir,
        "final_state.csv",
        &state_csv(result.rgd.final_state()),
    )?;
    let summary = summarize(&p.config, &result, "rgd");
    finish(&p.out_dir, &summary, exit_code(&result))
}

pub fn cmd_srgd(args: &RunArgs) -> Result<u8> {
    let mut p = prepare(args)?;
    p.config.num_trajectories = 1;
    let result = run_experiment_with_jobs(&p.config, p.jobs)?;
    write_common(&p.out_dir, &result)?;
    write_trajectories(&p.out_dir, &p.config, &result)?;
    write(
        &p.out_dir,
        "final_state.csv",
        &state_csv(&result.trajectories[0].final_state),
    )?;
    let summary = summarize(&p.config, &result, "srgd");
    finish(&p.out_dir, &summary, exit_code(&result))
}

pub fn cmd_ensemble(args: &RunArgs) -> Result<u8> {
    let p = prepare(args)?;
    let result = run_experiment_with_jobs(&p.config, p.jobs)?;
    write_common(&p.out_dir, &result)?;
    write_trajectories(&p.out_dir, &p.config, &result)?;
    if !result.summary.is_empty() {
        write(&p.out_dir, "ensemble.csv", &ensemble_csv(&result))?;
    }
    let summary = summarize(&p.config, &result, "ensemble");
    finish(&p.out_dir, &summary, exit_code(&result))
}

pub fn cmd_bounds(args: &BoundsArgs) -> Result<u8> {
    let basis_size = args.basis_size.unwrap_or(args.dim * args.dim - 1);
    let mut summary = Summary::new();
    summary.push("command", "bounds");
    for convention in [GradNormConvention::HsExact, GradNormConvention::Variance] {
        let report = BoundReport::evaluate(BoundInputs {
            beta: args.beta,
            steps: args.steps,
            h_norm: args.h_norm,
            dim: args.dim,
            basis_size,
            delta: args.delta,
            delta_tilde: args.delta_tilde.unwrap_or(args.delta / 2.0),
            variance: args.variance,
            convention,
        })?;
        summary.extend(&format!("{}.", convention.name()), report.entries());
    }
    print!("{}", summary.to_text());
    if let Some(dir) = &args.out_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write(dir, "summary.json", &summary.to_json())?;
    }
    Ok(EXIT_OK)
}

fn write_common(dir: &Path, result: &EnsembleResult) -> Result<()> {
    write(dir, "ite.csv", &trajectory_csv(&result.ite_records))?;
    write(dir, "rgd.csv", &trajectory_csv(&result.rgd.records))?;
    write(dir, "initial_state.csv", &state_csv(result.ite.initial()))?;
    write(dir, "target_state.csv", &state_csv(result.ite.target()))
}

fn write_trajectories(
    dir: &Path,
    config: &ExperimentConfig,
    result: &EnsembleResult,
) -> Result<()> {
    let basis = PauliBasis::full(config.hamiltonian.num_qubits())?;
    let width = result
        .trajectories
        .len()
        .saturating_sub(1)
        .to_string()
        .len()
        .max(3);
    for (t, traj) in result.trajectories.iter().enumerate() {
        write(
            dir,
            &format!("srgd_{t:0width$}.csv"),
            &trajectory_csv(&traj.records),
        )?;
        write(
            dir,
            &format!("path_{t:0width$}.csv"),
            &path_csv(&traj.path, &basis),
        )?;
    }
    Ok(())
}

fn ensemble_csv(result: &EnsembleResult) -> String {
    use itegrad::report::render_float as f;
    let mut out = String::from(
        "step,partial_beta,fidelity_mean,fidelity_variance,fidelity_tail,eta_mean,eta_variance,eta_tail\n",
    );
    for s in &result.summary {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            s.step,
            f(result.schedule.partial_beta(s.step)),
            f(s.fidelity.mean),
            f(s.fidelity.variance),
            f(s.fidelity.tail_frequency),
            f(s.eta.mean),
            f(s.eta.variance),
            f(s.eta.tail_frequency),
        ));
    }
    out
}

/// Flat summary: config echo, bound report, per-family verdicts and the
/// terminal ensemble statistics.
pub fn summarize(config: &ExperimentConfig, result: &EnsembleResult, command: &str) -> Summary {
    let mut summary = Summary::new();
    config_echo(&mut summary, config, command);
    summary.push("config.basis_size", result.basis_size);
    summary.extend("", result.bound_report.entries());

    let rgd_last = result.rgd.records.last().expect("records");
    summary.push("rgd.terminal_fidelity_error", rgd_last.fidelity_error);
    summary.push("rgd.terminal_eps", rgd_last.eps_rgd.unwrap_or(f64::NAN));
    summary.push("rgd.terminal_energy", rgd_last.energy);
    summary.push(
        "ite.terminal_energy",
        result.ite_records.last().expect("records").energy,
    );

    if let Some(last) = result.summary.last() {
        let m = result.trajectories.len();
        summary.push("ensemble.terminal.fidelity_mean", last.fidelity.mean);
        summary.push(
            "ensemble.terminal.fidelity_variance",
            last.fidelity.variance,
        );
        summary.push(
            "ensemble.terminal.fidelity_tail",
            last.fidelity.tail_frequency,
        );
        summary.push("ensemble.terminal.eta_mean", last.eta.mean);
        summary.push("ensemble.terminal.eta_variance", last.eta.variance);
        summary.push("ensemble.terminal.eta_tail", last.eta.tail_frequency);
        for (name, freq) in [
            ("fidelity", last.fidelity.tail_frequency),
            ("eta", last.eta.tail_frequency),
        ] {
            if freq == 0.0 {
                // one-sided 95% upper limit for zero events in m trials
                let upper = 1.0 - 0.05f64.powf(1.0 / m as f64);
                summary.push(
                    format!("ensemble.terminal.{name}_tail_note"),
                    format!("0 of {m} exceed; one-sided 95% upper limit {upper:.4}"),
                );
            }
        }
    }
    let converged = result
        .trajectories
        .iter()
        .filter(|t| t.converged_at.is_some())
        .count();
    summary.push("ensemble.converged_trajectories", converged);

    let mut families: Vec<&str> = Vec::new();
    for v in &result.verdicts {
        if !families.contains(&v.family()) {
            families.push(v.family());
        }
    }
    for family in families {
        let group: Vec<_> = result
            .verdicts
            .iter()
            .filter(|v| v.family() == family)
            .collect();
        let worst = group
            .iter()
            .copied()
            .max_by(|a, b| (a.lhs - a.rhs).total_cmp(&(b.lhs - b.rhs)))
            .expect("non-empty family");
        let failures = group.iter().filter(|v| !v.pass).count();
        let key = |s: &str| format!("verdict.{family}.{s}");
        let kind = match worst.kind {
            VerdictKind::Exact => "exact",
            VerdictKind::Statistical => "statistical",
        };
        summary.push(key("kind"), kind);
        summary.push(key("count"), group.len());
        summary.push(key("failures"), failures);
        summary.push(key("pass"), failures == 0);
        summary.push(key("worst"), worst.name.clone());
        summary.push(key("worst_lhs"), worst.lhs);
        summary.push(key("worst_rhs"), worst.rhs);
    }
    summary.push("verdict.all_pass", result.all_pass());
    summary
}

fn exit_code(result: &EnsembleResult) -> u8 {
    if result.all_pass() {
        EXIT_OK
    } else {
        EXIT_VERDICT
    }
}

fn finish(dir: &Path, summary: &Summary, code: u8) -> Result<u8> {
    write(dir, "summary.json", &summary.to_json())?;
    if let Some(Scalar::Bool(false)) = summary.get("verdict.all_pass") {
        eprintln!(
            "bound verdicts failed; see {}",
            dir.join("summary.json").display()
        );
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use itegrad::ensemble::{run_experiment, verify_bounds};
    use itegrad::{HamiltonianSpec, ScheduleConfig};

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            hamiltonian: HamiltonianSpec::parse("1 Z", 6).unwrap(),
            initial_state: InitialState::Plus,
            schedule: ScheduleConfig::new(1.0, 20).unwrap(),
            num_trajectories: 2,
            base_seed: 1,
            basis_restriction: None,
            delta: 0.1,
            delta_tilde: 0.05,
            convention: GradNormConvention::HsExact,
        }
    }

    #[test]
    fn failing_verdict_gives_exit_two() {
        let config = small();
        let mut result = run_experiment(&config).unwrap();
        assert_eq!(exit_code(&result), EXIT_OK);
        result.rgd.states[5] = result.rgd.states[5].with_phase(std::f64::consts::PI);
        result.verdicts = verify_bounds(&result).unwrap();
        assert_eq!(exit_code(&result), EXIT_VERDICT);
        let summary = summarize(&config, &result, "ensemble");
        assert_eq!(
            summary.get("verdict.recursion.failures"),
            Some(&Scalar::Int(1))
        );
        assert_eq!(
            summary.get("verdict.recursion.worst"),
            Some(&Scalar::Str("recursion[5]".into()))
        );
        assert_eq!(summary.get("verdict.all_pass"), Some(&Scalar::Bool(false)));
    }

    #[test]
    fn summary_echoes_config() {
        let config = small();
        let result = run_experiment(&config).unwrap();
        let s = summarize(&config, &result, "ensemble");
        assert_eq!(
            s.get("config.initial_state"),
            Some(&Scalar::Str("plus".into()))
        );
        assert_eq!(s.get("config.basis_size"), Some(&Scalar::Int(3)));
        assert!(s.get("ensemble.terminal.fidelity_mean").is_some());
        assert!(s.get("verdict.theorem2_tail.pass").is_some());
    }
}
