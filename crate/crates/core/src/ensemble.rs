//! Runs an RGD reference and many SRGD trajectories against exact ITE,
//! reduces the ensemble and checks every bound inequality.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundInputs, BoundReport, GradNormConvention};
use crate::evolution::{
    ite_step, rgd_step, rgd_trajectory_with_reference, srgd_trajectory_with_reference,
    IteReference, RgdTrajectory, ScheduleConfig, SrgdTrajectory,
};
use crate::hamiltonian::{variance, HamiltonianSpec, PauliBasis};
use crate::linalg::StateVector;
use crate::metrics::{
    euclidean_error, fidelity_error, statistics_above, EnsembleStatistics, TrajectoryRecord,
};
use crate::sampling::stream_seed;
use crate::{Complex64, Error, Result};

/// Slack for inequalities that hold exactly in exact arithmetic.
pub const EXACT_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum InitialState {
    /// `|+…+⟩`.
    Plus,
    /// Computational basis state from a bit string, first bit most
    /// significant.
    Basis(String),
    /// Explicit amplitudes, normalized on use.
    Amplitudes(#[serde(serialize_with = "crate::linalg::serialize_complex")] Vec<Complex64>),
}

impl InitialState {
    pub fn build(&self, num_qubits: usize) -> Result<StateVector> {
        let state = match self {
            InitialState::Plus => StateVector::plus(num_qubits),
            InitialState::Basis(bits) => StateVector::from_bitstring(bits)?,
            InitialState::Amplitudes(amps) => StateVector::from_amplitudes(amps.clone())?,
        };
        if state.num_qubits() != num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                found: state.dim(),
            });
        }
        Ok(state)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub hamiltonian: HamiltonianSpec,
    pub initial_state: InitialState,
    pub schedule: ScheduleConfig,
    pub num_trajectories: usize,
    /// Trajectory `t` samples from stream `base_seed ^ t`.
    pub base_seed: u64,
    /// Full-basis indices to sample from; `None` samples all `d² - 1`.
    pub basis_restriction: Option<Vec<usize>>,
    pub delta: f64,
    pub delta_tilde: f64,
    pub convention: GradNormConvention,
}

impl ExperimentConfig {
    /// The sampling basis, restricted if requested.
    pub fn basis(&self) -> Result<PauliBasis> {
        let full = PauliBasis::full(self.hamiltonian.num_qubits())?;
        match &self.basis_restriction {
            Some(indices) => full.restricted(indices.clone()),
            None => Ok(full),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    /// Holds for every instance; checked with [`EXACT_SLACK`].
    Exact,
    /// Holds in expectation or probability; checked against the clamped
    /// bound.
    Statistical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub kind: VerdictKind,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl Verdict {
    fn exact(name: String, lhs: f64, rhs: f64) -> Self {
        Self {
            name,
            kind: VerdictKind::Exact,
            lhs,
            rhs,
            pass: lhs <= rhs + EXACT_SLACK,
        }
    }

    fn statistical(name: &str, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.to_owned(),
            kind: VerdictKind::Statistical,
            lhs,
            rhs,
            pass: lhs <= rhs,
        }
    }

    /// Inequality family, e.g. `lemma1` for `lemma1[12]`.
    pub fn family(&self) -> &str {
        self.name.split('[').next().unwrap_or(&self.name)
    }
}

/// Ensemble statistics at one step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepSummary {
    pub step: usize,
    /// Fidelity error; the tail counts values above `min(1, b_n) + δ`.
    pub fidelity: EnsembleStatistics,
    /// SRGD-vs-RGD norm error; the tail counts values above
    /// `min(√2, b̃_n) + δ̃`.
    pub eta: EnsembleStatistics,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleResult {
    #[serde(skip)]
    pub hamiltonian: HamiltonianSpec,
    pub hamiltonian_text: String,
    pub initial_state: InitialState,
    pub schedule: ScheduleConfig,
    pub h_norm: f64,
    pub base_seed: u64,
    pub basis_size: usize,
    pub basis_restriction: Option<Vec<usize>>,
    pub ite: IteReference,
    pub ite_records: Vec<TrajectoryRecord>,
    pub rgd: RgdTrajectory,
    pub trajectories: Vec<SrgdTrajectory>,
    /// Per-step reductions; empty with fewer than two trajectories.
    pub summary: Vec<StepSummary>,
    pub bound_report: BoundReport,
    pub verdicts: Vec<Verdict>,
}

impl EnsembleResult {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exact_failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts
            .iter()
            .filter(|v| v.kind == VerdictKind::Exact && !v.pass)
    }

    /// Terminal fidelity errors, one per trajectory, in trajectory order.
    pub fn terminal_fidelity_errors(&self) -> Vec<f64> {
        self.trajectories
            .iter()
            .map(|t| t.records.last().expect("records").fidelity_error)
            .collect()
    }
}

/// Runs on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> Result<EnsembleResult> {
    run_inner(config)
}

/// Runs with a dedicated pool of `jobs` workers. The result does not depend
/// on `jobs`.
pub fn run_experiment_with_jobs(config: &ExperimentConfig, jobs: usize) -> Result<EnsembleResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_inner(config))
}

fn run_inner(config: &ExperimentConfig) -> Result<EnsembleResult> {
    let h = &config.hamiltonian;
    let psi0 = config.initial_state.build(h.num_qubits())?;
    let basis = config.basis()?;
    let schedule = config.schedule;

    let ite = IteReference::compute(h, &psi0, schedule)?;
    let ite_records = ite.records(h)?;
    let rgd = rgd_trajectory_with_reference(h, &ite)?;

    let trajectories = (0..config.num_trajectories)
        .into_par_iter()
        .map(|t| {
            let seed = stream_seed(config.base_seed, t as u64);
            srgd_trajectory_with_reference(h, &ite, &basis, seed, Some(&rgd.states))
        })
        .collect::<Result<Vec<_>>>()?;

    let bound_report = BoundReport::evaluate(BoundInputs {
        beta: schedule.beta(),
        steps: schedule.num_steps(),
        h_norm: h.spectral_norm(),
        dim: h.dim(),
        basis_size: basis.effective_size(),
        delta: config.delta,
        delta_tilde: config.delta_tilde,
        variance: variance(h, &psi0)?,
        convention: config.convention,
    })?;

    let summary = if trajectories.len() >= 2 {
        summarize(&trajectories, &bound_report)?
    } else {
        Vec::new()
    };

    let mut result = EnsembleResult {
        hamiltonian: h.clone(),
        hamiltonian_text: h.to_text(),
        initial_state: config.initial_state.clone(),
        schedule,
        h_norm: h.spectral_norm(),
        base_seed: config.base_seed,
        basis_size: basis.effective_size(),
        basis_restriction: config.basis_restriction.clone(),
        ite,
        ite_records,
        rgd,
        trajectories,
        summary,
        bound_report,
        verdicts: Vec::new(),
    };
    result.verdicts = verify_bounds(&result)?;
    Ok(result)
}

fn summarize(trajectories: &[SrgdTrajectory], report: &BoundReport) -> Result<Vec<StepSummary>> {
    let steps = trajectories[0].records.len();
    let fe_threshold = report.theorem2_mean_b_n.clamped + report.inputs.delta;
    let eta_threshold = report.lemma2_mean_bt_n.clamped + report.inputs.delta_tilde;
    (0..steps)
        .map(|k| {
            let fe: Vec<f64> = trajectories
                .iter()
                .map(|t| t.records[k].fidelity_error)
                .collect();
            let eta: Vec<f64> = trajectories
                .iter()
                .map(|t| t.records[k].eta.unwrap_or(f64::NAN))
                .collect();
            Ok(StepSummary {
                step: k,
                fidelity: statistics_above(&fe, fe_threshold)?,
                eta: statistics_above(&eta, eta_threshold)?,
            })
        })
        .collect()
}

/// Re-derives every inequality from the stored states.
///
/// Exact entries: `lemma1[k]` (one ITE step against one RGD step from
/// `φ_{k-1}`), `recursion[k]` (`ε_k ≤ Aε_{k-1} + B`) and `theorem1`.
/// With two or more trajectories, the statistical entries
/// `theorem2_mean`, `theorem2_tail`, `lemma2_mean` and `lemma2_tail` follow.
pub fn verify_bounds(result: &EnsembleResult) -> Result<Vec<Verdict>> {
    let h = &result.hamiltonian;
    let report = &result.bound_report;
    let dbeta = result.schedule.step_size();
    let ite_states = result.ite.states();
    let rgd_states = &result.rgd.states;
    let n = result.schedule.num_steps();

    let mut verdicts = Vec::with_capacity(2 * n + 5);
    for k in 1..=n {
        let prev = &rgd_states[k - 1];
        let lhs = euclidean_error(&ite_step(h, prev, dbeta)?, &rgd_step(h, prev, dbeta)?)?;
        verdicts.push(Verdict::exact(format!("lemma1[{k}]"), lhs, report.lemma1));
    }
    let eps = ite_states
        .iter()
        .zip(rgd_states)
        .map(|(psi, phi)| euclidean_error(psi, phi))
        .collect::<Result<Vec<_>>>()?;
    for k in 1..=n {
        let rhs = eps[k - 1] * report.recursion_a + report.recursion_b;
        verdicts.push(Verdict::exact(format!("recursion[{k}]"), eps[k], rhs));
    }
    verdicts.push(Verdict::exact("theorem1".into(), eps[n], report.theorem1));

    if result.trajectories.len() >= 2 {
        let target = result.ite.target();
        let fe = result
            .trajectories
            .iter()
            .map(|t| fidelity_error(target, &t.final_state))
            .collect::<Result<Vec<_>>>()?;
        let eta = result
            .trajectories
            .iter()
            .map(|t| euclidean_error(&t.final_state, &rgd_states[n]))
            .collect::<Result<Vec<_>>>()?;
        let b_n = report.theorem2_mean_b_n.clamped;
        let bt_n = report.lemma2_mean_bt_n.clamped;
        let fe_stats = statistics_above(&fe, b_n + report.inputs.delta)?;
        let eta_stats = statistics_above(&eta, bt_n + report.inputs.delta_tilde)?;
        verdicts.push(Verdict::statistical("theorem2_mean", fe_stats.mean, b_n));
        verdicts.push(Verdict::statistical(
            "theorem2_tail",
            fe_stats.tail_frequency,
            report.theorem2_tail.clamped,
        ));
        verdicts.push(Verdict::statistical("lemma2_mean", eta_stats.mean, bt_n));
        verdicts.push(Verdict::statistical(
            "lemma2_tail",
            eta_stats.tail_frequency,
            report.lemma2_tail.clamped,
        ));
    }
    Ok(verdicts)
}
