//! The three evolvers: exact imaginary time evolution, Riemannian gradient
//! descent (RGD) and its stochastic single-direction version (SRGD).

use num_complex::Complex64;
use serde::Serialize;

use crate::hamiltonian::{expectation, variance, HamiltonianSpec, PauliBasis, PauliString};
use crate::linalg::{check_dim, evolve_by_generator, CMatrix, StateVector, TangentGenerator};
use crate::metrics::{euclidean_error, fidelity_error, TrajectoryRecord};
use crate::sampling::DirectionSampler;
use crate::{Error, Result};

/// Below this Hilbert–Schmidt norm the gradient counts as zero and an SRGD
/// trajectory is flagged as converged.
pub const ZERO_GRADIENT_TOL: f64 = 1e-12;

/// Total imaginary time `β` split into `n` equal steps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScheduleConfig {
    beta: f64,
    num_steps: usize,
}

impl ScheduleConfig {
    pub fn new(beta: f64, num_steps: usize) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        if num_steps == 0 {
            return Err(Error::InvalidParameter(
                "number of steps must be >= 1".into(),
            ));
        }
        Ok(Self { beta, num_steps })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    /// `Δβ = β/n`.
    pub fn step_size(&self) -> f64 {
        self.beta / self.num_steps as f64
    }

    /// `kΔβ`, exact at `k = n`.
    pub fn partial_beta(&self, k: usize) -> f64 {
        if k == self.num_steps {
            self.beta
        } else {
            self.beta * k as f64 / self.num_steps as f64
        }
    }
}

/// Normalized `e^{-βH}|ψ0⟩` from the spectrum of `H`.
///
/// Weights are shifted by the smallest eigenvalue before exponentiating, so
/// the degenerate-input error only fires when `ψ0` has no weight left on the
/// retained part of the spectrum, not when `e^{-βλ_min}` itself underflows.
pub fn ite_state(h: &HamiltonianSpec, psi0: &StateVector, beta: f64) -> Result<StateVector> {
    check_dim(h.dim(), psi0.dim())?;
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "beta must be finite and >= 0, got {beta}"
        )));
    }
    if beta == 0.0 {
        return Ok(psi0.clone());
    }
    let spectrum = h.spectrum();
    let ground = spectrum.eigenvalues[0];
    let raw = spectrum.apply_function(
        |l| Complex64::new((-beta * (l - ground)).exp(), 0.0),
        psi0.amplitudes(),
    );
    let norm = raw.norm();
    if norm.is_nan() || norm <= 1e-300 {
        return Err(Error::DegenerateEvolution { norm, beta });
    }
    StateVector::normalized(raw)
}

/// One normalized ITE step `e^{-ΔβH}|ψ⟩/‖·‖`.
pub fn ite_step(h: &HamiltonianSpec, psi: &StateVector, dbeta: f64) -> Result<StateVector> {
    ite_state(h, psi, dbeta)
}

/// `grad J = [H, |φ⟩⟨φ|]`, assembled as `(Hφ)φ† - φ(Hφ)†`.
pub fn riemannian_gradient(h: &HamiltonianSpec, phi: &StateVector) -> Result<TangentGenerator> {
    let hphi = h.materialize().apply(phi)?;
    let phi = phi.amplitudes();
    let m = &hphi * phi.adjoint() - phi * hphi.adjoint();
    TangentGenerator::new(m)
}

/// One RGD step `e^{-Δβ grad J}|φ⟩`.
pub fn rgd_step(h: &HamiltonianSpec, phi: &StateVector, dbeta: f64) -> Result<StateVector> {
    if !dbeta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "step size must be finite, got {dbeta}"
        )));
    }
    let grad = riemannian_gradient(h, phi)?;
    evolve_by_generator(phi, &grad, -dbeta)
}

/// `C = ⟨grad J, iP⟩ = Tr{(grad J)† iP}` for a normalized Pauli direction.
pub fn srgd_coefficient(grad: &TangentGenerator, p: &PauliString) -> Result<f64> {
    if !p.is_normalized() {
        return Err(Error::ConventionMismatch(
            "sampling directions use normalized Pauli strings",
        ));
    }
    check_dim(grad.dim(), p.dim())?;
    let m = grad.matrix();
    let i = Complex64::new(0.0, 1.0);
    let sum = (0..p.dim()).fold(Complex64::new(0.0, 0.0), |acc, row| {
        let (col, v) = p.row_entry(row);
        acc + m[(row, col)].conj() * i * v
    });
    Ok(sum.re)
}

/// Single-direction gradient estimate `D·C·iP`; its average over a full
/// basis is `grad J`, and `e^{-Δβ·(D C iP)}` is the SRGD gate.
pub fn stochastic_gradient(
    grad: &TangentGenerator,
    basis: &PauliBasis,
    index: usize,
) -> Result<TangentGenerator> {
    let p = direction(basis, index)?;
    let c = srgd_coefficient(grad, p)?;
    let scale = Complex64::new(0.0, c * basis.effective_size() as f64);
    TangentGenerator::new(p.matrix().map(|z| scale * z))
}

fn direction(basis: &PauliBasis, index: usize) -> Result<&PauliString> {
    if !basis.contains(index) {
        return Err(Error::IndexOutOfRange {
            index,
            reason: format!("sample space has {} directions", basis.effective_size()),
        });
    }
    Ok(basis.element(index).expect("contained index"))
}

/// One sampled SRGD update.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SrgdStepRecord {
    pub step_index: usize,
    /// Full-basis index of the sampled direction.
    pub sampled_index: usize,
    pub coefficient: f64,
    /// `C·D·Δβ`, the angle multiplying the normalized Pauli.
    pub rotation_angle: f64,
}

/// Applies `V = e^{-i C D Δβ P}` along direction `index` of `basis`, with
/// `D` the effective sample-space size. `step_index` only labels the record.
pub fn srgd_step(
    h: &HamiltonianSpec,
    chi: &StateVector,
    dbeta: f64,
    index: usize,
    basis: &PauliBasis,
    step_index: usize,
) -> Result<(StateVector, SrgdStepRecord)> {
    let grad = riemannian_gradient(h, chi)?;
    srgd_step_with_gradient(&grad, chi, dbeta, index, basis, step_index)
}

fn srgd_step_with_gradient(
    grad: &TangentGenerator,
    chi: &StateVector,
    dbeta: f64,
    index: usize,
    basis: &PauliBasis,
    step_index: usize,
) -> Result<(StateVector, SrgdStepRecord)> {
    let p = direction(basis, index)?;
    let coefficient = srgd_coefficient(grad, p)?;
    let rotation_angle = coefficient * basis.effective_size() as f64 * dbeta;
    let record = SrgdStepRecord {
        step_index,
        sampled_index: index,
        coefficient,
        rotation_angle,
    };
    Ok((pauli_rotation(chi, p, rotation_angle)?, record))
}

/// `e^{-iθP}|χ⟩` for a normalized string `P = σ/√d`; since `σ² = 1` this is
/// `cos(θ/√d)|χ⟩ - i sin(θ/√d) σ|χ⟩`.
fn pauli_rotation(chi: &StateVector, p: &PauliString, theta: f64) -> Result<StateVector> {
    if theta == 0.0 {
        return Ok(chi.clone());
    }
    let plain = PauliString::new(p.letters().to_vec())?;
    let phi = theta * p.scale();
    let flipped = plain.apply(chi.amplitudes())?;
    let rotated = chi.amplitudes() * Complex64::new(phi.cos(), 0.0)
        + flipped * Complex64::new(0.0, -phi.sin());
    StateVector::normalized(rotated)
}

/// `⟨φ|H|φ⟩ - ⟨φ'|H|φ'⟩` where `φ' = step(φ)`; positive means the step
/// lowered the energy.
pub fn energy_change<F>(h: &HamiltonianSpec, phi: &StateVector, step: F) -> Result<f64>
where
    F: FnOnce(&StateVector) -> Result<StateVector>,
{
    let after = step(phi)?;
    Ok(expectation(h, phi)? - expectation(h, &after)?)
}

/// `(1/D) Σ_j V_j |φ⟩⟨φ| V_j†` over the sample space of `basis`.
pub fn averaged_srgd_channel(
    h: &HamiltonianSpec,
    phi: &StateVector,
    dbeta: f64,
    basis: &PauliBasis,
) -> Result<CMatrix> {
    let grad = riemannian_gradient(h, phi)?;
    let size = basis.effective_size();
    let mut rho = CMatrix::zeros(phi.dim(), phi.dim());
    for pos in 0..size {
        let (out, _) = srgd_step_with_gradient(&grad, phi, dbeta, basis.index_at(pos), basis, 0)?;
        rho += out.projector();
    }
    Ok(rho.unscale(size as f64))
}

/// Exact ITE states `ψ(kΔβ)` for `k = 0..=n`; the last one is the target
/// `ψ(β)` that fidelity errors are measured against.
#[derive(Clone, Debug, Serialize)]
pub struct IteReference {
    schedule: ScheduleConfig,
    states: Vec<StateVector>,
}

impl IteReference {
    pub fn compute(
        h: &HamiltonianSpec,
        psi0: &StateVector,
        schedule: ScheduleConfig,
    ) -> Result<Self> {
        let states = (0..=schedule.num_steps())
            .map(|k| ite_state(h, psi0, schedule.partial_beta(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { schedule, states })
    }

    pub fn schedule(&self) -> ScheduleConfig {
        self.schedule
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn initial(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn target(&self) -> &StateVector {
        self.states.last().expect("at least two reference states")
    }

    /// Per-step records of the exact evolution itself.
    pub fn records(&self, h: &HamiltonianSpec) -> Result<Vec<TrajectoryRecord>> {
        self.states
            .iter()
            .enumerate()
            .map(|(k, s)| make_record(h, self, k, s, false, None, None))
            .collect()
    }
}

fn make_record(
    h: &HamiltonianSpec,
    reference: &IteReference,
    k: usize,
    state: &StateVector,
    with_eps: bool,
    eta: Option<f64>,
    sampled_index: Option<usize>,
) -> Result<TrajectoryRecord> {
    let eps_rgd = if with_eps {
        Some(euclidean_error(&reference.states[k], state)?)
    } else {
        None
    };
    Ok(TrajectoryRecord {
        step: k,
        partial_beta: reference.schedule.partial_beta(k),
        energy: expectation(h, state)?,
        eps_rgd,
        fidelity_error: fidelity_error(reference.target(), state)?,
        eta,
        grad_hs_norm: (2.0 * variance(h, state)?).sqrt(),
        sampled_index,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RgdTrajectory {
    /// `φ_0 … φ_n`.
    pub states: Vec<StateVector>,
    pub records: Vec<TrajectoryRecord>,
}

impl RgdTrajectory {
    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("non-empty trajectory")
    }
}

/// `n` RGD steps from `ψ0`, with metrics against exact ITE.
pub fn rgd_trajectory(
    h: &HamiltonianSpec,
    psi0: &StateVector,
    schedule: ScheduleConfig,
) -> Result<RgdTrajectory> {
    let reference = IteReference::compute(h, psi0, schedule)?;
    rgd_trajectory_with_reference(h, &reference)
}

pub fn rgd_trajectory_with_reference(
    h: &HamiltonianSpec,
    reference: &IteReference,
) -> Result<RgdTrajectory> {
    let schedule = reference.schedule();
    let dbeta = schedule.step_size();
    let mut states = Vec::with_capacity(schedule.num_steps() + 1);
    states.push(reference.initial().clone());
    for k in 1..=schedule.num_steps() {
        let next = rgd_step(h, &states[k - 1], dbeta)?;
        states.push(next);
    }
    let records = states
        .iter()
        .enumerate()
        .map(|(k, s)| make_record(h, reference, k, s, true, None, None))
        .collect::<Result<Vec<_>>>()?;
    Ok(RgdTrajectory { states, records })
}

/// The sampled directions of one stochastic trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryPath {
    pub seed: u64,
    pub steps: Vec<SrgdStepRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SrgdTrajectory {
    pub final_state: StateVector,
    pub path: TrajectoryPath,
    pub records: Vec<TrajectoryRecord>,
    /// First step index at which the gradient vanished; later steps are the
    /// identity and draw no samples.
    pub converged_at: Option<usize>,
}

/// `n` SRGD steps from `ψ0` with directions drawn from `seed`.
pub fn srgd_trajectory(
    h: &HamiltonianSpec,
    psi0: &StateVector,
    schedule: ScheduleConfig,
    basis: &PauliBasis,
    seed: u64,
) -> Result<SrgdTrajectory> {
    let reference = IteReference::compute(h, psi0, schedule)?;
    srgd_trajectory_with_reference(h, &reference, basis, seed, None)
}

/// Like [`srgd_trajectory`], sharing a precomputed ITE reference. When the
/// RGD states are supplied, `η_k = ‖χ_k - φ_k‖` is recorded.
pub fn srgd_trajectory_with_reference(
    h: &HamiltonianSpec,
    reference: &IteReference,
    basis: &PauliBasis,
    seed: u64,
    rgd_states: Option<&[StateVector]>,
) -> Result<SrgdTrajectory> {
    check_dim(h.num_qubits(), basis.num_qubits())?;
    let schedule = reference.schedule();
    let dbeta = schedule.step_size();
    let mut sampler = DirectionSampler::new(seed);
    let mut chi = reference.initial().clone();
    let mut steps = Vec::with_capacity(schedule.num_steps());
    let mut converged_at = None;

    let eta_at = |k: usize, chi: &StateVector| -> Result<Option<f64>> {
        rgd_states
            .map(|rgd| euclidean_error(chi, &rgd[k]))
            .transpose()
    };
    let mut records = Vec::with_capacity(schedule.num_steps() + 1);
    records.push(make_record(
        h,
        reference,
        0,
        &chi,
        true,
        eta_at(0, &chi)?,
        None,
    )?);

    for k in 1..=schedule.num_steps() {
        let mut sampled = None;
        if converged_at.is_none() {
            let grad = riemannian_gradient(h, &chi)?;
            if grad.hs_norm() <= ZERO_GRADIENT_TOL {
                converged_at = Some(k - 1);
            } else {
                let pos = sampler.uniform_below(basis.effective_size() as u64) as usize;
                let index = basis.index_at(pos);
                let (next, record) = srgd_step_with_gradient(&grad, &chi, dbeta, index, basis, k)?;
                chi = next;
                steps.push(record);
                sampled = Some(index);
            }
        }
        records.push(make_record(
            h,
            reference,
            k,
            &chi,
            true,
            eta_at(k, &chi)?,
            sampled,
        )?);
    }
    Ok(SrgdTrajectory {
        final_state: chi,
        path: TrajectoryPath { seed, steps },
        records,
        converged_at,
    })
}
