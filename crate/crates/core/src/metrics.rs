//! Distances between evolver outputs and ensemble reductions.

use serde::Serialize;

use crate::linalg::StateVector;
use crate::{Error, Result};

/// Metrics of one state along a trajectory.
///
/// `fidelity_error` is measured against the final target `ψ(β)`, while
/// `eps_rgd` compares with the exact ITE state at the same partial time
/// `kΔβ`. The two references coincide at the last step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub step: usize,
    pub partial_beta: f64,
    pub energy: f64,
    pub eps_rgd: Option<f64>,
    pub fidelity_error: f64,
    pub eta: Option<f64>,
    pub grad_hs_norm: f64,
    pub sampled_index: Option<usize>,
}

/// Raw `‖a - b‖`; global phase is not quotiented out.
pub fn euclidean_error(a: &StateVector, b: &StateVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok((a.amplitudes() - b.amplitudes()).norm())
}

/// `1 - |⟨target|state⟩|²`, clamped into `[0, 1]`.
pub fn fidelity_error(target: &StateVector, state: &StateVector) -> Result<f64> {
    let overlap = target.inner(state)?.norm_sqr();
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnsembleStatistics {
    pub mean: f64,
    /// Unbiased sample variance (divides by `M - 1`).
    pub variance: f64,
    /// Fraction of samples strictly above the threshold.
    pub tail_frequency: f64,
}

/// Mean, variance and exceedance frequency of `samples` over the threshold
/// `min(1, bound) + delta`. Sums run in index order.
pub fn ensemble_statistics(samples: &[f64], bound: f64, delta: f64) -> Result<EnsembleStatistics> {
    statistics_above(samples, bound.min(1.0) + delta)
}

/// As [`ensemble_statistics`] with an explicit threshold.
pub fn statistics_above(samples: &[f64], threshold: f64) -> Result<EnsembleStatistics> {
    if samples.len() < 2 {
        return Err(Error::NotEnoughSamples {
            needed: 2,
            found: samples.len(),
        });
    }
    let m = samples.len() as f64;
    let mean = samples.iter().fold(0.0, |acc, x| acc + x) / m;
    let variance = samples
        .iter()
        .fold(0.0, |acc, x| acc + (x - mean) * (x - mean))
        / (m - 1.0);
    let exceed = samples.iter().filter(|&&x| x > threshold).count();
    Ok(EnsembleStatistics {
        mean,
        variance,
        tail_frequency: exceed as f64 / m,
    })
}
