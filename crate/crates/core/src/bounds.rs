//! Closed-form error bounds for RGD and SRGD as pure scalar functions.
//!
//! Notation: `Δβ = β/n`, `h = ‖H‖∞`, `D` the number of sampled Pauli
//! directions, `d = 2^N`.

use serde::Serialize;

use crate::report::Scalar;
use crate::{Error, Result};

/// How `‖grad J‖²_HS` is obtained from the energy variance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradNormConvention {
    /// `‖[H, ρ]‖²_HS = 2·Var(H)`, the exact identity for pure `ρ`.
    HsExact,
    /// `‖grad J‖²_HS = Var(H)`, the variance itself.
    Variance,
}

impl GradNormConvention {
    pub fn grad_hs_sq(self, variance: f64) -> f64 {
        match self {
            GradNormConvention::HsExact => 2.0 * variance,
            GradNormConvention::Variance => variance,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GradNormConvention::HsExact => "hs-exact",
            GradNormConvention::Variance => "variance",
        }
    }
}

impl std::str::FromStr for GradNormConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hs-exact" => Ok(GradNormConvention::HsExact),
            "variance" => Ok(GradNormConvention::Variance),
            other => Err(Error::InvalidParameter(format!(
                "unknown convention {other:?} (expected hs-exact or variance)"
            ))),
        }
    }
}

/// Denominator of the average energy-decrease bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyDenominator {
    /// `8·d·h`, with the Hilbert-space dimension.
    HilbertDimension,
    /// `8·D·h`, what uniform averaging of the per-direction bound gives.
    Conservative,
}

/// `6Δβ²h²`: one-step distance between ITE and RGD.
pub fn lemma1_bound(dbeta: f64, h_norm: f64) -> f64 {
    6.0 * dbeta * dbeta * h_norm * h_norm
}

/// `(5/2)Δβh(e^{4βh} - 1)` with `Δβ = β/n`.
pub fn theorem1_bound(beta: f64, n: usize, h_norm: f64) -> f64 {
    assert!(n >= 1, "at least one step");
    let dbeta = beta / n as f64;
    2.5 * dbeta * h_norm * (4.0 * beta * h_norm).exp_m1()
}

/// Per-step recursion constants `(A, B) = (1 + 4Δβh, 10Δβ²h²)` of
/// `ε_k ≤ ε_{k-1}·A + B`.
pub fn recursion_constants(dbeta: f64, h_norm: f64) -> (f64, f64) {
    (
        1.0 + 4.0 * dbeta * h_norm,
        10.0 * dbeta * dbeta * h_norm * h_norm,
    )
}

/// `B Σ_{k<n} A^k = B(Aⁿ - 1)/(A - 1)`, or `n·B` when `A = 1`.
pub fn recursion_envelope(n: usize, a: f64, b: f64) -> f64 {
    let growth = a - 1.0;
    if growth == 0.0 {
        return n as f64 * b;
    }
    b * (n as f64 * growth.ln_1p()).exp_m1() / growth
}

/// Lower bound on the direction-averaged energy decrease of one SRGD step,
/// `‖grad J‖²_HS / (8·X·h)` with `X = d` or `X = D`.
pub fn avg_energy_change_lower_bound(
    grad_hs_sq: f64,
    dim: usize,
    basis_size: usize,
    h_norm: f64,
    denominator: EnergyDenominator,
) -> f64 {
    if grad_hs_sq == 0.0 {
        return 0.0;
    }
    let x = match denominator {
        EnergyDenominator::HilbertDimension => dim,
        EnergyDenominator::Conservative => basis_size,
    };
    grad_hs_sq / (8.0 * x as f64 * h_norm)
}

/// `√(2Δβh) · D · (e^{8βh} - 1)^{1/2}`, shared by both SRGD mean bounds.
fn srgd_mean_core(beta: f64, n: usize, h_norm: f64, basis_size: usize) -> f64 {
    assert!(n >= 1, "at least one step");
    let dbeta = beta / n as f64;
    (2.0 * dbeta * h_norm).sqrt() * basis_size as f64 * (8.0 * beta * h_norm).exp_m1().sqrt()
}

/// `Δβ h D² (e^{8βh} - 1)`, shared by both tail bounds.
fn srgd_tail_core(beta: f64, n: usize, h_norm: f64, basis_size: usize) -> f64 {
    assert!(n >= 1, "at least one step");
    let dbeta = beta / n as f64;
    let d = basis_size as f64;
    dbeta * h_norm * d * d * (8.0 * beta * h_norm).exp_m1()
}

/// `b_n = (9/2)√(2Δβh) D (e^{8βh} - 1)^{1/2}`, the mean fidelity-error
/// bound. Only established for `n ≥ βh`; see [`theorem2_applies`].
pub fn theorem2_mean_bound(beta: f64, n: usize, h_norm: f64, basis_size: usize) -> f64 {
    4.5 * srgd_mean_core(beta, n, h_norm, basis_size)
}

/// Whether `n` is large enough (`Δβ·h ≤ 1`) for the mean bound to hold.
pub fn theorem2_applies(beta: f64, n: usize, h_norm: f64) -> bool {
    n as f64 >= beta * h_norm
}

/// `Pr(ε_n > b_n + δ) ≤ 8Δβ h D² (e^{8βh} - 1)/δ²` (unclamped).
pub fn theorem2_tail_bound(
    beta: f64,
    n: usize,
    h_norm: f64,
    basis_size: usize,
    delta: f64,
) -> Result<f64> {
    check_offset("delta", delta)?;
    Ok(8.0 * srgd_tail_core(beta, n, h_norm, basis_size) / (delta * delta))
}

/// `(b̃_n, Pr(η_n > b̃_n + δ̃) bound)` for the SRGD-vs-RGD norm error.
pub fn lemma2_bounds(
    beta: f64,
    n: usize,
    h_norm: f64,
    basis_size: usize,
    delta_tilde: f64,
) -> Result<(f64, f64)> {
    check_offset("delta_tilde", delta_tilde)?;
    let mean = srgd_mean_core(beta, n, h_norm, basis_size);
    let tail = 2.0 * srgd_tail_core(beta, n, h_norm, basis_size) / (delta_tilde * delta_tilde);
    Ok((mean, tail))
}

fn check_offset(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Scalar inputs for a [`BoundReport`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundInputs {
    pub beta: f64,
    pub steps: usize,
    pub h_norm: f64,
    /// Hilbert-space dimension `d`.
    pub dim: usize,
    /// Number of sampled directions `D` (effective size when restricted).
    pub basis_size: usize,
    pub delta: f64,
    pub delta_tilde: f64,
    /// Energy variance of the state the energy bound is evaluated at.
    pub variance: f64,
    pub convention: GradNormConvention,
}

/// A value that may exceed a trivial cap, with the cap applied alongside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Capped {
    pub raw: f64,
    pub clamped: f64,
}

impl Capped {
    fn new(raw: f64, cap: f64) -> Self {
        Self {
            raw,
            clamped: raw.min(cap),
        }
    }

    pub fn vacuous(&self) -> bool {
        self.raw > self.clamped
    }
}

/// Every bound evaluated at one parameter point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub dbeta: f64,
    pub lemma1: f64,
    pub theorem1: f64,
    pub recursion_a: f64,
    pub recursion_b: f64,
    pub recursion_envelope: f64,
    pub grad_hs_sq: f64,
    pub avg_energy_lb_hilbert_dim: f64,
    pub avg_energy_lb_conservative: f64,
    pub theorem2_mean_b_n: Capped,
    pub theorem2_valid: bool,
    pub theorem2_tail: Capped,
    pub lemma2_mean_bt_n: Capped,
    pub lemma2_tail: Capped,
}

impl BoundReport {
    pub fn evaluate(inputs: BoundInputs) -> Result<Self> {
        let BoundInputs {
            beta,
            steps,
            h_norm,
            dim,
            basis_size,
            delta,
            delta_tilde,
            variance,
            convention,
        } = inputs;
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("steps must be >= 1".into()));
        }
        if !(h_norm >= 0.0 && h_norm.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spectral norm must be finite and >= 0, got {h_norm}"
            )));
        }
        if dim == 0 || basis_size == 0 {
            return Err(Error::InvalidParameter(
                "dimensions must be positive".into(),
            ));
        }
        if variance.is_nan() || variance < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "variance must be >= 0, got {variance}"
            )));
        }
        let dbeta = beta / steps as f64;
        let (recursion_a, recursion_b) = recursion_constants(dbeta, h_norm);
        let grad_hs_sq = convention.grad_hs_sq(variance);
        let (bt_n, lemma2_tail) = lemma2_bounds(beta, steps, h_norm, basis_size, delta_tilde)?;
        Ok(Self {
            inputs,
            dbeta,
            lemma1: lemma1_bound(dbeta, h_norm),
            theorem1: theorem1_bound(beta, steps, h_norm),
            recursion_a,
            recursion_b,
            recursion_envelope: recursion_envelope(steps, recursion_a, recursion_b),
            grad_hs_sq,
            avg_energy_lb_hilbert_dim: avg_energy_change_lower_bound(
                grad_hs_sq,
                dim,
                basis_size,
                h_norm,
                EnergyDenominator::HilbertDimension,
            ),
            avg_energy_lb_conservative: avg_energy_change_lower_bound(
                grad_hs_sq,
                dim,
                basis_size,
                h_norm,
                EnergyDenominator::Conservative,
            ),
            theorem2_mean_b_n: Capped::new(
                theorem2_mean_bound(beta, steps, h_norm, basis_size),
                1.0,
            ),
            theorem2_valid: theorem2_applies(beta, steps, h_norm),
            theorem2_tail: Capped::new(
                theorem2_tail_bound(beta, steps, h_norm, basis_size, delta)?,
                1.0,
            ),
            lemma2_mean_bt_n: Capped::new(bt_n, 2f64.sqrt()),
            lemma2_tail: Capped::new(lemma2_tail, 1.0),
        })
    }

    /// Flat `key = value` view, in a fixed order.
    pub fn entries(&self) -> Vec<(String, Scalar)> {
        let i = &self.inputs;
        let mut out: Vec<(String, Scalar)> = vec![
            ("input.beta".into(), i.beta.into()),
            ("input.steps".into(), i.steps.into()),
            ("input.dbeta".into(), self.dbeta.into()),
            ("input.h_norm".into(), i.h_norm.into()),
            ("input.dim".into(), i.dim.into()),
            ("input.basis_size".into(), i.basis_size.into()),
            ("input.delta".into(), i.delta.into()),
            ("input.delta_tilde".into(), i.delta_tilde.into()),
            ("input.variance".into(), i.variance.into()),
            ("input.convention".into(), i.convention.name().into()),
            ("bound.lemma1".into(), self.lemma1.into()),
            ("bound.theorem1".into(), self.theorem1.into()),
            ("bound.recursion_a".into(), self.recursion_a.into()),
            ("bound.recursion_b".into(), self.recursion_b.into()),
            (
                "bound.recursion_envelope".into(),
                self.recursion_envelope.into(),
            ),
            ("bound.grad_hs_sq".into(), self.grad_hs_sq.into()),
            (
                "bound.avg_energy_lb.hilbert_dim".into(),
                self.avg_energy_lb_hilbert_dim.into(),
            ),
            (
                "bound.avg_energy_lb.conservative".into(),
                self.avg_energy_lb_conservative.into(),
            ),
            ("bound.theorem2_valid".into(), self.theorem2_valid.into()),
        ];
        for (name, capped) in [
            ("bound.theorem2_mean_b_n", self.theorem2_mean_b_n),
            ("bound.theorem2_tail", self.theorem2_tail),
            ("bound.lemma2_mean_bt_n", self.lemma2_mean_bt_n),
            ("bound.lemma2_tail", self.lemma2_tail),
        ] {
            out.push((format!("{name}.raw"), capped.raw.into()));
            out.push((format!("{name}.clamped"), capped.clamped.into()));
            out.push((format!("{name}.vacuous"), capped.vacuous().into()));
        }
        out
    }
}
