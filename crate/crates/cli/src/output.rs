//! Artifact writers. Column order and float rendering are frozen.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use itegrad::evolution::TrajectoryPath;
use itegrad::report::{render_float, Scalar};
use itegrad::{PauliBasis, StateVector, TrajectoryRecord};

pub const TRAJECTORY_HEADER: &str =
    "step,partial_beta,energy,eps_rgd,fidelity_error,eta,grad_hs_norm,sampled_index";

fn opt_float(x: Option<f64>) -> String {
    x.map(render_float).unwrap_or_default()
}

pub fn trajectory_csv(records: &[TrajectoryRecord]) -> String {
    let mut out = String::with_capacity(160 * (records.len() + 1));
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.step,
            render_float(r.partial_beta),
            render_float(r.energy),
            opt_float(r.eps_rgd),
            render_float(r.fidelity_error),
            opt_float(r.eta),
            render_float(r.grad_hs_norm),
            r.sampled_index.map(|i| i.to_string()).unwrap_or_default(),
        );
    }
    out
}

pub fn state_csv(state: &StateVector) -> String {
    let mut out = String::from("index,re,im\n");
    for (i, a) in state.amplitudes().iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", render_float(a.re), render_float(a.im));
    }
    out
}

/// One row per sampled step, labelled with its Pauli string.
pub fn path_csv(path: &TrajectoryPath, basis: &PauliBasis) -> String {
    let mut out = String::from("step,sampled_index,pauli,coefficient,rotation_angle\n");
    for s in &path.steps {
        let label = basis
            .element(s.sampled_index)
            .map(|p| p.letters().iter().map(|l| l.as_char()).collect::<String>())
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            s.step_index,
            s.sampled_index,
            label,
            render_float(s.coefficient),
            render_float(s.rotation_angle),
        );
    }
    out
}

/// Ordered flat key-value document, written as one JSON object with one
/// entry per line. Floats keep 17 significant digits; non-finite floats are
/// written as strings.
#[derive(Clone, Debug, Default)]
pub struct Summary {
    entries: Vec<(String, Scalar)>,
}

impl Summary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Scalar>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn extend(&mut self, prefix: &str, entries: Vec<(String, Scalar)>) {
        for (k, v) in entries {
            self.push(format!("{prefix}{k}"), v);
        }
    }

    pub fn entries(&self) -> &[(String, Scalar)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Scalar> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        for (i, (k, v)) in self.entries.iter().enumerate() {
            let value = match v {
                Scalar::Float(x) if x.is_finite() => render_float(*x),
                Scalar::Int(n) => n.to_string(),
                Scalar::Bool(b) => b.to_string(),
                other => json_string(&other.render()),
            };
            let sep = if i + 1 == self.entries.len() { "" } else { "," };
            let _ = writeln!(out, "  {}: {value}{sep}", json_string(k));
        }
        out.push_str("}\n");
        out
    }

    /// `key = value` lines, for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k} = {}", v.render());
        }
        out
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))
}
