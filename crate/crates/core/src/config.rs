//! TOML experiment files.
//!
//! ```toml
//! [hamiltonian]
//! terms = ["1.0 Z"]          # or one multi-line string, or `file = "h.txt"`
//! max_qubits = 6
//!
//! [initial_state]
//! kind = "plus"              # "basis" with `bits`, "amplitudes" with [[re, im], ...]
//!
//! [schedule]
//! beta = 1.0
//! steps = 300
//!
//! [ensemble]
//! trajectories = 50
//! seed = 2024
//! restriction = ["Y"]        # optional; basis indices or Pauli strings
//!
//! [bounds]
//! delta = 0.1
//! delta_tilde = 0.05
//! convention = "hs-exact"
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::bounds::GradNormConvention;
use crate::ensemble::{ExperimentConfig, InitialState};
use crate::evolution::ScheduleConfig;
use crate::hamiltonian::{HamiltonianSpec, PauliBasis, DEFAULT_MAX_QUBITS};
use crate::{Complex64, Error, Result};

pub const DEFAULT_DELTA: f64 = 0.1;

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub hamiltonian: HamiltonianSection,
    #[serde(default)]
    pub initial_state: InitialStateSection,
    pub schedule: ScheduleSection,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default)]
    pub bounds: BoundsSection,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSection {
    pub terms: Option<Terms>,
    /// Term file, relative to the config file.
    pub file: Option<PathBuf>,
    pub max_qubits: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Terms {
    Text(String),
    Lines(Vec<String>),
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InitialStateSection {
    pub kind: Option<String>,
    pub bits: Option<String>,
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    pub beta: f64,
    pub steps: usize,
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSection {
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub restriction: Option<Vec<Direction>>,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Direction {
    Index(usize),
    Letters(String),
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    pub delta: Option<f64>,
    pub delta_tilde: Option<f64>,
    pub convention: Option<String>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub beta: Option<f64>,
    pub steps: Option<usize>,
    pub trajectories: Option<usize>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub convention: Option<GradNormConvention>,
    pub jobs: Option<usize>,
}

/// A resolved config plus the execution-only settings.
#[derive(Clone, Debug)]
pub struct LoadedConfig {
    pub experiment: ExperimentConfig,
    /// Worker count; `None` uses every core.
    pub jobs: Option<usize>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::parse(&text)?, base))
    }

    /// Resolves relative paths against `base_dir`.
    pub fn resolve(&self, base_dir: &Path, overrides: &Overrides) -> Result<LoadedConfig> {
        let max_qubits = self.hamiltonian.max_qubits.unwrap_or(DEFAULT_MAX_QUBITS);
        let text = match (&self.hamiltonian.terms, &self.hamiltonian.file) {
            (Some(Terms::Text(t)), None) => t.clone(),
            (Some(Terms::Lines(lines)), None) => lines.join("\n"),
            (None, Some(file)) => {
                let path = base_dir.join(file);
                std::fs::read_to_string(&path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "hamiltonian: give either terms or file, not both".into(),
                ))
            }
            (None, None) => return Err(Error::Config("hamiltonian: missing terms".into())),
        };
        let hamiltonian = HamiltonianSpec::parse(&text, max_qubits)?;

        let schedule = ScheduleConfig::new(
            overrides.beta.unwrap_or(self.schedule.beta),
            overrides.steps.unwrap_or(self.schedule.steps),
        )?;

        let basis_restriction = match &self.ensemble.restriction {
            None => None,
            Some(dirs) => {
                let full = PauliBasis::full(hamiltonian.num_qubits())?;
                let indices = dirs
                    .iter()
                    .map(|d| match d {
                        Direction::Index(i) => Ok(*i),
                        Direction::Letters(s) => full.position_of(s).ok_or_else(|| {
                            Error::Config(format!("restriction: {s:?} is not a basis element"))
                        }),
                    })
                    .collect::<Result<Vec<_>>>()?;
                full.restricted(indices.clone())?;
                Some(indices)
            }
        };

        let delta = overrides
            .delta
            .or(self.bounds.delta)
            .unwrap_or(DEFAULT_DELTA);
        let delta_tilde = self.bounds.delta_tilde.unwrap_or(delta / 2.0);
        let convention = match (overrides.convention, &self.bounds.convention) {
            (Some(c), _) => c,
            (None, Some(name)) => name.parse()?,
            (None, None) => GradNormConvention::HsExact,
        };
        let jobs = overrides.jobs.or(self.ensemble.jobs);
        if jobs == Some(0) {
            return Err(Error::Config("jobs must be positive".into()));
        }

        Ok(LoadedConfig {
            experiment: ExperimentConfig {
                initial_state: self.initial_state.build()?,
                hamiltonian,
                schedule,
                num_trajectories: overrides
                    .trajectories
                    .or(self.ensemble.trajectories)
                    .unwrap_or(0),
                base_seed: overrides.seed.or(self.ensemble.seed).unwrap_or(0),
                basis_restriction,
                delta,
                delta_tilde,
                convention,
            },
            jobs,
        })
    }
}

impl InitialStateSection {
    fn build(&self) -> Result<InitialState> {
        let kind = self.kind.as_deref().unwrap_or("plus");
        let state = match kind {
            "plus" => InitialState::Plus,
            "basis" => InitialState::Basis(
                self.bits
                    .clone()
                    .ok_or_else(|| Error::Config("initial_state: basis needs bits".into()))?,
            ),
            "amplitudes" => InitialState::Amplitudes(
                self.amplitudes
                    .as_ref()
                    .ok_or_else(|| Error::Config("initial_state: missing amplitudes".into()))?
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect(),
            ),
            other => {
                return Err(Error::Config(format!(
                    "initial_state: unknown kind {other:?}"
                )))
            }
        };
        Ok(state)
    }
}

/// Reads and resolves a config file.
pub fn load(path: &Path, overrides: &Overrides) -> Result<LoadedConfig> {
    let (file, base) = ConfigFile::load(path)?;
    file.resolve(&base, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG: &str = r#"
[hamiltonian]
terms = ["1.0 Z"]

[schedule]
beta = 1.0
steps = 300

[ensemble]
trajectories = 50
seed = 2024
"#;

    #[test]
    fn minimal_file_defaults() {
        let cfg = ConfigFile::parse(FIG)
            .unwrap()
            .resolve(Path::new("."), &Overrides::default())
            .unwrap();
        let e = cfg.experiment;
        assert_eq!(e.initial_state, InitialState::Plus);
        assert_eq!(e.schedule.num_steps(), 300);
        assert_eq!((e.num_trajectories, e.base_seed), (50, 2024));
        assert_eq!((e.delta, e.delta_tilde), (0.1, 0.05));
        assert_eq!(e.convention, GradNormConvention::HsExact);
        assert!(e.basis_restriction.is_none() && cfg.jobs.is_none());
    }

    #[test]
    fn overrides_win() {
        let o = Overrides {
            steps: Some(3000),
            seed: Some(9),
            convention: Some(GradNormConvention::Variance),
            jobs: Some(2),
            ..Overrides::default()
        };
        let cfg = ConfigFile::parse(FIG)
            .unwrap()
            .resolve(Path::new("."), &o)
            .unwrap();
        assert_eq!(cfg.experiment.schedule.num_steps(), 3000);
        assert_eq!(cfg.experiment.base_seed, 9);
        assert_eq!(cfg.experiment.convention, GradNormConvention::Variance);
        assert_eq!(cfg.jobs, Some(2));
    }

    #[test]
    fn states_and_restrictions() {
        let text = r#"
[hamiltonian]
terms = """
0.5 ZZ
-0.3 XI
"""
[initial_state]
kind = "amplitudes"
amplitudes = [[1, 0], [0, 1], [0, 0], [0, 0]]
[schedule]
beta = 0.5
steps = 10
[ensemble]
restriction = ["XX", 3]
[bounds]
convention = "variance"
delta_tilde = 0.2
"#;
        let e = ConfigFile::parse(text)
            .unwrap()
            .resolve(Path::new("."), &Overrides::default())
            .unwrap()
            .experiment;
        assert_eq!(e.hamiltonian.num_qubits(), 2);
        assert_eq!(e.basis_restriction, Some(vec![4, 3]));
        assert_eq!(e.delta_tilde, 0.2);
        assert!(matches!(e.initial_state, InitialState::Amplitudes(ref a) if a.len() == 4));
    }

    #[test]
    fn rejects_bad_files() {
        let bad = [
            FIG.replace("steps = 300", "steps = 300\nstepz = 1"),
            FIG.replace("terms = [\"1.0 Z\"]", ""),
            FIG.replace("seed = 2024", "seed = 2024\nrestriction = [\"ZZ\"]"),
            format!("{FIG}\n[initial_state]\nkind = \"basis\"\n"),
            format!("{FIG}\n[bounds]\nconvention = \"other\"\n"),
            FIG.replace("1.0 Z", "1.0 ZZZZZZZ"),
        ];
        for text in &bad {
            let parsed = ConfigFile::parse(text)
                .and_then(|f| f.resolve(Path::new("."), &Overrides::default()));
            assert!(parsed.is_err(), "{text}");
        }
    }

    #[test]
    fn term_file_is_relative_to_config() {
        let dir = std::env::temp_dir().join(format!("itegrad-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("h.txt"), "# field\n1 Z\n").unwrap();
        let cfg = FIG.replace("terms = [\"1.0 Z\"]", "file = \"h.txt\"");
        std::fs::write(dir.join("run.toml"), cfg).unwrap();
        let loaded = load(&dir.join("run.toml"), &Overrides::default()).unwrap();
        assert_eq!(loaded.experiment.hamiltonian.num_qubits(), 1);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
