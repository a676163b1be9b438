//! Fixtures shared by the benchmarks.

use itegrad::{HamiltonianSpec, ScheduleConfig, StateVector};

/// Nearest-neighbour transverse-field Ising chain on `n` qubits.
pub fn ising_chain(n: usize, field: f64) -> HamiltonianSpec {
    let mut text = String::new();
    for q in 0..n.saturating_sub(1) {
        let mut letters = vec!['I'; n];
        letters[q] = 'Z';
        letters[q + 1] = 'Z';
        text.push_str(&format!("-1 {}\n", letters.iter().collect::<String>()));
    }
    for q in 0..n {
        let mut letters = vec!['I'; n];
        letters[q] = 'X';
        text.push_str(&format!("{field} {}\n", letters.iter().collect::<String>()));
    }
    HamiltonianSpec::parse(&text, n.max(1)).expect("valid chain")
}

pub fn start(n: usize) -> StateVector {
    StateVector::plus(n)
}

pub fn schedule(beta: f64, steps: usize) -> ScheduleConfig {
    ScheduleConfig::new(beta, steps).expect("valid schedule")
}
