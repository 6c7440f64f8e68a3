//! Shared inputs for the criterion benchmarks.

use gatecert_core::randmodels::{random_noisy_model, NoiseConfig};
use gatecert_core::QuantumModel;

/// A reproducible batch of unitary-noise models.
pub fn noisy_models(count: usize, seed: u64) -> Vec<QuantumModel> {
    let cfg = NoiseConfig::unitary(0.0, 1.0, seed);
    (0..count as u64)
        .map(|i| random_noisy_model(&cfg, i))
        .collect()
}
