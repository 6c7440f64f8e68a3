//! Random noisy versions of the S-gate target model.
//!
//! Each component gets an independent unitary kick `exp(α·u)` with `u` a unit
//! direction in su(2) and `α` uniform in the configured range. The
//! depolarizing and amplitude-damping kinds additionally apply their noise
//! channel after preparation, after every gate and before the measurement.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::ChoiChannel;
use crate::error::{Error, Result};
use crate::gates::{ket_plus, pauli_x, pauli_y, pauli_z, s_dagger, s_gate};
use crate::linalg::{c, mat2, projector, r, Mat2};
use crate::model::{GateLabel, QuantumModel};
use crate::povm::Povm;
use crate::rng::{stream, Domain};
use crate::state::QubitState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NoiseKind {
    Unitary,
    Depolarizing { p: f64 },
    AmplitudeDamping { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    #[serde(flatten)]
    pub kind: NoiseKind,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn unitary(alpha_min: f64, alpha_max: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::Unitary,
            alpha_min,
            alpha_max,
            seed,
        }
    }

    pub fn with_kind(mut self, kind: NoiseKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let range_ok = (0.0..=1.0).contains(&self.alpha_min)
            && (0.0..=1.0).contains(&self.alpha_max)
            && self.alpha_min <= self.alpha_max;
        if !range_ok {
            return Err(Error::invalid(
                "noise config",
                format!(
                    "α-range [{}, {}] is not inside [0, 1]",
                    self.alpha_min, self.alpha_max
                ),
            ));
        }
        match self.kind {
            NoiseKind::Unitary => Ok(()),
            NoiseKind::Depolarizing { p } => check_unit("p", p),
            NoiseKind::AmplitudeDamping { gamma } => check_unit("gamma", gamma),
        }
    }

    fn noise_channel(&self) -> Result<Option<ChoiChannel>> {
        match self.kind {
            NoiseKind::Unitary => Ok(None),
            NoiseKind::Depolarizing { p } => depolarizing_channel(p).map(Some),
            NoiseKind::AmplitudeDamping { gamma } => amplitude_damping_channel(gamma).map(Some),
        }
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

/// `exp(angle · i n·σ) = cos(angle) 𝟙 + i sin(angle) n·σ` for a unit axis `n`.
pub fn su2_exp(axis: [f64; 3], angle: f64) -> Mat2 {
    let generator = pauli_x() * r(axis[0]) + pauli_y() * r(axis[1]) + pauli_z() * r(axis[2]);
    Mat2::identity() * r(angle.cos()) + generator * c(0.0, angle.sin())
}

/// Uniform direction on the unit 2-sphere from normalized Gaussians.
pub fn random_axis<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if norm > 1e-12 {
            return v.map(|x| x / norm);
        }
    }
}

/// `exp(α u)` with `u = i n·σ`, `n` uniform on the sphere and `α` uniform in
/// `[alpha_min, alpha_max]`.
pub fn random_su2_unitary<R: Rng + ?Sized>(rng: &mut R, alpha_min: f64, alpha_max: f64) -> Mat2 {
    let axis = random_axis(rng);
    let alpha = if alpha_max > alpha_min {
        rng.gen_range(alpha_min..=alpha_max)
    } else {
        alpha_min
    };
    su2_exp(axis, alpha)
}

/// Sample `index` of the model family described by `cfg`.
pub fn random_noisy_model(cfg: &NoiseConfig, index: u64) -> QuantumModel {
    try_random_noisy_model(cfg, index).expect("noise config must be validated")
}

pub fn try_random_noisy_model(cfg: &NoiseConfig, index: u64) -> Result<QuantumModel> {
    cfg.validate()?;
    let mut rng = stream(cfg.seed, Domain::ModelSample, index);
    let mut kick = || random_su2_unitary(&mut rng, cfg.alpha_min, cfg.alpha_max);
    let u_state = kick();
    let u_s = kick();
    let u_sinv = kick();
    let u_meas = kick();

    let plus = projector(&ket_plus());
    let mut rho = u_state * plus * u_state.adjoint();
    let mut ch_s = ChoiChannel::from_unitary(&(u_s * s_gate()))?;
    let mut ch_sinv = ChoiChannel::from_unitary(&(u_sinv * s_dagger()))?;
    let mut m_plus = u_meas * plus * u_meas.adjoint();

    if let Some(noise) = cfg.noise_channel()? {
        rho = noise.map(&rho);
        ch_s = ch_s.then(&noise);
        ch_sinv = ch_sinv.then(&noise);
        m_plus = noise.adjoint_map(&m_plus);
    }

    Ok(QuantumModel::s_gate_target()
        .with_state(QubitState::from_raw(rho))
        .with_channel(GateLabel::S, ch_s)
        .with_channel(GateLabel::SInv, ch_sinv)
        .with_povm(Povm::from_plus(m_plus)))
}

/// `ρ ↦ (1 − p) ρ + p Tr[ρ] 𝟙/2`; `p = 1` erases the input.
pub fn depolarizing_channel(p: f64) -> Result<ChoiChannel> {
    check_unit("p", p)?;
    Ok(ChoiChannel::from_map(|x| {
        x * r(1.0 - p) + Mat2::identity() * (crate::linalg::trace2(x) * (p / 2.0))
    }))
}

/// Kraus operators `[[1, 0], [0, √(1−γ)]]` and `[[0, √γ], [0, 0]]`.
pub fn amplitude_damping_channel(gamma: f64) -> Result<ChoiChannel> {
    check_unit("gamma", gamma)?;
    ChoiChannel::from_kraus(&[
        mat2(r(1.0), r(0.0), r(0.0), r((1.0 - gamma).sqrt())),
        mat2(r(0.0), r(gamma.sqrt()), r(0.0), r(0.0)),
    ])
}
