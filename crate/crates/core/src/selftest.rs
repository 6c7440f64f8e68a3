//! Constructive gauge extraction for the S-gate test.
//!
//! From a model that passes the S-gate protocol with probability `1 − ε`, the
//! measurement eigenbasis (ψ, ψ⊥) and the eigenbasis (φ, φ⊥) of
//! `Λ_s†(ψ) − Λ_{s⁻¹}†(ψ)` determine a gauge unitary `U = |ψ⟩⟨+| − i|ψ⊥⟩⟨−|`
//! under which every component of the model is `O(ε)`-close to the target.

use serde::Serialize;

use crate::channel::avg_gate_fidelity;
use crate::error::{Error, Result};
use crate::gates::{ket_minus, ket_plus, s_dagger, s_gate};
use crate::linalg::{c, eigh2, inner, outer, projector, r, spectral_norm_herm2, trace2, Ket, Mat2};
use crate::model::{GateLabel, QuantumModel};
use crate::protocol::{pass_probability, ProtocolSpec};
use crate::schema::{mat2_to_json, Mat2Json};

/// Eigenvalue gap below which an eigenbasis is treated as undefined.
pub const DEGENERACY_TOL: f64 = 1e-6;
/// Largest residual allowed in the phase convention after adjustment.
pub const PHASE_TOL: f64 = 1e-9;

/// Measurement and difference-operator eigenbases with their spectral data.
///
/// `M₊ = (1 − λ₊)ψ + λ₋ψ⊥` and `Λ_s†(ψ) − Λ_{s⁻¹}†(ψ) = η₊φ − η₋φ⊥`. Phases are
/// fixed so that `⟨ψ|φ⟩ = ⟨ψ⊥|φ⊥⟩ ≥ 0` and `−⟨ψ|φ⊥⟩ = ⟨ψ⊥|φ⟩ ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frames {
    pub psi: Ket,
    pub psi_perp: Ket,
    pub phi: Ket,
    pub phi_perp: Ket,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub eta_plus: f64,
    pub eta_minus: f64,
}

impl Frames {
    /// Largest deviation from orthonormality and from the phase convention.
    pub fn convention_residual(&self) -> f64 {
        let a = inner(&self.psi, &self.phi);
        let b = inner(&self.psi_perp, &self.phi);
        let a_abs = a.norm();
        let b_abs = b.norm();
        [
            inner(&self.psi, &self.psi_perp).norm(),
            inner(&self.phi, &self.phi_perp).norm(),
            (a - r(a_abs)).norm(),
            (inner(&self.psi_perp, &self.phi_perp) - r(a_abs)).norm(),
            (b - r(b_abs)).norm(),
            (-inner(&self.psi, &self.phi_perp) - r(b_abs)).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Unit-modulus phase of `z`.
fn phase_of(z: num_complex::Complex64) -> num_complex::Complex64 {
    z / r(z.norm())
}

pub fn extract_frames(model: &QuantumModel) -> Result<Frames> {
    let s = model.channel(GateLabel::S)?;
    let s_inv = model.channel(GateLabel::SInv)?;

    let meas = eigh2(model.povm().plus());
    if meas.gap() < DEGENERACY_TOL {
        return Err(Error::GaugeUndefinedMeasurement(meas.gap()));
    }
    let [psi_perp, psi] = meas.vectors;
    let lambda_plus = 1.0 - meas.values[1];
    let lambda_minus = meas.values[0];

    let psi_proj = projector(&psi);
    let diff = s.adjoint_map(&psi_proj) - s_inv.adjoint_map(&psi_proj);
    let de = eigh2(&diff);
    if de.gap() < DEGENERACY_TOL {
        return Err(Error::DegenerateDifference(de.gap()));
    }
    let [phi_perp, phi] = de.vectors;
    let eta_plus = de.values[1];
    let eta_minus = -de.values[0];

    let psi_phi = inner(&psi, &phi);
    let psi_perp_phi = inner(&psi_perp, &phi);
    if psi_phi.norm() < DEGENERACY_TOL || psi_perp_phi.norm() < DEGENERACY_TOL {
        return Err(Error::DegenerateFrameOverlap {
            psi_phi: psi_phi.norm(),
            psi_perp_phi: psi_perp_phi.norm(),
        });
    }

    // ψ keeps its phase; φ, ψ⊥, φ⊥ are rotated relative to it.
    let phi = phi * phase_of(psi_phi).conj();
    let psi_perp = psi_perp * phase_of(inner(&psi_perp, &phi));
    let phi_perp = phi_perp * phase_of(inner(&psi_perp, &phi_perp)).conj();

    let frames = Frames {
        psi,
        psi_perp,
        phi,
        phi_perp,
        lambda_plus,
        lambda_minus,
        eta_plus,
        eta_minus,
    };
    let residual = frames.convention_residual();
    if residual > PHASE_TOL {
        return Err(Error::PhaseConvention(residual));
    }
    Ok(frames)
}

/// `U = |ψ⟩⟨+| − i|ψ⊥⟩⟨−|`
pub fn gauge_unitary(frames: &Frames) -> Mat2 {
    outer(&frames.psi, &ket_plus()) - outer(&frames.psi_perp, &ket_minus()) * c(0.0, 1.0)
}

/// Distances between a model and the target under the extracted gauge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeReport {
    pub gauge: Mat2,
    pub favg_s: f64,
    pub favg_sinv: f64,
    pub state_fidelity: f64,
    pub meas_spectral_distance: f64,
    pub model_distance: f64,
    pub epsilon_fail: f64,
}

impl GaugeReport {
    pub fn infidelity_s(&self) -> f64 {
        1.0 - self.favg_s
    }

    pub fn infidelity_sinv(&self) -> f64 {
        1.0 - self.favg_sinv
    }

    pub fn state_infidelity(&self) -> f64 {
        1.0 - self.state_fidelity
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Serialize)]
struct GaugeReportJson {
    gauge: Mat2Json,
    favg_s: f64,
    favg_sinv: f64,
    state_fidelity: f64,
    meas_spectral_distance: f64,
    model_distance: f64,
    epsilon_fail: f64,
}

impl Serialize for GaugeReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GaugeReportJson {
            gauge: mat2_to_json(&self.gauge),
            favg_s: self.favg_s,
            favg_sinv: self.favg_sinv,
            state_fidelity: self.state_fidelity,
            meas_spectral_distance: self.meas_spectral_distance,
            model_distance: self.model_distance,
            epsilon_fail: self.epsilon_fail,
        }
        .serialize(s)
    }
}

/// Runs frame extraction and scores the model against the gauged target.
pub fn certify(model: &QuantumModel, spec: &ProtocolSpec) -> Result<GaugeReport> {
    let frames = extract_frames(model)?;
    let gauge = gauge_unitary(&frames);
    let conj = |m: Mat2| gauge * m * gauge.adjoint();

    let favg_s = avg_gate_fidelity(model.channel(GateLabel::S)?, &conj(s_gate()))?;
    let favg_sinv = avg_gate_fidelity(model.channel(GateLabel::SInv)?, &conj(s_dagger()))?;
    let target_plus = conj(projector(&ket_plus()));
    let state_fidelity = trace2(&(model.state().matrix() * target_plus)).re;
    let meas_spectral_distance = spectral_norm_herm2(&(model.povm().plus() - target_plus));
    let model_distance = [
        1.0 - favg_s,
        1.0 - favg_sinv,
        1.0 - state_fidelity,
        meas_spectral_distance,
    ]
    .into_iter()
    .fold(f64::NEG_INFINITY, f64::max);
    let epsilon_fail = 1.0 - pass_probability(model, spec)?;

    Ok(GaugeReport {
        gauge,
        favg_s,
        favg_sinv,
        state_fidelity,
        meas_spectral_distance,
        model_distance,
        epsilon_fail,
    })
}
