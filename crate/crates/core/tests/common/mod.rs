//! Random fixtures shared by the integration tests.
#![allow(dead_code)]

use gatecert_core::gates::{ket_minus, ket_plus};
use gatecert_core::linalg::{c, projector, r, trace4, Ket, Mat2, Mat4};
use gatecert_core::randmodels::random_su2_unitary;
use gatecert_core::{ChoiChannel, GateLabel, Povm, QuantumModel, QubitState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(rng: &mut ChaCha8Rng) -> gatecert_core::C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian4(rng: &mut ChaCha8Rng) -> Mat4 {
    Mat4::from_fn(|_, _| gauss(rng))
}

pub fn gaussian_ket(rng: &mut ChaCha8Rng) -> Ket {
    Ket::new(gauss(rng), gauss(rng))
}

pub fn random_psd4(rng: &mut ChaCha8Rng) -> Mat4 {
    let g = gaussian4(rng);
    g * g.adjoint()
}

/// Random SU(2) element with a random global phase.
pub fn random_unitary(rng: &mut ChaCha8Rng) -> Mat2 {
    let u = random_su2_unitary(rng, 0.0, std::f64::consts::PI);
    u * gatecert_core::C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Channel from a random Stinespring isometry (first two columns of a random
/// 4×4 unitary, environment as the low index bit).
pub fn random_channel(rng: &mut ChaCha8Rng) -> ChoiChannel {
    let q = gaussian4(rng).qr().q();
    let kraus: Vec<Mat2> = (0..2)
        .map(|k| Mat2::from_fn(|a, i| q[(2 * a + k, 2 * i)]))
        .collect();
    ChoiChannel::from_kraus(&kraus).expect("isometry gives a channel")
}

pub fn random_state(rng: &mut ChaCha8Rng) -> QubitState {
    let g = Mat2::from_fn(|_, _| gauss(rng));
    let m = g * g.adjoint();
    let tr = m.trace();
    QubitState::try_new(m / tr).expect("normalized PSD")
}

pub fn random_povm(rng: &mut ChaCha8Rng) -> Povm {
    let u = random_unitary(rng);
    let (a, b) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    let d = Mat2::new(r(a), r(0.0), r(0.0), r(b));
    Povm::from_plus(u * d * u.adjoint())
}

/// S-gate model with every component drawn independently.
pub fn random_model(rng: &mut ChaCha8Rng) -> QuantumModel {
    QuantumModel::s_gate_target()
        .with_state(random_state(rng))
        .with_channel(GateLabel::S, random_channel(rng))
        .with_channel(GateLabel::SInv, random_channel(rng))
        .with_povm(random_povm(rng))
}

/// Ideal S-gate model except `M₊ = q|+⟩⟨+| + (1 − q)|−⟩⟨−|`: every
/// repetition passes with probability exactly `q`.
pub fn leaky_measurement_model(q: f64) -> QuantumModel {
    let m = projector(&ket_plus()) * r(q) + projector(&ket_minus()) * r(1.0 - q);
    QuantumModel::s_gate_target().with_povm(Povm::from_plus(m))
}

/// Splits a PSD 4×4 matrix into its 2×2 blocks `[[A, B], [B†, C]]`.
pub fn blocks(g: &Mat4) -> (Mat2, Mat2, Mat2) {
    let blk = |r0: usize, c0: usize| Mat2::from_fn(|i, j| g[(r0 + i, c0 + j)]);
    (blk(0, 0), blk(0, 2), blk(2, 2))
}

pub fn normalized_psd4(rng: &mut ChaCha8Rng) -> Mat4 {
    let g = random_psd4(rng);
    let t = trace4(&g);
    g / t
}
