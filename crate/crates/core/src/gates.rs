//! Standard single-qubit kets and gates.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use crate::linalg::{c, ket, mat2, r, Ket, Mat2, C64};

pub fn ket_zero() -> Ket {
    ket(r(1.0), r(0.0))
}

pub fn ket_one() -> Ket {
    ket(r(0.0), r(1.0))
}

pub fn ket_plus() -> Ket {
    ket(r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2))
}

pub fn ket_minus() -> Ket {
    ket(r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2))
}

pub fn identity() -> Mat2 {
    Mat2::identity()
}

pub fn pauli_x() -> Mat2 {
    mat2(r(0.0), r(1.0), r(1.0), r(0.0))
}

pub fn pauli_y() -> Mat2 {
    mat2(r(0.0), c(0.0, -1.0), c(0.0, 1.0), r(0.0))
}

pub fn pauli_z() -> Mat2 {
    mat2(r(1.0), r(0.0), r(0.0), r(-1.0))
}

pub fn hadamard() -> Mat2 {
    mat2(r(1.0), r(1.0), r(1.0), r(-1.0)) * r(FRAC_1_SQRT_2)
}

/// diag(1, e^{iφ})
pub fn phase(angle: f64) -> Mat2 {
    mat2(r(1.0), r(0.0), r(0.0), C64::from_polar(1.0, angle))
}

/// S = diag(1, i)
pub fn s_gate() -> Mat2 {
    mat2(r(1.0), r(0.0), r(0.0), c(0.0, 1.0))
}

/// S† = diag(1, −i)
pub fn s_dagger() -> Mat2 {
    mat2(r(1.0), r(0.0), r(0.0), c(0.0, -1.0))
}

/// T = diag(1, e^{iπ/4})
pub fn t_gate() -> Mat2 {
    phase(FRAC_PI_4)
}

/// ZT = diag(1, −e^{iπ/4}), the other square root of S up to global phase.
pub fn zt_gate() -> Mat2 {
    pauli_z() * t_gate()
}

/// |⟨+|T|+⟩|², the outcome probability that would separate T from ZT in an
/// estimation-based variant of the protocol. ZT gives `1 − T_PLUS_OVERLAP`.
pub const T_PLUS_OVERLAP: f64 = 0.5 + 0.5 * FRAC_1_SQRT_2;
