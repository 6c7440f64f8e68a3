use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigvals2, hermiticity_defect2, projector, r, trace2, Ket, Mat2, VALIDATION_TOL,
};
use crate::model::{Violation, ViolationKind};
use crate::schema::{mat2_from_json, mat2_to_json, Mat2Json};

/// Density operator of a single qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat2Json", into = "Mat2Json")]
pub struct QubitState {
    mat: Mat2,
}

impl QubitState {
    /// Wraps `mat` after checking Hermiticity, unit trace and positivity.
    pub fn try_new(mat: Mat2) -> Result<Self> {
        let state = Self { mat };
        match state.violations("state", VALIDATION_TOL).into_iter().next() {
            None => Ok(state),
            Some(v) => Err(Error::invalid("state", v.to_string())),
        }
    }

    /// Wraps `mat` without validation; see [`QubitState::violations`].
    pub fn from_raw(mat: Mat2) -> Self {
        Self { mat }
    }

    pub fn pure(v: &Ket) -> Result<Self> {
        let norm = v.norm();
        if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
            return Err(Error::DegenerateKet);
        }
        Ok(Self {
            mat: projector(&(v / r(norm))),
        })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: Mat2::identity() * r(0.5),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.mat
    }

    /// Tr[ρ²]
    pub fn purity(&self) -> f64 {
        trace2(&(self.mat * self.mat)).re
    }

    pub fn violations(&self, component: &str, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        let herm = hermiticity_defect2(&self.mat);
        if herm > tol {
            out.push(Violation::new(component, ViolationKind::NotHermitian, herm));
        }
        let tr = (trace2(&self.mat) - r(1.0)).norm();
        if tr > tol {
            out.push(Violation::new(component, ViolationKind::Trace, tr));
        }
        let min = eigvals2(&self.mat)[0];
        if min < -tol {
            out.push(Violation::new(component, ViolationKind::NotPsd, -min));
        }
        out
    }
}

impl From<QubitState> for Mat2Json {
    fn from(s: QubitState) -> Self {
        mat2_to_json(&s.mat)
    }
}

impl TryFrom<Mat2Json> for QubitState {
    type Error = Error;
    fn try_from(j: Mat2Json) -> Result<Self> {
        mat2_from_json(&j).map(QubitState::from_raw)
    }
}

/// Normalized projector |v⟩⟨v|/⟨v|v⟩.
pub fn state_from_ket(amplitudes: &Ket) -> Result<QubitState> {
    QubitState::pure(amplitudes)
}
