//! Qubit channels in Choi form.
//!
//! The Choi matrix is `½ Σ_ij Λ(|i⟩⟨j|) ⊗ |i⟩⟨j|`, output factor first, so entry
//! `(2a + i, 2b + j)` equals `½ Λ(|i⟩⟨j|)[a, b]`. With this ordering a unitary
//! channel has Choi vector `(U ⊗ 𝟙)(|00⟩ + |11⟩)/√2`, i.e. the row-major entries
//! of `U/√2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigvals4, hermiticity_defect2, hermiticity_defect4, r, spectral_norm_herm2, trace4,
    unitarity_defect, Ket4, Mat2, Mat4, VALIDATION_TOL,
};
use crate::model::{Violation, ViolationKind};
use crate::schema::{mat4_from_json, mat4_to_json, Mat4Json};
use crate::state::QubitState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Mat4Json", into = "Mat4Json")]
pub struct ChoiChannel {
    choi: Mat4,
}

impl ChoiChannel {
    /// Wraps a Choi matrix after checking it is Hermitian, PSD and trace preserving.
    pub fn try_new(choi: Mat4) -> Result<Self> {
        let ch = Self { choi };
        match ch.violations("channel", VALIDATION_TOL).into_iter().next() {
            None => Ok(ch),
            Some(v) => Err(Error::invalid("channel", v.to_string())),
        }
    }

    pub fn from_raw(choi: Mat4) -> Self {
        Self { choi }
    }

    pub fn identity() -> Self {
        Self::from_map(|x| *x)
    }

    /// Builds the Choi matrix of an arbitrary linear map on 2×2 operators.
    pub fn from_map(map: impl Fn(&Mat2) -> Mat2) -> Self {
        let mut choi = Mat4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                let mut unit = Mat2::zeros();
                unit[(i, j)] = r(1.0);
                let image = map(&unit);
                for a in 0..2 {
                    for b in 0..2 {
                        choi[(2 * a + i, 2 * b + j)] = image[(a, b)] * 0.5;
                    }
                }
            }
        }
        Self { choi }
    }

    pub fn from_unitary(u: &Mat2) -> Result<Self> {
        let defect = unitarity_defect(u);
        if defect > VALIDATION_TOL {
            return Err(Error::NotUnitary(defect));
        }
        let v = choi_vector(u);
        Ok(Self {
            choi: v * v.adjoint(),
        })
    }

    pub fn from_kraus(ops: &[Mat2]) -> Result<Self> {
        let completeness = ops
            .iter()
            .fold(Mat2::zeros(), |acc, k| acc + k.adjoint() * k);
        let defect = crate::linalg::max_abs2(&(completeness - Mat2::identity()));
        if defect > VALIDATION_TOL {
            return Err(Error::invalid(
                "kraus operators",
                format!("Σ K†K deviates from 𝟙 by {defect:.3e}"),
            ));
        }
        Ok(Self::from_map(|x| {
            ops.iter()
                .fold(Mat2::zeros(), |acc, k| acc + k * x * k.adjoint())
        }))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.choi
    }

    /// Λ(x) for any 2×2 operator x: `Λ(x)[a, b] = 2 Σ_ij x[i, j] C[(a,i), (b,j)]`.
    pub fn map(&self, x: &Mat2) -> Mat2 {
        Mat2::from_fn(|a, b| {
            let mut acc = r(0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc += x[(i, j)] * self.choi[(2 * a + i, 2 * b + j)];
                }
            }
            acc * 2.0
        })
    }

    /// Λ†(e), defined by `Tr[e Λ(x)] = Tr[Λ†(e) x]`.
    pub fn adjoint_map(&self, e: &Mat2) -> Mat2 {
        Mat2::from_fn(|j, i| {
            let mut acc = r(0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += e[(b, a)] * self.choi[(2 * a + i, 2 * b + j)];
                }
            }
            acc * 2.0
        })
    }

    /// Choi matrix of `second ∘ self`.
    pub fn then(&self, second: &ChoiChannel) -> ChoiChannel {
        Self::from_map(|x| second.map(&self.map(x)))
    }

    /// Tr over the output factor.
    pub fn output_partial_trace(&self) -> Mat2 {
        Mat2::from_fn(|i, j| self.choi[(i, j)] + self.choi[(2 + i, 2 + j)])
    }

    /// Tr[C₁ C₂]; real for Hermitian inputs.
    pub fn overlap(&self, other: &ChoiChannel) -> f64 {
        trace4(&(self.choi * other.choi)).re
    }

    /// Entry-wise complex conjugate channel x ↦ Λ(x*)*.
    pub fn conjugate(&self) -> ChoiChannel {
        Self {
            choi: self.choi.map(|z| z.conj()),
        }
    }

    pub fn violations(&self, component: &str, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        let herm = hermiticity_defect4(&self.choi);
        if herm > tol {
            out.push(Violation::new(component, ViolationKind::NotHermitian, herm));
        }
        let min = eigvals4(&self.choi)[0];
        if min < -tol {
            out.push(Violation::new(component, ViolationKind::NotPsd, -min));
        }
        // Largest trace deficit over input states: 2‖Tr_out C − 𝟙/2‖∞.
        let deviation = self.output_partial_trace() - Mat2::identity() * r(0.5);
        let herm_dev = (deviation + deviation.adjoint()) * r(0.5);
        let tp = 2.0 * spectral_norm_herm2(&herm_dev);
        if tp > tol {
            out.push(Violation::new(
                component,
                ViolationKind::TracePreservation,
                tp,
            ));
        }
        out
    }
}

impl From<ChoiChannel> for Mat4Json {
    fn from(ch: ChoiChannel) -> Self {
        mat4_to_json(&ch.choi)
    }
}

impl TryFrom<Mat4Json> for ChoiChannel {
    type Error = Error;
    fn try_from(j: Mat4Json) -> Result<Self> {
        mat4_from_json(&j).map(ChoiChannel::from_raw)
    }
}

/// `(U ⊗ 𝟙)(|00⟩ + |11⟩)/√2`
pub(crate) fn choi_vector(u: &Mat2) -> Ket4 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket4::new(u[(0, 0)] * s, u[(0, 1)] * s, u[(1, 0)] * s, u[(1, 1)] * s)
}

pub fn choi_of_unitary(u: &Mat2) -> Result<ChoiChannel> {
    ChoiChannel::from_unitary(u)
}

/// Λ(ρ); the output is re-validated as a state.
pub fn apply_channel(ch: &ChoiChannel, rho: &QubitState) -> Result<QubitState> {
    if let Some(v) = ch.violations("channel", VALIDATION_TOL).into_iter().next() {
        return Err(Error::invalid("channel", v.to_string()));
    }
    if let Some(v) = rho.violations("state", VALIDATION_TOL).into_iter().next() {
        return Err(Error::invalid("state", v.to_string()));
    }
    QubitState::try_new(ch.map(rho.matrix()))
}

pub fn adjoint_apply(ch: &ChoiChannel, effect: &Mat2) -> Result<Mat2> {
    let herm = hermiticity_defect2(effect);
    if herm > VALIDATION_TOL {
        return Err(Error::invalid(
            "effect",
            format!("not Hermitian (defect {herm:.3e})"),
        ));
    }
    Ok(ch.adjoint_map(effect))
}

/// Choi matrix of `second ∘ first`.
pub fn compose(first: &ChoiChannel, second: &ChoiChannel) -> ChoiChannel {
    first.then(second)
}

/// Tr[Choi(Λ) Choi(U)], the entanglement fidelity with the unitary channel of U.
pub fn entanglement_fidelity(ch: &ChoiChannel, target_unitary: &Mat2) -> Result<f64> {
    let defect = unitarity_defect(target_unitary);
    if defect > VALIDATION_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let v = choi_vector(target_unitary);
    Ok((v.adjoint() * ch.matrix() * v)[(0, 0)].re)
}

/// F_avg(Λ, U) = ⅔ Tr[Choi(Λ) Choi(U)] + ⅓
pub fn avg_gate_fidelity(ch: &ChoiChannel, target_unitary: &Mat2) -> Result<f64> {
    Ok(2.0 / 3.0 * entanglement_fidelity(ch, target_unitary)? + 1.0 / 3.0)
}

/// Upper bound `2√6 √(1 − F_avg)` on the diamond distance to a unitary channel.
pub fn diamond_bound(favg: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&favg) {
        return Err(Error::OutOfRange {
            name: "favg",
            value: favg,
            range: "[0, 1]",
        });
    }
    Ok(2.0 * 6f64.sqrt() * (1.0 - favg).sqrt())
}
