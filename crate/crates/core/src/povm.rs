use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigvals2, hermiticity_defect2, max_abs2, projector, Ket, Mat2, VALIDATION_TOL,
};
use crate::model::{Violation, ViolationKind};
use crate::schema::{mat2_from_json, mat2_to_json, Mat2Json};

/// Binary measurement with effects M₊ and M₋.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Povm {
    m_plus: Mat2,
    m_minus: Mat2,
}

impl Povm {
    pub fn try_new(m_plus: Mat2, m_minus: Mat2) -> Result<Self> {
        let povm = Self { m_plus, m_minus };
        match povm.violations(VALIDATION_TOL).into_iter().next() {
            None => Ok(povm),
            Some(v) => Err(Error::invalid("povm", v.to_string())),
        }
    }

    pub fn from_raw(m_plus: Mat2, m_minus: Mat2) -> Self {
        Self { m_plus, m_minus }
    }

    /// (M₊, 𝟙 − M₊)
    pub fn from_plus(m_plus: Mat2) -> Self {
        Self {
            m_plus,
            m_minus: Mat2::identity() - m_plus,
        }
    }

    /// Projective measurement (|v⟩⟨v|, 𝟙 − |v⟩⟨v|) for a unit ket.
    pub fn projective(v: &Ket) -> Self {
        Self::from_plus(projector(v))
    }

    pub fn plus(&self) -> &Mat2 {
        &self.m_plus
    }

    pub fn minus(&self) -> &Mat2 {
        &self.m_minus
    }

    pub fn violations(&self, tol: f64) -> Vec<Violation> {
        let mut out = Vec::new();
        for (name, m) in [
            ("povm.m_plus", &self.m_plus),
            ("povm.m_minus", &self.m_minus),
        ] {
            let herm = hermiticity_defect2(m);
            if herm > tol {
                out.push(Violation::new(name, ViolationKind::NotHermitian, herm));
            }
            let min = eigvals2(m)[0];
            if min < -tol {
                out.push(Violation::new(name, ViolationKind::NotPsd, -min));
            }
        }
        let sum = max_abs2(&(self.m_plus + self.m_minus - Mat2::identity()));
        if sum > tol {
            out.push(Violation::new("povm", ViolationKind::Completeness, sum));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PovmJson {
    m_plus: Mat2Json,
    m_minus: Mat2Json,
}

impl Serialize for Povm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PovmJson {
            m_plus: mat2_to_json(&self.m_plus),
            m_minus: mat2_to_json(&self.m_minus),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PovmJson::deserialize(d)?;
        let plus = mat2_from_json(&j.m_plus).map_err(serde::de::Error::custom)?;
        let minus = mat2_from_json(&j.m_minus).map_err(serde::de::Error::custom)?;
        Ok(Povm::from_raw(plus, minus))
    }
}
