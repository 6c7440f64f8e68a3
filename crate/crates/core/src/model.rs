//! Quantum models: a prepared state, a labeled set of channels and a binary
//! measurement.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::ChoiChannel;
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{Ket, Mat2, VALIDATION_TOL};
use crate::povm::Povm;
use crate::state::QubitState;

/// Instruction label sent to the device. Text form: `s`, `S` (= s⁻¹), `h`, `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateLabel {
    S,
    SInv,
    H,
    T,
}

impl GateLabel {
    pub const ALL: [GateLabel; 4] = [GateLabel::S, GateLabel::SInv, GateLabel::H, GateLabel::T];

    pub fn symbol(self) -> char {
        match self {
            GateLabel::S => 's',
            GateLabel::SInv => 'S',
            GateLabel::H => 'h',
            GateLabel::T => 't',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            's' => Some(GateLabel::S),
            'S' => Some(GateLabel::SInv),
            'h' => Some(GateLabel::H),
            't' => Some(GateLabel::T),
            _ => None,
        }
    }

    /// The ideal gate behind the label.
    pub fn target_unitary(self) -> Mat2 {
        match self {
            GateLabel::S => gates::s_gate(),
            GateLabel::SInv => gates::s_dagger(),
            GateLabel::H => gates::hadamard(),
            GateLabel::T => gates::t_gate(),
        }
    }
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for GateLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next().and_then(GateLabel::from_symbol), chars.next()) {
            (Some(label), None) => Ok(label),
            _ => Err(Error::Parse(format!("unknown gate label `{s}`"))),
        }
    }
}

impl Serialize for GateLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GateLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NotHermitian,
    NotPsd,
    Trace,
    TracePreservation,
    Completeness,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::NotHermitian => "not Hermitian",
            ViolationKind::NotPsd => "not positive semidefinite",
            ViolationKind::Trace => "trace differs from 1",
            ViolationKind::TracePreservation => "not trace preserving",
            ViolationKind::Completeness => "effects do not sum to identity",
        };
        f.write_str(s)
    }
}

/// A violated invariant and by how much.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub component: String,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

impl Violation {
    pub fn new(component: &str, kind: ViolationKind, magnitude: f64) -> Self {
        Self {
            component: component.to_string(),
            kind,
            magnitude,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (by {:.3e})",
            self.component, self.kind, self.magnitude
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumModel {
    state: QubitState,
    channels: BTreeMap<GateLabel, ChoiChannel>,
    povm: Povm,
}

impl QuantumModel {
    pub fn new(state: QubitState, channels: BTreeMap<GateLabel, ChoiChannel>, povm: Povm) -> Self {
        Self {
            state,
            channels,
            povm,
        }
    }

    /// Pure-state preparation, unitary gates and the projective measurement
    /// onto `measured`.
    pub fn from_unitaries(
        prepared: &Ket,
        gates: &[(GateLabel, Mat2)],
        measured: &Ket,
    ) -> Result<Self> {
        let state = QubitState::pure(prepared)?;
        let channels = gates
            .iter()
            .map(|(label, u)| Ok((*label, ChoiChannel::from_unitary(u)?)))
            .collect::<Result<_>>()?;
        let unit = measured / crate::linalg::r(measured.norm());
        Ok(Self::new(state, channels, Povm::projective(&unit)))
    }

    /// (|+⟩⟨+|, (S, S†), (|+⟩⟨+|, |−⟩⟨−|))
    pub fn s_gate_target() -> Self {
        Self::from_unitaries(
            &gates::ket_plus(),
            &[
                (GateLabel::S, gates::s_gate()),
                (GateLabel::SInv, gates::s_dagger()),
            ],
            &gates::ket_plus(),
        )
        .expect("ideal gates are unitary")
    }

    /// (|+⟩⟨+|, (S, S†, H, T), (|+⟩⟨+|, |−⟩⟨−|))
    pub fn universal_target() -> Self {
        Self::from_unitaries(
            &gates::ket_plus(),
            &GateLabel::ALL.map(|l| (l, l.target_unitary())),
            &gates::ket_plus(),
        )
        .expect("ideal gates are unitary")
    }

    pub fn state(&self) -> &QubitState {
        &self.state
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn channels(&self) -> &BTreeMap<GateLabel, ChoiChannel> {
        &self.channels
    }

    pub fn channel(&self, label: GateLabel) -> Result<&ChoiChannel> {
        self.channels
            .get(&label)
            .ok_or(Error::MissingChannel(label))
    }

    pub fn with_state(mut self, state: QubitState) -> Self {
        self.state = state;
        self
    }

    pub fn with_povm(mut self, povm: Povm) -> Self {
        self.povm = povm;
        self
    }

    pub fn with_channel(mut self, label: GateLabel, channel: ChoiChannel) -> Self {
        self.channels.insert(label, channel);
        self
    }

    pub fn with_unitary(self, label: GateLabel, u: &Mat2) -> Result<Self> {
        Ok(self.with_channel(label, ChoiChannel::from_unitary(u)?))
    }

    /// Applies the basis change `V`: ρ ↦ VρV†, Λ ↦ V Λ(V†·V) V†, M ↦ VMV†.
    /// Observable statistics are unchanged.
    pub fn conjugated_by(&self, v: &Mat2) -> Result<Self> {
        let forward = ChoiChannel::from_unitary(v)?;
        let back = ChoiChannel::from_unitary(&v.adjoint())?;
        let rotate = |m: &Mat2| v * m * v.adjoint();
        Ok(Self {
            state: QubitState::from_raw(rotate(self.state.matrix())),
            channels: self
                .channels
                .iter()
                .map(|(l, ch)| (*l, back.then(ch).then(&forward)))
                .collect(),
            povm: Povm::from_raw(rotate(self.povm.plus()), rotate(self.povm.minus())),
        })
    }

    /// Entry-wise complex conjugate of every component (computational basis).
    pub fn complex_conjugate(&self) -> Self {
        let conj = |m: &Mat2| m.map(|z| z.conj());
        Self {
            state: QubitState::from_raw(conj(self.state.matrix())),
            channels: self
                .channels
                .iter()
                .map(|(l, ch)| (*l, ch.conjugate()))
                .collect(),
            povm: Povm::from_raw(conj(self.povm.plus()), conj(self.povm.minus())),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Every violated invariant of the model's components at the validation
/// tolerance. Empty means valid.
pub fn validate(model: &QuantumModel) -> Vec<Violation> {
    validate_with_tol(model, VALIDATION_TOL)
}

pub fn validate_with_tol(model: &QuantumModel, tol: f64) -> Vec<Violation> {
    let mut out = model.state.violations("state", tol);
    for (label, ch) in &model.channels {
        out.extend(ch.violations(&format!("channel[{label}]"), tol));
    }
    out.extend(model.povm.violations(tol));
    out
}
