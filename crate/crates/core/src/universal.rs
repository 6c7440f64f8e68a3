//! Exact verification of the universal gate set {s, s⁻¹, h, t}.
//!
//! A model that passes every universal sequence with certainty is shown to be
//! the target up to a gauge unitary, up to a global complex conjugation, and up
//! to the T / ZT ambiguity which no sequence in the protocol can resolve.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::channel::ChoiChannel;
use crate::gates::{hadamard, pauli_x, s_dagger, s_gate};
use crate::linalg::{c, eigh4, fix_phase_mat2, inner, projector, r, trace2, Ket, Mat2, C64};
use crate::model::{GateLabel, QuantumModel};
use crate::protocol::{s_gate_spec, sequence_success_probability, universal_spec};
use crate::schema::{mat2_to_json, Mat2Json};
use crate::selftest::{certify, extract_frames, gauge_unitary};

pub const DEFAULT_TOL: f64 = 1e-7;
/// Purity threshold for [`check_purity_after_double`].
pub const PURITY_TOL: f64 = 1e-9;

/// Unitary of a rank-1 Choi matrix, global phase fixed so the largest entry is
/// real positive. `None` if no eigenvalue reaches `1 − tol`.
pub fn extract_unitary(ch: &ChoiChannel, tol: f64) -> Option<Mat2> {
    let (values, vectors) = eigh4(ch.matrix());
    if values[3] < 1.0 - tol {
        return None;
    }
    let v = vectors[3];
    let s = r(std::f64::consts::SQRT_2);
    let u = Mat2::new(v[0] * s, v[1] * s, v[2] * s, v[3] * s);
    Some(fix_phase_mat2(&u))
}

/// Whether `Λ∘Λ(|ψ⟩⟨ψ|)` is pure.
pub fn check_purity_after_double(ch: &ChoiChannel, psi: &Ket) -> bool {
    let rho = ch.map(&ch.map(&projector(psi)));
    trace2(&(rho * rho)).re >= 1.0 - PURITY_TOL
}

/// `|1 + 2e^{iθ} − e^{2iθ}|`, equal to its maximum `2√2` only at `e^{iθ} = ±i`.
pub fn hadamard_phase_condition(theta: f64) -> f64 {
    let z = C64::from_polar(1.0, theta);
    (r(1.0) + z * 2.0 - z * z).norm()
}

/// `|Tr(A†B)|² / 4`: one for unitaries equal up to a global phase.
fn phase_insensitive_overlap(a: &Mat2, b: &Mat2) -> f64 {
    trace2(&(a.adjoint() * b)).norm_sqr() / 4.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UniversalVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TBranch {
    T,
    ZT,
    #[serde(rename = "undetermined")]
    Undetermined,
}

impl std::fmt::Display for TBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TBranch::T => "T",
            TBranch::ZT => "ZT",
            TBranch::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalReport {
    pub verdict: UniversalVerdict,
    /// Every check that ran, in order. Later stages are skipped once one fails.
    pub checks: Vec<Check>,
    pub gauge: Option<Mat2>,
    pub conjugated: bool,
    pub t_branch: TBranch,
    pub unitaries: BTreeMap<GateLabel, Option<Mat2>>,
    /// Relative phase of the extracted h in the φ/φ⊥ frame.
    pub theta: Option<f64>,
    /// Relative phase of the gauged t, after undoing the conjugation.
    pub t_phase: Option<f64>,
}

impl UniversalReport {
    pub fn passed(&self) -> bool {
        self.verdict == UniversalVerdict::Pass
    }

    pub fn failing_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl Serialize for UniversalReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let failing: Vec<&str> = self
            .failing_checks()
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        let unitaries: BTreeMap<String, Option<Mat2Json>> = self
            .unitaries
            .iter()
            .map(|(l, u)| (l.to_string(), u.as_ref().map(mat2_to_json)))
            .collect();
        let mut st = s.serialize_struct("UniversalReport", 9)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("failing_checks", &failing)?;
        st.serialize_field("checks", &self.checks)?;
        st.serialize_field("gauge", &self.gauge.as_ref().map(mat2_to_json))?;
        st.serialize_field("conjugated", &self.conjugated)?;
        st.serialize_field("t_branch", &self.t_branch)?;
        st.serialize_field("unitaries", &unitaries)?;
        st.serialize_field("theta", &self.theta)?;
        st.serialize_field("t_phase", &self.t_phase)?;
        st.end()
    }
}

struct Builder {
    report: UniversalReport,
}

impl Builder {
    /// Records a check and returns whether it passed.
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.report.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    fn finish(mut self, passed: bool) -> UniversalReport {
        if !passed {
            self.report.verdict = UniversalVerdict::Fail;
            self.report.t_branch = TBranch::Undetermined;
        }
        self.report
    }
}

/// Checks that the model is the universal target up to gauge, complex
/// conjugation and the T / ZT branch.
///
/// Probabilities are compared against `1 − tol`; phases and off-diagonal
/// amplitudes, which move as the square root of a probability, against `√tol`.
pub fn verify_universal(model: &QuantumModel, tol: f64) -> UniversalReport {
    let mut b = Builder {
        report: UniversalReport {
            verdict: UniversalVerdict::Pass,
            checks: Vec::new(),
            gauge: None,
            conjugated: false,
            t_branch: TBranch::Undetermined,
            unitaries: BTreeMap::new(),
            theta: None,
            t_phase: None,
        },
    };
    let ok = run(model, tol, &mut b);
    b.finish(ok)
}

fn run(model: &QuantumModel, tol: f64, b: &mut Builder) -> bool {
    let amp_tol = tol.sqrt();

    for label in GateLabel::ALL {
        if model.channel(label).is_err() {
            return b.check(format!("channel {label}"), false, "missing from model");
        }
    }

    // Every sequence must be deterministic.
    let mut all_ok = true;
    for (seq, outcome, _) in universal_spec().entries() {
        let p = sequence_success_probability(model, seq, outcome).expect("labels present");
        let ok = p >= 1.0 - tol;
        all_ok &= b.check(
            format!("sequence {seq}"),
            ok,
            format!("P({outcome}) = {p:.12}"),
        );
    }
    if !all_ok {
        return false;
    }

    // Every gate must be unitary.
    let mut units = BTreeMap::new();
    for label in GateLabel::ALL {
        let u = extract_unitary(model.channel(label).expect("checked"), tol);
        all_ok &= b.check(
            format!("unitary {label}"),
            u.is_some(),
            match u {
                Some(_) => "rank-1 Choi matrix".to_string(),
                None => "Choi matrix is not rank one".to_string(),
            },
        );
        b.report.unitaries.insert(label, u);
        if let Some(u) = u {
            units.insert(label, u);
        }
    }
    if !all_ok {
        return false;
    }
    let [us, us_inv, uh, ut] = GateLabel::ALL.map(|l| units[&l]);

    // The s / s⁻¹ subsystem fixes the gauge.
    let frames = match extract_frames(model) {
        Ok(f) => f,
        Err(e) => return b.check("selftest", false, e.to_string()),
    };
    let rep = certify(model, &s_gate_spec()).expect("frames extracted");
    if !b.check(
        "selftest",
        rep.epsilon_fail <= tol,
        format!("s-gate failure probability {:.3e}", rep.epsilon_fail),
    ) {
        return false;
    }
    let mut gauge = gauge_unitary(&frames);
    b.report.gauge = Some(gauge);
    let fs = phase_insensitive_overlap(&s_gate(), &(gauge.adjoint() * us * gauge));
    let fsi = phase_insensitive_overlap(&s_dagger(), &(gauge.adjoint() * us_inv * gauge));
    if !b.check(
        "gauge s",
        fs.min(fsi) >= 1.0 - tol,
        format!("overlaps {fs:.12}, {fsi:.12}"),
    ) {
        return false;
    }

    // h swaps φ and φ⊥.
    if !b.check(
        "purity hh",
        check_purity_after_double(model.channel(GateLabel::H).expect("checked"), &frames.psi),
        "h∘h keeps ψ pure",
    ) {
        return false;
    }
    let hphi = inner(&frames.phi_perp, &(uh * frames.phi));
    let hphi_perp = inner(&frames.phi, &(uh * frames.phi_perp));
    if !b.check(
        "h maps phi",
        hphi.norm_sqr() >= 1.0 - tol,
        format!("|⟨φ⊥|h|φ⟩|² = {:.12}", hphi.norm_sqr()),
    ) {
        return false;
    }
    let theta = (hphi / hphi_perp).arg();
    b.report.theta = Some(theta);
    let cond = hadamard_phase_condition(theta);
    let hsh = inner(&frames.psi, &(uh * us * uh * frames.psi)).norm();
    if !b.check(
        "h phase",
        (cond - 2.0 * std::f64::consts::SQRT_2).abs() <= amp_tol && hsh >= 1.0 - tol,
        format!(
            "θ = {theta:.9}, |1 + 2e^{{iθ}} − e^{{2iθ}}| = {cond:.12}, |⟨ψ|h s h|ψ⟩| = {hsh:.12}"
        ),
    ) {
        return false;
    }
    // θ = −π/2 is the XHX branch; absorbing X into the gauge conjugates the model.
    let conjugated = theta < 0.0;
    if conjugated {
        gauge *= pauli_x();
    }
    b.report.conjugated = conjugated;
    b.report.gauge = Some(gauge);
    let fh = phase_insensitive_overlap(&hadamard(), &(gauge.adjoint() * uh * gauge));
    if !b.check("gauge h", fh >= 1.0 - tol, format!("overlap {fh:.12}")) {
        return false;
    }

    // t is diagonal with e^{2iφ} = i.
    let v = gauge.adjoint() * ut * gauge;
    let off = v[(0, 1)].norm().max(v[(1, 0)].norm());
    if !b.check(
        "t diagonal",
        off <= amp_tol,
        format!("off-diagonal {off:.3e}"),
    ) {
        return false;
    }
    let mut rel = v[(1, 1)] / v[(0, 0)];
    rel /= rel.norm();
    if conjugated {
        rel = rel.conj();
    }
    b.report.t_phase = Some(rel.arg());
    let miss = (rel * rel - c(0.0, 1.0)).norm();
    if !b.check(
        "t phase",
        miss <= amp_tol,
        format!(
            "e^{{iφ}} = {:.9} {:+.9}i, |e^{{2iφ}} − i| = {miss:.3e}",
            rel.re, rel.im
        ),
    ) {
        return false;
    }
    b.report.t_branch = if rel.re > 0.0 {
        TBranch::T
    } else {
        TBranch::ZT
    };
    debug_assert!((rel.re.abs() - FRAC_1_SQRT_2).abs() < 1e-3);
    true
}
