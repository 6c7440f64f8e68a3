//! The certification protocol: sequence sets with deterministic target
//! outcomes, the exact single-repetition pass probability, seeded Monte Carlo
//! runs and repetition counts.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::trace2;
use crate::model::{GateLabel, QuantumModel};
use crate::rng::{stream, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        })
    }
}

impl FromStr for Outcome {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" => Ok(Outcome::Plus),
            "-" | "−" => Ok(Outcome::Minus),
            other => Err(Error::Parse(format!("unknown outcome `{other}`"))),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Gate labels applied left to right; the empty sequence measures right after
/// preparation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sequence(pub Vec<GateLabel>);

impl Sequence {
    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn labels(&self) -> &[GateLabel] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        self.0.iter().try_for_each(|l| write!(f, "{l}"))
    }
}

impl FromStr for Sequence {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "ε" {
            return Ok(Sequence::empty());
        }
        s.chars()
            .map(|ch| {
                GateLabel::from_symbol(ch)
                    .ok_or_else(|| Error::Parse(format!("unknown gate symbol `{ch}` in `{s}`")))
            })
            .collect::<Result<_>>()
            .map(Sequence)
    }
}

impl Serialize for Sequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let text: String = self.0.iter().map(|l| l.symbol()).collect();
        s.serialize_str(&text)
    }
}

impl<'de> Deserialize<'de> for Sequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

fn seqs(texts: &[&str]) -> Vec<Sequence> {
    texts
        .iter()
        .map(|t| t.parse().expect("static sequence"))
        .collect()
}

/// Sequence set, target outcomes and sampling masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson")]
pub struct ProtocolSpec {
    sequences: Vec<Sequence>,
    outcomes: Vec<Outcome>,
    mu: Vec<f64>,
}

#[derive(Deserialize)]
struct SpecJson {
    sequences: Vec<Sequence>,
    outcomes: Vec<Outcome>,
    mu: Vec<f64>,
}

impl TryFrom<SpecJson> for ProtocolSpec {
    type Error = Error;
    fn try_from(j: SpecJson) -> Result<Self> {
        ProtocolSpec::new(j.sequences, j.outcomes, j.mu)
    }
}

const MU_SUM_TOL: f64 = 1e-12;

impl ProtocolSpec {
    pub fn new(sequences: Vec<Sequence>, outcomes: Vec<Outcome>, mu: Vec<f64>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::invalid("protocol spec", "no sequences"));
        }
        if outcomes.len() != sequences.len() || mu.len() != sequences.len() {
            return Err(Error::invalid(
                "protocol spec",
                format!(
                    "{} sequences, {} outcomes, {} masses",
                    sequences.len(),
                    outcomes.len(),
                    mu.len()
                ),
            ));
        }
        let unique: BTreeSet<_> = sequences.iter().collect();
        if unique.len() != sequences.len() {
            return Err(Error::invalid("protocol spec", "duplicate sequence"));
        }
        if let Some((i, m)) = mu
            .iter()
            .enumerate()
            .find(|(_, m)| m.is_nan() || **m <= 0.0 || m.is_infinite())
        {
            return Err(Error::invalid(
                "protocol spec",
                format!(
                    "mass {m} for sequence {} is not strictly positive",
                    sequences[i]
                ),
            ));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > MU_SUM_TOL {
            return Err(Error::invalid(
                "protocol spec",
                format!("masses sum to {total}"),
            ));
        }
        Ok(Self {
            sequences,
            outcomes,
            mu,
        })
    }

    pub fn uniform(sequences: Vec<Sequence>, outcomes: Vec<Outcome>) -> Result<Self> {
        let n = sequences.len();
        Self::new(sequences, outcomes, vec![1.0 / n as f64; n])
    }

    /// Same sequences and outcomes under another strictly positive distribution.
    pub fn with_mu(&self, mu: Vec<f64>) -> Result<Self> {
        Self::new(self.sequences.clone(), self.outcomes.clone(), mu)
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn outcome(&self, seq: &Sequence) -> Option<Outcome> {
        self.sequences
            .iter()
            .position(|s| s == seq)
            .map(|i| self.outcomes[i])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Sequence, Outcome, f64)> {
        self.sequences
            .iter()
            .zip(&self.outcomes)
            .zip(&self.mu)
            .map(|((s, o), m)| (s, *o, *m))
    }

    pub fn labels(&self) -> BTreeSet<GateLabel> {
        self.sequences
            .iter()
            .flat_map(|s| s.0.iter().copied())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// 𝒳 = {ε, ss, ss⁻¹, s⁻¹s, s⁻¹s⁻¹} with uniform masses.
pub fn s_gate_spec() -> ProtocolSpec {
    use Outcome::*;
    ProtocolSpec::uniform(
        seqs(&["", "ss", "sS", "Ss", "SS"]),
        vec![Plus, Minus, Plus, Plus, Minus],
    )
    .expect("static spec")
}

/// The twelve sequences certifying {s, s⁻¹, h, t}, uniform masses.
pub fn universal_spec() -> ProtocolSpec {
    use Outcome::*;
    ProtocolSpec::uniform(
        seqs(&[
            "", "sS", "Ss", "ss", "SS", "shs", "Shs", "hh", "hsh", "hth", "sshth", "tts",
        ]),
        vec![
            Plus, Plus, Plus, Minus, Minus, Plus, Minus, Plus, Plus, Plus, Minus, Minus,
        ],
    )
    .expect("static spec")
}

/// Probability that running `seq` on the model yields `expected`:
/// Tr[M_a Λ_{x_m} ∘ … ∘ Λ_{x_1}(ρ)].
pub fn sequence_success_probability(
    model: &QuantumModel,
    seq: &Sequence,
    expected: Outcome,
) -> Result<f64> {
    let mut rho = *model.state().matrix();
    for label in seq.labels() {
        rho = model.channel(*label)?.map(&rho);
    }
    let effect = match expected {
        Outcome::Plus => model.povm().plus(),
        Outcome::Minus => model.povm().minus(),
    };
    Ok(trace2(&(effect * rho)).re)
}

/// Exact probability of passing one repetition.
pub fn pass_probability(model: &QuantumModel, spec: &ProtocolSpec) -> Result<f64> {
    spec.entries().try_fold(0.0, |acc, (seq, outcome, mass)| {
        Ok(acc + mass * sequence_success_probability(model, seq, outcome)?)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub verdict: Verdict,
    pub repetitions_executed: u64,
    pub failing_sequence: Option<Sequence>,
    pub observed_outcome: Option<Outcome>,
}

/// Simulates `n` repetitions of the protocol against a fixed model.
///
/// Repetition `i` draws from the stream `(seed, i)`: one uniform picks the
/// sequence by μ, a second one samples the outcome with the exact success
/// probability as Bernoulli parameter. The run stops at the first mismatch.
pub fn run_protocol(
    model: &QuantumModel,
    spec: &ProtocolSpec,
    n: u64,
    seed: u64,
) -> Result<RunResult> {
    if n == 0 {
        return Err(Error::OutOfRange {
            name: "n",
            value: 0.0,
            range: "n ≥ 1",
        });
    }
    let success: Vec<f64> = spec
        .entries()
        .map(|(seq, outcome, _)| {
            sequence_success_probability(model, seq, outcome).map(|p| p.clamp(0.0, 1.0))
        })
        .collect::<Result<_>>()?;
    let mut cumulative = Vec::with_capacity(spec.len());
    let mut acc = 0.0;
    for m in spec.mu() {
        acc += m;
        cumulative.push(acc);
    }

    for rep in 0..n {
        let mut rng = stream(seed, Domain::ProtocolRepetition, rep);
        let pick: f64 = rng.gen::<f64>() * acc;
        let idx = cumulative
            .iter()
            .position(|c| pick < *c)
            .unwrap_or(spec.len() - 1);
        let u: f64 = rng.gen();
        if u >= success[idx] {
            return Ok(RunResult {
                verdict: Verdict::Reject,
                repetitions_executed: rep + 1,
                failing_sequence: Some(spec.sequences()[idx].clone()),
                observed_outcome: Some(spec.outcomes()[idx].flipped()),
            });
        }
    }
    Ok(RunResult {
        verdict: Verdict::Accept,
        repetitions_executed: n,
        failing_sequence: None,
        observed_outcome: None,
    })
}

/// Number of repetitions for confidence `1 − δ`.
///
/// Without `slope_constant`, `eps` is the single-repetition failure probability
/// and the count is `⌈ln(1/δ) / ln(1/(1−ε))⌉`. With a constant `c`, `eps` is the
/// target model distance and the count is `⌈(c/ε) ln(1/δ)⌉`.
pub fn sample_complexity(eps: f64, delta: f64, slope_constant: Option<f64>) -> Result<u64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1)",
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "(0, 1)",
        });
    }
    let log_inv_delta = (1.0 / delta).ln();
    let n = match slope_constant {
        None => log_inv_delta / (1.0 / (1.0 - eps)).ln(),
        Some(c) if c > 0.0 && c.is_finite() => c / eps * log_inv_delta,
        Some(c) => {
            return Err(Error::OutOfRange {
                name: "slope_constant",
                value: c,
                range: "(0, ∞)",
            })
        }
    };
    Ok(n.ceil() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::state::QubitState;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    #[test]
    fn s_gate_spec_table() {
        let spec = s_gate_spec();
        assert_eq!(spec.len(), 5);
        assert_eq!(spec.outcome(&Sequence::empty()), Some(Outcome::Plus));
        assert_eq!(spec.outcome(&seq("ss")), Some(Outcome::Minus));
        assert_eq!(spec.outcome(&seq("SS")), Some(Outcome::Minus));
        assert_eq!(spec.outcome(&seq("sS")), Some(Outcome::Plus));
        assert_eq!(spec.outcome(&seq("Ss")), Some(Outcome::Plus));
        assert!(spec.mu().iter().all(|m| (*m - 0.2).abs() < 1e-15));
    }

    #[test]
    fn universal_spec_table() {
        let spec = universal_spec();
        assert_eq!(spec.len(), 12);
        assert_eq!(spec.outcome(&seq("hth")), Some(Outcome::Plus));
        assert_eq!(spec.outcome(&seq("tts")), Some(Outcome::Minus));
        assert_eq!(spec.outcome(&seq("Shs")), Some(Outcome::Minus));
        assert_eq!(spec.outcome(&seq("sshth")), Some(Outcome::Minus));
        let plus: Vec<String> = spec
            .entries()
            .filter(|(_, o, _)| *o == Outcome::Plus)
            .map(|(s, _, _)| s.to_string())
            .collect();
        assert_eq!(plus, ["ε", "sS", "Ss", "shs", "hh", "hsh", "hth"]);
    }

    #[test]
    fn pass_probability_examples() {
        let target = QuantumModel::s_gate_target();
        assert!((pass_probability(&target, &s_gate_spec()).unwrap() - 1.0).abs() < 1e-12);

        let zero = target
            .clone()
            .with_state(QubitState::pure(&gates::ket_zero()).unwrap());
        assert!((pass_probability(&zero, &s_gate_spec()).unwrap() - 0.5).abs() < 1e-15);

        let uni = QuantumModel::universal_target();
        assert!((pass_probability(&uni, &universal_spec()).unwrap() - 1.0).abs() < 1e-12);

        assert_eq!(
            pass_probability(&target, &universal_spec()).unwrap_err(),
            Error::MissingChannel(GateLabel::H)
        );
    }

    #[test]
    fn spec_validation() {
        let s = s_gate_spec();
        assert!(s.with_mu(vec![0.5, 0.5, 0.0, 0.0, 0.0]).is_err());
        assert!(s.with_mu(vec![0.3, 0.3, 0.2, 0.1, 0.2]).is_err());
        assert!(s.with_mu(vec![0.4, 0.3, 0.1, 0.1, 0.1]).is_ok());
        assert!(ProtocolSpec::uniform(vec![seq("s"), seq("s")], vec![Outcome::Plus; 2]).is_err());
        assert!(ProtocolSpec::uniform(vec![seq("s")], vec![]).is_err());
        assert!("sx".parse::<Sequence>().is_err());
    }

    #[test]
    fn spec_json_format() {
        let text = s_gate_spec().to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["sequences"][0], "");
        assert_eq!(v["sequences"][2], "sS");
        assert_eq!(v["outcomes"][1], "-");
        assert_eq!(ProtocolSpec::from_json(&text).unwrap(), s_gate_spec());
        let unicode = r#"{"sequences": ["", "ss"], "outcomes": ["+", "−"], "mu": [0.5, 0.5]}"#;
        let spec = ProtocolSpec::from_json(unicode).unwrap();
        assert_eq!(spec.outcomes()[1], Outcome::Minus);
        let bad = r#"{"sequences": ["", "ss"], "outcomes": ["+", "-"], "mu": [0.7, 0.5]}"#;
        assert!(ProtocolSpec::from_json(bad).is_err());
    }

    #[test]
    fn run_examples() {
        let target = QuantumModel::s_gate_target();
        for seed in 0..20 {
            let r = run_protocol(&target, &s_gate_spec(), 500, seed).unwrap();
            assert_eq!(r.verdict, Verdict::Accept);
            assert_eq!(r.repetitions_executed, 500);
            assert!(r.failing_sequence.is_none());
        }
        // Swapped measurement: every sequence fails with certainty.
        let flipped = target
            .clone()
            .with_povm(crate::povm::Povm::projective(&gates::ket_minus()));
        assert!(pass_probability(&flipped, &s_gate_spec()).unwrap().abs() < 1e-15);
        let r = run_protocol(&flipped, &s_gate_spec(), 1, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Reject);
        assert_eq!(r.repetitions_executed, 1);
        let failing = r.failing_sequence.unwrap();
        assert_eq!(
            r.observed_outcome,
            Some(s_gate_spec().outcome(&failing).unwrap().flipped())
        );
        assert!(run_protocol(&target, &s_gate_spec(), 0, 0).is_err());
    }

    #[test]
    fn run_is_deterministic() {
        let noisy =
            QuantumModel::s_gate_target().with_state(QubitState::pure(&gates::ket_zero()).unwrap());
        let a = run_protocol(&noisy, &s_gate_spec(), 50, 11).unwrap();
        let b = run_protocol(&noisy, &s_gate_spec(), 50, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sample_complexity_examples() {
        assert_eq!(sample_complexity(0.05, 0.05, Some(5.0)).unwrap(), 300);
        assert_eq!(sample_complexity(0.01, 0.01, Some(5.0)).unwrap(), 2303);
        assert_eq!(sample_complexity(0.1, 0.05, None).unwrap(), 29);
        assert!(sample_complexity(0.0, 0.05, None).is_err());
        assert!(sample_complexity(0.1, 1.0, None).is_err());
        assert!(sample_complexity(0.1, 0.1, Some(-1.0)).is_err());
    }
}
