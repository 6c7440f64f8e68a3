//! The distance-versus-failure-probability scatter experiment.
//!
//! Every sampled model is scored twice: its exact single-repetition failure
//! probability ε under the S-gate protocol, and its distance to the target
//! under the extracted gauge. The worst slope is the largest ratio
//! distance/ε over models with ε above a floor, i.e. the steepest line through
//! the origin that still bounds every retained point.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::s_gate_spec;
use crate::randmodels::{random_noisy_model, NoiseConfig};
use crate::selftest::{certify, GaugeReport};

pub const DEFAULT_EPSILON_FLOOR: f64 = 1e-8;
pub const CSV_HEADER: &str = "index,epsilon,distance,d_state,d_meas,infid_s,infid_sinv";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub index: u64,
    pub epsilon_fail: f64,
    pub model_distance: f64,
    pub d_state: f64,
    pub d_meas: f64,
    pub infid_s: f64,
    pub infid_sinv: f64,
}

impl ScatterPoint {
    /// Components are clamped into `[0, 1]` to absorb round-off around the
    /// ideal model.
    pub fn from_report(index: u64, rep: &GaugeReport) -> Self {
        let unit = |x: f64| x.clamp(0.0, 1.0);
        let d_state = unit(rep.state_infidelity());
        let d_meas = unit(rep.meas_spectral_distance);
        let infid_s = unit(rep.infidelity_s());
        let infid_sinv = unit(rep.infidelity_sinv());
        Self {
            index,
            epsilon_fail: unit(rep.epsilon_fail),
            model_distance: d_state.max(d_meas).max(infid_s).max(infid_sinv),
            d_state,
            d_meas,
            infid_s,
            infid_sinv,
        }
    }
}

/// A sample whose gauge could not be extracted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub index: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub samples: u64,
    /// Points with ε ≥ floor, the ones entering the slope.
    pub retained: u64,
    pub failures: u64,
    pub worst_slope: f64,
    pub worst_index: Option<u64>,
    pub epsilon_floor: f64,
    pub seed: u64,
    pub noise: NoiseConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// Sorted by sample index.
    pub points: Vec<ScatterPoint>,
    pub failures: Vec<SweepFailure>,
    pub summary: SweepSummary,
}

pub fn scatter_sweep(m: u64, cfg: &NoiseConfig) -> Result<SweepOutput> {
    scatter_sweep_with_floor(m, cfg, DEFAULT_EPSILON_FLOOR)
}

/// Samples models `0..m` in parallel. The output is independent of the
/// number of worker threads.
pub fn scatter_sweep_with_floor(
    m: u64,
    cfg: &NoiseConfig,
    epsilon_floor: f64,
) -> Result<SweepOutput> {
    scatter_sweep_range(0..m, cfg, epsilon_floor)
}

/// Same as [`scatter_sweep_with_floor`] restricted to sample indices in
/// `indices`, so a large sweep can be processed in chunks. `samples` in the
/// summary is the chunk length.
pub fn scatter_sweep_range(
    indices: std::ops::Range<u64>,
    cfg: &NoiseConfig,
    epsilon_floor: f64,
) -> Result<SweepOutput> {
    let m = indices.end.saturating_sub(indices.start);
    if m == 0 {
        return Err(Error::OutOfRange {
            name: "m",
            value: 0.0,
            range: "m ≥ 1",
        });
    }
    cfg.validate()?;
    let spec = s_gate_spec();
    let results: Vec<std::result::Result<ScatterPoint, SweepFailure>> = indices
        .into_par_iter()
        .map(|index| {
            let model = random_noisy_model(cfg, index);
            certify(&model, &spec)
                .map(|rep| ScatterPoint::from_report(index, &rep))
                .map_err(|e| SweepFailure {
                    index,
                    reason: e.to_string(),
                })
        })
        .collect();

    let mut points = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(f) => failures.push(f),
        }
    }

    let mut worst_slope = 0.0;
    let mut worst_index = None;
    let mut retained = 0;
    for p in points.iter().filter(|p| p.epsilon_fail >= epsilon_floor) {
        retained += 1;
        let slope = p.model_distance / p.epsilon_fail;
        if slope > worst_slope {
            worst_slope = slope;
            worst_index = Some(p.index);
        }
    }

    let summary = SweepSummary {
        samples: m,
        retained,
        failures: failures.len() as u64,
        worst_slope,
        worst_index,
        epsilon_floor,
        seed: cfg.seed,
        noise: *cfg,
    };
    Ok(SweepOutput {
        points,
        failures,
        summary,
    })
}

fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Row layout of the CSV; the header names are part of the file format.
#[derive(Deserialize)]
struct CsvRow {
    index: u64,
    epsilon: f64,
    distance: f64,
    d_state: f64,
    d_meas: f64,
    infid_s: f64,
    infid_sinv: f64,
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn to_csv(points: &[ScatterPoint]) -> String {
    let mut w = csv::Writer::from_writer(Vec::with_capacity(64 + points.len() * 128));
    w.write_record(CSV_HEADER.split(','))
        .expect("in-memory write");
    for p in points {
        w.write_record([
            p.index.to_string(),
            fmt12(p.epsilon_fail),
            fmt12(p.model_distance),
            fmt12(p.d_state),
            fmt12(p.d_meas),
            fmt12(p.infid_s),
            fmt12(p.infid_sinv),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

pub fn parse_csv(text: &str) -> Result<Vec<ScatterPoint>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(Error::Parse(format!(
            "expected header `{CSV_HEADER}`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rdr.deserialize::<CsvRow>()
        .map(|row| {
            let row = row.map_err(csv_err)?;
            Ok(ScatterPoint {
                index: row.index,
                epsilon_fail: row.epsilon,
                model_distance: row.distance,
                d_state: row.d_state,
                d_meas: row.d_meas,
                infid_s: row.infid_s,
                infid_sinv: row.infid_sinv,
            })
        })
        .collect()
}

/// `results.csv` → `results.summary.json`
pub fn summary_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("summary.json")
}

/// Writes the CSV and its summary sidecar; returns the sidecar path.
pub fn export_csv(points: &[ScatterPoint], summary: &SweepSummary, path: &Path) -> Result<PathBuf> {
    fs::write(path, to_csv(points)).map_err(|e| Error::io(path, e))?;
    let sidecar = summary_path(path);
    let json = serde_json::to_string_pretty(summary).expect("summary serializes");
    fs::write(&sidecar, json + "\n").map_err(|e| Error::io(&sidecar, e))?;
    Ok(sidecar)
}

pub fn read_csv(path: &Path) -> Result<Vec<ScatterPoint>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

pub fn read_summary(path: &Path) -> Result<SweepSummary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_ideal_single_sample() {
        let out = scatter_sweep(1, &NoiseConfig::unitary(0.0, 0.0, 5)).unwrap();
        assert_eq!(out.points.len(), 1);
        let p = out.points[0];
        assert!(p.epsilon_fail < 1e-12 && p.model_distance < 1e-10);
        assert_eq!(out.summary.retained, 0);
        assert_eq!(out.summary.worst_slope, 0.0);
        assert_eq!(out.summary.worst_index, None);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(scatter_sweep(0, &NoiseConfig::unitary(0.0, 1.0, 5)).is_err());
    }

    #[test]
    fn envelope_bounds_every_retained_point() {
        let out = scatter_sweep(2_000, &NoiseConfig::unitary(0.0, 1.0, 12)).unwrap();
        let s = &out.summary;
        assert!(s.retained > 0);
        for p in out
            .points
            .iter()
            .filter(|p| p.epsilon_fail >= s.epsilon_floor)
        {
            assert!(p.model_distance <= s.worst_slope * p.epsilon_fail * (1.0 + 1e-12));
            let max = p.d_state.max(p.d_meas).max(p.infid_s).max(p.infid_sinv);
            assert_eq!(p.model_distance, max);
        }
        assert!(out.points.windows(2).all(|w| w[0].index < w[1].index));
    }

    #[test]
    fn csv_format_contract() {
        assert_eq!(to_csv(&[]), format!("{CSV_HEADER}\n"));
        let out = scatter_sweep(3, &NoiseConfig::unitary(0.0, 1.0, 1)).unwrap();
        let text = to_csv(&out.points);
        assert_eq!(text.lines().count(), 4);
        let first = text.lines().nth(1).unwrap();
        let eps_field = first.split(',').nth(1).unwrap();
        let mantissa = eps_field.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(mantissa.len(), 12);
    }

    #[test]
    fn csv_round_trip() {
        let out = scatter_sweep(50, &NoiseConfig::unitary(0.0, 1.0, 2)).unwrap();
        let text = to_csv(&out.points);
        let back = parse_csv(&text).unwrap();
        assert_eq!(to_csv(&back), text);
        for (a, b) in out.points.iter().zip(&back) {
            assert_eq!(a.index, b.index);
            assert!(
                (a.model_distance - b.model_distance).abs()
                    <= 1e-11 * a.model_distance.abs().max(1e-300)
            );
        }
        assert!(parse_csv("bogus\n").is_err());
        assert!(parse_csv(&format!("{CSV_HEADER}\n1,2\n")).is_err());
    }

    #[test]
    fn export_writes_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let out = scatter_sweep(10, &NoiseConfig::unitary(0.0, 1.0, 8)).unwrap();
        let sidecar = export_csv(&out.points, &out.summary, &path).unwrap();
        assert_eq!(sidecar, dir.path().join("results.summary.json"));
        assert_eq!(read_summary(&sidecar).unwrap(), out.summary);
        assert_eq!(read_csv(&path).unwrap().len(), 10);
        let err =
            export_csv(&out.points, &out.summary, &dir.path().join("missing/x.csv")).unwrap_err();
        assert!(err.to_string().contains("missing/x.csv"));
    }
}
