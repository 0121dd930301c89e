use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{SpectraError, SpectrumVector};
use crate::strata::ComponentId;

/// Version tag of the run document.
pub const RUN_SCHEMA: &str = "spectra.run/1";

/// All `2g` exponents divided by `θ_1`, with batch errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullSpectrum {
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    /// `λ_{2g+1-i} ≈ -λ_i` within three combined standard errors.
    pub symmetric: bool,
}

impl FullSpectrum {
    pub fn new(values: Vec<f64>, stderr: Vec<f64>) -> Self {
        let m = values.len();
        let symmetric = (0..m / 2).all(|i| {
            let j = m - 1 - i;
            (values[i] + values[j]).abs() <= 3.0 * stderr[i].hypot(stderr[j]) + 1e-12
        });
        Self { values, stderr, symmetric }
    }
}

/// A persisted estimation run, or several pooled runs.
///
/// `partial_sum_stderr[i]` is the error of `λ_2 + ... + λ_{i+1}` and
/// `tail_sum_stderr[i]` that of `λ_{i+1} + ... + λ_g` (0-based `i`; the
/// exact `λ_1 = 1` contributes nothing to either).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub toolkit_version: String,
    pub component: Option<ComponentId>,
    pub permutation: String,
    pub genus: usize,
    pub seeds: Vec<u64>,
    /// Accelerated steps per run, burn-in included.
    pub steps: u64,
    pub batches: usize,
    pub qr_every: u32,
    pub burn_in_steps: u64,
    pub estimates: SpectrumVector,
    pub stderr: Vec<f64>,
    pub partial_sum_stderr: Vec<f64>,
    pub tail_sum_stderr: Vec<f64>,
    pub sum: f64,
    pub sum_stderr: f64,
    /// Unnormalized exponents `θ_i` per unit of Teichmüller time.
    pub raw_exponents: Vec<f64>,
    pub teichmuller_time: f64,
    /// Length resamples after ties or overlong runs.
    pub resamples: u64,
    /// Basis restarts after a collapse.
    pub restarts: u32,
    pub runs: usize,
    pub full_spectrum: Option<FullSpectrum>,
    pub wall_time_s: f64,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn total_steps(&self) -> u64 {
        self.steps * self.runs as u64
    }

    pub fn label(&self) -> String {
        self.component.as_ref().map(|c| c.to_string()).unwrap_or_else(|| self.permutation.clone())
    }

    /// Rows `component,index,estimate,stderr` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,index,estimate,stderr\n");
        self.write_csv_rows(&mut out);
        out
    }

    pub(crate) fn write_csv_rows(&self, out: &mut String) {
        for (i, (v, s)) in self.estimates.values.iter().zip(&self.stderr).enumerate() {
            writeln!(out, "\"{}\",{},{},{}", self.label(), i + 1, v, s).unwrap();
        }
    }
}

/// Pools runs of one permutation, weighting each by its step count.
///
/// Estimates are step-weighted means and errors combine as
/// `sqrt(Σ w_r² se_r²)`, so `k` equal runs shrink errors by `√k`.
pub fn merge_runs(records: &[RunRecord]) -> Result<RunRecord, SpectraError> {
    let first = records.first().ok_or_else(|| SpectraError::MixedConfig("no records".into()))?;
    for r in &records[1..] {
        let mismatch = if r.permutation != first.permutation {
            Some("permutations differ")
        } else if r.component != first.component {
            Some("components differ")
        } else if r.batches != first.batches || r.qr_every != first.qr_every {
            Some("batching regimens differ")
        } else if r.full_spectrum.is_some() != first.full_spectrum.is_some() {
            Some("spectrum widths differ")
        } else {
            None
        };
        if let Some(m) = mismatch {
            return Err(SpectraError::MixedConfig(m.into()));
        }
    }
    let total: f64 = records.iter().map(|r| r.total_steps() as f64).sum();
    let weights: Vec<f64> = records.iter().map(|r| r.total_steps() as f64 / total).collect();
    let mean = |f: &dyn Fn(&RunRecord) -> &[f64]| -> Vec<f64> {
        let m = f(first).len();
        (0..m).map(|i| records.iter().zip(&weights).map(|(r, w)| w * f(r)[i]).sum()).collect()
    };
    let pooled = |f: &dyn Fn(&RunRecord) -> &[f64]| -> Vec<f64> {
        let m = f(first).len();
        (0..m).map(|i| records.iter().zip(&weights).map(|(r, w)| (w * f(r)[i]).powi(2)).sum::<f64>().sqrt()).collect()
    };

    let mut values = mean(&|r| &r.estimates.values);
    values[0] = 1.0;
    let estimates = SpectrumVector {
        values,
        kind: first.estimates.kind,
        adjusted: records.iter().any(|r| r.estimates.adjusted),
    };
    let full_spectrum = first.full_spectrum.as_ref().map(|_| {
        let fs = |r: &RunRecord| r.full_spectrum.clone().expect("checked above");
        let all: Vec<FullSpectrum> = records.iter().map(fs).collect();
        let m = all[0].values.len();
        let v = (0..m).map(|i| all.iter().zip(&weights).map(|(f, w)| w * f.values[i]).sum()).collect();
        let s = (0..m).map(|i| all.iter().zip(&weights).map(|(f, w)| (w * f.stderr[i]).powi(2)).sum::<f64>().sqrt()).collect();
        FullSpectrum::new(v, s)
    });

    Ok(RunRecord {
        schema: RUN_SCHEMA.to_string(),
        toolkit_version: crate::TOOLKIT_VERSION.to_string(),
        component: first.component.clone(),
        permutation: first.permutation.clone(),
        genus: first.genus,
        seeds: records.iter().flat_map(|r| r.seeds.iter().copied()).collect(),
        steps: first.steps,
        batches: first.batches,
        qr_every: first.qr_every,
        burn_in_steps: first.burn_in_steps,
        sum: estimates.sum(),
        estimates,
        stderr: pooled(&|r| &r.stderr),
        partial_sum_stderr: pooled(&|r| &r.partial_sum_stderr),
        tail_sum_stderr: pooled(&|r| &r.tail_sum_stderr),
        sum_stderr: records.iter().zip(&weights).map(|(r, w)| (w * r.sum_stderr).powi(2)).sum::<f64>().sqrt(),
        raw_exponents: mean(&|r| &r.raw_exponents),
        teichmuller_time: records.iter().map(|r| r.teichmuller_time).sum(),
        resamples: records.iter().map(|r| r.resamples).sum(),
        restarts: records.iter().map(|r| r.restarts).sum(),
        runs: records.iter().map(|r| r.runs).sum(),
        full_spectrum,
        wall_time_s: records.iter().map(|r| r.wall_time_s).sum(),
    })
    .map(|mut r: RunRecord| {
        // Pooled runs of unequal length keep the per-run step count of the first.
        if records.iter().any(|x| x.steps != first.steps) {
            r.steps = (total / r.runs as f64).round() as u64;
        }
        r
    })
}

#[cfg(test)]
mod tests {
    use super::super::{EstimateConfig, SpectrumKind};
    use super::*;

    fn record(perm: &str, seed: u64) -> RunRecord {
        RunRecord {
            schema: RUN_SCHEMA.into(),
            toolkit_version: "t".into(),
            component: None,
            permutation: perm.into(),
            genus: 2,
            seeds: vec![seed],
            steps: 1000,
            batches: 20,
            qr_every: 8,
            burn_in_steps: 10,
            estimates: SpectrumVector { values: vec![1.0, 0.33], kind: SpectrumKind::Lyapunov, adjusted: false },
            stderr: vec![0.01, 0.02],
            partial_sum_stderr: vec![0.0, 0.02],
            tail_sum_stderr: vec![0.02, 0.02],
            sum: 1.33,
            sum_stderr: 0.02,
            raw_exponents: vec![1.0, 0.33],
            teichmuller_time: 10.0,
            resamples: 0,
            restarts: 0,
            runs: 1,
            full_spectrum: None,
            wall_time_s: 0.5,
        }
    }

    #[test]
    fn merge_identical() {
        let a = record("A B C D / D C B A", 1);
        let m = merge_runs(&[a.clone(), a.clone()]).unwrap();
        assert_eq!(m.estimates.values, a.estimates.values);
        for (s, t) in m.stderr.iter().zip(&a.stderr) {
            assert!((s - t / 2f64.sqrt()).abs() < 1e-15);
        }
        assert_eq!(m.runs, 2);
        assert_eq!(m.seeds, vec![1, 1]);
    }

    #[test]
    fn merge_mixed() {
        let a = record("A B C D / D C B A", 1);
        let b = record("A B C D E / E D C B A", 2);
        assert!(matches!(merge_runs(&[a, b]), Err(SpectraError::MixedConfig(_))));
        assert!(matches!(merge_runs(&[]), Err(SpectraError::MixedConfig(_))));
    }

    #[test]
    fn json_round_trip() {
        let p = "A B C D / D C B A".parse().unwrap();
        let r = super::super::estimate_spectrum(&p, &EstimateConfig::new(10_000, 2, 10)).unwrap();
        let json = r.to_json();
        assert!(json.contains("\"schema\": \"spectra.run/1\""));
        assert_eq!(RunRecord::from_json(&json).unwrap(), r);
        let csv = r.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("component,index,estimate,stderr\n"));
    }
}
