//! The dominance check `λ(C) ≥ w(C)` and the tooling around it: simplicity
//! gaps forced by the check, the hyperelliptic `λ_2` limit table, the
//! Siegel-Veech inversion of the sum formula, and file reports.
//!
//! Whole-component estimates are compared against the per-curve `w` of the
//! component, which presumes `w` is constant along the component; verdicts
//! carry that label.

mod report;
mod verdict;

pub use report::{render_report, write_report, ReportBundle, REPORT_SCHEMA};
pub use verdict::{
    check_dominance, verdict_from_record, verify_component, verify_genus, worker_threads, DualCheck, KzRow, Verdict,
    VerdictStatus, CONTINUITY_LABEL,
};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::hnfilt::{HnError, WSpectrum};
use crate::rational::{self, Rational};
use crate::spectra::SpectraError;
use crate::strata::{CatalogError, Stratum};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Hn(#[from] HnError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("no seeds given")]
    NoSeeds,
    #[error("{0} vs {1} exponents")]
    LengthMismatch(usize, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Indices `i >= 2` where `λ ≥ w` forces `λ_i > λ_{i+1}`, with the forced gap.
///
/// From `λ_1 = 1`, monotonicity and the partial/tail inequalities:
/// `λ_i >= (P_w(j) - P_{i-1}) / (j - i + 1)` for `j >= i`, where `P_{i-1}` is
/// bounded above through the upper bounds of earlier entries, and
/// `λ_j <= T_w(k) / (j - k + 1)` for `2 <= k <= j`. A gap is reported where
/// the lower bound for `λ_i` exceeds the upper bound for `λ_{i+1}`.
pub fn simplicity_gap(w: &WSpectrum) -> Result<Vec<(usize, Rational)>, HnError> {
    let total = w.sum()?;
    let v = w.values();
    let g = v.len();
    let partial = |i: usize| rational::sum(v[..i].iter().copied());
    let tail = |i: usize| total - partial(i - 1);
    // upper[j] bounds λ_j (1-based; index 0 unused).
    let mut upper = vec![Rational::one(); g + 1];
    for j in 2..=g {
        for k in 2..=j {
            let b = tail(k) / Rational::from_integer((j - k + 1) as i64);
            if b < upper[j] {
                upper[j] = b;
            }
        }
    }
    let mut lower = vec![Rational::zero(); g + 1];
    lower[1] = Rational::one();
    for i in 2..=g {
        let before = Rational::one() + rational::sum(upper[2..i].iter().copied());
        for j in i..=g {
            let b = (partial(j) - before) / Rational::from_integer((j - i + 1) as i64);
            if b > lower[i] {
                lower[i] = b;
            }
        }
    }
    Ok((2..g).filter(|&i| lower[i] > upper[i + 1]).map(|i| (i, lower[i] - upper[i + 1])).collect())
}

/// `λ_2 >= (N - 2)/N` for the hyperelliptic families with `N = 2g - 1` and `N = 2g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KzLimitRow {
    pub genus: u32,
    pub n: u32,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
}

pub fn kz_limit_table(g_max: u32) -> Vec<KzLimitRow> {
    (2..=g_max)
        .flat_map(|g| {
            [2 * g - 1, 2 * g].map(|n| KzLimitRow { genus: g, n, bound: Rational::new(n as i64 - 2, n as i64) })
        })
        .collect()
}

/// Area Siegel-Veech constant recovered from a measured exponent sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiegelVeech {
    #[serde(with = "rational::serde_str")]
    pub kappa: Rational,
    pub c_area: f64,
    pub c_area_stderr: f64,
    /// The estimate came out below zero, which no stratum allows.
    pub negative: bool,
}

/// `Σλ = κ + (π²/3) c_area` with `κ = (1/12) Σ m_i (m_i + 2)/(m_i + 1)`.
pub fn siegel_veech_from_sum(stratum: &Stratum, measured_sum: f64, sum_stderr: f64) -> SiegelVeech {
    let kappa: Rational = stratum
        .orders()
        .iter()
        .map(|&m| {
            let m = m as i64;
            Rational::new(m * (m + 2), 12 * (m + 1))
        })
        .sum();
    let scale = 3.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let c_area = scale * (measured_sum - rational::to_f64(&kappa));
    SiegelVeech { kappa, c_area, c_area_stderr: scale * sum_stderr, negative: c_area < 0.0 }
}
