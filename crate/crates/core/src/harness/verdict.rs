use serde::Serialize;

use super::{HarnessError, KzLimitRow};
use crate::hnfilt::{hyperelliptic_source, w_catalog, WSpectrum};
use crate::polygons::{dominates_with_slack, tail_sums, Dominance};
use crate::rational::{self, Rational};
use crate::spectra::{estimate_component, merge_runs, EstimateConfig, RunRecord};
use crate::strata::{component_catalog, ComponentId};

/// Verdicts compare whole-component estimates with the `w` of its curves.
pub const CONTINUITY_LABEL: &str = "component-level (continuity assumption)";

/// Absolute slack added to every float comparison to absorb rounding.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Dominates,
    /// Some inequality fails by more than its tolerance. Not a refutation.
    InconclusiveAtCurrentPrecision,
    /// `w` has only upper bounds and every tail of `λ` stays below the tail bounds.
    TailBoundsHold,
    TailBoundsInconclusive,
}

impl VerdictStatus {
    pub fn holds(self) -> bool {
        matches!(self, VerdictStatus::Dominates | VerdictStatus::TailBoundsHold)
    }
}

/// Both forms of `λ ≥ w` on float data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualCheck {
    /// `Σ_{j<=i} λ_j >= Σ_{j<=i} w_j - s_i` and `|Σλ - Σw| <= s_total`.
    pub partial: Dominance<f64>,
    /// `Σ_{j>i} λ_j <= Σ_{j>i} w_j + s_i + (Σλ - Σw)` for every `i`.
    pub tail_holds: bool,
    pub forms_agree: bool,
}

/// Evaluates the partial-sum and tail-sum forms with per-index slack
/// (`slack[i-1]` for the first `i` entries) and a tolerance on the totals.
pub fn check_dominance(lambda: &[f64], w: &[f64], slack: &[f64], sum_tol: f64) -> Result<DualCheck, HarnessError> {
    if lambda.len() != w.len() {
        return Err(HarnessError::LengthMismatch(lambda.len(), w.len()));
    }
    let g = lambda.len();
    let padded: Vec<f64> = slack.iter().map(|s| s + ROUNDING).collect();
    let partial = dominates_with_slack(lambda, w, &padded, sum_tol + ROUNDING).expect("lengths checked");
    let (tl, tw) = (tail_sums(lambda), tail_sums(w));
    let residual = tl[0] - tw[0];
    let tails_ok = (1..g).all(|i| tl[i] - tw[i] <= padded[i - 1] + residual + ROUNDING);
    let tail_holds = tails_ok && residual.abs() <= sum_tol + ROUNDING;
    Ok(DualCheck { forms_agree: partial.holds() == tail_holds, partial, tail_holds })
}

/// The `λ_2 >= (N - 2)/N` row of a hyperelliptic component, when it is one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KzRow {
    #[serde(flatten)]
    pub row: KzLimitRow,
    /// `λ̂_2 >= bound - 3 stderr`.
    pub consistent: bool,
}

/// Outcome of the dominance check for one component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub component: ComponentId,
    pub label: String,
    pub status: VerdictStatus,
    pub lambda: Vec<f64>,
    pub stderr: Vec<f64>,
    pub w: WSpectrum,
    pub lambda_partial_sums: Vec<f64>,
    #[serde(with = "rational::serde_vec")]
    pub w_partial_sums: Vec<Rational>,
    /// Slack used for each partial sum: three standard errors.
    pub tolerances: Vec<f64>,
    pub check: Option<DualCheck>,
    pub sum_residual: Option<f64>,
    pub sum_stderr: f64,
    pub kz_limit: Option<KzRow>,
    /// Every `w_i = 0` comes with `λ̂_i <= 3 stderr`; vacuous when no `w_i` vanishes.
    pub zero_w_flag: bool,
    pub seeds: Vec<u64>,
    pub steps_per_run: u64,
    pub runs: usize,
}

/// Builds the verdict for a (pooled) run of a catalogued component.
pub fn verdict_from_record(record: &RunRecord, w: &WSpectrum) -> Result<Verdict, HarnessError> {
    let id = record.component.clone().ok_or_else(|| {
        HarnessError::Catalog(crate::strata::CatalogError::UnknownComponent(record.permutation.clone()))
    })?;
    let lambda = record.estimates.values.clone();
    if lambda.len() != w.len() {
        return Err(HarnessError::LengthMismatch(lambda.len(), w.len()));
    }
    let g = lambda.len();
    let wv: Vec<f64> = w.values().iter().map(rational::to_f64).collect();
    let tolerances: Vec<f64> = (0..g - 1).map(|i| 3.0 * record.partial_sum_stderr[i]).collect();
    let sum_tol = 3.0 * record.sum_stderr;

    let (status, check, sum_residual) = if w.is_exact() {
        let check = check_dominance(&lambda, &wv, &tolerances, sum_tol)?;
        let status = if check.partial.holds() && check.tail_holds {
            VerdictStatus::Dominates
        } else {
            VerdictStatus::InconclusiveAtCurrentPrecision
        };
        let residual = (record.sum - rational::to_f64(&w.value_sum())).abs();
        (status, Some(check), Some(residual))
    } else {
        let (tl, tw) = (tail_sums(&lambda), tail_sums(&wv));
        let ok = (1..g).all(|i| tl[i] <= tw[i] + 3.0 * record.tail_sum_stderr[i] + ROUNDING);
        let status = if ok { VerdictStatus::TailBoundsHold } else { VerdictStatus::TailBoundsInconclusive };
        (status, None, None)
    };

    let kz_limit = hyperelliptic_source(&id).filter(|_| g >= 2).map(|_| {
        let n = if id.stratum.orders().len() == 1 { 2 * g as u32 - 1 } else { 2 * g as u32 };
        let bound = Rational::new(n as i64 - 2, n as i64);
        KzRow {
            row: KzLimitRow { genus: g as u32, n, bound },
            consistent: lambda[1] >= rational::to_f64(&bound) - 3.0 * record.stderr[1] - ROUNDING,
        }
    });
    let zero_w_flag = w
        .entries
        .iter()
        .zip(&lambda)
        .zip(&record.stderr)
        .all(|((e, l), s)| !(e.is_exact() && e.value == Rational::from_integer(0)) || *l <= 3.0 * s + ROUNDING);

    Ok(Verdict {
        component: id,
        label: super::verdict::CONTINUITY_LABEL.to_string(),
        status,
        lambda_partial_sums: crate::polygons::partial_sums(&lambda)[1..].to_vec(),
        w_partial_sums: crate::polygons::partial_sums(&w.values())[1..].to_vec(),
        lambda,
        stderr: record.stderr.clone(),
        w: w.clone(),
        tolerances,
        check,
        sum_residual,
        sum_stderr: record.sum_stderr,
        kz_limit,
        zero_w_flag,
        seeds: record.seeds.clone(),
        steps_per_run: record.steps,
        runs: record.runs,
    })
}

/// Worker count: `SPECTRA_THREADS` when set to a positive integer, otherwise
/// the available parallelism.
pub fn worker_threads() -> usize {
    std::env::var("SPECTRA_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(worker_threads()).build().expect("thread pool")
}

fn pooled_run(id: &ComponentId, steps: u64, seeds: &[u64], batches: usize) -> Result<RunRecord, HarnessError> {
    use rayon::prelude::*;
    if seeds.is_empty() {
        return Err(HarnessError::NoSeeds);
    }
    let runs: Result<Vec<RunRecord>, _> = pool().install(|| {
        seeds.par_iter().map(|&seed| estimate_component(id, &EstimateConfig::new(steps, seed, batches))).collect()
    });
    Ok(merge_runs(&runs?)?)
}

/// Estimates `id` over the given seeds (one job per seed), pools the runs and
/// checks `λ ≥ w(id)`.
pub fn verify_component(id: &ComponentId, steps: u64, seeds: &[u64], batches: usize) -> Result<Verdict, HarnessError> {
    let w = w_catalog(id)?;
    let record = pooled_run(id, steps, seeds, batches)?;
    verdict_from_record(&record, &w)
}

/// Verdicts for every catalogued component of the given genus, in catalog order.
pub fn verify_genus(genus: u32, steps: u64, seeds: &[u64], batches: usize) -> Result<Vec<Verdict>, HarnessError> {
    component_catalog()?
        .iter()
        .filter(|c| c.id.genus() == genus)
        .map(|c| verify_component(&c.id, steps, seeds, batches))
        .collect()
}
