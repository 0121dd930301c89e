use std::collections::HashMap;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use super::record::{FullSpectrum, RunRecord, RUN_SCHEMA};
use super::{enforce_spectrum, SpectraError, SpectrumKind};
use crate::exchange::{intersection_form, ExchangeError, Iet, IntersectionForm, Permutation, ZorichWalker, DEFAULT_RUN_CAP};
use crate::strata::{find_component, ComponentId};

const MAX_RESTARTS: u32 = 16;
/// Relative size below which a Gram-Schmidt pivot counts as a collapse.
const COLLAPSE_RATIO: f64 = 1e-15;

/// Knobs of one estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateConfig {
    /// Accelerated steps, burn-in included.
    pub steps: u64,
    pub seed: u64,
    pub batches: usize,
    /// Orthonormalize at least every this many accelerated steps.
    pub qr_every: u32,
    /// Also orthonormalize once this much Teichmüller time has passed.
    pub qr_time: f64,
    /// Fraction of the steps discarded before batching starts.
    pub burn_in: f64,
    /// Track all `2g` exponents instead of the top `g`.
    pub full_spectrum: bool,
    pub run_cap: u64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            steps: 10_000_000,
            seed: 0,
            batches: 20,
            qr_every: 8,
            qr_time: 2.0,
            burn_in: 0.01,
            full_spectrum: false,
            run_cap: DEFAULT_RUN_CAP,
        }
    }
}

impl EstimateConfig {
    pub fn new(steps: u64, seed: u64, batches: usize) -> Self {
        Self { steps, seed, batches, ..Self::default() }
    }

    fn validate(&self) -> Result<(), SpectraError> {
        let bad = |m: &str| Err(SpectraError::InvalidConfig(m.into()));
        if self.steps < 10_000 {
            return bad("at least 10^4 steps are required");
        }
        if self.batches < 10 {
            return bad("at least 10 batches are required");
        }
        if self.qr_every == 0 || !(self.qr_time > 0.0) {
            return bad("orthonormalization cadence must be positive");
        }
        if !(0.0..0.5).contains(&self.burn_in) {
            return bad("burn-in fraction must lie in [0, 0.5)");
        }
        let main = self.steps - self.burn_in_steps();
        if main < self.batches as u64 {
            return bad("fewer steps than batches");
        }
        Ok(())
    }

    fn burn_in_steps(&self) -> u64 {
        (self.steps as f64 * self.burn_in).round() as u64
    }
}

/// Estimates for the catalog representative of `id`.
pub fn estimate_component(id: &ComponentId, config: &EstimateConfig) -> Result<RunRecord, SpectraError> {
    let comp = find_component(id)?;
    let mut rec = estimate_spectrum(&comp.representative, config)?;
    rec.component = Some(comp.id.clone());
    Ok(rec)
}

/// Runs one seeded trajectory and reports `λ_i = θ_i / θ_1` with batch-means errors.
pub fn estimate_spectrum(perm: &Permutation, config: &EstimateConfig) -> Result<RunRecord, SpectraError> {
    config.validate()?;
    let started = Instant::now();
    let form = intersection_form(perm);
    let g = form.genus();
    if g == 0 {
        return Err(SpectraError::InvalidConfig("genus zero permutation".into()));
    }
    let n = perm.len();
    let k = if config.full_spectrum { 2 * g } else { g };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let iet = Iet::new(perm.clone(), random_lengths(n, &mut rng))?;
    let mut walker = ZorichWalker::new(&iet, config.run_cap)?;
    let mut basis = Basis::random(&form, k, &mut rng);
    let mut kernels = KernelCache::default();

    let burn = config.burn_in_steps();
    let batch_len = (config.steps - burn) / config.batches as u64;
    let mut boundaries: Vec<u64> = (1..config.batches as u64).map(|b| burn + b * batch_len).collect();
    boundaries.push(config.steps);
    if burn > 0 {
        boundaries.insert(0, burn);
    }
    let mut next_boundary = 0;

    let mut logs = vec![0.0; k];
    let mut time = 0.0;
    let mut batch_logs: Vec<Vec<f64>> = Vec::with_capacity(config.batches);
    let mut batch_time: Vec<f64> = Vec::with_capacity(config.batches);
    let (mut since, mut dt) = (0u32, 0.0);
    let (mut resamples, mut restarts) = (0u64, 0u32);

    for s in 1..=config.steps {
        let ws = loop {
            match walker.step(&mut basis.data) {
                Ok(ws) => break ws,
                Err(ExchangeError::Tie { .. } | ExchangeError::UnboundedRun { .. }) => {
                    resamples += 1;
                    if resamples > config.steps {
                        return Err(SpectraError::InvalidConfig("trajectory keeps degenerating".into()));
                    }
                    walker.reset_lengths(random_lengths(n, &mut rng));
                }
                Err(e) => return Err(e.into()),
            }
        };
        time += ws.log_scale;
        dt += ws.log_scale;
        since += 1;
        let at_boundary = s == boundaries[next_boundary];
        if at_boundary || since >= config.qr_every || dt >= config.qr_time {
            if config.full_spectrum {
                basis.project_out(kernels.get(walker.permutation()));
            }
            if !basis.orthonormalize(&mut logs) {
                restarts += 1;
                if restarts > MAX_RESTARTS {
                    return Err(SpectraError::DegenerateBasis { restarts });
                }
                let form = intersection_form(walker.permutation());
                basis = Basis::random(&form, k, &mut rng);
            }
            since = 0;
            dt = 0.0;
        }
        if at_boundary {
            if !(burn > 0 && next_boundary == 0) {
                batch_logs.push(std::mem::replace(&mut logs, vec![0.0; k]));
                batch_time.push(time);
            } else {
                logs.iter_mut().for_each(|x| *x = 0.0);
            }
            time = 0.0;
            next_boundary += 1;
        }
    }

    let total_time: f64 = batch_time.iter().sum();
    let theta: Vec<f64> = (0..k).map(|i| batch_logs.iter().map(|b| b[i]).sum::<f64>() / total_time).collect();
    let batch_theta: Vec<Vec<f64>> =
        batch_logs.iter().zip(&batch_time).map(|(l, &t)| l.iter().map(|x| x / t).collect()).collect();
    // λ_1 varies only through θ_1 against its pooled value; the others are per-batch ratios.
    let batch_lambda: Vec<Vec<f64>> = batch_theta
        .iter()
        .map(|b| (0..k).map(|i| if i == 0 { b[0] / theta[0] } else { b[i] / b[0] }).collect())
        .collect();

    let ratio: Vec<f64> = theta.iter().map(|t| t / theta[0]).collect();
    let estimates = enforce_spectrum(&ratio[..g], SpectrumKind::Lyapunov)?;
    let stderr: Vec<f64> = (0..g).map(|i| batch_stderr(batch_lambda.iter().map(|b| b[i]))).collect();
    let partial_sum_stderr: Vec<f64> = (0..g)
        .map(|i| if i == 0 { 0.0 } else { batch_stderr(batch_lambda.iter().map(|b| b[1..=i].iter().sum())) })
        .collect();
    let tail_sum_stderr: Vec<f64> = (0..g)
        .map(|i| batch_stderr(batch_lambda.iter().map(|b| b[i.max(1)..g].iter().sum())))
        .collect();
    let sum_stderr = tail_sum_stderr[0];

    let full_spectrum = config.full_spectrum.then(|| {
        let stderr: Vec<f64> = (0..k).map(|i| batch_stderr(batch_lambda.iter().map(|b| b[i]))).collect();
        FullSpectrum::new(ratio.clone(), stderr)
    });

    Ok(RunRecord {
        schema: RUN_SCHEMA.to_string(),
        toolkit_version: crate::TOOLKIT_VERSION.to_string(),
        component: None,
        permutation: perm.to_string(),
        genus: g,
        seeds: vec![config.seed],
        steps: config.steps,
        batches: config.batches,
        qr_every: config.qr_every,
        burn_in_steps: burn,
        sum: estimates.sum(),
        estimates,
        stderr,
        partial_sum_stderr,
        tail_sum_stderr,
        sum_stderr,
        raw_exponents: theta[..g].to_vec(),
        teichmuller_time: total_time,
        resamples,
        restarts,
        runs: 1,
        full_spectrum,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

/// Standard error of the mean of the batch values.
fn batch_stderr(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let b = v.len() as f64;
    if v.len() < 2 {
        return 0.0;
    }
    let mean = v.iter().sum::<f64>() / b;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (b - 1.0);
    (var / b).sqrt()
}

/// Uniform point of the open simplex.
fn random_lengths(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// `k` row vectors of length `n`, stored contiguously.
struct Basis {
    n: usize,
    k: usize,
    data: Vec<f64>,
}

impl Basis {
    fn random(form: &IntersectionForm, k: usize, rng: &mut ChaCha8Rng) -> Self {
        let n = form.dim();
        loop {
            let mut data = Vec::with_capacity(n * k);
            for _ in 0..k {
                let x: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                data.extend(form.apply(&x));
            }
            let mut b = Basis { n, k, data };
            let mut scratch = vec![0.0; k];
            if b.orthonormalize(&mut scratch) {
                return b;
            }
        }
    }

    /// Modified Gram-Schmidt. Adds `ln |r_ii|` to `logs[i]`; returns false on a collapse.
    fn orthonormalize(&mut self, logs: &mut [f64]) -> bool {
        let n = self.n;
        for i in 0..self.k {
            let (done, rest) = self.data.split_at_mut(i * n);
            let v = &mut rest[..n];
            let before = dot(v, v).sqrt();
            for q in done.chunks(n) {
                let c = dot(q, v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            let r = dot(v, v).sqrt();
            if !r.is_finite() || r <= 0.0 || r < COLLAPSE_RATIO * before {
                return false;
            }
            v.iter_mut().for_each(|x| *x /= r);
            logs[i] += r.ln();
        }
        true
    }

    /// Removes components along the orthonormal rows of `kernel`.
    fn project_out(&mut self, kernel: &[Vec<f64>]) {
        for v in self.data.chunks_mut(self.n) {
            for q in kernel {
                let c = dot(q, v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormal bases of `ker Ω(π)` per permutation met along the walk.
#[derive(Default)]
struct KernelCache {
    map: HashMap<String, Vec<Vec<f64>>>,
}

impl KernelCache {
    fn get(&mut self, perm: &Permutation) -> &[Vec<f64>] {
        self.map.entry(perm.to_string()).or_insert_with(|| {
            let form = intersection_form(perm);
            let n = form.dim();
            let m = DMatrix::from_fn(n, n, |i, j| form.get(i, j) as f64);
            let svd = m.svd(false, true);
            let vt = svd.v_t.expect("requested");
            (0..n).filter(|&i| svd.singular_values[i] < 1e-9).map(|i| vt.row(i).iter().copied().collect()).collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h2() -> Permutation {
        "A B C D / D C B A".parse().unwrap()
    }

    #[test]
    fn config_validation() {
        let p = h2();
        assert!(matches!(estimate_spectrum(&p, &EstimateConfig::new(100, 1, 20)), Err(SpectraError::InvalidConfig(_))));
        assert!(matches!(estimate_spectrum(&p, &EstimateConfig::new(20_000, 1, 5)), Err(SpectraError::InvalidConfig(_))));
    }

    #[test]
    fn deterministic_and_normalized() {
        let cfg = EstimateConfig::new(20_000, 7, 10);
        let a = estimate_spectrum(&h2(), &cfg).unwrap();
        let b = estimate_spectrum(&h2(), &cfg).unwrap();
        assert_eq!(a.estimates, b.estimates);
        assert_eq!(a.stderr, b.stderr);
        assert_eq!(a.estimates.values[0], 1.0);
        assert_eq!(a.estimates.len(), 2);
        assert!(a.stderr.iter().all(|&s| s > 0.0));
        assert_eq!(a.seeds, vec![7]);
    }

    #[test]
    fn h2_second_exponent() {
        let r = estimate_spectrum(&h2(), &EstimateConfig::new(400_000, 3, 20)).unwrap();
        let l2 = r.estimates.values[1];
        assert!((l2 - 1.0 / 3.0).abs() < 0.02, "{l2}");
        assert!((r.raw_exponents[0] - 1.0).abs() < 0.02, "{:?}", r.raw_exponents);
    }

    #[test]
    fn full_spectrum_is_symmetric() {
        let cfg = EstimateConfig { full_spectrum: true, ..EstimateConfig::new(200_000, 5, 20) };
        let r = estimate_spectrum(&h2(), &cfg).unwrap();
        let full = r.full_spectrum.unwrap();
        assert_eq!(full.values.len(), 4);
        assert!((full.values[3] + 1.0).abs() < 0.05, "{:?}", full.values);
        assert!((full.values[2] + full.values[1]).abs() < 0.05, "{:?}", full.values);
    }

    #[test]
    fn stays_in_symplectic_subspace() {
        // Ω-image is preserved by the transport, so rank never grows.
        let p: Permutation = "A B C D E / E D C B A".parse().unwrap();
        let form = intersection_form(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let iet = Iet::new(p.clone(), random_lengths(5, &mut rng)).unwrap();
        let mut w = ZorichWalker::new(&iet, DEFAULT_RUN_CAP).unwrap();
        let mut b = Basis::random(&form, 1, &mut rng);
        let mut kernels = KernelCache::default();
        for _ in 0..500 {
            w.step(&mut b.data).unwrap();
            let mut logs = [0.0];
            assert!(b.orthonormalize(&mut logs));
            let kernel = kernels.get(w.permutation()).to_vec();
            assert_eq!(kernel.len(), 1);
            assert!(dot(&kernel[0], &b.data).abs() < 1e-8);
        }
    }
}
