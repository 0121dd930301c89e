//! Seeded randomized suites shared by the property tests and the acceptance run.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use spectra_core::exchange::{rauzy_step, zorich_step, ExchangeError, Iet, ZorichWalker, DEFAULT_RUN_CAP};
use spectra_core::polygons::{
    birkhoff_decompose, birkhoff_reconstruct, convex_function_test, dominates, schur_diagonal_check,
    symmetric_form_inequality, t_transform_certificate,
};
use spectra_core::strata::component_catalog;
use spectra_core::{CocycleMatrix, Permutation};

/// Outcome of a counted suite.
#[derive(Debug, Clone)]
pub struct Suite {
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Suite {
    fn new() -> Self {
        Suite { cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Convex combination of `k` random permutation matrices.
pub fn random_doubly_stochastic(rng: &mut impl Rng, n: usize, k: usize) -> Vec<Vec<f64>> {
    let weights: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    let mut m = vec![vec![0.0; n]; n];
    for w in weights {
        let p = random_permutation(rng, n);
        for (i, &j) in p.iter().enumerate() {
            m[i][j] += w / total;
        }
    }
    m
}

fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// A pair of decreasing vectors with equal sums. Cycles through three
/// generators: small integers (exact ties), images under a random doubly
/// stochastic matrix (always majorized) and unrelated real vectors.
pub fn majorization_pair(rng: &mut impl Rng, case: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rng.random_range(1..=8);
    match case % 3 {
        0 => {
            let lambda: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            let mut mu: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            // Move units until the totals agree.
            let mut diff: f64 = lambda.iter().sum::<f64>() - mu.iter().sum::<f64>();
            while diff != 0.0 {
                let i = rng.random_range(0..n);
                if diff > 0.0 {
                    mu[i] += 1.0;
                    diff -= 1.0;
                } else if mu[i] > 0.0 {
                    mu[i] -= 1.0;
                    diff += 1.0;
                }
            }
            (sorted_desc(lambda), sorted_desc(mu))
        }
        1 => {
            let lambda = sorted_desc((0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect());
            let k = rng.random_range(1..=4);
            let p = random_doubly_stochastic(rng, n, k);
            (lambda.clone(), sorted_desc(apply(&p, &lambda)))
        }
        _ => {
            let lambda = sorted_desc((0..n).map(|_| rng.random::<f64>()).collect());
            let mut mu: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let shift = (lambda.iter().sum::<f64>() - mu.iter().sum::<f64>()) / n as f64;
            mu.iter_mut().for_each(|x| *x += shift);
            (lambda, sorted_desc(mu))
        }
    }
}

/// Partial-sum dominance, the convex-function criterion and the T-transform
/// certificate agree; every certificate decomposes into permutation matrices
/// that reconstruct it to within `1e-9`.
pub fn majorization_suite(cases: usize, seed: u64) -> Suite {
    const TOL: f64 = 1e-9;
    let mut rng = rng(seed);
    let mut suite = Suite::new();
    for case in 0..cases {
        let (lambda, mu) = majorization_pair(&mut rng, case);
        let by_sums = dominates(&lambda, &mu, TOL).unwrap().holds();
        let by_convex = convex_function_test(&lambda, &mu, None, TOL).unwrap();
        let cert = t_transform_certificate(&lambda, &mu, TOL);
        let mut err = 0.0f64;
        let mut image_err = 0.0f64;
        if let Some(p) = &cert {
            let terms = birkhoff_decompose(p).unwrap();
            let rebuilt = birkhoff_reconstruct(&terms, p.dim());
            for (i, row) in rebuilt.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    err = err.max((x - p.get(i, j)).abs());
                }
            }
            image_err = p.apply(&lambda).iter().zip(&mu).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        }
        let ok = by_sums == by_convex && by_sums == cert.is_some() && err < 1e-9 && image_err < 1e-8;
        suite.record(ok, || {
            format!(
                "λ={lambda:?} μ={mu:?}: sums {by_sums}, convex {by_convex}, certificate {}, reconstruction {err:e}",
                cert.is_some()
            )
        });
    }
    suite
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// The diagonal of a random Hermitian matrix is majorized by its spectrum.
pub fn schur_suite(cases: usize, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let mut suite = Suite::new();
    for _ in 0..cases {
        let n = rng.random_range(1..=8);
        let a = DMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng));
        let h = (&a + a.adjoint()).scale(0.5);
        let r = schur_diagonal_check(&h);
        suite.record(r == Ok(true), || format!("n={n}: {r:?}"));
    }
    suite
}

/// `|αB|² >= |αBαᵀ|²` for random complex symmetric `B` and unit `α`.
pub fn symmetric_form_suite(cases: usize, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let mut suite = Suite::new();
    for _ in 0..cases {
        let n = rng.random_range(1..=6);
        let a = DMatrix::from_fn(n, n, |_, _| complex_normal(&mut rng));
        let b = &a + a.transpose();
        let alpha = DVector::from_fn(n, |_, _| complex_normal(&mut rng));
        let alpha = alpha.unscale(alpha.norm());
        let r = symmetric_form_inequality(&b, &alpha);
        suite.record(matches!(r, Ok(f) if f.ok), || format!("n={n}: {r:?}"));
    }
    suite
}

pub fn random_lengths(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Representative permutations of every catalogued component up to genus `g_max`.
pub fn representatives(g_max: u32) -> Vec<(String, Permutation)> {
    component_catalog()
        .unwrap()
        .iter()
        .filter(|c| c.id.genus() <= g_max)
        .map(|c| (c.id.to_string(), c.representative.clone()))
        .collect()
}

fn close(a: &[f64], b: &[f64], rel: f64) -> bool {
    let scale = a.iter().chain(b).fold(0.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= rel * scale)
}

/// Along seeded Zorich trajectories every step matrix is unimodular and maps
/// the new lengths back onto the old ones, up to the rounding accumulated over
/// the run. Counts one case per step.
pub fn cocycle_suite(steps_per_component: usize, g_max: u32, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let mut suite = Suite::new();
    for (name, perm) in representatives(g_max) {
        let n = perm.len();
        let mut iet = Iet::new(perm, random_lengths(&mut rng, n)).unwrap();
        let mut done = 0;
        while done < steps_per_component {
            let z = match zorich_step(&iet, DEFAULT_RUN_CAP) {
                Ok(z) => z,
                Err(ExchangeError::Tie { .. } | ExchangeError::UnboundedRun { .. }) => {
                    iet = Iet::new(iet.permutation().clone(), random_lengths(&mut rng, n)).unwrap();
                    continue;
                }
                Err(e) => panic!("{name}: {e}"),
            };
            let det = z.matrix.determinant();
            let back = z.matrix.apply(z.iet.lengths());
            let positive = z.iet.lengths().iter().all(|&x| x > 0.0);
            // Each elementary step rounds once, so a run of `count` steps may drift by that many ulps.
            let rel = 1e-12 + 4.0 * f64::EPSILON * z.count as f64;
            suite.record(det == 1 && positive && close(&back, iet.lengths(), rel), || {
                format!("{name} step {done}: det {det}, lengths {:?} -> {:?}", iet.lengths(), z.iet.lengths())
            });
            iet = z.iet.normalized().0;
            done += 1;
        }
    }
    suite
}

/// Each accelerated step equals the product of its elementary steps, both as
/// computed by `zorich_step` and as transported in place by the walker.
/// Counts one case per accelerated step.
pub fn acceleration_suite(steps_per_component: usize, g_max: u32, seed: u64) -> Suite {
    let mut rng = rng(seed);
    let mut suite = Suite::new();
    for (name, perm) in representatives(g_max) {
        let n = perm.len();
        let start = Iet::new(perm, random_lengths(&mut rng, n)).unwrap();
        let mut walker = ZorichWalker::new(&start, DEFAULT_RUN_CAP).unwrap();
        let mut done = 0;
        while done < steps_per_component {
            let iet = Iet::new(walker.permutation().clone(), walker.lengths().to_vec()).unwrap();
            let z = match zorich_step(&iet, DEFAULT_RUN_CAP) {
                Ok(z) => z,
                Err(_) => {
                    walker.reset_lengths(random_lengths(&mut rng, n));
                    continue;
                }
            };
            // Replay the run one elementary step at a time.
            let mut cur = iet.clone();
            let mut product = CocycleMatrix::identity(n);
            for _ in 0..z.count {
                let r = rauzy_step(&cur).unwrap();
                product = product.checked_mul(&r.matrix).expect("no overflow within one run");
                cur = r.iet;
            }
            let mut basis: Vec<f64> = (0..n * n).map(|k| if k / n == k % n { 1.0 } else { 0.0 }).collect();
            let w = walker.step(&mut basis).unwrap();
            let walked: Vec<Vec<i64>> = basis.chunks(n).map(|r| r.iter().map(|&x| x as i64).collect()).collect();
            let same_perm = walker.permutation() == z.iet.permutation() && cur.permutation() == z.iet.permutation();
            let ok = product == z.matrix && walked == z.matrix.rows() && w.count == z.count && w.step == z.step && same_perm;
            suite.record(ok, || format!("{name} step {done}: count {} vs {}", w.count, z.count));
            done += 1;
        }
    }
    suite
}
