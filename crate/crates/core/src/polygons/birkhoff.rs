use serde::Serialize;

use super::PolygonError;

const STOCHASTIC_TOL: f64 = 1e-12;
const ZERO_TOL: f64 = 1e-14;

/// Nonnegative square matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochastic {
    n: usize,
    data: Vec<f64>,
}

impl DoublyStochastic {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, PolygonError> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(PolygonError::NotDoublyStochastic("matrix must be square and nonempty".into()));
        }
        let data: Vec<f64> = rows.concat();
        if let Some(x) = data.iter().find(|x| !x.is_finite() || **x < -STOCHASTIC_TOL) {
            return Err(PolygonError::NotDoublyStochastic(format!("entry {x} is negative")));
        }
        for i in 0..n {
            let row: f64 = data[i * n..(i + 1) * n].iter().sum();
            let col: f64 = (0..n).map(|r| data[r * n + i]).sum();
            if (row - 1.0).abs() > STOCHASTIC_TOL || (col - 1.0).abs() > STOCHASTIC_TOL {
                return Err(PolygonError::NotDoublyStochastic(format!("line {i} sums to {row} / {col}")));
            }
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// `P x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.data.chunks(self.n).map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    fn left_mul_t_transform(&mut self, j: usize, k: usize, t: f64) {
        let n = self.n;
        for c in 0..n {
            let (a, b) = (self.data[j * n + c], self.data[k * n + c]);
            self.data[j * n + c] = (1.0 - t) * a + t * b;
            self.data[k * n + c] = t * a + (1.0 - t) * b;
        }
    }
}

/// One Birkhoff term: `weight * Perm`, where `perm[i]` is the column used by row `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirkhoffTerm {
    pub weight: f64,
    pub perm: Vec<usize>,
}

/// Doubly stochastic `P` with `μ = P λ`, built from T-transforms, when the
/// decreasing vector `λ` majorizes the decreasing vector `μ`; `None` otherwise.
pub fn t_transform_certificate(lambda: &[f64], mu: &[f64], tol: f64) -> Option<DoublyStochastic> {
    let n = lambda.len();
    if mu.len() != n || n == 0 {
        return None;
    }
    let mut x = lambda.to_vec();
    let mut p = DoublyStochastic::identity(n);
    for _ in 0..n {
        let Some(j) = (0..n).rev().find(|&j| x[j] > mu[j] + tol) else {
            break;
        };
        let k = (j + 1..n).find(|&k| x[k] < mu[k] - tol)?;
        let spread = x[j] - x[k];
        if spread <= 0.0 {
            return None;
        }
        let delta = (x[j] - mu[j]).min(mu[k] - x[k]);
        let t = delta / spread;
        x[j] -= delta;
        x[k] += delta;
        p.left_mul_t_transform(j, k, t);
    }
    let image = p.apply(lambda);
    let scale = 1.0 + lambda.iter().map(|v| v.abs()).fold(0.0, f64::max);
    image.iter().zip(mu).all(|(a, b)| (a - b).abs() <= 10.0 * tol.max(1e-12) * scale).then_some(p)
}

/// Greedy Birkhoff-von Neumann decomposition.
///
/// Each round takes, among the perfect matchings on the current support, one
/// whose smallest entry is as large as possible (lexicographically smallest
/// such permutation), subtracts it with that weight and zeroes at least one
/// entry. The result has at most `(n-1)^2 + 1` terms.
pub fn birkhoff_decompose(p: &DoublyStochastic) -> Result<Vec<BirkhoffTerm>, PolygonError> {
    let n = p.n;
    let mut r: Vec<f64> = p.data.iter().map(|&x| if x > ZERO_TOL { x } else { 0.0 }).collect();
    let mut terms = Vec::new();
    let max_terms = (n - 1) * (n - 1) + 1;
    while r.iter().any(|&x| x > 0.0) {
        if terms.len() == max_terms {
            return Err(PolygonError::Decomposition(format!("residual remains after {max_terms} terms")));
        }
        let mut levels: Vec<f64> = r.iter().copied().filter(|&x| x > 0.0).collect();
        levels.sort_by(|a, b| b.total_cmp(a));
        levels.dedup();
        // Largest threshold whose support still carries a perfect matching.
        let (mut lo, mut hi) = (0usize, levels.len() - 1);
        if !has_perfect_matching(n, |i, j| r[i * n + j] >= levels[hi], &[]) {
            if terms.is_empty() {
                return Err(PolygonError::Decomposition("support carries no perfect matching".into()));
            }
            break;
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if has_perfect_matching(n, |i, j| r[i * n + j] >= levels[mid], &[]) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let threshold = levels[hi];
        let allowed = |i: usize, j: usize| r[i * n + j] >= threshold;
        let mut fixed: Vec<usize> = Vec::with_capacity(n);
        for _ in 0..n {
            let col = (0..n)
                .filter(|c| !fixed.contains(c) && allowed(fixed.len(), *c))
                .find(|&c| {
                    let mut trial = fixed.clone();
                    trial.push(c);
                    has_perfect_matching(n, allowed, &trial)
                })
                .expect("a matching exists above the threshold");
            fixed.push(col);
        }
        let weight = fixed.iter().enumerate().map(|(i, &j)| r[i * n + j]).fold(f64::INFINITY, f64::min);
        for (i, &j) in fixed.iter().enumerate() {
            let v = r[i * n + j] - weight;
            r[i * n + j] = if v > ZERO_TOL { v } else { 0.0 };
        }
        terms.push(BirkhoffTerm { weight, perm: fixed });
    }
    Ok(terms)
}

/// Whether rows `prefix.len()..n` can be matched to the unused columns,
/// with rows `0..prefix.len()` already assigned to `prefix`.
fn has_perfect_matching(n: usize, allowed: impl Fn(usize, usize) -> bool, prefix: &[usize]) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, &c) in prefix.iter().enumerate() {
        owner[c] = Some(i);
    }
    fn augment(
        row: usize,
        n: usize,
        allowed: &impl Fn(usize, usize) -> bool,
        owner: &mut [Option<usize>],
        seen: &mut [bool],
        frozen: usize,
    ) -> bool {
        for c in 0..n {
            if seen[c] || !allowed(row, c) {
                continue;
            }
            seen[c] = true;
            match owner[c] {
                Some(o) if o < frozen => continue,
                Some(o) => {
                    if augment(o, n, allowed, owner, seen, frozen) {
                        owner[c] = Some(row);
                        return true;
                    }
                }
                None => {
                    owner[c] = Some(row);
                    return true;
                }
            }
        }
        false
    }
    let frozen = prefix.len();
    (frozen..n).all(|row| {
        let mut seen = vec![false; n];
        augment(row, n, &allowed, &mut owner, &mut seen, frozen)
    })
}

/// `Σ weight * Perm` as a dense matrix.
pub fn birkhoff_reconstruct(terms: &[BirkhoffTerm], n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for t in terms {
        for (i, &j) in t.perm.iter().enumerate() {
            m[i][j] += t.weight;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_err(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
        a.iter().flatten().zip(b.iter().flatten()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn identity() {
        let terms = birkhoff_decompose(&DoublyStochastic::identity(3)).unwrap();
        assert_eq!(terms, vec![BirkhoffTerm { weight: 1.0, perm: vec![0, 1, 2] }]);
    }

    #[test]
    fn half_half() {
        let p = DoublyStochastic::new(vec![vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
        let terms = birkhoff_decompose(&p).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0], BirkhoffTerm { weight: 0.5, perm: vec![0, 1] });
        assert_eq!(terms[1], BirkhoffTerm { weight: 0.5, perm: vec![1, 0] });
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(DoublyStochastic::new(vec![vec![0.5, 0.5], vec![0.5, 0.6]]).is_err());
        assert!(DoublyStochastic::new(vec![vec![1.5, -0.5], vec![-0.5, 1.5]]).is_err());
        assert!(DoublyStochastic::new(vec![vec![1.0]]).is_ok());
    }

    #[test]
    fn known_combination() {
        let perms = [vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]];
        let weights = [0.5, 0.3, 0.2];
        let mut rows = vec![vec![0.0; 3]; 3];
        for (p, w) in perms.iter().zip(weights) {
            for (i, &j) in p.iter().enumerate() {
                rows[i][j] += w;
            }
        }
        let ds = DoublyStochastic::new(rows.clone()).unwrap();
        let terms = birkhoff_decompose(&ds).unwrap();
        assert_eq!(terms.len(), 3);
        assert!(max_err(&birkhoff_reconstruct(&terms, 3), &rows) < 1e-12);
        assert_eq!(terms[0].perm, vec![1, 2, 0]);
    }

    #[test]
    fn certificate() {
        let p = t_transform_certificate(&[3.0, 1.0, 0.0], &[2.0, 1.0, 1.0], 1e-12).unwrap();
        let img = p.apply(&[3.0, 1.0, 0.0]);
        assert!(img.iter().zip([2.0, 1.0, 1.0]).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(t_transform_certificate(&[1.0, 1.0], &[2.0, 0.0], 1e-12).is_none());
    }
}
