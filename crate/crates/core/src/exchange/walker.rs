use super::iet::compare;
use super::{ExchangeError, Iet, Permutation, StepType};

/// In-place Zorich-accelerated induction used by the estimators.
///
/// Each accelerated step transports a set of row vectors by the step's
/// cocycle (`v[loser] += v[winner]` per elementary step) and renormalizes the
/// lengths to total one. Whole cycles of a same-type run are applied in one
/// shot: during a run the winner keeps its position and the tail of the
/// rearranged row rotates, so `q` full rotations subtract `q` times the tail
/// length and add `q` times the winner coordinate to every tail coordinate.
#[derive(Debug, Clone)]
pub struct ZorichWalker {
    perm: Permutation,
    lengths: Vec<f64>,
    cap: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkStep {
    pub step: StepType,
    pub count: u64,
    /// `ln(1 / total)` of the lengths before renormalization.
    pub log_scale: f64,
}

impl ZorichWalker {
    pub fn new(iet: &Iet, cap: u64) -> Result<Self, ExchangeError> {
        if !iet.permutation().is_irreducible() {
            return Err(ExchangeError::Reducible(iet.permutation().to_string()));
        }
        Ok(Self { perm: iet.permutation().clone(), lengths: iet.lengths().to_vec(), cap })
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Replaces the lengths, keeping the permutation.
    pub fn reset_lengths(&mut self, lengths: Vec<f64>) {
        assert_eq!(lengths.len(), self.lengths.len());
        self.lengths = lengths;
    }

    /// One accelerated step. `vectors` holds row vectors of length `dim()`
    /// stored contiguously.
    pub fn step(&mut self, vectors: &mut [f64]) -> Result<WalkStep, ExchangeError> {
        let n = self.perm.len();
        let l = &mut self.lengths;
        let (top, bottom) = self.perm.rows_mut();
        let step = compare(l[top[n - 1]], l[bottom[n - 1]])?;
        let (winner, row) = match step {
            StepType::Top => (bottom[n - 1], top),
            StepType::Bottom => (top[n - 1], bottom),
        };
        let p = row.iter().position(|&x| x == winner).expect("winner present");
        let tail = p + 1..n;
        let r = n - 1 - p;

        let s: f64 = row[tail.clone()].iter().map(|&t| l[t]).sum();
        let mut q = (l[winner] / s).floor();
        if q >= 1.0 && l[winner] - q * s <= 0.0 {
            q -= 1.0;
        }
        let mut count = 0u64;
        if q >= 1.0 {
            if q * r as f64 > self.cap as f64 {
                return Err(ExchangeError::UnboundedRun { cap: self.cap });
            }
            count = q as u64 * r as u64;
            l[winner] -= q * s;
            for v in vectors.chunks_mut(n) {
                let w = v[winner] * q;
                for &t in &row[tail.clone()] {
                    v[t] += w;
                }
            }
        }
        loop {
            let loser = row[n - 1];
            match compare_for(step, l[loser], l[winner]) {
                Ok(true) => {}
                Ok(false) => break,
                Err(e) if count == 0 => return Err(e),
                Err(_) => break,
            }
            l[winner] -= l[loser];
            for v in vectors.chunks_mut(n) {
                v[loser] += v[winner];
            }
            row[tail.clone()].rotate_right(1);
            count += 1;
        }
        if count > self.cap {
            return Err(ExchangeError::UnboundedRun { cap: self.cap });
        }

        let total: f64 = l.iter().sum();
        for x in l.iter_mut() {
            *x /= total;
        }
        Ok(WalkStep { step, count, log_scale: -total.ln() })
    }
}

/// Whether the run of type `step` continues with `loser` absorbed by `winner`.
fn compare_for(step: StepType, loser: f64, winner: f64) -> Result<bool, ExchangeError> {
    let t = match step {
        StepType::Top => compare(loser, winner)?,
        StepType::Bottom => compare(winner, loser)?,
    };
    Ok(t == step)
}
