use std::fmt;

/// Square integer matrix produced by the induction.
///
/// For a single step with winner `w` and absorbed label `l` this is the
/// identity plus a one in position `(w, l)`; accelerated steps multiply these
/// in trajectory order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CocycleMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl CocycleMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    pub fn elementary(n: usize, winner: usize, loser: usize) -> Self {
        let mut m = Self::identity(n);
        m.entries[winner * n + loser] += 1;
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, entries: rows.concat() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Product `self * rhs`, or `None` on `i64` overflow.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a.checked_mul(rhs.entries[k * n + j])?;
                    out[i * n + j] = out[i * n + j].checked_add(t)?;
                }
            }
        }
        Some(Self { n, entries: out })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j];
            }
        }
        Self { n, entries: out }
    }

    /// `M * x`: maps lengths after the step back to lengths before it.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.entries
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum())
            .collect()
    }

    /// `v * M`: transport of a cohomology row vector.
    pub fn act_on_row(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|j| (0..n).map(|i| v[i] * self.entries[i * n + j] as f64).sum()).collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        let n = self.n;
        let mut a: Vec<i128> = self.entries.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        sign * a[n * n - 1]
    }
}

impl fmt::Display for CocycleMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.n) {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_is_unimodular() {
        let m = CocycleMatrix::elementary(4, 3, 0);
        assert_eq!(m.determinant(), 1);
        assert_eq!(m.apply(&[0.1, 0.2, 0.3, 0.3]), vec![0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn determinant_small() {
        let m = CocycleMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(m.determinant(), -1);
        let m = CocycleMatrix::from_rows(&[vec![2, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(m.determinant(), 1);
        let m = CocycleMatrix::from_rows(&[vec![0, 0, 1], vec![0, 2, 0], vec![3, 0, 0]]);
        assert_eq!(m.determinant(), -6);
    }

    #[test]
    fn row_action_matches_transpose() {
        let m = CocycleMatrix::from_rows(&[vec![1, 2], vec![0, 1]]);
        let v = [1.0, 3.0];
        assert_eq!(m.act_on_row(&v), m.transpose().apply(&v));
        assert_eq!(m.checked_mul(&m).unwrap(), CocycleMatrix::from_rows(&[vec![1, 4], vec![0, 1]]));
    }
}
