use crate::strata::Stratum;

use super::Permutation;

/// Antisymmetric intersection matrix `Ω(π)` indexed by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm {
    n: usize,
    omega: Vec<i64>,
}

impl IntersectionForm {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.omega[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.omega.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn rank(&self) -> usize {
        integer_rank(&self.omega, self.n)
    }

    /// Genus of the suspension, `rank / 2`.
    pub fn genus(&self) -> usize {
        self.rank() / 2
    }

    /// `Ω x` for a real vector `x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.omega
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum())
            .collect()
    }
}

/// `Ω[a][b] = +1` when `a` precedes `b` on top and follows it on the bottom,
/// `-1` in the opposite situation, `0` otherwise.
pub fn intersection_form(perm: &Permutation) -> IntersectionForm {
    let n = perm.len();
    let mut tpos = vec![0usize; n];
    let mut bpos = vec![0usize; n];
    for (i, &l) in perm.top().iter().enumerate() {
        tpos[l] = i;
    }
    for (i, &l) in perm.bottom().iter().enumerate() {
        bpos[l] = i;
    }
    let mut omega = vec![0i64; n * n];
    for a in 0..n {
        for b in 0..n {
            omega[a * n + b] = if tpos[a] < tpos[b] && bpos[a] > bpos[b] {
                1
            } else if tpos[a] > tpos[b] && bpos[a] < bpos[b] {
                -1
            } else {
                0
            };
        }
    }
    IntersectionForm { n, omega }
}

fn integer_rank(m: &[i64], n: usize) -> usize {
    let mut a: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| a[r * n + col] != 0) else {
            continue;
        };
        for j in 0..n {
            a.swap(rank * n + j, p * n + j);
        }
        let pivot = a[rank * n + col];
        for r in 0..n {
            if r == rank || a[r * n + col] == 0 {
                continue;
            }
            let f = a[r * n + col];
            for j in 0..n {
                a[r * n + j] = a[r * n + j] * pivot - a[rank * n + j] * f;
            }
            let g = a[r * n..r * n + n].iter().fold(0i128, |g, &x| gcd(g, x));
            if g > 1 {
                for j in 0..n {
                    a[r * n + j] /= g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Zero orders of the suspension of `perm`, including marked points of order 0.
///
/// The suspension polygon has top vertices `P_0..P_n` and bottom vertices
/// `Q_0..Q_n` with `P_0 = Q_0` and `P_n = Q_n`; gluing the two sides of each
/// label identifies their endpoints. Every class of identified vertices is a
/// singularity, and its cone angle is `2π` times the number of inner top
/// vertices in the class (each of those corners contains the downward
/// direction exactly once).
pub fn singularity_data(perm: &Permutation) -> Stratum {
    let n = perm.len();
    let p = |i: usize| i;
    let q = |j: usize| n + 1 + j;
    let mut uf = UnionFind::new(2 * n + 2);
    uf.union(p(0), q(0));
    uf.union(p(n), q(n));
    let mut bpos = vec![0usize; n];
    for (j, &l) in perm.bottom().iter().enumerate() {
        bpos[l] = j;
    }
    for (i, &l) in perm.top().iter().enumerate() {
        let j = bpos[l];
        uf.union(p(i), q(j));
        uf.union(p(i + 1), q(j + 1));
    }
    let mut corners = std::collections::BTreeMap::<usize, u32>::new();
    for i in 1..n {
        *corners.entry(uf.find(p(i))).or_default() += 1;
    }
    let mut orders: Vec<u32> = corners.values().map(|c| c - 1).collect();
    orders.sort_unstable_by(|a, b| b.cmp(a));
    Stratum::from_orders(orders)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    // Oracle: Ω from its definition via explicit position lookups.
    fn omega_oracle(p: &Permutation) -> Vec<Vec<i64>> {
        let n = p.len();
        let mut out = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let before_top = p.top_position(a) < p.top_position(b);
                let before_bottom = p.bottom_position(a) < p.bottom_position(b);
                if a != b && before_top != before_bottom {
                    out[a][b] = if before_top { 1 } else { -1 };
                }
            }
        }
        out
    }

    #[test]
    fn torus_form() {
        let f = intersection_form(&perm("A B / B A"));
        assert_eq!(f.rows(), vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(f.rank(), 2);
        assert_eq!(f.genus(), 1);
    }

    #[test]
    fn genus_two_form() {
        let p = perm("A B C D / D C B A");
        let f = intersection_form(&p);
        assert_eq!(f.rows(), omega_oracle(&p));
        assert_eq!(f.rank(), 4);
        let p = perm("A B C D E / E D C B A");
        assert_eq!(intersection_form(&p).rank(), 4);
    }

    #[test]
    fn singularities_small() {
        assert_eq!(singularity_data(&perm("A B / B A")).to_string(), "H(0)");
        assert_eq!(singularity_data(&perm("A B C D / D C B A")).to_string(), "H(2)");
        assert_eq!(singularity_data(&perm("A B C D E / E D C B A")).to_string(), "H(1,1)");
        assert_eq!(singularity_data(&perm("A B C / C B A")).to_string(), "H(0,0)");
        assert_eq!(singularity_data(&perm("A B C D E F / F E D C B A")).to_string(), "H(4)");
    }

    #[test]
    fn rank_matches_singularities() {
        for s in ["A B C D E F / B F E D A C", "A B C D E F G / G C F E B D A", "A B C D E F G H / E G D F A C H B"] {
            let p = perm(s);
            let st = singularity_data(&p);
            let k = st.orders().len();
            assert_eq!(intersection_form(&p).rank(), p.len() + 1 - k);
        }
    }
}
