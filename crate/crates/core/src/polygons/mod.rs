//! Convex polygons of type vectors and the dominance (majorization) order.
//!
//! A type vector `μ = (μ_1 >= ... >= μ_n)` is drawn as the concave polygon
//! through `(0, 0), (1, μ_1), (2, μ_1 + μ_2), ...`. `λ` dominates `μ` when
//! the polygon of `λ` lies on or above that of `μ` with the same endpoint.
//! Everything here uses that single decreasing-slope convention; increasing
//! conventions (Newton polygons) are converted on input.

mod birkhoff;
mod export;
mod matrix;
mod newton;

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;
use serde::{Deserialize, Serialize};

pub use birkhoff::{birkhoff_decompose, birkhoff_reconstruct, t_transform_certificate, BirkhoffTerm, DoublyStochastic};
pub use export::{polygon_csv, svg_overlay, PolygonSeries};
pub use matrix::{schur_diagonal_check, symmetric_form_inequality, FormInequality};
pub use newton::{padic_valuation, valuation_polygon};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PolygonError {
    #[error("type vector is not weakly decreasing at index {0}")]
    NotSorted(usize),
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("totals differ by {0:e}")]
    SumMismatch(f64),
    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("row vector does not have unit norm")]
    NotUnit,
    #[error("valuation data has no constant term with valuation 0")]
    MissingConstantTerm,
    #[error("polygons do not share endpoints")]
    EndpointMismatch,
    #[error("Birkhoff extraction broke down: {0}")]
    Decomposition(String),
}

/// Numbers the polygon machinery runs on: `f64` and exact rationals.
pub trait Scalar: Copy + PartialOrd + Num + Neg<Output = Self> + Debug {}

impl<T: Copy + PartialOrd + Num + Neg<Output = T> + Debug> Scalar for T {}

/// Weakly decreasing vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> TypeVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self, PolygonError> {
        if let Some(i) = values.windows(2).position(|w| w[0] < w[1]) {
            return Err(PolygonError::NotSorted(i + 1));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Polygon stored by its heights at `x = 0, 1, ..., n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon<T> {
    heights: Vec<T>,
}

impl<T: Scalar> ConvexPolygon<T> {
    pub fn heights(&self) -> &[T] {
        &self.heights
    }

    pub fn vertices(&self) -> Vec<(usize, T)> {
        self.heights.iter().copied().enumerate().collect()
    }

    /// Number of unit segments.
    pub fn width(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn slopes(&self) -> Vec<T> {
        self.heights.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn is_concave(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] >= w[1])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> ConvexPolygon<U> {
        ConvexPolygon { heights: self.heights.iter().map(|&h| f(h)).collect() }
    }
}

/// Partial-sum polygon `(0,0), (1, μ_1), (2, μ_1 + μ_2), ...`.
pub fn polygon_of<T: Scalar>(mu: &TypeVector<T>) -> ConvexPolygon<T> {
    ConvexPolygon { heights: partial_sums(mu.values()) }
}

pub(crate) fn partial_sums<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut acc = T::zero();
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push(acc);
    for &x in v {
        acc = acc + x;
        out.push(acc);
    }
    out
}

fn abs<T: Scalar>(x: T) -> T {
    if x < T::zero() {
        -x
    } else {
        x
    }
}

/// Outcome of a dominance comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Dominance<T> {
    Dominates,
    /// The partial sum over the first `index` entries falls short by `deficit`.
    FailsAt { index: usize, deficit: T },
    /// Totals differ by `delta = Σλ - Σμ`.
    SumMismatch { delta: T },
}

impl<T> Dominance<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Dominance::Dominates)
    }
}

/// `λ ≥ μ`: `Σ_{j<=i} λ_j >= Σ_{j<=i} μ_j - tol` for `i < n` and
/// `|Σ λ - Σ μ| <= tol`. Use `tol = 0` for exact inputs.
pub fn dominates<T: Scalar>(lambda: &[T], mu: &[T], tol: T) -> Result<Dominance<T>, PolygonError> {
    let slack = vec![tol; lambda.len().saturating_sub(1)];
    dominates_with_slack(lambda, mu, &slack, tol)
}

/// As [`dominates`] with a separate slack for each partial sum
/// (`slack[i-1]` for the sum of the first `i` entries) and for the total.
pub fn dominates_with_slack<T: Scalar>(
    lambda: &[T],
    mu: &[T],
    slack: &[T],
    sum_tol: T,
) -> Result<Dominance<T>, PolygonError> {
    if lambda.len() != mu.len() {
        return Err(PolygonError::LengthMismatch(lambda.len(), mu.len()));
    }
    let n = lambda.len();
    let (pl, pm) = (partial_sums(lambda), partial_sums(mu));
    for i in 1..n {
        let gap = pl[i] - pm[i];
        if gap < -slack[i - 1] {
            return Ok(Dominance::FailsAt { index: i, deficit: -gap });
        }
    }
    let delta = pl[n] - pm[n];
    if abs(delta) > sum_tol {
        return Ok(Dominance::SumMismatch { delta });
    }
    Ok(Dominance::Dominates)
}

/// `upper` lies on or above `lower` at every integer abscissa; endpoints must agree within `tol`.
pub fn polygon_above<T: Scalar>(upper: &ConvexPolygon<T>, lower: &ConvexPolygon<T>, tol: T) -> Result<bool, PolygonError> {
    let (u, l) = (upper.heights(), lower.heights());
    if u.len() != l.len() || abs(u[0] - l[0]) > tol || abs(u[u.len() - 1] - l[l.len() - 1]) > tol {
        return Err(PolygonError::EndpointMismatch);
    }
    Ok(u.iter().zip(l).all(|(&a, &b)| a - b >= -tol))
}

/// Convex test function for the Hardy-Littlewood-Pólya criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvexFn {
    Square,
    Exp,
    /// `|x - c|`
    Hinge(f64),
}

impl ConvexFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ConvexFn::Square => x * x,
            ConvexFn::Exp => x.exp(),
            ConvexFn::Hinge(c) => (x - c).abs(),
        }
    }

    /// `x²`, `eˣ` and `|x - c|` for every `c` among the entries of both
    /// vectors. For vectors with equal sums the hinge family alone already
    /// characterizes majorization.
    pub fn default_family(lambda: &[f64], mu: &[f64]) -> Vec<ConvexFn> {
        let mut cs: Vec<f64> = lambda.iter().chain(mu).copied().collect();
        cs.sort_by(f64::total_cmp);
        cs.dedup();
        let mut out = vec![ConvexFn::Square, ConvexFn::Exp];
        out.extend(cs.into_iter().map(ConvexFn::Hinge));
        out
    }
}

/// `Σ f(μ_i) <= Σ f(λ_i)` for every supplied convex `f` (the default family
/// when `funcs` is `None`), with relative slack `tol`.
pub fn convex_function_test(lambda: &[f64], mu: &[f64], funcs: Option<&[ConvexFn]>, tol: f64) -> Result<bool, PolygonError> {
    if lambda.len() != mu.len() {
        return Err(PolygonError::LengthMismatch(lambda.len(), mu.len()));
    }
    let delta = lambda.iter().sum::<f64>() - mu.iter().sum::<f64>();
    if delta.abs() > tol * (1.0 + lambda.iter().map(|x| x.abs()).sum::<f64>()) {
        return Err(PolygonError::SumMismatch(delta));
    }
    let family;
    let funcs = match funcs {
        Some(f) => f,
        None => {
            family = ConvexFn::default_family(lambda, mu);
            &family
        }
    };
    Ok(funcs.iter().all(|f| {
        let a: f64 = lambda.iter().map(|&x| f.eval(x)).sum();
        let b: f64 = mu.iter().map(|&x| f.eval(x)).sum();
        b <= a + tol * (1.0 + a.abs())
    }))
}

/// Sum of the entries from position `i` (0-based) to the end.
pub fn tail_sums<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); v.len() + 1];
    for i in (0..v.len()).rev() {
        out[i] = out[i + 1] + v[i];
    }
    out.truncate(v.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_rational, Rational};
    use num_traits::Zero;

    fn rv(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn polygon_examples() {
        let p = polygon_of(&TypeVector::new(rv(&["1", "1/2", "1/3"])).unwrap());
        assert_eq!(p.heights(), rv(&["0", "1", "3/2", "11/6"]).as_slice());
        let p = polygon_of(&TypeVector::new(rv(&["1", "3/5", "1/5"])).unwrap());
        assert_eq!(p.heights(), rv(&["0", "1", "8/5", "9/5"]).as_slice());
        let flat = polygon_of(&TypeVector::new(vec![0.0; 3]).unwrap());
        assert_eq!(flat.heights(), &[0.0; 4]);
        assert!(flat.is_concave());
        assert_eq!(TypeVector::new(vec![1.0, 2.0]), Err(PolygonError::NotSorted(1)));
    }

    #[test]
    fn dominance_examples() {
        let w = [1.0, 0.5, 0.25];
        let lambda = [1.0, 0.52, 1.75 - 1.52];
        assert_eq!(dominates(&lambda, &w, 1e-12).unwrap(), Dominance::Dominates);
        assert_eq!(dominates(&w, &w, 0.0).unwrap(), Dominance::Dominates);

        let w: Vec<f64> = [1.0, 3.0 / 7.0, 1.0 / 3.0, 2.0 / 7.0, 1.0 / 7.0].to_vec();
        let lambda = [1.0, 0.52, 0.37, 0.21, 0.09];
        assert_eq!(dominates(&lambda, &w, 0.02).unwrap(), Dominance::Dominates);

        assert!(matches!(dominates(&[0.5, 0.5], &[1.0, 0.0], 0.0).unwrap(), Dominance::FailsAt { index: 1, .. }));
        assert!(matches!(dominates(&[1.0, 0.5], &[1.0, 0.0], 0.0).unwrap(), Dominance::SumMismatch { .. }));
        assert_eq!(dominates(&[1.0], &[1.0, 0.0], 0.0), Err(PolygonError::LengthMismatch(1, 2)));
    }

    #[test]
    fn exact_dominance() {
        let lambda = rv(&["1", "2/3", "1/3"]);
        let mu = rv(&["1", "1/2", "1/2"]);
        assert_eq!(dominates(&lambda, &mu, Rational::zero()).unwrap(), Dominance::Dominates);
        assert!(!dominates(&mu, &lambda, Rational::zero()).unwrap().holds());
    }

    #[test]
    fn convex_tests() {
        assert!(convex_function_test(&[2.0, 0.0], &[1.0, 1.0], Some(&[ConvexFn::Square]), 0.0).unwrap());
        assert!(!convex_function_test(&[1.0, 1.0], &[2.0, 0.0], None, 1e-12).unwrap());
        assert!(convex_function_test(&[0.3, 0.2], &[0.3, 0.2], None, 1e-12).unwrap());
        assert!(matches!(convex_function_test(&[1.0], &[2.0], None, 1e-12), Err(PolygonError::SumMismatch(_))));
    }

    #[test]
    fn above() {
        let a = polygon_of(&TypeVector::new(vec![2.0, 0.0]).unwrap());
        let b = polygon_of(&TypeVector::new(vec![1.0, 1.0]).unwrap());
        assert_eq!(polygon_above(&a, &b, 0.0), Ok(true));
        assert_eq!(polygon_above(&b, &a, 0.0), Ok(false));
        assert_eq!(polygon_above(&a, &a, 0.0), Ok(true));
        let c = polygon_of(&TypeVector::new(vec![1.0, 0.0]).unwrap());
        assert_eq!(polygon_above(&a, &c, 0.0), Err(PolygonError::EndpointMismatch));
    }

    #[test]
    fn tails() {
        assert_eq!(tail_sums(&[1.0, 0.5, 0.25]), vec![1.75, 0.75, 0.25]);
    }
}
