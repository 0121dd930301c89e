use num_traits::{Signed, Zero};

use super::{ConvexPolygon, PolygonError};
use crate::rational::Rational;

/// `ord_p(x)`, or `None` for `x = 0`.
pub fn padic_valuation(x: i128, p: u64) -> Option<u32> {
    assert!(p >= 2, "p must be at least 2");
    if x == 0 {
        return None;
    }
    let p = p as i128;
    let (mut x, mut v) = (x, 0);
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Newton polygon of `Σ R_j t^j` from the points `(j, ord(R_j))`.
///
/// Takes the lower convex hull, then re-indexes from the far end so the
/// slopes come out decreasing. Zero coefficients are passed as `None` and
/// skipped. The constant term must be present with valuation 0.
pub fn valuation_polygon(valuations: &[(usize, Option<u32>)]) -> Result<ConvexPolygon<Rational>, PolygonError> {
    let mut pts: Vec<(usize, i64)> = valuations.iter().filter_map(|&(j, v)| v.map(|v| (j, v as i64))).collect();
    pts.sort_unstable();
    pts.dedup_by_key(|p| p.0);
    if pts.first() != Some(&(0, 0)) {
        return Err(PolygonError::MissingConstantTerm);
    }
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop b unless it lies strictly below the chord a-p.
            let cross = (b.0 as i64 - a.0 as i64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut slopes = Vec::new();
    for w in hull.windows(2) {
        let run = (w[1].0 - w[0].0) as i64;
        let s = Rational::new(w[1].1 - w[0].1, run);
        slopes.extend(std::iter::repeat_n(s, run as usize));
    }
    slopes.reverse();
    let heights = super::partial_sums(&slopes);
    debug_assert!(heights.iter().all(|h| !h.is_negative() || h.is_zero()));
    Ok(ConvexPolygon { heights })
}
