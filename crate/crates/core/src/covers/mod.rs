//! Exact bookkeeping for canonical double covers of quadratic differentials.
//!
//! A Teichmüller curve generated by `q` in `Q(d_1, ..., d_s)` lifts to one in
//! the stratum of the double cover `X`. The Hodge bundle of `X` splits into
//! the invariant part (sum `L^+`, living on `Y`) and the anti-invariant part
//! (sum `L^-`), and `L^- - L^+` depends only on the odd orders.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::hnfilt::{w_hyperelliptic, HnError, WSpectrum};
use crate::rational::{self, Rational, RationalList};
use crate::strata::{double_cover_image, QStratum, StrataError, Stratum};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoverError {
    #[error("deficit {deficit} exceeds the total {total}")]
    NegativePart { deficit: String, total: String },
    #[error("spectrum must be exact")]
    NotExact,
    #[error("expected {expected} values for the cover, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("spectrum sums to {got}, not {expected}")]
    TotalMismatch { expected: String, got: String },
    #[error("no split of the spectrum matches L^+ = {l_plus}")]
    NoValidPartition { l_plus: String },
    #[error("{} splits of the spectrum match", .0.len())]
    AmbiguousPartition(Vec<WSplit>),
    #[error(transparent)]
    Hn(#[from] HnError),
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// `D_i^2` as a multiple of `χ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SelfIntersection {
    pub order: u32,
    #[serde(with = "rational::serde_str")]
    pub chi_coefficient: Rational,
}

/// `D_i^2 = -(1 / (m_i + 1)) (χ / 2)` for each zero of order `m_i`.
pub fn self_intersections(stratum: &Stratum) -> Vec<SelfIntersection> {
    stratum
        .orders()
        .iter()
        .map(|&m| SelfIntersection { order: m, chi_coefficient: -Rational::new(1, 2 * (m as i64 + 1)) })
        .collect()
}

/// `L^- - L^+ = (1/4) Σ_{d_j odd} 1/(d_j + 2)`, poles included.
pub fn cover_deficit(q: &QStratum) -> Rational {
    let quarter = Rational::new(1, 4);
    q.orders().iter().filter(|d| *d % 2 != 0).map(|&d| quarter * Rational::new(1, d as i64 + 2)).sum()
}

/// The same deficit from intersection numbers on the family over the curve.
///
/// With `B = Σ_{d_j odd} D_j = 2D` and `ω^2 = f^*F + Σ d_j D_j`, the degree
/// gap is `(1/2) D (ω + D) = (1/8) B (B + Σ d_j D_j + F)`. Sections are
/// disjoint, `F . D_j = deg F = χ`, and pulling back to the cover gives
/// `D_j^2 = 2 D'_j^2` where `D'_j` is the zero of order `d_j + 1` upstairs.
/// Dividing by `χ/2` yields `L^- - L^+`.
pub fn adjunction_deficit(q: &QStratum) -> Rational {
    let odd: Vec<i64> = q.orders().iter().filter(|d| *d % 2 != 0).map(|&d| d as i64).collect();
    let upstairs = Stratum::from_orders(odd.iter().map(|&d| (d + 1) as u32).collect());
    let mut gap = Rational::zero();
    for (d, si) in odd.iter().zip(self_intersections(&upstairs)) {
        let dj_sq = Rational::from_integer(2) * si.chi_coefficient;
        gap += Rational::from_integer(d + 1) * dj_sq + Rational::one();
    }
    gap / 8 / Rational::new(1, 2)
}

/// `(L^+, L^-)` from the total `L^+ + L^- = Σ w`.
pub fn split_totals(q: &QStratum, total: Rational) -> Result<(Rational, Rational), CoverError> {
    let deficit = cover_deficit(q);
    if deficit > total {
        return Err(CoverError::NegativePart {
            deficit: rational::format_rational(&deficit),
            total: rational::format_rational(&total),
        });
    }
    let two = Rational::from_integer(2);
    Ok(((total - deficit) / two, (total + deficit) / two))
}

/// One assignment of the spectrum to the invariant and anti-invariant parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WSplit {
    #[serde(with = "rational::serde_vec")]
    pub plus: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    pub minus: Vec<Rational>,
}

impl fmt::Display for WSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^+={}; w^-={}", RationalList(&self.plus), RationalList(&self.minus))
    }
}

/// Splits `w` (one value per genus of the cover) into `g(Y)` values summing
/// to `L^+` and `g_eff` values summing to `L^-`, searching all subsets.
pub fn split_w(q: &QStratum, w: &WSpectrum) -> Result<WSplit, CoverError> {
    if !w.is_exact() {
        return Err(CoverError::NotExact);
    }
    let values = w.values();
    let expected = q.cover_genus() as usize;
    if values.len() != expected {
        return Err(CoverError::Arity { expected, got: values.len() });
    }
    let total = rational::sum(values.iter().copied());
    let (l_plus, _) = split_totals(q, total)?;
    let mut found: Vec<WSplit> = Vec::new();
    for pick in combinations(values.len(), q.genus() as usize) {
        let plus: Vec<Rational> = pick.iter().map(|&i| values[i]).collect();
        if rational::sum(plus.iter().copied()) != l_plus {
            continue;
        }
        let minus: Vec<Rational> = (0..values.len()).filter(|i| !pick.contains(i)).map(|i| values[i]).collect();
        let split = WSplit { plus, minus };
        if !found.contains(&split) {
            found.push(split);
        }
    }
    match found.len() {
        0 => Err(CoverError::NoValidPartition { l_plus: rational::format_rational(&l_plus) }),
        1 => Ok(found.pop().expect("one split")),
        _ => Err(CoverError::AmbiguousPartition(found)),
    }
}

/// Index subsets of size `k` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Everything derivable about one quadratic stratum and its double cover.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverReport {
    #[serde(serialize_with = "display")]
    pub source: QStratum,
    #[serde(serialize_with = "display")]
    pub image: Stratum,
    pub base_genus: u32,
    pub cover_genus: u32,
    #[serde(with = "rational::serde_str")]
    pub deficit: Rational,
    #[serde(serialize_with = "opt_rational")]
    pub total: Option<Rational>,
    #[serde(serialize_with = "opt_rational")]
    pub l_plus: Option<Rational>,
    #[serde(serialize_with = "opt_rational")]
    pub l_minus: Option<Rational>,
    #[serde(serialize_with = "opt_list")]
    pub w: Option<Vec<Rational>>,
    /// The split when it is unique.
    pub split: Option<WSplit>,
    /// Every matching split when there are several.
    pub candidates: Vec<WSplit>,
    /// Why the totals or the split are missing, if they are.
    pub note: Option<String>,
}

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn opt_rational<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&rational::format_rational(r)),
        None => s.serialize_none(),
    }
}

fn opt_list<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_some(&r.iter().map(rational::format_rational).collect::<Vec<_>>()),
        None => s.serialize_none(),
    }
}

impl CoverReport {
    /// Report for `q` using the given spectrum, or the hyperelliptic-locus
    /// formula when `w` is `None`.
    pub fn new(q: &QStratum, w: Option<&WSpectrum>) -> Result<Self, CoverError> {
        let image = double_cover_image(q);
        let mut report = CoverReport {
            source: q.clone(),
            image,
            base_genus: q.genus(),
            cover_genus: q.cover_genus(),
            deficit: cover_deficit(q),
            total: None,
            l_plus: None,
            l_minus: None,
            w: None,
            split: None,
            candidates: Vec::new(),
            note: None,
        };
        let w = match w {
            Some(w) => w.clone(),
            None => w_hyperelliptic(q)?,
        };
        let Ok(total) = w.sum() else {
            report.note = Some("spectrum has only upper bounds".into());
            return Ok(report);
        };
        report.w = Some(w.values());
        report.total = Some(total);
        match split_totals(q, total) {
            Ok((p, m)) => {
                report.l_plus = Some(p);
                report.l_minus = Some(m);
            }
            Err(e) => {
                report.note = Some(e.to_string());
                return Ok(report);
            }
        }
        match split_w(q, &w) {
            Ok(s) => report.split = Some(s),
            Err(CoverError::AmbiguousPartition(all)) => {
                report.note = Some(format!("{} splits match", all.len()));
                report.candidates = all;
            }
            Err(e) => report.note = Some(e.to_string()),
        }
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = rational::format_rational;
        writeln!(f, "{} -> {} (g(Y)={}, g(X)={})", self.source, self.image, self.base_genus, self.cover_genus)?;
        writeln!(f, "L^- - L^+ = {}", r(&self.deficit))?;
        if let Some(w) = &self.w {
            writeln!(f, "w = {}", RationalList(w))?;
        }
        if let (Some(t), Some(p), Some(m)) = (self.total, self.l_plus, self.l_minus) {
            writeln!(f, "L^-+L^+={}. We get L^-={}, L^+={}", r(&t), r(&m), r(&p))?;
        }
        if let Some(s) = &self.split {
            writeln!(f, "{s}")?;
        }
        for s in &self.candidates {
            writeln!(f, "candidate {s}")?;
        }
        if let Some(n) = &self.note {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
