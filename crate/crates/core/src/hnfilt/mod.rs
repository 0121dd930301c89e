//! Exact Harder-Narasimhan spectra `w(C) = (w_1, ..., w_g)` of Teichmüller
//! curves, normalized so that `w_1 = 1`.
//!
//! Three sources feed a [`WSpectrum`]:
//! * the closed formula for curves in hyperelliptic loci ([`w_hyperelliptic`]),
//! * the general entrywise upper bounds ([`w_upper_bounds`]),
//! * tabulated values for the remaining non-varying components ([`w_catalog`]).

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, parse_rational, Rational};
use crate::strata::{
    double_cover_image, find_component, CatalogError, ComponentId, ComponentLabel, QStratum, StrataError, Stratum,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HnError {
    #[error("{source_stratum} yields {available} values but the cover has genus {genus}")]
    ArityMismatch { source_stratum: String, available: usize, genus: u32 },
    #[error("spectrum contains upper bounds; the sum is not determined")]
    BoundsOnly,
    #[error("stratum {0} has genus below 2")]
    GenusTooSmall(String),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    Exact,
    UpperBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WEntry {
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    pub exactness: Exactness,
}

impl WEntry {
    pub fn exact(value: Rational) -> Self {
        Self { value, exactness: Exactness::Exact }
    }

    pub fn upper_bound(value: Rational) -> Self {
        Self { value, exactness: Exactness::UpperBound }
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }
}

impl fmt::Display for WEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_exact() {
            f.write_str("≤")?;
        }
        f.write_str(&format_rational(&self.value))
    }
}

/// Weakly decreasing vector of normalized Harder-Narasimhan slopes, `w_1 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WSpectrum {
    pub entries: Vec<WEntry>,
}

impl WSpectrum {
    pub fn exact(values: Vec<Rational>) -> Self {
        Self { entries: values.into_iter().map(WEntry::exact).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn values(&self) -> Vec<Rational> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.entries.iter().all(WEntry::is_exact)
    }

    /// Exact sum, or `BoundsOnly` when some entry is only an upper bound.
    pub fn sum(&self) -> Result<Rational, HnError> {
        if !self.is_exact() {
            return Err(HnError::BoundsOnly);
        }
        Ok(self.entries.iter().fold(Rational::zero(), |a, e| a + e.value))
    }

    /// Sum of the values, whether exact or bounds.
    pub fn value_sum(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |a, e| a + e.value)
    }
}

impl fmt::Display for WSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Harder-Narasimhan type of a Teichmüller curve in the locus generated by
/// quadratic differentials in `q`: the `g` largest elements of
/// `{1} ∪ {1 - 2k/(d_j + 2) : 0 < 2k <= d_j + 1}`, where `g` is the genus
/// of the canonical double cover.
pub fn w_hyperelliptic(q: &QStratum) -> Result<WSpectrum, HnError> {
    let genus = double_cover_image(q).genus()?;
    let mut values = vec![Rational::one()];
    for &d in q.orders() {
        let mut k = 1i64;
        while 2 * k <= d as i64 + 1 {
            values.push(Rational::one() - Rational::new(2 * k, d as i64 + 2));
            k += 1;
        }
    }
    if values.len() < genus as usize {
        return Err(HnError::ArityMismatch { source_stratum: q.to_string(), available: values.len(), genus });
    }
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.truncate(genus as usize);
    Ok(WSpectrum::exact(values))
}

/// Entrywise upper bounds `w_i <= 1 - a_{2i-2}`, where `a_n` is the `n`-th
/// smallest element of `{l/(m_j + 1) : 1 <= l <= m_j}` and `a_0 = 0`.
pub fn w_upper_bounds(stratum: &Stratum) -> Result<WSpectrum, HnError> {
    let g = stratum.genus()?;
    if g < 2 {
        return Err(HnError::GenusTooSmall(stratum.to_string()));
    }
    let mut a: Vec<Rational> = stratum
        .orders()
        .iter()
        .flat_map(|&m| (1..=m as i64).map(move |l| Rational::new(l, m as i64 + 1)))
        .collect();
    a.sort_unstable();
    let mut entries = vec![WEntry::exact(Rational::one())];
    for i in 2..=g as usize {
        entries.push(WEntry::upper_bound(Rational::one() - a[2 * i - 3]));
    }
    Ok(WSpectrum { entries })
}

/// Quadratic stratum whose hyperelliptic locus is the given component:
/// `Q(2g-3, -1^{2g+1})` for `H^hyp(2g-2)` and `Q(2g-2, -1^{2g+2})` for
/// `H^hyp(g-1, g-1)`. Genus-two strata are entirely hyperelliptic.
pub fn hyperelliptic_source(id: &ComponentId) -> Option<QStratum> {
    let g = id.stratum.genus().ok()? as i32;
    let hyp = id.label == ComponentLabel::Hyp || (g == 2 && id.label == ComponentLabel::Unique);
    if !hyp {
        return None;
    }
    let orders = id.stratum.sorted_orders();
    let mut q = if orders == [2 * g as u32 - 2] {
        vec![2 * g - 3]
    } else if orders == [g as u32 - 1, g as u32 - 1] {
        vec![2 * g - 2]
    } else {
        return None;
    };
    let poles = if orders.len() == 1 { 2 * g + 1 } else { 2 * g + 2 };
    q.extend(std::iter::repeat_n(-1, poles as usize));
    QStratum::new(q).ok()
}

/// Tabulated `w_2, ..., w_g` of non-hyperelliptic non-varying components.
const NONVARYING: &[(&str, &[&str])] = &[
    ("H(4)^odd", &["2/5", "1/5"]),
    ("H(3,1)", &["2/4", "1/4"]),
    ("H(2,2)^odd", &["1/3", "1/3"]),
    ("H(2,1,1)", &["1/2", "1/3"]),
    ("H(6)^even", &["4/7", "2/7", "1/7"]),
    ("H(6)^odd", &["3/7", "2/7", "1/7"]),
    ("H(5,1)", &["1/2", "2/6", "1/6"]),
    ("H(3,3)^nonhyp", &["2/4", "1/4", "1/4"]),
    ("H(4,2)^even", &["3/5", "1/3", "1/5"]),
    ("H(4,2)^odd", &["2/5", "1/3", "1/5"]),
    ("H(2,2,2)^odd", &["1/3", "1/3", "1/3"]),
    ("H(3,2,1)", &["1/2", "1/3", "1/4"]),
    ("H(8)^even", &["5/9", "3/9", "2/9", "1/9"]),
    ("H(8)^odd", &["4/9", "3/9", "2/9", "1/9"]),
    ("H(5,3)", &["1/2", "1/3", "1/4", "1/6"]),
    ("H(6,2)^odd", &["3/7", "1/3", "2/7", "1/7"]),
];

/// `w(C)` shared by all Teichmüller curves of a catalogued component: exact
/// for hyperelliptic and non-varying components, upper bounds otherwise.
pub fn w_catalog(id: &ComponentId) -> Result<WSpectrum, HnError> {
    find_component(id)?;
    if let Some(q) = hyperelliptic_source(id) {
        return w_hyperelliptic(&q);
    }
    for (name, tail) in NONVARYING {
        let known: ComponentId = name.parse()?;
        if &known == id {
            let mut values = vec![Rational::one()];
            values.extend(tail.iter().map(|s| parse_rational(s).expect("valid table literal")));
            return Ok(WSpectrum::exact(values));
        }
    }
    w_upper_bounds(&id.stratum)
}

/// `Σ w_i <= (g + 1) / 2`, checked exactly.
pub fn sum_bound_check(w: &WSpectrum, g: u32) -> Result<bool, HnError> {
    Ok(w.sum()? <= Rational::new(g as i64 + 1, 2))
}
