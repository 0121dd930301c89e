//! Strata of abelian and quadratic differentials, component labels and the
//! catalog of representative permutations.

mod catalog;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use catalog::{component_catalog, find_component, CatalogError, CATALOG_VERSION};

use crate::exchange::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("cannot parse stratum {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("sum of zero orders {0} is odd; genus is not an integer")]
    NonIntegralGenus(u32),
    #[error("invalid quadratic stratum {0}: {1}")]
    InvalidQuadratic(String, String),
}

/// Multiset of zero orders `m_1..m_k` of an abelian differential.
///
/// Orders are kept in the order they were given so that text round-trips
/// exactly; equality and hashing treat them as a multiset.
#[derive(Debug, Clone)]
pub struct Stratum {
    orders: Vec<u32>,
}

impl Stratum {
    pub fn from_orders(orders: Vec<u32>) -> Self {
        Self { orders }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Orders sorted in decreasing order.
    pub fn sorted_orders(&self) -> Vec<u32> {
        let mut v = self.orders.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// `g = (Σ m_i + 2) / 2`.
    pub fn genus(&self) -> Result<u32, StrataError> {
        let s: u32 = self.orders.iter().sum();
        if s % 2 == 1 {
            return Err(StrataError::NonIntegralGenus(s));
        }
        Ok(s / 2 + 1)
    }

    /// `n = 2g + k - 1`, the number of intervals of an exchange in this stratum.
    pub fn interval_count(&self) -> Result<usize, StrataError> {
        Ok(2 * self.genus()? as usize + self.orders.len() - 1)
    }
}

pub fn genus_of(stratum: &Stratum) -> Result<u32, StrataError> {
    stratum.genus()
}

impl PartialEq for Stratum {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_orders() == other.sorted_orders()
    }
}

impl Eq for Stratum {}

impl Hash for Stratum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.sorted_orders().hash(state);
    }
}

fn parse_orders<T: FromStr>(s: &str, prefix: char) -> Result<(Vec<T>, &str), String> {
    let s = s.trim();
    let rest = s.strip_prefix(prefix).ok_or_else(|| format!("expected '{prefix}('"))?;
    let rest = rest.strip_prefix('(').ok_or_else(|| format!("expected '{prefix}('"))?;
    let (inner, tail) = rest.split_once(')').ok_or("missing ')'")?;
    let orders = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|x| x.trim().parse::<T>().map_err(|_| format!("bad order {x:?}")))
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok((orders, tail))
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl FromStr for Stratum {
    type Err = StrataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: String| StrataError::Parse { input: s.to_string(), reason };
        let (orders, tail) = parse_orders::<u32>(s, 'H').map_err(fail)?;
        if !tail.trim().is_empty() {
            return Err(StrataError::Parse { input: s.to_string(), reason: "trailing text".into() });
        }
        Ok(Self { orders })
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({})", join(&self.orders))
    }
}

/// Multiset of singularity orders `d_1..d_n >= -1` of a quadratic differential,
/// with `Σ d_i = 4g - 4`.
#[derive(Debug, Clone)]
pub struct QStratum {
    orders: Vec<i32>,
}

impl QStratum {
    pub fn new(orders: Vec<i32>) -> Result<Self, StrataError> {
        let q = Self { orders };
        let bad = |why: &str| Err(StrataError::InvalidQuadratic(q.to_string(), why.to_string()));
        if q.orders.is_empty() {
            return bad("no singularities");
        }
        if q.orders.iter().any(|&d| d < -1) {
            return bad("orders must be at least -1");
        }
        let s: i32 = q.orders.iter().sum();
        if s < -4 || (s + 4) % 4 != 0 {
            return bad("order sum must be 4g - 4");
        }
        Ok(q)
    }

    pub fn orders(&self) -> &[i32] {
        &self.orders
    }

    /// Genus of the underlying curve `Y`.
    pub fn genus(&self) -> u32 {
        ((self.orders.iter().sum::<i32>() + 4) / 4) as u32
    }

    pub fn odd_count(&self) -> usize {
        self.orders.iter().filter(|d| *d % 2 != 0).count()
    }

    /// Source of a hyperelliptic locus: `Y` has genus zero.
    pub fn is_hyperelliptic_source(&self) -> bool {
        self.orders.iter().sum::<i32>() == -4
    }

    /// Genus of the canonical double cover by Riemann-Hurwitz: the cover is
    /// branched exactly over the odd-order singularities.
    pub fn cover_genus(&self) -> u32 {
        (2 * self.genus() as i64 - 1 + self.odd_count() as i64 / 2) as u32
    }
}

impl PartialEq for QStratum {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.orders.clone();
        let mut b = other.orders.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }
}

impl Eq for QStratum {}

impl FromStr for QStratum {
    type Err = StrataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: String| StrataError::Parse { input: s.to_string(), reason };
        let (orders, tail) = parse_orders::<i32>(s, 'Q').map_err(fail)?;
        if !tail.trim().is_empty() {
            return Err(StrataError::Parse { input: s.to_string(), reason: "trailing text".into() });
        }
        QStratum::new(orders)
    }
}

impl fmt::Display for QStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q({})", join(&self.orders))
    }
}

/// Stratum of the canonical double cover: an even order `d` gives two zeros
/// of order `d/2`, an odd order gives one zero of order `d + 1`. Zeros of
/// order 0 are dropped.
pub fn double_cover_image(q: &QStratum) -> Stratum {
    let mut orders = Vec::new();
    for &d in q.orders() {
        if d % 2 == 0 {
            if d > 0 {
                orders.push((d / 2) as u32);
                orders.push((d / 2) as u32);
            }
        } else if d + 1 > 0 {
            orders.push((d + 1) as u32);
        }
    }
    Stratum::from_orders(orders)
}

/// Connected-component tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentLabel {
    Hyp,
    Odd,
    Even,
    NonHyp,
    Unique,
}

impl ComponentLabel {
    pub fn suffix(self) -> Option<&'static str> {
        match self {
            ComponentLabel::Hyp => Some("hyp"),
            ComponentLabel::Odd => Some("odd"),
            ComponentLabel::Even => Some("even"),
            ComponentLabel::NonHyp => Some("nonhyp"),
            ComponentLabel::Unique => None,
        }
    }
}

/// Stratum plus component label, printed as `H(4)^hyp` or `H(3,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentId {
    pub stratum: Stratum,
    pub label: ComponentLabel,
}

impl ComponentId {
    pub fn new(stratum: Stratum, label: ComponentLabel) -> Self {
        Self { stratum, label }
    }

    pub fn genus(&self) -> u32 {
        self.stratum.genus().expect("component strata have integral genus")
    }
}

impl FromStr for ComponentId {
    type Err = StrataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, label) = match s.trim().split_once('^') {
            Some((h, l)) => {
                let label = match l.trim() {
                    "hyp" => ComponentLabel::Hyp,
                    "odd" => ComponentLabel::Odd,
                    "even" => ComponentLabel::Even,
                    "nonhyp" | "non-hyp" => ComponentLabel::NonHyp,
                    other => {
                        return Err(StrataError::Parse {
                            input: s.to_string(),
                            reason: format!("unknown component label {other:?}"),
                        })
                    }
                };
                (h, label)
            }
            None => (s, ComponentLabel::Unique),
        };
        Ok(ComponentId { stratum: head.parse()?, label })
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stratum)?;
        if let Some(s) = self.label.suffix() {
            write!(f, "^{s}")?;
        }
        Ok(())
    }
}

impl Serialize for ComponentId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ComponentId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A catalogued component with its representative permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub id: ComponentId,
    pub representative: Permutation,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stratum_text_round_trip() {
        for s in ["H(4)", "H(3,1)", "H(1,1,1,3)", "H(0)"] {
            assert_eq!(s.parse::<Stratum>().unwrap().to_string(), s);
        }
        for s in ["H(4)^hyp", "H(3,3)^nonhyp", "H(6,2)^odd", "H(2,1,1)"] {
            assert_eq!(s.parse::<ComponentId>().unwrap().to_string(), s);
        }
        assert_eq!("Q(1,2,-1,-1,-1)".parse::<QStratum>().unwrap().to_string(), "Q(1,2,-1,-1,-1)");
        assert!("H(4)^spin".parse::<ComponentId>().is_err());
        assert!("H(4".parse::<Stratum>().is_err());
        assert!("G(4)".parse::<Stratum>().is_err());
        assert!("Q(1,1)".parse::<QStratum>().is_err());
        assert!("Q(-2,2)".parse::<QStratum>().is_err());
    }

    #[test]
    fn multiset_equality() {
        assert_eq!("H(1,1,1,3)".parse::<Stratum>().unwrap(), "H(3,1,1,1)".parse::<Stratum>().unwrap());
        assert_ne!("H(2,2)".parse::<Stratum>().unwrap(), "H(3,1)".parse::<Stratum>().unwrap());
    }

    #[test]
    fn genus() {
        let g = |s: &str| genus_of(&s.parse().unwrap());
        assert_eq!(g("H(4)"), Ok(3));
        assert_eq!(g("H(0)"), Ok(1));
        assert_eq!(g("H(6,2)"), Ok(5));
        assert_eq!(g("H(3)"), Err(StrataError::NonIntegralGenus(3)));
    }

    #[test]
    fn cover_images() {
        let q: QStratum = "Q(1,2,-1,-1,-1)".parse().unwrap();
        let x = double_cover_image(&q);
        assert_eq!(x.to_string(), "H(2,1,1)");
        assert_eq!(x.genus().unwrap(), 3);
        assert_eq!(q.cover_genus(), 3);
        assert_eq!(q.genus(), 1);

        let q: QStratum = "Q(3,-1,-1,-1,-1,-1,-1,-1)".parse().unwrap();
        assert_eq!(double_cover_image(&q).to_string(), "H(4)");
        assert!(q.is_hyperelliptic_source());

        let q: QStratum = "Q(2,2)".parse().unwrap();
        assert_eq!(double_cover_image(&q).to_string(), "H(1,1,1,1)");
        assert_eq!(q.cover_genus(), 3);
    }
}
