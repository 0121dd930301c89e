use std::fmt;
use std::str::FromStr;

use super::{ExchangeError, StepType};

/// Labelled (twisted) permutation: two orderings of the same `n >= 2` labels.
///
/// Labels are stored as indices into `names`; the index of a label is its
/// position in the top row at parse time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    names: Vec<String>,
    top: Vec<usize>,
    bottom: Vec<usize>,
}

impl Permutation {
    pub fn new(names: Vec<String>, top: Vec<usize>, bottom: Vec<usize>) -> Result<Self, ExchangeError> {
        let n = names.len();
        let fail = |reason: &str| ExchangeError::Parse {
            input: format!("{names:?} / {top:?} / {bottom:?}"),
            reason: reason.to_string(),
        };
        if n < 2 {
            return Err(fail("need at least two labels"));
        }
        if top.len() != n || bottom.len() != n {
            return Err(fail("rows must contain every label once"));
        }
        for row in [&top, &bottom] {
            let mut seen = vec![false; n];
            for &l in row.iter() {
                if l >= n || seen[l] {
                    return Err(fail("rows must contain every label once"));
                }
                seen[l] = true;
            }
        }
        Ok(Self { names, top, bottom })
    }

    /// Symmetric permutation `1 2 ... n / n ... 2 1` with labels `A`, `B`, ...
    pub fn symmetric(n: usize) -> Result<Self, ExchangeError> {
        let names: Vec<String> = (0..n).map(label_name).collect();
        Self::new(names, (0..n).collect(), (0..n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, label: usize) -> &str {
        &self.names[label]
    }

    pub fn top(&self) -> &[usize] {
        &self.top
    }

    pub fn bottom(&self) -> &[usize] {
        &self.bottom
    }

    pub fn top_position(&self, label: usize) -> usize {
        self.top.iter().position(|&l| l == label).expect("label present")
    }

    pub fn bottom_position(&self, label: usize) -> usize {
        self.bottom.iter().position(|&l| l == label).expect("label present")
    }

    /// No proper prefix of the top row holds the same labels as the
    /// equal-length prefix of the bottom row.
    pub fn is_irreducible(&self) -> bool {
        let n = self.len();
        let mut balance = vec![0i32; n];
        let mut open = 0usize;
        for k in 0..n - 1 {
            for (l, d) in [(self.top[k], 1), (self.bottom[k], -1)] {
                let before = balance[l];
                balance[l] += d;
                match (before == 0, balance[l] == 0) {
                    (true, false) => open += 1,
                    (false, true) => open -= 1,
                    _ => {}
                }
            }
            if open == 0 {
                return false;
            }
        }
        true
    }

    /// Combinatorial part of one induction step of the given type.
    pub fn rauzy_move(&self, step: StepType) -> Permutation {
        let n = self.len();
        let mut next = self.clone();
        match step {
            StepType::Top => {
                let winner = self.bottom[n - 1];
                let p = self.top_position(winner);
                next.top[p + 1..].rotate_right(1);
            }
            StepType::Bottom => {
                let winner = self.top[n - 1];
                let p = self.bottom_position(winner);
                next.bottom[p + 1..].rotate_right(1);
            }
        }
        next
    }

    pub(crate) fn rows_mut(&mut self) -> (&mut Vec<usize>, &mut Vec<usize>) {
        (&mut self.top, &mut self.bottom)
    }
}

pub(crate) fn label_name(i: usize) -> String {
    const ALPHA: &[u8] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZ";
    if i < ALPHA.len() {
        (ALPHA[i] as char).to_string()
    } else {
        format!("L{i}")
    }
}

impl FromStr for Permutation {
    type Err = ExchangeError;

    /// Two-line text format `"A B C D / D C B A"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fail = |reason: &str| ExchangeError::Parse { input: s.to_string(), reason: reason.to_string() };
        let (t, b) = s.split_once('/').ok_or_else(|| fail("missing '/' separator"))?;
        let top_names: Vec<&str> = t.split_whitespace().collect();
        let bottom_names: Vec<&str> = b.split_whitespace().collect();
        if top_names.len() != bottom_names.len() {
            return Err(fail("rows have different lengths"));
        }
        let names: Vec<String> = top_names.iter().map(|x| x.to_string()).collect();
        let mut bottom = Vec::with_capacity(names.len());
        for x in &bottom_names {
            let idx = names.iter().position(|n| n == x).ok_or_else(|| fail("bottom label missing from top row"))?;
            bottom.push(idx);
        }
        let top = (0..names.len()).collect();
        Permutation::new(names, top, bottom).map_err(|e| match e {
            ExchangeError::Parse { reason, .. } => fail(&reason),
            other => other,
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &[usize]| r.iter().map(|&l| self.names[l].as_str()).collect::<Vec<_>>().join(" ");
        write!(f, "{} / {}", row(&self.top), row(&self.bottom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_print() {
        let p: Permutation = "A B C D / D C B A".parse().unwrap();
        assert_eq!(p.to_string(), "A B C D / D C B A");
        assert_eq!(p.bottom(), &[3, 2, 1, 0]);
        assert_eq!(p, Permutation::symmetric(4).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!("A B C".parse::<Permutation>().is_err());
        assert!("A B / A".parse::<Permutation>().is_err());
        assert!("A B / A C".parse::<Permutation>().is_err());
        assert!("A A / A A".parse::<Permutation>().is_err());
        assert!("A / A".parse::<Permutation>().is_err());
    }

    #[test]
    fn irreducibility() {
        assert!("A B / B A".parse::<Permutation>().unwrap().is_irreducible());
        assert!(!"A B / A B".parse::<Permutation>().unwrap().is_irreducible());
        assert!(!"A B C D / B A D C".parse::<Permutation>().unwrap().is_irreducible());
        assert!("A B C D / D C B A".parse::<Permutation>().unwrap().is_irreducible());
    }

    #[test]
    fn moves() {
        let p: Permutation = "A B C D / D C B A".parse().unwrap();
        assert_eq!(p.rauzy_move(StepType::Bottom).to_string(), "A B C D / D A C B");
        assert_eq!(p.rauzy_move(StepType::Top).to_string(), "A D B C / D C B A");
    }
}
