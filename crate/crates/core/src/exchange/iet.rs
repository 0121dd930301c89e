use serde::{Deserialize, Serialize};

use super::{CocycleMatrix, ExchangeError, Permutation, TIE_TOLERANCE};

/// Which row's last interval is absorbed by one induction step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepType {
    /// The last top interval is shorter; the top row is rearranged.
    Top,
    /// The last bottom interval is shorter; the bottom row is rearranged.
    Bottom,
}

/// A labelled interval exchange: permutation plus positive lengths indexed by label.
#[derive(Debug, Clone, PartialEq)]
pub struct Iet {
    perm: Permutation,
    lengths: Vec<f64>,
}

impl Iet {
    pub fn new(perm: Permutation, lengths: Vec<f64>) -> Result<Self, ExchangeError> {
        if lengths.len() != perm.len() {
            return Err(ExchangeError::InvalidLengths(format!(
                "expected {} lengths, got {}",
                perm.len(),
                lengths.len()
            )));
        }
        if let Some(x) = lengths.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(ExchangeError::InvalidLengths(format!("length {x} is not strictly positive")));
        }
        Ok(Self { perm, lengths })
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    /// Lengths indexed by label.
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Rescales to total length one; also returns `ln(1 / old_total)`.
    pub fn normalized(&self) -> (Iet, f64) {
        let total = self.total_length();
        let lengths = self.lengths.iter().map(|x| x / total).collect();
        (Iet { perm: self.perm.clone(), lengths }, -total.ln())
    }

    /// Type of the next induction step.
    pub fn next_step_type(&self) -> Result<StepType, ExchangeError> {
        let n = self.perm.len();
        let top = self.lengths[self.perm.top()[n - 1]];
        let bottom = self.lengths[self.perm.bottom()[n - 1]];
        compare(top, bottom)
    }
}

pub(crate) fn compare(top: f64, bottom: f64) -> Result<StepType, ExchangeError> {
    if (top - bottom).abs() <= TIE_TOLERANCE * top.max(bottom) {
        Err(ExchangeError::Tie { top, bottom })
    } else if top < bottom {
        Ok(StepType::Top)
    } else {
        Ok(StepType::Bottom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RauzyStep {
    pub iet: Iet,
    pub matrix: CocycleMatrix,
    pub step: StepType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZorichStep {
    pub iet: Iet,
    pub matrix: CocycleMatrix,
    pub step: StepType,
    pub count: u64,
}

/// One Rauzy-Veech step: first return to the shorter interval.
pub fn rauzy_step(iet: &Iet) -> Result<RauzyStep, ExchangeError> {
    if !iet.perm.is_irreducible() {
        return Err(ExchangeError::Reducible(iet.perm.to_string()));
    }
    let step = iet.next_step_type()?;
    Ok(apply_step(iet, step))
}

fn apply_step(iet: &Iet, step: StepType) -> RauzyStep {
    let n = iet.perm.len();
    let (winner, loser) = match step {
        StepType::Top => (iet.perm.bottom()[n - 1], iet.perm.top()[n - 1]),
        StepType::Bottom => (iet.perm.top()[n - 1], iet.perm.bottom()[n - 1]),
    };
    let mut lengths = iet.lengths.clone();
    lengths[winner] -= lengths[loser];
    RauzyStep {
        iet: Iet { perm: iet.perm.rauzy_move(step), lengths },
        matrix: CocycleMatrix::elementary(n, winner, loser),
        step,
    }
}

/// Zorich acceleration: repeats [`rauzy_step`] while the step type stays the
/// same. The returned matrix is the product of the elementary matrices.
///
/// A tie in the comparison that would start the next elementary step ends
/// the run; it is reported by the following call.
pub fn zorich_step(iet: &Iet, cap: u64) -> Result<ZorichStep, ExchangeError> {
    let first = rauzy_step(iet)?;
    let step = first.step;
    let mut cur = first.iet;
    let mut matrix = first.matrix;
    let mut count = 1u64;
    while let Ok(t) = cur.next_step_type() {
        if t != step {
            break;
        }
        if count >= cap {
            return Err(ExchangeError::UnboundedRun { cap });
        }
        let next = apply_step(&cur, step);
        matrix = matrix
            .checked_mul(&next.matrix)
            .ok_or(ExchangeError::UnboundedRun { cap })?;
        cur = next.iet;
        count += 1;
    }
    Ok(ZorichStep { iet: cur, matrix, step, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iet(p: &str, l: &[f64]) -> Iet {
        Iet::new(p.parse().unwrap(), l.to_vec()).unwrap()
    }

    #[test]
    fn torus_step() {
        let s = rauzy_step(&iet("A B / B A", &[0.7, 0.3])).unwrap();
        assert_eq!(s.step, StepType::Top);
        assert_eq!(s.iet.permutation().to_string(), "A B / B A");
        assert!((s.iet.lengths()[0] - 0.4).abs() < 1e-15);
        assert_eq!(s.iet.lengths()[1], 0.3);
    }

    #[test]
    fn tie() {
        assert!(matches!(rauzy_step(&iet("A B / B A", &[0.5, 0.5])), Err(ExchangeError::Tie { .. })));
    }

    #[test]
    fn reducible_input() {
        assert!(matches!(
            rauzy_step(&iet("A B C / B A C", &[0.2, 0.3, 0.5])),
            Err(ExchangeError::Reducible(_))
        ));
    }

    #[test]
    fn invalid_lengths() {
        let p: Permutation = "A B / B A".parse().unwrap();
        assert!(Iet::new(p.clone(), vec![0.5]).is_err());
        assert!(Iet::new(p.clone(), vec![0.5, 0.0]).is_err());
        assert!(Iet::new(p, vec![0.5, f64::NAN]).is_err());
    }

    #[test]
    fn torus_zorich() {
        let z = zorich_step(&iet("A B / B A", &[0.7, 0.3]), 100).unwrap();
        assert_eq!(z.count, 2);
        let e = CocycleMatrix::elementary(2, 0, 1);
        assert_eq!(z.matrix, e.checked_mul(&e).unwrap());
        assert!((z.iet.lengths()[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn run_cap() {
        let r = zorich_step(&iet("A B / B A", &[0.95, 0.01]), 10);
        assert_eq!(r, Err(ExchangeError::UnboundedRun { cap: 10 }));
    }

    #[test]
    fn single_count_matches_rauzy() {
        // 0.4 vs 0.3: top wins once, then the bottom row's absorbed label changes.
        let x = iet("A B C D / D C B A", &[0.3, 0.2, 0.1, 0.4]);
        let r = rauzy_step(&x).unwrap();
        let z = zorich_step(&x, 100).unwrap();
        assert_eq!(z.count, 1);
        assert_eq!((z.iet, z.matrix, z.step), (r.iet, r.matrix, r.step));
    }
}
