//! Monte-Carlo estimation of the nonnegative Lyapunov spectrum of the
//! Kontsevich-Zorich cocycle, normalized so that `λ_1 = 1`.
//!
//! A run follows one random trajectory of the accelerated induction. It
//! transports `g` vectors of the symplectic subspace (the image of `Ω(π)`)
//! and orthonormalizes them periodically. Log stretches over Teichmüller
//! time give raw exponents `θ_i`, and error bars come from non-overlapping
//! batch means.

mod estimate;
mod record;

pub use estimate::{estimate_component, estimate_spectrum, EstimateConfig};
pub use record::{merge_runs, FullSpectrum, RunRecord, RUN_SCHEMA};

use serde::{Deserialize, Serialize};

use crate::exchange::ExchangeError;
use crate::strata::CatalogError;

#[derive(Debug, thiserror::Error)]
pub enum SpectraError {
    #[error(transparent)]
    Exchange(#[from] ExchangeError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("leading exponent {0} is not positive")]
    ZeroLead(f64),
    #[error("orthonormalization kept collapsing after {restarts} restarts")]
    DegenerateBasis { restarts: u32 },
    #[error("records cannot be merged: {0}")]
    MixedConfig(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    Lyapunov,
    Hn,
    Eigencurvature,
}

/// Weakly decreasing vector in `[0, 1]` with leading entry 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumVector {
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
    /// Whether normalization had to clamp or reorder the raw input.
    pub adjusted: bool,
}

impl SpectrumVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Divides by the first entry, clamps into `[0, 1]` and sorts decreasingly.
pub fn enforce_spectrum(raw: &[f64], kind: SpectrumKind) -> Result<SpectrumVector, SpectraError> {
    let lead = *raw.first().ok_or_else(|| SpectraError::InvalidConfig("empty spectrum".into()))?;
    if !(lead > 0.0) {
        return Err(SpectraError::ZeroLead(lead));
    }
    let scaled: Vec<f64> = raw.iter().map(|x| x / lead).collect();
    let mut values: Vec<f64> = scaled.iter().map(|x| x.clamp(0.0, 1.0)).collect();
    let mut adjusted = values != scaled;
    if values.windows(2).any(|w| w[0] < w[1]) {
        values.sort_by(|a, b| b.total_cmp(a));
        adjusted = true;
    }
    Ok(SpectrumVector { values, kind, adjusted })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enforce_examples() {
        let s = enforce_spectrum(&[2.0, 1.0, 0.4], SpectrumKind::Lyapunov).unwrap();
        assert_eq!(s.values, vec![1.0, 0.5, 0.2]);
        assert!(!s.adjusted);
        let s = enforce_spectrum(&[1.0, 0.3, 0.31], SpectrumKind::Lyapunov).unwrap();
        assert_eq!(s.values, vec![1.0, 0.31, 0.3]);
        assert!(s.adjusted);
        assert!(matches!(enforce_spectrum(&[0.0, 1.0], SpectrumKind::Lyapunov), Err(SpectraError::ZeroLead(_))));
        let s = enforce_spectrum(&[1.0, -0.01], SpectrumKind::Lyapunov).unwrap();
        assert_eq!(s.values, vec![1.0, 0.0]);
        assert!(s.adjusted);
    }
}
