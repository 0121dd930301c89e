//! Numerical and exact tooling for comparing Lyapunov spectra of the
//! Kontsevich-Zorich cocycle with Harder-Narasimhan spectra of Teichmüller
//! curves.
//!
//! * [`exchange`]: interval exchanges, Rauzy-Veech-Zorich induction and the
//!   integer cocycle it generates.
//! * [`spectra`]: Monte-Carlo estimation of the nonnegative Lyapunov spectrum.
//! * [`strata`]: strata of abelian and quadratic differentials and the
//!   component catalog.
//! * [`hnfilt`]: exact Harder-Narasimhan spectra `w(C)`.
//! * [`polygons`]: convex polygons of type vectors and majorization.
//! * [`covers`]: bookkeeping for canonical double covers.
//! * [`harness`]: the dominance check, reports and Siegel-Veech inversion.

pub mod covers;
pub mod exchange;
pub mod harness;
pub mod hnfilt;
pub mod polygons;
pub mod rational;
pub mod spectra;
pub mod strata;

pub use exchange::{CocycleMatrix, Iet, IntersectionForm, Permutation, StepType};
pub use hnfilt::{WEntry, WSpectrum};
pub use polygons::{ConvexPolygon, Dominance, DoublyStochastic, TypeVector};
pub use covers::CoverReport;
pub use spectra::{RunRecord, SpectrumVector};

pub use rational::Rational;

pub use strata::{Component, ComponentId, ComponentLabel, QStratum, Stratum};

/// Version string embedded in every serialized document.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
