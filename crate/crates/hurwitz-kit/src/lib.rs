//! Stability certification for symmetric and Metzler matrices.
//!
//! The core decision procedure reduces a matrix one dimension at a time by
//! taking the Schur complement of the trailing diagonal entry. For symmetric
//! and for Metzler matrices the sign chain of those pivots decides Hurwitz
//! stability outright; independent classical criteria (Sylvester,
//! Routh-Hurwitz, M-matrix) are wired in as cross-checking oracles.
//!
//! Everything runs in one of two scalar modes: exact rational arithmetic or
//! f64 with an explicit tolerance. Modes never mix silently.

pub mod certify;
pub mod chart;
pub mod error;
pub mod family;
pub mod insulin;
pub mod json;
pub mod matrix;
pub mod positive;
pub mod scalar;

mod kernel;

pub use certify::{CertKind, Certificate, StabilityVerdict, Verdict};
pub use chart::{ChartPoint, DirectLiftParams};
pub use error::{Error, Result, Violation};
pub use family::{BallFamilySpec, Corner, FamilyReport, MetzlerLiftParams, RejectionHistogram};
pub use matrix::{BlockPartition, Matrix, MAX_DIM};
pub use positive::{Equilibrium, PositiveLinearSystem, Trajectory};
pub use scalar::{Mode, Scalar, SignClass, Tolerance, DEFAULT_EPS};
