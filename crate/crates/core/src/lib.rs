//! Finite-dimensional laboratory for spectral averaging of Hermitian operator
//! families `H(t) = A + tB`, their direct integrals, the Howland commutator
//! `i[tanh Q, arctan P]`, and the integrated density of states of a 1D
//! random Schrödinger model.
//!
//! Every module works with dense matrices and atomic measures; "absolutely
//! continuous" is made testable through the window-density diagnostics of
//! [`measure::ContinuityReport`].

pub mod averaging;
pub mod commutator;
pub mod error;
pub mod experiment;
pub mod fixtures;
pub mod measure;
pub mod profile;
pub mod quadrature;
pub mod random_model;
pub mod spectral;

pub use error::{Error, Result};
pub use measure::{BinnedMeasure, ContinuityReport, Interval, PointMeasure};
pub use profile::WeightProfile;
pub use quadrature::QuadratureRule;
pub use spectral::{EigenDecomposition, HermitianOperator, OperatorPair};

/// Complex scalar used throughout.
pub type C64 = nalgebra::Complex<f64>;
