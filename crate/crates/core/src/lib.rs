//! Product-state representations of multi-qubit density operators: dual
//! frames, canonical expansion functions, explicit separable ensembles, and
//! separability witnesses.

pub mod cli;
pub mod error;
pub mod frames;
pub mod operator;
pub mod repr;
pub mod separability;
pub mod states;

pub use error::{Error, Result};
pub use frames::{Frame, FrameKind};
pub use num_complex::Complex64;
pub use operator::{BlochVector, DenseOperator};
pub use repr::{CoefficientTable, DiscreteTable, PauliCoefficients};
pub use states::{build_state, ProductEnsemble, StateSpec};
