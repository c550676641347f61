//! Error estimates for nearly singular quadrature of layer potentials.

pub mod error;
pub mod estimates;
pub mod geometry;
pub mod potentials;
pub mod rng;
pub mod rootfind;
pub mod rules;
pub mod targets;

pub use error::{Error, Result};
pub use geometry::TargetPoint;
pub use num_complex::Complex64;
pub use rules::{HalfIntegerP, QuadratureRule, RuleKind};
