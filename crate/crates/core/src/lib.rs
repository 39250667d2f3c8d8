//! Numerical toolkit for Orlicz-space analysis of linear observation
//! systems: Young functions and their complementary conjugates,
//! Luxemburg/Orlicz/weak norms, diagonal-semigroup admissibility constants,
//! resolvent-weighted suprema, shift semigroups, and the verification
//! harness that ties the pieces into reproducible suites.

pub mod config;
pub mod diagsys;
pub mod error;
pub mod func;
pub mod harness;
pub mod norms;
pub mod numeric;
pub mod rearrange;
pub mod shift;
pub mod young;

pub use error::{Error, Result};
pub use func::{Mode, SampledFunction, StepFunction, StepFunction2};
pub use norms::NormResult;
pub use young::{ClassPSpec, Rho, YoungFunction};
