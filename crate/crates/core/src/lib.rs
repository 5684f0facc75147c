//! Small-amplitude analysis of Stokes-wave branches over uniform shear flows
//! with polynomial vorticity.

// `!(x >= y)` is used on purpose so that NaN fails input checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bvp;
pub mod cli;
pub mod dispersion;
pub mod error;
pub mod expansion;
pub mod irrotational;
pub mod numerics;
pub mod options;
pub mod stream;
pub mod vorticity;

pub use error::{Error, Result};
pub use options::SolverOptions;
pub use stream::{stream_profile, FroudeRegime, StreamSolution};
pub use vorticity::VorticitySpec;
