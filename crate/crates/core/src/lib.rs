//! Weierstrass elliptic functions, auxiliary zeta functions and zeta
//! differences, Jacobian elliptic functions, and an identity checker.

pub mod aux_zeta;
pub mod cli;
pub mod error;
pub mod functions;
pub mod jacobi;
pub mod lattice;
pub mod theta;
pub mod verify;
pub mod weierstrass;
pub mod zeta_diff;

pub use error::{Error, Result};
pub use lattice::{HalfPeriod, Lattice, LatticeConstants};
pub use theta::{SeriesConfig, ThetaIndex};
pub use weierstrass::{EvalResult, Status, Weierstrass};
