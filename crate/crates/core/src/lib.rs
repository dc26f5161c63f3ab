//! Quasi-periodic and quasi-biperiodic Green's functions of the Lamé system,
//! Rayleigh expansions, a 2D rigid-grating boundary-integral solver and a
//! phaseless-data harness.

pub mod bem2d;
pub mod error;
pub mod fd;
pub mod green2d;
pub mod green2d_near;
pub mod green3d_biqp;
pub mod green3d_qp;
pub mod green_free;
pub mod medium;
pub mod phaseless;
pub mod rayleigh;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use green_free::{CMat, GreenEval};
pub use medium::{ElasticMedium, Geometry, ModeClass, ModeData, QuasiMomentum, Truncation, Wavenumbers};
