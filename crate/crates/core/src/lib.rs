//! Forward and inverse scattering of biharmonic (flexural) waves in thin plates.

pub mod error;
pub mod forward;
pub mod geometry;
pub mod harness;
pub mod imaging;
pub mod linalg;
pub mod specfun;

pub use error::{Error, Result};
