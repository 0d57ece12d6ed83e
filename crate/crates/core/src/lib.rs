pub mod config;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod geodesic;
pub mod numeric;
pub mod quadrature;
pub mod special;
pub mod spectral;
pub mod verify;
pub mod zeta;

pub use error::{Error, Result};
