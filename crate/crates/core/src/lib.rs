//! Holomorphic-gauge kernels, wheel weights and deformation complexes for
//! mixed BF theory on `C x R`.

pub mod boundary;
pub mod defcomplex;
pub mod error;
pub mod exterior;
pub mod gaussian;
pub mod graphs;
pub mod kernels;
pub mod quadrature;
pub mod ratfn;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
