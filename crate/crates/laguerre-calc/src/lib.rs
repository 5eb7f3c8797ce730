//! Numerical calculus for the Laguerre-type operator family on the positive
//! orthant: special functions, heat and derivative kernels, spectral
//! transforms, Riesz transforms, Muckenhoupt weight machinery, and a
//! verification harness for the kernel estimates and boundedness ranges.

pub mod error;
pub mod kernels;
pub mod params;
pub mod quad;
pub mod special;
pub mod spectral;
pub mod harness;
pub mod weights;

pub use error::{Error, Result};
pub use params::{MultiIndex, NuVector};
