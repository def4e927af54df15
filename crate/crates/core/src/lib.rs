//! Stratification of ordered configuration spaces of k-dimensional subspaces
//! of an n-dimensional space by the dimension of their sum, with exact linear
//! algebra over Q and F_p, finite-field point counts, annihilator duality and
//! the pure braid group of the sphere.

pub mod braid;
pub mod census;
pub mod duality;
pub mod error;
pub mod field;
pub mod grassmann;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod sampler;
pub mod snf;
pub mod strata;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use grassmann::{Chart, Configuration, Subspace};
pub use matrix::Matrix;
pub use strata::{Pi1Result, StratumDescriptor};
