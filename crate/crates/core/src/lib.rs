//! Complexity of double flag varieties `G/P × G/Q` for simple groups, with
//! classification regressions and tensor-product decompositions.

pub mod block_model;
pub mod char_oracle;
pub mod classifier;
pub mod complexity;
pub mod error;
pub mod linalg;
pub mod parabolic;
pub mod polytope;
pub mod rootsys;
pub mod tensor_decomp;
pub mod weights;

pub use error::{Error, Result};
