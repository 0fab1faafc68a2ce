//! Exact scalars and dense linear algebra over ℚ and 𝔽_p.

mod matrix;
mod scalar;

pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
