//! Exact computation with comonoids, comodules, cotensor products, internal
//! categories and prestacks over FinVect and FinSet, including smash
//! products and their coinvariants.

pub mod coalgebra;
pub mod cotensor;
pub mod document;
pub mod error;
pub mod examples;
pub mod exact;
pub mod internal;
pub mod monoidal;
pub mod prestack;
pub mod report;

pub use error::{Error, Result};
pub use report::Report;
