//! The regular symmetric monoidal categories FinVect(k) and FinSet: strict
//! tensor products, the symmetry, and equalizers with their universal property.

mod equalizer;
mod mor;
mod obj;

pub use equalizer::{equalizer, equalizer_of, regularity_witness, Equalizer};
pub use mor::{braiding, permute, tensor_mor, Mor, Payload};
pub use obj::{tensor_obj, Backend, Obj, UNIT_LABEL};
