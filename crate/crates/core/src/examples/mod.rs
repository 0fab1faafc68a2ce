//! Canonical example structures and the two classical oracles.

pub mod algebra;
pub mod sets;
