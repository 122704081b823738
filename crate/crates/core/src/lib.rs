//! Existence, construction and exact verification of group-invariant
//! Butson Hadamard matrices over cyclic groups.

pub mod bhcore;
pub mod census;
pub mod constructions;
pub mod cyclotomic;
pub mod existence;
pub mod numtheory;
