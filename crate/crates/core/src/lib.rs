//! Equivalence checking for quantum sequential machines and one-way quantum
//! finite automata.

pub mod equivalence;
pub mod format;
pub mod machines;
pub mod matrix;
pub mod mm_analysis;
mod modular;
pub mod random;
pub mod scalar;
pub mod span;
