//! Algebraic model counting over NNF circuits.
//!
//! Evaluates a circuit bottom-up in any commutative semiring under a literal
//! labeling, after checking that the circuit's structural properties make the
//! evaluation agree with the sum over models.

pub mod circuit;
pub mod lit;
pub mod obdd;
pub mod semiring;
pub mod eval;
pub mod oracle;
pub mod compile;
pub mod cli;
