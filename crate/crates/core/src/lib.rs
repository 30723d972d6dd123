//! Learning MSO-definable hypotheses over strings with a factorization
//! forest index.
//!
//! The pipeline compiles a unary formula `phi(x ; y_1..y_l)` into a
//! consistency automaton over annotated strings, turns that automaton into
//! a parameter-tagged transition monoid and its power monoid, and indexes
//! a background string with a Simon factorization tree over the power
//! monoid. Learning splices a training set into the tree and walks it top
//! down to recover parameter positions, without rescanning the string.

pub mod formula;
pub mod automata;
pub mod monoid;
pub mod fforest;
pub mod learner;
pub mod baselines;
pub mod corpus;
pub mod harness;
