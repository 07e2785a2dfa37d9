//! Toolkit for the i2gatp interchange format: geometric constructions,
//! conjectures about them and the records of proof attempts, packed in a
//! zip container that remains readable as a plain i2g container.
//!
//! * [`model`]: the data model and its invariants.
//! * [`xml`]: codecs for the four document kinds, plus canonicalization.
//! * [`container`]: zip packing, unpacking and i2g extraction.
//! * [`convert`]: the textual construction language and prover-input text.
//! * [`eval`]: numeric instantiation and randomized conjecture checking.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod container;
pub mod convert;
pub mod eval;
pub mod model;
pub mod violation;
pub mod xml;

pub use model::{
    validate_problem, Conjecture, Construction, Predicate, Problem, ProblemInfo, ProofAttempt,
    Term,
};
pub use violation::{Severity, Violation, ViolationCode};
