//! Textual formats: the construction language (`.gcl`) and prover input
//! (`.gpi`).

mod dsl;
mod prover_input;

pub use dsl::{dsl_losses, emit_dsl, parse_dsl, DslError, DslErrorKind};
pub use prover_input::{emit_prover_input, PROVER_INPUT_HEADER};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConvertError {
    #[error("problem has no conjecture")]
    NoConjecture,
    #[error("constraint producing {0:?} is opaque and has no textual form")]
    OpaqueConstraint(String),
    #[error("element {0:?} has a kind with no textual form")]
    OpaqueElement(String),
}
