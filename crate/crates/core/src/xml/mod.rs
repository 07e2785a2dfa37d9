//! XML codecs for the four document kinds of a container.
//!
//! Every `parse_*` function accepts any well-formed input (whitespace,
//! attribute order, comments and line endings are free) and every
//! `serialize_*` function writes the canonical form described in
//! [`writer`]. [`canonicalize`] produces the same canonical text directly
//! from a document tree, without going through the typed model; the two
//! routes are expected to agree on every valid document.
//!
//! Opaque subtrees (statements, bibliography entries, display sections,
//! unsupported elements and constraints) are kept as source text after line
//! ending normalization, so namespace prefixes they use must be declared
//! inside them.

mod canon;
mod conjecture;
mod construction;
mod information;
mod proof_info;
mod read;
pub mod writer;

use std::fmt;

use crate::violation::{Violation, ViolationCode};

pub use canon::canonicalize;
pub use conjecture::{parse_conjecture, serialize_conjecture};
pub use construction::{parse_construction, serialize_construction};
pub use information::{parse_information, parse_information_with, serialize_information};
pub use proof_info::{parse_proof_info, serialize_proof_info};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocumentKind {
    Information,
    Construction,
    Conjecture,
    ProofInfo,
}

impl DocumentKind {
    pub const ALL: [DocumentKind; 4] = [
        DocumentKind::Information,
        DocumentKind::Construction,
        DocumentKind::Conjecture,
        DocumentKind::ProofInfo,
    ];

    pub fn root(self) -> &'static str {
        match self {
            DocumentKind::Information => "information",
            DocumentKind::Construction => "construction",
            DocumentKind::Conjecture => "conjecture",
            DocumentKind::ProofInfo => "proof_info",
        }
    }

    /// File name inside a container.
    pub fn file_name(self) -> &'static str {
        match self {
            DocumentKind::Information => "information.xml",
            DocumentKind::Construction => "intergeo.xml",
            DocumentKind::Conjecture => "conjecture.xml",
            DocumentKind::ProofInfo => "proofInfo.xml",
        }
    }

    pub fn from_root(root: &str) -> Option<DocumentKind> {
        DocumentKind::ALL.into_iter().find(|k| k.root() == root)
    }

    /// Kind of a standalone document, decided by its root element.
    pub fn detect(bytes: &[u8]) -> Result<DocumentKind, CodecError> {
        let text = read::decode(bytes)?;
        let doc = read::parse_tree(&text)?;
        let root = doc.root_element().tag_name().name().to_string();
        DocumentKind::from_root(&root).ok_or_else(|| {
            CodecError::new(
                format!("/{root}"),
                CodecErrorKind::WrongRoot {
                    expected: "information, construction, conjecture or proof_info",
                    found: root,
                },
            )
        })
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodecErrorKind {
    MalformedXml(String),
    WrongRoot { expected: &'static str, found: String },
    MissingName,
    /// Unknown element in a closed vocabulary.
    UnknownTag(String),
    UnknownPredicate(String),
    ArityError { tag: String, got: usize, want: usize },
    /// A reference tag that does not match the kind required in its slot.
    RefKindMismatch { tag: String, expected: String },
    MissingConclusion,
    MissingElementsPart,
    MissingConstraintsPart,
    MissingField(String),
    DanglingReference(String),
    DuplicateId(String),
    UnknownStatus(String),
    NegativeMeasure(String),
    NonPositiveValue(String),
    MalformedNumber(String),
    DuplicateSection(String),
    UnexpectedContent(String),
    /// A model-level invariant found while decoding.
    Invalid { code: ViolationCode, message: String },
}

impl CodecErrorKind {
    pub fn code(&self) -> ViolationCode {
        use CodecErrorKind as K;
        use ViolationCode as C;
        match self {
            K::MalformedXml(_) => C::MalformedXml,
            K::WrongRoot { .. } => C::WrongRoot,
            K::MissingName => C::MissingName,
            K::UnknownTag(_) => C::UnknownTag,
            K::UnknownPredicate(_) => C::UnknownPredicate,
            K::ArityError { .. } => C::ArityError,
            K::RefKindMismatch { .. } => C::KindMismatch,
            K::MissingConclusion => C::MissingConclusion,
            K::MissingElementsPart => C::MissingElementsPart,
            K::MissingConstraintsPart => C::MissingConstraintsPart,
            K::MissingField(_) => C::MissingField,
            K::DanglingReference(_) => C::DanglingReference,
            K::DuplicateId(_) => C::DuplicateId,
            K::UnknownStatus(_) => C::UnknownStatus,
            K::NegativeMeasure(_) => C::NegativeMeasure,
            K::NonPositiveValue(_) => C::NonPositiveValue,
            K::MalformedNumber(_) => C::MalformedNumber,
            K::DuplicateSection(_) => C::DuplicateSection,
            K::UnexpectedContent(_) => C::UnexpectedContent,
            K::Invalid { code, .. } => *code,
        }
    }
}

impl fmt::Display for CodecErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CodecErrorKind as K;
        match self {
            K::MalformedXml(e) => write!(f, "not well-formed XML: {e}"),
            K::WrongRoot { expected, found } => {
                write!(f, "root element is <{found}>, expected {expected}")
            }
            K::MissingName => f.write_str("missing <name>"),
            K::UnknownTag(t) => write!(f, "unknown element <{t}>"),
            K::UnknownPredicate(t) => write!(f, "unknown predicate <{t}>"),
            K::ArityError { tag, got, want } => {
                write!(f, "<{tag}> takes {want} arguments, found {got}")
            }
            K::RefKindMismatch { tag, expected } => {
                write!(f, "reference <{tag}> where a {expected} is expected")
            }
            K::MissingConclusion => f.write_str("conjecture has no conclusion"),
            K::MissingElementsPart => f.write_str("missing <elements>"),
            K::MissingConstraintsPart => f.write_str("missing <constraints>"),
            K::MissingField(t) => write!(f, "missing <{t}>"),
            K::DanglingReference(id) => write!(f, "reference to undeclared element {id:?}"),
            K::DuplicateId(id) => write!(f, "element id {id:?} declared twice"),
            K::UnknownStatus(s) => write!(f, "unknown proof status {s:?}"),
            K::NegativeMeasure(t) => write!(f, "<{t}> must not be negative"),
            K::NonPositiveValue(t) => write!(f, "<{t}> must be positive"),
            K::MalformedNumber(t) => write!(f, "malformed number {t:?}"),
            K::DuplicateSection(t) => write!(f, "<{t}> appears more than once"),
            K::UnexpectedContent(t) => write!(f, "unexpected content: {t}"),
            K::Invalid { message, .. } => f.write_str(message),
        }
    }
}

/// A decoding failure located by an XPath-like path such as
/// `/conjecture/conclusion/collinear[2]`.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {kind}")]
pub struct CodecError {
    pub path: String,
    pub kind: CodecErrorKind,
}

impl CodecError {
    pub fn new(path: impl Into<String>, kind: CodecErrorKind) -> Self {
        CodecError {
            path: path.into(),
            kind,
        }
    }

    pub fn code(&self) -> ViolationCode {
        self.kind.code()
    }

    pub fn to_violation(&self) -> Violation {
        Violation::error(self.code(), &self.path, self.kind.to_string())
    }

    pub(crate) fn from_violation(v: &Violation) -> Self {
        CodecError::new(
            v.path.clone(),
            CodecErrorKind::Invalid {
                code: v.code,
                message: v.message.clone(),
            },
        )
    }
}

/// How unknown elements in the information document are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Unknown elements are dropped with a warning.
    #[default]
    Lenient,
    /// Unknown elements are errors.
    Strict,
}

/// Every finding for a standalone document: decoding errors, warnings and
/// the model invariants that can be checked without the rest of the
/// container.
pub fn validate_document(kind: DocumentKind, bytes: &[u8]) -> Vec<Violation> {
    let (errors, warnings, model) = match kind {
        DocumentKind::Information => {
            information::decode(bytes, Strictness::Lenient).into_parts(|info| {
                crate::model::validate_info(info)
            })
        }
        DocumentKind::Construction => {
            construction::decode(bytes).into_parts(crate::model::validate_construction)
        }
        DocumentKind::Conjecture => conjecture::decode(bytes).into_parts(|_| Vec::new()),
        DocumentKind::ProofInfo => {
            proof_info::decode(bytes).into_parts(crate::model::validate_attempt)
        }
    };
    let mut out: Vec<Violation> = errors.iter().map(CodecError::to_violation).collect();
    for v in model {
        if !out.iter().any(|o| o.code == v.code && o.message == v.message) {
            out.push(v);
        }
    }
    out.extend(warnings);
    out
}

/// Result of decoding one document: the best-effort value, if the structure
/// allowed one, plus everything found along the way.
pub(crate) struct Decoded<T> {
    pub value: Option<T>,
    pub errors: Vec<CodecError>,
    pub warnings: Vec<Violation>,
}

impl<T> Decoded<T> {
    fn into_parts(
        self,
        model: impl FnOnce(&T) -> Vec<Violation>,
    ) -> (Vec<CodecError>, Vec<Violation>, Vec<Violation>) {
        let extra = match &self.value {
            Some(v) if self.errors.is_empty() => model(v),
            _ => Vec::new(),
        };
        (self.errors, self.warnings, extra)
    }

    pub fn into_result(self) -> Result<T, CodecError> {
        match (self.errors.into_iter().next(), self.value) {
            (Some(e), _) => Err(e),
            (None, Some(v)) => Ok(v),
            (None, None) => unreachable!("decoder produced neither a value nor an error"),
        }
    }
}
