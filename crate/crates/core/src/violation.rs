//! Machine-readable validation findings shared by every layer.
//!
//! A [`Violation`] is data, not a failure: validators collect every finding
//! they can and hand the whole list back. Codes form a closed catalogue whose
//! string forms are stable (see `docs/violations.md`).

use std::fmt;

/// Closed catalogue of violation codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationCode {
    // model
    InvalidName,
    InvalidIdentifier,
    DuplicateId,
    ForwardReference,
    DanglingReference,
    UnresolvedId,
    KindMismatch,
    ArityError,
    OutputKindMismatch,
    UndefinedElement,
    UndeclaredOutput,
    MultipleDefinitions,
    NonFiniteValue,
    InvalidGeometry,
    InvalidRatio,
    MissingConclusion,
    EmptyKeyword,
    DuplicateKeyword,
    DuplicateBibId,
    MalformedPayload,
    NegativeMeasure,
    NonPositiveValue,
    DuplicateAttempt,
    DuplicateProofDirectory,
    InvalidFilePath,
    // documents
    MalformedXml,
    WrongRoot,
    MissingName,
    UnknownTag,
    UnknownPredicate,
    MissingElementsPart,
    MissingConstraintsPart,
    MissingField,
    UnknownStatus,
    MalformedNumber,
    DuplicateSection,
    UnexpectedContent,
    // container
    MalformedZip,
    BadPath,
    DuplicateEntry,
    UnexpectedEntry,
    MissingIntergeo,
    MissingDirectory,
    BadProofDirName,
    ProofDirMismatch,
}

impl ViolationCode {
    pub const ALL: &'static [ViolationCode] = &[
        Self::InvalidName,
        Self::InvalidIdentifier,
        Self::DuplicateId,
        Self::ForwardReference,
        Self::DanglingReference,
        Self::UnresolvedId,
        Self::KindMismatch,
        Self::ArityError,
        Self::OutputKindMismatch,
        Self::UndefinedElement,
        Self::UndeclaredOutput,
        Self::MultipleDefinitions,
        Self::NonFiniteValue,
        Self::InvalidGeometry,
        Self::InvalidRatio,
        Self::MissingConclusion,
        Self::EmptyKeyword,
        Self::DuplicateKeyword,
        Self::DuplicateBibId,
        Self::MalformedPayload,
        Self::NegativeMeasure,
        Self::NonPositiveValue,
        Self::DuplicateAttempt,
        Self::DuplicateProofDirectory,
        Self::InvalidFilePath,
        Self::MalformedXml,
        Self::WrongRoot,
        Self::MissingName,
        Self::UnknownTag,
        Self::UnknownPredicate,
        Self::MissingElementsPart,
        Self::MissingConstraintsPart,
        Self::MissingField,
        Self::UnknownStatus,
        Self::MalformedNumber,
        Self::DuplicateSection,
        Self::UnexpectedContent,
        Self::MalformedZip,
        Self::BadPath,
        Self::DuplicateEntry,
        Self::UnexpectedEntry,
        Self::MissingIntergeo,
        Self::MissingDirectory,
        Self::BadProofDirName,
        Self::ProofDirMismatch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::InvalidName => "InvalidName",
            Self::InvalidIdentifier => "InvalidIdentifier",
            Self::DuplicateId => "DuplicateId",
            Self::ForwardReference => "ForwardReference",
            Self::DanglingReference => "DanglingReference",
            Self::UnresolvedId => "UnresolvedId",
            Self::KindMismatch => "KindMismatch",
            Self::ArityError => "ArityError",
            Self::OutputKindMismatch => "OutputKindMismatch",
            Self::UndefinedElement => "UndefinedElement",
            Self::UndeclaredOutput => "UndeclaredOutput",
            Self::MultipleDefinitions => "MultipleDefinitions",
            Self::NonFiniteValue => "NonFiniteValue",
            Self::InvalidGeometry => "InvalidGeometry",
            Self::InvalidRatio => "InvalidRatio",
            Self::MissingConclusion => "MissingConclusion",
            Self::EmptyKeyword => "EmptyKeyword",
            Self::DuplicateKeyword => "DuplicateKeyword",
            Self::DuplicateBibId => "DuplicateBibId",
            Self::MalformedPayload => "MalformedPayload",
            Self::NegativeMeasure => "NegativeMeasure",
            Self::NonPositiveValue => "NonPositiveValue",
            Self::DuplicateAttempt => "DuplicateAttempt",
            Self::DuplicateProofDirectory => "DuplicateProofDirectory",
            Self::InvalidFilePath => "InvalidFilePath",
            Self::MalformedXml => "MalformedXml",
            Self::WrongRoot => "WrongRoot",
            Self::MissingName => "MissingName",
            Self::UnknownTag => "UnknownTag",
            Self::UnknownPredicate => "UnknownPredicate",
            Self::MissingElementsPart => "MissingElementsPart",
            Self::MissingConstraintsPart => "MissingConstraintsPart",
            Self::MissingField => "MissingField",
            Self::UnknownStatus => "UnknownStatus",
            Self::MalformedNumber => "MalformedNumber",
            Self::DuplicateSection => "DuplicateSection",
            Self::UnexpectedContent => "UnexpectedContent",
            Self::MalformedZip => "MalformedZip",
            Self::BadPath => "BadPath",
            Self::DuplicateEntry => "DuplicateEntry",
            Self::UnexpectedEntry => "UnexpectedEntry",
            Self::MissingIntergeo => "MissingIntergeo",
            Self::MissingDirectory => "MissingDirectory",
            Self::BadProofDirName => "BadProofDirName",
            Self::ProofDirMismatch => "ProofDirMismatch",
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub severity: Severity,
    /// XPath-like locator, prefixed with the archive entry for container findings.
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn error(code: ViolationCode, path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            code,
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn warning(
        code: ViolationCode,
        path: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Violation {
            code,
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Re-roots the locator under `prefix` (an archive entry, a section name).
    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.path = if self.path.is_empty() {
            prefix.to_string()
        } else {
            format!("{prefix}:{}", self.path)
        };
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "",
            Severity::Warning => " (warning)",
        };
        write!(f, "{}{} {} {}", self.code, sev, self.path, self.message)
    }
}

/// True when at least one violation is error-level.
pub fn has_errors(violations: &[Violation]) -> bool {
    violations.iter().any(Violation::is_error)
}
