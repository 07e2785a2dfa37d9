//! Domain types of the interchange format.
//!
//! A [`Problem`] mirrors one container: optional human information, the
//! mandatory construction, an optional conjecture, any number of proof
//! attempts and the opaque files that travel with them. All values are plain
//! data; invariants are checked by [`validate_problem`] rather than enforced
//! at construction time, so that invalid inputs can be reported in full.

mod predicate;
mod validate;

use std::fmt;
use std::str::FromStr;

pub use predicate::{Conjecture, Predicate, PredicateError, Term, PREDICATE_NAMES};
pub use validate::{
    is_attempt_component, is_identifier, is_safe_relative_path, resolve_ids, validate_attempt,
    validate_conjecture, validate_construction, validate_info, validate_problem, ResolveError,
};

/// Shortest decimal representation that parses back to the same `f64`.
///
/// Used everywhere a real number is written out, so that every serializer
/// agrees on the spelling.
pub fn format_real(value: f64) -> String {
    format!("{value}")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid problem name {0:?}: expected [A-Za-z0-9_][A-Za-z0-9_-]*")]
pub struct InvalidName(pub String);

/// Problem identifier, usable verbatim in `problem<name>.zip`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProblemName(String);

impl ProblemName {
    pub fn new(value: impl Into<String>) -> Result<Self, InvalidName> {
        let value = value.into();
        let mut chars = value.chars();
        let head_ok = chars
            .next()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_');
        if head_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            Ok(ProblemName(value))
        } else {
            Err(InvalidName(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Suggested container file name.
    pub fn archive_file_name(&self) -> String {
        format!("problem{}.zip", self.0)
    }
}

impl FromStr for ProblemName {
    type Err = InvalidName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemName::new(s)
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Opaque XML carried byte-for-byte (MathML statements, BibTeXML entries,
/// display sections, unsupported constraints).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct XmlFragment(String);

impl XmlFragment {
    pub fn new(source: impl Into<String>) -> Self {
        XmlFragment(source.into())
    }

    pub fn empty() -> Self {
        XmlFragment(String::new())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.trim().is_empty()
    }

    /// Checks that the fragment is a well-formed sequence of XML content.
    pub fn check_well_formed(&self) -> Result<(), String> {
        let wrapped = format!("<fragment>{}</fragment>", self.0);
        roxmltree::Document::parse(&wrapped)
            .map(|_| ())
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BibEntry {
    pub id: String,
    pub payload: XmlFragment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInfo {
    pub name: ProblemName,
    pub description: String,
    pub statement: XmlFragment,
    pub bibrefs: Vec<BibEntry>,
    pub keywords: Vec<String>,
}

impl ProblemInfo {
    pub fn new(name: ProblemName) -> Self {
        ProblemInfo {
            name,
            description: String::new(),
            statement: XmlFragment::empty(),
            bibrefs: Vec::new(),
            keywords: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeoKind {
    Point,
    Line,
    Circle,
}

impl GeoKind {
    /// Element tag used for this kind in constructions.
    pub fn tag(self) -> &'static str {
        match self {
            GeoKind::Point => "point",
            GeoKind::Line => "line",
            GeoKind::Circle => "circle",
        }
    }

    pub fn from_tag(tag: &str) -> Option<GeoKind> {
        match tag {
            "point" => Some(GeoKind::Point),
            "line" => Some(GeoKind::Line),
            "circle" => Some(GeoKind::Circle),
            _ => None,
        }
    }
}

impl fmt::Display for GeoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Static coordinates of one construction object.
#[derive(Debug, Clone, PartialEq)]
pub enum ElementValue {
    Point { x: f64, y: f64 },
    /// Homogeneous line `a·x + b·y + c = 0`.
    Line { a: f64, b: f64, c: f64 },
    Circle { cx: f64, cy: f64, r: f64 },
    /// An element of a kind outside the supported set, carried verbatim.
    Opaque { tag: String, payload: XmlFragment },
}

impl ElementValue {
    pub fn kind(&self) -> Option<GeoKind> {
        match self {
            ElementValue::Point { .. } => Some(GeoKind::Point),
            ElementValue::Line { .. } => Some(GeoKind::Line),
            ElementValue::Circle { .. } => Some(GeoKind::Circle),
            ElementValue::Opaque { .. } => None,
        }
    }

    pub fn kind_name(&self) -> &str {
        match self {
            ElementValue::Opaque { tag, .. } => tag,
            other => other.kind().map(GeoKind::tag).unwrap_or_default(),
        }
    }

    pub(crate) fn reals(&self) -> Vec<f64> {
        match *self {
            ElementValue::Point { x, y } => vec![x, y],
            ElementValue::Line { a, b, c } => vec![a, b, c],
            ElementValue::Circle { cx, cy, r } => vec![cx, cy, r],
            ElementValue::Opaque { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ElementInstance {
    pub id: String,
    pub value: ElementValue,
}

impl ElementInstance {
    pub fn point(id: impl Into<String>, x: f64, y: f64) -> Self {
        ElementInstance {
            id: id.into(),
            value: ElementValue::Point { x, y },
        }
    }

    pub fn kind(&self) -> Option<GeoKind> {
        self.value.kind()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintKind {
    FreePoint,
    LineThroughTwoPoints,
    IntersectionOfTwoLines,
    MidpointOfTwoPoints,
    CircleByCenterAndPoint,
    PerpendicularLineThroughPoint,
    ParallelLineThroughPoint,
    /// Point at parameter `t` along the line's unit direction, measured from
    /// the foot of the perpendicular dropped from the origin.
    PointOnLine { t: f64 },
    /// Point at `angle` radians on the circle.
    PointOnCircle { angle: f64 },
    /// Unsupported constraint preserved verbatim; never evaluated.
    Opaque { tag: String, payload: XmlFragment },
}

/// Expected output kind and input kinds of a supported constraint.
pub struct Signature {
    pub output: GeoKind,
    pub inputs: &'static [GeoKind],
}

impl ConstraintKind {
    pub const SUPPORTED_TAGS: &'static [&'static str] = &[
        "free_point",
        "line_through_two_points",
        "intersection_of_two_lines",
        "midpoint_of_two_points",
        "circle_by_center_and_point",
        "perpendicular_line_through_point",
        "parallel_line_through_point",
        "point_on_line",
        "point_on_circle",
    ];

    pub fn tag(&self) -> &str {
        match self {
            ConstraintKind::FreePoint => "free_point",
            ConstraintKind::LineThroughTwoPoints => "line_through_two_points",
            ConstraintKind::IntersectionOfTwoLines => "intersection_of_two_lines",
            ConstraintKind::MidpointOfTwoPoints => "midpoint_of_two_points",
            ConstraintKind::CircleByCenterAndPoint => "circle_by_center_and_point",
            ConstraintKind::PerpendicularLineThroughPoint => "perpendicular_line_through_point",
            ConstraintKind::ParallelLineThroughPoint => "parallel_line_through_point",
            ConstraintKind::PointOnLine { .. } => "point_on_line",
            ConstraintKind::PointOnCircle { .. } => "point_on_circle",
            ConstraintKind::Opaque { tag, .. } => tag,
        }
    }

    pub fn is_opaque(&self) -> bool {
        matches!(self, ConstraintKind::Opaque { .. })
    }

    /// `None` for opaque constraints.
    pub fn signature(&self) -> Option<Signature> {
        use GeoKind::*;
        let (output, inputs): (GeoKind, &'static [GeoKind]) = match self {
            ConstraintKind::FreePoint => (Point, &[]),
            ConstraintKind::LineThroughTwoPoints => (Line, &[Point, Point]),
            ConstraintKind::IntersectionOfTwoLines => (Point, &[Line, Line]),
            ConstraintKind::MidpointOfTwoPoints => (Point, &[Point, Point]),
            ConstraintKind::CircleByCenterAndPoint => (Circle, &[Point, Point]),
            ConstraintKind::PerpendicularLineThroughPoint => (Line, &[Line, Point]),
            ConstraintKind::ParallelLineThroughPoint => (Line, &[Line, Point]),
            ConstraintKind::PointOnLine { .. } => (Point, &[Line]),
            ConstraintKind::PointOnCircle { .. } => (Point, &[Circle]),
            ConstraintKind::Opaque { .. } => return None,
        };
        Some(Signature { output, inputs })
    }

    /// Numeric parameter of semi-free points.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            ConstraintKind::PointOnLine { t } => Some(t),
            ConstraintKind::PointOnCircle { angle } => Some(angle),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub output: String,
    pub kind: ConstraintKind,
    pub inputs: Vec<String>,
}

impl Constraint {
    pub fn new(kind: ConstraintKind, output: impl Into<String>, inputs: &[&str]) -> Self {
        Constraint {
            output: output.into(),
            kind,
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn free(output: impl Into<String>) -> Self {
        Constraint::new(ConstraintKind::FreePoint, output, &[])
    }
}

/// Straight-line program over elements, plus the static initial instance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Construction {
    pub elements: Vec<ElementInstance>,
    pub constraints: Vec<Constraint>,
    pub display: XmlFragment,
}

impl Construction {
    pub fn element(&self, id: &str) -> Option<&ElementInstance> {
        self.elements.iter().find(|e| e.id == id)
    }

    /// Outputs of `FreePoint` constraints, in program order.
    pub fn free_points(&self) -> impl Iterator<Item = &str> {
        self.constraints
            .iter()
            .filter(|c| c.kind == ConstraintKind::FreePoint)
            .map(|c| c.output.as_str())
    }

    pub fn first_opaque(&self) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.kind.is_opaque())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProofStatus {
    Proved,
    Disproved,
    Unknown,
    GaveUp,
    Timeout,
    ResourceOut,
    Error,
}

impl ProofStatus {
    pub const ALL: [ProofStatus; 7] = [
        ProofStatus::Proved,
        ProofStatus::Disproved,
        ProofStatus::Unknown,
        ProofStatus::GaveUp,
        ProofStatus::Timeout,
        ProofStatus::ResourceOut,
        ProofStatus::Error,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProofStatus::Proved => "proved",
            ProofStatus::Disproved => "disproved",
            ProofStatus::Unknown => "unknown",
            ProofStatus::GaveUp => "gave_up",
            ProofStatus::Timeout => "timeout",
            ProofStatus::ResourceOut => "resource_out",
            ProofStatus::Error => "error",
        }
    }
}

impl FromStr for ProofStatus {
    type Err = String;

    /// Case-insensitive; `_` and `-` are ignored so `GaveUp`, `gave_up` and
    /// `Gave-Up` all map to the same status.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let folded: String = s
            .trim()
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .flat_map(char::to_lowercase)
            .collect();
        ProofStatus::ALL
            .into_iter()
            .find(|st| st.as_str().replace('_', "") == folded)
            .ok_or_else(|| s.to_string())
    }
}

impl fmt::Display for ProofStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProofLimits {
    pub time_limit_seconds: Option<f64>,
    pub iterations_limit: Option<u64>,
    pub memory_limit_mb: Option<u64>,
}

impl ProofLimits {
    pub fn is_empty(&self) -> bool {
        *self == ProofLimits::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProofMeasures {
    pub cpu_time_seconds: Option<f64>,
    pub elimination_steps: Option<u64>,
    pub number_terms_largest_polynomial: Option<u64>,
    pub proof_steps: Option<u64>,
}

impl ProofMeasures {
    pub fn is_empty(&self) -> bool {
        *self == ProofMeasures::default()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Platform {
    pub computer_name: Option<String>,
    pub clock_speed_mhz: Option<f64>,
    pub ram_mb: Option<u64>,
    pub operating_system: Option<String>,
}

impl Platform {
    pub fn is_empty(&self) -> bool {
        *self == Platform::default()
    }
}

/// A file carried opaquely; `path` is relative to its owning directory.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CarriedFile {
    pub path: String,
    pub bytes: Vec<u8>,
}

impl CarriedFile {
    pub fn new(path: impl Into<String>, bytes: impl Into<Vec<u8>>) -> Self {
        CarriedFile {
            path: path.into(),
            bytes: bytes.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofAttempt {
    pub prover: String,
    pub version: String,
    pub method: String,
    pub status: ProofStatus,
    pub limits: ProofLimits,
    pub measures: ProofMeasures,
    pub platform: Platform,
    /// Prover outputs stored next to `proofInfo.xml`.
    pub outputs: Vec<CarriedFile>,
}

impl ProofAttempt {
    pub fn new(
        prover: impl Into<String>,
        version: impl Into<String>,
        method: impl Into<String>,
        status: ProofStatus,
    ) -> Self {
        ProofAttempt {
            prover: prover.into(),
            version: version.into(),
            method: method.into(),
            status,
            limits: ProofLimits::default(),
            measures: ProofMeasures::default(),
            platform: Platform::default(),
            outputs: Vec::new(),
        }
    }

    /// `proof<GATP><Version><Method>`, concatenated without separators.
    pub fn directory_name(&self) -> String {
        format!("proof{}{}{}", self.prover, self.version, self.method)
    }

    pub fn identity(&self) -> (&str, &str, &str) {
        (&self.prover, &self.version, &self.method)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivateDomain {
    pub domain: String,
    pub files: Vec<CarriedFile>,
}

/// One problem: the in-memory counterpart of a container.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub info: Option<ProblemInfo>,
    pub construction: Construction,
    pub conjecture: Option<Conjecture>,
    pub proofs: Vec<ProofAttempt>,
    /// Files under `resources/`.
    pub resources: Vec<CarriedFile>,
    /// Files under `metadata/` (e.g. `i2g-lom.xml`).
    pub metadata: Vec<CarriedFile>,
    /// Files under `private/<domain-name>/`.
    pub private: Vec<PrivateDomain>,
    /// Extra files in the information, construction, conjecture and proofs
    /// directories that no document claims (previews, orphaned proof
    /// outputs). Paths are full container paths.
    pub attachments: Vec<CarriedFile>,
}

impl Problem {
    pub fn new(construction: Construction) -> Self {
        Problem {
            info: None,
            construction,
            conjecture: None,
            proofs: Vec::new(),
            resources: Vec::new(),
            metadata: Vec::new(),
            private: Vec::new(),
            attachments: Vec::new(),
        }
    }

    pub fn name(&self) -> Option<&ProblemName> {
        self.info.as_ref().map(|i| &i.name)
    }

    /// Order-insensitive parts sorted the way a container stores them, so
    /// that two problems describing the same archive compare equal.
    pub fn canonical(&self) -> Problem {
        let mut p = self.clone();
        p.proofs.sort_by_key(ProofAttempt::directory_name);
        for attempt in &mut p.proofs {
            attempt.outputs.sort();
        }
        p.resources.sort();
        p.metadata.sort();
        p.attachments.sort();
        p.private.sort_by(|a, b| a.domain.cmp(&b.domain));
        for domain in &mut p.private {
            domain.files.sort();
        }
        p
    }

    pub fn canonical_eq(&self, other: &Problem) -> bool {
        self.canonical() == other.canonical()
    }
}
