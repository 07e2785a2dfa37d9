use std::collections::{HashMap, HashSet};

use super::{
    CarriedFile, Conjecture, Construction, ElementValue, GeoKind, Predicate, Problem,
    ProblemInfo, ProofAttempt, Term,
};
use crate::violation::{Violation, ViolationCode as Code};

/// Element and bibliography identifiers: `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Prover, version and method components: `[A-Za-z0-9_.-]+`.
pub fn is_attempt_component(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// Relative, forward-slash path without empty, `.` or `..` segments.
pub fn is_safe_relative_path(path: &str) -> bool {
    !path.is_empty()
        && !path.starts_with('/')
        && !path.contains('\\')
        && !path.contains(':')
        && path
            .split('/')
            .all(|seg| !seg.is_empty() && seg != "." && seg != "..")
}

/// Every invariant violation in `p`, in a stable order.
pub fn validate_problem(p: &Problem) -> Vec<Violation> {
    let mut out = Vec::new();
    if let Some(info) = &p.info {
        out.extend(validate_info(info));
    }
    out.extend(validate_construction(&p.construction));
    if let Some(conj) = &p.conjecture {
        out.extend(validate_conjecture(conj, &p.construction));
    }

    let mut triples = HashSet::new();
    let mut dirs: HashMap<String, usize> = HashMap::new();
    for (i, attempt) in p.proofs.iter().enumerate() {
        let at = format!("proofs[{}]", i + 1);
        out.extend(
            validate_attempt(attempt)
                .into_iter()
                .map(|v| v.prefixed(&at)),
        );
        if !triples.insert(attempt.identity()) {
            out.push(Violation::error(
                Code::DuplicateAttempt,
                &at,
                format!(
                    "attempt ({}, {}, {}) already present",
                    attempt.prover, attempt.version, attempt.method
                ),
            ));
        } else if let Some(first) = dirs.insert(attempt.directory_name(), i) {
            out.push(Violation::error(
                Code::DuplicateProofDirectory,
                &at,
                format!(
                    "directory {} is also used by proofs[{}]",
                    attempt.directory_name(),
                    first + 1
                ),
            ));
        }
    }

    check_files(&mut out, "resources", &p.resources);
    check_files(&mut out, "metadata", &p.metadata);
    let mut domains = HashSet::new();
    for (i, d) in p.private.iter().enumerate() {
        let at = format!("private[{}]", i + 1);
        if !is_safe_relative_path(&d.domain) || d.domain.contains('/') {
            out.push(Violation::error(
                Code::InvalidFilePath,
                &at,
                format!("invalid domain name {:?}", d.domain),
            ));
        } else if !domains.insert(d.domain.as_str()) {
            out.push(Violation::error(
                Code::InvalidFilePath,
                &at,
                format!("domain {:?} listed twice", d.domain),
            ));
        }
        check_files(&mut out, &at, &d.files);
    }
    check_files(&mut out, "attachments", &p.attachments);
    let attempt_dirs: HashSet<String> = p
        .proofs
        .iter()
        .map(|a| format!("proofs/{}/", a.directory_name()))
        .collect();
    for (i, f) in p.attachments.iter().enumerate() {
        let owned = attempt_dirs.iter().any(|d| f.path.starts_with(d.as_str()));
        if owned || !is_attachment_path(&f.path) {
            out.push(Violation::error(
                Code::InvalidFilePath,
                format!("attachments[{}]", i + 1),
                format!("{:?} is not an unclaimed file of a format directory", f.path),
            ));
        }
    }
    out
}

fn is_attachment_path(path: &str) -> bool {
    const RESERVED: [&str; 3] = [
        "information/information.xml",
        "construction/intergeo.xml",
        "conjecture/conjecture.xml",
    ];
    if RESERVED.contains(&path) {
        return false;
    }
    if let Some(rest) = path.strip_prefix("proofs/") {
        // Files in an attempt directory belong to the attempt; only
        // directories without proofInfo.xml hold attachments.
        return rest.contains('/') && !rest.ends_with("/proofInfo.xml");
    }
    ["information/", "construction/", "conjecture/"]
        .iter()
        .any(|dir| path.starts_with(dir))
}

fn check_files(out: &mut Vec<Violation>, at: &str, files: &[CarriedFile]) {
    let mut seen = HashSet::new();
    for (i, f) in files.iter().enumerate() {
        if !is_safe_relative_path(&f.path) {
            out.push(Violation::error(
                Code::InvalidFilePath,
                format!("{at}[{}]", i + 1),
                format!("unsafe path {:?}", f.path),
            ));
        } else if !seen.insert(f.path.as_str()) {
            out.push(Violation::error(
                Code::InvalidFilePath,
                format!("{at}[{}]", i + 1),
                format!("path {:?} listed twice", f.path),
            ));
        }
    }
}

fn normalize_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn validate_info(info: &ProblemInfo) -> Vec<Violation> {
    let mut out = Vec::new();
    if let Err(e) = info.statement.check_well_formed() {
        out.push(Violation::error(
            Code::MalformedPayload,
            "information/statement",
            e,
        ));
    }
    let mut ids = HashSet::new();
    for (i, entry) in info.bibrefs.iter().enumerate() {
        let at = format!("information/bibrefs/bibentry[{}]", i + 1);
        if !is_identifier(&entry.id) {
            out.push(Violation::error(
                Code::InvalidIdentifier,
                &at,
                format!("invalid bibentry id {:?}", entry.id),
            ));
        }
        if !ids.insert(entry.id.as_str()) {
            out.push(Violation::error(
                Code::DuplicateBibId,
                &at,
                format!("bibentry id {:?} repeated", entry.id),
            ));
        }
        if let Err(e) = entry.payload.check_well_formed() {
            out.push(Violation::error(Code::MalformedPayload, &at, e));
        }
    }
    let mut words = HashSet::new();
    for (i, kw) in info.keywords.iter().enumerate() {
        let at = format!("information/keywords/keyword[{}]", i + 1);
        let norm = normalize_ws(kw);
        if norm.is_empty() {
            out.push(Violation::error(Code::EmptyKeyword, &at, "empty keyword"));
        } else if !words.insert(norm.clone()) {
            out.push(Violation::error(
                Code::DuplicateKeyword,
                &at,
                format!("keyword {norm:?} repeated"),
            ));
        }
    }
    out
}

fn check_element_value(out: &mut Vec<Violation>, at: &str, value: &ElementValue) {
    if value.reals().iter().any(|v| !v.is_finite()) {
        out.push(Violation::error(
            Code::NonFiniteValue,
            at,
            "coordinates must be finite",
        ));
        return;
    }
    match value {
        ElementValue::Line { a, b, c } if *a == 0.0 && *b == 0.0 && *c == 0.0 => {
            out.push(Violation::error(
                Code::InvalidGeometry,
                at,
                "line coefficients are all zero",
            ));
        }
        ElementValue::Circle { r, .. } if *r < 0.0 => {
            out.push(Violation::error(
                Code::InvalidGeometry,
                at,
                "negative circle radius",
            ));
        }
        ElementValue::Opaque { payload, .. } => {
            if let Err(e) = payload.check_well_formed() {
                out.push(Violation::error(Code::MalformedPayload, at, e));
            }
        }
        _ => {}
    }
}

pub fn validate_construction(k: &Construction) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut kinds: HashMap<&str, Option<GeoKind>> = HashMap::new();
    for (i, el) in k.elements.iter().enumerate() {
        let at = format!("construction/elements[{}]", i + 1);
        if !is_identifier(&el.id) {
            out.push(Violation::error(
                Code::InvalidIdentifier,
                &at,
                format!("invalid element id {:?}", el.id),
            ));
        }
        if kinds.insert(&el.id, el.kind()).is_some() {
            out.push(Violation::error(
                Code::DuplicateId,
                &at,
                format!("element id {:?} declared twice", el.id),
            ));
        }
        check_element_value(&mut out, &at, &el.value);
    }

    let mut defined: HashSet<&str> = HashSet::new();
    let later_outputs: HashSet<&str> = k.constraints.iter().map(|c| c.output.as_str()).collect();
    for (i, c) in k.constraints.iter().enumerate() {
        let at = format!("construction/constraints[{}]", i + 1);
        let signature = c.kind.signature();

        match kinds.get(c.output.as_str()) {
            None => out.push(Violation::error(
                Code::UndeclaredOutput,
                &at,
                format!("output {:?} has no element instance", c.output),
            )),
            Some(kind) => {
                let expected = signature.as_ref().map(|s| s.output);
                // Opaque constraints may produce any element; supported ones
                // must produce exactly their declared kind.
                if expected.is_some() && *kind != expected {
                    out.push(Violation::error(
                        Code::OutputKindMismatch,
                        &at,
                        format!(
                            "{} produces a {}, but {:?} is declared otherwise",
                            c.kind.tag(),
                            expected.map(GeoKind::tag).unwrap_or_default(),
                            c.output
                        ),
                    ));
                }
            }
        }

        if let Some(sig) = &signature {
            if sig.inputs.len() != c.inputs.len() {
                out.push(Violation::error(
                    Code::ArityError,
                    &at,
                    format!(
                        "{} takes {} inputs, got {}",
                        c.kind.tag(),
                        sig.inputs.len(),
                        c.inputs.len()
                    ),
                ));
            }
        }

        for (j, input) in c.inputs.iter().enumerate() {
            match kinds.get(input.as_str()) {
                None => out.push(Violation::error(
                    Code::DanglingReference,
                    &at,
                    format!("input {input:?} is not a declared element"),
                )),
                Some(_) if !defined.contains(input.as_str()) => {
                    let why = if later_outputs.contains(input.as_str()) {
                        "is defined later in the program"
                    } else {
                        "is never defined"
                    };
                    out.push(Violation::error(
                        Code::ForwardReference,
                        &at,
                        format!("input {input:?} {why}"),
                    ));
                }
                Some(kind) => {
                    if let Some(want) = signature.as_ref().and_then(|s| s.inputs.get(j)) {
                        if *kind != Some(*want) {
                            out.push(Violation::error(
                                Code::KindMismatch,
                                &at,
                                format!("input {input:?} must be a {want}"),
                            ));
                        }
                    }
                }
            }
        }

        if let Some(v) = c.kind.parameter() {
            if !v.is_finite() {
                out.push(Violation::error(
                    Code::NonFiniteValue,
                    &at,
                    "constraint parameter must be finite",
                ));
            }
        }
        if let super::ConstraintKind::Opaque { payload, .. } = &c.kind {
            if let Err(e) = payload.check_well_formed() {
                out.push(Violation::error(Code::MalformedPayload, &at, e));
            }
        }

        if kinds.contains_key(c.output.as_str()) && !defined.insert(&c.output) {
            out.push(Violation::error(
                Code::MultipleDefinitions,
                &at,
                format!("{:?} is already defined by an earlier constraint", c.output),
            ));
        }
    }

    for (i, el) in k.elements.iter().enumerate() {
        if !defined.contains(el.id.as_str()) {
            out.push(Violation::error(
                Code::UndefinedElement,
                format!("construction/elements[{}]", i + 1),
                format!("element {:?} is not defined by any constraint", el.id),
            ));
        }
    }

    if let Err(e) = k.display.check_well_formed() {
        out.push(Violation::error(Code::MalformedPayload, "construction/display", e));
    }
    out
}

fn check_term(out: &mut Vec<Violation>, at: &str, t: &Term) {
    let mut consts = Vec::new();
    t.constants(&mut consts);
    if consts.iter().any(|c| !c.is_finite()) {
        out.push(Violation::error(
            Code::NonFiniteValue,
            at,
            "constants must be finite",
        ));
    }
}

fn check_predicate(out: &mut Vec<Violation>, at: &str, p: &Predicate, k: &Construction) {
    for id in p.point_ids() {
        match k.element(id) {
            None => out.push(Violation::error(
                Code::UnresolvedId,
                at,
                format!("{id:?} is not an element of the construction"),
            )),
            Some(el) if el.kind() != Some(GeoKind::Point) => out.push(Violation::error(
                Code::KindMismatch,
                at,
                format!("{id:?} is a {}, {} needs points", el.value.kind_name(), p.name()),
            )),
            Some(_) => {}
        }
    }
    match p {
        Predicate::SegmentRatio(_, r) if !r.is_finite() || *r < 0.0 => {
            out.push(Violation::error(
                Code::InvalidRatio,
                at,
                format!("ratio {r} must be finite and non-negative"),
            ));
        }
        Predicate::Equal(l, r) => {
            check_term(out, at, l);
            check_term(out, at, r);
        }
        _ => {}
    }
}

pub fn validate_conjecture(c: &Conjecture, k: &Construction) -> Vec<Violation> {
    let mut out = Vec::new();
    if c.conclusion.is_empty() {
        out.push(Violation::error(
            Code::MissingConclusion,
            "conjecture/conclusion",
            "conclusion must contain at least one predicate",
        ));
    }
    for (section, preds) in [
        ("hypothesis", &c.hypothesis),
        ("ndg", &c.ndg),
        ("conclusion", &c.conclusion),
    ] {
        for (i, p) in preds.iter().enumerate() {
            let at = format!("conjecture/{section}/{}[{}]", p.name(), i + 1);
            check_predicate(&mut out, &at, p, k);
        }
    }
    out
}

fn check_nonneg(out: &mut Vec<Violation>, at: &str, tag: &str, v: Option<f64>) {
    if let Some(v) = v {
        if !v.is_finite() {
            out.push(Violation::error(
                Code::NonFiniteValue,
                format!("{at}/{tag}"),
                "value must be finite",
            ));
        } else if v < 0.0 {
            out.push(Violation::error(
                Code::NegativeMeasure,
                format!("{at}/{tag}"),
                format!("{tag} must be non-negative"),
            ));
        }
    }
}

/// Checks one attempt in isolation (uniqueness is a problem-level check).
pub fn validate_attempt(a: &ProofAttempt) -> Vec<Violation> {
    let mut out = Vec::new();
    for (tag, value) in [("prover", &a.prover), ("version", &a.version), ("method", &a.method)] {
        if !is_attempt_component(value) {
            out.push(Violation::error(
                Code::InvalidIdentifier,
                tag,
                format!("{tag} {value:?} must match [A-Za-z0-9_.-]+"),
            ));
        }
    }
    check_nonneg(
        &mut out,
        "limits",
        "time_limit_seconds",
        a.limits.time_limit_seconds,
    );
    check_nonneg(&mut out, "measures", "CPU_time", a.measures.cpu_time_seconds);
    if let Some(speed) = a.platform.clock_speed_mhz {
        if !speed.is_finite() || speed <= 0.0 {
            out.push(Violation::error(
                Code::NonPositiveValue,
                "platform/clock_speed",
                "clock speed must be positive",
            ));
        }
    }
    if a.platform.ram_mb == Some(0) {
        out.push(Violation::error(
            Code::NonPositiveValue,
            "platform/RAM",
            "RAM must be positive",
        ));
    }
    let mut seen = HashSet::new();
    for (i, f) in a.outputs.iter().enumerate() {
        let at = format!("outputs[{}]", i + 1);
        if !is_safe_relative_path(&f.path) || f.path == "proofInfo.xml" {
            out.push(Violation::error(
                Code::InvalidFilePath,
                &at,
                format!("invalid output path {:?}", f.path),
            ));
        } else if !seen.insert(f.path.as_str()) {
            out.push(Violation::error(
                Code::InvalidFilePath,
                &at,
                format!("output {:?} listed twice", f.path),
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("unresolved id {0:?}")]
    UnresolvedId(String),
    #[error("{0:?} is not a point")]
    KindMismatch(String),
}

/// Distinct ids used by `c`, in first-use order, with their kinds.
pub fn resolve_ids(c: &Conjecture, k: &Construction) -> Result<Vec<(String, GeoKind)>, ResolveError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in c.predicates() {
        for id in p.point_ids() {
            if !seen.insert(id) {
                continue;
            }
            let el = k
                .element(id)
                .ok_or_else(|| ResolveError::UnresolvedId(id.to_string()))?;
            match el.kind() {
                Some(GeoKind::Point) => out.push((id.to_string(), GeoKind::Point)),
                _ => return Err(ResolveError::KindMismatch(id.to_string())),
            }
        }
    }
    Ok(out)
}
