//! Prover input text (`.gpi`).
//!
//! ```text
//! ; i2gatp prover input, format version 1
//! ; problem varignon
//! construction:
//!   (free_point A)
//!   (midpoint_of_two_points P A B)
//!   (point_on_line X l 0.5)
//! ndg:
//!   (not_equal A B)
//! hypothesis:
//!   (midpoint P A B)
//! conclude:
//!   (parallel P Q S R)
//! ```
//!
//! Facts are s-expressions: the constraint or predicate name, then the
//! output and inputs (or point arguments), then any numeric parameter.
//! Empty sections are left out; `conclude:` is always present.

use super::ConvertError;
use crate::model::{format_real, ConstraintKind, Predicate, Problem};

pub const PROVER_INPUT_HEADER: &str = "; i2gatp prover input, format version 1";

fn predicate_sexpr(p: &Predicate) -> String {
    match p {
        Predicate::Equal(l, r) => format!("(equal {l} {r})"),
        Predicate::SegmentRatio(ids, ratio) => {
            format!("(segment_ratio {} {})", ids.join(" "), format_real(*ratio))
        }
        other => format!("({} {})", other.name(), other.point_args().join(" ")),
    }
}

pub fn emit_prover_input(p: &Problem) -> Result<String, ConvertError> {
    let conj = p.conjecture.as_ref().ok_or(ConvertError::NoConjecture)?;
    if let Some(c) = p.construction.first_opaque() {
        return Err(ConvertError::OpaqueConstraint(c.output.clone()));
    }
    let mut out = String::new();
    out.push_str(PROVER_INPUT_HEADER);
    out.push('\n');
    if let Some(name) = p.name() {
        out.push_str(&format!("; problem {name}\n"));
    }
    out.push_str("construction:\n");
    for c in &p.construction.constraints {
        let mut fact = format!("  ({} {}", c.kind.tag(), c.output);
        for input in &c.inputs {
            fact.push(' ');
            fact.push_str(input);
        }
        if let ConstraintKind::PointOnLine { t: v } | ConstraintKind::PointOnCircle { angle: v } =
            c.kind
        {
            fact.push(' ');
            fact.push_str(&format_real(v));
        }
        fact.push_str(")\n");
        out.push_str(&fact);
    }
    for (section, preds) in [("ndg", &conj.ndg), ("hypothesis", &conj.hypothesis)] {
        if preds.is_empty() {
            continue;
        }
        out.push_str(section);
        out.push_str(":\n");
        for pred in preds {
            out.push_str(&format!("  {}\n", predicate_sexpr(pred)));
        }
    }
    out.push_str("conclude:\n");
    for pred in &conj.conclusion {
        out.push_str(&format!("  {}\n", predicate_sexpr(pred)));
    }
    Ok(out)
}
