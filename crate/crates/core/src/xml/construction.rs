//! `construction/intergeo.xml`.
//!
//! ```text
//! <construction>
//!   <elements>
//!     <point id="A">
//!       <euclidean_coordinates>
//!         <double>0</double>
//!         <double>0</double>
//!       </euclidean_coordinates>
//!     </point>
//!     <line id="l">
//!       <homogeneous_coordinates> a b c as three <double> </homogeneous_coordinates>
//!     </line>
//!     <circle id="c">
//!       <euclidean_coordinates> cx cy </euclidean_coordinates>
//!       <radius><double>r</double></radius>
//!     </circle>
//!   </elements>
//!   <constraints>
//!     <free_point>
//!       <point out="true">A</point>
//!     </free_point>
//!     <point_on_line>
//!       <point out="true">X</point>
//!       <line>l</line>
//!       <parameter>0.5</parameter>
//!     </point_on_line>
//!   </constraints>
//!   <display>verbatim</display>
//! </construction>
//! ```
//!
//! Elements of other kinds and constraints outside the supported set are
//! kept verbatim. For an unsupported constraint the output is the child
//! marked `out="true"` and the inputs are the other children whose text is
//! a single identifier.

use roxmltree::Node;

use super::read::{
    decode as decode_text, elements, expect_root, inner_source, name, parse_tree, source, Ctx,
    Paths,
};
use super::writer::Writer;
use super::{CodecError, CodecErrorKind as K, Decoded};
use crate::model::{
    format_real, is_identifier, validate_construction, Constraint, ConstraintKind, Construction,
    ElementInstance, ElementValue, GeoKind, XmlFragment,
};
use crate::violation::ViolationCode;

/// Decodes and checks references: a reference to an undeclared element or
/// a repeated id is an error here, the other invariants are left to
/// [`validate_construction`].
pub fn parse_construction(bytes: &[u8]) -> Result<Construction, CodecError> {
    let k = decode(bytes).into_result()?;
    if let Some(v) = validate_construction(&k)
        .iter()
        .find(|v| matches!(v.code, ViolationCode::DanglingReference | ViolationCode::DuplicateId))
    {
        return Err(CodecError::from_violation(v));
    }
    Ok(k)
}

pub(crate) fn decode(bytes: &[u8]) -> Decoded<Construction> {
    let mut ctx = Ctx::default();
    let value = decode_into(bytes, &mut ctx).unwrap_or_else(|e| {
        ctx.errors.push(e);
        None
    });
    Decoded {
        value,
        errors: ctx.errors,
        warnings: ctx.warnings,
    }
}

fn decode_into(bytes: &[u8], ctx: &mut Ctx) -> Result<Option<Construction>, CodecError> {
    let text = decode_text(bytes)?;
    let doc = parse_tree(&text)?;
    let root = expect_root(&doc, "construction")?;
    ctx.only_attrs(root, "/construction", &[]);

    let mut elements_part = None;
    let mut constraints_part = None;
    let mut display = None;
    for child in elements(root) {
        let tag = name(&child);
        let path = format!("/construction/{tag}");
        let slot_taken = match tag {
            "elements" => elements_part.is_some(),
            "constraints" => constraints_part.is_some(),
            "display" => display.is_some(),
            _ => {
                ctx.err(&path, K::UnknownTag(tag.to_string()));
                continue;
            }
        };
        if slot_taken {
            ctx.err(&path, K::DuplicateSection(tag.to_string()));
            continue;
        }
        match tag {
            "elements" => elements_part = Some(decode_elements(ctx, &text, child, &path)),
            "constraints" => constraints_part = Some(decode_constraints(ctx, &text, child, &path)),
            _ => display = Some(XmlFragment::new(inner_source(&text, child))),
        }
    }
    if elements_part.is_none() {
        ctx.err("/construction", K::MissingElementsPart);
    }
    if constraints_part.is_none() {
        ctx.err("/construction", K::MissingConstraintsPart);
    }
    match (elements_part, constraints_part) {
        (Some(elements), Some(constraints)) => Ok(Some(Construction {
            elements,
            constraints,
            display: display.unwrap_or_default(),
        })),
        _ => Ok(None),
    }
}

/// Reads `<tag><double/>…</tag>` with exactly `want` numbers.
fn doubles(ctx: &mut Ctx, node: Node<'_, '_>, path: &str, want: usize) -> Option<Vec<f64>> {
    let mut values = Vec::new();
    let mut ok = true;
    let mut paths = Paths::new(path);
    for d in elements(node) {
        let at = paths.next(name(&d));
        if name(&d) != "double" {
            ctx.err(&at, K::UnknownTag(name(&d).to_string()));
            ok = false;
            continue;
        }
        match ctx.real(d, &at) {
            Some(v) => values.push(v),
            None => ok = false,
        }
    }
    if ok && values.len() != want {
        ctx.err(
            path,
            K::ArityError {
                tag: name(&node).to_string(),
                got: values.len(),
                want,
            },
        );
        ok = false;
    }
    ok.then_some(values)
}

/// Collects the named parts of an element, each given once.
fn parts<'a, 'i>(
    ctx: &mut Ctx,
    node: Node<'a, 'i>,
    path: &str,
    allowed: &[&str],
) -> Vec<(String, Node<'a, 'i>)> {
    let mut found: Vec<(String, Node)> = Vec::new();
    for child in elements(node) {
        let tag = name(&child);
        let at = format!("{path}/{tag}");
        if !allowed.contains(&tag) {
            ctx.err(&at, K::UnknownTag(tag.to_string()));
        } else if found.iter().any(|(t, _)| t == tag) {
            ctx.err(&at, K::DuplicateSection(tag.to_string()));
        } else {
            found.push((tag.to_string(), child));
        }
    }
    for want in allowed {
        if !found.iter().any(|(t, _)| t == want) {
            ctx.err(path, K::MissingField(want.to_string()));
        }
    }
    found
}

fn decode_element(ctx: &mut Ctx, src: &str, node: Node<'_, '_>, path: &str) -> Option<ElementInstance> {
    let tag = name(&node);
    let id = match node.attribute("id") {
        Some(id) => id.to_string(),
        None => {
            ctx.err(path, K::MissingField(format!("{tag}/@id")));
            return None;
        }
    };
    let Some(kind) = GeoKind::from_tag(tag) else {
        return Some(ElementInstance {
            id,
            value: ElementValue::Opaque {
                tag: tag.to_string(),
                payload: XmlFragment::new(source(src, node)),
            },
        });
    };
    ctx.only_attrs(node, path, &["id"]);
    let errors_before = ctx.errors.len();
    let value = match kind {
        GeoKind::Point => {
            let found = parts(ctx, node, path, &["euclidean_coordinates"]);
            let xy = found
                .first()
                .and_then(|(t, n)| doubles(ctx, *n, &format!("{path}/{t}"), 2));
            xy.map(|v| ElementValue::Point { x: v[0], y: v[1] })
        }
        GeoKind::Line => {
            let found = parts(ctx, node, path, &["homogeneous_coordinates"]);
            let abc = found
                .first()
                .and_then(|(t, n)| doubles(ctx, *n, &format!("{path}/{t}"), 3));
            abc.map(|v| ElementValue::Line {
                a: v[0],
                b: v[1],
                c: v[2],
            })
        }
        GeoKind::Circle => {
            let found = parts(ctx, node, path, &["euclidean_coordinates", "radius"]);
            let mut center = None;
            let mut radius = None;
            for (t, n) in &found {
                let at = format!("{path}/{t}");
                if t == "radius" {
                    radius = doubles(ctx, *n, &at, 1);
                } else {
                    center = doubles(ctx, *n, &at, 2);
                }
            }
            match (center, radius) {
                (Some(c), Some(r)) => Some(ElementValue::Circle {
                    cx: c[0],
                    cy: c[1],
                    r: r[0],
                }),
                _ => None,
            }
        }
    };
    if ctx.errors.len() > errors_before {
        return None;
    }
    value.map(|value| ElementInstance { id, value })
}

fn decode_elements(ctx: &mut Ctx, src: &str, node: Node<'_, '_>, path: &str) -> Vec<ElementInstance> {
    let mut out = Vec::new();
    let mut paths = Paths::new(path);
    for child in elements(node) {
        let at = paths.next(name(&child));
        if let Some(el) = decode_element(ctx, src, child, &at) {
            out.push(el);
        }
    }
    out
}

fn parse_ref(ctx: &mut Ctx, node: Node<'_, '_>, path: &str) -> String {
    let id = ctx.leaf_text(node, path);
    if id.is_empty() {
        ctx.err(path, K::UnexpectedContent(format!("empty <{}> reference", name(&node))));
    }
    id
}

fn decode_supported(
    ctx: &mut Ctx,
    node: Node<'_, '_>,
    path: &str,
    tag: &str,
) -> Option<Constraint> {
    let errors_before = ctx.errors.len();
    let takes_parameter = matches!(tag, "point_on_line" | "point_on_circle");
    let mut output: Option<(String, String)> = None;
    let mut inputs: Vec<(String, String)> = Vec::new();
    let mut parameter = None;
    let mut paths = Paths::new(path);
    for child in elements(node) {
        let ctag = name(&child);
        let at = paths.next(ctag);
        if ctag == "parameter" && takes_parameter {
            ctx.only_attrs(child, &at, &[]);
            if parameter.is_some() {
                ctx.err(&at, K::DuplicateSection("parameter".into()));
            }
            parameter = ctx.real(child, &at);
            continue;
        }
        if GeoKind::from_tag(ctag).is_none() {
            ctx.err(&at, K::UnknownTag(ctag.to_string()));
            continue;
        }
        ctx.only_attrs(child, &at, &["out"]);
        let id = parse_ref(ctx, child, &at);
        match child.attribute("out") {
            None => inputs.push((ctag.to_string(), id)),
            Some("true") if output.is_none() => output = Some((ctag.to_string(), id)),
            Some("true") => ctx.err(&at, K::UnexpectedContent("second output".into())),
            Some(other) => ctx.err(&at, K::UnexpectedContent(format!("out={other:?}"))),
        }
    }

    let kind = match tag {
        "free_point" => ConstraintKind::FreePoint,
        "line_through_two_points" => ConstraintKind::LineThroughTwoPoints,
        "intersection_of_two_lines" => ConstraintKind::IntersectionOfTwoLines,
        "midpoint_of_two_points" => ConstraintKind::MidpointOfTwoPoints,
        "circle_by_center_and_point" => ConstraintKind::CircleByCenterAndPoint,
        "perpendicular_line_through_point" => ConstraintKind::PerpendicularLineThroughPoint,
        "parallel_line_through_point" => ConstraintKind::ParallelLineThroughPoint,
        "point_on_line" => ConstraintKind::PointOnLine { t: parameter.unwrap_or(0.0) },
        _ => ConstraintKind::PointOnCircle { angle: parameter.unwrap_or(0.0) },
    };
    let sig = kind.signature().expect("supported constraint");
    if takes_parameter && parameter.is_none() && ctx.errors.len() == errors_before {
        ctx.err(path, K::MissingField("parameter".into()));
    }
    let Some((out_tag, out_id)) = output else {
        ctx.err(path, K::MissingField("output".into()));
        return None;
    };
    if out_tag != sig.output.tag() {
        ctx.err(
            path,
            K::RefKindMismatch {
                tag: out_tag,
                expected: sig.output.tag().to_string(),
            },
        );
    }
    if inputs.len() != sig.inputs.len() {
        ctx.err(
            path,
            K::ArityError {
                tag: tag.to_string(),
                got: inputs.len(),
                want: sig.inputs.len(),
            },
        );
    } else {
        for ((itag, _), want) in inputs.iter().zip(sig.inputs) {
            if itag != want.tag() {
                ctx.err(
                    path,
                    K::RefKindMismatch {
                        tag: itag.clone(),
                        expected: want.tag().to_string(),
                    },
                );
            }
        }
    }
    if ctx.errors.len() > errors_before {
        return None;
    }
    Some(Constraint {
        output: out_id,
        kind,
        inputs: inputs.into_iter().map(|(_, id)| id).collect(),
    })
}

fn decode_opaque(ctx: &mut Ctx, src: &str, node: Node<'_, '_>, path: &str) -> Option<Constraint> {
    let mut output = None;
    let mut inputs = Vec::new();
    for child in elements(node) {
        let text: String = child.children().filter_map(|c| c.text()).collect();
        let text = text.trim();
        let is_ref = elements(child).next().is_none() && is_identifier(text);
        if child.attribute("out") == Some("true") && output.is_none() {
            output = Some(text.to_string());
        } else if is_ref {
            inputs.push(text.to_string());
        }
    }
    let Some(output) = output else {
        ctx.err(path, K::MissingField("output".into()));
        return None;
    };
    Some(Constraint {
        output,
        kind: ConstraintKind::Opaque {
            tag: name(&node).to_string(),
            payload: XmlFragment::new(source(src, node)),
        },
        inputs,
    })
}

fn decode_constraints(ctx: &mut Ctx, src: &str, node: Node<'_, '_>, path: &str) -> Vec<Constraint> {
    let mut out = Vec::new();
    let mut paths = Paths::new(path);
    for child in elements(node) {
        let tag = name(&child);
        let at = paths.next(tag);
        let c = if ConstraintKind::SUPPORTED_TAGS.contains(&tag) {
            ctx.only_attrs(child, &at, &[]);
            decode_supported(ctx, child, &at, tag)
        } else {
            decode_opaque(ctx, src, child, &at)
        };
        out.extend(c);
    }
    out
}

fn write_doubles(w: &mut Writer, tag: &str, values: &[f64]) {
    w.open(tag, &[]);
    for v in values {
        w.leaf("double", &[], &format_real(*v));
    }
    w.close(tag);
}

fn write_element(w: &mut Writer, el: &ElementInstance) {
    let id = [("id", el.id.as_str())];
    match &el.value {
        ElementValue::Point { x, y } => {
            w.open("point", &id);
            write_doubles(w, "euclidean_coordinates", &[*x, *y]);
            w.close("point");
        }
        ElementValue::Line { a, b, c } => {
            w.open("line", &id);
            write_doubles(w, "homogeneous_coordinates", &[*a, *b, *c]);
            w.close("line");
        }
        ElementValue::Circle { cx, cy, r } => {
            w.open("circle", &id);
            write_doubles(w, "euclidean_coordinates", &[*cx, *cy]);
            write_doubles(w, "radius", &[*r]);
            w.close("circle");
        }
        ElementValue::Opaque { tag, payload } => {
            if payload.is_empty() {
                w.empty(tag, &id);
            } else {
                w.raw_element(payload.as_str());
            }
        }
    }
}

fn write_constraint(w: &mut Writer, c: &Constraint) {
    let tag = c.kind.tag();
    match (&c.kind, c.kind.signature()) {
        (ConstraintKind::Opaque { payload, .. }, _) if !payload.is_empty() => {
            w.raw_element(payload.as_str());
        }
        (_, sig) => {
            let out_tag = sig.as_ref().map_or("ref", |s| s.output.tag());
            w.open(tag, &[]);
            w.leaf(out_tag, &[("out", "true")], &c.output);
            for (i, input) in c.inputs.iter().enumerate() {
                let in_tag = sig
                    .as_ref()
                    .and_then(|s| s.inputs.get(i))
                    .map_or("ref", |k| k.tag());
                w.leaf(in_tag, &[], input);
            }
            if let Some(p) = c.kind.parameter() {
                w.leaf("parameter", &[], &format_real(p));
            }
            w.close(tag);
        }
    }
}

pub fn serialize_construction(k: &Construction) -> String {
    let mut w = Writer::new();
    w.open("construction", &[]);
    if k.elements.is_empty() {
        w.empty("elements", &[]);
    } else {
        w.open("elements", &[]);
        for el in &k.elements {
            write_element(&mut w, el);
        }
        w.close("elements");
    }
    if k.constraints.is_empty() {
        w.empty("constraints", &[]);
    } else {
        w.open("constraints", &[]);
        for c in &k.constraints {
            write_constraint(&mut w, c);
        }
        w.close("constraints");
    }
    if !k.display.is_empty() {
        w.raw_content("display", &[], k.display.as_str());
    }
    w.close("construction");
    w.finish()
}
