//! Schema-aware canonicalization that works on the document tree directly.
//!
//! Kept separate from the typed codecs on purpose: it rewrites the tree
//! (child order, number spelling, token whitespace) without building model
//! values, which makes it a useful cross-check for `serialize(parse(x))`.

use roxmltree::Node;

use super::read::{decode, elements, inner_source, name, parse_tree, source};
use super::writer::Writer;
use super::{CodecError, CodecErrorKind, DocumentKind};
use crate::model::{format_real, ConstraintKind, GeoKind, ProofStatus};

enum Opaque {
    No,
    /// Content kept verbatim, the element itself is canonical.
    Inner,
    /// The whole element kept verbatim.
    Whole,
}

fn opaque(kind: DocumentKind, path: &[&str]) -> Opaque {
    match (kind, path) {
        (DocumentKind::Information, ["information", "statement"])
        | (DocumentKind::Information, ["information", "bibrefs", "bibentry"])
        | (DocumentKind::Construction, ["construction", "display"]) => Opaque::Inner,
        (DocumentKind::Construction, ["construction", "elements", tag]) => {
            if GeoKind::from_tag(tag).is_some() {
                Opaque::No
            } else {
                Opaque::Whole
            }
        }
        (DocumentKind::Construction, ["construction", "constraints", tag]) => {
            if ConstraintKind::SUPPORTED_TAGS.contains(tag) {
                Opaque::No
            } else {
                Opaque::Whole
            }
        }
        _ => Opaque::No,
    }
}

enum Leaf {
    Plain,
    Real,
    Count,
    Tokens,
    Status,
}

fn leaf_rule(kind: DocumentKind, path: &[&str]) -> Leaf {
    let last = path.last().copied().unwrap_or_default();
    match kind {
        DocumentKind::Construction if matches!(last, "double" | "parameter") => Leaf::Real,
        DocumentKind::Conjecture if last == "const" => Leaf::Real,
        DocumentKind::Conjecture => Leaf::Tokens,
        DocumentKind::ProofInfo => match last {
            "time_limit_seconds" | "CPU_time" | "clock_speed" => Leaf::Real,
            "iterations_limit" | "memory_limit" | "elimination_steps"
            | "number_terms_largest_polynomial" | "proof_steps" | "RAM" => Leaf::Count,
            "status" => Leaf::Status,
            _ => Leaf::Plain,
        },
        _ => Leaf::Plain,
    }
}

fn normalize_leaf(rule: Leaf, text: &str) -> String {
    let text = text.trim();
    match rule {
        Leaf::Plain => text.to_string(),
        Leaf::Real => match text.parse::<f64>() {
            Ok(v) if v.is_finite() => format_real(v),
            _ => text.to_string(),
        },
        Leaf::Count => text
            .parse::<u64>()
            .map(|v| v.to_string())
            .unwrap_or_else(|_| text.to_string()),
        Leaf::Tokens => text.split_whitespace().collect::<Vec<_>>().join(" "),
        Leaf::Status => text
            .parse::<ProofStatus>()
            .map(|s| s.as_str().to_string())
            .unwrap_or_else(|_| text.to_string()),
    }
}

/// Position of a child in the canonical order of its parent; unknown
/// children keep their relative order after the known ones.
fn rank(path: &[&str], child: Node<'_, '_>) -> usize {
    let order: &[&str] = match path {
        ["information"] => &["name", "description", "statement", "bibrefs", "keywords"],
        ["construction"] => &["elements", "constraints", "display"],
        ["construction", "elements", "circle"] => &["euclidean_coordinates", "radius"],
        ["construction", "constraints", _] => {
            return if child.attribute("out").is_some() {
                0
            } else if name(&child) == "parameter" {
                2
            } else {
                1
            };
        }
        ["conjecture"] => &["hypothesis", "ndg", "conclusion"],
        ["proof_info"] => &[
            "prover", "version", "method", "status", "limits", "measures", "platform",
        ],
        ["proof_info", "limits"] => &["time_limit_seconds", "iterations_limit", "memory_limit"],
        ["proof_info", "measures"] => &[
            "CPU_time",
            "elimination_steps",
            "number_terms_largest_polynomial",
            "proof_steps",
        ],
        ["proof_info", "platform"] => &["computer_name", "clock_speed", "RAM", "operating_system"],
        _ => &[],
    };
    order
        .iter()
        .position(|t| *t == name(&child))
        .unwrap_or(order.len())
}

/// Empty elements are dropped from canonical output, except the two parts
/// a construction must always have.
fn droppable(path: &[&str]) -> bool {
    !matches!(
        path,
        [_] | ["construction", "elements"] | ["construction", "constraints"]
    )
}

fn qualified_tag<'a>(src: &'a str, node: Node<'_, '_>) -> &'a str {
    let start = &src[node.range().start + 1..];
    let end = start
        .find(|c: char| c.is_whitespace() || c == '>' || c == '/')
        .unwrap_or(start.len());
    &start[..end]
}

fn attributes(src: &str, kind: DocumentKind, node: Node<'_, '_>) -> Vec<(String, String)> {
    node.attributes()
        .map(|a| {
            let qname = src[a.range_qname()].to_string();
            let value = if kind == DocumentKind::Conjecture && qname == "ratio" {
                normalize_leaf(Leaf::Real, a.value())
            } else {
                a.value().to_string()
            };
            (qname, value)
        })
        .collect()
}

fn emit(src: &str, kind: DocumentKind, node: Node<'_, '_>, path: &mut Vec<String>, w: &mut Writer) {
    path.push(name(&node).to_string());
    let here = path.clone();
    let view: Vec<&str> = here.iter().map(String::as_str).collect();
    let tag = qualified_tag(src, node);
    let owned = attributes(src, kind, node);
    let attrs: Vec<(&str, &str)> = owned.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();

    match opaque(kind, &view) {
        Opaque::Whole => w.raw_element(source(src, node)),
        Opaque::Inner => {
            let payload = inner_source(src, node);
            if !(payload.is_empty() && attrs.is_empty() && droppable(&view)) {
                w.raw_content(tag, &attrs, payload);
            }
        }
        Opaque::No => {
            let mut children: Vec<Node> = elements(node).collect();
            let mixed = !children.is_empty()
                && node
                    .children()
                    .any(|c| c.is_text() && !c.text().unwrap_or_default().trim().is_empty());
            if mixed {
                w.raw_element(source(src, node));
            } else if children.is_empty() {
                let text: String = node.children().filter_map(|c| c.text()).collect();
                let text = normalize_leaf(leaf_rule(kind, &view), &text);
                if !(text.is_empty() && attrs.is_empty() && droppable(&view)) {
                    w.leaf(tag, &attrs, &text);
                }
            } else {
                children.sort_by_key(|c| rank(&view, *c));
                let mut inner = Writer::nested(w.depth() + 1);
                for child in children {
                    emit(src, kind, child, path, &mut inner);
                }
                let body = inner.finish();
                if body.is_empty() && attrs.is_empty() && droppable(&view) {
                    // Only empty children: the element itself is empty.
                } else if body.is_empty() {
                    w.empty(tag, &attrs);
                } else {
                    w.open(tag, &attrs);
                    w.append(&body);
                    w.close(tag);
                }
            }
        }
    }
    path.pop();
}

/// Canonical text of a document of the given kind.
pub fn canonicalize(kind: DocumentKind, bytes: &[u8]) -> Result<String, CodecError> {
    let text = decode(bytes)?;
    let doc = parse_tree(&text)?;
    let root = doc.root_element();
    if name(&root) != kind.root() {
        return Err(CodecError::new(
            format!("/{}", name(&root)),
            CodecErrorKind::WrongRoot {
                expected: kind.root(),
                found: name(&root).to_string(),
            },
        ));
    }
    let mut w = Writer::new();
    emit(&text, kind, root, &mut Vec::new(), &mut w);
    Ok(w.finish())
}
