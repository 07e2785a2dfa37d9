//! `conjecture/conjecture.xml`.
//!
//! ```text
//! <conjecture>
//!   <hypothesis>
//!     <midpoint>P A B</midpoint>
//!   </hypothesis>
//!   <ndg>
//!     <not_equal>A B</not_equal>
//!   </ndg>
//!   <conclusion>
//!     <parallel>P Q S R</parallel>
//!     <segment_ratio ratio="2">A B C D</segment_ratio>
//!     <equal>
//!       <plus>
//!         <segment_length>A B</segment_length>
//!         <const>1</const>
//!       </plus>
//!       <segment_length>C D</segment_length>
//!     </equal>
//!   </conclusion>
//! </conjecture>
//! ```
//!
//! Point-argument predicates list their ids separated by whitespace.
//! Empty sections are omitted; the conclusion must not be empty.

use roxmltree::Node;

use super::read::{decode as decode_text, elements, expect_root, name, parse_tree, Ctx, Paths};
use super::writer::Writer;
use super::{CodecError, CodecErrorKind as K, Decoded};
use crate::model::{format_real, Conjecture, Predicate, PredicateError, Term};

pub fn parse_conjecture(bytes: &[u8]) -> Result<Conjecture, CodecError> {
    decode(bytes).into_result()
}

pub(crate) fn decode(bytes: &[u8]) -> Decoded<Conjecture> {
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

fn decode_into(bytes: &[u8], ctx: &mut Ctx) -> Result<Option<Conjecture>, CodecError> {
    let text = decode_text(bytes)?;
    let doc = parse_tree(&text)?;
    let root = expect_root(&doc, "conjecture")?;
    ctx.only_attrs(root, "/conjecture", &[]);

    let mut sections: [Option<Vec<Predicate>>; 3] = [None, None, None];
    for child in elements(root) {
        let tag = name(&child);
        let path = format!("/conjecture/{tag}");
        let slot = match tag {
            "hypothesis" => 0,
            "ndg" => 1,
            "conclusion" => 2,
            _ => {
                ctx.err(&path, K::UnknownTag(tag.to_string()));
                continue;
            }
        };
        if sections[slot].is_some() {
            ctx.err(&path, K::DuplicateSection(tag.to_string()));
            continue;
        }
        ctx.only_attrs(child, &path, &[]);
        sections[slot] = Some(decode_section(ctx, child, &path));
    }
    let [hypothesis, ndg, conclusion] = sections;
    let conclusion = conclusion.unwrap_or_default();
    if conclusion.is_empty() && !ctx.errors.iter().any(|e| e.path.starts_with("/conjecture/conclusion")) {
        ctx.err("/conjecture", K::MissingConclusion);
    }
    Ok(Some(Conjecture {
        hypothesis: hypothesis.unwrap_or_default(),
        ndg: ndg.unwrap_or_default(),
        conclusion,
    }))
}

fn decode_section(ctx: &mut Ctx, node: Node<'_, '_>, path: &str) -> Vec<Predicate> {
    let mut out = Vec::new();
    let mut paths = Paths::new(path);
    for child in elements(node) {
        let at = paths.next(name(&child));
        if let Some(p) = decode_predicate(ctx, child, &at) {
            out.push(p);
        }
    }
    out
}

fn decode_predicate(ctx: &mut Ctx, node: Node<'_, '_>, path: &str) -> Option<Predicate> {
    let tag = name(&node);
    if tag == "equal" {
        ctx.only_attrs(node, path, &[]);
        let terms = decode_term_children(ctx, node, path, 2)?;
        let [l, r]: [Term; 2] = terms.try_into().ok()?;
        return Some(Predicate::Equal(l, r));
    }
    if Predicate::point_arity(tag).is_none() {
        ctx.err(path, K::UnknownPredicate(tag.to_string()));
        return None;
    }
    let ratio = if tag == "segment_ratio" {
        ctx.only_attrs(node, path, &["ratio"]);
        match node.attribute("ratio") {
            None => {
                ctx.err(path, K::MissingField("segment_ratio/@ratio".into()));
                return None;
            }
            Some(r) => match r.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => {
                    ctx.err(path, K::MalformedNumber(r.to_string()));
                    return None;
                }
            },
        }
    } else {
        ctx.only_attrs(node, path, &[]);
        None
    };
    let text = ctx.leaf_text(node, path);
    let ids: Vec<String> = text.split_whitespace().map(String::from).collect();
    match Predicate::from_points(tag, ids, ratio) {
        Ok(p) => Some(p),
        Err(PredicateError::Arity { name, got, want }) => {
            ctx.err(path, K::ArityError { tag: name, got, want });
            None
        }
        Err(PredicateError::UnknownPredicate(name)) => {
            ctx.err(path, K::UnknownPredicate(name));
            None
        }
        Err(PredicateError::MissingRatio) => {
            ctx.err(path, K::MissingField("segment_ratio/@ratio".into()));
            None
        }
    }
}

fn decode_term_children(
    ctx: &mut Ctx,
    node: Node<'_, '_>,
    path: &str,
    want: usize,
) -> Option<Vec<Term>> {
    let children: Vec<Node> = elements(node).collect();
    if children.len() != want {
        ctx.err(
            path,
            K::ArityError {
                tag: name(&node).to_string(),
                got: children.len(),
                want,
            },
        );
        return None;
    }
    let mut paths = Paths::new(path);
    let mut out = Vec::new();
    for child in children {
        let at = paths.next(name(&child));
        out.push(decode_term(ctx, child, &at));
    }
    out.into_iter().collect()
}

fn decode_term(ctx: &mut Ctx, node: Node<'_, '_>, path: &str) -> Option<Term> {
    ctx.only_attrs(node, path, &[]);
    match name(&node) {
        "const" => ctx.real(node, path).map(Term::Const),
        "segment_length" => {
            let text = ctx.leaf_text(node, path);
            let ids: Vec<&str> = text.split_whitespace().collect();
            if let [a, b] = ids[..] {
                Some(Term::length(a, b))
            } else {
                ctx.err(
                    path,
                    K::ArityError {
                        tag: "segment_length".into(),
                        got: ids.len(),
                        want: 2,
                    },
                );
                None
            }
        }
        tag @ ("plus" | "mult") => {
            let [l, r]: [Term; 2] = decode_term_children(ctx, node, path, 2)?.try_into().ok()?;
            Some(if tag == "plus" {
                Term::plus(l, r)
            } else {
                Term::mult(l, r)
            })
        }
        other => {
            ctx.err(path, K::UnknownTag(other.to_string()));
            None
        }
    }
}

fn write_term(w: &mut Writer, t: &Term) {
    match t {
        Term::Const(v) => w.leaf("const", &[], &format_real(*v)),
        Term::SegmentLength(a, b) => w.leaf("segment_length", &[], &format!("{a} {b}")),
        Term::Plus(l, r) | Term::Mult(l, r) => {
            let tag = if matches!(t, Term::Plus(..)) { "plus" } else { "mult" };
            w.open(tag, &[]);
            write_term(w, l);
            write_term(w, r);
            w.close(tag);
        }
    }
}

fn write_predicate(w: &mut Writer, p: &Predicate) {
    match p {
        Predicate::Equal(l, r) => {
            w.open("equal", &[]);
            write_term(w, l);
            write_term(w, r);
            w.close("equal");
        }
        Predicate::SegmentRatio(ids, ratio) => {
            w.leaf("segment_ratio", &[("ratio", &format_real(*ratio))], &ids.join(" "));
        }
        other => w.leaf(other.name(), &[], &other.point_args().join(" ")),
    }
}

pub fn serialize_conjecture(c: &Conjecture) -> String {
    let mut w = Writer::new();
    w.open("conjecture", &[]);
    for (tag, preds) in [
        ("hypothesis", &c.hypothesis),
        ("ndg", &c.ndg),
        ("conclusion", &c.conclusion),
    ] {
        if preds.is_empty() {
            continue;
        }
        w.open(tag, &[]);
        for p in preds {
            write_predicate(&mut w, p);
        }
        w.close(tag);
    }
    w.close("conjecture");
    w.finish()
}
