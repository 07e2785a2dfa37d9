//! Shared decoding helpers.

use roxmltree::{Document, Node, ParsingOptions};

use super::{CodecError, CodecErrorKind as K};
use crate::violation::Violation;

/// UTF-8 text with any byte order mark removed and CRLF / CR line endings
/// turned into LF, so that verbatim payloads never carry carriage returns.
pub(crate) fn decode(bytes: &[u8]) -> Result<String, CodecError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| CodecError::new("/", K::MalformedXml(e.to_string())))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    Ok(text.replace("\r\n", "\n").replace('\r', "\n"))
}

pub(crate) fn parse_tree(text: &str) -> Result<Document<'_>, CodecError> {
    let opts = ParsingOptions {
        allow_dtd: false,
        ..ParsingOptions::default()
    };
    Document::parse_with_options(text, opts)
        .map_err(|e| CodecError::new("/", K::MalformedXml(e.to_string())))
}

pub(crate) fn name<'a>(node: &Node<'a, '_>) -> &'a str {
    node.tag_name().name()
}

pub(crate) fn elements<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(Node::is_element)
}

/// Source text between the start and end tags of `node`, trimmed.
pub(crate) fn inner_source<'a>(src: &'a str, node: Node<'_, '_>) -> &'a str {
    match (node.first_child(), node.last_child()) {
        (Some(first), Some(last)) => src[first.range().start..last.range().end].trim(),
        _ => "",
    }
}

pub(crate) fn source<'a>(src: &'a str, node: Node<'_, '_>) -> &'a str {
    &src[node.range()]
}

/// Collects findings while a decoder walks a document.
#[derive(Default)]
pub(crate) struct Ctx {
    pub errors: Vec<CodecError>,
    pub warnings: Vec<Violation>,
}

impl Ctx {
    pub fn err(&mut self, path: impl Into<String>, kind: K) {
        self.errors.push(CodecError::new(path, kind));
    }

    /// Text content of an element that must not contain child elements.
    pub fn leaf_text(&mut self, node: Node<'_, '_>, path: &str) -> String {
        if elements(node).next().is_some() {
            self.err(
                path,
                K::UnexpectedContent(format!("<{}> should contain text only", name(&node))),
            );
        }
        let text: String = node.children().filter_map(|c| c.text()).collect();
        text.trim().to_string()
    }

    pub fn real(&mut self, node: Node<'_, '_>, path: &str) -> Option<f64> {
        let text = self.leaf_text(node, path);
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.err(path, K::MalformedNumber(text));
                None
            }
        }
    }

    /// Non-negative integer; a negative value is reported as such rather
    /// than as a malformed number.
    pub fn count(&mut self, node: Node<'_, '_>, path: &str) -> Option<u64> {
        let text = self.leaf_text(node, path);
        if let Ok(v) = text.parse::<u64>() {
            return Some(v);
        }
        if text.parse::<i128>().is_ok_and(|v| v < 0) {
            self.err(path, K::NegativeMeasure(name(&node).to_string()));
        } else {
            self.err(path, K::MalformedNumber(text));
        }
        None
    }

    /// Rejects any attributes on `node` other than `allowed`.
    pub fn only_attrs(&mut self, node: Node<'_, '_>, path: &str, allowed: &[&str]) {
        for a in node.attributes() {
            if a.namespace().is_none() && !allowed.contains(&a.name()) {
                self.err(
                    path,
                    K::UnexpectedContent(format!("attribute {:?} on <{}>", a.name(), name(&node))),
                );
            }
        }
    }
}

/// Numbers children by tag, producing `parent/tag[n]` paths.
pub(crate) struct Paths<'p> {
    parent: &'p str,
    seen: std::collections::HashMap<String, usize>,
}

impl<'p> Paths<'p> {
    pub fn new(parent: &'p str) -> Self {
        Paths {
            parent,
            seen: Default::default(),
        }
    }

    pub fn next(&mut self, tag: &str) -> String {
        let n = self.seen.entry(tag.to_string()).or_insert(0);
        *n += 1;
        format!("{}/{}[{}]", self.parent, tag, n)
    }
}

/// Checks the root element name, reporting the mismatch as an error.
pub(crate) fn expect_root<'a, 'i>(
    doc: &'a Document<'i>,
    want: &'static str,
) -> Result<Node<'a, 'i>, CodecError> {
    let root = doc.root_element();
    if name(&root) == want {
        Ok(root)
    } else {
        Err(CodecError::new(
            format!("/{}", name(&root)),
            K::WrongRoot {
                expected: want,
                found: name(&root).to_string(),
            },
        ))
    }
}
