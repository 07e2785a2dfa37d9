//! `information/information.xml`.
//!
//! ```text
//! <information>
//!   <name>varignon</name>
//!   <description>free text</description>
//!   <statement>MathML or other XML, verbatim</statement>
//!   <bibrefs>
//!     <bibentry id="key">BibTeXML, verbatim</bibentry>
//!   </bibrefs>
//!   <keywords>
//!     <keyword>midpoint</keyword>
//!   </keywords>
//! </information>
//! ```

use roxmltree::Node;

use super::read::{decode as decode_text, elements, expect_root, inner_source, name, parse_tree, Ctx, Paths};
use super::writer::Writer;
use super::{CodecError, CodecErrorKind as K, Decoded, Strictness};
use crate::model::{BibEntry, ProblemInfo, ProblemName, XmlFragment};
use crate::violation::{Violation, ViolationCode};

pub fn parse_information(bytes: &[u8]) -> Result<ProblemInfo, CodecError> {
    parse_information_with(bytes, Strictness::Lenient)
}

pub fn parse_information_with(
    bytes: &[u8],
    strictness: Strictness,
) -> Result<ProblemInfo, CodecError> {
    decode(bytes, strictness).into_result()
}

fn unknown(ctx: &mut Ctx, strictness: Strictness, path: &str, node: Node<'_, '_>) {
    match strictness {
        Strictness::Strict => ctx.err(path, K::UnknownTag(name(&node).to_string())),
        Strictness::Lenient => ctx.warnings.push(Violation::warning(
            ViolationCode::UnknownTag,
            path,
            format!("unknown element <{}> ignored", name(&node)),
        )),
    }
}

fn stray_text(ctx: &mut Ctx, node: Node<'_, '_>, path: &str) {
    if node
        .children()
        .any(|c| c.is_text() && !c.text().unwrap_or_default().trim().is_empty())
    {
        ctx.err(path, K::UnexpectedContent("text outside elements".into()));
    }
}

pub(crate) fn decode(bytes: &[u8], strictness: Strictness) -> Decoded<ProblemInfo> {
    let mut ctx = Ctx::default();
    let value = decode_into(bytes, strictness, &mut ctx).unwrap_or_else(|e| {
        ctx.errors.push(e);
        None
    });
    Decoded {
        value,
        errors: ctx.errors,
        warnings: ctx.warnings,
    }
}

fn decode_into(
    bytes: &[u8],
    strictness: Strictness,
    ctx: &mut Ctx,
) -> Result<Option<ProblemInfo>, CodecError> {
    let text = decode_text(bytes)?;
    let doc = parse_tree(&text)?;
    let root = expect_root(&doc, "information")?;
    stray_text(ctx, root, "/information");

    let mut name_value: Option<String> = None;
    let mut description = None;
    let mut statement = None;
    let mut bibrefs: Option<Vec<BibEntry>> = None;
    let mut keywords: Option<Vec<String>> = None;

    for child in elements(root) {
        let tag = name(&child);
        let path = format!("/information/{tag}");
        let duplicate = match tag {
            "name" => name_value.is_some(),
            "description" => description.is_some(),
            "statement" => statement.is_some(),
            "bibrefs" => bibrefs.is_some(),
            "keywords" => keywords.is_some(),
            _ => false,
        };
        if duplicate {
            ctx.err(&path, K::DuplicateSection(tag.to_string()));
            continue;
        }
        match tag {
            "name" => {
                ctx.only_attrs(child, &path, &[]);
                name_value = Some(ctx.leaf_text(child, &path));
            }
            "description" => {
                ctx.only_attrs(child, &path, &[]);
                description = Some(ctx.leaf_text(child, &path));
            }
            "statement" => {
                ctx.only_attrs(child, &path, &[]);
                statement = Some(XmlFragment::new(inner_source(&text, child)));
            }
            "bibrefs" => {
                ctx.only_attrs(child, &path, &[]);
                stray_text(ctx, child, &path);
                let mut entries = Vec::new();
                let mut paths = Paths::new(&path);
                for entry in elements(child) {
                    let at = paths.next(name(&entry));
                    if name(&entry) != "bibentry" {
                        unknown(ctx, strictness, &at, entry);
                        continue;
                    }
                    ctx.only_attrs(entry, &at, &["id"]);
                    match entry.attribute("id") {
                        Some(id) => entries.push(BibEntry {
                            id: id.to_string(),
                            payload: XmlFragment::new(inner_source(&text, entry)),
                        }),
                        None => ctx.err(&at, K::MissingField("bibentry/@id".into())),
                    }
                }
                bibrefs = Some(entries);
            }
            "keywords" => {
                ctx.only_attrs(child, &path, &[]);
                stray_text(ctx, child, &path);
                let mut words = Vec::new();
                let mut paths = Paths::new(&path);
                for kw in elements(child) {
                    let at = paths.next(name(&kw));
                    if name(&kw) != "keyword" {
                        unknown(ctx, strictness, &at, kw);
                        continue;
                    }
                    ctx.only_attrs(kw, &at, &[]);
                    words.push(ctx.leaf_text(kw, &at));
                }
                keywords = Some(words);
            }
            _ => unknown(ctx, strictness, &path, child),
        }
    }

    let Some(raw_name) = name_value else {
        ctx.err("/information", K::MissingName);
        return Ok(None);
    };
    let problem_name = match ProblemName::new(raw_name) {
        Ok(n) => n,
        Err(e) => {
            ctx.err(
                "/information/name",
                K::Invalid {
                    code: ViolationCode::InvalidName,
                    message: e.to_string(),
                },
            );
            return Ok(None);
        }
    };
    Ok(Some(ProblemInfo {
        name: problem_name,
        description: description.unwrap_or_default(),
        statement: statement.unwrap_or_default(),
        bibrefs: bibrefs.unwrap_or_default(),
        keywords: keywords.unwrap_or_default(),
    }))
}

pub fn serialize_information(info: &ProblemInfo) -> String {
    let mut w = Writer::new();
    w.open("information", &[]);
    w.leaf("name", &[], info.name.as_str());
    if !info.description.trim().is_empty() {
        w.leaf("description", &[], &info.description);
    }
    if !info.statement.is_empty() {
        w.raw_content("statement", &[], info.statement.as_str());
    }
    if !info.bibrefs.is_empty() {
        w.open("bibrefs", &[]);
        for entry in &info.bibrefs {
            w.raw_content("bibentry", &[("id", &entry.id)], entry.payload.as_str());
        }
        w.close("bibrefs");
    }
    if !info.keywords.is_empty() {
        w.open("keywords", &[]);
        for kw in &info.keywords {
            w.leaf("keyword", &[], kw);
        }
        w.close("keywords");
    }
    w.close("information");
    w.finish()
}
