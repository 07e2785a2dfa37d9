//! Mutation classes: each one breaks a valid document or container in a
//! single way and names the violation code that must be reported.

use i2gatp::container::{self, Entry, CONJECTURE_XML, INTERGEO_XML, MANDATORY_DIRS};
use i2gatp::xml::{self, DocumentKind};
use i2gatp::Violation;

use super::{container_files, container_names, xml_fixtures};

pub enum Apply {
    /// Applies to documents of one kind, or of every kind when `None`.
    Doc(Option<DocumentKind>, fn(&str) -> Option<String>),
    Container(fn(&mut Vec<Entry>) -> bool),
}

pub struct Mutation {
    pub class: &'static str,
    pub code: &'static str,
    pub apply: Apply,
}

/// Byte range of the first `<tag ...>...</tag>` element, or of `<tag/>`.
fn element_span(doc: &str, tag: &str, from: usize) -> Option<(usize, usize)> {
    let mut at = from;
    loop {
        let start = at + doc[at..].find(&format!("<{tag}"))?;
        let after = doc[start + tag.len() + 1..].chars().next()?;
        if !(after == '>' || after == '/' || after.is_whitespace()) {
            at = start + 1;
            continue;
        }
        let open_end = start + doc[start..].find('>')? + 1;
        if doc[..open_end].ends_with("/>") {
            return Some((start, open_end));
        }
        let close = format!("</{tag}>");
        let end = open_end + doc[open_end..].find(&close)? + close.len();
        return Some((start, end));
    }
}

fn remove_element(doc: &str, tag: &str) -> Option<String> {
    let (s, e) = element_span(doc, tag, 0)?;
    Some(format!("{}{}", &doc[..s], &doc[e..]))
}

fn inner(doc: &str, tag: &str) -> Option<(usize, usize)> {
    let (s, e) = element_span(doc, tag, 0)?;
    let open_end = s + doc[s..].find('>')? + 1;
    let close = e - tag.len() - 3;
    (open_end <= close).then_some((open_end, close))
}

fn replace_inner(doc: &str, tag: &str, text: &str) -> Option<String> {
    let (s, e) = inner(doc, tag)?;
    Some(format!("{}{}{}", &doc[..s], text, &doc[e..]))
}

fn insert_after_open(doc: &str, tag: &str, text: &str) -> Option<String> {
    let (s, _) = element_span(doc, tag, 0)?;
    let open_end = s + doc[s..].find('>')? + 1;
    if doc[..open_end].ends_with("/>") {
        return None;
    }
    Some(format!("{}{}{}", &doc[..open_end], text, &doc[open_end..]))
}

/// Puts `leaf` into the `section` element, creating the section if needed.
fn add_to_section(doc: &str, root: &str, section: &str, leaf: &str) -> Option<String> {
    insert_after_open(doc, section, leaf).or_else(|| {
        let close = doc.rfind(&format!("</{root}>"))?;
        Some(format!(
            "{}<{section}>{leaf}</{section}>{}",
            &doc[..close],
            &doc[close..]
        ))
    })
}

const POINT_PREDICATES: &[&str] = &["parallel", "midpoint", "collinear", "perpendicular", "same_length"];

fn first_predicate(doc: &str) -> Option<(&'static str, usize, usize)> {
    POINT_PREDICATES
        .iter()
        .filter_map(|tag| {
            let (s, e) = inner(doc, tag)?;
            Some((*tag, s, e))
        })
        .min_by_key(|(_, s, _)| *s)
}

fn doc_arity(doc: &str) -> Option<String> {
    let (_, s, e) = first_predicate(doc)?;
    let mut ids: Vec<&str> = doc[s..e].split_whitespace().collect();
    ids.pop();
    Some(format!("{}{}{}", &doc[..s], ids.join(" "), &doc[e..]))
}

fn doc_unknown_predicate(doc: &str) -> Option<String> {
    let (tag, s, e) = first_predicate(doc)?;
    let open = doc[..s].rfind(&format!("<{tag}"))?;
    let close_end = e + tag.len() + 3;
    Some(format!(
        "{}<cocyclic>{}</cocyclic>{}",
        &doc[..open],
        &doc[s..e],
        &doc[close_end..]
    ))
}

fn doc_wrong_root(doc: &str) -> Option<String> {
    let root = DocumentKind::detect(doc.as_bytes()).ok()?.root();
    let open = element_span(doc, root, 0)?.0;
    let close = doc.rfind(&format!("</{root}>"))?;
    Some(format!(
        "{}<problem{}</problem>{}",
        &doc[..open],
        &doc[open + root.len() + 1..close],
        &doc[close + root.len() + 3..]
    ))
}

fn doc_truncated(doc: &str) -> Option<String> {
    let mut cut = doc.len() / 2;
    while !doc.is_char_boundary(cut) {
        cut -= 1;
    }
    Some(doc[..cut].to_string())
}

fn doc_duplicate_keyword(doc: &str) -> Option<String> {
    let (s, e) = inner(doc, "keyword")?;
    insert_after_open(doc, "keywords", &format!("<keyword>{}</keyword>", &doc[s..e]))
}

fn doc_duplicate_bib_id(doc: &str) -> Option<String> {
    let (s, _) = element_span(doc, "bibentry", 0)?;
    let open_end = s + doc[s..].find('>')?;
    let tag = &doc[s..open_end];
    let id_at = tag.find("id=")? + 3;
    let quote = tag[id_at..].chars().next()?;
    let rest = &tag[id_at + 1..];
    let id = &rest[..rest.find(quote)?];
    insert_after_open(doc, "bibrefs", &format!("<bibentry id=\"{id}\"/>"))
}

fn doc_empty_keyword(doc: &str) -> Option<String> {
    add_to_section(doc, "information", "keywords", "<keyword>   </keyword>")
}

fn doc_duplicate_description(doc: &str) -> Option<String> {
    let extra = "<description>one</description><description>two</description>";
    let doc = remove_element(doc, "description").unwrap_or_else(|| doc.to_string());
    let close = doc.rfind("</information>")?;
    Some(format!("{}{extra}{}", &doc[..close], &doc[close..]))
}

fn doc_duplicate_point(doc: &str) -> Option<String> {
    let (es, _) = element_span(doc, "elements", 0)?;
    let (s, e) = element_span(doc, "point", es)?;
    Some(format!("{}{}{}", &doc[..e], &doc[s..e], &doc[e..]))
}

fn first_constraint(doc: &str) -> Option<(usize, usize)> {
    let (cs, _) = element_span(doc, "constraints", 0)?;
    let body = cs + doc[cs..].find('>')? + 1;
    let mut at = body;
    loop {
        let lt = at + doc[at..].find('<')?;
        if doc[lt..].starts_with("<!--") {
            at = lt + doc[lt..].find("-->")? + 3;
            continue;
        }
        if doc[lt..].starts_with("</") {
            return None;
        }
        let name_end = lt + 1 + doc[lt + 1..].find(|c: char| c == '>' || c == '/' || c.is_whitespace())?;
        return element_span(doc, &doc[lt + 1..name_end], lt);
    }
}

fn doc_forward_reference(doc: &str) -> Option<String> {
    let (s, e) = first_constraint(doc)?;
    let moved = &doc[s..e];
    let rest = format!("{}{}", &doc[..s], &doc[e..]);
    let close = rest.rfind("</constraints>")?;
    Some(format!("{}{moved}{}", &rest[..close], &rest[close..]))
}

fn input_point_ref(doc: &str) -> Option<(usize, usize)> {
    let (cs, _) = element_span(doc, "constraints", 0)?;
    let s = cs + doc[cs..].find("<point>")?;
    let e = s + doc[s..].find("</point>")? + "</point>".len();
    Some((s, e))
}

fn doc_dangling_reference(doc: &str) -> Option<String> {
    let (s, e) = input_point_ref(doc)?;
    Some(format!("{}<point>Zq9</point>{}", &doc[..s], &doc[e..]))
}

fn doc_kind_mismatch(doc: &str) -> Option<String> {
    // Opaque constraints carry no kinds, so aim at a supported one.
    let (cs, _) = ["line_through_two_points", "midpoint_of_two_points", "circle_by_center_and_point"]
        .iter()
        .filter_map(|tag| element_span(doc, tag, 0))
        .min()?;
    let s = cs + doc[cs..].find("<point>")?;
    let e = s + doc[s..].find("</point>")? + "</point>".len();
    let id = &doc[s + "<point>".len()..e - "</point>".len()];
    Some(format!("{}<line>{id}</line>{}", &doc[..s], &doc[e..]))
}

fn doc_zero_line(doc: &str) -> Option<String> {
    let zero = "<double>0</double><double>0</double><double>0</double>";
    replace_inner(doc, "homogeneous_coordinates", zero)
}

fn doc_bad_double(doc: &str) -> Option<String> {
    replace_inner(doc, "double", "1,5")
}

fn doc_unknown_section(doc: &str) -> Option<String> {
    insert_after_open(doc, "conjecture", "<lemma/>")
}

fn doc_bad_status(doc: &str) -> Option<String> {
    replace_inner(doc, "status", "maybe")
}

fn doc_negative_measure(doc: &str) -> Option<String> {
    let doc = remove_element(doc, "elimination_steps").unwrap_or_else(|| doc.to_string());
    let leaf = "<elimination_steps>-3</elimination_steps>";
    add_to_section(&doc, "proof_info", "measures", leaf)
}

fn doc_bad_time_limit(doc: &str) -> Option<String> {
    let doc = remove_element(doc, "time_limit_seconds").unwrap_or_else(|| doc.to_string());
    let leaf = "<time_limit_seconds>fast</time_limit_seconds>";
    add_to_section(&doc, "proof_info", "limits", leaf)
}

fn doc_zero_clock(doc: &str) -> Option<String> {
    let doc = remove_element(doc, "clock_speed").unwrap_or_else(|| doc.to_string());
    add_to_section(&doc, "proof_info", "platform", "<clock_speed>0</clock_speed>")
}

fn doc_bad_prover(doc: &str) -> Option<String> {
    replace_inner(doc, "prover", "GCLC prover")
}

fn entry_mut<'a>(files: &'a mut [Entry], path: &str) -> Option<&'a mut Entry> {
    files.iter_mut().find(|e| e.path == path)
}

fn proof_dirs(files: &[Entry]) -> Vec<String> {
    let mut dirs: Vec<String> = files
        .iter()
        .filter_map(|e| {
            let rest = e.path.strip_prefix("proofs/")?;
            let (dir, file) = rest.split_once('/')?;
            (file == "proofInfo.xml").then(|| dir.to_string())
        })
        .collect();
    dirs.dedup();
    dirs
}

fn c_duplicate_attempt(files: &mut Vec<Entry>) -> bool {
    let Some(dir) = proof_dirs(files).into_iter().next() else {
        return false;
    };
    let info = files
        .iter()
        .find(|e| e.path == format!("proofs/{dir}/proofInfo.xml"))
        .unwrap()
        .clone();
    files.push(Entry::new(format!("proofs/{dir}Copy/proofInfo.xml"), info.bytes));
    true
}

fn c_bad_proof_dir(files: &mut Vec<Entry>) -> bool {
    let Some(dir) = proof_dirs(files).into_iter().next() else {
        return false;
    };
    let from = format!("proofs/{dir}/");
    for e in files.iter_mut() {
        if let Some(rest) = e.path.strip_prefix(&from) {
            e.path = format!("proofs/myattempt/{rest}");
        }
    }
    true
}

fn c_missing_intergeo(files: &mut Vec<Entry>) -> bool {
    let before = files.len();
    files.retain(|e| e.path != INTERGEO_XML);
    files.len() < before
}

fn c_unexpected_entry(files: &mut Vec<Entry>) -> bool {
    files.push(Entry::new("notes/todo.txt", b"later".to_vec()));
    true
}

fn c_missing_directory(files: &mut Vec<Entry>) -> bool {
    let before = files.len();
    files.retain(|e| !e.path.starts_with("conjecture/"));
    files.len() < before
}

fn conjecture_text(files: &mut [Entry]) -> Option<&mut Entry> {
    entry_mut(files, CONJECTURE_XML)
}

fn c_unresolved_id(files: &mut Vec<Entry>) -> bool {
    let Some(e) = conjecture_text(files) else {
        return false;
    };
    let doc = String::from_utf8(e.bytes.clone()).unwrap();
    let Some(added) = insert_after_open(&doc, "conclusion", "<collinear>Zq1 Zq2 Zq3</collinear>")
    else {
        return false;
    };
    e.bytes = added.into_bytes();
    true
}

fn c_negative_ratio(files: &mut Vec<Entry>) -> bool {
    let Some(e) = conjecture_text(files) else {
        return false;
    };
    let Ok(c) = xml::parse_conjecture(&e.bytes) else {
        return false;
    };
    let Some(id) = c.predicates().flat_map(|p| p.point_ids()).next().map(str::to_string) else {
        return false;
    };
    let doc = String::from_utf8(e.bytes.clone()).unwrap();
    let pred = format!("<segment_ratio ratio=\"-2\">{id} {id} {id} {id}</segment_ratio>");
    let Some(added) = insert_after_open(&doc, "conclusion", &pred) else {
        return false;
    };
    e.bytes = added.into_bytes();
    true
}

fn c_line_as_point(files: &mut Vec<Entry>) -> bool {
    let Some(line_id) = files
        .iter()
        .find(|e| e.path == INTERGEO_XML)
        .and_then(|e| xml::parse_construction(&e.bytes).ok())
        .and_then(|k| {
            k.elements
                .iter()
                .find(|el| el.kind() == Some(i2gatp::model::GeoKind::Line))
                .map(|el| el.id.clone())
        })
    else {
        return false;
    };
    let Some(e) = conjecture_text(files) else {
        return false;
    };
    let doc = String::from_utf8(e.bytes.clone()).unwrap();
    let pred = format!("<not_equal>{line_id} {line_id}</not_equal>");
    let Some(added) = add_to_section(&doc, "conjecture", "ndg", &pred) else {
        return false;
    };
    e.bytes = added.into_bytes();
    true
}

pub fn classes() -> Vec<Mutation> {
    use Apply::{Container as C, Doc as D};
    use DocumentKind::*;
    let m = |class, code, apply| Mutation { class, code, apply };
    vec![
        m("truncated document", "MalformedXml", D(None, doc_truncated)),
        m("wrong root element", "WrongRoot", D(None, doc_wrong_root)),
        m("name dropped", "MissingName", D(Some(Information), |d| remove_element(d, "name"))),
        m("name not an identifier", "InvalidName", D(Some(Information), |d| replace_inner(d, "name", "bad name!"))),
        m("keyword repeated", "DuplicateKeyword", D(Some(Information), doc_duplicate_keyword)),
        m("blank keyword", "EmptyKeyword", D(Some(Information), doc_empty_keyword)),
        m("bibentry id repeated", "DuplicateBibId", D(Some(Information), doc_duplicate_bib_id)),
        m("description repeated", "DuplicateSection", D(Some(Information), doc_duplicate_description)),
        m("element id repeated", "DuplicateId", D(Some(Construction), doc_duplicate_point)),
        m("constraint moved last", "ForwardReference", D(Some(Construction), doc_forward_reference)),
        m("input names no element", "DanglingReference", D(Some(Construction), doc_dangling_reference)),
        m("point input given as line", "KindMismatch", D(Some(Construction), doc_kind_mismatch)),
        m("elements part dropped", "MissingElementsPart", D(Some(Construction), |d| remove_element(d, "elements"))),
        m("constraints part dropped", "MissingConstraintsPart", D(Some(Construction), |d| remove_element(d, "constraints"))),
        m("line with zero coefficients", "InvalidGeometry", D(Some(Construction), doc_zero_line)),
        m("coordinate not a number", "MalformedNumber", D(Some(Construction), doc_bad_double)),
        m("conclusion dropped", "MissingConclusion", D(Some(Conjecture), |d| remove_element(d, "conclusion"))),
        m("predicate loses an argument", "ArityError", D(Some(Conjecture), doc_arity)),
        m("predicate renamed", "UnknownPredicate", D(Some(Conjecture), doc_unknown_predicate)),
        m("unknown section", "UnknownTag", D(Some(Conjecture), doc_unknown_section)),
        m("status not in the vocabulary", "UnknownStatus", D(Some(ProofInfo), doc_bad_status)),
        m("status dropped", "MissingField", D(Some(ProofInfo), |d| remove_element(d, "status"))),
        m("negative elimination steps", "NegativeMeasure", D(Some(ProofInfo), doc_negative_measure)),
        m("time limit not a number", "MalformedNumber", D(Some(ProofInfo), doc_bad_time_limit)),
        m("zero clock speed", "NonPositiveValue", D(Some(ProofInfo), doc_zero_clock)),
        m("prover name with a space", "InvalidIdentifier", D(Some(ProofInfo), doc_bad_prover)),
        m("attempt triple repeated", "DuplicateAttempt", C(c_duplicate_attempt)),
        m("proof directory misnamed", "BadProofDirName", C(c_bad_proof_dir)),
        m("intergeo.xml removed", "MissingIntergeo", C(c_missing_intergeo)),
        m("entry outside the layout", "UnexpectedEntry", C(c_unexpected_entry)),
        m("conjecture directory removed", "MissingDirectory", C(c_missing_directory)),
        m("conjecture names unknown points", "UnresolvedId", C(c_unresolved_id)),
        m("negative segment ratio", "InvalidRatio", C(c_negative_ratio)),
        m("line used as a point", "KindMismatch", C(c_line_as_point)),
    ]
}

pub struct Outcome {
    pub class: &'static str,
    pub expected: &'static str,
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl Outcome {
    pub fn has_expected(&self) -> bool {
        self.violations.iter().any(|v| v.code.as_str() == self.expected)
    }

    /// The mutated input was accepted as valid.
    pub fn false_accept(&self) -> bool {
        !self.violations.iter().any(Violation::is_error)
    }
}

fn zip_with_dirs(files: &[Entry]) -> Vec<u8> {
    container::write_zip(files, &MANDATORY_DIRS).expect("mutated entries stay representable")
}

/// Applies every class to every corpus subject it fits.
pub fn run_all() -> Vec<Outcome> {
    let docs = xml_fixtures();
    let containers: Vec<(String, Vec<Entry>)> = container_names()
        .into_iter()
        .map(|n| {
            let files = container_files(&n);
            (n, files)
        })
        .collect();
    let mut out = Vec::new();
    for m in classes() {
        match &m.apply {
            Apply::Doc(kind, f) => {
                for d in docs.iter().filter(|d| kind.is_none_or(|k| k == d.kind)) {
                    let text = String::from_utf8(d.bytes.clone()).unwrap();
                    if let Some(mutated) = f(&text) {
                        out.push(Outcome {
                            class: m.class,
                            expected: m.code,
                            subject: d.name.clone(),
                            violations: xml::validate_document(d.kind, mutated.as_bytes()),
                        });
                    }
                }
            }
            Apply::Container(f) => {
                for (name, files) in &containers {
                    let mut files = files.clone();
                    if !f(&mut files) {
                        continue;
                    }
                    let dirs: Vec<&str> = if m.code == "MissingDirectory" {
                        MANDATORY_DIRS.iter().copied().filter(|d| *d != "conjecture").collect()
                    } else {
                        MANDATORY_DIRS.to_vec()
                    };
                    let bytes = container::write_zip(&files, &dirs)
                        .unwrap_or_else(|_| zip_with_dirs(&files));
                    out.push(Outcome {
                        class: m.class,
                        expected: m.code,
                        subject: name.clone(),
                        violations: container::validate_container(&bytes, false),
                    });
                }
            }
        }
    }
    out
}
