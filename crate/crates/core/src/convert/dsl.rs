//! The construction language.
//!
//! One statement per line (or separated by `;`), `%` starts a comment:
//!
//! ```text
//! % @name midpoint_thm
//! % @description The midpoint of AB is equidistant from A and B
//! % @keyword midpoint
//! point A 0 0
//! point B 4 2
//! midpoint M A B
//! prove {
//!   conclude same_length A M M B
//! }
//! ```
//!
//! | statement            | constraint                          |
//! |----------------------|-------------------------------------|
//! | `point A x y`        | free point with initial coordinates |
//! | `line l P Q`         | line through two points             |
//! | `intersec X l m`     | intersection of two lines           |
//! | `midpoint M A B`     | midpoint of two points              |
//! | `circle c O P`       | circle by center and point          |
//! | `perp p l P`         | perpendicular to `l` through `P`    |
//! | `parallel q l P`     | parallel to `l` through `P`         |
//! | `online X l t`       | point on line at parameter `t`      |
//! | `oncircle X c theta` | point on circle at angle `theta`    |
//!
//! Inside `prove { ... }` each item is `hyp`, `ndg` or `conclude` followed
//! by a predicate: `collinear A B C`, `segment_ratio A B C D 2`,
//! `equal (segment_length A B) (plus 1 (segment_length C D))`.
//! The `% @name`, `% @description` and `% @keyword` comments fill in the
//! problem information.

use std::collections::HashMap;

use super::ConvertError;
use crate::eval::{instantiate, EvalError, FreeAssignment, SceneValue};
use crate::model::{
    format_real, is_identifier, Conjecture, Constraint, ConstraintKind, Construction,
    ElementInstance, ElementValue, GeoKind, Predicate, PredicateError, Problem, ProblemInfo,
    ProblemName, Term,
};

#[derive(Debug, Clone, PartialEq)]
pub enum DslErrorKind {
    SyntaxError(String),
    UnresolvedId(String),
    DuplicateId(String),
    KindMismatch { id: String, expected: GeoKind },
    DegenerateInitialInstance(String),
}

/// A parse failure with its 1-based line number.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {}", describe(.kind))]
pub struct DslError {
    pub line: usize,
    pub kind: DslErrorKind,
}

fn describe(kind: &DslErrorKind) -> String {
    match kind {
        DslErrorKind::SyntaxError(m) => format!("syntax error: {m}"),
        DslErrorKind::UnresolvedId(id) => format!("unknown object {id:?}"),
        DslErrorKind::DuplicateId(id) => format!("{id:?} is already defined"),
        DslErrorKind::KindMismatch { id, expected } => format!("{id:?} is not a {expected}"),
        DslErrorKind::DegenerateInitialInstance(m) => {
            format!("the initial coordinates give a degenerate figure: {m}")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Open,
    Close,
    LBrace,
    RBrace,
    Sep,
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    meta: Vec<(String, String, usize)>,
}

fn lex(src: &str) -> Lexed {
    let mut toks = Vec::new();
    let mut meta = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let (code, comment) = match raw.find('%') {
            Some(at) => (&raw[..at], Some(&raw[at + 1..])),
            None => (raw, None),
        };
        if let Some(rest) = comment.and_then(|c| c.trim_start().strip_prefix('@')) {
            if code.trim().is_empty() {
                let (key, value) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                meta.push((key.to_string(), value.trim().to_string(), line));
            }
        }
        let mut word = String::new();
        let flush = |word: &mut String, toks: &mut Vec<(Tok, usize)>| {
            if !word.is_empty() {
                toks.push((Tok::Word(std::mem::take(word)), line));
            }
        };
        for c in code.chars() {
            let t = match c {
                '(' => Some(Tok::Open),
                ')' => Some(Tok::Close),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ';' => Some(Tok::Sep),
                c if c.is_whitespace() => None,
                c => {
                    word.push(c);
                    continue;
                }
            };
            flush(&mut word, &mut toks);
            if let Some(t) = t {
                toks.push((t, line));
            }
        }
        flush(&mut word, &mut toks);
        toks.push((Tok::Sep, line));
    }
    Lexed { toks, meta }
}

fn syntax(line: usize, msg: impl Into<String>) -> DslError {
    DslError {
        line,
        kind: DslErrorKind::SyntaxError(msg.into()),
    }
}

fn number(word: &str, line: usize) -> Result<f64, DslError> {
    match word.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(syntax(line, format!("expected a number, found {word:?}"))),
    }
}

struct Parser {
    kinds: HashMap<String, GeoKind>,
    elements: Vec<ElementInstance>,
    constraints: Vec<Constraint>,
    lines: HashMap<String, usize>,
    free: FreeAssignment,
}

impl Parser {
    fn reference(&self, id: &str, want: GeoKind, line: usize) -> Result<String, DslError> {
        match self.kinds.get(id) {
            None => Err(DslError {
                line,
                kind: DslErrorKind::UnresolvedId(id.to_string()),
            }),
            Some(k) if *k != want => Err(DslError {
                line,
                kind: DslErrorKind::KindMismatch {
                    id: id.to_string(),
                    expected: want,
                },
            }),
            Some(_) => Ok(id.to_string()),
        }
    }

    fn define(&mut self, id: &str, kind: GeoKind, line: usize) -> Result<(), DslError> {
        if !is_identifier(id) {
            return Err(syntax(line, format!("{id:?} is not a valid name")));
        }
        if self.kinds.insert(id.to_string(), kind).is_some() {
            return Err(DslError {
                line,
                kind: DslErrorKind::DuplicateId(id.to_string()),
            });
        }
        self.lines.insert(id.to_string(), line);
        let value = match kind {
            GeoKind::Point => ElementValue::Point { x: 0.0, y: 0.0 },
            GeoKind::Line => ElementValue::Line { a: 0.0, b: 1.0, c: 0.0 },
            GeoKind::Circle => ElementValue::Circle { cx: 0.0, cy: 0.0, r: 1.0 },
        };
        self.elements.push(ElementInstance {
            id: id.to_string(),
            value,
        });
        Ok(())
    }

    fn statement(&mut self, words: &[String], line: usize) -> Result<(), DslError> {
        use GeoKind::*;
        let cmd = words[0].as_str();
        let args = &words[1..];
        let (kind, out_kind, inputs, param): (ConstraintKind, GeoKind, &[GeoKind], bool) =
            match cmd {
                "point" => (ConstraintKind::FreePoint, Point, &[], false),
                "line" => (ConstraintKind::LineThroughTwoPoints, Line, &[Point, Point], false),
                "intersec" => (ConstraintKind::IntersectionOfTwoLines, Point, &[Line, Line], false),
                "midpoint" => (ConstraintKind::MidpointOfTwoPoints, Point, &[Point, Point], false),
                "circle" => (ConstraintKind::CircleByCenterAndPoint, Circle, &[Point, Point], false),
                "perp" => (ConstraintKind::PerpendicularLineThroughPoint, Line, &[Line, Point], false),
                "parallel" => (ConstraintKind::ParallelLineThroughPoint, Line, &[Line, Point], false),
                "online" => (ConstraintKind::PointOnLine { t: 0.0 }, Point, &[Line], true),
                "oncircle" => (ConstraintKind::PointOnCircle { angle: 0.0 }, Point, &[Circle], true),
                other => return Err(syntax(line, format!("unknown statement {other:?}"))),
            };
        let want = 1 + if cmd == "point" { 2 } else { inputs.len() + param as usize };
        if args.len() != want {
            return Err(syntax(
                line,
                format!("{cmd} takes {want} arguments, found {}", args.len()),
            ));
        }
        let out = &args[0];
        let mut ids = Vec::new();
        for (id, k) in args[1..].iter().zip(inputs) {
            ids.push(self.reference(id, *k, line)?);
        }
        let kind = match kind {
            ConstraintKind::PointOnLine { .. } => ConstraintKind::PointOnLine {
                t: number(&args[2], line)?,
            },
            ConstraintKind::PointOnCircle { .. } => ConstraintKind::PointOnCircle {
                angle: number(&args[2], line)?,
            },
            other => other,
        };
        if cmd == "point" {
            let x = number(&args[1], line)?;
            let y = number(&args[2], line)?;
            self.define(out, out_kind, line)?;
            self.free.insert(out.clone(), (x, y));
            if let Some(el) = self.elements.last_mut() {
                el.value = ElementValue::Point { x, y };
            }
        } else {
            self.define(out, out_kind, line)?;
        }
        self.constraints.push(Constraint {
            output: out.clone(),
            kind,
            inputs: ids,
        });
        Ok(())
    }

    fn point_ref(&self, id: &str, line: usize) -> Result<String, DslError> {
        self.reference(id, GeoKind::Point, line)
    }

    fn term(&self, toks: &[(Tok, usize)], pos: &mut usize) -> Result<Term, DslError> {
        let line = toks.get(*pos).map_or(0, |t| t.1);
        match toks.get(*pos).map(|t| &t.0) {
            Some(Tok::Word(w)) => {
                *pos += 1;
                Ok(Term::Const(number(w, line)?))
            }
            Some(Tok::Open) => {
                *pos += 1;
                let head = match toks.get(*pos) {
                    Some((Tok::Word(w), _)) => w.clone(),
                    _ => return Err(syntax(line, "expected a term name after '('")),
                };
                *pos += 1;
                let t = match head.as_str() {
                    "segment_length" => {
                        let mut ids = Vec::new();
                        for _ in 0..2 {
                            match toks.get(*pos) {
                                Some((Tok::Word(w), l)) => ids.push(self.point_ref(w, *l)?),
                                _ => return Err(syntax(line, "segment_length takes two points")),
                            }
                            *pos += 1;
                        }
                        Term::SegmentLength(ids[0].clone(), ids[1].clone())
                    }
                    "plus" | "mult" => {
                        let l = self.term(toks, pos)?;
                        let r = self.term(toks, pos)?;
                        if head == "plus" {
                            Term::plus(l, r)
                        } else {
                            Term::mult(l, r)
                        }
                    }
                    other => return Err(syntax(line, format!("unknown term {other:?}"))),
                };
                match toks.get(*pos) {
                    Some((Tok::Close, _)) => {
                        *pos += 1;
                        Ok(t)
                    }
                    _ => Err(syntax(line, "expected ')'")),
                }
            }
            _ => Err(syntax(line, "expected a term")),
        }
    }

    fn predicate(&self, toks: &[(Tok, usize)], line: usize) -> Result<Predicate, DslError> {
        let Some((Tok::Word(name), _)) = toks.first() else {
            return Err(syntax(line, "expected a predicate"));
        };
        if name == "equal" {
            let mut pos = 1;
            let l = self.term(toks, &mut pos)?;
            let r = self.term(toks, &mut pos)?;
            if pos != toks.len() {
                return Err(syntax(line, "equal takes exactly two terms"));
            }
            return Ok(Predicate::Equal(l, r));
        }
        let mut words = Vec::new();
        for (t, _) in &toks[1..] {
            match t {
                Tok::Word(w) => words.push(w.clone()),
                _ => return Err(syntax(line, format!("unexpected bracket in {name}"))),
            }
        }
        let ratio = if name == "segment_ratio" {
            let last = words
                .pop()
                .ok_or_else(|| syntax(line, "segment_ratio needs a ratio"))?;
            Some(number(&last, line)?)
        } else {
            None
        };
        let pred = Predicate::from_points(name, words, ratio).map_err(|e| match e {
            PredicateError::UnknownPredicate(n) => syntax(line, format!("unknown predicate {n:?}")),
            other => syntax(line, other.to_string()),
        })?;
        for id in pred.point_ids() {
            self.point_ref(id, line)?;
        }
        Ok(pred)
    }
}

/// Parses a `.gcl` program. Derived elements get the coordinates computed
/// from the literal free points; a degenerate step is an error.
pub fn parse_dsl(src: &str) -> Result<Problem, DslError> {
    let Lexed { toks, meta } = lex(src);
    let mut p = Parser {
        kinds: HashMap::new(),
        elements: Vec::new(),
        constraints: Vec::new(),
        lines: HashMap::new(),
        free: FreeAssignment::new(),
    };
    let mut conjecture: Option<Conjecture> = None;
    let mut i = 0;
    while i < toks.len() {
        let line = toks[i].1;
        match &toks[i].0 {
            Tok::Sep => i += 1,
            Tok::Word(w) if w == "prove" => {
                if conjecture.is_some() {
                    return Err(syntax(line, "only one prove block is allowed"));
                }
                i += 1;
                while matches!(toks.get(i), Some((Tok::Sep, _))) {
                    i += 1;
                }
                if !matches!(toks.get(i), Some((Tok::LBrace, _))) {
                    return Err(syntax(line, "expected '{' after prove"));
                }
                i += 1;
                let mut c = Conjecture::default();
                loop {
                    let Some((tok, l)) = toks.get(i) else {
                        return Err(syntax(line, "unterminated prove block"));
                    };
                    match tok {
                        Tok::Sep => i += 1,
                        Tok::RBrace => {
                            i += 1;
                            break;
                        }
                        Tok::Word(section) => {
                            let l = *l;
                            let start = i + 1;
                            let mut end = start;
                            while end < toks.len()
                                && !matches!(toks[end].0, Tok::Sep | Tok::RBrace)
                            {
                                end += 1;
                            }
                            let pred = p.predicate(&toks[start..end], l)?;
                            match section.as_str() {
                                "hyp" => c.hypothesis.push(pred),
                                "ndg" => c.ndg.push(pred),
                                "conclude" => c.conclusion.push(pred),
                                other => {
                                    return Err(syntax(
                                        l,
                                        format!("expected hyp, ndg or conclude, found {other:?}"),
                                    ))
                                }
                            }
                            i = end;
                        }
                        _ => return Err(syntax(*l, "unexpected bracket")),
                    }
                }
                if c.conclusion.is_empty() {
                    return Err(syntax(line, "prove block has no conclusion"));
                }
                conjecture = Some(c);
            }
            Tok::Word(_) => {
                if conjecture.is_some() {
                    return Err(syntax(line, "statements must come before the prove block"));
                }
                let mut words = Vec::new();
                while let Some((tok, _)) = toks.get(i) {
                    match tok {
                        Tok::Word(w) => words.push(w.clone()),
                        Tok::Sep => break,
                        _ => return Err(syntax(line, "unexpected bracket in statement")),
                    }
                    i += 1;
                }
                p.statement(&words, line)?;
            }
            _ => return Err(syntax(line, "unexpected bracket")),
        }
    }

    let mut k = Construction {
        elements: p.elements,
        constraints: p.constraints,
        display: Default::default(),
    };
    let scene = instantiate(&k, &p.free).map_err(|e| match e {
        EvalError::Degenerate { ref step, .. } => DslError {
            line: p.lines.get(step).copied().unwrap_or(0),
            kind: DslErrorKind::DegenerateInitialInstance(e.to_string()),
        },
        other => syntax(0, other.to_string()),
    })?;
    for el in &mut k.elements {
        el.value = match scene.get(&el.id) {
            Some(SceneValue::Point { x, y }) => ElementValue::Point { x: *x, y: *y },
            Some(SceneValue::Line { a, b, c }) => ElementValue::Line { a: *a, b: *b, c: *c },
            Some(SceneValue::Circle { cx, cy, r }) => ElementValue::Circle { cx: *cx, cy: *cy, r: *r },
            None => continue,
        };
    }

    let mut problem = Problem::new(k);
    problem.conjecture = conjecture;
    problem.info = info_from_meta(&meta)?;
    Ok(problem)
}

fn info_from_meta(meta: &[(String, String, usize)]) -> Result<Option<ProblemInfo>, DslError> {
    if meta.is_empty() {
        return Ok(None);
    }
    let Some((_, name, line)) = meta.iter().find(|(k, _, _)| k == "name") else {
        return Err(syntax(meta[0].2, "problem information needs a % @name line"));
    };
    let name = ProblemName::new(name.clone()).map_err(|e| syntax(*line, e.to_string()))?;
    let mut info = ProblemInfo::new(name);
    let mut named = false;
    for (key, value, line) in meta {
        match key.as_str() {
            "name" if named => return Err(syntax(*line, "@name given twice")),
            "name" => named = true,
            "description" if !info.description.is_empty() => {
                info.description.push(' ');
                info.description.push_str(value);
            }
            "description" => info.description = value.clone(),
            "keyword" => info.keywords.push(value.clone()),
            other => return Err(syntax(*line, format!("unknown information key @{other}"))),
        }
    }
    Ok(Some(info))
}

/// Parts of a problem the construction language cannot express; they are
/// left out by [`emit_dsl`].
pub fn dsl_losses(p: &Problem) -> Vec<&'static str> {
    let mut out = Vec::new();
    if let Some(info) = &p.info {
        if !info.statement.is_empty() {
            out.push("statement");
        }
        if !info.bibrefs.is_empty() {
            out.push("bibliography");
        }
        if info.description.contains('\n') {
            out.push("line breaks in the description");
        }
    }
    if !p.construction.display.is_empty() {
        out.push("display section");
    }
    if !p.proofs.is_empty() {
        out.push("proof attempts");
    }
    if !p.resources.is_empty() || !p.metadata.is_empty() || !p.private.is_empty() {
        out.push("carried files");
    }
    if !p.attachments.is_empty() {
        out.push("attachments");
    }
    out
}

/// Canonical `.gcl` text: information comments, one statement per
/// constraint in program order, then the prove block.
pub fn emit_dsl(p: &Problem) -> Result<String, ConvertError> {
    let k = &p.construction;
    let mut out = String::new();
    if let Some(info) = &p.info {
        out.push_str(&format!("% @name {}\n", info.name));
        let description = info.description.split_whitespace().collect::<Vec<_>>().join(" ");
        if !description.is_empty() {
            out.push_str(&format!("% @description {description}\n"));
        }
        for kw in &info.keywords {
            out.push_str(&format!("% @keyword {}\n", kw.trim()));
        }
    }
    for el in &k.elements {
        if el.kind().is_none() {
            return Err(ConvertError::OpaqueElement(el.id.clone()));
        }
    }
    for c in &k.constraints {
        let o = &c.output;
        let a = &c.inputs;
        let line = match &c.kind {
            ConstraintKind::FreePoint => {
                let (x, y) = match k.element(o).map(|e| &e.value) {
                    Some(ElementValue::Point { x, y }) => (*x, *y),
                    _ => (0.0, 0.0),
                };
                format!("point {o} {} {}", format_real(x), format_real(y))
            }
            ConstraintKind::LineThroughTwoPoints => format!("line {o} {}", a.join(" ")),
            ConstraintKind::IntersectionOfTwoLines => format!("intersec {o} {}", a.join(" ")),
            ConstraintKind::MidpointOfTwoPoints => format!("midpoint {o} {}", a.join(" ")),
            ConstraintKind::CircleByCenterAndPoint => format!("circle {o} {}", a.join(" ")),
            ConstraintKind::PerpendicularLineThroughPoint => format!("perp {o} {}", a.join(" ")),
            ConstraintKind::ParallelLineThroughPoint => format!("parallel {o} {}", a.join(" ")),
            ConstraintKind::PointOnLine { t } => {
                format!("online {o} {} {}", a.join(" "), format_real(*t))
            }
            ConstraintKind::PointOnCircle { angle } => {
                format!("oncircle {o} {} {}", a.join(" "), format_real(*angle))
            }
            ConstraintKind::Opaque { .. } => return Err(ConvertError::OpaqueConstraint(o.clone())),
        };
        out.push_str(&line);
        out.push('\n');
    }
    if let Some(c) = &p.conjecture {
        out.push_str("prove {\n");
        for (word, preds) in [("hyp", &c.hypothesis), ("ndg", &c.ndg), ("conclude", &c.conclusion)] {
            for pred in preds {
                out.push_str(&format!("  {word} {pred}\n"));
            }
        }
        out.push_str("}\n");
    }
    Ok(out)
}
