use std::fmt;

use super::format_real;

/// Arithmetic over segment lengths, used inside `equal`.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Const(f64),
    SegmentLength(String, String),
    Plus(Box<Term>, Box<Term>),
    Mult(Box<Term>, Box<Term>),
}

impl Term {
    pub fn plus(left: Term, right: Term) -> Term {
        Term::Plus(Box::new(left), Box::new(right))
    }

    pub fn mult(left: Term, right: Term) -> Term {
        Term::Mult(Box::new(left), Box::new(right))
    }

    pub fn length(a: &str, b: &str) -> Term {
        Term::SegmentLength(a.to_string(), b.to_string())
    }

    pub fn point_ids<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Const(_) => {}
            Term::SegmentLength(a, b) => {
                out.push(a);
                out.push(b);
            }
            Term::Plus(l, r) | Term::Mult(l, r) => {
                l.point_ids(out);
                r.point_ids(out);
            }
        }
    }

    pub fn constants(&self, out: &mut Vec<f64>) {
        match self {
            Term::Const(v) => out.push(*v),
            Term::SegmentLength(..) => {}
            Term::Plus(l, r) | Term::Mult(l, r) => {
                l.constants(out);
                r.constants(out);
            }
        }
    }
}

/// Prefix notation: `2`, `(segment_length A B)`, `(plus t u)`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(v) => f.write_str(&format_real(*v)),
            Term::SegmentLength(a, b) => write!(f, "(segment_length {a} {b})"),
            Term::Plus(l, r) => write!(f, "(plus {l} {r})"),
            Term::Mult(l, r) => write!(f, "(mult {l} {r})"),
        }
    }
}

/// Every predicate name, in the order the vocabulary lists them.
pub const PREDICATE_NAMES: &[&str] = &[
    "not_equal",
    "not_parallel",
    "equal",
    "collinear",
    "perpendicular",
    "parallel",
    "midpoint",
    "same_length",
    "harmonic",
    "segment_ratio",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    NotEqual([String; 2]),
    /// Line `ab` not parallel to line `cd`.
    NotParallel([String; 4]),
    Equal(Term, Term),
    Collinear([String; 3]),
    Perpendicular([String; 4]),
    Parallel([String; 4]),
    /// `[m, a, b]`: m is the midpoint of ab.
    Midpoint([String; 3]),
    SameLength([String; 4]),
    /// `(a, b; c, d)` is a harmonic range.
    Harmonic([String; 4]),
    /// `|ab| = ratio · |cd|`.
    SegmentRatio([String; 4], f64),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PredicateError {
    #[error("unknown predicate {0:?}")]
    UnknownPredicate(String),
    #[error("{name} takes {want} point arguments, got {got}")]
    Arity {
        name: String,
        got: usize,
        want: usize,
    },
    #[error("segment_ratio requires a ratio")]
    MissingRatio,
}

impl Predicate {
    pub fn name(&self) -> &'static str {
        match self {
            Predicate::NotEqual(_) => "not_equal",
            Predicate::NotParallel(_) => "not_parallel",
            Predicate::Equal(..) => "equal",
            Predicate::Collinear(_) => "collinear",
            Predicate::Perpendicular(_) => "perpendicular",
            Predicate::Parallel(_) => "parallel",
            Predicate::Midpoint(_) => "midpoint",
            Predicate::SameLength(_) => "same_length",
            Predicate::Harmonic(_) => "harmonic",
            Predicate::SegmentRatio(..) => "segment_ratio",
        }
    }

    /// Number of point arguments taken by a point-argument predicate;
    /// `None` for `equal` and unknown names.
    pub fn point_arity(name: &str) -> Option<usize> {
        match name {
            "not_equal" => Some(2),
            "collinear" | "midpoint" => Some(3),
            "not_parallel" | "perpendicular" | "parallel" | "same_length" | "harmonic"
            | "segment_ratio" => Some(4),
            _ => None,
        }
    }

    /// Builds a point-argument predicate from its name. `equal` is not
    /// buildable this way since it takes terms.
    pub fn from_points(
        name: &str,
        ids: Vec<String>,
        ratio: Option<f64>,
    ) -> Result<Predicate, PredicateError> {
        let want = Predicate::point_arity(name)
            .ok_or_else(|| PredicateError::UnknownPredicate(name.to_string()))?;
        if ids.len() != want {
            return Err(PredicateError::Arity {
                name: name.to_string(),
                got: ids.len(),
                want,
            });
        }
        fn arr<const N: usize>(ids: Vec<String>) -> [String; N] {
            ids.try_into().expect("arity checked")
        }
        Ok(match name {
            "not_equal" => Predicate::NotEqual(arr(ids)),
            "not_parallel" => Predicate::NotParallel(arr(ids)),
            "collinear" => Predicate::Collinear(arr(ids)),
            "perpendicular" => Predicate::Perpendicular(arr(ids)),
            "parallel" => Predicate::Parallel(arr(ids)),
            "midpoint" => Predicate::Midpoint(arr(ids)),
            "same_length" => Predicate::SameLength(arr(ids)),
            "harmonic" => Predicate::Harmonic(arr(ids)),
            "segment_ratio" => {
                Predicate::SegmentRatio(arr(ids), ratio.ok_or(PredicateError::MissingRatio)?)
            }
            _ => unreachable!("arity table covers every name"),
        })
    }

    /// Point arguments in order, for every variant except `Equal`, whose
    /// points live inside its terms.
    pub fn point_args(&self) -> &[String] {
        match self {
            Predicate::NotEqual(p) => p,
            Predicate::Collinear(p) | Predicate::Midpoint(p) => p,
            Predicate::NotParallel(p)
            | Predicate::Perpendicular(p)
            | Predicate::Parallel(p)
            | Predicate::SameLength(p)
            | Predicate::Harmonic(p)
            | Predicate::SegmentRatio(p, _) => p,
            Predicate::Equal(..) => &[],
        }
    }

    /// Every point id referenced, including those inside terms.
    pub fn point_ids(&self) -> Vec<&str> {
        match self {
            Predicate::Equal(l, r) => {
                let mut out = Vec::new();
                l.point_ids(&mut out);
                r.point_ids(&mut out);
                out
            }
            other => other.point_args().iter().map(String::as_str).collect(),
        }
    }
}

/// DSL spelling: `collinear A B C`, `segment_ratio A B C D 2`,
/// `equal (segment_length A B) 3`.
impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())?;
        match self {
            Predicate::Equal(l, r) => write!(f, " {l} {r}"),
            Predicate::SegmentRatio(p, ratio) => {
                for id in p {
                    write!(f, " {id}")?;
                }
                write!(f, " {}", format_real(*ratio))
            }
            other => {
                for id in other.point_args() {
                    write!(f, " {id}")?;
                }
                Ok(())
            }
        }
    }
}

/// Hypotheses, non-degeneracy conditions and the conclusion conjunction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Conjecture {
    pub hypothesis: Vec<Predicate>,
    pub ndg: Vec<Predicate>,
    pub conclusion: Vec<Predicate>,
}

impl Conjecture {
    pub fn concluding(conclusion: Vec<Predicate>) -> Self {
        Conjecture {
            conclusion,
            ..Conjecture::default()
        }
    }

    /// Predicates in hypothesis, ndg, conclusion order.
    pub fn predicates(&self) -> impl Iterator<Item = &Predicate> {
        self.hypothesis
            .iter()
            .chain(self.ndg.iter())
            .chain(self.conclusion.iter())
    }
}
