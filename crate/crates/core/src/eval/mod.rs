//! Numeric instantiation of constructions and randomized conjecture checking.
//!
//! Everything here works in `f64`. Thresholds scale with the magnitude of the
//! scene and with the polynomial degree of each residual, see [`Tolerance`].
//! A consistent check over many samples is evidence, not a proof.

mod check;
mod instantiate;
mod predicates;
pub mod rng;

use std::collections::BTreeMap;

pub use check::{check_conjecture, CheckError, CheckReport, Verdict, Witness, SAMPLE_RANGE};
pub use instantiate::{instantiate, instantiate_with};
pub use predicates::{eval_predicate, eval_term, Evaluation};
pub use rng::{sample_free_points, trial_seed, FreeAssignment, SplitMix64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SceneValue {
    Point { x: f64, y: f64 },
    /// Normalized so that `a² + b² = 1`.
    Line { a: f64, b: f64, c: f64 },
    Circle { cx: f64, cy: f64, r: f64 },
}

impl SceneValue {
    fn max_abs(&self) -> f64 {
        match *self {
            SceneValue::Point { x, y } => x.abs().max(y.abs()),
            SceneValue::Line { a, b, c } => a.abs().max(b.abs()).max(c.abs()),
            SceneValue::Circle { cx, cy, r } => cx.abs().max(cy.abs()).max(r.abs()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            SceneValue::Point { x, y } => x.is_finite() && y.is_finite(),
            SceneValue::Line { a, b, c } => a.is_finite() && b.is_finite() && c.is_finite(),
            SceneValue::Circle { cx, cy, r } => cx.is_finite() && cy.is_finite() && r.is_finite(),
        }
    }
}

/// Concrete geometry for every element of a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericScene {
    values: BTreeMap<String, SceneValue>,
    scale: f64,
}

impl NumericScene {
    pub fn new(values: BTreeMap<String, SceneValue>) -> Self {
        let scale = values
            .values()
            .map(SceneValue::max_abs)
            .fold(1.0_f64, f64::max);
        NumericScene { values, scale }
    }

    /// Scene holding only points.
    pub fn from_points<'a>(points: impl IntoIterator<Item = (&'a str, (f64, f64))>) -> Self {
        NumericScene::new(
            points
                .into_iter()
                .map(|(id, (x, y))| (id.to_string(), SceneValue::Point { x, y }))
                .collect(),
        )
    }

    pub fn get(&self, id: &str) -> Option<&SceneValue> {
        self.values.get(id)
    }

    pub fn point(&self, id: &str) -> Result<(f64, f64), EvalError> {
        match self.values.get(id) {
            Some(SceneValue::Point { x, y }) => Ok((*x, *y)),
            Some(_) => Err(EvalError::KindMismatch(id.to_string())),
            None => Err(EvalError::UnresolvedId(id.to_string())),
        }
    }

    /// Largest absolute coordinate in the scene, floored at 1.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SceneValue)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }
}

pub const DEFAULT_EPS_REL: f64 = 1e-9;

/// Relative tolerance. A residual of coordinate degree `d` is accepted when
/// it is at most `eps_rel · scale^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps_rel: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("relative tolerance {0} outside (0, 1e-2]")]
pub struct InvalidTolerance(pub f64);

impl Tolerance {
    pub fn new(eps_rel: f64) -> Result<Self, InvalidTolerance> {
        if eps_rel > 0.0 && eps_rel <= 1e-2 {
            Ok(Tolerance { eps_rel })
        } else {
            Err(InvalidTolerance(eps_rel))
        }
    }

    pub fn eps_rel(&self) -> f64 {
        self.eps_rel
    }

    pub fn threshold(&self, scale: f64, degree: i32) -> f64 {
        self.eps_rel * scale.powi(degree)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_rel: DEFAULT_EPS_REL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("degenerate step {step}: {reason}")]
    Degenerate { step: String, reason: String },
    #[error("constraint producing {0:?} is opaque and cannot be evaluated")]
    OpaqueConstraint(String),
    #[error("free point {0:?} has no assigned coordinates")]
    MissingFreePoint(String),
    #[error("{0:?} is not a free point of the construction")]
    UnexpectedFreePoint(String),
    #[error("unresolved id {0:?}")]
    UnresolvedId(String),
    #[error("{0:?} has the wrong kind for this use")]
    KindMismatch(String),
    #[error("degenerate predicate {predicate}: {reason}")]
    DegeneratePredicate { predicate: String, reason: String },
    #[error("non-finite value {0}")]
    NonFinite(String),
}
