use std::collections::{BTreeMap, HashSet};

use super::{EvalError, FreeAssignment, NumericScene, SceneValue, Tolerance};
use crate::model::{ConstraintKind, Construction};

fn normalize(a: f64, b: f64, c: f64) -> SceneValue {
    let n = a.hypot(b);
    SceneValue::Line {
        a: a / n,
        b: b / n,
        c: c / n,
    }
}

/// Runs the straight-line program with the default tolerance.
pub fn instantiate(k: &Construction, free: &FreeAssignment) -> Result<NumericScene, EvalError> {
    instantiate_with(k, free, Tolerance::default())
}

/// Runs the straight-line program from the given free-point coordinates.
///
/// Degeneracy thresholds use the running scene scale: the largest absolute
/// point coordinate computed so far, floored at 1.
pub fn instantiate_with(
    k: &Construction,
    free: &FreeAssignment,
    tol: Tolerance,
) -> Result<NumericScene, EvalError> {
    let free_ids: HashSet<&str> = k.free_points().collect();
    if let Some(extra) = free.keys().find(|id| !free_ids.contains(id.as_str())) {
        return Err(EvalError::UnexpectedFreePoint(extra.clone()));
    }

    let mut values: BTreeMap<String, SceneValue> = BTreeMap::new();
    let mut scale = 1.0_f64;

    for c in &k.constraints {
        let step = &c.output;
        let degenerate = |reason: &str| EvalError::Degenerate {
            step: step.clone(),
            reason: reason.to_string(),
        };
        let point = |i: usize| -> Result<(f64, f64), EvalError> {
            let id = c
                .inputs
                .get(i)
                .ok_or_else(|| EvalError::UnresolvedId(format!("{step}#{i}")))?;
            match values.get(id) {
                Some(SceneValue::Point { x, y }) => Ok((*x, *y)),
                Some(_) => Err(EvalError::KindMismatch(id.clone())),
                None => Err(EvalError::UnresolvedId(id.clone())),
            }
        };
        let line = |i: usize| -> Result<(f64, f64, f64), EvalError> {
            let id = c
                .inputs
                .get(i)
                .ok_or_else(|| EvalError::UnresolvedId(format!("{step}#{i}")))?;
            match values.get(id) {
                Some(SceneValue::Line { a, b, c }) => Ok((*a, *b, *c)),
                Some(_) => Err(EvalError::KindMismatch(id.clone())),
                None => Err(EvalError::UnresolvedId(id.clone())),
            }
        };
        let eps1 = tol.threshold(scale, 1);

        let value = match &c.kind {
            ConstraintKind::FreePoint => {
                let (x, y) = *free
                    .get(step)
                    .ok_or_else(|| EvalError::MissingFreePoint(step.clone()))?;
                SceneValue::Point { x, y }
            }
            ConstraintKind::LineThroughTwoPoints => {
                let (x1, y1) = point(0)?;
                let (x2, y2) = point(1)?;
                // (x1, y1, 1) × (x2, y2, 1)
                let (a, b, cc) = (y1 - y2, x2 - x1, x1 * y2 - x2 * y1);
                if a.hypot(b) <= eps1 {
                    return Err(degenerate("line through coincident points"));
                }
                normalize(a, b, cc)
            }
            ConstraintKind::IntersectionOfTwoLines => {
                let (a1, b1, c1) = line(0)?;
                let (a2, b2, c2) = line(1)?;
                let x = b1 * c2 - c1 * b2;
                let y = c1 * a2 - a1 * c2;
                let w = a1 * b2 - b1 * a2;
                if w.abs() <= tol.threshold(scale, 1) {
                    return Err(degenerate("intersection of parallel lines"));
                }
                SceneValue::Point { x: x / w, y: y / w }
            }
            ConstraintKind::MidpointOfTwoPoints => {
                let (x1, y1) = point(0)?;
                let (x2, y2) = point(1)?;
                SceneValue::Point {
                    x: (x1 + x2) / 2.0,
                    y: (y1 + y2) / 2.0,
                }
            }
            ConstraintKind::CircleByCenterAndPoint => {
                let (cx, cy) = point(0)?;
                let (px, py) = point(1)?;
                SceneValue::Circle {
                    cx,
                    cy,
                    r: (px - cx).hypot(py - cy),
                }
            }
            ConstraintKind::PerpendicularLineThroughPoint => {
                let (a, b, _) = line(0)?;
                let (px, py) = point(1)?;
                // Normal of the new line is the direction (-b, a) of the old one.
                normalize(-b, a, b * px - a * py)
            }
            ConstraintKind::ParallelLineThroughPoint => {
                let (a, b, _) = line(0)?;
                let (px, py) = point(1)?;
                normalize(a, b, -(a * px + b * py))
            }
            ConstraintKind::PointOnLine { t } => {
                let (a, b, cc) = line(0)?;
                SceneValue::Point {
                    x: -a * cc - t * b,
                    y: -b * cc + t * a,
                }
            }
            ConstraintKind::PointOnCircle { angle } => {
                let id = c
                    .inputs
                    .first()
                    .ok_or_else(|| EvalError::UnresolvedId(format!("{step}#0")))?;
                match values.get(id) {
                    Some(SceneValue::Circle { cx, cy, r }) => SceneValue::Point {
                        x: cx + r * angle.cos(),
                        y: cy + r * angle.sin(),
                    },
                    Some(_) => return Err(EvalError::KindMismatch(id.clone())),
                    None => return Err(EvalError::UnresolvedId(id.clone())),
                }
            }
            ConstraintKind::Opaque { .. } => {
                return Err(EvalError::OpaqueConstraint(step.clone()));
            }
        };

        if !value.is_finite() {
            return Err(degenerate("non-finite result"));
        }
        if let SceneValue::Point { x, y } = value {
            scale = scale.max(x.abs()).max(y.abs());
        }
        values.insert(step.clone(), value);
    }

    if let Some(missing) = free_ids.iter().find(|id| !values.contains_key(**id)) {
        return Err(EvalError::MissingFreePoint(missing.to_string()));
    }
    Ok(NumericScene::new(values))
}
