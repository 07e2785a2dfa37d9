use super::{EvalError, NumericScene, Tolerance};
use crate::model::{Predicate, Term};

/// Outcome of one predicate on one scene.
///
/// `margin = residual - threshold`; non-positive for satisfied affirmative
/// predicates, positive for satisfied negative ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub truth: bool,
    pub margin: f64,
    pub residual: f64,
}

type P = (f64, f64);

fn sub(a: P, b: P) -> P {
    (a.0 - b.0, a.1 - b.1)
}

fn cross(u: P, v: P) -> f64 {
    u.0 * v.1 - u.1 * v.0
}

fn dot(u: P, v: P) -> f64 {
    u.0 * v.0 + u.1 * v.1
}

fn dist(a: P, b: P) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

pub fn eval_term(s: &NumericScene, t: &Term) -> Result<f64, EvalError> {
    let v = match t {
        Term::Const(v) => *v,
        Term::SegmentLength(a, b) => dist(s.point(a)?, s.point(b)?),
        Term::Plus(l, r) => eval_term(s, l)? + eval_term(s, r)?,
        Term::Mult(l, r) => eval_term(s, l)? * eval_term(s, r)?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite(t.to_string()))
    }
}

fn points<const N: usize>(s: &NumericScene, ids: &[String; N]) -> Result<[P; N], EvalError> {
    let mut out = [(0.0, 0.0); N];
    for (slot, id) in out.iter_mut().zip(ids) {
        *slot = s.point(id)?;
    }
    Ok(out)
}

fn affirmative(residual: f64, eps: f64) -> Evaluation {
    Evaluation {
        truth: residual <= eps,
        margin: residual - eps,
        residual,
    }
}

fn negative(residual: f64, eps: f64) -> Evaluation {
    Evaluation {
        truth: residual > eps,
        margin: residual - eps,
        residual,
    }
}

/// Signed cross ratio `(A, B; C, D) = (AC/CB) / (AD/DB)` with signed
/// lengths measured along the direction of AB.
fn cross_ratio(p: &Predicate, [a, b, c, d]: [P; 4], eps1: f64) -> Result<f64, EvalError> {
    let degenerate = |reason: &str| EvalError::DegeneratePredicate {
        predicate: p.to_string(),
        reason: reason.to_string(),
    };
    let u = sub(b, a);
    let len = u.0.hypot(u.1);
    if len <= eps1 {
        return Err(degenerate("base points A and B coincide"));
    }
    let along = |q: P| dot(sub(q, a), u) / len;
    let (sb, sc, sd) = (len, along(c), along(d));
    let ac = sc;
    let cb = sb - sc;
    let ad = sd;
    let db = sb - sd;
    if cb.abs() <= eps1 {
        return Err(degenerate("C coincides with B"));
    }
    if ad.abs() <= eps1 {
        return Err(degenerate("D coincides with A"));
    }
    Ok((ac * db) / (cb * ad))
}

/// Evaluates `p` by residual against a degree-scaled threshold.
pub fn eval_predicate(
    s: &NumericScene,
    p: &Predicate,
    tol: Tolerance,
) -> Result<Evaluation, EvalError> {
    let scale = s.scale();
    let eps1 = tol.threshold(scale, 1);
    let eps2 = tol.threshold(scale, 2);
    let ev = match p {
        Predicate::Collinear(ids) => {
            let [a, b, c] = points(s, ids)?;
            affirmative(cross(sub(b, a), sub(c, a)).abs(), eps2)
        }
        Predicate::Parallel(ids) => {
            let [a, b, c, d] = points(s, ids)?;
            affirmative(cross(sub(b, a), sub(d, c)).abs(), eps2)
        }
        Predicate::NotParallel(ids) => {
            let [a, b, c, d] = points(s, ids)?;
            negative(cross(sub(b, a), sub(d, c)).abs(), eps2)
        }
        Predicate::Perpendicular(ids) => {
            let [a, b, c, d] = points(s, ids)?;
            affirmative(dot(sub(b, a), sub(d, c)).abs(), eps2)
        }
        Predicate::Midpoint(ids) => {
            let [m, a, b] = points(s, ids)?;
            let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
            affirmative(dist(m, mid), eps1)
        }
        Predicate::SameLength(ids) => {
            let [a, b, c, d] = points(s, ids)?;
            affirmative((dist(a, b) - dist(c, d)).abs(), eps1)
        }
        Predicate::SegmentRatio(ids, ratio) => {
            let [a, b, c, d] = points(s, ids)?;
            affirmative((dist(a, b) - ratio * dist(c, d)).abs(), eps1)
        }
        Predicate::NotEqual(ids) => {
            let [a, b] = points(s, ids)?;
            negative(dist(a, b), eps1)
        }
        Predicate::Equal(l, r) => {
            let lv = eval_term(s, l)?;
            let rv = eval_term(s, r)?;
            let eps = tol.eps_rel() * scale.max(lv.abs()).max(rv.abs());
            affirmative((lv - rv).abs(), eps)
        }
        Predicate::Harmonic(ids) => {
            let pts = points(s, ids)?;
            let cr = cross_ratio(p, pts, eps1)?;
            affirmative((cr + 1.0).abs(), tol.eps_rel())
        }
    };
    Ok(ev)
}
