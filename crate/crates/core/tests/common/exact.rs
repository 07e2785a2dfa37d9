//! Exact rational evaluation of constructions and predicates.
//!
//! Written independently of the float evaluator: lines stay unnormalized,
//! lengths are compared squared and the cross ratio is taken from
//! unnormalized projections. Steps whose result is irrational (points on
//! lines or circles) are reported as unsupported.

use std::collections::BTreeMap;

use i2gatp::model::{ConstraintKind, Construction};
use i2gatp::Predicate;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// The exact value of a finite double.
pub fn from_f64(v: f64) -> Q {
    Q::from_float(v).expect("finite")
}

pub fn to_f64(q: &Q) -> f64 {
    q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Point(Q, Q),
    /// `a·x + b·y + c = 0`, not normalized.
    Line(Q, Q, Q),
    /// Center and squared radius.
    Circle(Q, Q, Q),
}

pub type Scene = BTreeMap<String, Value>;

fn pt(s: &Scene, id: &str) -> Result<(Q, Q), String> {
    match s.get(id) {
        Some(Value::Point(x, y)) => Ok((x.clone(), y.clone())),
        other => Err(format!("{id} is not a point: {other:?}")),
    }
}

fn ln(s: &Scene, id: &str) -> Result<(Q, Q, Q), String> {
    match s.get(id) {
        Some(Value::Line(a, b, c)) => Ok((a.clone(), b.clone(), c.clone())),
        other => Err(format!("{id} is not a line: {other:?}")),
    }
}

pub fn instantiate(k: &Construction, free: &BTreeMap<String, (Q, Q)>) -> Result<Scene, String> {
    let mut s = Scene::new();
    for c in &k.constraints {
        let i = |n: usize| c.inputs[n].as_str();
        let v = match &c.kind {
            ConstraintKind::FreePoint => {
                let (x, y) = free.get(&c.output).ok_or("missing free point")?.clone();
                Value::Point(x, y)
            }
            ConstraintKind::LineThroughTwoPoints => {
                let (x1, y1) = pt(&s, i(0))?;
                let (x2, y2) = pt(&s, i(1))?;
                if x1 == x2 && y1 == y2 {
                    return Err(format!("{}: coincident points", c.output));
                }
                Value::Line(&y1 - &y2, &x2 - &x1, &x1 * &y2 - &x2 * &y1)
            }
            ConstraintKind::IntersectionOfTwoLines => {
                let (a1, b1, c1) = ln(&s, i(0))?;
                let (a2, b2, c2) = ln(&s, i(1))?;
                let w = &a1 * &b2 - &b1 * &a2;
                if w.is_zero() {
                    return Err(format!("{}: parallel lines", c.output));
                }
                let x = (&b1 * &c2 - &c1 * &b2) / &w;
                let y = (&c1 * &a2 - &a1 * &c2) / &w;
                Value::Point(x, y)
            }
            ConstraintKind::MidpointOfTwoPoints => {
                let (x1, y1) = pt(&s, i(0))?;
                let (x2, y2) = pt(&s, i(1))?;
                let half = frac(1, 2);
                Value::Point((x1 + x2) * &half, (y1 + y2) * &half)
            }
            ConstraintKind::CircleByCenterAndPoint => {
                let (cx, cy) = pt(&s, i(0))?;
                let (px, py) = pt(&s, i(1))?;
                let r2 = (&px - &cx) * (&px - &cx) + (&py - &cy) * (&py - &cy);
                Value::Circle(cx, cy, r2)
            }
            ConstraintKind::PerpendicularLineThroughPoint => {
                let (a, b, _) = ln(&s, i(0))?;
                let (px, py) = pt(&s, i(1))?;
                // Through P with direction (a, b).
                let c0 = &b * &px - &a * &py;
                Value::Line(-b, a, c0)
            }
            ConstraintKind::ParallelLineThroughPoint => {
                let (a, b, _) = ln(&s, i(0))?;
                let (px, py) = pt(&s, i(1))?;
                let c0 = -(&a * &px + &b * &py);
                Value::Line(a, b, c0)
            }
            other => return Err(format!("{} is not rational", other.tag())),
        };
        s.insert(c.output.clone(), v);
    }
    Ok(s)
}

fn sub(a: &(Q, Q), b: &(Q, Q)) -> (Q, Q) {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross(u: &(Q, Q), v: &(Q, Q)) -> Q {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn dot(u: &(Q, Q), v: &(Q, Q)) -> Q {
    &u.0 * &v.0 + &u.1 * &v.1
}

fn len2(a: &(Q, Q), b: &(Q, Q)) -> Q {
    let d = sub(a, b);
    dot(&d, &d)
}

/// Signed cross ratio `(A, B; C, D)` from projections onto AB; `None` when
/// a denominator vanishes.
pub fn cross_ratio(a: &(Q, Q), b: &(Q, Q), c: &(Q, Q), d: &(Q, Q)) -> Option<Q> {
    let u = sub(b, a);
    let sb = dot(&u, &u);
    if sb.is_zero() {
        return None;
    }
    let sc = dot(&sub(c, a), &u);
    let sd = dot(&sub(d, a), &u);
    let cb = &sb - &sc;
    let db = &sb - &sd;
    if cb.is_zero() || sd.is_zero() {
        return None;
    }
    Some((sc * db) / (cb * sd))
}

/// Exact truth of a point predicate; `None` for `equal`, for irrational
/// segment ratios and for degenerate cross ratios.
pub fn truth(s: &Scene, p: &Predicate) -> Option<bool> {
    let get = |ids: &[String]| -> Vec<(Q, Q)> { ids.iter().map(|id| pt(s, id).unwrap()).collect() };
    Some(match p {
        Predicate::Collinear(ids) => {
            let v = get(ids);
            cross(&sub(&v[1], &v[0]), &sub(&v[2], &v[0])).is_zero()
        }
        Predicate::Parallel(ids) => {
            let v = get(ids);
            cross(&sub(&v[1], &v[0]), &sub(&v[3], &v[2])).is_zero()
        }
        Predicate::NotParallel(ids) => {
            let v = get(ids);
            !cross(&sub(&v[1], &v[0]), &sub(&v[3], &v[2])).is_zero()
        }
        Predicate::Perpendicular(ids) => {
            let v = get(ids);
            dot(&sub(&v[1], &v[0]), &sub(&v[3], &v[2])).is_zero()
        }
        Predicate::Midpoint(ids) => {
            let v = get(ids);
            let two = int(2);
            &v[0].0 * &two == &v[1].0 + &v[2].0 && &v[0].1 * &two == &v[1].1 + &v[2].1
        }
        Predicate::SameLength(ids) => {
            let v = get(ids);
            len2(&v[0], &v[1]) == len2(&v[2], &v[3])
        }
        Predicate::NotEqual(ids) => {
            let v = get(ids);
            v[0] != v[1]
        }
        Predicate::SegmentRatio(ids, r) => {
            let v = get(ids);
            let r = from_f64(*r);
            len2(&v[0], &v[1]) == &r * &r * len2(&v[2], &v[3])
        }
        Predicate::Harmonic(ids) => {
            let v = get(ids);
            let collinear = cross(&sub(&v[1], &v[0]), &sub(&v[2], &v[0])).is_zero()
                && cross(&sub(&v[1], &v[0]), &sub(&v[3], &v[0])).is_zero();
            let cr = cross_ratio(&v[0], &v[1], &v[2], &v[3])?;
            collinear && cr == -Q::one()
        }
        Predicate::Equal(..) => return None,
    })
}

/// Float coordinates of an exact value, lines normalized like the float
/// evaluator does.
pub fn approx(v: &Value) -> Vec<f64> {
    match v {
        Value::Point(x, y) => vec![to_f64(x), to_f64(y)],
        Value::Line(a, b, c) => {
            let (a, b, c) = (to_f64(a), to_f64(b), to_f64(c));
            let n = a.hypot(b);
            vec![a / n, b / n, c / n]
        }
        Value::Circle(cx, cy, r2) => vec![to_f64(cx), to_f64(cy), to_f64(r2).sqrt()],
    }
}

pub fn is_negative(q: &Q) -> bool {
    q.is_negative()
}
