//! Scene generators for the oracle-equivalence and invariance checks.

use i2gatp::eval::{eval_predicate, EvalError, NumericScene, SplitMix64, Tolerance};
use i2gatp::Predicate;

use super::exact;

pub fn ids<const N: usize>(s: &str) -> [String; N] {
    let v: Vec<String> = s.split_whitespace().map(String::from).collect();
    v.try_into().unwrap()
}

fn int_in(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

type I = (i64, i64);

/// One integer-coordinate instance of a point predicate.
pub struct IntCase {
    pub predicate: Predicate,
    pub points: Vec<(&'static str, I)>,
}

impl IntCase {
    pub fn float_scene(&self) -> NumericScene {
        NumericScene::from_points(
            self.points
                .iter()
                .map(|(id, (x, y))| (*id, (*x as f64, *y as f64))),
        )
    }

    pub fn exact_scene(&self) -> exact::Scene {
        self.points
            .iter()
            .map(|(id, (x, y))| {
                (
                    id.to_string(),
                    exact::Value::Point(exact::int(*x), exact::int(*y)),
                )
            })
            .collect()
    }
}

fn point(rng: &mut SplitMix64, r: i64) -> I {
    (int_in(rng, -r, r), int_in(rng, -r, r))
}

fn add(p: I, v: I, k: i64) -> I {
    (p.0 + k * v.0, p.1 + k * v.1)
}

/// Cases for collinear, parallel, perpendicular, midpoint and same_length
/// in rotation, every coordinate in `[-100, 100]`. Half of them are built
/// to satisfy the predicate, the rest are uniform.
pub fn integer_cases(n: usize, seed: u64) -> Vec<IntCase> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|i| {
            let rng = &mut rng;
            let built = (i / 5) % 2 == 1;
            let (a, b, c, d) = (point(rng, 100), point(rng, 100), point(rng, 100), point(rng, 100));
            match i % 5 {
                0 => {
                    let pts = if built {
                        let a = point(rng, 50);
                        let v = point(rng, 10);
                        [a, add(a, v, 1), add(a, v, int_in(rng, -5, 5))]
                    } else {
                        [a, b, c]
                    };
                    IntCase {
                        predicate: Predicate::Collinear(ids("A B C")),
                        points: vec![("A", pts[0]), ("B", pts[1]), ("C", pts[2])],
                    }
                }
                1 | 2 => {
                    let pts = if built {
                        let (a, c) = (point(rng, 50), point(rng, 50));
                        let v = point(rng, 10);
                        let w = if i % 5 == 1 { v } else { (-v.1, v.0) };
                        [a, add(a, v, 1), c, add(c, w, int_in(rng, -5, 5))]
                    } else {
                        [a, b, c, d]
                    };
                    let predicate = if i % 5 == 1 {
                        Predicate::Parallel(ids("A B C D"))
                    } else {
                        Predicate::Perpendicular(ids("A B C D"))
                    };
                    IntCase {
                        predicate,
                        points: vec![("A", pts[0]), ("B", pts[1]), ("C", pts[2]), ("D", pts[3])],
                    }
                }
                3 => {
                    let (m, b) = if built {
                        let even = |a: i64, b: i64| match (b - a).rem_euclid(2) {
                            0 => b,
                            _ if b > -100 => b - 1,
                            _ => b + 1,
                        };
                        let b = (even(a.0, b.0), even(a.1, b.1));
                        (((a.0 + b.0) / 2, (a.1 + b.1) / 2), b)
                    } else {
                        (c, b)
                    };
                    IntCase {
                        predicate: Predicate::Midpoint(ids("M A B")),
                        points: vec![("M", m), ("A", a), ("B", b)],
                    }
                }
                _ => {
                    let pts = if built {
                        let (a, c) = (point(rng, 50), point(rng, 50));
                        let v = point(rng, 35);
                        let w = match int_in(rng, 0, 3) {
                            0 => (-v.1, v.0),
                            1 => (v.1, -v.0),
                            2 => (-v.0, v.1),
                            _ => (v.1, v.0),
                        };
                        [a, add(a, v, 1), c, add(c, w, 1)]
                    } else {
                        [a, b, c, d]
                    };
                    IntCase {
                        predicate: Predicate::SameLength(ids("A B C D")),
                        points: vec![("A", pts[0]), ("B", pts[1]), ("C", pts[2]), ("D", pts[3])],
                    }
                }
            }
        })
        .collect()
}

type P = (f64, f64);

fn padd(p: P, v: P, k: f64) -> P {
    (p.0 + k * v.0, p.1 + k * v.1)
}

fn rotate(v: P, phi: f64) -> P {
    let (s, c) = phi.sin_cos();
    (c * v.0 - s * v.1, s * v.0 + c * v.1)
}

/// A float scene with predicates built to hold next to uniformly placed
/// ones that almost surely fail.
pub struct FloatScene {
    pub points: Vec<(String, P)>,
    pub predicates: Vec<Predicate>,
}

impl FloatScene {
    pub fn scene(&self) -> NumericScene {
        NumericScene::from_points(self.points.iter().map(|(id, p)| (id.as_str(), *p)))
    }

    /// Applies `p ↦ λ·R(θ)·p + t` to every point.
    pub fn transformed(&self, theta: f64, lambda: f64, t: P) -> FloatScene {
        FloatScene {
            points: self
                .points
                .iter()
                .map(|(id, p)| {
                    let q = rotate(*p, theta);
                    (id.clone(), (lambda * q.0 + t.0, lambda * q.1 + t.1))
                })
                .collect(),
            predicates: self.predicates.clone(),
        }
    }
}

pub fn float_scene(rng: &mut SplitMix64) -> FloatScene {
    let mut p = || (rng.next_symmetric(10.0), rng.next_symmetric(10.0));
    let (a, b, c, d) = (p(), p(), p(), p());
    let ab = (b.0 - a.0, b.1 - a.1);
    let t = rng.next_symmetric(3.0);
    let s = rng.next_symmetric(3.0);
    let phi = rng.next_symmetric(std::f64::consts::PI);
    let ratio = 0.5 + 2.5 * rng.next_unit();
    // Harmonic conjugates on AB at parameters u and u / (2u - 1).
    let u = 0.1 + 0.3 * rng.next_unit();
    let v = u / (2.0 * u - 1.0);
    let len_ab = rotate(ab, phi);
    let points = vec![
        ("A", a),
        ("B", b),
        ("C", c),
        ("D", d),
        ("E", padd(a, ab, t)),
        ("F", padd(c, ab, s)),
        ("G", padd(c, (-ab.1, ab.0), s)),
        ("M", ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)),
        ("H", padd(a, ab, u)),
        ("K", padd(a, ab, v)),
        ("L", padd(c, len_ab, 1.0)),
        ("R", padd(c, len_ab, 1.0 / ratio)),
    ];
    let predicates = vec![
        Predicate::Collinear(ids("A B E")),
        Predicate::Parallel(ids("A B C F")),
        Predicate::Perpendicular(ids("A B C G")),
        Predicate::Midpoint(ids("M A B")),
        Predicate::Harmonic(ids("A B H K")),
        Predicate::SameLength(ids("A B C L")),
        Predicate::SegmentRatio(ids("A B C R"), ratio),
        Predicate::NotParallel(ids("A B C F")),
        Predicate::Collinear(ids("A B C")),
        Predicate::Parallel(ids("A B C D")),
        Predicate::Perpendicular(ids("A B C D")),
        Predicate::Midpoint(ids("C A B")),
        Predicate::Harmonic(ids("A B H D")),
        Predicate::SameLength(ids("A B C D")),
        Predicate::SegmentRatio(ids("A B C D"), ratio),
        Predicate::NotParallel(ids("A B C D")),
        Predicate::NotEqual(ids("A B")),
    ];
    FloatScene {
        points: points.into_iter().map(|(id, p)| (id.to_string(), p)).collect(),
        predicates,
    }
}

/// Residual distance from the threshold, as a factor: every predicate must
/// be either this many times below its threshold or this many times above.
pub const CLEARANCE: f64 = 1e3;

/// Truth values of the scene's predicates, or `None` when some predicate is
/// degenerate or too close to its threshold to call.
pub fn clear_truths(s: &FloatScene, tol: Tolerance) -> Option<Vec<bool>> {
    let scene = s.scene();
    let mut out = Vec::new();
    for p in &s.predicates {
        let e = match eval_predicate(&scene, p, tol) {
            Ok(e) => e,
            Err(EvalError::DegeneratePredicate { .. }) => return None,
            Err(other) => panic!("{other}"),
        };
        let eps = e.residual - e.margin;
        if e.residual * CLEARANCE > eps && e.residual < eps * CLEARANCE {
            return None;
        }
        out.push(e.truth);
    }
    Some(out)
}
