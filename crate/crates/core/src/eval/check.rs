//! DGS-style testing of a conjecture on random instances.

use super::{
    eval_predicate, instantiate_with, sample_free_points, trial_seed, EvalError, FreeAssignment,
    NumericScene, Tolerance,
};
use crate::model::{validate_conjecture, validate_construction, Predicate, Problem};
use crate::violation::{has_errors, Violation};

/// Free points are drawn uniformly from `[-SAMPLE_RANGE, SAMPLE_RANGE)²`.
pub const SAMPLE_RANGE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Falsified,
    ConsistentOverSamples,
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Falsified => "falsified",
            Verdict::ConsistentOverSamples => "consistent_over_samples",
            Verdict::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// 0-based index of the falsifying trial.
    pub trial: u64,
    pub assignment: FreeAssignment,
    pub predicate: Predicate,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub samples_total: u64,
    pub samples_degenerate: u64,
    pub samples_hypothesis_failed: u64,
    pub samples_checked: u64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CheckError {
    #[error("problem has no conjecture")]
    NoConjecture,
    #[error("constraint producing {0:?} is opaque; the construction cannot be evaluated")]
    OpaqueConstraint(String),
    #[error("trials must be positive")]
    NoTrials,
    #[error("problem is invalid: {}", .0.first().map(|v| v.to_string()).unwrap_or_default())]
    InvalidProblem(Vec<Violation>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

enum Outcome {
    Fails(f64),
    Degenerate,
}

fn all_hold(
    scene: &NumericScene,
    preds: &[Predicate],
    tol: Tolerance,
) -> Result<Result<(), (usize, Outcome)>, EvalError> {
    for (i, p) in preds.iter().enumerate() {
        match eval_predicate(scene, p, tol) {
            Ok(e) if e.truth => {}
            Ok(e) => return Ok(Err((i, Outcome::Fails(e.margin)))),
            Err(EvalError::DegeneratePredicate { .. }) => {
                return Ok(Err((i, Outcome::Degenerate)))
            }
            Err(other) => return Err(other),
        }
    }
    Ok(Ok(()))
}

/// Samples `trials` instances of the construction and tests the conjecture
/// on each.
///
/// Per sample, in order: a degenerate construction step or a false or
/// degenerate ndg condition counts as degenerate; a false hypothesis counts
/// as hypothesis-failed; otherwise the conclusion is checked, and the first
/// false conclusion stops the run with a witness. A degenerate predicate in
/// the hypothesis or conclusion also counts as degenerate.
pub fn check_conjecture(
    p: &Problem,
    trials: u64,
    seed: u64,
    tol: Tolerance,
) -> Result<CheckReport, CheckError> {
    let conj = p.conjecture.as_ref().ok_or(CheckError::NoConjecture)?;
    if trials == 0 {
        return Err(CheckError::NoTrials);
    }
    let k = &p.construction;
    if let Some(c) = k.first_opaque() {
        return Err(CheckError::OpaqueConstraint(c.output.clone()));
    }
    let mut violations = validate_construction(k);
    violations.extend(validate_conjecture(conj, k));
    if has_errors(&violations) {
        return Err(CheckError::InvalidProblem(violations));
    }

    let mut report = CheckReport {
        verdict: Verdict::Vacuous,
        samples_total: 0,
        samples_degenerate: 0,
        samples_hypothesis_failed: 0,
        samples_checked: 0,
        witness: None,
    };

    for trial in 0..trials {
        report.samples_total += 1;
        let assignment = sample_free_points(k, trial_seed(seed, trial), SAMPLE_RANGE);
        let scene = match instantiate_with(k, &assignment, tol) {
            Ok(s) => s,
            Err(EvalError::Degenerate { .. }) => {
                report.samples_degenerate += 1;
                continue;
            }
            Err(other) => return Err(other.into()),
        };
        if all_hold(&scene, &conj.ndg, tol)?.is_err() {
            report.samples_degenerate += 1;
            continue;
        }
        match all_hold(&scene, &conj.hypothesis, tol)? {
            Ok(()) => {}
            Err((_, Outcome::Degenerate)) => {
                report.samples_degenerate += 1;
                continue;
            }
            Err(_) => {
                report.samples_hypothesis_failed += 1;
                continue;
            }
        }
        match all_hold(&scene, &conj.conclusion, tol)? {
            Ok(()) => report.samples_checked += 1,
            Err((_, Outcome::Degenerate)) => report.samples_degenerate += 1,
            Err((i, Outcome::Fails(margin))) => {
                report.samples_checked += 1;
                report.witness = Some(Witness {
                    trial,
                    assignment,
                    predicate: conj.conclusion[i].clone(),
                    margin,
                });
                break;
            }
        }
    }

    report.verdict = if report.witness.is_some() {
        Verdict::Falsified
    } else if report.samples_checked > 0 {
        Verdict::ConsistentOverSamples
    } else {
        Verdict::Vacuous
    };
    Ok(report)
}
