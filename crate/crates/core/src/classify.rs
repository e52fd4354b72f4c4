//! Assigning points to the four Fatou components `Omega^{ab}`.
//!
//! A point is captured at step `m` when `F^m(P)` enters some rung `W_n` of the
//! cone ladder. The ladder is forward invariant (`F(W_n) ⊂ W_{n+1}`), so the
//! quadrant `q` observed there fixes the component of `F^m(P)`, and the component
//! of `P` itself is `sigma^{-m}(q)`. The classifier is sound for positives and
//! incomplete for negatives: a point that is never captured within the budget is
//! reported as such, not declared outside the Fatou set.

use num_complex::Complex64;

use crate::exec::{map_slice, Execution};
use crate::limits::{h1, h2};
use crate::map::{apply_f, MapParams, Point};
use crate::regions::{in_w, in_wn, point_in_s, quadrant, sigma_power, ConeSchedule, QuadrantLabel};

/// Tolerance for the `h1` value attached to captured points.
const H1_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Captured,
    /// `exp(-z^2)` overflowed before capture.
    Saturated,
    /// No capture within the budget, or the post-capture validation failed.
    BudgetExhausted,
    /// No capture within the budget and the last iterate lies outside `S`.
    LeftS,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Captured => "Captured",
            Status::Saturated => "Saturated",
            Status::BudgetExhausted => "BudgetExhausted",
            Status::LeftS => "LeftS",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationResult {
    pub label: Option<QuadrantLabel>,
    pub capture_step: Option<usize>,
    pub status: Status,
    /// `h1(P)`, when captured and finite.
    pub h1_at_point: Option<Complex64>,
}

impl ClassificationResult {
    fn uncaptured(status: Status) -> Self {
        Self {
            label: None,
            capture_step: None,
            status,
            h1_at_point: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyConfig {
    /// Largest capture step tried.
    pub budget: usize,
    pub schedule: ConeSchedule,
    /// Iterations after capture that re-check `F(W_n) ⊂ W_{n+1}`.
    pub validate_steps: usize,
    /// Highest ladder rung searched at each step.
    pub max_rung: usize,
}

pub const DEFAULT_BUDGET: usize = 200;
pub const DEFAULT_VALIDATE_STEPS: usize = 8;
pub const DEFAULT_MAX_RUNG: usize = 512;

impl ClassifyConfig {
    pub fn new(schedule: ConeSchedule) -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            schedule,
            validate_steps: DEFAULT_VALIDATE_STEPS,
            max_rung: DEFAULT_MAX_RUNG,
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_validate_steps(mut self, steps: usize) -> Self {
        self.validate_steps = steps;
        self
    }
}

/// `h1(P)` from the captured iterate `Q = F^m(P)`.
///
/// `z_{2n}/w_{2n}` along `P` is `z_{2n-m}/w_{2n-m}` along `Q`, an even
/// subsequence for even `m` and an odd one otherwise.
fn h1_from_capture(q: &Point, m: usize, params: &MapParams) -> Option<Complex64> {
    let est = if m.is_multiple_of(2) {
        h1(q, H1_TOL, params)
    } else {
        h2(q, H1_TOL, params)
    };
    est.ok()?.value.finite()
}

pub fn classify(p: &Point, cfg: &ClassifyConfig, params: &MapParams) -> ClassificationResult {
    let sched = &cfg.schedule;
    let mut current = *p;
    let mut step = 0;
    let (rung, observed) = loop {
        if let Some(n) = in_w(&current, sched, cfg.max_rung) {
            let q = quadrant(&current).expect("ladder points have nonzero real parts");
            break (n, q);
        }
        if step == cfg.budget {
            let status = if point_in_s(&current) {
                Status::BudgetExhausted
            } else {
                Status::LeftS
            };
            return ClassificationResult::uncaptured(status);
        }
        match apply_f(&current, params) {
            Some(next) => current = next,
            None => return ClassificationResult::uncaptured(Status::Saturated),
        }
        step += 1;
    };

    let captured = current;
    let mut probe = current;
    for k in 1..=cfg.validate_steps {
        let next = apply_f(&probe, params);
        match next {
            Some(next) if in_wn(&next, rung + k, sched) => probe = next,
            _ => return ClassificationResult::uncaptured(Status::BudgetExhausted),
        }
    }

    ClassificationResult {
        label: Some(sigma_power(observed, -(step as i64))),
        capture_step: Some(step),
        status: Status::Captured,
        h1_at_point: h1_from_capture(&captured, step, params),
    }
}

/// Element-wise [`classify`]; order-preserving and bit-identical for any `exec`.
pub fn classify_grid(
    points: &[Point],
    cfg: &ClassifyConfig,
    params: &MapParams,
) -> Vec<ClassificationResult> {
    classify_grid_with(points, cfg, params, Execution::default())
}

pub fn classify_grid_with(
    points: &[Point],
    cfg: &ClassifyConfig,
    params: &MapParams,
    exec: Execution,
) -> Vec<ClassificationResult> {
    map_slice(exec, points, |p| classify(p, cfg, params))
}
