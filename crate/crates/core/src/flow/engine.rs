use serde::{Deserialize, Serialize};

use super::integrator::{attempt, StepConfig, StepOutcome, StopConfig};
use super::{Event, FlowError, FlowProblem, FlowStatus, FlowTrace, Sample, Surgery};
use crate::scalar::{euclidean, Real};

struct SurgeryPolicy<T> {
    eps: T,
    budget: usize,
}

fn sample<T: Real>(problem: &FlowProblem<T>, t: T, x: Vec<T>, event: Event) -> Sample<T> {
    let f = problem.objective.value(&x);
    let grad_norm = problem.gradient_norm(&x);
    Sample {
        t,
        x,
        f,
        grad_norm,
        event,
    }
}

fn validate<T: Real>(problem: &FlowProblem<T>, x0: &[T], step: &StepConfig<T>) -> Result<(), FlowError> {
    if x0.len() != problem.dim() {
        return Err(FlowError::Dimension {
            expected: problem.dim(),
            found: x0.len(),
        });
    }
    if !problem.objective.contains(x0) {
        return Err(FlowError::OutsideDomain);
    }
    if !(step.h0 > T::zero() && step.h_min > T::zero() && step.h_max >= step.h0) {
        return Err(FlowError::InvalidConfig("need 0 < h0 <= h_max and h_min > 0".into()));
    }
    Ok(())
}

/// Index of the `G`-point to snap to: the nearest one, if it is non-terminal,
/// closer than `eps`, the gradient is below `A(eps)` and `f(x) >= f(z)`.
fn snap_target<T: Real>(problem: &FlowProblem<T>, s: &Sample<T>, eps: T) -> Option<usize> {
    let (i, d) = problem.nearest_degenerate(&s.x)?;
    let g = &problem.degenerate[i];
    (!g.terminal && d < eps && s.grad_norm < (problem.small_gradient)(eps) && s.f >= g.value).then_some(i)
}

fn run<T: Real>(
    problem: &FlowProblem<T>,
    x0: &[T],
    step: &StepConfig<T>,
    stop: &StopConfig<T>,
    policy: Option<SurgeryPolicy<T>>,
) -> Result<FlowTrace<T>, FlowError> {
    validate(problem, x0, step)?;
    let obj = problem.objective.as_ref();
    let mut samples = vec![sample(problem, T::zero(), x0.to_vec(), Event::Start)];
    let mut surgeries: Vec<Surgery<T>> = Vec::new();
    let mut h = step.h0;
    let mut steps = 0usize;
    let finish = |samples, surgeries, status, failure| {
        Ok(FlowTrace {
            samples,
            surgeries,
            status,
            failure,
        })
    };
    loop {
        let cur = samples.last().expect("non-empty").clone();
        if let Some(p) = &policy {
            if let Some(i) = snap_target(problem, &cur, p.eps) {
                if surgeries.len() >= p.budget {
                    return finish(samples, surgeries, FlowStatus::SurgeryBudgetExceeded, None);
                }
                let g = &problem.degenerate[i];
                let path = (problem.restart)(i, p.eps);
                let descending = path.len() >= 2
                    && euclidean(&path[0], &g.point) <= T::lit(1e-12) * (T::one() + p.eps)
                    && path[1..].iter().all(|q| obj.contains(q))
                    && path.windows(2).enumerate().all(|(k, w)| {
                        let prev = if k == 0 { g.value } else { obj.value(&w[0]) };
                        obj.value(&w[1]) < prev
                    });
                if !descending {
                    return Err(FlowError::RestartNotDescending { index: i });
                }
                // the infinite-time approach is compressed into one unit of time
                let t_snap = cur.t + T::one();
                samples.push(sample(problem, t_snap, g.point.clone(), Event::Snap));
                let mut t = t_snap;
                for w in path.windows(2) {
                    t = t + euclidean(&w[0], &w[1]).max(T::epsilon());
                    samples.push(sample(problem, t, w[1].clone(), Event::Restart));
                }
                let end = samples.last().expect("restart sample");
                surgeries.push(Surgery {
                    t: t_snap,
                    g_index: i,
                    g_point: g.point.clone(),
                    from: cur.x.clone(),
                    f_before: cur.f,
                    f_after: end.f,
                    restart: path,
                });
                h = step.h0;
                continue;
            }
        }
        if cur.grad_norm < stop.grad_tol {
            return finish(samples, surgeries, FlowStatus::Converged, None);
        }
        if cur.t >= stop.t_max || steps >= step.max_steps {
            return finish(samples, surgeries, FlowStatus::TimeLimit, None);
        }
        let adaptive = step.method.adaptive();
        loop {
            let h_try = h.min(stop.t_max - cur.t);
            match attempt(obj, step, &cur.x, h_try) {
                StepOutcome::Accepted { x, h_next } => {
                    let t = if h_try == stop.t_max - cur.t {
                        stop.t_max
                    } else {
                        cur.t + h_try
                    };
                    samples.push(sample(problem, t, x, Event::Step));
                    if adaptive {
                        h = h_next.max(step.h_min);
                    }
                    steps += 1;
                    break;
                }
                StepOutcome::Rejected { h_next } if h_next >= step.h_min => h = h_next,
                StepOutcome::Outside if adaptive && h_try * T::lit(0.5) >= step.h_min => h = h_try * T::lit(0.5),
                outcome => {
                    let reason = match outcome {
                        StepOutcome::Outside => "step leaves the domain",
                        _ => "local error tolerance not met at minimum step",
                    };
                    let msg = format!("{reason} at t = {}", cur.t.as_f64());
                    return finish(samples, surgeries, FlowStatus::StepFailure, Some(msg));
                }
            }
        }
    }
}

/// Plain gradient flow of `f` from `x0`, ignoring the degenerate set.
pub fn integrate_gradient_flow<T: Real>(
    problem: &FlowProblem<T>,
    x0: &[T],
    step: &StepConfig<T>,
    stop: &StopConfig<T>,
) -> Result<FlowTrace<T>, FlowError> {
    run(problem, x0, step, stop, None)
}

/// Gradient flow with snap-and-restart at non-terminal points of `G`.
/// A `budget` of 0 reports `surgery_budget_exceeded` at the first snap.
pub fn surgered_flow<T: Real>(
    problem: &FlowProblem<T>,
    x0: &[T],
    eps: T,
    budget: usize,
    step: &StepConfig<T>,
    stop: &StopConfig<T>,
) -> Result<FlowTrace<T>, FlowError> {
    if !(eps > T::zero()) {
        return Err(FlowError::InvalidConfig("eps must be positive".into()));
    }
    run(problem, x0, step, stop, Some(SurgeryPolicy { eps, budget }))
}

/// `|f(x_0) - f(x_end) - int |grad f|^2 dt|` with the trapezoid rule on the samples.
pub fn energy_identity_residual<T: Real>(trace: &FlowTrace<T>) -> Result<T, FlowError> {
    if !trace.surgeries.is_empty() {
        return Err(FlowError::HasSurgeries(trace.surgeries.len()));
    }
    let s = &trace.samples;
    if s.is_empty() {
        return Err(FlowError::EmptyTrace);
    }
    let integral: T = s
        .windows(2)
        .map(|w| (w[1].t - w[0].t) * (w[0].grad_norm.powi(2) + w[1].grad_norm.powi(2)) * T::lit(0.5))
        .sum();
    Ok((trace.total_drop() - integral).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub monotone: bool,
    pub times_increasing: bool,
    pub surgery_drops_positive: bool,
    pub distinct_consecutive_snaps: bool,
    /// Samples farther than `eps` from `G` have gradient `>= A(eps)`.
    pub gradient_floor: bool,
    pub gradient_cap: bool,
    pub value_floor: bool,
}

impl TraceReport {
    pub fn all(&self) -> bool {
        self.monotone
            && self.times_increasing
            && self.surgery_drops_positive
            && self.distinct_consecutive_snaps
            && self.gradient_floor
            && self.gradient_cap
            && self.value_floor
    }
}

/// Checks the trace invariants; `eps` enables the gradient-floor check.
pub fn check_trace<T: Real>(trace: &FlowTrace<T>, problem: &FlowProblem<T>, eps: Option<T>) -> TraceReport {
    let s = &trace.samples;
    let tol = |f: T| T::lit(1e-12) * (T::one() + f.abs());
    let monotone = s.windows(2).all(|w| w[1].f <= w[0].f + tol(w[0].f));
    let times_increasing = s.windows(2).all(|w| w[1].t > w[0].t);
    let surgery_drops_positive = trace.surgeries.iter().all(|x| x.drop() > T::zero());
    let distinct_consecutive_snaps = trace.surgeries.windows(2).all(|w| w[0].g_index != w[1].g_index);
    let gradient_floor = eps.is_none_or(|e| {
        let a = (problem.small_gradient)(e);
        s.iter()
            .all(|p| problem.distance_to_degenerate(&p.x) <= e || p.grad_norm >= a)
    });
    let gradient_cap = s.iter().all(|p| p.grad_norm <= problem.gradient_cap);
    let value_floor = s.iter().all(|p| p.f >= problem.floor - tol(problem.floor));
    TraceReport {
        monotone,
        times_increasing,
        surgery_drops_positive,
        distinct_consecutive_snaps,
        gradient_floor,
        gradient_cap,
        value_floor,
    }
}
