//! Gradient descent with surgery on finite-dimensional Euclidean models.
//!
//! A [`FlowProblem`] bundles an objective, its degenerate set `G` with a
//! separation pair `(N, delta)`, the small-gradient function `A(eps)` and a
//! restart generator for the non-terminal points of `G`.

mod certificate;
mod engine;
mod integrator;
mod output;

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{euclidean, norm, Real};

pub use certificate::{
    crossing_drop, lower_bound_certificate, surgery_count_check, CertificateInputs, LowerBoundCertificate,
    SurgeryCountCheck,
};
pub use engine::{check_trace, energy_identity_residual, integrate_gradient_flow, surgered_flow, TraceReport};
pub use integrator::{Method, StepConfig, StopConfig};
pub use output::{trace_json, write_trace_csv, TRACE_SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("start point has dimension {found}, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("start point lies outside the domain")]
    OutsideDomain,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("restart path from G-point {index} does not strictly decrease f")]
    RestartNotDescending { index: usize },
    #[error("trace contains {0} surgery events")]
    HasSurgeries(usize),
    #[error("certificate is vacuous: eps = {eps} is not below delta/(2N) = {limit}")]
    VacuousCertificate { eps: f64, limit: f64 },
    #[error("empty trace")]
    EmptyTrace,
}

/// Smooth objective on an open subset of `R^d`.
pub trait Objective<T>: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[T]) -> T;
    fn gradient(&self, x: &[T]) -> Vec<T>;
    fn contains(&self, _x: &[T]) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DegeneratePoint<T> {
    pub point: Vec<T>,
    pub value: T,
    /// The interior critical point: the flow is allowed to converge there.
    pub terminal: bool,
}

pub type SmallGradientFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;
/// Descending path out of `G[index]` staying within `eps/2` of it.
pub type RestartFn<T> = Arc<dyn Fn(usize, T) -> Vec<Vec<T>> + Send + Sync>;

#[derive(Clone)]
pub struct FlowProblem<T> {
    pub objective: Arc<dyn Objective<T>>,
    pub degenerate: Vec<DegeneratePoint<T>>,
    /// Every `n_points + 1` elements of `G` contain a pair `delta` apart.
    pub n_points: usize,
    pub delta: T,
    pub small_gradient: SmallGradientFn<T>,
    pub gradient_cap: T,
    pub floor: T,
    pub restart: RestartFn<T>,
}

impl<T: Real> FlowProblem<T> {
    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// Index of and distance to the closest point of `G`.
    pub fn nearest_degenerate(&self, x: &[T]) -> Option<(usize, T)> {
        self.degenerate
            .iter()
            .enumerate()
            .map(|(i, g)| (i, euclidean(x, &g.point)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distance"))
    }

    pub fn distance_to_degenerate(&self, x: &[T]) -> T {
        self.nearest_degenerate(x).map_or(T::infinity(), |(_, d)| d)
    }

    pub fn gradient_norm(&self, x: &[T]) -> T {
        norm(&self.objective.gradient(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    Start,
    Step,
    Snap,
    Restart,
}

impl Event {
    pub fn as_str(self) -> &'static str {
        match self {
            Event::Start => "start",
            Event::Step => "step",
            Event::Snap => "snap",
            Event::Restart => "restart",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Sample<T> {
    pub t: T,
    pub x: Vec<T>,
    pub f: T,
    pub grad_norm: T,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Surgery<T> {
    /// Time of the snap sample.
    pub t: T,
    pub g_index: usize,
    pub g_point: Vec<T>,
    /// Last flow point before the snap.
    pub from: Vec<T>,
    pub f_before: T,
    /// Value at the end of the restart path.
    pub f_after: T,
    pub restart: Vec<Vec<T>>,
}

impl<T: Real> Surgery<T> {
    pub fn drop(&self) -> T {
        self.f_before - self.f_after
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Converged,
    SurgeryBudgetExceeded,
    StepFailure,
    TimeLimit,
}

impl FlowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowStatus::Converged => "converged",
            FlowStatus::SurgeryBudgetExceeded => "surgery_budget_exceeded",
            FlowStatus::StepFailure => "step_failure",
            FlowStatus::TimeLimit => "time_limit",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FlowTrace<T> {
    pub samples: Vec<Sample<T>>,
    pub surgeries: Vec<Surgery<T>>,
    pub status: FlowStatus,
    /// Diagnostic attached to a `step_failure`.
    pub failure: Option<String>,
}

impl<T: Real> FlowTrace<T> {
    pub fn first(&self) -> &Sample<T> {
        self.samples.first().expect("trace has a start sample")
    }

    pub fn last(&self) -> &Sample<T> {
        self.samples.last().expect("trace has a start sample")
    }

    pub fn dim(&self) -> usize {
        self.first().x.len()
    }

    /// `d(x_0, x_end)`.
    pub fn displacement(&self) -> T {
        euclidean(&self.first().x, &self.last().x)
    }

    /// `f(x_0) - f(x_end)`.
    pub fn total_drop(&self) -> T {
        self.first().f - self.last().f
    }

    pub fn step_count(&self) -> usize {
        self.samples.iter().filter(|s| s.event == Event::Step).count()
    }
}

#[cfg(test)]
mod tests;
