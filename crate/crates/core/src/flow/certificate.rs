use serde::{Deserialize, Serialize};

use super::{FlowError, FlowProblem, FlowTrace};
use crate::scalar::Real;
use crate::surface_bounds::{ConstantsLedger, LedgerError};

/// The three numbers the lower bound depends on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CertificateInputs<T> {
    pub a_eps: T,
    pub delta: T,
    /// `N`, the separation count (`2^n` for a surface).
    pub n_points: usize,
}

impl<T: Real> CertificateInputs<T> {
    pub fn from_problem(problem: &FlowProblem<T>, eps: T) -> Self {
        Self {
            a_eps: (problem.small_gradient)(eps),
            delta: problem.delta,
            n_points: problem.n_points,
        }
    }

    /// Surface version: `A(eps, S)`, `delta_0` and `N = 2^n`.
    pub fn from_ledger(ledger: &ConstantsLedger<T>, eps: T) -> Result<Self, LedgerError> {
        Ok(Self {
            a_eps: ledger.a_epsilon(eps)?,
            delta: ledger.inputs.delta0,
            n_points: 1usize << ledger.n,
        })
    }

    fn two_n_eps(&self, eps: T) -> T {
        T::lit(2.0) * T::from_count(self.n_points) * eps
    }

    fn check(&self, eps: T) -> Result<T, FlowError> {
        let two_n_eps = self.two_n_eps(eps);
        if !(eps > T::zero() && two_n_eps < self.delta) {
            return Err(FlowError::VacuousCertificate {
                eps: eps.as_f64(),
                limit: (self.delta / (T::lit(2.0) * T::from_count(self.n_points))).as_f64(),
            });
        }
        Ok(two_n_eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LowerBoundCertificate<T> {
    pub lhs: T,
    pub rhs: T,
    pub margin: T,
    pub holds: bool,
}

/// `f(x_0) - f(x_end) >= A(eps) ((delta - 2N eps)/delta) (d(x_0, x_end) - 2N eps)`.
pub fn lower_bound_certificate<T: Real>(
    trace: &FlowTrace<T>,
    eps: T,
    inputs: &CertificateInputs<T>,
) -> Result<LowerBoundCertificate<T>, FlowError> {
    let two_n_eps = inputs.check(eps)?;
    if trace.samples.is_empty() {
        return Err(FlowError::EmptyTrace);
    }
    let lhs = trace.total_drop();
    let rhs = inputs.a_eps * (inputs.delta - two_n_eps) / inputs.delta * (trace.displacement() - two_n_eps);
    let margin = lhs - rhs;
    let slack = T::lit(1e-12) * (T::one() + lhs.abs());
    Ok(LowerBoundCertificate {
        lhs,
        rhs,
        margin,
        holds: margin >= -slack,
    })
}

/// Guaranteed drop `v` of `f` along any stretch moving `delta`.
pub fn crossing_drop<T: Real>(inputs: &CertificateInputs<T>, eps: T) -> Result<T, FlowError> {
    let two_n_eps = inputs.check(eps)?;
    let gap = inputs.delta - two_n_eps;
    Ok(inputs.a_eps * gap / inputs.delta * gap)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct SurgeryCountCheck<T> {
    pub count: usize,
    pub bound: T,
    pub holds: bool,
}

/// `#surgeries <= 2^n (f(x_0)/v + 1)`.
pub fn surgery_count_check<T: Real>(trace: &FlowTrace<T>, v: T, n: u32) -> SurgeryCountCheck<T> {
    let f0 = trace.samples.first().map_or(T::zero(), |s| s.f);
    let bound = T::lit(2.0).powi(n as i32) * (f0 / v + T::one());
    let count = trace.surgeries.len();
    SurgeryCountCheck {
        count,
        bound,
        holds: T::from_count(count) <= bound,
    }
}
