//! Explicit Runge–Kutta steps for `x' = -grad f(x)`.

use serde::{Deserialize, Serialize};

use super::Objective;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Adaptive Dormand–Prince 5(4).
    #[default]
    DormandPrince,
    /// Fixed-step Heun, order 2.
    Heun,
    /// Fixed-step classical Runge–Kutta, order 4.
    Rk4,
}

impl Method {
    pub fn order(self) -> u32 {
        match self {
            Method::DormandPrince => 5,
            Method::Heun => 2,
            Method::Rk4 => 4,
        }
    }

    pub fn adaptive(self) -> bool {
        matches!(self, Method::DormandPrince)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StepConfig<T> {
    pub method: Method,
    /// Initial step for adaptive methods, the step for fixed ones.
    pub h0: T,
    pub h_min: T,
    pub h_max: T,
    pub atol: T,
    pub rtol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for StepConfig<T> {
    fn default() -> Self {
        Self {
            method: Method::DormandPrince,
            h0: T::lit(1e-2),
            h_min: T::lit(1e-12),
            h_max: T::lit(1.0),
            atol: T::lit(1e-12),
            rtol: T::lit(1e-10),
            max_steps: 200_000,
        }
    }
}

impl<T: Real> StepConfig<T> {
    pub fn fixed(method: Method, h: T) -> Self {
        Self {
            method,
            h0: h,
            h_max: h,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct StopConfig<T> {
    pub grad_tol: T,
    pub t_max: T,
}

impl<T: Real> Default for StopConfig<T> {
    fn default() -> Self {
        Self {
            grad_tol: T::lit(1e-10),
            t_max: T::lit(1e3),
        }
    }
}

fn field<T: Real>(obj: &dyn Objective<T>, x: &[T]) -> Option<Vec<T>> {
    if !obj.contains(x) {
        return None;
    }
    Some(obj.gradient(x).into_iter().map(|g| -g).collect())
}

fn axpy<T: Real>(x: &[T], h: T, terms: &[(T, &[T])]) -> Vec<T> {
    let mut out = x.to_vec();
    for &(c, k) in terms {
        for (o, &ki) in out.iter_mut().zip(k) {
            *o = *o + h * c * ki;
        }
    }
    out
}

pub(super) enum StepOutcome<T> {
    Accepted {
        x: Vec<T>,
        h_next: T,
    },
    Rejected {
        h_next: T,
    },
    /// A stage point left the domain.
    Outside,
}

/// One attempted step of size `h` from `x`.
pub(super) fn attempt<T: Real>(obj: &dyn Objective<T>, cfg: &StepConfig<T>, x: &[T], h: T) -> StepOutcome<T> {
    match cfg.method {
        Method::Heun => {
            let Some(k1) = field(obj, x) else {
                return StepOutcome::Outside;
            };
            let Some(k2) = field(obj, &axpy(x, h, &[(T::one(), &k1)])) else {
                return StepOutcome::Outside;
            };
            let xn = axpy(x, h, &[(T::lit(0.5), &k1), (T::lit(0.5), &k2)]);
            if !obj.contains(&xn) {
                return StepOutcome::Outside;
            }
            StepOutcome::Accepted { x: xn, h_next: h }
        }
        Method::Rk4 => {
            let half = T::lit(0.5);
            let Some(k1) = field(obj, x) else {
                return StepOutcome::Outside;
            };
            let Some(k2) = field(obj, &axpy(x, h, &[(half, &k1)])) else {
                return StepOutcome::Outside;
            };
            let Some(k3) = field(obj, &axpy(x, h, &[(half, &k2)])) else {
                return StepOutcome::Outside;
            };
            let Some(k4) = field(obj, &axpy(x, h, &[(T::one(), &k3)])) else {
                return StepOutcome::Outside;
            };
            let sixth = T::one() / T::lit(6.0);
            let third = T::one() / T::lit(3.0);
            let xn = axpy(x, h, &[(sixth, &k1), (third, &k2), (third, &k3), (sixth, &k4)]);
            if !obj.contains(&xn) {
                return StepOutcome::Outside;
            }
            StepOutcome::Accepted { x: xn, h_next: h }
        }
        Method::DormandPrince => dormand_prince(obj, cfg, x, h),
    }
}

fn dormand_prince<T: Real>(obj: &dyn Objective<T>, cfg: &StepConfig<T>, x: &[T], h: T) -> StepOutcome<T> {
    let c = |v: f64| T::lit(v);
    let Some(k1) = field(obj, x) else {
        return StepOutcome::Outside;
    };
    let Some(k2) = field(obj, &axpy(x, h, &[(c(1.0 / 5.0), &k1)])) else {
        return StepOutcome::Outside;
    };
    let Some(k3) = field(obj, &axpy(x, h, &[(c(3.0 / 40.0), &k1), (c(9.0 / 40.0), &k2)])) else {
        return StepOutcome::Outside;
    };
    let Some(k4) = field(
        obj,
        &axpy(
            x,
            h,
            &[(c(44.0 / 45.0), &k1), (c(-56.0 / 15.0), &k2), (c(32.0 / 9.0), &k3)],
        ),
    ) else {
        return StepOutcome::Outside;
    };
    let Some(k5) = field(
        obj,
        &axpy(
            x,
            h,
            &[
                (c(19372.0 / 6561.0), &k1),
                (c(-25360.0 / 2187.0), &k2),
                (c(64448.0 / 6561.0), &k3),
                (c(-212.0 / 729.0), &k4),
            ],
        ),
    ) else {
        return StepOutcome::Outside;
    };
    let Some(k6) = field(
        obj,
        &axpy(
            x,
            h,
            &[
                (c(9017.0 / 3168.0), &k1),
                (c(-355.0 / 33.0), &k2),
                (c(46732.0 / 5247.0), &k3),
                (c(49.0 / 176.0), &k4),
                (c(-5103.0 / 18656.0), &k5),
            ],
        ),
    ) else {
        return StepOutcome::Outside;
    };
    let xn = axpy(
        x,
        h,
        &[
            (c(35.0 / 384.0), &k1),
            (c(500.0 / 1113.0), &k3),
            (c(125.0 / 192.0), &k4),
            (c(-2187.0 / 6784.0), &k5),
            (c(11.0 / 84.0), &k6),
        ],
    );
    let Some(k7) = field(obj, &xn) else {
        return StepOutcome::Outside;
    };
    // difference between the 5th and embedded 4th order weights
    let e = [
        c(71.0 / 57600.0),
        T::zero(),
        c(-71.0 / 16695.0),
        c(71.0 / 1920.0),
        c(-17253.0 / 339200.0),
        c(22.0 / 525.0),
        c(-1.0 / 40.0),
    ];
    let ks = [&k1, &k2, &k3, &k4, &k5, &k6, &k7];
    let mut err = T::zero();
    for i in 0..x.len() {
        let ei: T = ks.iter().zip(&e).map(|(k, &w)| w * k[i]).sum::<T>() * h;
        let scale = cfg.atol + cfg.rtol * x[i].abs().max(xn[i].abs());
        err = err.max((ei / scale).abs());
    }
    let factor = if err == T::zero() {
        T::lit(5.0)
    } else {
        (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
    };
    let h_next = (h * factor).min(cfg.h_max);
    if err <= T::one() {
        StepOutcome::Accepted { x: xn, h_next }
    } else {
        StepOutcome::Rejected {
            h_next: h * factor.min(T::lit(0.9)),
        }
    }
}
