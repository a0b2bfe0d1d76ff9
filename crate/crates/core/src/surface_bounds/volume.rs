//! W-volume scaling, the convex-core sandwich, and unbending functionals.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::simpson_uniform;
use crate::scalar::Real;

/// `W(N_t) = W(N) - t pi chi`.
pub fn w_volume_scale<T: Real>(w: T, t: T, chi: i64) -> T {
    w - t * T::PI() * T::lit(chi as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Sandwich<T> {
    pub lower: T,
    pub upper: T,
    pub warning: Option<String>,
}

/// `[V_R + L/4, V_R + L/2]`. When `incompressible_chi` is given, a bending
/// length above `6 pi |chi|` is flagged.
pub fn core_volume_sandwich<T: Real>(v_r: T, l_beta: T, incompressible_chi: Option<i64>) -> Sandwich<T> {
    let warning = incompressible_chi.and_then(|chi| {
        let cap = T::lit(6.0) * T::PI() * T::lit(chi.unsigned_abs() as f64);
        (l_beta > cap).then(|| {
            format!(
                "bending length {} exceeds 6 pi |chi| = {} for incompressible boundary",
                l_beta, cap
            )
        })
    });
    Sandwich {
        lower: v_r + l_beta * T::lit(0.25),
        upper: v_r + l_beta * T::lit(0.5),
        warning,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnbendingError {
    #[error("need at least 5 uniformly spaced samples, got {0}")]
    TooFewSamples(usize),
    #[error("grid is not uniform or does not end at pi")]
    BadGrid,
    #[error("negative length sample {0}")]
    NegativeLength(f64),
    #[error("derivative estimate unstable: step-halving change {change:e} exceeds {tolerance:e}")]
    GridTooCoarse { change: f64, tolerance: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Unbending<T> {
    /// `l'(theta)` by finite differences.
    pub dl: Vec<T>,
    /// `dW/dtheta = (l - theta l') / 4`.
    pub dw: Vec<T>,
    /// `(1/4) int_T^pi l + (1/8) T l(T)`.
    pub gap: T,
    /// `int_T^pi dW`, which equals twice `gap` when `l(pi) = 0`.
    pub dw_integral: T,
    /// `(5/2) sqrt(theta l(theta))`.
    pub phi_bound: Vec<T>,
    /// `l' < 0` at every interior sample.
    pub decreasing: bool,
}

/// Relative tolerance for the step-doubling stability test of `l'`.
pub const FD_TOLERANCE: f64 = 1e-3;

/// Evaluates the unbending functionals from samples of `l` on a uniform
/// grid `theta_0 = T < ... < theta_m = pi`.
pub fn unbending_functionals<T: Real>(theta: &[T], ell: &[T]) -> Result<Unbending<T>, UnbendingError> {
    let m = theta.len();
    if m < 5 || ell.len() != m {
        return Err(UnbendingError::TooFewSamples(m.min(ell.len())));
    }
    let h = (theta[m - 1] - theta[0]) / T::from_count(m - 1);
    let uniform = theta
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= T::lit(1e-9) * (T::one() + h.abs()));
    if !(h > T::zero()) || !uniform || (theta[m - 1] - T::PI()).abs() > T::lit(1e-9) {
        return Err(UnbendingError::BadGrid);
    }
    if let Some(bad) = ell.iter().find(|v| !(**v >= T::zero())) {
        return Err(UnbendingError::NegativeLength(bad.as_f64()));
    }
    let dl = derivative(ell, h);
    // Second estimate at twice the step; interior points only.
    let mut change = T::zero();
    let mut scale = T::zero();
    for i in 2..m - 2 {
        let coarse = (ell[i + 2] - ell[i - 2]) / (T::lit(4.0) * h);
        change = change.max((coarse - dl[i]).abs());
        scale = scale.max(dl[i].abs());
    }
    let tol = T::lit(FD_TOLERANCE) * (T::one() + scale);
    if change > tol {
        return Err(UnbendingError::GridTooCoarse {
            change: change.as_f64(),
            tolerance: tol.as_f64(),
        });
    }
    let quarter = T::lit(0.25);
    let dw: Vec<T> = (0..m).map(|i| quarter * (ell[i] - theta[i] * dl[i])).collect();
    let gap = quarter * simpson_uniform(ell, h) + T::lit(0.125) * theta[0] * ell[0];
    let dw_integral = simpson_uniform(&dw, h);
    let phi_bound = (0..m).map(|i| T::lit(2.5) * (theta[i] * ell[i]).sqrt()).collect();
    let decreasing = dl[1..m - 1].iter().all(|&d| d < T::zero());
    Ok(Unbending {
        dl,
        dw,
        gap,
        dw_integral,
        phi_bound,
        decreasing,
    })
}

// Centered differences inside, second-order one-sided at the ends.
fn derivative<T: Real>(y: &[T], h: T) -> Vec<T> {
    let m = y.len();
    let two_h = h + h;
    let mut d = vec![T::zero(); m];
    for i in 1..m - 1 {
        d[i] = (y[i + 1] - y[i - 1]) / two_h;
    }
    let (three, four) = (T::lit(3.0), T::lit(4.0));
    d[0] = (-three * y[0] + four * y[1] - y[2]) / two_h;
    d[m - 1] = (three * y[m - 1] - four * y[m - 2] + y[m - 3]) / two_h;
    d
}
