//! Scalar bounds on Schwarzian norms and the distances they control.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::maps::{AnalyticMap, MapError};
use super::norms::{pointwise_norm, QuadDiffDisk};
use crate::scalar::Real;
use crate::surface_bounds::epsilon_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("{name} = {value} outside the admissible range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
}

fn out_of_range<T: Real>(name: &'static str, value: T, range: &'static str) -> BoundError {
    BoundError::OutOfRange {
        name,
        value: value.as_f64(),
        range,
    }
}

/// `(3/2) sech(r/2)`: the pointwise Schwarzian bound at a point whose image
/// contains a hyperbolic disk of radius `r`. `r = 0` is Kraus–Nehari and
/// `r = inf` gives 0.
pub fn bigdisk_bound<T: Real>(r: T) -> T {
    debug_assert!(r >= T::zero());
    T::lit(1.5) / (r * T::lit(0.5)).cosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BigdiskCheck<T> {
    pub norm_at_zero: T,
    pub bound: T,
    pub holds: bool,
}

/// Compares `||Sf(0)||` with [`bigdisk_bound`] for a map whose image contains
/// the hyperbolic disk of radius `r` about `f(0)`.
pub fn check_bigdisk<T: Real>(f: &AnalyticMap<T>, r: T, slack: T) -> Result<BigdiskCheck<T>, MapError> {
    let norm_at_zero = pointwise_norm(&QuadDiffDisk::Schwarzian(f.clone()), Complex::new(T::zero(), T::zero()))?;
    let bound = bigdisk_bound(r);
    Ok(BigdiskCheck {
        norm_at_zero,
        bound,
        holds: norm_at_zero <= bound + slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AhlforsWeill<T> {
    /// `(1/2) log((1 + 2t)/(1 - 2t))`.
    pub distance: T,
    /// `3t`, reported only for `t <= 1/3`.
    pub linear_bound: Option<T>,
}

pub fn ahlfors_weill_distance<T: Real>(t: T) -> Result<AhlforsWeill<T>, BoundError> {
    if !(t >= T::zero() && t < T::lit(0.5)) {
        return Err(out_of_range("t", t, "[0, 1/2)"));
    }
    let two_t = t + t;
    let distance = ((T::one() + two_t) / (T::one() - two_t)).ln() * T::lit(0.5);
    let linear_bound = (t <= T::one() / T::lit(3.0)).then(|| T::lit(3.0) * t);
    Ok(AhlforsWeill { distance, linear_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkinningBound<T> {
    pub teich: T,
    pub wp: T,
}

/// Teichmüller bound `3t/(1 - lambda)` and its Weil–Petersson counterpart
/// `sqrt(area) * teich`.
pub fn skinning_distance_bound<T: Real>(t: T, lambda: T, area: T) -> Result<SkinningBound<T>, BoundError> {
    if !(t >= T::zero() && t <= T::one() / T::lit(3.0)) {
        return Err(out_of_range("t", t, "[0, 1/3]"));
    }
    if !(lambda >= T::zero() && lambda < T::one()) {
        return Err(out_of_range("lambda", lambda, "[0, 1)"));
    }
    if !(area > T::zero()) {
        return Err(out_of_range("area", area, "(0, inf)"));
    }
    let teich = T::lit(3.0) * t / (T::one() - lambda);
    Ok(SkinningBound {
        teich,
        wp: area.sqrt() * teich,
    })
}

/// `l2 / sqrt(min(inj, eps_2))`.
pub fn pointwise_from_l2<T: Real>(l2: T, inj: T) -> T {
    l2 / inj.min(epsilon_2()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bigdisk_values() {
        assert_eq!(bigdisk_bound(0.0), 1.5);
        assert_eq!(bigdisk_bound(f64::INFINITY), 0.0);
        assert_relative_eq!(bigdisk_bound(2.0), 1.5 / 1f64.cosh(), epsilon = 1e-15);
        assert!((bigdisk_bound(2.0f64) - 0.97208).abs() < 1e-5);
    }

    #[test]
    fn ahlfors_weill_third() {
        let a = ahlfors_weill_distance(1.0 / 3.0).unwrap();
        assert_relative_eq!(a.distance, 0.5 * 5f64.ln(), epsilon = 1e-15);
        assert_eq!(a.linear_bound, Some(1.0));
        assert!(ahlfors_weill_distance(0.4).unwrap().linear_bound.is_none());
        assert!(ahlfors_weill_distance(0.5).is_err());
        assert_eq!(ahlfors_weill_distance(0.0).unwrap().distance, 0.0);
    }

    #[test]
    fn skinning_example() {
        let b = skinning_distance_bound(1.0 / 3.0, 0.5, 4.0 * std::f64::consts::PI).unwrap();
        assert_relative_eq!(b.teich, 2.0, epsilon = 1e-15);
        assert!((b.wp - 7.090).abs() < 1e-3);
        assert!(skinning_distance_bound(0.34, 0.5, 1.0).is_err());
        assert!(skinning_distance_bound(0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn pointwise_from_l2_cases() {
        assert_eq!(pointwise_from_l2(0.0, 0.3), 0.0);
        assert_relative_eq!(pointwise_from_l2(1.0, 0.25), 2.0);
        assert_relative_eq!(pointwise_from_l2(1.0, 5.0), 1.0 / 1f64.asinh().sqrt());
    }
}
