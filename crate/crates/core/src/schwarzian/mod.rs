//! Schwarzian derivatives of holomorphic maps of the unit disk, their
//! hyperbolic norms, and the classical univalence bounds.

mod bounds;
mod maps;
mod nehari;
mod norms;
mod series;
mod zoo;

pub use bounds::{
    ahlfors_weill_distance, bigdisk_bound, check_bigdisk, pointwise_from_l2, skinning_distance_bound, AhlforsWeill,
    BigdiskCheck, BoundError, SkinningBound,
};
pub use maps::{koebe_inverse, pick_inner_radius, AnalyticMap, Jet, MapError, MapKind, DEFAULT_ORDER};
pub use nehari::{nehari_coefficients, NehariExpansion};
pub use norms::{lp_norm, pointwise_norm, LpExponent, NormConfig, NormError, NormResult, QuadDiffDisk};
pub use series::{PowerSeries, SeriesError};
pub use zoo::{builtin_zoo, load_zoo, ImageDisk, ZooEntry};

use num_complex::Complex;

use crate::scalar::Real;

/// `|f'(z)|` below this is treated as a critical point.
pub const CRITICAL_THRESHOLD: f64 = 1e-12;

/// Schwarzian of a 3-jet: `f'''/f' - (3/2)(f''/f')^2`.
pub fn schwarzian_of_jet<T: Real>(jet: &Jet<T>) -> Result<Complex<T>, MapError> {
    let d1 = jet[1];
    if d1.norm() < T::lit(CRITICAL_THRESHOLD) {
        return Err(MapError::CriticalPoint {
            derivative: d1.norm().as_f64(),
        });
    }
    let r = jet[2] / d1;
    Ok(jet[3] / d1 - r * r * T::lit(1.5))
}

pub fn schwarzian<T: Real>(f: &AnalyticMap<T>, z: Complex<T>) -> Result<Complex<T>, MapError> {
    schwarzian_of_jet(&f.jet(z)?)
}

/// 3-jet of `f o g` at `z` by the chain rule.
pub fn compose_jet<T: Real>(f: &AnalyticMap<T>, g: &AnalyticMap<T>, z: Complex<T>) -> Result<Jet<T>, MapError> {
    let gj = g.jet(z)?;
    let fj = f.jet(gj[0])?;
    let (g1, g2, g3) = (gj[1], gj[2], gj[3]);
    Ok([
        fj[0],
        fj[1] * g1,
        fj[2] * g1 * g1 + fj[1] * g2,
        fj[3] * g1 * g1 * g1 + fj[2] * g1 * g2 * T::lit(3.0) + fj[1] * g3,
    ])
}

/// `|S(f o g)(z) - Sf(g(z)) g'(z)^2 - Sg(z)|` with the left side taken from
/// the chain-rule jet of the composite.
pub fn compose_rule_residual<T: Real>(f: &AnalyticMap<T>, g: &AnalyticMap<T>, z: Complex<T>) -> Result<T, MapError> {
    let lhs = schwarzian_of_jet(&compose_jet(f, g, z)?)?;
    rule_residual(lhs, f, g, z)
}

/// As [`compose_rule_residual`], but the composite is formed by formal
/// series composition (requires `g(0) = 0`).
pub fn compose_rule_residual_series<T: Real>(
    f: &AnalyticMap<T>,
    g: &AnalyticMap<T>,
    z: Complex<T>,
) -> Result<T, MapError> {
    let order = f.order.min(g.order);
    let fg = f.taylor()?.truncate(order).compose(&g.taylor()?.truncate(order))?;
    let r_max = f.r_max.min(g.r_max);
    let lhs = schwarzian(&AnalyticMap::from_series(fg, r_max), z)?;
    rule_residual(lhs, f, g, z)
}

fn rule_residual<T: Real>(
    lhs: Complex<T>,
    f: &AnalyticMap<T>,
    g: &AnalyticMap<T>,
    z: Complex<T>,
) -> Result<T, MapError> {
    let gj = g.jet(z)?;
    let rhs = schwarzian(f, gj[0])? * gj[1] * gj[1] + schwarzian_of_jet(&gj)?;
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    #[test]
    fn identity_and_mobius_vanish() {
        let id = AnalyticMap::<f64>::identity();
        let m = AnalyticMap::mobius(C::new(2.0, 1.0), C::new(0.3, 0.0), C::new(0.5, 0.2), C::new(1.5, 0.0));
        for k in 0..10 {
            let z = C::from_polar(0.09 * k as f64, 0.7 * k as f64);
            assert_eq!(schwarzian(&id, z).unwrap(), C::new(0.0, 0.0));
            assert!(schwarzian(&m, z).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn exp_is_minus_half() {
        let f = AnalyticMap::<f64>::new(MapKind::Exp);
        for z in [C::new(0.0, 0.0), C::new(0.4, -0.7)] {
            let s = schwarzian(&f, z).unwrap();
            assert_relative_eq!(s.re, -0.5, epsilon = 1e-13);
            assert!(s.im.abs() < 1e-13);
        }
    }

    #[test]
    fn koebe_at_origin() {
        let s = schwarzian(&AnalyticMap::<f64>::koebe(), C::new(0.0, 0.0)).unwrap();
        assert_relative_eq!(s.re, -6.0, epsilon = 1e-14);
    }

    #[test]
    fn critical_point_rejected() {
        let f = AnalyticMap::from_series(PowerSeries::from_real(&[0.0, 0.0, 1.0], 8), 0.9);
        assert!(matches!(
            schwarzian(&f, C::new(0.0, 0.0)),
            Err(MapError::CriticalPoint { .. })
        ));
    }

    #[test]
    fn composition_with_mobius_on_either_side() {
        let m = AnalyticMap::mobius(C::new(1.0, 0.0), C::new(0.1, 0.0), C::new(-0.4, 0.0), C::new(1.0, 0.0));
        let k = AnalyticMap::<f64>::koebe();
        let z = C::new(0.2, 0.1);
        assert!(compose_rule_residual(&m, &k, z).unwrap() < 1e-12);
        let fg = schwarzian_of_jet(&compose_jet(&m, &k, z).unwrap()).unwrap();
        assert!((fg - schwarzian(&k, z).unwrap()).norm() < 1e-11);
        assert!(compose_rule_residual(&k, &m, z).unwrap() < 1e-11);
    }
}
