//! Laurent coefficients of the exterior map `g(z) = f'(0) / f(1/z)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::maps::{AnalyticMap, MapError};
use super::series::{PowerSeries, SeriesError};
use crate::scalar::Real;

/// `g(z) = z + b_0 + b_1/z + b_2/z^2 + ...`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct NehariExpansion<T> {
    pub b: Vec<Complex<T>>,
}

impl<T: Real> NehariExpansion<T> {
    /// `sum n |b_n|^2`, bounded by 1 for univalent maps.
    pub fn area_sum(&self) -> T {
        self.b
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| T::from_count(n) * c.norm_sqr())
            .sum()
    }

    /// Euclidean area `pi rho^2 - pi sum n |b_n|^2 rho^{-2n}` enclosed by the
    /// image of `|z| = rho` under `g`.
    pub fn area(&self, rho: T) -> T {
        let tail: T = self
            .b
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| T::from_count(n) * c.norm_sqr() * rho.powi(-2 * n as i32))
            .sum();
        T::PI() * (rho * rho - tail)
    }

    /// `Sf(0) = -6 b_1`.
    pub fn schwarzian_at_zero(&self) -> Complex<T> {
        self.b.get(1).copied().unwrap_or_default() * T::lit(-6.0)
    }
}

/// `b_0 .. b_{n_max}` by series inversion. The map is translated so that
/// `f(0) = 0`, which leaves the Schwarzian unchanged.
pub fn nehari_coefficients<T: Real>(f: &AnalyticMap<T>, n_max: usize) -> Result<NehariExpansion<T>, MapError> {
    let order = f.order.max(n_max + 2);
    let s = f.clone().with_order(order).taylor()?;
    let a1 = s.coeff(1);
    if a1.norm() <= T::epsilon() * T::lit(16.0) {
        return Err(SeriesError::VanishingLeading.into());
    }
    // h(w) = (f(w) - f(0)) / (a_1 w) = 1 + (a_2/a_1) w + ...
    let h = PowerSeries::new(s.coeffs()[1..].iter().map(|&c| c / a1).collect(), n_max + 1);
    let c = h.reciprocal()?;
    Ok(NehariExpansion {
        b: (0..=n_max).map(|n| c.coeff(n + 1)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzian::{schwarzian, MapKind};
    use approx::assert_relative_eq;

    #[test]
    fn identity_has_no_coefficients() {
        let e = nehari_coefficients(&AnalyticMap::<f64>::identity(), 6).unwrap();
        assert!(e.b.iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn koebe_exterior_map() {
        // g(z) = (z - 1)^2 / z = z - 2 + 1/z
        let e = nehari_coefficients(&AnalyticMap::<f64>::koebe(), 5).unwrap();
        assert_relative_eq!(e.b[0].re, -2.0, epsilon = 1e-14);
        assert_relative_eq!(e.b[1].re, 1.0, epsilon = 1e-14);
        assert!(e.b[2..].iter().all(|c| c.norm() < 1e-14));
        assert_relative_eq!(e.area_sum(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.schwarzian_at_zero().re, -6.0, epsilon = 1e-13);
    }

    #[test]
    fn rejects_critical_origin() {
        let f = AnalyticMap::from_series(PowerSeries::from_real(&[0.0, 0.0, 1.0], 6), 0.5);
        assert!(nehari_coefficients(&f, 3).is_err());
    }

    #[test]
    fn exp_matches_schwarzian() {
        let f = AnalyticMap::<f64>::new(MapKind::Exp);
        let e = nehari_coefficients(&f, 10).unwrap();
        let s0 = schwarzian(&f, Complex::new(0.0, 0.0)).unwrap();
        assert!((e.schwarzian_at_zero() - s0).norm() < 1e-13);
        assert!(e.area_sum() <= 1.0);
    }
}
