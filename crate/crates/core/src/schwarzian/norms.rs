//! Hyperbolic pointwise and L^p norms of quadratic differentials on the disk.
//!
//! The hyperbolic area form on the disk is `4 |dz|^2 / (1 - |z|^2)^2`, so the
//! pointwise norm of `phi dz^2` is `|phi(z)| (1 - |z|^2)^2 / 4`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::maps::{AnalyticMap, MapError};
use super::series::PowerSeries;
use crate::quadrature::{adaptive_2d, QuadConfig, QuadratureError};
use crate::scalar::Real;

type PhiFn<T> = Arc<dyn Fn(Complex<T>) -> Result<Complex<T>, MapError> + Send + Sync>;

/// Holomorphic quadratic differential `phi(z) dz^2` on the disk.
#[derive(Clone)]
pub enum QuadDiffDisk<T> {
    Constant(Complex<T>),
    Series(PowerSeries<T>),
    Schwarzian(AnalyticMap<T>),
    Function(PhiFn<T>),
}

impl<T: Real> fmt::Debug for QuadDiffDisk<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Series(s) => write!(f, "Series(order {})", s.order()),
            Self::Schwarzian(m) => write!(f, "Schwarzian({})", m.tag()),
            Self::Function(_) => write!(f, "Function"),
        }
    }
}

impl<T: Real> QuadDiffDisk<T> {
    pub fn function<F>(f: F) -> Self
    where
        F: Fn(Complex<T>) -> Result<Complex<T>, MapError> + Send + Sync + 'static,
    {
        Self::Function(Arc::new(f))
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>, MapError> {
        match self {
            Self::Constant(c) => Ok(*c),
            Self::Series(s) => Ok(s.eval(z)),
            Self::Schwarzian(m) => super::schwarzian(m, z),
            Self::Function(f) => f(z),
        }
    }
}

/// `|phi(z)| (1 - |z|^2)^2 / 4`; callers must keep `|z| < 1`.
pub fn pointwise_norm<T: Real>(phi: &QuadDiffDisk<T>, z: Complex<T>) -> Result<T, MapError> {
    let w = T::one() - z.norm_sqr();
    Ok(phi.eval(z)?.norm() * w * w / T::lit(4.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpExponent {
    One,
    Two,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormConfig {
    /// Euclidean cutoff radius of the integration disk.
    pub radius: f64,
    pub quad: QuadConfig,
    /// Radial and angular sample counts for the supremum grid.
    pub sup_grid: (usize, usize),
    /// Number of best grid points refined by local compass search.
    pub sup_polish: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            radius: 0.99,
            quad: QuadConfig {
                order: 16,
                initial_panels: 2,
                max_refinements: 6,
                rel_tol: 1e-10,
                abs_tol: 1e-14,
            },
            sup_grid: (64, 128),
            sup_polish: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult<T> {
    pub value: T,
    /// Last refinement change (quadrature) or polish gain (supremum).
    pub change: f64,
    /// Location of the supremum, for `p = inf`.
    pub argmax: Option<(T, T)>,
}

#[derive(Debug, thiserror::Error)]
pub enum NormError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// L^p norm of the pointwise norm over `|z| <= cfg.radius` against
/// hyperbolic area.
pub fn lp_norm<T: Real>(phi: &QuadDiffDisk<T>, p: LpExponent, cfg: &NormConfig) -> Result<NormResult<T>, NormError> {
    let r_cut = T::lit(cfg.radius);
    match p {
        LpExponent::Inf => sup_norm(phi, r_cut, cfg),
        LpExponent::One | LpExponent::Two => {
            let two_pi = T::PI() + T::PI();
            let mut failure: Option<MapError> = None;
            let power = if p == LpExponent::One { 1 } else { 2 };
            let integrand = |r: T, th: T| -> T {
                let z = Complex::from_polar(r, th);
                let w = T::one() - r * r;
                match pointwise_norm(phi, z) {
                    Ok(v) => v.powi(power) * T::lit(4.0) * r / (w * w),
                    Err(e) => {
                        failure.get_or_insert(e);
                        T::zero()
                    }
                }
            };
            let res = adaptive_2d(integrand, (T::zero(), r_cut), (T::zero(), two_pi), &cfg.quad)?;
            if let Some(e) = failure {
                return Err(e.into());
            }
            let value = if power == 1 { res.value } else { res.value.sqrt() };
            Ok(NormResult {
                value,
                change: res.change,
                argmax: None,
            })
        }
    }
}

fn sup_norm<T: Real>(phi: &QuadDiffDisk<T>, r_cut: T, cfg: &NormConfig) -> Result<NormResult<T>, NormError> {
    let (nr, nt) = cfg.sup_grid;
    let two_pi = T::PI() + T::PI();
    let eval = |r: T, th: T| pointwise_norm(phi, Complex::from_polar(r, th));
    let mut samples: Vec<(T, T, T)> = Vec::with_capacity(nr * nt + 1);
    samples.push((T::zero(), T::zero(), eval(T::zero(), T::zero())?));
    for i in 1..=nr {
        let r = r_cut * T::from_count(i) / T::from_count(nr);
        for j in 0..nt {
            let th = two_pi * T::from_count(j) / T::from_count(nt);
            samples.push((r, th, eval(r, th)?));
        }
    }
    samples.sort_by(|a, b| b.2.partial_cmp(&a.2).unwrap_or(std::cmp::Ordering::Equal));
    let grid_best = samples[0];
    let mut best = grid_best;
    for &(r0, t0, v0) in samples.iter().take(cfg.sup_polish.max(1)) {
        let cand = compass_search(
            &eval,
            (r0, t0, v0),
            r_cut,
            r_cut / T::from_count(nr),
            two_pi / T::from_count(nt),
        )?;
        if cand.2 > best.2 {
            best = cand;
        }
    }
    Ok(NormResult {
        value: best.2,
        change: (best.2 - grid_best.2).as_f64(),
        argmax: Some((best.0, best.1)),
    })
}

// Maximise over (r, theta) with r clamped to [0, r_cut].
fn compass_search<T, F>(eval: &F, start: (T, T, T), r_cut: T, dr: T, dt: T) -> Result<(T, T, T), MapError>
where
    T: Real,
    F: Fn(T, T) -> Result<T, MapError>,
{
    let (mut r, mut t, mut v) = start;
    let (mut sr, mut st) = (dr, dt);
    let floor = T::lit(1e-12);
    while sr > floor * r_cut || st > floor {
        let mut moved = false;
        for (a, b) in [(sr, T::zero()), (-sr, T::zero()), (T::zero(), st), (T::zero(), -st)] {
            let rn = (r + a).max(T::zero()).min(r_cut);
            let tn = t + b;
            let vn = eval(rn, tn)?;
            if vn > v {
                r = rn;
                t = tn;
                v = vn;
                moved = true;
            }
        }
        if !moved {
            sr = sr * T::lit(0.5);
            st = st * T::lit(0.5);
        }
    }
    Ok((r, t, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    #[test]
    fn constant_at_origin() {
        let phi = QuadDiffDisk::Constant(C::new(-6.0, 0.0));
        assert_relative_eq!(pointwise_norm(&phi, C::new(0.0, 0.0)).unwrap(), 1.5);
        assert!(pointwise_norm(&phi, C::new(0.999999, 0.0)).unwrap() < 1e-10);
    }

    #[test]
    fn l2_constant_closed_form() {
        let c = C::new(1.5, -2.0);
        let cfg = NormConfig {
            radius: 0.8,
            ..NormConfig::default()
        };
        let got = lp_norm(&QuadDiffDisk::Constant(c), LpExponent::Two, &cfg)
            .unwrap()
            .value;
        let r2: f64 = 0.64;
        let exact = (c.norm_sqr() * std::f64::consts::PI * (1.0 - (1.0 - r2).powi(3)) / 12.0).sqrt();
        assert_relative_eq!(got, exact, max_relative = 1e-10);
    }

    #[test]
    fn zero_has_zero_norms() {
        let phi = QuadDiffDisk::Constant(C::new(0.0, 0.0));
        for p in [LpExponent::One, LpExponent::Two, LpExponent::Inf] {
            assert_eq!(lp_norm(&phi, p, &NormConfig::default()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn koebe_sup_is_three_halves() {
        let phi = QuadDiffDisk::Schwarzian(AnalyticMap::<f64>::koebe());
        let r = lp_norm(&phi, LpExponent::Inf, &NormConfig::default()).unwrap();
        assert!((r.value - 1.5).abs() < 1e-3);
    }
}
