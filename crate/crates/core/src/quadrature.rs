//! Composite Gauss–Legendre quadrature in one and two dimensions.
//!
//! Refinement doubles the panel count per axis until two successive
//! estimates agree to the configured relative tolerance.

use std::ops::{Add, Mul};

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature did not stabilise after {panels} panels per axis (last relative change {last_change:e})")]
    Divergence { panels: usize, last_change: f64 },
}

/// Values that can be accumulated by a quadrature rule.
pub trait Integrand<T: Real>: Copy + Zero + Add<Output = Self> + Mul<T, Output = Self> {
    fn magnitude(&self) -> T;
}

impl<T: Real> Integrand<T> for T {
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Real> Integrand<T> for Complex<T> {
    fn magnitude(&self) -> T {
        self.norm()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, refined by Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = T::lit(-x);
            nodes[n - 1 - i] = T::lit(x);
            weights[i] = T::lit(w);
            weights[n - 1 - i] = T::lit(w);
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Composite rule over `[a, b]` split into `panels` equal pieces.
    pub fn composite<V, F>(&self, mut f: F, a: T, b: T, panels: usize) -> V
    where
        V: Integrand<T>,
        F: FnMut(T) -> V,
    {
        let h = (b - a) / T::from_count(panels);
        let half_h = h * T::lit(0.5);
        let mut acc = V::zero();
        for p in 0..panels {
            let mid = a + h * (T::from_count(p) + T::lit(0.5));
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                acc = acc + f(mid + half_h * *x) * (*w * half_h);
            }
        }
        acc
    }

    /// Tensor composite rule over `[ax, bx] x [ay, by]`.
    pub fn composite_2d<V, F>(&self, mut f: F, (ax, bx): (T, T), (ay, by): (T, T), panels: usize) -> V
    where
        V: Integrand<T>,
        F: FnMut(T, T) -> V,
    {
        let hx = (bx - ax) / T::from_count(panels);
        let hy = (by - ay) / T::from_count(panels);
        let (half_x, half_y) = (hx * T::lit(0.5), hy * T::lit(0.5));
        let mut acc = V::zero();
        for px in 0..panels {
            let mx = ax + hx * (T::from_count(px) + T::lit(0.5));
            for (xi, wi) in self.nodes.iter().zip(&self.weights) {
                let x = mx + half_x * *xi;
                for py in 0..panels {
                    let my = ay + hy * (T::from_count(py) + T::lit(0.5));
                    for (yj, wj) in self.nodes.iter().zip(&self.weights) {
                        let y = my + half_y * *yj;
                        acc = acc + f(x, y) * (*wi * *wj * half_x * half_y);
                    }
                }
            }
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Refinement settings shared by the adaptive drivers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Nodes per panel.
    pub order: usize,
    pub initial_panels: usize,
    /// Maximum number of panel doublings.
    pub max_refinements: usize,
    pub rel_tol: f64,
    /// Absolute floor used when the integral itself is close to zero.
    pub abs_tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            order: 16,
            initial_panels: 1,
            max_refinements: 10,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult<V> {
    pub value: V,
    /// Magnitude of the last refinement change.
    pub change: f64,
    pub panels: usize,
}

fn converged<T: Real, V: Integrand<T>>(prev: V, next: V, cfg: &QuadConfig) -> (bool, f64) {
    let diff = (next + prev * T::lit(-1.0)).magnitude().as_f64();
    let scale = next.magnitude().as_f64();
    (diff <= cfg.rel_tol * scale || diff <= cfg.abs_tol, diff)
}

pub fn adaptive_1d<T, V, F>(mut f: F, a: T, b: T, cfg: &QuadConfig) -> Result<QuadResult<V>, QuadratureError>
where
    T: Real,
    V: Integrand<T>,
    F: FnMut(T) -> V,
{
    let rule = GaussLegendre::<T>::new(cfg.order);
    let mut panels = cfg.initial_panels.max(1);
    let mut prev: V = rule.composite(&mut f, a, b, panels);
    let mut last = f64::INFINITY;
    for _ in 0..cfg.max_refinements {
        panels *= 2;
        let next: V = rule.composite(&mut f, a, b, panels);
        let (ok, diff) = converged(prev, next, cfg);
        last = diff;
        if ok {
            return Ok(QuadResult {
                value: next,
                change: diff,
                panels,
            });
        }
        prev = next;
    }
    Err(QuadratureError::Divergence {
        panels,
        last_change: last,
    })
}

pub fn adaptive_2d<T, V, F>(
    mut f: F,
    xr: (T, T),
    yr: (T, T),
    cfg: &QuadConfig,
) -> Result<QuadResult<V>, QuadratureError>
where
    T: Real,
    V: Integrand<T>,
    F: FnMut(T, T) -> V,
{
    let rule = GaussLegendre::<T>::new(cfg.order);
    let mut panels = cfg.initial_panels.max(1);
    let mut prev: V = rule.composite_2d(&mut f, xr, yr, panels);
    let mut last = f64::INFINITY;
    for _ in 0..cfg.max_refinements {
        panels *= 2;
        let next: V = rule.composite_2d(&mut f, xr, yr, panels);
        let (ok, diff) = converged(prev, next, cfg);
        last = diff;
        if ok {
            return Ok(QuadResult {
                value: next,
                change: diff,
                panels,
            });
        }
        prev = next;
    }
    Err(QuadratureError::Divergence {
        panels,
        last_change: last,
    })
}

/// Composite Simpson rule on uniformly spaced samples, falling back to the
/// trapezoid rule on the last interval when the interval count is odd.
pub fn simpson_uniform<T: Real>(values: &[T], h: T) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let intervals = n - 1;
    let even = intervals - intervals % 2;
    let mut acc = T::zero();
    let third = h / T::lit(3.0);
    let mut i = 0;
    while i < even {
        acc = acc + third * (values[i] + T::lit(4.0) * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if even < intervals {
        acc = acc + h * T::lit(0.5) * (values[n - 2] + values[n - 1]);
    }
    acc
}

/// Trapezoid rule on arbitrary (sorted) abscissae.
pub fn trapezoid<T: Real>(xs: &[T], ys: &[T]) -> T {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) * T::lit(0.5))
        .fold(T::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33] {
            let rule = GaussLegendre::<f64>::new(n);
            let s: f64 = rule.weights.iter().sum();
            assert_relative_eq!(s, 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        // n nodes integrate degree 2n-1 exactly.
        let rule = GaussLegendre::<f64>::new(6);
        let v: f64 = rule.composite(|x: f64| x.powi(11) + x.powi(10), -1.0, 1.0, 1);
        assert_relative_eq!(v, 2.0 / 11.0, epsilon = 1e-13);
    }

    #[test]
    fn adaptive_handles_smooth_2d() {
        let r = adaptive_2d(
            |x: f64, y: f64| (x * y).exp(),
            (0.0, 1.0),
            (0.0, 1.0),
            &QuadConfig::default(),
        )
        .unwrap();
        // sum_{k>=0} 1/((k+1)^2 k!)
        let mut exact = 0.0;
        let mut fact = 1.0;
        for k in 0..30 {
            if k > 0 {
                fact *= k as f64;
            }
            exact += 1.0 / (((k + 1) * (k + 1)) as f64 * fact);
        }
        assert_relative_eq!(r.value, exact, epsilon = 1e-12);
    }

    #[test]
    fn simpson_exact_on_cubics() {
        let h = 0.1;
        let ys: Vec<f64> = (0..=10).map(|i| (i as f64 * h).powi(3)).collect();
        assert_relative_eq!(simpson_uniform(&ys, h), 0.25, epsilon = 1e-13);
    }

    #[test]
    fn divergence_reported() {
        let cfg = QuadConfig {
            max_refinements: 1,
            rel_tol: 1e-300,
            abs_tol: 0.0,
            ..QuadConfig::default()
        };
        let r = adaptive_1d(|x: f64| (1.0 / x.max(1e-300)).sin(), 0.0, 1.0, &cfg);
        assert!(matches!(r, Err(QuadratureError::Divergence { .. })));
    }
}
