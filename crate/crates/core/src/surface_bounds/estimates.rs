//! Collar geometry and the drilling / progress / near-node estimates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ledger::{ConstantsLedger, LedgerError};
use super::topology::SurfaceTopology;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimateError {
    #[error("distance {distance} exceeds collar width {width}")]
    OutOfCollar { distance: f64, width: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{count} lengths are at most Lambda = {lambda}, but a surface with n = {n} has at most n short curves")]
    TooManyShortCurves { count: usize, n: usize, lambda: f64 },
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

/// Width `arcsinh(1 / sinh(l/2))` of the standard collar about a geodesic of
/// length `l > 0`.
pub fn collar_width<T: Real>(l: T) -> T {
    (T::one() / (l * T::lit(0.5)).sinh()).asinh()
}

/// Injectivity radius at distance `d` from the core: `sinh(inj) = sinh(l/2) cosh(d)`.
pub fn collar_injectivity<T: Real>(l: T, d: T) -> Result<T, EstimateError> {
    let w = collar_width(l);
    if d < T::zero() || d > w {
        return Err(EstimateError::OutOfCollar {
            distance: d.as_f64(),
            width: w.as_f64(),
        });
    }
    Ok(((l * T::lit(0.5)).sinh() * d.cosh()).asinh())
}

/// `Lambda = l2^{2/(2n+3)}`.
pub fn drilling_scale<T: Real>(l2norm: T, n: usize) -> T {
    l2norm.powf(T::lit(2.0) / T::from_count(2 * n + 3))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DrillingSimplex<T> {
    pub k: usize,
    pub lambda: T,
    pub l_cut: T,
    /// Indices into the input length list.
    pub tau: Vec<usize>,
}

/// Smallest `k` in `0..=n` whose window `(Lambda^{2k+3}, Lambda^{2k+1}]`
/// holds no length, and the curves at or below the window.
pub fn select_drilling_simplex<T: Real>(
    lengths: &[T],
    l2norm: T,
    topology: &SurfaceTopology,
    ledger: &ConstantsLedger<T>,
) -> Result<DrillingSimplex<T>, EstimateError> {
    let n = topology.curve_count();
    let lambda = drilling_scale(l2norm, n);
    if lambda > ledger.inputs.l_drill {
        return Err(EstimateError::PreconditionViolated(format!(
            "Lambda = {} exceeds l_drill = {}",
            lambda.as_f64(),
            ledger.inputs.l_drill.as_f64()
        )));
    }
    if let Some(bad) = lengths.iter().find(|l| !(**l >= T::zero())) {
        return Err(EstimateError::PreconditionViolated(format!(
            "negative length {}",
            bad.as_f64()
        )));
    }
    let short = lengths.iter().filter(|&&l| l <= lambda).count();
    if short > n {
        return Err(EstimateError::TooManyShortCurves {
            count: short,
            n,
            lambda: lambda.as_f64(),
        });
    }
    for k in 0..=n {
        let lo = lambda.powi(2 * k as i32 + 3);
        let hi = lambda.powi(2 * k as i32 + 1);
        if !lengths.iter().any(|&l| l > lo && l <= hi) {
            let tau = (0..lengths.len()).filter(|&i| lengths[i] <= lo).collect();
            return Ok(DrillingSimplex {
                k,
                lambda,
                l_cut: lo,
                tau,
            });
        }
    }
    // n + 1 disjoint windows cannot all be occupied by at most n lengths.
    unreachable!("pigeonhole: at most {n} short lengths for {} windows", n + 1)
}

/// `C0 sqrt(n) Lambda`, the pointwise bound off the standard collars after drilling.
pub fn drill_pointwise_bound<T: Real>(
    l2norm: T,
    topology: &SurfaceTopology,
    ledger: &ConstantsLedger<T>,
) -> Result<T, EstimateError> {
    let n = topology.curve_count();
    let lambda = drilling_scale(l2norm, n);
    if lambda > ledger.inputs.l_drill {
        return Err(EstimateError::PreconditionViolated(format!(
            "Lambda = {} exceeds l_drill",
            lambda.as_f64()
        )));
    }
    Ok(ledger.c0 * T::from_count(n).sqrt() * lambda)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProgressBounds<T> {
    pub wp_move: T,
    pub linf_hat: T,
}

pub fn progress_bounds<T: Real>(
    l2norm: T,
    topology: &SurfaceTopology,
    ledger: &ConstantsLedger<T>,
) -> Result<ProgressBounds<T>, EstimateError> {
    let n = topology.curve_count();
    let lambda = drilling_scale(l2norm, n);
    let cap = ledger.inputs.l_drill.min(T::lit(2.0) * T::lit(0.5).asinh());
    if lambda > cap {
        return Err(EstimateError::PreconditionViolated(format!(
            "Lambda = {} exceeds min(l_drill, 2 arcsinh(1/2)) = {}",
            lambda.as_f64(),
            cap.as_f64()
        )));
    }
    let root = l2norm.powf(T::one() / T::from_count(2 * n + 3)) * T::from_count(n).sqrt();
    Ok(ProgressBounds {
        wp_move: T::TAU() / T::lit(0.5).asinh().sqrt() * root,
        linf_hat: ledger.c1 * root,
    })
}

/// The chain of estimates evaluated at `||phi||_2 = A(eps, S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearnodeChain<T> {
    pub epsilon: T,
    pub a: T,
    pub lambda: T,
    pub lambda_below_l_drill: bool,
    /// `C1 K0 eps`, equal to `eps / (4 sqrt(3 pi))`.
    pub c1_k0_eps: T,
    pub below_third: bool,
    /// Implied bound on the drilled sup norm.
    pub linf_hat: T,
    pub linf_within: bool,
}

impl<T: Real> NearnodeChain<T> {
    pub fn holds(&self) -> bool {
        self.lambda_below_l_drill && self.below_third && self.linf_within
    }
}

pub fn nearnode_threshold<T: Real>(eps: T, ledger: &ConstantsLedger<T>) -> Result<T, EstimateError> {
    Ok(ledger.a_epsilon(eps)?)
}

pub fn nearnode_chain<T: Real>(eps: T, ledger: &ConstantsLedger<T>) -> Result<NearnodeChain<T>, EstimateError> {
    let a = ledger.a_epsilon(eps)?;
    let n = ledger.n;
    let lambda = drilling_scale(a, n);
    let c1_k0_eps = ledger.c1 * ledger.k0 * eps;
    let linf_hat = ledger.c1 * T::from_count(n).sqrt() * a.powf(T::one() / T::from_count(2 * n + 3));
    let slack = T::one() + T::lit(1e-12);
    let bound = eps / (T::lit(4.0) * (T::lit(3.0) * T::PI()).sqrt());
    Ok(NearnodeChain {
        epsilon: eps,
        a,
        lambda,
        lambda_below_l_drill: lambda < ledger.inputs.l_drill,
        c1_k0_eps,
        below_third: c1_k0_eps <= slack / T::lit(3.0),
        linf_hat,
        linf_within: linf_hat <= bound * slack,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainBounds<T> {
    pub lower: T,
    pub upper: T,
    /// `lower <= upper` whenever `lower > 0`.
    pub consistent: bool,
}

/// `A(S)(d - delta) <= V_R(Y) - V_R(M_geod) <= 3 sqrt(pi |chi| / 2) d`.
pub fn main_theorem_bounds<T: Real>(topology: &SurfaceTopology, ledger: &ConstantsLedger<T>, d_wp: T) -> MainBounds<T> {
    let lower = ledger.a_surface * (d_wp - ledger.delta);
    let chi = T::from_count(topology.abs_euler());
    let upper = T::lit(3.0) * (T::PI() * chi * T::lit(0.5)).sqrt() * d_wp;
    MainBounds {
        lower,
        upper,
        consistent: lower <= T::zero() || lower <= upper,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface_bounds::LedgerInputs;
    use approx::assert_relative_eq;

    fn setup(g: u32) -> (SurfaceTopology, ConstantsLedger<f64>) {
        let s = SurfaceTopology::closed(g).unwrap();
        let l = ConstantsLedger::new(LedgerInputs::default(), &s).unwrap();
        (s, l)
    }

    #[test]
    fn collar_values() {
        let e2 = 1f64.asinh();
        assert_relative_eq!(collar_width(2.0 * e2), e2, epsilon = 1e-15);
        // arcsinh(x) = ln(x + sqrt(x^2 + 1)) with x = 2 / (e - 1/e)
        let x = 2.0 / (1f64.exp() - (-1f64).exp());
        assert_relative_eq!(collar_width(2.0f64), (x + (x * x + 1.0).sqrt()).ln(), epsilon = 1e-15);
        assert!((collar_width(2.0f64) - 0.77194).abs() < 1e-5);
        assert!(collar_width(1e-8) > 19.0);
        assert_relative_eq!(collar_injectivity(0.6, 0.0).unwrap(), 0.3, epsilon = 1e-15);
        assert!(collar_injectivity(0.6, collar_width(0.6) + 1e-9).is_err());
    }

    #[test]
    fn simplex_empty_and_shifted() {
        let (s, l) = setup(2);
        let l2 = 0.5f64.powi(9);
        let lam = drilling_scale(l2, 3);
        assert_relative_eq!(lam, 0.25, epsilon = 1e-14);
        let r = select_drilling_simplex(&[1.0, 2.0], l2, &s, &l).unwrap();
        assert_eq!((r.k, r.tau.len()), (0, 0));
        let r = select_drilling_simplex(&[lam * lam, 1.0], l2, &s, &l).unwrap();
        assert_eq!(r.k, 1);
        assert!(r.tau.is_empty());
        assert!(select_drilling_simplex(&[0.01, 0.02, 0.03, 0.04], l2, &s, &l).is_err());
    }

    #[test]
    fn drill_bound_example() {
        let (s, l) = setup(2);
        let v = drill_pointwise_bound(1e-9, &s, &l).unwrap();
        assert_relative_eq!(
            v,
            2.0 * 2f64.sqrt() * 3f64.sqrt() * 1e-9f64.powf(2.0 / 9.0),
            epsilon = 1e-14
        );
    }

    #[test]
    fn main_bounds_genus_two() {
        let (s, l) = setup(2);
        let b = main_theorem_bounds(&s, &l, 10.0);
        assert!(b.lower > 0.0 && b.lower < b.upper && b.consistent);
        let v = main_theorem_bounds(&s, &l, 2.0);
        assert!(v.lower <= 0.0 && v.upper >= 0.0);
    }
}
