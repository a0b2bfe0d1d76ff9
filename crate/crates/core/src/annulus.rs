//! Strip models of annuli and cusps, Teichmüller and harmonic Beltrami
//! differentials on them, and the Weil–Petersson length estimates.
//!
//! An annulus of modulus `m` is the strip `0 < Im z < pi` modulo
//! `z -> z + pi/m`; a fundamental domain is `[0, pi/m) x (0, pi)`.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::{adaptive_1d, adaptive_2d, QuadConfig, QuadratureError};
use crate::scalar::Real;
use crate::surface_bounds::epsilon_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnnulusError {
    #[error("modulus must be positive, got {0}")]
    BadModulus(f64),
    #[error("{name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("differential has period pi/{differential} but annulus has period pi/{annulus}")]
    PeriodMismatch { annulus: f64, differential: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripAnnulus<T> {
    modulus: T,
}

impl<T: Real> StripAnnulus<T> {
    pub fn new(modulus: T) -> Result<Self, AnnulusError> {
        if !(modulus > T::zero() && modulus.is_finite()) {
            return Err(AnnulusError::BadModulus(modulus.as_f64()));
        }
        Ok(Self { modulus })
    }

    pub fn modulus(&self) -> T {
        self.modulus
    }

    /// Translation length `pi/m`.
    pub fn period(&self) -> T {
        T::PI() / self.modulus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeltramiKind {
    /// Lift identically 1.
    Teichmueller,
    /// Lift `sin^2 y`.
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct BeltramiDatum<T> {
    pub annulus: StripAnnulus<T>,
    pub c: Complex<T>,
    pub kind: BeltramiKind,
}

impl<T: Real> BeltramiDatum<T> {
    pub fn teichmueller(annulus: StripAnnulus<T>, c: Complex<T>) -> Self {
        Self {
            annulus,
            c,
            kind: BeltramiKind::Teichmueller,
        }
    }

    pub fn harmonic(annulus: StripAnnulus<T>, c: Complex<T>) -> Self {
        Self {
            annulus,
            c,
            kind: BeltramiKind::Harmonic,
        }
    }

    /// Value of the lift at height `y` (independent of `x`).
    pub fn lift(&self, y: T) -> Complex<T> {
        match self.kind {
            BeltramiKind::Teichmueller => self.c,
            BeltramiKind::Harmonic => {
                let s = y.sin();
                self.c * (s * s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct FourierMode<T> {
    pub k: i32,
    pub a: Complex<T>,
}

/// `g(z) = a_0 + sum_k a_k e^{2 i k m z}`, holomorphic and `pi/m`-periodic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PeriodicQuadDiff<T> {
    pub modulus: T,
    pub constant: Complex<T>,
    pub modes: Vec<FourierMode<T>>,
}

impl<T: Real> PeriodicQuadDiff<T> {
    pub fn constant(modulus: T, a0: Complex<T>) -> Self {
        Self {
            modulus,
            constant: a0,
            modes: Vec::new(),
        }
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let two_m = self.modulus + self.modulus;
        self.modes.iter().fold(self.constant, |acc, mode| {
            let arg = z * Complex::new(T::zero(), two_m * T::lit(mode.k as f64));
            acc + mode.a * arg.exp()
        })
    }

    /// Seeded random differential with `terms` non-constant modes, `|k| <= kmax`.
    /// Modes with `k < 0` are damped by `e^{-2|k| m pi}` so every term is
    /// bounded by its nominal coefficient on the closed strip.
    pub fn random<R: Rng>(modulus: T, terms: usize, kmax: i32, rng: &mut R) -> Self {
        let unit = |rng: &mut R| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)));
        let constant = unit(rng);
        let modes = (0..terms)
            .map(|_| {
                let mut k = 0;
                while k == 0 {
                    k = rng.gen_range(-kmax..=kmax);
                }
                let mut a = unit(rng);
                if k < 0 {
                    a = a * (-T::lit(2.0 * k.unsigned_abs() as f64) * modulus * T::PI()).exp();
                }
                FourierMode { k, a }
            })
            .collect();
        Self {
            modulus,
            constant,
            modes,
        }
    }

    /// `b(y) = int_0^{pi/m} g(x + i y) dx`.
    pub fn horizontal_integral(&self, y: T, quad: &QuadConfig) -> Result<Complex<T>, AnnulusError> {
        let period = T::PI() / self.modulus;
        let r = adaptive_1d(|x: T| self.eval(Complex::new(x, y)), T::zero(), period, quad)?;
        Ok(r.value)
    }
}

/// Quadrature settings used by the annulus suite.
pub fn annulus_quad() -> QuadConfig {
    QuadConfig {
        order: 20,
        initial_panels: 2,
        max_refinements: 6,
        rel_tol: 1e-12,
        abs_tol: 1e-15,
    }
}

fn check_period<T: Real>(a: &StripAnnulus<T>, phi: &PeriodicQuadDiff<T>) -> Result<(), AnnulusError> {
    if (a.modulus - phi.modulus).abs() > T::epsilon() * T::lit(8.0) * a.modulus {
        return Err(AnnulusError::PeriodMismatch {
            annulus: a.modulus.as_f64(),
            differential: phi.modulus.as_f64(),
        });
    }
    Ok(())
}

/// `<phi, mu> = int lift(mu) g dx dy` over the fundamental domain.
pub fn pairing<T: Real>(
    mu: &BeltramiDatum<T>,
    phi: &PeriodicQuadDiff<T>,
    quad: &QuadConfig,
) -> Result<Complex<T>, AnnulusError> {
    check_period(&mu.annulus, phi)?;
    if mu.c.is_zero() {
        return Ok(Complex::zero());
    }
    let r = adaptive_2d(
        |x: T, y: T| mu.lift(y) * phi.eval(Complex::new(x, y)),
        (T::zero(), mu.annulus.period()),
        (T::zero(), T::PI()),
        quad,
    )?;
    Ok(r.value)
}

/// `|<phi, c mu_t> - <phi, 2c mu_h>|`, which vanishes because
/// `int_0^pi (1 - 2 sin^2 y) dy = 0` and `b(y)` is constant.
pub fn triviality_residual<T: Real>(
    c: Complex<T>,
    annulus: &StripAnnulus<T>,
    phi: &PeriodicQuadDiff<T>,
    quad: &QuadConfig,
) -> Result<T, AnnulusError> {
    let t = pairing(&BeltramiDatum::teichmueller(*annulus, c), phi, quad)?;
    let h = pairing(&BeltramiDatum::harmonic(*annulus, c * T::lit(2.0)), phi, quad)?;
    Ok((t - h).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicNorm<T> {
    /// `2 pi^2 sum |c_i|^2 / m_i`.
    pub bound: T,
    /// `4 sum |c_i|^2 int |mu_h|^2 / sin^2 y dx dy` by quadrature.
    pub direct: T,
}

pub fn harmonic_norm_bound<T: Real>(
    data: &[(Complex<T>, T)],
    quad: &QuadConfig,
) -> Result<HarmonicNorm<T>, AnnulusError> {
    let mut bound = T::zero();
    let mut direct = T::zero();
    for &(c, m) in data {
        let a = StripAnnulus::new(m)?;
        let c2 = c.norm_sqr();
        bound = bound + T::lit(2.0) * T::PI() * T::PI() * c2 / m;
        if c2.is_zero() {
            continue;
        }
        // |sin^2 y|^2 / sin^2 y, extended by its limit 0 at the edges.
        let integrand = |_x: T, y: T| {
            let s2 = y.sin().powi(2);
            if s2 > T::zero() {
                s2 * s2 / s2
            } else {
                T::zero()
            }
        };
        let r = adaptive_2d(integrand, (T::zero(), a.period()), (T::zero(), T::PI()), quad)?;
        direct = direct + T::lit(4.0) * c2 * r.value;
    }
    Ok(HarmonicNorm { bound, direct })
}

/// The cusp `Im z >= 1` modulo `z -> z + 2`, deformed by the affine map that
/// stretches the band `F(m) = {1 <= Im z <= 2m + 1}` onto `F(k m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspDeformation<T> {
    pub modulus: T,
    /// Vertical stretch factor `e^t`.
    pub scale: T,
}

impl<T: Real> CuspDeformation<T> {
    pub fn new(modulus: T, t: T) -> Result<Self, AnnulusError> {
        Self::with_scale(modulus, t.exp())
    }

    pub fn with_scale(modulus: T, scale: T) -> Result<Self, AnnulusError> {
        if !(modulus > T::zero()) {
            return Err(AnnulusError::BadModulus(modulus.as_f64()));
        }
        if !(scale > T::zero()) {
            return Err(AnnulusError::OutOfRange {
                name: "scale",
                value: scale.as_f64(),
                range: "(0, inf)",
            });
        }
        Ok(Self { modulus, scale })
    }

    pub fn image_modulus(&self) -> T {
        self.scale * self.modulus
    }

    /// Modulus of the band `F(m)`: its height over the period 2.
    pub fn band_modulus(m: T) -> T {
        let (bottom, top) = (T::one(), T::lit(2.0) * m + T::one());
        (top - bottom) / T::lit(2.0)
    }

    pub fn apply(&self, z: Complex<T>) -> Complex<T> {
        let top = T::lit(2.0) * self.modulus + T::one();
        let y = if z.im <= top {
            T::one() + self.scale * (z.im - T::one())
        } else {
            z.im + T::lit(2.0) * self.modulus * (self.scale - T::one())
        };
        Complex::new(z.re, y)
    }

    /// Beltrami coefficient of the stretch on the band: `(1 - e^t)/(1 + e^t)`.
    pub fn beltrami(&self) -> T {
        (T::one() - self.scale) / (T::one() + self.scale)
    }

    /// Derivative of the coefficient in `t` at `t = 0`.
    pub fn infinitesimal_beltrami() -> T {
        -T::lit(0.5)
    }

    /// Follow with a deformation of the image cusp by factor `scale`.
    pub fn then(&self, scale: T) -> Result<Self, AnnulusError> {
        Self::with_scale(self.image_modulus(), scale)
    }
}

/// `m = (1/sinh(l/2) - 1)/2` for `0 < l < 2 arcsinh(1)`.
pub fn cusp_modulus_from_length<T: Real>(l: T) -> Result<T, AnnulusError> {
    let e2 = epsilon_2::<T>();
    if !(l > T::zero() && l < e2 + e2) {
        return Err(AnnulusError::OutOfRange {
            name: "length",
            value: l.as_f64(),
            range: "(0, 2 arcsinh(1))",
        });
    }
    Ok((T::one() / (l * T::lit(0.5)).sinh() - T::one()) * T::lit(0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WpPathBound<T> {
    /// `2 pi sqrt(sum 1/m_i)`.
    pub closed_form: T,
    /// `int_0^inf pi sqrt(sum 1/(m_i e^t)) dt` by quadrature.
    pub quadrature: T,
}

pub fn wp_path_bound<T: Real>(moduli: &[T]) -> Result<WpPathBound<T>, AnnulusError> {
    for &m in moduli {
        if !(m > T::zero()) {
            return Err(AnnulusError::BadModulus(m.as_f64()));
        }
    }
    let s: T = moduli.iter().map(|&m| T::one() / m).sum();
    let closed_form = T::TAU() * s.sqrt();
    // t = u/(1 - u) maps [0, 1) onto [0, inf).
    let integrand = |u: T| {
        let one_minus = T::one() - u;
        let t = u / one_minus;
        T::PI() * (s * (-t).exp()).sqrt() / (one_minus * one_minus)
    };
    let cfg = QuadConfig {
        order: 20,
        initial_panels: 4,
        max_refinements: 8,
        rel_tol: 1e-13,
        abs_tol: 1e-15,
    };
    let r = adaptive_1d(integrand, T::zero(), T::one(), &cfg)?;
    Ok(WpPathBound {
        closed_form,
        quadrature: r.value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WpEstimate<T> {
    pub value: T,
    /// `wp_path_bound` evaluated at the cusp moduli of the given lengths.
    pub path_bound: T,
    pub dominates: bool,
}

/// `2 pi sqrt(2 sinh(l0/2) / (l0 (1 - sinh(l0/2)))) sqrt(sum l_i)`.
pub fn wp_estimate<T: Real>(l0: T, lengths: &[T]) -> Result<WpEstimate<T>, AnnulusError> {
    let s0 = (l0 * T::lit(0.5)).sinh();
    if !(l0 > T::zero() && s0 < T::one()) {
        return Err(AnnulusError::OutOfRange {
            name: "l0",
            value: l0.as_f64(),
            range: "(0, 2 arcsinh(1))",
        });
    }
    for &l in lengths {
        if !(l >= T::zero() && l <= l0) {
            return Err(AnnulusError::OutOfRange {
                name: "length",
                value: l.as_f64(),
                range: "[0, l0]",
            });
        }
    }
    let total: T = lengths.iter().copied().sum();
    let prefactor = T::TAU() * (T::lit(2.0) * s0 / (l0 * (T::one() - s0))).sqrt();
    let value = prefactor * total.sqrt();
    let positive: Vec<T> = lengths.iter().copied().filter(|&l| l > T::zero()).collect();
    let path_bound = if positive.is_empty() {
        T::zero()
    } else {
        let moduli = positive
            .iter()
            .map(|&l| cusp_modulus_from_length(l))
            .collect::<Result<Vec<_>, _>>()?;
        let s: T = moduli.iter().map(|&m| T::one() / m).sum();
        T::TAU() * s.sqrt()
    };
    let slack = T::one() + T::lit(1e-12);
    Ok(WpEstimate {
        value,
        path_bound,
        dominates: path_bound <= value * slack,
    })
}

/// Modulus `pi / l` of the annular cover with core length `l`.
pub fn annulus_modulus_from_core<T: Real>(l: T) -> Result<T, AnnulusError> {
    if !(l > T::zero()) {
        return Err(AnnulusError::OutOfRange {
            name: "length",
            value: l.as_f64(),
            range: "(0, inf)",
        });
    }
    Ok(T::PI() / l)
}

/// A JSON-loadable collection of test differentials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DifferentialSuite<T> {
    pub coefficients: Vec<Complex<T>>,
    pub differentials: Vec<PeriodicQuadDiff<T>>,
}
