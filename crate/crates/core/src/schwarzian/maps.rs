//! Holomorphic maps of the disk: closed forms with exact 3-jets, plus a
//! truncated power-series fallback.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::series::{PowerSeries, SeriesError};
use crate::scalar::Real;

pub const DEFAULT_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("|z| = {modulus} exceeds validity radius {r_max}")]
    OutsideRadius { modulus: f64, r_max: f64 },
    #[error("critical point: |f'(z)| = {derivative:e} below threshold")]
    CriticalPoint { derivative: f64 },
    #[error("pole or branch point of the closed form at z")]
    Singular,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Closed form of a map. Parameters are stored in the manifest layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case", bound = "T: Real")]
pub enum MapKind<T> {
    Identity,
    /// `e^{i angle} z`.
    Rotation {
        angle: T,
    },
    /// `factor * z` with real factor.
    Scale {
        factor: T,
    },
    /// `(a z + b) / (c z + d)`.
    Mobius {
        a: Complex<T>,
        b: Complex<T>,
        c: Complex<T>,
        d: Complex<T>,
    },
    /// `z / (1 - e^{i angle} z)^2`.
    Koebe {
        angle: T,
    },
    /// `e^z - 1`.
    Exp,
    /// `(1/2) log((1 + z)/(1 - z))`, onto a horizontal strip.
    Strip,
    /// Pick slit map `k^{-1}(s k(z))` with `k` the Koebe function, `0 < s <= 1`.
    Pick {
        s: T,
    },
    /// Arbitrary truncated series.
    Custom {
        series: PowerSeries<T>,
    },
}

/// Values `[f, f', f'', f''']` at a point.
pub type Jet<T> = [Complex<T>; 4];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AnalyticMap<T> {
    pub kind: MapKind<T>,
    /// Evaluation is refused for `|z| > r_max`.
    pub r_max: T,
    /// Truncation order for the series view.
    pub order: usize,
}

fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

impl<T: Real> AnalyticMap<T> {
    pub fn new(kind: MapKind<T>) -> Self {
        let r_max = match &kind {
            // Interior of the disk only; the boundary carries singularities.
            MapKind::Koebe { .. } | MapKind::Strip | MapKind::Pick { .. } | MapKind::Custom { .. } => {
                T::one() - T::lit(1e-12)
            }
            _ => T::one(),
        };
        Self {
            kind,
            r_max,
            order: DEFAULT_ORDER,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_radius(mut self, r_max: T) -> Self {
        self.r_max = r_max;
        self
    }

    pub fn identity() -> Self {
        Self::new(MapKind::Identity)
    }

    pub fn koebe() -> Self {
        Self::new(MapKind::Koebe { angle: T::zero() })
    }

    pub fn mobius(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self::new(MapKind::Mobius { a, b, c, d })
    }

    pub fn from_series(series: PowerSeries<T>, r_max: T) -> Self {
        let order = series.order();
        Self {
            kind: MapKind::Custom { series },
            r_max,
            order,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            MapKind::Identity => "identity",
            MapKind::Rotation { .. } => "rotation",
            MapKind::Scale { .. } => "scale",
            MapKind::Mobius { .. } => "mobius",
            MapKind::Koebe { .. } => "koebe",
            MapKind::Exp => "exp",
            MapKind::Strip => "strip",
            MapKind::Pick { .. } => "pick",
            MapKind::Custom { .. } => "custom",
        }
    }

    fn check_radius(&self, z: Complex<T>) -> Result<(), MapError> {
        if z.norm() > self.r_max {
            return Err(MapError::OutsideRadius {
                modulus: z.norm().as_f64(),
                r_max: self.r_max.as_f64(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>, MapError> {
        Ok(self.jet(z)?[0])
    }

    /// Value and first three derivatives at `z`.
    pub fn jet(&self, z: Complex<T>) -> Result<Jet<T>, MapError> {
        self.check_radius(z)?;
        let zero = Complex::zero();
        let one = Complex::one();
        let jet = match &self.kind {
            MapKind::Identity => [z, one, zero, zero],
            MapKind::Rotation { angle } => {
                let e = Complex::from_polar(T::one(), *angle);
                [e * z, e, zero, zero]
            }
            MapKind::Scale { factor } => [z * *factor, cplx(*factor), zero, zero],
            MapKind::Mobius { a, b, c, d } => {
                let den = *c * z + *d;
                if den.norm() <= T::epsilon() {
                    return Err(MapError::Singular);
                }
                let det = *a * *d - *b * *c;
                let inv = one / den;
                let f1 = det * inv * inv;
                [
                    (*a * z + *b) * inv,
                    f1,
                    f1 * inv * *c * T::lit(-2.0),
                    f1 * inv * inv * *c * *c * T::lit(6.0),
                ]
            }
            MapKind::Koebe { angle } => koebe_jet(Complex::from_polar(T::one(), *angle), z)?,
            MapKind::Exp => {
                let e = z.exp();
                [e - one, e, e, e]
            }
            MapKind::Strip => {
                let w = one - z * z;
                if w.norm() <= T::epsilon() {
                    return Err(MapError::Singular);
                }
                let f = ((one + z) / (one - z)).ln() * T::lit(0.5);
                let inv = one / w;
                [
                    f,
                    inv,
                    z * inv * inv * T::lit(2.0),
                    (z * z * T::lit(6.0) + T::lit(2.0)) * inv * inv * inv,
                ]
            }
            MapKind::Pick { s } => pick_jet(*s, z)?,
            MapKind::Custom { series } => {
                let d1 = series.derivative();
                let d2 = d1.derivative();
                let d3 = d2.derivative();
                [series.eval(z), d1.eval(z), d2.eval(z), d3.eval(z)]
            }
        };
        Ok(jet)
    }

    /// Taylor series at the origin, truncated at `self.order`.
    pub fn taylor(&self) -> Result<PowerSeries<T>, MapError> {
        let n = self.order;
        let s = match &self.kind {
            MapKind::Identity => PowerSeries::identity(n),
            MapKind::Rotation { angle } => PowerSeries::identity(n).scale(Complex::from_polar(T::one(), *angle)),
            MapKind::Scale { factor } => PowerSeries::identity(n).scale(cplx(*factor)),
            MapKind::Mobius { a, b, c, d } => {
                if d.norm() <= T::epsilon() {
                    return Err(MapError::Singular);
                }
                // (a z + b) / d * sum (-c z / d)^k
                let q = -*c / *d;
                let mut geo = Vec::with_capacity(n + 1);
                let mut p = Complex::<T>::one() / *d;
                for _ in 0..=n {
                    geo.push(p);
                    p = p * q;
                }
                let num = PowerSeries::new(vec![*b, *a], n);
                num.mul_trunc(&PowerSeries::new(geo, n))
            }
            MapKind::Koebe { angle } => {
                let e = Complex::from_polar(T::one(), *angle);
                let mut c = vec![Complex::zero(); n + 1];
                let mut p = Complex::one();
                for (k, ck) in c.iter_mut().enumerate().skip(1) {
                    *ck = p * T::from_count(k);
                    p = p * e;
                }
                PowerSeries::new(c, n)
            }
            MapKind::Exp => {
                let mut c = vec![Complex::zero(); n + 1];
                let mut t = T::one();
                for (k, ck) in c.iter_mut().enumerate().skip(1) {
                    t = t / T::from_count(k);
                    *ck = cplx(t);
                }
                PowerSeries::new(c, n)
            }
            MapKind::Strip => {
                let c = (0..=n)
                    .map(|k| {
                        if k % 2 == 1 {
                            cplx(T::one() / T::from_count(k))
                        } else {
                            Complex::zero()
                        }
                    })
                    .collect();
                PowerSeries::new(c, n)
            }
            MapKind::Pick { s } => {
                let k = AnalyticMap::<T>::koebe().with_order(n).taylor()?;
                k.reversion()?.compose(&k.scale(cplx(*s)))?
            }
            MapKind::Custom { series } => series.truncate(n),
        };
        Ok(s)
    }
}

fn koebe_jet<T: Real>(e: Complex<T>, z: Complex<T>) -> Result<Jet<T>, MapError> {
    let one = Complex::<T>::one();
    let u = one - e * z;
    if u.norm() <= T::epsilon() {
        return Err(MapError::Singular);
    }
    let inv = one / u;
    let inv2 = inv * inv;
    let inv3 = inv2 * inv;
    let ez = e * z;
    Ok([
        z * inv2,
        (one + ez) * inv3,
        e * (ez + T::lit(2.0)) * inv3 * inv * T::lit(2.0),
        e * e * (ez + T::lit(3.0)) * inv3 * inv2 * T::lit(6.0),
    ])
}

/// Inverse of the Koebe function on its slit image, in the numerically
/// stable form `2w / ((2w + 1) + sqrt(1 + 4w))`.
pub fn koebe_inverse<T: Real>(w: Complex<T>) -> Complex<T> {
    let one = Complex::<T>::one();
    let two_w = w * T::lit(2.0);
    two_w / ((two_w + one) + (one + w * T::lit(4.0)).sqrt())
}

fn pick_jet<T: Real>(s: T, z: Complex<T>) -> Result<Jet<T>, MapError> {
    let k = koebe_jet(Complex::one(), z)?;
    // inner map w = s k(z)
    let w = [k[0] * s, k[1] * s, k[2] * s, k[3] * s];
    let u = koebe_inverse(w[0]);
    let ku = koebe_jet(Complex::one(), u)?;
    if ku[1].norm() <= T::epsilon() {
        return Err(MapError::Singular);
    }
    // derivatives of h = k^{-1} at w[0]
    let inv = Complex::<T>::one() / ku[1];
    let h1 = inv;
    let h2 = -ku[2] * inv * inv * inv;
    let h3 = (ku[2] * ku[2] * T::lit(3.0) - ku[1] * ku[3]) * inv * inv * inv * inv * inv;
    Ok([
        u,
        h1 * w[1],
        h2 * w[1] * w[1] + h1 * w[2],
        h3 * w[1] * w[1] * w[1] + h2 * w[1] * w[2] * T::lit(3.0) + h1 * w[3],
    ])
}

/// Radius `rho` of the largest disk about 0 contained in the image of the
/// Pick map with parameter `s`.
pub fn pick_inner_radius<T: Real>(s: T) -> T {
    let two = T::lit(2.0);
    (two - s - two * (T::one() - s).sqrt()) / s
}
