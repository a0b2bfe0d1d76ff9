//! Truncated complex power series around the origin.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("leading coefficient vanishes; series is not invertible")]
    VanishingLeading,
    #[error("inner series has non-zero constant term; formal composition undefined")]
    NonzeroConstant,
    #[error("series orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
}

/// `sum_{k=0}^{order} c_k z^k`, exact up to and including `order`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct PowerSeries<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> PowerSeries<T> {
    pub fn new(mut coeffs: Vec<Complex<T>>, order: usize) -> Self {
        coeffs.resize(order + 1, Complex::zero());
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[T], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex::zero(); order + 1],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Complex::new(T::one(), T::zero());
        }
        s
    }

    pub fn constant(c: Complex<T>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs.get(k).copied().unwrap_or_else(Complex::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs.iter().rev().fold(Complex::zero(), |acc, &c| acc * z + c)
    }

    /// Term-wise derivative. The result keeps the same length; its top
    /// coefficient is zero because the truncation is one order lower.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![Complex::zero(); n + 1];
        for k in 1..=n {
            out[k - 1] = self.coeffs[k] * T::from_count(k);
        }
        Self { coeffs: out }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order)
    }

    /// Cauchy product truncated to the smaller of the two orders.
    pub fn mul_trunc(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Complex::zero(); n + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse `1/self`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = self.coeffs[0];
        if c0.norm() <= T::epsilon() * T::lit(16.0) {
            return Err(SeriesError::VanishingLeading);
        }
        let n = self.order();
        let inv0 = Complex::new(T::one(), T::zero()) / c0;
        let mut out = vec![Complex::zero(); n + 1];
        out[0] = inv0;
        for k in 1..=n {
            let mut acc = Complex::<T>::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j] * out[k - j];
            }
            out[k] = -acc * inv0;
        }
        Ok(Self { coeffs: out })
    }

    /// Formal composition `self(inner(z))`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SeriesError> {
        if inner.coeffs[0].norm() > T::epsilon() * T::lit(16.0) * (T::one() + inner.coeffs[1].norm()) {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order().min(inner.order());
        let mut g = inner.truncate(n);
        g.coeffs[0] = Complex::zero();
        // Horner in the series ring.
        let mut acc = Self::constant(self.coeffs[n], n);
        for k in (0..n).rev() {
            acc = acc.mul_trunc(&g);
            acc.coeffs[0] = acc.coeffs[0] + self.coeffs[k];
        }
        Ok(acc)
    }

    /// Compositional inverse: the series `h` with `self(h(w)) = w`.
    /// Requires `self(0) = 0` and a non-vanishing linear coefficient.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        if self.coeffs[0].norm() > T::epsilon() * T::lit(16.0) {
            return Err(SeriesError::NonzeroConstant);
        }
        let n = self.order();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let a1 = self.coeffs[1];
        if a1.norm() <= T::epsilon() * T::lit(16.0) {
            return Err(SeriesError::VanishingLeading);
        }
        // Coefficient-by-coefficient solve of f(h(w)) = w.
        let mut h = Self::zero(n);
        h.coeffs[1] = Complex::new(T::one(), T::zero()) / a1;
        let inv_a1 = h.coeffs[1];
        for k in 2..=n {
            let partial = h.truncate(k);
            let comp = self.truncate(k).compose(&partial)?;
            h.coeffs[k] = -comp.coeffs[k] * inv_a1;
        }
        Ok(h)
    }
}

impl<T: Real> Add for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn add(self, rhs: Self) -> PowerSeries<T> {
        let n = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl<T: Real> Sub for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn sub(self, rhs: Self) -> PowerSeries<T> {
        let n = self.order().min(rhs.order());
        PowerSeries {
            coeffs: (0..=n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl<T: Real> Mul for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn mul(self, rhs: Self) -> PowerSeries<T> {
        self.mul_trunc(rhs)
    }
}

impl<T: Real> Neg for &PowerSeries<T> {
    type Output = PowerSeries<T>;
    fn neg(self) -> PowerSeries<T> {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}
