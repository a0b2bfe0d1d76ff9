//! Named constants of the surgered-flow estimates, with provenance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::topology::SurfaceTopology;
use crate::scalar::Real;

/// Two-dimensional Margulis constant `arcsinh(1)`.
pub fn epsilon_2<T: Real>() -> T {
    T::one().asinh()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A universal constant with an explicit value.
    PaperUniversal,
    /// Supplied from outside; the literature gives existence but no usable value.
    ExternalNonconstructive,
    /// Recomputed from the other entries.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LedgerError {
    #[error("{name} = {value} violates {constraint}")]
    InvalidInput {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },
    #[error("topology has no simple closed curves (n = 0)")]
    NoCurves,
    #[error("epsilon = {epsilon} outside (0, {eps0}]")]
    EpsilonOutOfRange { epsilon: f64, eps0: f64 },
}

/// Configurable inputs. The defaults for everything except `eps_2` are
/// placeholders, not values established in the literature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct LedgerInputs<T> {
    pub delta0: T,
    pub c_drill: T,
    pub l_drill: T,
    pub lambda: T,
}

impl<T: Real> Default for LedgerInputs<T> {
    fn default() -> Self {
        Self {
            delta0: T::lit(6.0),
            c_drill: T::one(),
            l_drill: epsilon_2(),
            lambda: T::lit(0.5),
        }
    }
}

impl<T: Real> LedgerInputs<T> {
    pub fn validate(&self) -> Result<(), LedgerError> {
        let bad = |name, value: T, constraint| LedgerError::InvalidInput {
            name,
            value: value.as_f64(),
            constraint,
        };
        if !(self.delta0 > T::zero() && self.delta0.is_finite()) {
            return Err(bad("delta0", self.delta0, "delta0 > 0"));
        }
        if !(self.c_drill >= T::zero() && self.c_drill.is_finite()) {
            return Err(bad("c_drill", self.c_drill, "c_drill >= 0"));
        }
        if !(self.l_drill > T::zero() && self.l_drill < epsilon_2::<T>() + epsilon_2::<T>()) {
            return Err(bad("l_drill", self.l_drill, "0 < l_drill < 2 arcsinh(1)"));
        }
        if !(self.lambda >= T::zero() && self.lambda < T::one()) {
            return Err(bad("lambda", self.lambda, "0 <= lambda < 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct LedgerEntry<T> {
    pub symbol: &'static str,
    pub value: T,
    pub provenance: Provenance,
    pub formula: &'static str,
}

/// All constants for a fixed surface. Every derived field is a pure
/// function of `inputs` and `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ConstantsLedger<T> {
    pub inputs: LedgerInputs<T>,
    pub n: usize,
    pub eps_2: T,
    pub c0: T,
    pub c1: T,
    pub k0: T,
    pub eps0: T,
    pub eps_star: T,
    pub a_surface: T,
    pub delta: T,
}

impl<T: Real> ConstantsLedger<T> {
    pub fn new(inputs: LedgerInputs<T>, topology: &SurfaceTopology) -> Result<Self, LedgerError> {
        inputs.validate()?;
        let n = topology.curve_count();
        if n == 0 {
            return Err(LedgerError::NoCurves);
        }
        let sqrt2 = T::lit(2.0).sqrt();
        let c0 = sqrt2 * (inputs.c_drill + T::one());
        let c1 = T::lit(9.0) * sqrt2 * (c0 + T::one());
        let k0 = T::one() / (T::lit(4.0) * (T::lit(3.0) * T::PI()).sqrt() * c1);
        let eps0 = (inputs.l_drill.sqrt() / k0).min(T::lit(4.0) * (T::PI() / T::lit(3.0)).sqrt());
        let eps_star = eps0.min(inputs.delta0 / T::lit(2.0).powi(n as i32 + 2));
        let mut ledger = Self {
            inputs,
            n,
            eps_2: epsilon_2(),
            c0,
            c1,
            k0,
            eps0,
            eps_star,
            a_surface: T::zero(),
            delta: inputs.delta0 * T::lit(0.5),
        };
        ledger.a_surface = ledger.a_epsilon(eps_star)? * T::lit(0.5);
        Ok(ledger)
    }

    /// Exponent `2n + 3`.
    pub fn exponent(&self) -> i32 {
        2 * self.n as i32 + 3
    }

    /// `A(eps, S) = (K0 eps (1 - lambda) / n)^{2n+3}` for `0 < eps <= eps0`.
    pub fn a_epsilon(&self, eps: T) -> Result<T, LedgerError> {
        if !(eps > T::zero() && eps <= self.eps0) {
            return Err(LedgerError::EpsilonOutOfRange {
                epsilon: eps.as_f64(),
                eps0: self.eps0.as_f64(),
            });
        }
        Ok(self.a_epsilon_unchecked(eps))
    }

    fn a_epsilon_unchecked(&self, eps: T) -> T {
        let base = self.k0 * eps * (T::one() - self.inputs.lambda) / T::from_count(self.n);
        base.powi(self.exponent())
    }

    pub fn entries(&self) -> Vec<LedgerEntry<T>> {
        use Provenance::*;
        let e = |symbol, value, provenance, formula| LedgerEntry {
            symbol,
            value,
            provenance,
            formula,
        };
        vec![
            e("eps_2", self.eps_2, PaperUniversal, "arcsinh(1)"),
            e("delta0", self.inputs.delta0, ExternalNonconstructive, "input"),
            e("c_drill", self.inputs.c_drill, ExternalNonconstructive, "input"),
            e("l_drill", self.inputs.l_drill, ExternalNonconstructive, "input"),
            e("lambda", self.inputs.lambda, ExternalNonconstructive, "input"),
            e("n", T::from_count(self.n), Derived, "sum(3g - 3 + k)"),
            e("exponent", T::from_count(2 * self.n + 3), Derived, "2n + 3"),
            e("C0", self.c0, Derived, "sqrt(2) (c_drill + 1)"),
            e("C1", self.c1, Derived, "9 sqrt(2) (C0 + 1)"),
            e("K0", self.k0, Derived, "1 / (4 sqrt(3 pi) C1)"),
            e("eps0", self.eps0, Derived, "min(sqrt(l_drill) / K0, 4 sqrt(pi/3))"),
            e("eps_star", self.eps_star, Derived, "min(eps0, delta0 / 2^(n+2))"),
            e(
                "A(eps_star)",
                self.a_epsilon_unchecked(self.eps_star),
                Derived,
                "(K0 eps (1 - lambda) / n)^(2n+3)",
            ),
            e("A(S)", self.a_surface, Derived, "A(eps_star, S) / 2"),
            e("delta", self.delta, Derived, "delta0 / 2"),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn genus2() -> SurfaceTopology {
        SurfaceTopology::closed(2).unwrap()
    }

    #[test]
    fn default_constants() {
        let l = ConstantsLedger::<f64>::new(LedgerInputs::default(), &genus2()).unwrap();
        assert_relative_eq!(l.c0, 2.0 * 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(l.c1, 36.0 + 9.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(l.exponent(), 9);
        assert_relative_eq!(l.delta, 3.0);
        assert_relative_eq!(l.eps_star, 6.0 / 32.0);
    }

    #[test]
    fn a_epsilon_monotone() {
        let l = ConstantsLedger::<f64>::new(LedgerInputs::default(), &genus2()).unwrap();
        let a1 = l.a_epsilon(0.1).unwrap();
        let a2 = l.a_epsilon(0.2).unwrap();
        assert!(a1 < a2);
        let l3 = ConstantsLedger::<f64>::new(LedgerInputs::default(), &SurfaceTopology::closed(3).unwrap()).unwrap();
        assert!(l3.a_epsilon(0.1).unwrap() < a1);
        let hi = LedgerInputs {
            lambda: 0.9,
            ..LedgerInputs::default()
        };
        assert!(ConstantsLedger::new(hi, &genus2()).unwrap().a_epsilon(0.1).unwrap() < a1);
        assert!(l.a_epsilon(l.eps0 * 1.01).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        for inputs in [
            LedgerInputs {
                lambda: 1.0,
                ..LedgerInputs::<f64>::default()
            },
            LedgerInputs {
                delta0: 0.0,
                ..LedgerInputs::default()
            },
            LedgerInputs {
                l_drill: 2.0,
                ..LedgerInputs::default()
            },
        ] {
            assert!(ConstantsLedger::new(inputs, &genus2()).is_err());
        }
        let pants = SurfaceTopology::from_lists(&[0], &[3]).unwrap();
        assert_eq!(
            ConstantsLedger::<f64>::new(LedgerInputs::default(), &pants),
            Err(LedgerError::NoCurves)
        );
    }
}
