use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("surface has no components")]
    Empty,
    #[error("component (g = {genus}, k = {punctures}) is not hyperbolic: 2g - 2 + k must be positive")]
    NotHyperbolic { genus: u32, punctures: u32 },
    #[error("genus list has {genus} entries but puncture list has {punctures}")]
    LengthMismatch { genus: usize, punctures: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub genus: u32,
    pub punctures: u32,
}

/// Possibly disconnected finite-type hyperbolic surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceTopology {
    components: Vec<Component>,
}

impl SurfaceTopology {
    pub fn new(components: Vec<Component>) -> Result<Self, TopologyError> {
        if components.is_empty() {
            return Err(TopologyError::Empty);
        }
        for c in &components {
            if 2 * c.genus as i64 - 2 + c.punctures as i64 <= 0 {
                return Err(TopologyError::NotHyperbolic {
                    genus: c.genus,
                    punctures: c.punctures,
                });
            }
        }
        Ok(Self { components })
    }

    pub fn closed(genus: u32) -> Result<Self, TopologyError> {
        Self::new(vec![Component { genus, punctures: 0 }])
    }

    /// Pairs `genus[i]` with `punctures[i]`; an empty puncture list means closed.
    pub fn from_lists(genus: &[u32], punctures: &[u32]) -> Result<Self, TopologyError> {
        if !punctures.is_empty() && punctures.len() != genus.len() {
            return Err(TopologyError::LengthMismatch {
                genus: genus.len(),
                punctures: punctures.len(),
            });
        }
        let comps = genus
            .iter()
            .enumerate()
            .map(|(i, &g)| Component {
                genus: g,
                punctures: punctures.get(i).copied().unwrap_or(0),
            })
            .collect();
        Self::new(comps)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Maximal number of disjoint simple closed curves, `sum (3g - 3 + k)`.
    pub fn curve_count(&self) -> usize {
        self.components
            .iter()
            .map(|c| (3 * c.genus as i64 - 3 + c.punctures as i64) as usize)
            .sum()
    }

    /// `|chi| = sum (2g - 2 + k)`.
    pub fn abs_euler(&self) -> usize {
        self.components
            .iter()
            .map(|c| (2 * c.genus as i64 - 2 + c.punctures as i64) as usize)
            .sum()
    }

    pub fn is_closed(&self) -> bool {
        self.components.iter().all(|c| c.punctures == 0)
    }

    /// Hyperbolic area `2 pi |chi|`.
    pub fn area<T: Real>(&self) -> T {
        T::TAU() * T::from_count(self.abs_euler())
    }

    /// `(3/2) sqrt(area)`, the bound on the gradient of renormalized volume.
    pub fn gradient_cap<T: Real>(&self) -> T {
        T::lit(1.5) * self.area::<T>().sqrt()
    }
}
