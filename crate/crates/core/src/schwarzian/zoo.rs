//! Manifest of univalent test maps with analytically certified image disks.

use serde::{Deserialize, Serialize};

use super::maps::{AnalyticMap, MapKind};
use crate::scalar::Real;

const BUILTIN: &str = include_str!("../../data/zoo.json");

/// Largest hyperbolic disk about `f(0)` known to lie in `f(disk)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImageDisk<T> {
    /// The image is the whole disk (automorphisms).
    Whole,
    /// Radius in the hyperbolic metric of the disk. Zero means only the
    /// Kraus–Nehari case is claimed, which covers maps into the sphere.
    Hyperbolic(T),
}

impl<T: Real> ImageDisk<T> {
    pub fn radius(&self) -> T {
        match self {
            Self::Whole => T::infinity(),
            Self::Hyperbolic(r) => *r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ZooEntry<T> {
    pub name: String,
    #[serde(flatten)]
    pub kind: MapKind<T>,
    pub certified_radius: ImageDisk<T>,
}

impl<T: Real> ZooEntry<T> {
    pub fn map(&self) -> AnalyticMap<T> {
        AnalyticMap::new(self.kind.clone())
    }
}

pub fn load_zoo<T: Real>(json: &str) -> serde_json::Result<Vec<ZooEntry<T>>> {
    serde_json::from_str(json)
}

/// The shipped zoo: automorphisms, Koebe maps, Möbius maps, `e^z - 1`, the
/// strip map, univalent quadratics and Pick slit maps.
pub fn builtin_zoo<T: Real>() -> Vec<ZooEntry<T>> {
    load_zoo(BUILTIN).expect("bundled zoo manifest parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schwarzian::pick_inner_radius;
    use approx::assert_relative_eq;

    #[test]
    fn manifest_round_trip() {
        let zoo = builtin_zoo::<f64>();
        assert!(zoo.len() >= 12);
        let back: Vec<ZooEntry<f64>> = load_zoo(&serde_json::to_string(&zoo).unwrap()).unwrap();
        assert_eq!(zoo, back);
    }

    #[test]
    fn pick_radii_match_slit_tip() {
        // The slit tip sits at -rho, and 2 artanh(rho) = -log(1 - s)/2.
        for e in builtin_zoo::<f64>() {
            if let MapKind::Pick { s } = e.kind {
                let r = 2.0 * pick_inner_radius(s).atanh();
                assert_relative_eq!(r, -(1.0 - s).ln() / 2.0, epsilon = 1e-12);
                assert_relative_eq!(e.certified_radius.radius(), r, epsilon = 1e-12);
            }
        }
    }
}
