//! Gradient flow with surgery on metric-space models, together with the
//! Schwarzian, collar, annulus and volume-bound calculus the flow estimates
//! are assembled from.
//!
//! Everything numerical is generic over [`Real`]; the `*64` aliases below fix
//! the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod annulus;
pub mod flow;
pub mod models;
pub mod path_geometry;
pub mod quadrature;
pub mod scalar;
pub mod schwarzian;
pub mod surface_bounds;
pub mod verify;

pub use scalar::Real;

pub type AnalyticMap64 = schwarzian::AnalyticMap<f64>;
pub type PowerSeries64 = schwarzian::PowerSeries<f64>;
pub type QuadDiffDisk64 = schwarzian::QuadDiffDisk<f64>;
pub type ConstantsLedger64 = surface_bounds::ConstantsLedger<f64>;
pub type LedgerInputs64 = surface_bounds::LedgerInputs<f64>;
pub type StripAnnulus64 = annulus::StripAnnulus<f64>;
pub type BeltramiDatum64 = annulus::BeltramiDatum<f64>;
pub type PeriodicQuadDiff64 = annulus::PeriodicQuadDiff<f64>;
pub type PolyPath64 = path_geometry::PolyPath<f64>;
pub type SeparatedPointSet64 = path_geometry::SeparatedPointSet<f64>;
pub type FlowTrace64 = flow::FlowTrace<f64>;
pub type ModelInstance64 = models::ModelInstance<f64>;
