//! Surface topology, collar geometry, the constants ledger, and the
//! volume-bound arithmetic built on them.

mod estimates;
mod ledger;
mod topology;
mod volume;

pub use estimates::{
    collar_injectivity, collar_width, drill_pointwise_bound, drilling_scale, main_theorem_bounds, nearnode_chain,
    nearnode_threshold, progress_bounds, select_drilling_simplex, DrillingSimplex, EstimateError, MainBounds,
    NearnodeChain, ProgressBounds,
};
pub use ledger::{epsilon_2, ConstantsLedger, LedgerEntry, LedgerError, LedgerInputs, Provenance};
pub use topology::{Component, SurfaceTopology, TopologyError};
pub use volume::{
    core_volume_sandwich, unbending_functionals, w_volume_scale, Sandwich, Unbending, UnbendingError, FD_TOLERANCE,
};
