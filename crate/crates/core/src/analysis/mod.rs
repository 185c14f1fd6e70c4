//! Quadrature, Gram matrices, frame bounds, equivalence checks, projection
//! residuals and uncertainty products.
//!
//! All assemblies reduce each entry with a fixed pairwise order and only
//! parallelize across entries, so reports are bit-identical across thread
//! counts.

mod equivalence;
mod frame;
mod gram;
mod grid;
mod quadrature;
mod residual;
mod uncertainty;

pub use equivalence::{
    equivalence_report, equivalence_report_with, EquivalenceReport, PhaseConvention, WorstEntry,
    WorstPoint, BREAKPOINT_EXCLUSION,
};
pub use frame::{check_frame_inputs, frame_bounds_estimate, BoundsMethod, FrameBoundsReport};
pub use gram::{gram_matrix, system_gram, write_matrix_csv, GramReport, EDGE_MASS_WARNING};
pub use grid::Grid;
pub use quadrature::{inner_product, norm};
pub use residual::{projection_residual, MAX_CONDITION, RIDGE};
pub use uncertainty::{uncertainty_moments, uncertainty_product, UncertaintyReport};
