//! Domain-tagged function expressions and the operators acting on them.

mod expr;
mod table;
mod warp;

pub use expr::{apply_operator, unwarp_op, warp_op, Domain, FuncExpr, Operator};
pub use table::SampledTable;
pub(crate) use table::{fmt17, write_samples_csv};
pub(crate) use warp::unit_phase;
pub use warp::{gamma, phi, phi_deriv, phi_inv};
