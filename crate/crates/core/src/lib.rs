//! Dilation-and-modulation systems on `L^2(R_+)` and their unitarily
//! equivalent multi-window Gabor systems on `L^2(R)`.
//!
//! For `b > 1` and coprime `p, q` with `a = b^(p/q)`, the system
//! `{a^{j/2} gamma_m(x) h(a^j x)}` is carried by the piecewise-linear warp
//! `D_phi` onto the Gabor system with translation step `p`, modulation step
//! `1`, and the `q` windows `D_phi D_{a^r} h`. The crate builds both sides
//! lazily and provides quadrature-based Gram matrices, frame-bound
//! estimates, completeness residuals and uncertainty products to check and
//! use that correspondence numerically.

// `!(x > y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod funcmodel;
pub mod params;
pub mod systems;

pub use error::{Error, Result};
