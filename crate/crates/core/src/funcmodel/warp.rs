//! The piecewise-linear warp through `(k, b^k)`, its inverse and derivative,
//! and the `b`-dilation periodic modulations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Snap window for `floor(log_b x)` at b-adic points.
const LOG_SNAP: f64 = 1e-12;

/// `floor(log_b y)` for `y > 0`, snapping to the nearest integer within
/// [`LOG_SNAP`] and then correcting so that `b^k <= y < b^(k+1)` when that
/// is representable.
fn floor_log(y: f64, b: f64) -> i32 {
    let l = y.ln() / b.ln();
    let n = l.round();
    let mut k = if (l - n).abs() < LOG_SNAP {
        n
    } else {
        l.floor()
    } as i32;
    if b.powi(k) > y {
        k -= 1;
    } else if b.powi(k + 1) <= y {
        k += 1;
    }
    k
}

/// Unit phase `e^{2 pi i t}`, with `t` reduced modulo 1 first.
pub(crate) fn unit_phase(t: f64) -> Complex64 {
    let frac = t - t.round();
    Complex64::from_polar(1.0, 2.0 * PI * frac)
}

/// `phi(x) = b^k (1 + (b - 1)(x - k))` with `k = floor(x)`.
pub fn phi(x: f64, b: f64) -> f64 {
    let k = x.floor();
    b.powi(k as i32) * (1.0 + (b - 1.0) * (x - k))
}

pub fn phi_inv(y: f64, b: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::DomainError(format!("phi_inv needs y > 0, got {y}")));
    }
    let k = floor_log(y, b);
    Ok(k as f64 + (y / b.powi(k) - 1.0) / (b - 1.0))
}

/// Right-continuous derivative `b^floor(x) (b - 1)`.
pub fn phi_deriv(x: f64, b: f64) -> f64 {
    b.powi(x.floor() as i32) * (b - 1.0)
}

/// `gamma_m(x) = exp(2 pi i m x~ / (b - 1))` where `x~ = x b^{-floor(log_b x)}`
/// is the representative of `x` in `[1, b)`.
pub fn gamma(m: i64, b: f64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::DomainError(format!("gamma needs x > 0, got {x}")));
    }
    let k = floor_log(x, b);
    let reduced = x / b.powi(k);
    Ok(unit_phase(m as f64 * reduced / (b - 1.0)))
}
