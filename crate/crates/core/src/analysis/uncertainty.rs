//! Time-frequency spread `(int |x-u|^2 |g|^2) (int |w-eta|^2 |g^|^2)` with
//! `g^(w) = int g(x) e^{-2 pi i x w} dx`.
//!
//! The time moment uses trapezoid quadrature. The frequency moment uses the
//! DFT of the samples: with step `h` and `n` points, `g^` is approximated on
//! the frequencies `k/(n h)`, `|k| <= n/2`, by `h` times the DFT.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::grid::Grid;
use super::quadrature::pairwise_sum_real;
use crate::error::{Error, Result};
use crate::funcmodel::{Domain, FuncExpr};

#[derive(Debug, Clone, Serialize)]
pub struct UncertaintyReport {
    pub n: usize,
    pub step: f64,
    pub u: f64,
    pub eta: f64,
    pub norm_sq: f64,
    pub time_moment: f64,
    pub freq_moment: f64,
    pub product: f64,
}

pub fn uncertainty_moments(
    g: &FuncExpr,
    u: f64,
    eta: f64,
    grid: &Grid,
) -> Result<UncertaintyReport> {
    if g.domain() != Domain::RealLine {
        return Err(Error::DomainMismatch {
            expected: Domain::RealLine,
            found: g.domain(),
        });
    }
    let n = grid.n();
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::ResolutionError(format!(
            "uncertainty needs a power-of-two sample count, got {n}"
        )));
    }
    let h = grid.step();
    let xs = grid.points();
    let w = grid.weights();
    let samples = g.sample(&xs);

    let norm_sq = pairwise_sum_real(0, n, &|i| w[i] * samples[i].norm_sqr());
    let time_moment = pairwise_sum_real(0, n, &|i| {
        let d = xs[i] - u;
        w[i] * d * d * samples[i].norm_sqr()
    });

    let mut spectrum: Vec<Complex64> = samples;
    FftPlanner::new().plan_fft_forward(n).process(&mut spectrum);
    let df = 1.0 / (n as f64 * h);
    let freq = |k: usize| {
        let k = k as i64;
        let k = if k < (n / 2) as i64 { k } else { k - n as i64 };
        k as f64 * df
    };
    // |g^(w_k)|^2 = h^2 |G_k|^2, integrated with spacing df
    let freq_moment = pairwise_sum_real(0, n, &|k| {
        let d = freq(k) - eta;
        df * h * h * d * d * spectrum[k].norm_sqr()
    });
    if !(norm_sq.is_finite() && time_moment.is_finite() && freq_moment.is_finite()) {
        return Err(Error::NonFinite("uncertainty moments"));
    }

    Ok(UncertaintyReport {
        n,
        step: h,
        u,
        eta,
        norm_sq,
        time_moment,
        freq_moment,
        product: time_moment * freq_moment,
    })
}

pub fn uncertainty_product(g: &FuncExpr, u: f64, eta: f64, grid: &Grid) -> Result<f64> {
    Ok(uncertainty_moments(g, u, eta, grid)?.product)
}
