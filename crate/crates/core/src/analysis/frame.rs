//! Frame-bound estimation for truncated systems.
//!
//! The system is sampled on a uniform real-line grid (MD systems on their
//! warped side, where the bounds are the same). The lower bound is the
//! smallest Rayleigh quotient `sum_u |<w, f_u>|^2 / |w|^2` over a test space
//! of cell-localized trigonometric polynomials `M_{beta m} chi_[c/beta,
//! (c+1)/beta)`, with `m` in the system's modulation range and cells inside
//! the central `1 - margin` part of the grid. The test space carries the
//! same frequency band as the truncated system, so band truncation alone
//! does not force the estimate to zero, while edge cells are excluded. The
//! upper bound over the full discretized space is the largest Gram
//! eigenvalue, since `T^* T` and `T T^*` share their nonzero spectrum.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gram::{edge_warnings, hermitian_eigenvalues, symmetrize};
use super::grid::Grid;
use super::quadrature::{cross_of_rows, gram_of_rows, sample_all};
use crate::error::{Error, Result};
use crate::funcmodel::{Domain, FuncExpr};
use crate::systems::{IndexRange, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsMethod {
    /// Frame operator compressed to the margin-restricted test space.
    FrameOperatorEigs,
    /// Extreme Gram eigenvalues (Riesz-sequence bounds of the truncation).
    GramEigs,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameBoundsReport {
    pub a_est: f64,
    pub b_est: f64,
    /// Largest frame-operator eigenvalue on the whole discretized space.
    pub b_full: f64,
    pub method: BoundsMethod,
    pub system_kind: &'static str,
    pub n_elements: usize,
    pub m_range: IndexRange,
    pub test_margin: f64,
    pub test_window: [f64; 2],
    pub test_dim: usize,
    pub grid: Grid,
    pub warnings: Vec<String>,
}

/// Cell-localized trigonometric test functions inside the central window.
fn test_space(system: &System, grid: &Grid, margin: f64) -> Result<(Vec<FuncExpr>, [f64; 2])> {
    let width = grid.hi() - grid.lo();
    let window = [
        grid.lo() + 0.5 * margin * width,
        grid.hi() - 0.5 * margin * width,
    ];
    let cell = 1.0 / system.beta();
    let first = (window[0] / cell).ceil() as i64;
    let last = (window[1] / cell).floor() as i64 - 1;
    if last < first {
        return Err(Error::ResolutionError(format!(
            "central window [{}, {}] holds no cell of length {cell}",
            window[0], window[1]
        )));
    }
    let mut out = Vec::new();
    for c in first..=last {
        let chi =
            FuncExpr::char_interval(Domain::RealLine, c as f64 * cell, (c + 1) as f64 * cell)?;
        for m in system.m_range().iter() {
            out.push(chi.modulate(system.beta() * m as f64)?);
        }
    }
    Ok((out, window))
}

/// `Gw^{-1/2} K Gw^{-1/2}` eigenvalues, i.e. the generalized problem
/// `K c = lambda Gw c` for Hermitian `K` and positive definite `Gw`.
fn generalized_eigenvalues(k: &DMatrix<Complex64>, gw: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::new(gw.clone());
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let low = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !(low > 1e-10 * top) {
        return Err(Error::ResolutionError(format!(
            "test functions are not resolved by the grid (Gram eigenvalues {low:e}..{top:e})"
        )));
    }
    let inv_sqrt = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|l| Complex64::new(l.sqrt().recip(), 0.0)),
    );
    let basis = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    let mut h = &basis * k * &basis;
    symmetrize(&mut h);
    Ok(hermitian_eigenvalues(&h))
}

/// Checks the margin, grid resolution, grid domain and test window without
/// sampling anything.
pub fn check_frame_inputs(system: &System, grid: &Grid, test_margin: f64) -> Result<()> {
    if !(test_margin > 0.0 && test_margin < 1.0) {
        return Err(Error::OutOfRange {
            name: "test_margin",
            detail: format!("{test_margin} not in (0, 1)"),
        });
    }
    let max_freq = system.max_modulation_frequency();
    if max_freq > 0.0 && grid.step() > 1.0 / (4.0 * max_freq) {
        return Err(Error::ResolutionError(format!(
            "grid step {} exceeds 1/(4 * {max_freq})",
            grid.step()
        )));
    }
    grid.check_domain(Domain::RealLine)?;
    test_space(system, grid, test_margin)?;
    Ok(())
}

pub fn frame_bounds_estimate(
    system: &System,
    grid: &Grid,
    test_margin: f64,
    method: BoundsMethod,
) -> Result<FrameBoundsReport> {
    check_frame_inputs(system, grid, test_margin)?;
    let family = system.analysis_family()?;
    let weights = grid.weights();
    let rows = sample_all(&family.elements, grid);
    let mut gram = gram_of_rows(&rows, &weights);
    symmetrize(&mut gram);
    let gram_eigs = hermitian_eigenvalues(&gram);
    let b_full = gram_eigs.last().copied().unwrap_or(0.0).max(0.0);

    let (test, window) = test_space(system, grid, test_margin)?;
    let (a_est, b_est) = match method {
        BoundsMethod::GramEigs => (gram_eigs[0].max(0.0), b_full),
        BoundsMethod::FrameOperatorEigs => {
            let test_rows = sample_all(&test, grid);
            // coeffs[t, u] = <w_t, f_u>
            let coeffs = cross_of_rows(&test_rows, &rows, &weights);
            let analysis = coeffs.transpose();
            let k = analysis.adjoint() * &analysis;
            let gw = gram_of_rows(&test_rows, &weights).transpose();
            let ev = generalized_eigenvalues(&k, &gw)?;
            (ev[0].max(0.0), ev[ev.len() - 1].max(0.0))
        }
    };
    Ok(FrameBoundsReport {
        a_est,
        b_est: b_est.max(a_est),
        b_full,
        method,
        system_kind: system.kind(),
        n_elements: family.len(),
        m_range: system.m_range(),
        test_margin,
        test_window: window,
        test_dim: test.len(),
        grid: *grid,
        warnings: edge_warnings(&rows, &family.labels),
    })
}
