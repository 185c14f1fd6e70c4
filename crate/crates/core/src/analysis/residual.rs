use nalgebra::{DVector, SymmetricEigen};
use num_complex::Complex64;

use super::gram::symmetrize;
use super::grid::Grid;
use super::quadrature::{gram_of_rows, pairwise_sum_real, sample_all, weighted_dot};
use crate::error::{Error, Result};
use crate::funcmodel::FuncExpr;
use crate::systems::System;

/// Relative ridge added to the Gram diagonal, scaled by `trace / N`.
pub const RIDGE: f64 = 1e-12;
/// Largest accepted condition number of the regularized Gram matrix.
pub const MAX_CONDITION: f64 = 1e14;

/// `|f - P f|`, with `P` the least-squares projection onto the span of the
/// truncated system, computed on the system's analysis side.
pub fn projection_residual(f: &FuncExpr, system: &System, grid: &Grid) -> Result<f64> {
    let target = system.to_analysis_domain(f)?;
    let family = system.analysis_family()?;
    grid.check_domain(family.domain)?;
    let weights = grid.weights();
    let rows = sample_all(&family.elements, grid);
    let fs = target.sample(&grid.points());
    let n = rows.len();

    // normal equations sum_u c_u <f_u, f_v> = <f, f_v>, i.e. G^T c = y
    let mut gram = gram_of_rows(&rows, &weights).transpose();
    symmetrize(&mut gram);
    let trace: f64 = (0..n).map(|i| gram[(i, i)].re).sum();
    let ridge = RIDGE * trace / n as f64;
    for i in 0..n {
        gram[(i, i)] += ridge;
    }
    let eig = SymmetricEigen::new(gram);
    let top = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let low = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let condition = if low > 0.0 { top / low } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::SingularGram { condition });
    }

    let y = DVector::from_iterator(n, rows.iter().map(|r| weighted_dot(&fs, r, &weights)));
    let vt_y = eig.eigenvectors.adjoint() * y;
    let scaled = DVector::from_iterator(
        n,
        vt_y.iter().zip(eig.eigenvalues.iter()).map(|(c, l)| c / *l),
    );
    let coef = &eig.eigenvectors * scaled;

    let resid: Vec<Complex64> = (0..grid.n())
        .map(|i| {
            let mut acc = fs[i];
            for u in 0..n {
                acc -= coef[u] * rows[u][i];
            }
            acc
        })
        .collect();
    let sq = pairwise_sum_real(0, grid.n(), &|i| weights[i] * resid[i].norm_sqr());
    Ok(sq.max(0.0).sqrt())
}
