use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::Grid;
use crate::error::{Error, Result};
use crate::funcmodel::FuncExpr;

const PAIRWISE_BLOCK: usize = 64;

/// Sum of `f(i)` for `i` in `lo..hi`, split in halves down to small blocks.
/// The reduction tree depends only on the range, so results are reproducible.
pub(crate) fn pairwise_sum<F: Fn(usize) -> Complex64>(lo: usize, hi: usize, f: &F) -> Complex64 {
    if hi - lo <= PAIRWISE_BLOCK {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += f(i);
        }
        acc
    } else {
        let mid = lo + (hi - lo) / 2;
        pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f)
    }
}

pub(crate) fn pairwise_sum_real<F: Fn(usize) -> f64>(lo: usize, hi: usize, f: &F) -> f64 {
    pairwise_sum(lo, hi, &|i| Complex64::new(f(i), 0.0)).re
}

/// `sum_i w_i u_i conj(v_i)`
pub(crate) fn weighted_dot(u: &[Complex64], v: &[Complex64], w: &[f64]) -> Complex64 {
    pairwise_sum(0, w.len(), &|i| w[i] * u[i] * v[i].conj())
}

/// Trapezoid approximation of `int f conj(g)` over the grid.
pub fn inner_product(f: &FuncExpr, g: &FuncExpr, grid: &Grid) -> Result<Complex64> {
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch {
            expected: f.domain(),
            found: g.domain(),
        });
    }
    grid.check_domain(f.domain())?;
    let w = grid.weights();
    Ok(pairwise_sum(0, grid.n(), &|i| {
        let x = grid.point(i);
        w[i] * f.eval(x) * g.eval(x).conj()
    }))
}

pub fn norm(f: &FuncExpr, grid: &Grid) -> Result<f64> {
    Ok(inner_product(f, f, grid)?.re.max(0.0).sqrt())
}

/// One row of samples per expression, evaluated in parallel.
pub(crate) fn sample_all(elements: &[FuncExpr], grid: &Grid) -> Vec<Vec<Complex64>> {
    let xs = grid.points();
    elements.par_iter().map(|e| e.sample(&xs)).collect()
}

/// `G[u, v] = <row_u, row_v>` for all pairs; every entry is reduced
/// independently, so the result does not depend on the thread count.
pub(crate) fn gram_of_rows(rows: &[Vec<Complex64>], w: &[f64]) -> DMatrix<Complex64> {
    let n = rows.len();
    let entries: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|idx| weighted_dot(&rows[idx / n], &rows[idx % n], w))
        .collect();
    DMatrix::from_row_slice(n, n, &entries)
}

/// `C[u, t] = <a_u, b_t>`
pub(crate) fn cross_of_rows(
    a: &[Vec<Complex64>],
    b: &[Vec<Complex64>],
    w: &[f64],
) -> DMatrix<Complex64> {
    let (na, nb) = (a.len(), b.len());
    let entries: Vec<Complex64> = (0..na * nb)
        .into_par_iter()
        .map(|idx| weighted_dot(&a[idx / nb], &b[idx % nb], w))
        .collect();
    DMatrix::from_row_slice(na, nb, &entries)
}
