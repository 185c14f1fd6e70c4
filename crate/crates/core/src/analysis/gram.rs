use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::grid::Grid;
use super::quadrature::{gram_of_rows, sample_all};
use crate::error::Result;
use crate::funcmodel::fmt17;
use crate::systems::{ElementLabel, Family, System};

/// Relative magnitude at the grid edges above which an element is flagged
/// as not contained in the quadrature interval.
pub const EDGE_MASS_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct GramReport {
    #[serde(skip)]
    pub matrix: DMatrix<Complex64>,
    pub labels: Vec<ElementLabel>,
    pub grid: Grid,
    /// `max |G - G^H|` before symmetrization.
    pub max_asymmetry: f64,
    pub warnings: Vec<String>,
}

impl GramReport {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// `row,col,re,im`, one line per entry in row-major order.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_matrix_csv(writer, &self.matrix)
    }
}

pub fn write_matrix_csv<W: Write>(writer: W, m: &DMatrix<Complex64>) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["row", "col", "re", "im"])?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            wtr.write_record([r.to_string(), c.to_string(), fmt17(v.re), fmt17(v.im)])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Replaces `m` by `(m + m^H)/2` and returns the largest entry of `|m - m^H|`.
pub(crate) fn symmetrize(m: &mut DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut asym = 0.0f64;
    for r in 0..n {
        for c in r..n {
            let (x, y) = (m[(r, c)], m[(c, r)]);
            asym = asym.max((x - y.conj()).norm());
            let avg = 0.5 * (x + y.conj());
            m[(r, c)] = avg;
            m[(c, r)] = avg.conj();
        }
    }
    asym
}

pub(crate) fn edge_warnings(rows: &[Vec<Complex64>], labels: &[ElementLabel]) -> Vec<String> {
    let mut out = Vec::new();
    for (row, label) in rows.iter().zip(labels) {
        let peak = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let edge = row[0].norm().max(row[row.len() - 1].norm());
        if peak > 0.0 && edge > EDGE_MASS_WARNING * peak {
            out.push(format!(
                "{label:?}: edge magnitude {:.3e} relative to peak",
                edge / peak
            ));
        }
    }
    out
}

/// Gram matrix `G[u, v] = <f_u, f_v>` by trapezoid quadrature, symmetrized.
pub fn gram_matrix(family: &Family, grid: &Grid) -> Result<GramReport> {
    grid.check_domain(family.domain)?;
    let rows = sample_all(&family.elements, grid);
    let mut matrix = gram_of_rows(&rows, &grid.weights());
    let max_asymmetry = symmetrize(&mut matrix);
    Ok(GramReport {
        matrix,
        warnings: edge_warnings(&rows, &family.labels),
        labels: family.labels.clone(),
        grid: *grid,
        max_asymmetry,
    })
}

/// Gram matrix of a system on its analysis side (MD systems are warped).
pub fn system_gram(system: &System, grid: &Grid) -> Result<GramReport> {
    gram_matrix(&system.analysis_family()?, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcmodel::{Domain, FuncExpr};
    use crate::params::make_params;
    use crate::systems::{GaborSystemSpec, IndexRange, MdSystemSpec};

    fn max_dev_from_identity(m: &DMatrix<Complex64>) -> f64 {
        let n = m.nrows();
        (m - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn orthonormal_gabor_family() {
        let g = FuncExpr::char_interval(Domain::RealLine, 0.0, 1.0).unwrap();
        let spec = GaborSystemSpec::new(
            vec![g],
            1.0,
            1.0,
            IndexRange::symmetric(2),
            IndexRange::symmetric(2),
        )
        .unwrap();
        let grid = Grid::staggered(-3, 4, 256).unwrap();
        let rep = gram_matrix(&spec.family().unwrap(), &grid).unwrap();
        assert_eq!(rep.dim(), 25);
        assert!(max_dev_from_identity(&rep.matrix) < 1e-6);
        assert!(rep.warnings.is_empty());
        for i in 0..rep.dim() {
            assert_eq!(rep.matrix[(i, i)].im, 0.0);
            assert!(rep.matrix[(i, i)].re >= 0.0);
        }
    }

    #[test]
    fn single_element() {
        let g = FuncExpr::gaussian(Domain::RealLine, 0.0, 1.0).unwrap();
        let spec = GaborSystemSpec::new(
            vec![g],
            1.0,
            1.0,
            IndexRange::symmetric(0),
            IndexRange::symmetric(0),
        )
        .unwrap();
        let grid = Grid::new(-8.0, 8.0, 4001).unwrap();
        let rep = gram_matrix(&spec.family().unwrap(), &grid).unwrap();
        // |g|^2 = exp(-2 pi x^2) integrates to 1/sqrt(2)
        assert!((rep.matrix[(0, 0)].re - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn orthonormal_md_family_on_warped_side() {
        let h = FuncExpr::char_interval(Domain::PositiveHalfLine, 1.0, 2.0).unwrap();
        let spec = MdSystemSpec::new(
            vec![h],
            make_params(2.0, 1, 1).unwrap(),
            IndexRange::symmetric(2),
            IndexRange::symmetric(2),
        )
        .unwrap();
        let grid = Grid::staggered(-4, 5, 512).unwrap();
        let rep = system_gram(&System::Md(spec), &grid).unwrap();
        assert!(max_dev_from_identity(&rep.matrix) < 1e-4);
    }

    #[test]
    fn warns_when_mass_leaves_the_grid() {
        let g = FuncExpr::gaussian(Domain::RealLine, 0.0, 1.0).unwrap();
        let spec = GaborSystemSpec::new(
            vec![g],
            1.0,
            1.0,
            IndexRange::symmetric(0),
            IndexRange::symmetric(0),
        )
        .unwrap();
        let grid = Grid::new(-1.0, 1.0, 101).unwrap();
        let rep = gram_matrix(&spec.family().unwrap(), &grid).unwrap();
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn csv_layout() {
        let m = DMatrix::from_row_slice(
            1,
            2,
            &[Complex64::new(1.0, 0.0), Complex64::new(0.5, -0.25)],
        );
        let mut buf = Vec::new();
        write_matrix_csv(&mut buf, &m).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "row,col,re,im");
        assert_eq!(lines[2], "0,1,5.0000000000000000e-1,-2.5000000000000000e-1");
    }
}
