use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gram::symmetrize;
use super::grid::Grid;
use super::quadrature::{gram_of_rows, sample_all};
use crate::error::Result;
use crate::funcmodel::warp_op;
use crate::systems::{
    md_index_to_gabor_index, md_to_gabor, GaborIndex, IndexRange, MdIndex, MdSystemSpec,
};

/// Points closer than this to an integer are left out of pointwise checks.
pub const BREAKPOINT_EXCLUSION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// `D_phi f_(j,m) = e^{2 pi i m/(b-1)} g_(k,m,w)`
    Unimodular,
    /// All constants replaced by 1.
    Dropped,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstPoint {
    pub source: MdIndex,
    pub target: GaborIndex,
    pub x: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstEntry {
    pub row: MdIndex,
    pub col: MdIndex,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub max_pointwise_deviation: f64,
    pub max_gram_deviation: f64,
    pub phase_convention: PhaseConvention,
    pub worst_pointwise: Option<WorstPoint>,
    pub worst_gram: Option<WorstEntry>,
    pub n_elements: usize,
    pub points_compared: usize,
    pub points_excluded: usize,
    /// Largest entry of `|G_halfline - G_warped|`, when a half-line grid is
    /// supplied. Dominated by half-line quadrature error; informational.
    pub half_line_gram_deviation: Option<f64>,
    pub b: f64,
    pub p: u32,
    pub q: u32,
    pub j_range: IndexRange,
    pub k_range: IndexRange,
    pub m_range: IndexRange,
    pub grid_realline: Grid,
    pub grid_halfline: Option<Grid>,
}

pub fn equivalence_report(
    spec: &MdSystemSpec,
    grid_halfline: Option<&Grid>,
    grid_realline: &Grid,
) -> Result<EquivalenceReport> {
    equivalence_report_with(
        spec,
        grid_halfline,
        grid_realline,
        PhaseConvention::Unimodular,
    )
}

/// Compares `D_phi` of every truncated MD element against its Gabor partner,
/// pointwise and at the level of Gram matrices.
pub fn equivalence_report_with(
    spec: &MdSystemSpec,
    grid_halfline: Option<&Grid>,
    grid_realline: &Grid,
    convention: PhaseConvention,
) -> Result<EquivalenceReport> {
    let prm = *spec.params();
    let gabor = md_to_gabor(spec)?;
    let md_family = spec.family()?;
    let indices = spec.indices();
    let maps: Vec<_> = indices
        .iter()
        .map(|i| md_index_to_gabor_index(i.j, i.m, i.l, &prm))
        .collect();
    let phases: Vec<Complex64> = maps
        .iter()
        .map(|m| match convention {
            PhaseConvention::Unimodular => m.phase,
            PhaseConvention::Dropped => Complex64::new(1.0, 0.0),
        })
        .collect();

    let warped = md_family
        .elements
        .iter()
        .map(|e| warp_op(e, prm.b()))
        .collect::<Result<Vec<_>>>()?;
    let partners = maps
        .iter()
        .map(|m| gabor.gabor_element(m.target.k, m.target.m, m.target.window))
        .collect::<Result<Vec<_>>>()?;

    let weights = grid_realline.weights();
    let xs = grid_realline.points();
    let lhs = sample_all(&warped, grid_realline);
    let rhs = sample_all(&partners, grid_realline);

    let keep: Vec<bool> = xs
        .iter()
        .map(|x| (x - x.round()).abs() > BREAKPOINT_EXCLUSION)
        .collect();
    let points_compared = keep.iter().filter(|k| **k).count();

    let per_element: Vec<(f64, f64)> = (0..lhs.len())
        .into_par_iter()
        .map(|u| {
            let mut worst = (0.0, f64::NAN);
            for (i, x) in xs.iter().enumerate() {
                if !keep[i] {
                    continue;
                }
                let d = (lhs[u][i] - phases[u] * rhs[u][i]).norm();
                if d > worst.0 {
                    worst = (d, *x);
                }
            }
            worst
        })
        .collect();
    let mut worst_pointwise: Option<WorstPoint> = None;
    for (u, &(d, x)) in per_element.iter().enumerate() {
        if worst_pointwise.as_ref().is_none_or(|w| d > w.deviation) {
            worst_pointwise = Some(WorstPoint {
                source: indices[u],
                target: maps[u].target,
                x,
                deviation: d,
            });
        }
    }

    let mut g_md = gram_of_rows(&lhs, &weights);
    symmetrize(&mut g_md);
    let mut g_gab = gram_of_rows(&rhs, &weights);
    symmetrize(&mut g_gab);
    let n = indices.len();
    let mut worst_gram: Option<WorstEntry> = None;
    for u in 0..n {
        for v in 0..n {
            // <c_u g_u, c_v g_v> = c_u conj(c_v) <g_u, g_v>
            let corrected = phases[u] * phases[v].conj() * g_gab[(u, v)];
            let d = (g_md[(u, v)] - corrected).norm();
            if worst_gram.as_ref().is_none_or(|w| d > w.deviation) {
                worst_gram = Some(WorstEntry {
                    row: indices[u],
                    col: indices[v],
                    deviation: d,
                });
            }
        }
    }

    let half_line_gram_deviation = match grid_halfline {
        Some(g) => {
            g.check_domain(md_family.domain)?;
            let rows = sample_all(&md_family.elements, g);
            let mut g_half = gram_of_rows(&rows, &g.weights());
            symmetrize(&mut g_half);
            Some(
                (&g_half - &g_md)
                    .iter()
                    .map(|v| v.norm())
                    .fold(0.0, f64::max),
            )
        }
        None => None,
    };

    Ok(EquivalenceReport {
        max_pointwise_deviation: worst_pointwise.as_ref().map_or(0.0, |w| w.deviation),
        max_gram_deviation: worst_gram.as_ref().map_or(0.0, |w| w.deviation),
        phase_convention: convention,
        worst_pointwise,
        worst_gram,
        n_elements: n,
        points_compared,
        points_excluded: xs.len() - points_compared,
        half_line_gram_deviation,
        b: prm.b(),
        p: prm.p(),
        q: prm.q(),
        j_range: spec.j_range(),
        k_range: gabor.k_range(),
        m_range: spec.m_range(),
        grid_realline: *grid_realline,
        grid_halfline: grid_halfline.copied(),
    })
}
