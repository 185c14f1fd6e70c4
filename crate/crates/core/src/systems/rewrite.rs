//! Integer-step form of a rationally sampled Gabor system.
//!
//! With `alpha beta = p/q`, `D_{1/beta}` carries `G(alpha, beta)` onto
//! `G(p/q, 1)`, and splitting `k = q k'' + r` regroups the translates
//! `T_{pk/q}` into `T_{p k''} T_{p r/q}`: `q` windows on the lattice `pZ`.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;

use super::{GaborIndex, GaborSystemSpec, IndexRange};
use crate::error::{Error, Result};
use crate::funcmodel::{Domain, FuncExpr};
use crate::params::index_split;

#[derive(Debug, Clone)]
pub struct RationalRewrite {
    system: GaborSystemSpec,
    p: u32,
    q: u32,
    original_k_range: IndexRange,
}

impl RationalRewrite {
    /// The rewritten system: `alpha' = p`, `beta' = 1`, `q` windows.
    pub fn system(&self) -> &GaborSystemSpec {
        &self.system
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Position of original element `(k, m)` in the rewritten system.
    pub fn map_index(&self, k: i64, m: i64) -> GaborIndex {
        let split = index_split(k, self.q);
        GaborIndex {
            window: split.r as usize,
            k: split.s,
            m,
        }
    }

    /// Translation offsets `p k'' + p r/q` realized by the rewritten system.
    pub fn realized_offsets(&self) -> BTreeSet<Ratio<i64>> {
        let (p, q) = (self.p as i64, self.q as i64);
        let mut out = BTreeSet::new();
        for k in self.system.k_range().iter() {
            for r in 0..q {
                out.insert(Ratio::from_integer(p * k) + Ratio::new(p * r, q));
            }
        }
        out
    }

    /// Closed interval spanned by the original offsets `(p/q) k`.
    pub fn offset_window(&self) -> (Ratio<i64>, Ratio<i64>) {
        let (p, q) = (self.p as i64, self.q as i64);
        (
            Ratio::new(p * self.original_k_range.lo(), q),
            Ratio::new(p * self.original_k_range.hi(), q),
        )
    }

    /// Realized offsets restricted to [`Self::offset_window`].
    pub fn offsets_in_window(&self) -> BTreeSet<Ratio<i64>> {
        let (lo, hi) = self.offset_window();
        self.realized_offsets()
            .into_iter()
            .filter(|o| *o >= lo && *o <= hi)
            .collect()
    }
}

/// Rewrites `G(alpha, beta){g}` with `alpha beta = p/q` into the integer-step
/// form with windows `T_{p r/q} D_{1/beta} g`, `r = 0..q`.
pub fn rational_gabor_rewrite(
    g: &FuncExpr,
    alpha: f64,
    beta: f64,
    p: u32,
    q: u32,
    k_range: IndexRange,
    m_range: IndexRange,
) -> Result<RationalRewrite> {
    if g.domain() != Domain::RealLine {
        return Err(Error::DomainMismatch {
            expected: Domain::RealLine,
            found: g.domain(),
        });
    }
    if p == 0 || q == 0 || p.gcd(&q) != 1 {
        return Err(Error::ParamMismatch(format!(
            "p = {p}, q = {q} must be positive and coprime"
        )));
    }
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::ParamMismatch(format!(
            "alpha = {alpha}, beta = {beta} must be positive"
        )));
    }
    let ratio = p as f64 / q as f64;
    if (alpha * beta - ratio).abs() > 1e-12 * ratio {
        return Err(Error::ParamMismatch(format!(
            "alpha * beta = {} but p/q = {ratio}",
            alpha * beta
        )));
    }
    let base = g.dilate(1.0 / beta)?;
    let windows = (0..q)
        .map(|r| base.translate(p as f64 * r as f64 / q as f64))
        .collect::<Result<Vec<_>>>()?;
    let k2 = IndexRange::new(
        index_split(k_range.lo(), q).s,
        index_split(k_range.hi(), q).s,
    )?;
    Ok(RationalRewrite {
        system: GaborSystemSpec::new(windows, p as f64, 1.0, k2, m_range)?,
        p,
        q,
        original_k_range: k_range,
    })
}
