//! Finite truncations of dilation-and-modulation and Gabor systems.
//!
//! An MD system `{a^{j/2} gamma_m(x) h_l(a^j x)}` maps under the warp
//! `D_phi` onto the multi-window Gabor system with windows
//! `g_{l,r} = D_phi D_{a^r} h_l`, `r = 0..q`, translation step `p` and
//! modulation step `1`. Element `(j, m, l)` with `j = s q + r` goes to
//! `(k = -s, m, (l, r))` up to the unimodular factor `e^{2 pi i m/(b-1)}`.

mod rewrite;
mod spec_json;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::{warp_op, Domain, FuncExpr};
use crate::params::{index_split, DilationParams};

pub use rewrite::{rational_gabor_rewrite, RationalRewrite};
pub use spec_json::{GeneratorDescriptor, SystemSpecJson};

/// Inclusive integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct IndexRange {
    lo: i64,
    hi: i64,
}

impl IndexRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::OutOfRange {
                name: "range",
                detail: format!("empty index range [{lo}, {hi}]"),
            });
        }
        Ok(IndexRange { lo, hi })
    }

    /// `[-n, n]`
    pub fn symmetric(n: i64) -> Self {
        let n = n.abs();
        IndexRange { lo: -n, hi: n }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: i64) -> bool {
        (self.lo..=self.hi).contains(&i)
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Largest absolute value in the range.
    pub fn max_abs(&self) -> i64 {
        self.lo.abs().max(self.hi.abs())
    }
}

impl TryFrom<[i64; 2]> for IndexRange {
    type Error = Error;

    fn try_from(v: [i64; 2]) -> Result<Self> {
        IndexRange::new(v[0], v[1])
    }
}

impl From<IndexRange> for [i64; 2] {
    fn from(r: IndexRange) -> Self {
        [r.lo, r.hi]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MdIndex {
    pub l: usize,
    pub j: i64,
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GaborIndex {
    pub window: usize,
    pub k: i64,
    pub m: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementLabel {
    Md(MdIndex),
    Gabor(GaborIndex),
}

/// A finite, ordered list of functions on one domain.
#[derive(Debug, Clone)]
pub struct Family {
    pub domain: Domain,
    pub elements: Vec<FuncExpr>,
    pub labels: Vec<ElementLabel>,
}

impl Family {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct MdSystemSpec {
    generators: Vec<FuncExpr>,
    params: DilationParams,
    j_range: IndexRange,
    m_range: IndexRange,
}

impl MdSystemSpec {
    pub fn new(
        generators: Vec<FuncExpr>,
        params: DilationParams,
        j_range: IndexRange,
        m_range: IndexRange,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::OutOfRange {
                name: "generators",
                detail: "at least one generator is required".into(),
            });
        }
        for g in &generators {
            if g.domain() != Domain::PositiveHalfLine {
                return Err(Error::DomainMismatch {
                    expected: Domain::PositiveHalfLine,
                    found: g.domain(),
                });
            }
        }
        Ok(MdSystemSpec {
            generators,
            params,
            j_range,
            m_range,
        })
    }

    pub fn generators(&self) -> &[FuncExpr] {
        &self.generators
    }

    pub fn params(&self) -> &DilationParams {
        &self.params
    }

    pub fn j_range(&self) -> IndexRange {
        self.j_range
    }

    pub fn m_range(&self) -> IndexRange {
        self.m_range
    }

    /// `gamma_m(x) a^{j/2} h_l(a^j x)`
    pub fn md_element(&self, j: i64, m: i64, l: usize) -> Result<FuncExpr> {
        let h = self.generators.get(l).ok_or(Error::IndexOutOfRange {
            what: "generator",
            index: l,
            len: self.generators.len(),
        })?;
        h.dilate(self.params.a_pow(j))?
            .md_modulate(m, self.params.b())
    }

    /// Truncated index set in `(l, j, m)` lexicographic order.
    pub fn indices(&self) -> Vec<MdIndex> {
        let mut out =
            Vec::with_capacity(self.generators.len() * self.j_range.len() * self.m_range.len());
        for l in 0..self.generators.len() {
            for j in self.j_range.iter() {
                for m in self.m_range.iter() {
                    out.push(MdIndex { l, j, m });
                }
            }
        }
        out
    }

    pub fn family(&self) -> Result<Family> {
        let labels: Vec<_> = self.indices().into_iter().map(ElementLabel::Md).collect();
        let elements = labels
            .iter()
            .map(|lab| match lab {
                ElementLabel::Md(i) => self.md_element(i.j, i.m, i.l),
                ElementLabel::Gabor(_) => unreachable!(),
            })
            .collect::<Result<_>>()?;
        Ok(Family {
            domain: Domain::PositiveHalfLine,
            elements,
            labels,
        })
    }

    /// The family pushed through `D_phi`, element by element.
    pub fn warped_family(&self) -> Result<Family> {
        let fam = self.family()?;
        let b = self.params.b();
        let elements = fam
            .elements
            .iter()
            .map(|e| warp_op(e, b))
            .collect::<Result<_>>()?;
        Ok(Family {
            domain: Domain::RealLine,
            elements,
            labels: fam.labels,
        })
    }
}

#[derive(Debug, Clone)]
pub struct GaborSystemSpec {
    generators: Vec<FuncExpr>,
    alpha: f64,
    beta: f64,
    k_range: IndexRange,
    m_range: IndexRange,
}

impl GaborSystemSpec {
    pub fn new(
        generators: Vec<FuncExpr>,
        alpha: f64,
        beta: f64,
        k_range: IndexRange,
        m_range: IndexRange,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::OutOfRange {
                name: "generators",
                detail: "at least one window is required".into(),
            });
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v <= 0.0 {
                return Err(Error::OutOfRange {
                    name,
                    detail: format!("{v} must be positive"),
                });
            }
        }
        for g in &generators {
            if g.domain() != Domain::RealLine {
                return Err(Error::DomainMismatch {
                    expected: Domain::RealLine,
                    found: g.domain(),
                });
            }
        }
        Ok(GaborSystemSpec {
            generators,
            alpha,
            beta,
            k_range,
            m_range,
        })
    }

    pub fn generators(&self) -> &[FuncExpr] {
        &self.generators
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn k_range(&self) -> IndexRange {
        self.k_range
    }

    pub fn m_range(&self) -> IndexRange {
        self.m_range
    }

    /// `M_{beta m} T_{alpha k} g_w`
    pub fn gabor_element(&self, k: i64, m: i64, window: usize) -> Result<FuncExpr> {
        let g = self.generators.get(window).ok_or(Error::IndexOutOfRange {
            what: "window",
            index: window,
            len: self.generators.len(),
        })?;
        g.translate(self.alpha * k as f64)?
            .modulate(self.beta * m as f64)
    }

    /// Truncated index set in `(window, k, m)` lexicographic order.
    pub fn indices(&self) -> Vec<GaborIndex> {
        let mut out =
            Vec::with_capacity(self.generators.len() * self.k_range.len() * self.m_range.len());
        for window in 0..self.generators.len() {
            for k in self.k_range.iter() {
                for m in self.m_range.iter() {
                    out.push(GaborIndex { window, k, m });
                }
            }
        }
        out
    }

    pub fn family(&self) -> Result<Family> {
        let idx = self.indices();
        let elements = idx
            .iter()
            .map(|i| self.gabor_element(i.k, i.m, i.window))
            .collect::<Result<_>>()?;
        Ok(Family {
            domain: Domain::RealLine,
            elements,
            labels: idx.into_iter().map(ElementLabel::Gabor).collect(),
        })
    }
}

/// Window position of `g_{l,r}` in the output of [`md_to_gabor`].
pub fn window_index(l: usize, r: u32, q: u32) -> usize {
    l * q as usize + r as usize
}

/// Equivalent multi-window Gabor system: `alpha = p`, `beta = 1`, windows
/// `D_phi D_{a^r} h_l` ordered by `(l, r)`.
pub fn md_to_gabor(spec: &MdSystemSpec) -> Result<GaborSystemSpec> {
    let prm = spec.params();
    let b = prm.b();
    let mut windows = Vec::with_capacity(spec.generators().len() * prm.q() as usize);
    for h in spec.generators() {
        for r in 0..prm.q() {
            windows.push(warp_op(&h.dilate(prm.a_pow(r as i64))?, b)?);
        }
    }
    let s_lo = index_split(spec.j_range().lo(), prm.q()).s;
    let s_hi = index_split(spec.j_range().hi(), prm.q()).s;
    GaborSystemSpec::new(
        windows,
        prm.p() as f64,
        1.0,
        IndexRange::new(-s_hi, -s_lo)?,
        spec.m_range(),
    )
}

/// Target of an MD index under the warp, with its unimodular factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexPhaseMap {
    pub source: MdIndex,
    pub target: GaborIndex,
    /// `(l, r)` pair behind `target.window`.
    pub window: (usize, u32),
    pub phase: Complex64,
}

/// `c_m = e^{2 pi i m/(b-1)}`
pub fn md_phase(m: i64, b: f64) -> Complex64 {
    crate::funcmodel::unit_phase(m as f64 / (b - 1.0))
}

pub fn md_index_to_gabor_index(j: i64, m: i64, l: usize, params: &DilationParams) -> IndexPhaseMap {
    let split = params.split(j);
    IndexPhaseMap {
        source: MdIndex { l, j, m },
        target: GaborIndex {
            window: window_index(l, split.r, params.q()),
            k: -split.s,
            m,
        },
        window: (l, split.r),
        phase: md_phase(m, params.b()),
    }
}

/// Either kind of system, as consumed by the analysis routines.
#[derive(Debug, Clone)]
pub enum System {
    Md(MdSystemSpec),
    Gabor(GaborSystemSpec),
}

impl System {
    /// Real-line family used for quadrature; MD systems are warped.
    pub fn analysis_family(&self) -> Result<Family> {
        match self {
            System::Md(s) => s.warped_family(),
            System::Gabor(s) => s.family(),
        }
    }

    /// Moves `f` onto the real line if it belongs to the MD side.
    pub fn to_analysis_domain(&self, f: &FuncExpr) -> Result<FuncExpr> {
        match self {
            System::Md(s) => warp_op(f, s.params().b()),
            System::Gabor(_) => {
                if f.domain() != Domain::RealLine {
                    return Err(Error::DomainMismatch {
                        expected: Domain::RealLine,
                        found: f.domain(),
                    });
                }
                Ok(f.clone())
            }
        }
    }

    /// Modulation step on the analysis side.
    pub fn beta(&self) -> f64 {
        match self {
            System::Md(_) => 1.0,
            System::Gabor(s) => s.beta(),
        }
    }

    pub fn m_range(&self) -> IndexRange {
        match self {
            System::Md(s) => s.m_range(),
            System::Gabor(s) => s.m_range(),
        }
    }

    pub fn max_modulation_frequency(&self) -> f64 {
        self.beta() * self.m_range().max_abs() as f64
    }

    pub fn kind(&self) -> &'static str {
        match self {
            System::Md(_) => "md",
            System::Gabor(_) => "gabor",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::make_params;

    fn chi_half(b: f64) -> FuncExpr {
        FuncExpr::char_interval(Domain::PositiveHalfLine, 1.0, b).unwrap()
    }

    fn md(b: f64, p: u32, q: u32, gens: Vec<FuncExpr>) -> MdSystemSpec {
        MdSystemSpec::new(
            gens,
            make_params(b, p, q).unwrap(),
            IndexRange::symmetric(2),
            IndexRange::symmetric(2),
        )
        .unwrap()
    }

    #[test]
    fn identity_element() {
        let h = FuncExpr::gaussian(Domain::PositiveHalfLine, 1.5, 0.5).unwrap();
        let spec = md(2.0, 1, 2, vec![h.clone()]);
        let e = spec.md_element(0, 0, 0).unwrap();
        for i in 1..100 {
            let x = 0.05 * i as f64;
            assert!((e.eval(x) - h.eval(x)).norm() < 1e-15);
        }
        assert!(matches!(
            spec.md_element(0, 0, 1),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn md_element_support() {
        let b = 2.0;
        let spec = md(b, 1, 2, vec![chi_half(b)]);
        let a = spec.params().a();
        for j in -2i64..=2 {
            let e = spec.md_element(j, 1, 0).unwrap();
            let (lo, hi) = (a.powi(-j as i32), a.powi(-j as i32) * b);
            for x in [lo * 1.001, (lo + hi) / 2.0, hi * 0.999] {
                assert!(e.eval(x).norm() > 0.0, "j={j} x={x}");
            }
            for x in [lo * 0.999, hi * 1.001] {
                assert_eq!(e.eval(x).norm(), 0.0, "j={j} x={x}");
            }
        }
    }

    #[test]
    fn gabor_element_support() {
        let g = FuncExpr::char_interval(Domain::RealLine, 0.0, 1.0).unwrap();
        let spec = GaborSystemSpec::new(
            vec![g],
            2.0,
            1.0,
            IndexRange::symmetric(3),
            IndexRange::symmetric(2),
        )
        .unwrap();
        for k in -3i64..=3 {
            let e = spec.gabor_element(k, 2, 0).unwrap();
            let lo = 2.0 * k as f64;
            assert!((e.eval(lo + 0.5).norm() - 1.0).abs() < 1e-15);
            assert_eq!(e.eval(lo - 0.01).norm(), 0.0);
            assert_eq!(e.eval(lo + 1.0).norm(), 0.0);
        }
        let e = spec.gabor_element(0, 0, 0).unwrap();
        assert_eq!(e.eval(0.3), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn md_to_gabor_shapes() {
        let crit = md_to_gabor(&md(2.0, 1, 1, vec![chi_half(2.0)])).unwrap();
        assert_eq!(
            (crit.alpha(), crit.beta(), crit.generators().len()),
            (1.0, 1.0, 1)
        );

        let over = md_to_gabor(&md(2.0, 1, 2, vec![chi_half(2.0)])).unwrap();
        assert_eq!(
            (over.alpha(), over.beta(), over.generators().len()),
            (1.0, 1.0, 2)
        );

        let h2 = FuncExpr::gaussian(Domain::PositiveHalfLine, 2.0, 1.0).unwrap();
        let multi = md_to_gabor(&md(3.0, 2, 3, vec![chi_half(3.0), h2])).unwrap();
        assert_eq!((multi.alpha(), multi.generators().len()), (2.0, 6));
    }

    #[test]
    fn md_to_gabor_windows_are_warped_dilates() {
        let b = 2.0;
        let h = chi_half(b);
        let spec = md(b, 1, 2, vec![h.clone()]);
        let gab = md_to_gabor(&spec).unwrap();
        let expected = warp_op(&h.dilate(2f64.sqrt()).unwrap(), b).unwrap();
        for i in -300..300 {
            let x = 0.01 * i as f64 + 0.003;
            assert!((gab.generators()[1].eval(x) - expected.eval(x)).norm() < 1e-14);
        }
    }

    #[test]
    fn k_range_is_mirrored_split() {
        let spec = MdSystemSpec::new(
            vec![chi_half(2.0)],
            make_params(2.0, 2, 3).unwrap(),
            IndexRange::new(-4, 7).unwrap(),
            IndexRange::symmetric(1),
        )
        .unwrap();
        let gab = md_to_gabor(&spec).unwrap();
        // s runs over floor(-4/3) = -2 ..= floor(7/3) = 2
        assert_eq!(gab.k_range(), IndexRange::new(-2, 2).unwrap());
    }

    #[test]
    fn index_map_examples() {
        let prm = make_params(2.0, 1, 1).unwrap();
        let map = md_index_to_gabor_index(0, 0, 0, &prm);
        assert_eq!((map.target.k, map.window.1), (0, 0));
        assert!((map.phase - 1.0).norm() < 1e-15);

        let prm = make_params(2.0, 2, 3).unwrap();
        let map = md_index_to_gabor_index(5, 0, 0, &prm);
        assert_eq!((map.target.k, map.window.1, map.target.m), (-1, 2, 0));
        assert!((map.phase - 1.0).norm() < 1e-15);

        let prm = make_params(3.0, 1, 1).unwrap();
        let map = md_index_to_gabor_index(0, 1, 0, &prm);
        assert!((map.phase + 1.0).norm() < 1e-15);
    }

    #[test]
    fn index_map_is_bijective_on_residue_blocks() {
        let prm = make_params(3.0, 2, 3).unwrap();
        let mut seen = std::collections::HashSet::new();
        for j in -6i64..=5 {
            for m in -2i64..=2 {
                for l in 0..2 {
                    let map = md_index_to_gabor_index(j, m, l, &prm);
                    assert!((map.phase.norm() - 1.0).abs() < 1e-15);
                    assert!(seen.insert(map.target));
                }
            }
        }
        assert_eq!(seen.len(), 12 * 5 * 2);
        let ks: std::collections::BTreeSet<_> = seen.iter().map(|t| t.k).collect();
        assert_eq!(ks.into_iter().collect::<Vec<_>>(), vec![-1, 0, 1, 2]);
        assert_eq!(seen.iter().map(|t| t.window).max(), Some(5));
    }

    #[test]
    fn rejects_wrong_domains_and_empty_ranges() {
        let real = FuncExpr::gaussian(Domain::RealLine, 0.0, 1.0).unwrap();
        let prm = make_params(2.0, 1, 1).unwrap();
        let r = IndexRange::symmetric(1);
        assert!(MdSystemSpec::new(vec![real.clone()], prm, r, r).is_err());
        assert!(MdSystemSpec::new(vec![], prm, r, r).is_err());
        assert!(GaborSystemSpec::new(vec![chi_half(2.0)], 1.0, 1.0, r, r).is_err());
        assert!(GaborSystemSpec::new(vec![real], 0.0, 1.0, r, r).is_err());
        assert!(IndexRange::new(2, 1).is_err());
    }
}
