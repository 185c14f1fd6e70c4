//! Rational dilation parameters.
//!
//! A dilation-and-modulation system is rationally sampled when
//! `log_b(a) = p/q` with `p, q` coprime. The pair `(b, p/q)` is the input and
//! `a = b^(p/q)` is derived, so `a^q = b^p` holds by construction.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance for `a^q = b^p`.
pub const POWER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationParams {
    b: f64,
    p: u32,
    q: u32,
    a: f64,
    reduced: bool,
}

/// Sampling regime determined by `log_b(a) = p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Oversampled,
    Critical,
    Undersampled,
}

impl Sampling {
    pub fn as_str(self) -> &'static str {
        match self {
            Sampling::Oversampled => "oversampled",
            Sampling::Critical => "critical",
            Sampling::Undersampled => "undersampled",
        }
    }
}

/// `j = s*q + r` with `0 <= r < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct IndexSplit {
    pub s: i64,
    pub r: u32,
}

pub fn make_params(b: f64, p: u32, q: u32) -> Result<DilationParams> {
    if !b.is_finite() {
        return Err(Error::NonFinite("b"));
    }
    if b <= 1.0 {
        return Err(Error::OutOfRange {
            name: "b",
            detail: format!("b = {b} must exceed 1"),
        });
    }
    if p == 0 {
        return Err(Error::ZeroIndex("p"));
    }
    if q == 0 {
        return Err(Error::ZeroIndex("q"));
    }
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    let a = b.powf(p as f64 / q as f64);
    if !a.is_finite() {
        return Err(Error::NonFinite("a"));
    }
    let params = DilationParams {
        b,
        p,
        q,
        a,
        reduced: g != 1,
    };
    let bp = b.powi(p as i32);
    let aq = a.powi(q as i32);
    if !((aq - bp).abs() <= POWER_TOLERANCE * bp) {
        return Err(Error::OutOfRange {
            name: "p/q",
            detail: format!("a^q = {aq} and b^p = {bp} disagree beyond tolerance"),
        });
    }
    Ok(params)
}

pub fn index_split(j: i64, q: u32) -> IndexSplit {
    assert!(q >= 1, "index_split requires q >= 1");
    let q = q as i64;
    IndexSplit {
        s: j.div_euclid(q),
        r: j.rem_euclid(q) as u32,
    }
}

impl DilationParams {
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Whether the `(p, q)` given to [`make_params`] shared a common factor.
    pub fn was_reduced(&self) -> bool {
        self.reduced
    }

    /// `log_b(a) = p/q`.
    pub fn log_b_a(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    pub fn sampling(&self) -> Sampling {
        match self.p.cmp(&self.q) {
            std::cmp::Ordering::Less => Sampling::Oversampled,
            std::cmp::Ordering::Equal => Sampling::Critical,
            std::cmp::Ordering::Greater => Sampling::Undersampled,
        }
    }

    pub fn split(&self, j: i64) -> IndexSplit {
        index_split(j, self.q)
    }

    /// `a^j`, evaluated as `b^(p s) * a^r` so that multiples of `q` land on
    /// exact powers of `b`.
    pub fn a_pow(&self, j: i64) -> f64 {
        let IndexSplit { s, r } = self.split(j);
        self.b.powi((self.p as i64 * s) as i32) * self.a.powi(r as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn critical_sampling_gives_a_equal_b() {
        let prm = make_params(2.0, 1, 1).unwrap();
        assert_eq!(prm.a(), 2.0);
        assert_eq!(prm.sampling(), Sampling::Critical);
        assert!(!prm.was_reduced());
    }

    #[test]
    fn half_power() {
        let prm = make_params(2.0, 1, 2).unwrap();
        assert!((prm.a() - std::f64::consts::SQRT_2).abs() < 1e-10);
        assert_eq!(prm.sampling(), Sampling::Oversampled);
    }

    #[test]
    fn reduces_common_factor() {
        let prm = make_params(4.0, 2, 4).unwrap();
        assert_eq!((prm.p(), prm.q()), (1, 2));
        assert!(prm.was_reduced());
        assert!((prm.a() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            make_params(1.0, 1, 1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            make_params(0.5, 1, 1),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            make_params(f64::NAN, 1, 1),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            make_params(f64::INFINITY, 1, 1),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(make_params(2.0, 0, 1), Err(Error::ZeroIndex("p"))));
        assert!(matches!(make_params(2.0, 1, 0), Err(Error::ZeroIndex("q"))));
    }

    #[test]
    fn split_examples() {
        assert_eq!(index_split(5, 3), IndexSplit { s: 1, r: 2 });
        assert_eq!(index_split(-1, 3), IndexSplit { s: -1, r: 2 });
        assert_eq!(index_split(0, 1), IndexSplit { s: 0, r: 0 });
    }

    #[test]
    fn a_pow_hits_powers_of_b() {
        let prm = make_params(2.0, 1, 2).unwrap();
        for s in -5..=5 {
            assert_eq!(prm.a_pow(2 * s), 2f64.powi(s as i32));
        }
        assert!((prm.a_pow(3) - 2f64.powf(1.5)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn split_recombines(j in -1_000_000i64..=1_000_000, q in 1u32..50) {
            let IndexSplit { s, r } = index_split(j, q);
            prop_assert_eq!(s * q as i64 + r as i64, j);
            prop_assert!(r < q);
        }

        #[test]
        fn reduction_is_idempotent(b in 1.01f64..10.0, p in 1u32..12, q in 1u32..12, k in 1u32..6) {
            let base = make_params(b, p, q).unwrap();
            let scaled = make_params(b, k * p, k * q).unwrap();
            prop_assert_eq!((base.p(), base.q(), base.a()), (scaled.p(), scaled.q(), scaled.a()));
        }

        #[test]
        fn power_relation_holds(b in 1.01f64..10.0, p in 1u32..8, q in 1u32..8) {
            let prm = make_params(b, p, q).unwrap();
            let bp = b.powi(prm.p() as i32);
            prop_assert!((prm.a().powi(prm.q() as i32) - bp).abs() <= POWER_TOLERANCE * bp);
        }
    }
}
