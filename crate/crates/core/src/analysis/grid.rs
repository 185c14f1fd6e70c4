use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcmodel::Domain;

/// Uniform grid of `n` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid {
    lo: f64,
    hi: f64,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl TryFrom<RawGrid> for Grid {
    type Error = Error;

    fn try_from(r: RawGrid) -> Result<Self> {
        Grid::new(r.lo, r.hi, r.n)
    }
}

impl Grid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::DegenerateGrid(format!(
                "non-finite bounds [{lo}, {hi}]"
            )));
        }
        if !(hi > lo) {
            return Err(Error::DegenerateGrid(format!(
                "hi = {hi} must exceed lo = {lo}"
            )));
        }
        if n < 2 {
            return Err(Error::DegenerateGrid(format!("n = {n} < 2")));
        }
        Ok(Grid { lo, hi, n })
    }

    /// Grid on `[lo, hi]` (integers) with `per_unit` points per unit length,
    /// placed at half-step offsets so that no point is an integer and every
    /// integer sits midway between two neighbours. With `per_unit` a power
    /// of two all points are exact binary fractions.
    pub fn staggered(lo: i64, hi: i64, per_unit: usize) -> Result<Self> {
        if hi <= lo || per_unit == 0 {
            return Err(Error::DegenerateGrid(format!(
                "staggered grid on [{lo}, {hi}] with {per_unit} points per unit"
            )));
        }
        let step = 1.0 / per_unit as f64;
        let n = (hi - lo) as usize * per_unit;
        Grid::new(lo as f64 + 0.5 * step, hi as f64 - 0.5 * step, n)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Composite trapezoid weights.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.step();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }

    pub fn check_domain(&self, domain: Domain) -> Result<()> {
        if domain == Domain::PositiveHalfLine && !(self.lo > 0.0) {
            return Err(Error::DomainError(format!(
                "half-line grid must start above 0, got lo = {}",
                self.lo
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staggered_points_avoid_integers() {
        let g = Grid::staggered(-3, 4, 1024).unwrap();
        assert_eq!(g.n(), 7 * 1024);
        assert_eq!(g.step(), 1.0 / 1024.0);
        for x in g.points() {
            assert!((x - x.round()).abs() >= 0.5 / 1024.0 - 1e-15);
        }
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Grid::new(0.0, 1.0, 1).is_err());
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, f64::NAN, 10).is_err());
        assert!(serde_json::from_str::<Grid>(r#"{"lo":0,"hi":1,"n":1}"#).is_err());
        assert!(serde_json::from_str::<Grid>(r#"{"lo":0,"hi":1,"n":5,"x":1}"#).is_err());
        let g: Grid = serde_json::from_str(r#"{"lo":0,"hi":1,"n":5}"#).unwrap();
        assert_eq!(g.step(), 0.25);
    }

    #[test]
    fn half_line_needs_positive_lo() {
        let g = Grid::new(0.0, 1.0, 10).unwrap();
        assert!(g.check_domain(Domain::PositiveHalfLine).is_err());
        assert!(g.check_domain(Domain::RealLine).is_ok());
    }
}
