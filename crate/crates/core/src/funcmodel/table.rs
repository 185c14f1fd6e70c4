//! Sampled functions: linear interpolation between nodes, zero outside.
//!
//! CSV layout is a `x,re,im` header followed by one row per node, with
//! strictly increasing `x` and values printed at 17 significant digits.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SampledTable {
    xs: Vec<f64>,
    values: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct Row {
    x: f64,
    re: f64,
    im: f64,
}

/// Shortest form that still carries 17 significant digits.
pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

impl SampledTable {
    pub fn new(xs: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::Table(format!(
                "{} nodes but {} values",
                xs.len(),
                values.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Table("need at least two nodes".into()));
        }
        if xs.iter().any(|x| !x.is_finite())
            || values
                .iter()
                .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::Table("non-finite entry".into()));
        }
        if let Some(w) = xs.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Table(format!(
                "x not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(SampledTable { xs, values })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.xs.len();
        if !(x >= self.xs[0] && x <= self.xs[n - 1]) {
            return Complex64::new(0.0, 0.0);
        }
        let i = self.xs.partition_point(|&t| t <= x) - 1;
        if i == n - 1 {
            return self.values[n - 1];
        }
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let t = (x - x0) / (x1 - x0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.iter().collect::<Vec<_>>() != ["x", "re", "im"] {
            return Err(Error::Table(format!(
                "expected header `x,re,im`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            xs.push(row.x);
            values.push(Complex64::new(row.re, row.im));
        }
        Self::new(xs, values)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_samples_csv(writer, &self.xs, &self.values)
    }
}

pub(crate) fn write_samples_csv<W: Write>(
    writer: W,
    xs: &[f64],
    values: &[Complex64],
) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["x", "re", "im"])?;
    for (x, v) in xs.iter().zip(values) {
        wtr.write_record([fmt17(*x), fmt17(v.re), fmt17(v.im)])?;
    }
    wtr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn interpolates_and_zero_extends() {
        let t = SampledTable::new(
            vec![0.0, 1.0, 3.0],
            vec![c(0.0, 0.0), c(2.0, -2.0), c(4.0, 0.0)],
        )
        .unwrap();
        assert_eq!(t.eval(0.5), c(1.0, -1.0));
        assert_eq!(t.eval(2.0), c(3.0, -1.0));
        assert_eq!(t.eval(3.0), c(4.0, 0.0));
        assert_eq!(t.eval(-0.1), c(0.0, 0.0));
        assert_eq!(t.eval(3.1), c(0.0, 0.0));
    }

    #[test]
    fn rejects_malformed_tables() {
        assert!(SampledTable::new(vec![0.0], vec![c(1.0, 0.0)]).is_err());
        assert!(SampledTable::new(vec![0.0, 0.0], vec![c(1.0, 0.0); 2]).is_err());
        assert!(SampledTable::new(vec![0.0, 1.0], vec![c(1.0, 0.0)]).is_err());
        let bad_header = "t,re,im\n0,1,0\n1,1,0\n";
        assert!(SampledTable::read_csv(bad_header.as_bytes()).is_err());
        let decreasing = "x,re,im\n1,1,0\n0,1,0\n";
        assert!(SampledTable::read_csv(decreasing.as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn csv_roundtrip_is_exact(
            vals in proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..40),
            x0 in -10.0f64..10.0,
        ) {
            let xs: Vec<f64> = (0..vals.len()).map(|i| x0 + 0.37 * i as f64 + 1e-3 * (i * i) as f64).collect();
            let values = vals.iter().map(|&(re, im)| c(re, im)).collect();
            let t = SampledTable::new(xs, values).unwrap();
            let mut buf = Vec::new();
            t.write_csv(&mut buf).unwrap();
            let back = SampledTable::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}
