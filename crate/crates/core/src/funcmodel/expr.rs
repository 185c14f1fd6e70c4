use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::table::SampledTable;
use super::warp::{gamma, phi, phi_deriv, phi_inv, unit_phase};
use crate::error::{Error, Result};

/// Where a function lives: `L^2(R)` or `L^2(R_+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    RealLine,
    PositiveHalfLine,
}

/// Elementary operators accepted by [`apply_operator`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Operator {
    /// `f -> a^{1/2} f(a x)`
    Dilate(f64),
    /// `f -> f(x - c)`, real line only.
    Translate(f64),
    /// `f -> e^{2 pi i nu x} f`
    Modulate(f64),
    /// `f -> gamma_m f`, half-line only.
    MdModulate {
        m: i64,
        b: f64,
    },
    ScalarMul(Complex64),
}

#[derive(Debug)]
enum Node {
    Gaussian { center: f64, width: f64 },
    CharInterval { lo: f64, hi: f64 },
    OneSidedExp { rate: f64 },
    Hat { center: f64, halfwidth: f64 },
    Table(SampledTable),
    ScalarMul(Complex64, FuncExpr),
    Sum(Vec<FuncExpr>),
    Dilate(f64, FuncExpr),
    Translate(f64, FuncExpr),
    Modulate(f64, FuncExpr),
    MdModulate { m: i64, b: f64, inner: FuncExpr },
    Warp { b: f64, inner: FuncExpr },
    Unwarp { b: f64, inner: FuncExpr },
}

/// Immutable, lazily evaluated function on the real line or the half-line.
///
/// Operators build new nodes around shared children; nothing is sampled
/// until [`FuncExpr::eval`] is called. Half-line expressions evaluate to zero
/// for `x <= 0`.
#[derive(Debug, Clone)]
pub struct FuncExpr {
    node: Arc<Node>,
    domain: Domain,
}

fn finite(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(name))
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    finite(name, v)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(Error::OutOfRange {
            name,
            detail: format!("{v} must be positive"),
        })
    }
}

fn dilation_base(b: f64) -> Result<f64> {
    finite("b", b)?;
    if b > 1.0 {
        Ok(b)
    } else {
        Err(Error::OutOfRange {
            name: "b",
            detail: format!("b = {b} must exceed 1"),
        })
    }
}

impl FuncExpr {
    fn new(node: Node, domain: Domain) -> Self {
        FuncExpr {
            node: Arc::new(node),
            domain,
        }
    }

    fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain == expected {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                expected,
                found: self.domain,
            })
        }
    }

    /// `exp(-pi ((x - center)/width)^2)`; unnormalized.
    pub fn gaussian(domain: Domain, center: f64, width: f64) -> Result<Self> {
        Ok(Self::new(
            Node::Gaussian {
                center: finite("center", center)?,
                width: positive("width", width)?,
            },
            domain,
        ))
    }

    /// Indicator of `[lo, hi)`.
    pub fn char_interval(domain: Domain, lo: f64, hi: f64) -> Result<Self> {
        finite("lo", lo)?;
        finite("hi", hi)?;
        if !(hi > lo) {
            return Err(Error::OutOfRange {
                name: "hi",
                detail: format!("interval [{lo}, {hi}) is empty"),
            });
        }
        Ok(Self::new(Node::CharInterval { lo, hi }, domain))
    }

    /// `exp(-rate x)` for `x >= 0`, zero for `x < 0`.
    pub fn one_sided_exp(domain: Domain, rate: f64) -> Result<Self> {
        Ok(Self::new(
            Node::OneSidedExp {
                rate: positive("rate", rate)?,
            },
            domain,
        ))
    }

    /// Triangle of height one and half-width `halfwidth` around `center`.
    pub fn hat(domain: Domain, center: f64, halfwidth: f64) -> Result<Self> {
        Ok(Self::new(
            Node::Hat {
                center: finite("center", center)?,
                halfwidth: positive("halfwidth", halfwidth)?,
            },
            domain,
        ))
    }

    pub fn table(domain: Domain, table: SampledTable) -> Self {
        Self::new(Node::Table(table), domain)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn scale(&self, c: Complex64) -> Result<Self> {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::NonFinite("scalar"));
        }
        Ok(Self::new(Node::ScalarMul(c, self.clone()), self.domain))
    }

    pub fn sum(terms: Vec<FuncExpr>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::OutOfRange {
                name: "terms",
                detail: "sum of zero terms".into(),
            });
        };
        let domain = first.domain;
        for t in &terms {
            t.expect_domain(domain)?;
        }
        Ok(Self::new(Node::Sum(terms), domain))
    }

    pub fn dilate(&self, a: f64) -> Result<Self> {
        Ok(Self::new(
            Node::Dilate(positive("a", a)?, self.clone()),
            self.domain,
        ))
    }

    pub fn translate(&self, c: f64) -> Result<Self> {
        self.expect_domain(Domain::RealLine)?;
        Ok(Self::new(
            Node::Translate(finite("c", c)?, self.clone()),
            self.domain,
        ))
    }

    pub fn modulate(&self, nu: f64) -> Result<Self> {
        Ok(Self::new(
            Node::Modulate(finite("nu", nu)?, self.clone()),
            self.domain,
        ))
    }

    pub fn md_modulate(&self, m: i64, b: f64) -> Result<Self> {
        self.expect_domain(Domain::PositiveHalfLine)?;
        Ok(Self::new(
            Node::MdModulate {
                m,
                b: dilation_base(b)?,
                inner: self.clone(),
            },
            self.domain,
        ))
    }

    /// Evaluate at `x`. Deterministic and reentrant.
    pub fn eval(&self, x: f64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if self.domain == Domain::PositiveHalfLine && !(x > 0.0) {
            return zero;
        }
        match &*self.node {
            Node::Gaussian { center, width } => {
                let t = (x - center) / width;
                Complex64::new((-PI * t * t).exp(), 0.0)
            }
            Node::CharInterval { lo, hi } => {
                if x >= *lo && x < *hi {
                    Complex64::new(1.0, 0.0)
                } else {
                    zero
                }
            }
            Node::OneSidedExp { rate } => {
                if x >= 0.0 {
                    Complex64::new((-rate * x).exp(), 0.0)
                } else {
                    zero
                }
            }
            Node::Hat { center, halfwidth } => {
                Complex64::new((1.0 - (x - center).abs() / halfwidth).max(0.0), 0.0)
            }
            Node::Table(t) => t.eval(x),
            Node::ScalarMul(c, f) => c * f.eval(x),
            Node::Sum(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Node::Dilate(a, f) => a.sqrt() * f.eval(a * x),
            Node::Translate(c, f) => f.eval(x - c),
            Node::Modulate(nu, f) => unit_phase(nu * x) * f.eval(x),
            Node::MdModulate { m, b, inner } => {
                // x > 0 was checked above
                gamma(*m, *b, x).unwrap_or(zero) * inner.eval(x)
            }
            Node::Warp { b, inner } => phi_deriv(x, *b).sqrt() * inner.eval(phi(x, *b)),
            Node::Unwarp { b, inner } => match phi_inv(x, *b) {
                Ok(t) => inner.eval(t) / phi_deriv(t, *b).sqrt(),
                Err(_) => zero,
            },
        }
    }

    /// Evaluate at each point of `xs`.
    pub fn sample(&self, xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// `D_phi h = sqrt(phi') (h o phi)`, mapping a half-line expression to the
/// real line.
pub fn warp_op(h: &FuncExpr, b: f64) -> Result<FuncExpr> {
    h.expect_domain(Domain::PositiveHalfLine)?;
    Ok(FuncExpr::new(
        Node::Warp {
            b: dilation_base(b)?,
            inner: h.clone(),
        },
        Domain::RealLine,
    ))
}

/// Inverse of [`warp_op`]: `y -> g(phi^{-1}(y)) / sqrt(phi'(phi^{-1}(y)))`.
pub fn unwarp_op(g: &FuncExpr, b: f64) -> Result<FuncExpr> {
    g.expect_domain(Domain::RealLine)?;
    Ok(FuncExpr::new(
        Node::Unwarp {
            b: dilation_base(b)?,
            inner: g.clone(),
        },
        Domain::PositiveHalfLine,
    ))
}

pub fn apply_operator(expr: &FuncExpr, op: Operator) -> Result<FuncExpr> {
    match op {
        Operator::Dilate(a) => expr.dilate(a),
        Operator::Translate(c) => expr.translate(c),
        Operator::Modulate(nu) => expr.modulate(nu),
        Operator::MdModulate { m, b } => expr.md_modulate(m, b),
        Operator::ScalarMul(c) => expr.scale(c),
    }
}
