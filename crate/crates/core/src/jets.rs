//! Truncated Taylor arithmetic in three variables.
//!
//! [`Jet2`] carries a value together with its gradient and Hessian with
//! respect to the chart coordinates of one evaluation point. Every field and
//! metric component in the kernel is a `Jet2`, so exterior derivatives and
//! Lie derivatives are read off exactly instead of being approximated.
//!
//! [`Jet3`] adds the third-derivative channel. It is only used to evaluate
//! chart embeddings and coordinate changes, where one derivative is consumed
//! to form a Jacobian and the result must still be a full `Jet2`.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Guard for reciprocals and square roots. Values at or below this magnitude
/// are treated as a chart singularity rather than roundoff.
pub const EPS_SING: f64 = 1e-12;

/// Packed position of the Hessian entry `(i, j)` in the upper-triangle layout
/// `(00, 01, 02, 11, 12, 22)`.
pub const HESS_INDEX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

/// Numeric types that field and chart formulas can be written against once
/// and evaluated as plain floats, [`Jet2`] or [`Jet3`].
pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn scale(self, c: f64) -> Self;
    fn recip(self) -> Result<Self>;
    fn sqrt(self) -> Result<Self>;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn atan(self) -> Self;

    fn div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.recip()?)
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::constant(1.0);
        for _ in 0..n {
            acc = acc * self;
        }
        acc
    }

    /// Four-quadrant arctangent. The operands are rotated so that the
    /// remaining angle is near zero, where `atan` is well conditioned.
    fn atan2(y: Self, x: Self) -> Result<Self> {
        let angle = y.value().atan2(x.value());
        let (s, c) = angle.sin_cos();
        let along = x.scale(c) + y.scale(s);
        let across = y.scale(c) - x.scale(s);
        let ratio = across * along.recip().map_err(|_| Error::SingularJet {
            op: "atan2",
            value: along.value(),
        })?;
        let offset = angle - ratio.value().atan();
        Ok(ratio.atan() + Self::constant(offset))
    }
}

fn guard_recip(op: &'static str, value: f64) -> Result<()> {
    if value.abs() > EPS_SING && value.is_finite() {
        Ok(())
    } else {
        Err(Error::SingularJet { op, value })
    }
}

fn guard_sqrt(value: f64) -> Result<()> {
    if value > EPS_SING && value.is_finite() {
        Ok(())
    } else {
        Err(Error::SingularJet { op: "sqrt", value })
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn recip(self) -> Result<Self> {
        guard_recip("recip", self)?;
        Ok(1.0 / self)
    }
    fn div(self, rhs: Self) -> Result<Self> {
        guard_recip("div", rhs)?;
        Ok(self / rhs)
    }
    fn sqrt(self) -> Result<Self> {
        guard_sqrt(self)?;
        Ok(f64::sqrt(self))
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
}

/// Second-order jet: value, gradient and packed symmetric Hessian.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 3],
    /// Upper triangle of the Hessian, row-major: `(00, 01, 02, 11, 12, 22)`.
    pub hess: [f64; 6],
}

impl Jet2 {
    pub const ZERO: Jet2 = Jet2 {
        value: 0.0,
        grad: [0.0; 3],
        hess: [0.0; 6],
    };

    pub const fn constant(c: f64) -> Self {
        Jet2 {
            value: c,
            grad: [0.0; 3],
            hess: [0.0; 6],
        }
    }

    /// The coordinate function `x^axis` evaluated at `x`.
    pub fn coord(axis: usize, x: f64) -> Result<Self> {
        if axis > 2 {
            return Err(Error::AxisOutOfRange(axis));
        }
        let mut grad = [0.0; 3];
        grad[axis] = 1.0;
        Ok(Jet2 {
            value: x,
            grad,
            hess: [0.0; 6],
        })
    }

    /// The three coordinate functions at `p`.
    pub fn seeds(p: [f64; 3]) -> [Jet2; 3] {
        std::array::from_fn(|k| {
            let mut grad = [0.0; 3];
            grad[k] = 1.0;
            Jet2 {
                value: p[k],
                grad,
                hess: [0.0; 6],
            }
        })
    }

    /// Builds a jet from a full Hessian matrix; only the upper triangle is read.
    pub fn from_parts(value: f64, grad: [f64; 3], hess: [[f64; 3]; 3]) -> Self {
        Jet2 {
            value,
            grad,
            hess: [
                hess[0][0], hess[0][1], hess[0][2], hess[1][1], hess[1][2], hess[2][2],
            ],
        }
    }

    #[inline]
    pub fn hess_at(&self, i: usize, j: usize) -> f64 {
        self.hess[HESS_INDEX[i][j]]
    }

    pub fn hess_matrix(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.hess_at(i, j)))
    }

    /// The partial derivative `∂/∂x^axis` as a jet. The third-derivative
    /// information needed for its Hessian is not carried, so that channel is
    /// zero; callers track the lost order through their derivative budget.
    pub fn partial(&self, axis: usize) -> Jet2 {
        Jet2 {
            value: self.grad[axis],
            grad: [
                self.hess_at(axis, 0),
                self.hess_at(axis, 1),
                self.hess_at(axis, 2),
            ],
            hess: [0.0; 6],
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Jet2 {
            value: self.value * c,
            grad: self.grad.map(|g| g * c),
            hess: self.hess.map(|h| h * c),
        }
    }

    /// Chain rule for a univariate function with derivatives `f1`, `f2` at
    /// the current value and function value `f0`.
    pub fn compose(self, f0: f64, f1: f64, f2: f64) -> Self {
        let g = self.grad;
        let mut hess = [0.0; 6];
        for i in 0..3 {
            for j in i..3 {
                let k = HESS_INDEX[i][j];
                hess[k] = f2 * g[i] * g[j] + f1 * self.hess[k];
            }
        }
        Jet2 {
            value: f0,
            grad: g.map(|gi| f1 * gi),
            hess,
        }
    }

    pub fn recip(self) -> Result<Self> {
        guard_recip("recip", self.value)?;
        let r = 1.0 / self.value;
        Ok(self.compose(r, -r * r, 2.0 * r * r * r))
    }

    /// Quotient rule applied channel by channel.
    pub fn div(self, rhs: Jet2) -> Result<Self> {
        guard_recip("div", rhs.value)?;
        let r = 1.0 / rhs.value;
        let q = self.value * r;
        let grad: [f64; 3] = std::array::from_fn(|i| (self.grad[i] - q * rhs.grad[i]) * r);
        let mut hess = [0.0; 6];
        for i in 0..3 {
            for j in i..3 {
                let k = HESS_INDEX[i][j];
                hess[k] = (self.hess[k] - q * rhs.hess[k] - (rhs.grad[i] * grad[j] + rhs.grad[j] * grad[i])) * r;
            }
        }
        Ok(Jet2 { value: q, grad, hess })
    }

    pub fn sqrt(self) -> Result<Self> {
        guard_sqrt(self.value)?;
        let s = self.value.sqrt();
        Ok(self.compose(s, 0.5 / s, -0.25 / (s * self.value)))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn atan(self) -> Self {
        let x = self.value;
        let d = 1.0 / (1.0 + x * x);
        self.compose(x.atan(), d, -2.0 * x * d * d)
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.grad.iter().all(|g| g.is_finite())
            && self.hess.iter().all(|h| h.is_finite())
    }

    /// Largest absolute entry over all channels.
    pub fn max_abs(&self) -> f64 {
        self.grad
            .iter()
            .chain(self.hess.iter())
            .fold(self.value.abs(), |m, x| m.max(x.abs()))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + rhs.value,
            grad: std::array::from_fn(|k| self.grad[k] + rhs.grad[k]),
            hess: std::array::from_fn(|k| self.hess[k] + rhs.hess[k]),
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            value: self.value - rhs.value,
            grad: std::array::from_fn(|k| self.grad[k] - rhs.grad[k]),
            hess: std::array::from_fn(|k| self.hess[k] - rhs.hess[k]),
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        let (a, b) = (self, rhs);
        let mut hess = [0.0; 6];
        for i in 0..3 {
            for j in i..3 {
                let k = HESS_INDEX[i][j];
                hess[k] = (a.value * b.hess[k] + b.value * a.hess[k])
                    + (a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i]);
            }
        }
        Jet2 {
            value: a.value * b.value,
            grad: std::array::from_fn(|k| a.value * b.grad[k] + b.value * a.grad[k]),
            hess,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        self.scale(-1.0)
    }
}

impl AddAssign for Jet2 {
    fn add_assign(&mut self, rhs: Jet2) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet2 {
    fn sub_assign(&mut self, rhs: Jet2) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for Jet2 {
    fn sum<I: Iterator<Item = Jet2>>(iter: I) -> Jet2 {
        iter.fold(Jet2::ZERO, |acc, x| acc + x)
    }
}

impl Scalar for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn scale(self, c: f64) -> Self {
        Jet2::scale(self, c)
    }
    fn recip(self) -> Result<Self> {
        Jet2::recip(self)
    }
    fn div(self, rhs: Self) -> Result<Self> {
        Jet2::div(self, rhs)
    }
    fn sqrt(self) -> Result<Self> {
        Jet2::sqrt(self)
    }
    fn sin(self) -> Self {
        Jet2::sin(self)
    }
    fn cos(self) -> Self {
        Jet2::cos(self)
    }
    fn atan(self) -> Self {
        Jet2::atan(self)
    }
}

type T3 = [[[f64; 3]; 3]; 3];

/// Third-order jet with full (unpacked) derivative tensors.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet3 {
    pub value: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
    pub third: T3,
}

impl Jet3 {
    pub fn constant(c: f64) -> Self {
        Jet3 {
            value: c,
            ..Default::default()
        }
    }

    pub fn seeds(p: [f64; 3]) -> [Jet3; 3] {
        std::array::from_fn(|k| {
            let mut grad = [0.0; 3];
            grad[k] = 1.0;
            Jet3 {
                value: p[k],
                grad,
                ..Default::default()
            }
        })
    }

    /// Drops the third-order channel.
    pub fn truncate(&self) -> Jet2 {
        Jet2::from_parts(self.value, self.grad, self.hess)
    }

    /// `∂/∂x^axis` as a full second-order jet.
    pub fn partial(&self, axis: usize) -> Jet2 {
        Jet2::from_parts(self.grad[axis], self.hess[axis], self.third[axis])
    }

    fn map(self, f: impl Fn(f64) -> f64) -> Self {
        Jet3 {
            value: f(self.value),
            grad: self.grad.map(&f),
            hess: self.hess.map(|r| r.map(&f)),
            third: self.third.map(|m| m.map(|r| r.map(&f))),
        }
    }

    fn zip(self, rhs: Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Jet3 {
            value: f(self.value, rhs.value),
            grad: std::array::from_fn(|i| f(self.grad[i], rhs.grad[i])),
            hess: std::array::from_fn(|i| std::array::from_fn(|j| f(self.hess[i][j], rhs.hess[i][j]))),
            third: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| f(self.third[i][j][k], rhs.third[i][j][k]))
                })
            }),
        }
    }

    /// Chain rule with `f0..f3` the value and first three derivatives of a
    /// univariate function at the current value.
    pub fn compose(self, f0: f64, f1: f64, f2: f64, f3: f64) -> Self {
        let g = self.grad;
        let h = self.hess;
        let t = self.third;
        Jet3 {
            value: f0,
            grad: g.map(|gi| f1 * gi),
            hess: std::array::from_fn(|i| {
                std::array::from_fn(|j| f2 * g[i] * g[j] + f1 * h[i][j])
            }),
            third: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| {
                        f3 * g[i] * g[j] * g[k]
                            + f2 * (h[i][j] * g[k] + h[i][k] * g[j] + h[j][k] * g[i])
                            + f1 * t[i][j][k]
                    })
                })
            }),
        }
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.map(|a| -a)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let (a, b) = (self, rhs);
        Jet3 {
            value: a.value * b.value,
            grad: std::array::from_fn(|i| a.value * b.grad[i] + a.grad[i] * b.value),
            hess: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    a.value * b.hess[i][j]
                        + a.grad[i] * b.grad[j]
                        + a.grad[j] * b.grad[i]
                        + a.hess[i][j] * b.value
                })
            }),
            third: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    std::array::from_fn(|k| {
                        a.value * b.third[i][j][k]
                            + a.grad[i] * b.hess[j][k]
                            + a.grad[j] * b.hess[i][k]
                            + a.grad[k] * b.hess[i][j]
                            + a.hess[i][j] * b.grad[k]
                            + a.hess[i][k] * b.grad[j]
                            + a.hess[j][k] * b.grad[i]
                            + a.third[i][j][k] * b.value
                    })
                })
            }),
        }
    }
}

impl Scalar for Jet3 {
    fn constant(c: f64) -> Self {
        Jet3::constant(c)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn scale(self, c: f64) -> Self {
        self.map(|a| a * c)
    }
    fn recip(self) -> Result<Self> {
        guard_recip("recip", self.value)?;
        let r = 1.0 / self.value;
        Ok(self.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r))
    }
    fn sqrt(self) -> Result<Self> {
        guard_sqrt(self.value)?;
        let x = self.value;
        let s = x.sqrt();
        Ok(self.compose(s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)))
    }
    fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s, -c)
    }
    fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c, s)
    }
    fn atan(self) -> Self {
        let x = self.value;
        let d = 1.0 / (1.0 + x * x);
        // d/dx of -2x d² is (6x² - 2) d³
        self.compose(x.atan(), d, -2.0 * x * d * d, (6.0 * x * x - 2.0) * d * d * d)
    }
}
