//! Truncated series in y^{−1/2} with matrix coefficients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{rat, ExactMatrix, Rational, GR};

/// Σ_m c_m y^{−m/2}, known exactly for every m ≤ `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPowerSeries {
    dim: usize,
    coeffs: BTreeMap<i32, ExactMatrix>,
    order: i32,
}

impl HalfPowerSeries {
    pub fn zero(dim: usize, order: i32) -> Self {
        Self { dim, coeffs: BTreeMap::new(), order }
    }

    pub fn constant(c: ExactMatrix, order: i32) -> Self {
        let mut s = Self::zero(c.rows(), order);
        s.set(0, c);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    /// Smallest exponent index with a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, m: i32) -> ExactMatrix {
        self.coeffs.get(&m).cloned().unwrap_or_else(|| ExactMatrix::zeros(self.dim, self.dim))
    }

    pub fn set(&mut self, m: i32, c: ExactMatrix) {
        if c.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }

    pub fn add_to(&mut self, m: i32, c: &ExactMatrix) {
        let cur = self.coeff(m);
        self.set(m, &cur + c);
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &ExactMatrix)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: i32) -> Self {
        let order = order.min(self.order);
        Self { dim: self.dim, coeffs: self.coeffs.range(..=order).map(|(m, c)| (*m, c.clone())).collect(), order }
    }

    fn low(&self) -> i32 {
        self.min_exponent().unwrap_or(self.order + 1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.order.min(other.order));
        for (m, c) in self.terms().chain(other.terms()) {
            if m <= out.order {
                out.add_to(m, c);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn map(&self, f: impl Fn(&ExactMatrix) -> ExactMatrix) -> Self {
        let mut out = Self::zero(self.dim, self.order);
        for (m, c) in self.terms() {
            out.set(m, f(c));
        }
        out
    }

    pub fn scale(&self, c: &GR) -> Self {
        self.map(|x| x.scale(c))
    }

    fn bilinear(&self, other: &Self, op: impl Fn(&ExactMatrix, &ExactMatrix) -> ExactMatrix) -> Self {
        let order = (self.order + other.low()).min(other.order + self.low());
        let mut out = Self::zero(self.dim, order);
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                if a + b <= order {
                    out.add_to(a + b, &op(x, y));
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.bilinear(other, |x, y| x * y)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.bilinear(other, |x, y| x.commutator(y))
    }

    /// d/dy: y^{−m/2} ↦ (−m/2) y^{−m/2−1}.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.dim, self.order + 2);
        for (m, c) in self.terms() {
            out.set(m + 2, c.scale_q(&rat(-(m as i64), 2)));
        }
        out
    }

    /// The antiderivative with zero constant term; fails on a y⁻¹ term.
    pub fn antiderivative(&self) -> Result<Self> {
        let mut out = Self::zero(self.dim, self.order - 2);
        for (m, c) in self.terms() {
            if m == 2 {
                return Err(Error::invariant("antiderivative of a y^-1 term is logarithmic"));
            }
            if m - 2 <= out.order {
                out.set(m - 2, c.scale_q(&rat(-2, (m - 2) as i64)));
            }
        }
        Ok(out)
    }

    /// Exact value at y = t², t > 0 rational.
    pub fn eval_at_square(&self, t: &Rational) -> ExactMatrix {
        let tinv = GR::real(t.recip());
        let mut acc = ExactMatrix::zeros(self.dim, self.dim);
        for (m, c) in self.terms() {
            let p = if m >= 0 { pow_gr(&tinv, m as u32) } else { pow_gr(&GR::real(t.clone()), (-m) as u32) };
            acc = &acc + &c.scale(&p);
        }
        acc
    }
}

fn pow_gr(x: &GR, k: u32) -> GR {
    let mut acc = GR::from_int(1);
    for _ in 0..k {
        acc = &acc * x;
    }
    acc
}
