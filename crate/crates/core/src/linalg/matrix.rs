//! Dense matrices over ℚ(i).
//!
//! Matrices act on column vectors. `e(i, j)` is the elementary matrix sending
//! basis vector `j` to basis vector `i`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::{Rational, GR};
use super::solve::{rref, solve_linear};

pub type Vector = Vec<GR>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GR>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![GR::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GR::one();
        }
        m
    }

    pub fn scalar(n: usize, c: GR) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diag(entries: &[GR]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, c) in entries.iter().enumerate() {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GR>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Integer-entry convenience constructor, row-major.
    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self { rows, cols, data: entries.iter().map(|&x| GR::from_int(x)).collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), r);
            for (i, x) in v.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// The elementary matrix E_{ij} in dimension n.
    pub fn e(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = GR::one();
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn entries(&self) -> &[GR] {
        &self.data
    }

    /// Row-major flattening, used to treat gl(V) as a vector space.
    pub fn to_vec(&self) -> Vector {
        self.data.clone()
    }

    pub fn from_vec(rows: usize, cols: usize, v: Vector) -> Self {
        assert_eq!(v.len(), rows * cols);
        Self { rows, cols, data: v }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.is_real())
    }

    pub fn map(&self, f: impl Fn(&GR) -> GR) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, c: &GR) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|x| x * c)
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        self.map(|x| x.scale(q))
    }

    pub fn trace(&self) -> GR {
        assert!(self.is_square());
        let mut t = GR::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    pub fn apply(&self, v: &[GR]) -> Vector {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut s = GR::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        s += a * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::identity(self.rows);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows).is_zero()
    }

    /// exp(X) for nilpotent X, as the finite Taylor sum. Panics if X is not nilpotent.
    pub fn exp_nilpotent(&self) -> Self {
        let n = self.rows;
        let mut result = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=n {
            term = (&term * self).scale_q(&super::gaussian::rat(1, k as i64));
            if term.is_zero() {
                return result;
            }
            result = &result + &term;
        }
        assert!((&term * self).is_zero(), "exp_nilpotent called on a non-nilpotent matrix");
        result
    }

    /// log(U) for unipotent U. Panics if U − 1 is not nilpotent.
    pub fn log_unipotent(&self) -> Self {
        let n = self.rows;
        let x = self - &Self::identity(n);
        let mut result = Self::zeros(n, n);
        let mut term = Self::identity(n);
        for k in 1..=n {
            term = &term * &x;
            if term.is_zero() {
                return result;
            }
            let c = super::gaussian::rat(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            result = &result + &term.scale_q(&c);
        }
        assert!((&term * &x).is_zero(), "log_unipotent called on a non-unipotent matrix");
        result
    }

    pub fn rank(&self) -> usize {
        rref(self.row_vecs()).1.len()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![GR::zero(); n];
            e[j] = GR::one();
            let (x, kernel) = solve_linear(self, &e);
            if !kernel.is_empty() {
                return None;
            }
            cols.push(x?);
        }
        Some(Self::from_columns(&cols))
    }

    /// Ad(g)X = gXg⁻¹ given g and g⁻¹.
    pub fn conjugate_by(&self, g: &Self, g_inv: &Self) -> Self {
        &(g * self) * g_inv
    }

    /// Sum of squared moduli of entries, as a float (for diagnostics).
    pub fn frobenius_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|x| super::gaussian::rat_to_f64(&x.norm_sq()))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|x| super::gaussian::rat_to_f64(&x.norm_sq()).sqrt())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = GR;
    fn index(&self, (i, j): (usize, usize)) -> &GR {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GR {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, 'b> Add<&'b ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &'b ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a, 'b> Sub<&'b ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &'b ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a, 'b> Mul<&'b ExactMatrix> for &'a ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &'b ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: ExactMatrix) -> ExactMatrix {
        &self + &rhs
    }
}

impl Sub for ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: ExactMatrix) -> ExactMatrix {
        &self - &rhs
    }
}

impl Mul for ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: ExactMatrix) -> ExactMatrix {
        &self * &rhs
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        self.map(|x| -x)
    }
}

impl Neg for ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        -&self
    }
}

/// Serialized as a list of rows of exact entries; the inverse of `from_rows`.
impl serde::Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.row_vecs(), s)
    }
}

impl<'de> serde::Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<GR>>::deserialize(d)?;
        let w = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != w) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(ExactMatrix::from_rows(rows))
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|s| s.len()).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

/// Hermitian pairing `⟨u, v⟩ = Σ u_i conj(v_i)`.
pub fn dot_h(u: &[GR], v: &[GR]) -> GR {
    u.iter().zip(v).map(|(a, b)| a * &b.conj()).fold(GR::zero(), |s, x| s + x)
}

pub fn vec_add(u: &[GR], v: &[GR]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a + b).collect()
}

pub fn vec_sub(u: &[GR], v: &[GR]) -> Vector {
    u.iter().zip(v).map(|(a, b)| a - b).collect()
}

pub fn vec_scale(u: &[GR], c: &GR) -> Vector {
    u.iter().map(|a| a * c).collect()
}

pub fn vec_conj(u: &[GR]) -> Vector {
    u.iter().map(|a| a.conj()).collect()
}

pub fn vec_is_zero(u: &[GR]) -> bool {
    u.iter().all(|a| a.is_zero())
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = vec![GR::zero(); n];
    v[i] = GR::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_log_inverse() {
        let n = ExactMatrix::from_ints(3, 3, &[0, 0, 0, 1, 0, 0, 2, 3, 0]);
        let g = n.exp_nilpotent();
        assert_eq!(g.log_unipotent(), n);
        assert_eq!(&g * &(-&n).exp_nilpotent(), ExactMatrix::identity(3));
        assert_eq!(&g * &g.inverse().unwrap(), ExactMatrix::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = ExactMatrix::from_ints(2, 2, &[1, 2, 2, 4]);
        assert!(m.inverse().is_none());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn elementary_convention() {
        // E_{21} sends the first basis vector to the second.
        let e = ExactMatrix::e(2, 1, 0);
        assert_eq!(e.apply(&unit_vector(2, 0)), unit_vector(2, 1));
    }
}
