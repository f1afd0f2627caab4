//! Dense exact matrices over the integers, rationals and polynomial rings.

mod companion;
mod lattice;
mod smith;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::poly::{IntPoly, RatPoly, Ring};

pub use companion::{is_primitive, CompanionSpec};
pub use lattice::{integer_kernel, lll_reduce, solve_intertwiner_lattice};
pub use smith::{invariant_factors, smith_form, Euclidean, SmithForm};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Ring> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64(x).expect("i64 fits")).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + &(a.clone() * &o[(k, j)]);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        })
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Nonnegative power.
    pub fn pow(&self, mut e: u64) -> Result<Self> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + &(a.clone() * b))
            })
            .collect())
    }

    pub fn vec_mul(&self, v: &[T]) -> Result<Vec<T>> {
        self.transpose().mul_vec(v)
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m[(i * o.rows + k, j * o.cols + l)] = self[(i, j)].clone() * &o[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// Determinant by fraction-free elimination; `exact_div` must divide
    /// exactly whenever the quotient lies in the ring.
    fn bareiss(&self, exact_div: impl Fn(&T, &T) -> T) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    None => return Ok(T::zero()),
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = !sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[(i, j)].clone() * &a[(k, k)] - &(a[(i, k)].clone() * &a[(k, j)]);
                    a[(i, j)] = exact_div(&num, &prev);
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if sign { -d } else { d })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

/// Serialized as a list of rows of decimal strings.
impl<T: fmt::Display> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.rows).map(|i| {
            self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
        }))
    }
}

impl IntMatrix {
    pub fn to_rat(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn det(&self) -> Result<BigInt> {
        self.bareiss(|a, b| a / b)
    }

    /// `det(t*I - M)`, monic.
    pub fn charpoly(&self) -> Result<IntPoly> {
        self.require_square()?;
        let n = self.rows;
        let mut m: Matrix<IntPoly> = self.map(|x| IntPoly::constant(-x.clone()));
        for i in 0..n {
            m[(i, i)] = &m[(i, i)] + &IntPoly::x();
        }
        m.bareiss(|a, b| a.div_exact(b).expect("Bareiss division is exact"))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| !x.is_negative())
    }

    /// First negative entry in row-major order.
    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.data
            .iter()
            .position(|x| x.is_negative())
            .map(|k| (k / self.cols, k % self.cols))
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        match self.first_negative() {
            Some((row, col)) => Err(Error::NegativeEntry { row, col }),
            None => Ok(()),
        }
    }

    pub fn min_entry(&self) -> Option<&BigInt> {
        self.data.iter().min()
    }

    pub fn max_entry(&self) -> Option<&BigInt> {
        self.data.iter().max()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_ok_and(|d| d.abs().is_one())
    }

    /// Exact inverse over the rationals.
    pub fn inverse(&self) -> Result<RatMatrix> {
        self.to_rat().inverse()
    }

    /// Integer power `M^e` for any sign of `e`, over the rationals.
    pub fn pow_signed(&self, e: i64) -> Result<RatMatrix> {
        self.to_rat().pow_signed(e)
    }

    /// Evaluates a polynomial at the matrix.
    pub fn eval_poly(&self, p: &IntPoly) -> Result<IntMatrix> {
        self.require_square()?;
        let mut acc = Self::zeros(self.rows, self.cols);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?.add(&Self::identity(self.rows).scale(c))?;
        }
        Ok(acc)
    }

    /// Gcd of all entries (zero for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.data.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
    }
}

impl RatMatrix {
    pub fn det(&self) -> Result<BigRational> {
        self.bareiss(|a, b| a / b)
    }

    /// `det(t*I - M)` over the rationals, monic.
    pub fn charpoly(&self) -> Result<RatPoly> {
        self.require_square()?;
        let (scaled, den) = self.clear_denominators();
        // M = N/d, so det(tI - M) = d^-n det(d t I - N).
        let p = scaled.charpoly()?;
        let d = BigRational::from_integer(den);
        let n = self.rows;
        Ok(RatPoly::new(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    BigRational::from_integer(c.clone()) * num_traits::pow(d.clone(), i)
                        / num_traits::pow(d.clone(), n)
                })
                .collect(),
        ))
    }

    /// `(N, d)` with `self = N / d` and `d` the least common denominator.
    pub fn clear_denominators(&self) -> (IntMatrix, BigInt) {
        let den = self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let d = BigRational::from_integer(den.clone());
        (self.map(|x| (x * &d).to_integer()), den)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.map(|x| x.to_integer()))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let p = (k..n).find(|&i| !a[(i, k)].is_zero()).ok_or(Error::Singular)?;
            a.swap_rows(p, k);
            inv.swap_rows(p, k);
            let piv = a[(k, k)].recip();
            for j in 0..n {
                a[(k, j)] = &a[(k, j)] * &piv;
                inv[(k, j)] = &inv[(k, j)] * &piv;
            }
            for i in 0..n {
                if i != k && !a[(i, k)].is_zero() {
                    let f = a[(i, k)].clone();
                    for j in 0..n {
                        let (ak, ik) = (a[(k, j)].clone(), inv[(k, j)].clone());
                        a[(i, j)] -= &f * ak;
                        inv[(i, j)] -= &f * ik;
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn pow_signed(&self, e: i64) -> Result<RatMatrix> {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inverse()?.pow(e.unsigned_abs())
        }
    }

    /// Basis of the right kernel over the rationals.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !a[(i, col)].is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let piv = a[(row, col)].recip();
            for j in 0..c {
                a[(row, j)] = &a[(row, j)] * &piv;
            }
            for i in 0..r {
                if i != row && !a[(i, col)].is_zero() {
                    let f = a[(i, col)].clone();
                    for j in 0..c {
                        let v = &f * &a[(row, j)];
                        a[(i, j)] -= v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&fcol| {
                let mut v = vec![BigRational::zero(); c];
                v[fcol] = BigRational::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[(i, fcol)].clone();
                }
                v
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.cols - self.kernel().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn negative_and_positive_powers() {
        let j = im(&[&[4, 1], &[32, 0]]);
        let inv = j.pow_signed(-1).unwrap();
        let expect = RatMatrix::from_rows(vec![vec![q(0, 1), q(1, 32)], vec![q(1, 1), q(-1, 8)]]).unwrap();
        assert_eq!(inv, expect);
        assert_eq!(j.pow(1).unwrap(), j);
        assert_eq!(j.pow(2).unwrap(), im(&[&[48, 4], &[128, 32]]));
        assert_eq!(j.pow(0).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn determinants() {
        assert_eq!(im(&[&[4, 1], &[32, 0]]).det().unwrap(), BigInt::from(-32));
        assert_eq!(IntMatrix::identity(4).det().unwrap(), BigInt::one());
        let circ = im(&[
            &[1, 1, 0, 0, 0],
            &[0, 1, 1, 0, 0],
            &[0, 0, 1, 1, 0],
            &[0, 0, 0, 1, 1],
            &[1, 0, 0, 0, 1],
        ]);
        assert_eq!(circ.det().unwrap(), BigInt::from(2));
        assert!(matches!(im(&[&[1, 2]]).det(), Err(Error::NotSquare { .. })));
        let zero_pivot = im(&[&[0, 1], &[1, 0]]);
        assert_eq!(zero_pivot.det().unwrap(), BigInt::from(-1));
    }

    #[test]
    fn charpoly_of_companion() {
        let j = im(&[&[4, 1], &[32, 0]]);
        assert_eq!(j.charpoly().unwrap(), IntPoly::from_i64s(&[-32, -4, 1]));
    }

    #[test]
    fn rational_charpoly_scales() {
        let m = im(&[&[4, 1], &[32, 0]]).to_rat().scale(&q(1, 2));
        let p = m.charpoly().unwrap();
        assert_eq!(p, RatPoly::new(vec![q(-8, 1), q(-2, 1), q(1, 1)]));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = im(&[&[1, 2], &[2, 4]]).to_rat();
        let k = m.kernel();
        assert_eq!(k, vec![vec![q(-2, 1), q(1, 1)]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn singular_inverse_fails() {
        assert_eq!(im(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
    }
}
