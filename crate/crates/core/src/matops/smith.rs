use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{Matrix, RatMatrix};
use crate::exact::poly::{RatPoly, Ring};

/// A Euclidean domain, enough for Smith normal forms.
pub trait Euclidean: Ring {
    /// Euclidean size, zero exactly for zero.
    fn size(&self) -> BigInt;
    /// `(q, r)` with `self = q*d + r` and `size(r) < size(d)`.
    fn div_rem_e(&self, d: &Self) -> (Self, Self);
    /// A unit whose product with `self` is the canonical associate.
    fn normalizing_unit(&self) -> Self;
}

impl Euclidean for BigInt {
    fn size(&self) -> BigInt {
        self.abs()
    }
    fn div_rem_e(&self, d: &Self) -> (Self, Self) {
        (self / d, self % d)
    }
    fn normalizing_unit(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
}

impl Euclidean for RatPoly {
    fn size(&self) -> BigInt {
        BigInt::from(self.degree().map_or(0, |d| d + 1))
    }
    fn div_rem_e(&self, d: &Self) -> (Self, Self) {
        self.div_rem(d).expect("nonzero divisor")
    }
    fn normalizing_unit(&self) -> Self {
        match self.lead() {
            Some(l) => RatPoly::constant(l.recip()),
            None => RatPoly::one(),
        }
    }
}

/// `u * a * v = d` with `u`, `v` invertible and `d` diagonal with each
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: std::fmt::Display")]
pub struct SmithForm<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: Euclidean> SmithForm<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn row_axpy<T: Ring>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    // row_dst -= q * row_src
    for j in 0..m.cols() {
        let v = q.clone() * &m[(src, j)];
        let cur = std::mem::replace(&mut m[(dst, j)], T::zero());
        m[(dst, j)] = cur - &v;
    }
}

fn col_axpy<T: Ring>(m: &mut Matrix<T>, dst: usize, src: usize, q: &T) {
    for i in 0..m.rows() {
        let v = m[(i, src)].clone() * q;
        let cur = std::mem::replace(&mut m[(i, dst)], T::zero());
        m[(i, dst)] = cur - &v;
    }
}

pub fn smith_form<T: Euclidean>(a: &Matrix<T>) -> SmithForm<T> {
    let (r, c) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(r);
    let mut v = Matrix::identity(c);
    let minus_one = -T::one();
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize, BigInt)> = None;
            for i in t..r {
                for j in t..c {
                    if !d[(i, j)].is_zero() {
                        let s = d[(i, j)].size();
                        if best.as_ref().is_none_or(|b| s < b.2) {
                            best = Some((i, j, s));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return SmithForm { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if !d[(i, t)].is_zero() {
                    let (q, rem) = d[(i, t)].div_rem_e(&d[(t, t)]);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    if !rem.is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..c {
                if !d[(t, j)].is_zero() {
                    let (q, rem) = d[(t, j)].div_rem_e(&d[(t, t)]);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    if !rem.is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !d[(i, j)].div_rem_e(&d[(t, t)]).1.is_zero())
            });
            match bad {
                Some(i) => {
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        let unit = d[(t, t)].normalizing_unit();
        for j in 0..c {
            d[(t, j)] = d[(t, j)].clone() * &unit;
        }
        for j in 0..r {
            u[(t, j)] = u[(t, j)].clone() * &unit;
        }
    }
    SmithForm { u, d, v }
}

/// Nonconstant invariant factors of `t*I - M` over the rationals, monic and
/// in divisibility order. Two square matrices are similar over the rationals
/// exactly when these lists agree.
pub fn invariant_factors(m: &RatMatrix) -> crate::Result<Vec<RatPoly>> {
    if !m.is_square() {
        return Err(crate::Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut tm: Matrix<RatPoly> = m.map(|x| RatPoly::constant(-x.clone()));
    for i in 0..n {
        tm[(i, i)] = &tm[(i, i)] + &RatPoly::x();
    }
    let s = smith_form(&tm);
    Ok(s.diagonal()
        .into_iter()
        .filter(|p| p.deg() > 0)
        .map(|p| p.monic())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::IntMatrix;
    use num_traits::Zero;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn check(a: &IntMatrix) -> SmithForm<BigInt> {
        let s = smith_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.u.det().unwrap().abs().is_one());
        assert!(s.v.det().unwrap().abs().is_one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        s
    }

    #[test]
    fn companion_smith() {
        let s = check(&im(&[&[4, 1], &[32, 0]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(32)]);
    }

    #[test]
    fn identity_and_chain() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let s = check(&im(&[&[2, 0], &[0, 4]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        let s = check(&im(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check(&im(&[&[2, 4, 6], &[4, 8, 12]]));
        assert_eq!(s.rank(), 1);
        let s = check(&IntMatrix::zeros(2, 3));
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn invariant_factors_of_scalar_and_jordan() {
        let scalar = im(&[&[2, 0], &[0, 2]]).to_rat();
        let f = invariant_factors(&scalar).unwrap();
        let lin = RatPoly::from_i64s(&[-2, 1]);
        assert_eq!(f, vec![lin.clone(), lin.clone()]);
        let jordan = im(&[&[2, 1], &[0, 2]]).to_rat();
        assert_eq!(invariant_factors(&jordan).unwrap(), vec![&lin * &lin]);
    }
}
