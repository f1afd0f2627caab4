use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::IntMatrix;
use crate::error::{Error, Result};
use crate::exact::poly::IntPoly;

/// Coefficients `m_1..m_N` of the companion-type matrix with first column
/// `(m_1, ..., m_N)^T` and ones on the superdiagonal. Valid specs have
/// nonnegative entries, `m_N != 0` and `gcd{k : m_k != 0} = 1`, which makes
/// the matrix nonsingular and primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CompanionSpec {
    #[serde(serialize_with = "crate::ser::display_seq")]
    m: Vec<BigInt>,
}

impl CompanionSpec {
    pub fn new(m: Vec<BigInt>) -> Result<Self> {
        let n = m.len();
        if n == 0 {
            return Err(Error::InvalidCompanion("empty specification".into()));
        }
        if let Some(k) = m.iter().position(|x| x.is_negative()) {
            return Err(Error::InvalidCompanion(format!("m_{} is negative", k + 1)));
        }
        if m[n - 1].is_zero() {
            return Err(Error::InvalidCompanion(format!("m_{n} is zero")));
        }
        let g = m
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .fold(0usize, |acc, (k, _)| acc.gcd(&(k + 1)));
        if g != 1 {
            return Err(Error::InvalidCompanion(format!(
                "gcd of the indices with nonzero m_k is {g}"
            )));
        }
        Ok(CompanionSpec { m })
    }

    pub fn from_i64s(m: &[i64]) -> Result<Self> {
        Self::new(m.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.m
    }

    pub fn size(&self) -> usize {
        self.m.len()
    }

    pub fn matrix(&self) -> IntMatrix {
        let n = self.m.len();
        let mut a = IntMatrix::zeros(n, n);
        for (i, x) in self.m.iter().enumerate() {
            a[(i, 0)] = x.clone();
            if i + 1 < n {
                a[(i, i + 1)] = BigInt::from(1);
            }
        }
        a
    }

    /// `t^N - m_1 t^(N-1) - ... - m_N`
    pub fn charpoly(&self) -> IntPoly {
        let n = self.m.len();
        let mut cs = vec![BigInt::zero(); n + 1];
        cs[n] = BigInt::from(1);
        for (k, x) in self.m.iter().enumerate() {
            cs[n - 1 - k] = -x.clone();
        }
        IntPoly::new(cs)
    }

    /// Reads the specification back from a matrix of this shape.
    pub fn from_matrix(a: &IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotCompanionForm("not square".into()));
        }
        let n = a.rows();
        for i in 0..n {
            for j in 1..n {
                let expect = if j == i + 1 { 1 } else { 0 };
                if a[(i, j)] != BigInt::from(expect) {
                    return Err(Error::NotCompanionForm(format!(
                        "entry ({i}, {j}) should be {expect}"
                    )));
                }
            }
        }
        Self::new(a.col(0)).map_err(|e| Error::NotCompanionForm(e.to_string()))
    }
}

/// Whether a nonnegative square matrix has an entrywise positive power. Only
/// the zero pattern matters, so powers are taken over the booleans up to
/// the Wielandt bound `N^2 - 2N + 2`.
pub fn is_primitive(a: &IntMatrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    a.require_nonnegative()?;
    let n = a.rows();
    if n == 0 {
        return Ok(false);
    }
    let pattern: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| !a[(i, j)].is_zero()).collect())
        .collect();
    let mut p = pattern.clone();
    let bound = n * n + 2 - 2 * n;
    for _ in 0..bound {
        if p.iter().all(|r| r.iter().all(|&x| x)) {
            return Ok(true);
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if p[i][k] {
                    for j in 0..n {
                        if pattern[k][j] {
                            next[i][j] = true;
                        }
                    }
                }
            }
        }
        p = next;
    }
    Ok(p.iter().all(|r| r.iter().all(|&x| x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn builds_companion_matrices() {
        let s = CompanionSpec::from_i64s(&[4, 32]).unwrap();
        assert_eq!(s.matrix(), im(&[&[4, 1], &[32, 0]]));
        let s = CompanionSpec::from_i64s(&[1, 0, 0, 0, 1]).unwrap();
        assert_eq!(
            s.matrix(),
            im(&[
                &[1, 1, 0, 0, 0],
                &[0, 0, 1, 0, 0],
                &[0, 0, 0, 1, 0],
                &[0, 0, 0, 0, 1],
                &[1, 0, 0, 0, 0],
            ])
        );
        assert_eq!(CompanionSpec::from_matrix(&s.matrix()).unwrap(), s);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(matches!(CompanionSpec::from_i64s(&[0, 2]), Err(Error::InvalidCompanion(_))));
        assert!(matches!(CompanionSpec::from_i64s(&[1, 0]), Err(Error::InvalidCompanion(_))));
        assert!(matches!(CompanionSpec::from_i64s(&[-1, 1]), Err(Error::InvalidCompanion(_))));
        assert!(CompanionSpec::from_matrix(&im(&[&[1, 1], &[1, 1]])).is_err());
    }

    #[test]
    fn companion_charpoly_matches_determinant() {
        let s = CompanionSpec::from_i64s(&[6, 16, 197, 90, 2200, 12000]).unwrap();
        assert_eq!(s.matrix().charpoly().unwrap(), s.charpoly());
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&im(&[&[4, 1], &[32, 0]])).unwrap());
        assert!(!is_primitive(&im(&[&[0, 1], &[1, 0]])).unwrap());
        assert!(is_primitive(&im(&[&[1, 1], &[1, 0]])).unwrap());
        assert!(matches!(
            is_primitive(&im(&[&[1, -1], &[1, 0]])),
            Err(Error::NegativeEntry { row: 0, col: 1 })
        ));
    }
}
