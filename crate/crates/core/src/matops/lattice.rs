use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{smith_form, IntMatrix};
use crate::error::{Error, Result};

/// Z-basis of the integer right kernel, LLL-reduced.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_form(a);
    let rank = s.rank();
    let basis = (rank..a.cols()).map(|j| s.v.col(j)).collect();
    lll_reduce(basis)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

/// Nearest integer to `a / b` for `b > 0`, ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    Integer::div_floor(&(a * &two + b), &(b * &two))
}

/// Exact LLL reduction (delta = 3/4) of linearly independent integer
/// vectors, in the all-integer form: `d[i]` are the Gram determinants and
/// `lam[k][j] = d[j+1] * mu[k][j]`, so no fractions ever appear.
pub fn lll_reduce(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    if n == 0 {
        return b;
    }
    // d[0] = 1 and d[i + 1] belongs to vector i.
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    let mut kmax = 0;
    let mut k = 1;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    d[k + 1] = u;
                }
            }
        }
        loop {
            reduce(&mut b, &mut lam, &d, k, k - 1);
            let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
            let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs >= rhs {
                break;
            }
            swap(&mut b, &mut lam, &mut d, k, kmax);
            if k > 1 {
                k -= 1;
            }
        }
        for l in (0..k.saturating_sub(1)).rev() {
            reduce(&mut b, &mut lam, &d, k, l);
        }
        k += 1;
    }
    // Canonical sign: first nonzero entry positive.
    for v in b.iter_mut() {
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    b
}

fn reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let dl = &d[l + 1];
    if BigInt::from(2) * lam[k][l].abs() <= *dl {
        return;
    }
    let q = round_div(&lam[k][l], dl);
    let bl = b[l].clone();
    for (x, y) in b[k].iter_mut().zip(&bl) {
        *x -= &q * y;
    }
    lam[k][l] -= &q * dl;
    for i in 0..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let nb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&nb * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = nb;
}

/// Z-basis of `{A integer : A*J = K*A}` for square `J` (n x n) and `K`
/// (m x m); each `A` is m x n.
pub fn solve_intertwiner_lattice(j: &IntMatrix, k: &IntMatrix) -> Result<Vec<IntMatrix>> {
    if !j.is_square() || !k.is_square() {
        return Err(Error::DimensionMismatch("intertwiner needs square matrices".into()));
    }
    let (n, m) = (j.rows(), k.rows());
    let unknowns = m * n;
    let mut sys = IntMatrix::zeros(unknowns, unknowns);
    for i in 0..m {
        for jj in 0..n {
            let row = i * n + jj;
            for q in 0..n {
                sys[(row, i * n + q)] += &j[(q, jj)];
            }
            for p in 0..m {
                sys[(row, p * n + jj)] -= &k[(i, p)];
            }
        }
    }
    integer_kernel(&sys)
        .into_iter()
        .map(|v| IntMatrix::new(m, n, v))
        .collect()
}
