use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{common_field, dot, perron_data, proportional, ratmat_vec, vec_mat, PerronData};
use crate::error::{Error, Result};
use crate::exact::AlgebraicNumber;
use crate::matops::{IntMatrix, RatMatrix};

/// Largest starting exponent tried when looking for a window of four
/// consecutive nonnegative powers.
const MAX_N0: u64 = 48;
/// Hard ceiling on the growth constant itself.
const MAX_C: u64 = 4096;

/// A growth constant `c` together with the window on which nonnegativity
/// was checked by exact matrix powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthConstant {
    /// Smallest `c >= 1` with `lambda1^(c-1) > lambda2^c * lambda3`.
    pub c: u64,
    /// First exponent of the window `n0..=n0+3` where the products were
    /// nonnegative with this `c`.
    pub n0: u64,
    /// Smallest `c' <= c` for which some window with `n0 <= MAX_N0` works.
    /// This is evidence on a finite window only.
    pub window_c: u64,
    pub window_n0: u64,
    pub note: Option<String>,
}

fn nonnegative(m: &RatMatrix) -> bool {
    m.data().iter().all(|x| !x.is_negative())
}

fn all_rational(xs: &[&AlgebraicNumber]) -> Option<Vec<BigRational>> {
    xs.iter().map(|x| x.to_rational()).collect()
}

/// Decides `l1^(c-1) > l2^c * l3`. Undecided cases (equality between
/// irrational quantities) count as false, which only makes `c` larger.
fn exceeds(l1: &AlgebraicNumber, l2: &AlgebraicNumber, l3: &AlgebraicNumber, c: u64) -> bool {
    let e1 = u32::try_from(c - 1).expect("small exponent");
    let e2 = u32::try_from(c).expect("small exponent");
    if let Some(q) = all_rational(&[l1, l2, l3]) {
        return num_traits::pow(q[0].clone(), e1 as usize)
            > num_traits::pow(q[1].clone(), e2 as usize) * &q[2];
    }
    for k in 1..=24u32 {
        let w = BigRational::new(BigInt::one(), BigInt::one() << (8 * k));
        let lhs = l1.pow_interval(e1, &w);
        let rhs = l2.pow_interval(e2, &w).mul(&l3.refined(&w).interval());
        if lhs.lo > rhs.hi {
            return true;
        }
        if lhs.hi <= rhs.lo {
            return false;
        }
    }
    false
}

fn spectral_c(l1: &AlgebraicNumber, l2: Option<&AlgebraicNumber>, l3: &AlgebraicNumber) -> Result<u64> {
    let Some(l2) = l2 else {
        return Ok(1);
    };
    (1..=MAX_C)
        .find(|&c| exceeds(l1, l2, l3, c))
        .ok_or_else(|| Error::BudgetExhausted(format!("growth constant above {MAX_C}")))
}

fn max_opt(a: Option<&AlgebraicNumber>, b: Option<&AlgebraicNumber>) -> Option<AlgebraicNumber> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y).clone()),
        (x, y) => x.or(y).cloned(),
    }
}

/// First `n0` such that `ok(n)` holds for `n0..=n0+3`.
fn find_window(mut ok: impl FnMut(u64) -> Result<bool>) -> Result<Option<u64>> {
    let mut run = 0;
    for n in 1..=MAX_N0 + 3 {
        if ok(n)? {
            run += 1;
            if run == 4 {
                return Ok(Some(n - 3));
            }
        } else {
            run = 0;
        }
    }
    Ok(None)
}

fn check_perron_match(pj: &PerronData, pk: &PerronData) -> Result<()> {
    if pj.lambda != pk.lambda {
        return Err(Error::PerronMismatch(format!(
            "Perron eigenvalues differ: {} vs {}",
            pj.lambda, pk.lambda
        )));
    }
    Ok(())
}

fn finish(
    c: u64,
    mut ok: impl FnMut(u64, u64) -> Result<bool>,
    note: Option<String>,
) -> Result<GrowthConstant> {
    let n0 = find_window(|n| ok(c, n))?.ok_or_else(|| {
        Error::BudgetExhausted(format!("no nonnegative window with n0 <= {MAX_N0} for c = {c}"))
    })?;
    let mut window = (c, n0);
    for cc in 1..c {
        if let Some(m) = find_window(|n| ok(cc, n))? {
            window = (cc, m);
            break;
        }
    }
    Ok(GrowthConstant { c, n0, window_c: window.0, window_n0: window.1, note })
}

/// Constant `c` such that `J^(cn) K^(-n)` is nonnegative for large `n`, for
/// primitive nonsingular `J`, `K` with the same Perron eigenvalue and the
/// same Perron eigenvectors.
pub fn dominance_constant(j: &IntMatrix, k: &IntMatrix) -> Result<GrowthConstant> {
    if j.rows() != k.rows() || !j.is_square() || !k.is_square() {
        return Err(Error::DimensionMismatch("matrices must be square of equal size".into()));
    }
    let pj = perron_data(j)?;
    let pk = perron_data(k)?;
    check_perron_match(&pj, &pk)?;
    let cf = common_field(&pj, &pk)?
        .ok_or_else(|| Error::PerronMismatch("Perron fields differ".into()))?;
    if !proportional(&cf.left_j, &cf.left_k)? || !proportional(&cf.right_j, &cf.right_k)? {
        return Err(Error::PerronMismatch("Perron eigenvectors differ".into()));
    }
    let kinv = k.inverse()?;
    let jr = j.to_rat();
    let ok = |c: u64, n: u64| -> Result<bool> {
        Ok(nonnegative(&jr.pow(c * n)?.mul(&kinv.pow(n)?)?))
    };
    if j == k {
        return finish(1, ok, Some("identical matrices".into()));
    }
    let l2 = max_opt(pj.lambda2.as_ref(), pk.lambda2.as_ref());
    let l3 = pj.lambda3.clone().max(pk.lambda3.clone());
    let c = spectral_c(&pj.lambda, l2.as_ref(), &l3)?;
    finish(c, ok, None)
}

/// Constant `c` such that `J^(cn) A1^(-1) K^(-n)` and `K^(cn) A1 J^(-n)` are
/// both nonnegative for large `n`. Requires `A1` to carry the non-Perron
/// hyperplane of `J` onto that of `K` and to pair the Perron vectors
/// positively in both directions.
pub fn intertwined_dominance_constant(
    j: &IntMatrix,
    k: &IntMatrix,
    a1: &IntMatrix,
) -> Result<GrowthConstant> {
    if j.rows() != k.rows() || a1.rows() != k.rows() || a1.cols() != j.rows() {
        return Err(Error::DimensionMismatch("J, K and A1 must be square of equal size".into()));
    }
    let pj = perron_data(j)?;
    let pk = perron_data(k)?;
    check_perron_match(&pj, &pk)?;
    let a1inv = a1.inverse()?;
    let cf = common_field(&pj, &pk)?
        .ok_or_else(|| Error::PerronMismatch("Perron fields differ".into()))?;
    let vka = vec_mat(&cf.left_k, a1)?;
    if !proportional(&vka, &cf.left_j)? {
        return Err(Error::PerronMismatch(
            "A1 does not map the non-Perron hyperplane of J onto that of K".into(),
        ));
    }
    let forward = dot(&vka, &cf.right_j)?;
    let backward = dot(&cf.left_j, &ratmat_vec(&a1inv, &cf.right_k)?)?;
    if forward.signum()? <= 0 || backward.signum()? <= 0 {
        return Err(Error::PerronMismatch(
            "A1 does not pair the Perron vectors positively".into(),
        ));
    }
    let jr = j.to_rat();
    let kr = k.to_rat();
    let (jinv, kinv) = (j.inverse()?, k.inverse()?);
    let a1r = a1.to_rat();
    let ok = |c: u64, n: u64| -> Result<bool> {
        let m1 = jr.pow(c * n)?.mul(&a1inv)?.mul(&kinv.pow(n)?)?;
        if !nonnegative(&m1) {
            return Ok(false);
        }
        let m2 = kr.pow(c * n)?.mul(&a1r)?.mul(&jinv.pow(n)?)?;
        Ok(nonnegative(&m2))
    };
    let l2 = max_opt(pj.lambda2.as_ref(), pk.lambda2.as_ref());
    let l3 = pj.lambda3.clone().max(pk.lambda3.clone());
    let c = spectral_c(&pj.lambda, l2.as_ref(), &l3)?;
    finish(c, ok, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn identical_matrices_give_one() {
        let j = im(&[&[4, 1], &[32, 0]]);
        let g = dominance_constant(&j, &j).unwrap();
        assert_eq!(g.c, 1);
    }

    #[test]
    fn rational_equality_is_not_strict() {
        let l1 = AlgebraicNumber::from_integer(8.into());
        let l2 = AlgebraicNumber::from_integer(4.into());
        let l3 = AlgebraicNumber::from_rational(BigRational::new(1.into(), 4.into()));
        assert!(!exceeds(&l1, &l2, &l3, 1));
        assert!(exceeds(&l1, &l2, &l3, 2));
    }

    #[test]
    fn self_intertwined_companion() {
        let j = im(&[&[4, 1], &[32, 0]]);
        let g = intertwined_dominance_constant(&j, &j, &j).unwrap();
        assert_eq!(g.c, 2);
    }

    #[test]
    fn mismatched_perron_values() {
        let err = dominance_constant(&im(&[&[4, 1], &[32, 0]]), &im(&[&[1, 1], &[1, 0]]));
        assert!(matches!(err, Err(Error::PerronMismatch(_))));
    }
}
