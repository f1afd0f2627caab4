use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{IntPoly, RatPoly};
use crate::matops::{invariant_factors, solve_intertwiner_lattice, IntMatrix, RatMatrix};

/// Similarity test of `J^n` and `K^m` over the rationals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugacyReport {
    pub n: u32,
    pub m: u32,
    pub conjugate: bool,
    pub charpoly_j: IntPoly,
    pub charpoly_k: IntPoly,
    /// Invariant factors, present only when the characteristic polynomials
    /// agree (otherwise the cheaper filter already decided).
    pub invariant_factors_j: Option<Vec<RatPoly>>,
    pub invariant_factors_k: Option<Vec<RatPoly>>,
}

pub fn powers_conjugate_over_q(j: &IntMatrix, k: &IntMatrix, n: u32, m: u32) -> Result<ConjugacyReport> {
    if !j.is_square() || !k.is_square() || j.rows() != k.rows() {
        return Err(Error::DimensionMismatch("need square matrices of equal size".into()));
    }
    let jn = j.pow(u64::from(n))?;
    let km = k.pow(u64::from(m))?;
    let charpoly_j = jn.charpoly()?;
    let charpoly_k = km.charpoly()?;
    let mut report = ConjugacyReport {
        n,
        m,
        conjugate: false,
        charpoly_j,
        charpoly_k,
        invariant_factors_j: None,
        invariant_factors_k: None,
    };
    if report.charpoly_j != report.charpoly_k {
        return Ok(report);
    }
    let fj = invariant_factors(&jn.to_rat())?;
    let fk = invariant_factors(&km.to_rat())?;
    report.conjugate = fj == fk;
    report.invariant_factors_j = Some(fj);
    report.invariant_factors_k = Some(fk);
    Ok(report)
}

/// An invertible rational `P` with `P a = b P`, if one exists.
///
/// `det(sum t^i A_i)` over an integer basis `A_i` of the intertwiners is a
/// polynomial in `t` of degree at most `n (r - 1)`; if it is not identically
/// zero one of the first `n (r - 1) + 1` integers is not a root.
pub fn rational_conjugator(a: &IntMatrix, b: &IntMatrix) -> Result<Option<RatMatrix>> {
    if a.rows() != b.rows() {
        return Ok(None);
    }
    let basis = solve_intertwiner_lattice(a, b)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let n = a.rows();
    let tries = n * (basis.len() - 1) + 1;
    for t in 0..tries as i64 {
        let mut p = IntMatrix::zeros(n, n);
        let mut w = BigInt::from(1);
        for bi in &basis {
            p = p.add(&bi.scale(&w))?;
            w *= t;
        }
        if !p.det()?.is_zero() {
            let pr = p.to_rat();
            debug_assert_eq!(pr.mul(&a.to_rat())?, b.to_rat().mul(&pr)?);
            return Ok(Some(pr));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::CompanionSpec;

    fn comp(m: &[i64]) -> IntMatrix {
        CompanionSpec::from_i64s(m).unwrap().matrix()
    }

    #[test]
    fn companion_pair_powers_never_conjugate() {
        let (j, k) = (comp(&[4, 32]), comp(&[6, 16]));
        for n in 1..=3 {
            for m in 1..=3 {
                assert!(!powers_conjugate_over_q(&j, &k, n, m).unwrap().conjugate);
            }
        }
    }

    #[test]
    fn reflexive_with_conjugator() {
        let j = comp(&[1, 0, 0, 0, 1]);
        assert!(powers_conjugate_over_q(&j, &j, 2, 2).unwrap().conjugate);
        let p = rational_conjugator(&j, &j).unwrap().unwrap();
        assert!(!p.det().unwrap().is_zero());
    }

    #[test]
    fn same_charpoly_different_jordan_structure() {
        let a = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 2]]);
        let b = IntMatrix::from_i64_rows(&[&[2, 1], &[0, 2]]);
        let r = powers_conjugate_over_q(&a, &b, 1, 1).unwrap();
        assert_eq!(r.charpoly_j, r.charpoly_k);
        assert!(!r.conjugate);
        assert!(rational_conjugator(&a, &b).unwrap().is_none());
    }
}
