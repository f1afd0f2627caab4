use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matops::{solve_intertwiner_lattice, CompanionSpec, IntMatrix};

/// Default bound on lattice coefficients in witness searches.
pub const DEFAULT_COEFFICIENT_BOUND: i64 = 5;

/// Witness of lag-`lag` shift equivalence: `A J = K A`, `B K = J B`,
/// `B A = J^lag`, `A B = K^lag`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftEquivalence {
    pub lag: u32,
    pub a: IntMatrix,
    pub b: IntMatrix,
}

impl ShiftEquivalence {
    /// Re-checks the four identities by direct multiplication.
    pub fn verify(&self, j: &IntMatrix, k: &IntMatrix) -> Result<bool> {
        let (a, b) = (&self.a, &self.b);
        let lag = u64::from(self.lag);
        Ok(a.mul(j)? == k.mul(a)?
            && b.mul(k)? == j.mul(b)?
            && b.mul(a)? == j.pow(lag)?
            && a.mul(b)? == k.pow(lag)?)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a.is_nonnegative() && self.b.is_nonnegative()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ShiftSearch {
    Found(ShiftEquivalence),
    /// No witness with lag `<= k_max` and lattice coefficients bounded by
    /// `bound`. This is not a proof of non-equivalence.
    NoneWithinBounds { k_max: u32, bound: i64, lattice_rank: usize },
}

impl ShiftSearch {
    pub fn witness(&self) -> Option<&ShiftEquivalence> {
        match self {
            ShiftSearch::Found(w) => Some(w),
            ShiftSearch::NoneWithinBounds { .. } => None,
        }
    }
}

/// Integer vectors of length `rank` with max-norm exactly `s`, in a fixed
/// order.
pub(crate) fn shell(rank: usize, s: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * s + 1) as u64;
    let total = side.checked_pow(rank as u32).unwrap_or(u64::MAX);
    (0..total).filter_map(move |mut idx| {
        let mut v = Vec::with_capacity(rank);
        for _ in 0..rank {
            v.push((idx % side) as i64 - s);
            idx /= side;
        }
        v.iter().any(|c| c.abs() == s).then_some(v)
    })
}

/// All nonzero vectors with max-norm at most `bound`, shell by shell.
pub(crate) fn shells(rank: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=bound).flat_map(move |s| shell(rank, s))
}

pub(crate) fn combine(basis: &[IntMatrix], coeffs: &[i64]) -> Result<IntMatrix> {
    let mut acc = IntMatrix::zeros(basis[0].rows(), basis[0].cols());
    for (b, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            acc = acc.add(&b.scale(&BigInt::from(c)))?;
        }
    }
    Ok(acc)
}

fn require_nonsingular(m: &IntMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.det()?.is_zero() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Bounded search for a shift equivalence of lag at most `k_max` from `J`
/// to `K`, over the integers or, with `require_nonneg`, over the
/// nonnegative integers.
pub fn check_shift_equivalence(
    j: &IntMatrix,
    k: &IntMatrix,
    k_max: u32,
    require_nonneg: bool,
    bound: i64,
) -> Result<ShiftSearch> {
    require_nonsingular(j)?;
    require_nonsingular(k)?;
    let a_basis = solve_intertwiner_lattice(j, k)?;
    let rank = a_basis.len();
    let none = ShiftSearch::NoneWithinBounds { k_max, bound, lattice_rank: rank };
    if rank == 0 {
        return Ok(none);
    }
    if j.rows() != k.rows() {
        // Nonsingular shift equivalent matrices share their characteristic
        // polynomial, hence their size.
        return Ok(none);
    }
    // B is forced to be J^lag A^-1, and then all identities hold. Shells of
    // growing coefficient size are searched in turn, all lags per shell.
    let det_j = j.det()?;
    let powers: Vec<_> = (1..=k_max)
        .map(|lag| Ok((j.to_rat().pow(u64::from(lag))?, num_traits::pow(det_j.clone(), lag as usize))))
        .collect::<Result<_>>()?;
    for s in 1..=bound {
        let mut candidates = Vec::new();
        for c in shell(rank, s) {
            let a = combine(&a_basis, &c)?;
            if require_nonneg && !a.is_nonnegative() {
                continue;
            }
            let det = a.det()?;
            if det.is_zero() {
                continue;
            }
            candidates.push((det, a));
        }
        for (lag, (jl, det_jl)) in (1..=k_max).zip(&powers) {
            for (det, a) in &candidates {
                // det B = det(J)^lag / det A must be an integer.
                if !(det_jl % det).is_zero() {
                    continue;
                }
                let Some(b) = jl.mul(&a.inverse()?)?.to_int() else {
                    continue;
                };
                if require_nonneg && !b.is_nonnegative() {
                    continue;
                }
                let w = ShiftEquivalence { lag, a: a.clone(), b };
                if w.verify(j, k)? {
                    return Ok(ShiftSearch::Found(w));
                }
            }
        }
    }
    Ok(none)
}

/// Two nonnegative companion-form matrices are shift equivalent only when
/// they are equal, so this is plain equality after checking the form.
pub fn companion_rigidity(j: &IntMatrix, k: &IntMatrix) -> Result<bool> {
    let sj = CompanionSpec::from_matrix(j)?;
    let sk = CompanionSpec::from_matrix(k)?;
    Ok(sj == sk)
}

/// The companion spec with `m_k` replaced by `m_k d^k`.
pub fn scaled_companion(spec: &CompanionSpec, d: u64) -> Result<CompanionSpec> {
    let d = BigInt::from(d);
    let mut pw = BigInt::from(1);
    let m = spec
        .coeffs()
        .iter()
        .map(|c| {
            pw = &pw * &d;
            c * &pw
        })
        .collect();
    CompanionSpec::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(m: &[i64]) -> IntMatrix {
        CompanionSpec::from_i64s(m).unwrap().matrix()
    }

    #[test]
    fn shells_are_complete() {
        let v: Vec<_> = shells(2, 1).collect();
        assert_eq!(v.len(), 8);
        assert_eq!(shells(3, 2).count(), 5usize.pow(3) - 1);
    }

    #[test]
    fn identical_matrices_are_equivalent() {
        let j = comp(&[4, 32]);
        let s = check_shift_equivalence(&j, &j, 1, true, 2).unwrap();
        let w = s.witness().expect("lag 1 witness");
        assert_eq!(w.lag, 1);
        assert!(w.verify(&j, &j).unwrap());
    }

    #[test]
    fn distinct_companions_are_not() {
        let s = check_shift_equivalence(&comp(&[4, 32]), &comp(&[6, 16]), 4, false, 5).unwrap();
        assert!(s.witness().is_none());
        assert!(!companion_rigidity(&comp(&[4, 32]), &comp(&[6, 16])).unwrap());
        assert!(companion_rigidity(&comp(&[4, 32]), &comp(&[4, 32])).unwrap());
    }

    #[test]
    fn singular_input_is_rejected() {
        let j = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        let k = IntMatrix::from_i64_rows(&[&[2]]);
        assert_eq!(check_shift_equivalence(&j, &k, 1, false, 2).unwrap_err(), Error::Singular);
    }

    #[test]
    fn scaling() {
        let s = scaled_companion(&CompanionSpec::from_i64s(&[6, 16]).unwrap(), 2).unwrap();
        assert_eq!(s, CompanionSpec::from_i64s(&[12, 64]).unwrap());
    }
}
