use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::exact::{discriminant, AlgebraicNumber, IntPoly};
use crate::padic::{prime_divisors, RowSpaceCheck};
use crate::perron::{perron_data, PerronData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ObstructionKind {
    PrimeSupport,
    FieldMismatch,
    EigenvalueModulus,
    RootsOfUnity,
    SpectralMapFailure,
    PAdicRowSpace,
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A non-factorization reason for the roots of one polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorEvidence {
    pub factor: IntPoly,
    #[serde(serialize_with = "crate::ser::display")]
    pub discriminant: BigInt,
    pub reason: String,
}

/// A named reason why two matrices fail some equivalence, with enough exact
/// data to replay the argument.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Obstruction {
    PrimeSupport {
        #[serde(serialize_with = "crate::ser::display_seq")]
        j_primes: Vec<BigInt>,
        #[serde(serialize_with = "crate::ser::display_seq")]
        k_primes: Vec<BigInt>,
    },
    FieldMismatch { j_minpoly: IntPoly, k_minpoly: IntPoly },
    EigenvalueModulus {
        reason: String,
        j_moduli_sq: Vec<AlgebraicNumber>,
        k_moduli_sq: Vec<AlgebraicNumber>,
    },
    RootsOfUnity {
        j_factors: Vec<FactorEvidence>,
        k_factors: Vec<FactorEvidence>,
        reason: String,
    },
    SpectralMapFailure { condition: u8, detail: String },
    PAdicRowSpace { checks: Vec<RowSpaceCheck> },
}

impl Obstruction {
    pub fn kind(&self) -> ObstructionKind {
        match self {
            Obstruction::PrimeSupport { .. } => ObstructionKind::PrimeSupport,
            Obstruction::FieldMismatch { .. } => ObstructionKind::FieldMismatch,
            Obstruction::EigenvalueModulus { .. } => ObstructionKind::EigenvalueModulus,
            Obstruction::RootsOfUnity { .. } => ObstructionKind::RootsOfUnity,
            Obstruction::SpectralMapFailure { .. } => ObstructionKind::SpectralMapFailure,
            Obstruction::PAdicRowSpace { .. } => ObstructionKind::PAdicRowSpace,
        }
    }
}

/// Sorted squared moduli of all eigenvalues, with multiplicity.
fn moduli(pd: &PerronData) -> Vec<AlgebraicNumber> {
    let mut out: Vec<AlgebraicNumber> = pd
        .spectrum
        .iter()
        .flat_map(|sf| {
            sf.roots
                .iter()
                .flat_map(move |r| std::iter::repeat_n(r.modulus_sq.clone(), sf.multiplicity))
        })
        .collect();
    out.sort();
    out
}

fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

fn cyclotomic_poly(k: u64) -> IntPoly {
    let mut p = &IntPoly::monomial(BigInt::one(), k as usize) - &IntPoly::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic_poly(d)).expect("cyclotomic factor divides");
        }
    }
    p
}

/// Whether `f` is a cyclotomic polynomial.
pub fn is_cyclotomic(f: &IntPoly) -> bool {
    let d = f.deg() as u64;
    if d == 0 || !f.is_monic() || !f.coeff(0).abs().is_one() {
        return false;
    }
    // phi(k) >= sqrt(k / 2), so k <= 2 d^2.
    (1..=2 * d * d + 2).filter(|&k| euler_phi(k) == d).any(|k| cyclotomic_poly(k) == *f)
}

/// Non-Perron irreducible factors, or `None` when the Perron value is
/// irrational (its conjugates then need separate treatment).
fn non_perron_factors(pd: &PerronData) -> Option<Vec<IntPoly>> {
    if pd.minpoly_factor.deg() != 1 {
        return None;
    }
    Some(
        pd.spectrum
            .iter()
            .filter(|sf| sf.factor != pd.minpoly_factor)
            .map(|sf| sf.factor.clone())
            .collect(),
    )
}

fn roots_equal_modulus(pd: &PerronData, f: &IntPoly) -> bool {
    pd.spectrum
        .iter()
        .find(|sf| sf.factor == *f)
        .is_none_or(|sf| sf.roots.windows(2).all(|w| w[0].modulus_sq == w[1].modulus_sq))
}

/// With equal rational Perron values `n = m` is forced. If moreover every
/// non-Perron factor of `J` and of `K` have coprime discriminants, the
/// splitting fields meet only in the rationals (a nontrivial subfield would
/// ramify somewhere), so every `mu^n` is rational. Then all roots of a
/// factor share one modulus, and a factor with unit constant term must
/// consist of roots of unity.
fn roots_of_unity_test(pj: &PerronData, pk: &PerronData) -> Result<Option<Obstruction>> {
    if pj.lambda != pk.lambda || pj.lambda.cmp_rational(&BigRational::one()).is_le() {
        return Ok(None);
    }
    let (Some(fj), Some(fk)) = (non_perron_factors(pj), non_perron_factors(pk)) else {
        return Ok(None);
    };
    let disc = |f: &IntPoly| discriminant(f);
    let dj: Vec<BigInt> = fj.iter().map(disc).collect::<Result<_>>()?;
    let dk: Vec<BigInt> = fk.iter().map(disc).collect::<Result<_>>()?;
    for (f, a) in fj.iter().zip(&dj) {
        for (g, b) in fk.iter().zip(&dk) {
            if f == g || !a.gcd(b).is_one() {
                return Ok(None);
            }
        }
    }
    let judge = |pd: &PerronData, fs: &[IntPoly], ds: &[BigInt]| -> Vec<FactorEvidence> {
        fs.iter()
            .zip(ds)
            .filter(|(f, _)| f.deg() >= 2)
            .filter_map(|(f, d)| {
                let reason = if !roots_equal_modulus(pd, f) {
                    "roots of unequal modulus cannot share a rational power"
                } else if f.coeff(0).abs() == f.coeff(f.deg()).abs() && !is_cyclotomic(f) {
                    "unit norm forces roots of unity, but the factor is not cyclotomic"
                } else {
                    return None;
                };
                Some(FactorEvidence { factor: f.clone(), discriminant: d.clone(), reason: reason.into() })
            })
            .collect()
    };
    let j_factors = judge(pj, &fj, &dj);
    let k_factors = judge(pk, &fk, &dk);
    if j_factors.is_empty() && k_factors.is_empty() {
        return Ok(None);
    }
    Ok(Some(Obstruction::RootsOfUnity {
        j_factors,
        k_factors,
        reason: "matching powers would make every non-Perron eigenvalue power rational".into(),
    }))
}

/// Exponent vector of a positive integer over the given primes.
fn exponents(n: &BigInt, primes: &[BigInt]) -> Vec<u64> {
    primes
        .iter()
        .map(|p| {
            let mut e = 0;
            let mut x = n.clone();
            while (&x % p).is_zero() {
                x /= p;
                e += 1;
            }
            e
        })
        .collect()
}

fn modulus_test(pj: &PerronData, pk: &PerronData) -> Result<Option<Obstruction>> {
    let mj = moduli(pj);
    let mk = moduli(pk);
    let fail = |reason: &str| {
        Some(Obstruction::EigenvalueModulus {
            reason: reason.into(),
            j_moduli_sq: mj.clone(),
            k_moduli_sq: mk.clone(),
        })
    };
    if mj.len() != mk.len() {
        return Ok(fail("different numbers of eigenvalues"));
    }
    let one = BigRational::one();
    let profile = |m: &[AlgebraicNumber]| {
        let mut c = [0usize; 3];
        for x in m {
            c[(x.cmp_rational(&one) as i8 + 1) as usize] += 1;
        }
        c
    };
    if profile(&mj) != profile(&mk) {
        return Ok(fail("different numbers of eigenvalues inside, on and outside the unit circle"));
    }
    let pattern = |m: &[AlgebraicNumber]| -> Vec<bool> { m.windows(2).map(|w| w[0] == w[1]).collect() };
    if pattern(&mj) != pattern(&mk) {
        return Ok(fail("different coincidence pattern among eigenvalue moduli"));
    }
    let above_one = pj.lambda.cmp_rational(&one).is_gt();
    if pj.lambda == pk.lambda && above_one {
        if mj != mk {
            return Ok(fail("equal Perron values force n = m, but the moduli differ"));
        }
        return Ok(None);
    }
    if let (Some(a), Some(b)) = (pj.lambda.to_rational(), pk.lambda.to_rational()) {
        if a.is_integer() && b.is_integer() && above_one {
            let (a, b) = (a.to_integer(), b.to_integer());
            let mut primes = prime_divisors(&a);
            primes.extend(prime_divisors(&b));
            primes.sort();
            primes.dedup();
            let (ea, eb) = (exponents(&a, &primes), exponents(&b, &primes));
            // a^n = b^m needs ea and eb proportional.
            let proportional = ea
                .iter()
                .zip(&eb)
                .all(|(x, y)| ea.iter().zip(&eb).all(|(u, v)| x * v == y * u))
                && ea.iter().zip(&eb).all(|(x, y)| (*x == 0) == (*y == 0));
            if !proportional {
                return Ok(fail("no power of one Perron value equals a power of the other"));
            }
        }
    }
    Ok(None)
}

/// Exact tests showing that no positive powers `J^n`, `K^m` are conjugate
/// over the rationals. `None` means inconclusive.
pub fn no_power_conjugacy_obstruction(
    j: &crate::matops::IntMatrix,
    k: &crate::matops::IntMatrix,
) -> Result<Option<Obstruction>> {
    let pj = perron_data(j)?;
    let pk = perron_data(k)?;
    if let Some(o) = roots_of_unity_test(&pj, &pk)? {
        return Ok(Some(o));
    }
    modulus_test(&pj, &pk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::{CompanionSpec, IntMatrix};

    fn comp(m: &[i64]) -> IntMatrix {
        CompanionSpec::from_i64s(m).unwrap().matrix()
    }

    #[test]
    fn cyclotomic_detection() {
        assert!(is_cyclotomic(&IntPoly::from_i64s(&[1, -1, 1])));
        assert!(is_cyclotomic(&IntPoly::from_i64s(&[1, 1, 1, 1, 1])));
        assert!(is_cyclotomic(&IntPoly::from_i64s(&[1, 0, 1])));
        assert!(!is_cyclotomic(&IntPoly::from_i64s(&[-1, -1, 0, 1])));
        assert!(!is_cyclotomic(&IntPoly::from_i64s(&[1, 0, 0, 1, 1])));
    }

    #[test]
    fn companion_pair_moduli() {
        let o = no_power_conjugacy_obstruction(&comp(&[4, 32]), &comp(&[6, 16])).unwrap().unwrap();
        assert_eq!(o.kind(), ObstructionKind::EigenvalueModulus);
    }

    #[test]
    fn self_is_inconclusive() {
        let j = comp(&[4, 32]);
        assert!(no_power_conjugacy_obstruction(&j, &j).unwrap().is_none());
    }

    #[test]
    fn scalar_perron_values() {
        let o = no_power_conjugacy_obstruction(&comp(&[6]), &comp(&[12])).unwrap().unwrap();
        assert_eq!(o.kind(), ObstructionKind::EigenvalueModulus);
        assert!(no_power_conjugacy_obstruction(&comp(&[4]), &comp(&[8])).unwrap().is_none());
    }
}
