//! Factorization of integer polynomials: squarefree decomposition, Berlekamp
//! modulo a small prime, Hensel lifting and subset recombination.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::modular::{self, Fp};
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// `input = scalar * prod factor^multiplicity`.
///
/// `scalar` is the signed content of the input, so it is `±1` for primitive
/// inputs such as characteristic polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    #[serde(serialize_with = "crate::ser::display")]
    pub scalar: BigInt,
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        self.factors.iter().fold(
            IntPoly::constant(self.scalar.clone()),
            |acc, (f, m)| &acc * &f.pow(*m as u32),
        )
    }

    /// Distinct irreducible factors, in canonical order.
    pub fn irreducibles(&self) -> impl Iterator<Item = &IntPoly> {
        self.factors.iter().map(|(f, _)| f)
    }
}

/// Canonical factor order: degree, then coefficients lowest degree first.
pub fn canonical_cmp(a: &IntPoly, b: &IntPoly) -> Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().cmp(b.coeffs()))
}

pub fn factor_over_z(p: &IntPoly) -> Result<Factorization> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut scalar = p.content();
    if p.lead().is_some_and(|l| l.is_negative()) {
        scalar = -scalar;
    }
    let mut factors = Vec::new();
    for (sqf, mult) in p.squarefree_decomposition() {
        for f in factor_squarefree(&sqf) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    Ok(Factorization { scalar, factors })
}

/// Whether a nonconstant polynomial is irreducible over the integers
/// (content ignored).
pub fn is_irreducible(p: &IntPoly) -> bool {
    match factor_over_z(p) {
        Ok(f) => f.factors.len() == 1 && f.factors[0].1 == 1,
        Err(_) => false,
    }
}

const SMALL_PRIMES: [u64; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Factors a primitive squarefree polynomial with positive lead coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_part();
    let n = f.deg();
    if n <= 1 {
        return vec![f];
    }
    // Strip the factor t.
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&IntPoly::x()).expect("t divides");
        let mut out = vec![IntPoly::x()];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    let lc = f.lead().expect("nonzero").clone();

    // Pick the prime giving the fewest modular factors among several
    // admissible primes.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES.iter() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = modular::reduce(&f, p);
        if fp.len() != n + 1 || !modular::fp_is_squarefree(&fp, p) {
            continue;
        }
        let monic = modular::fp_monic(&fp, p);
        let fs = modular::berlekamp(&monic, p);
        if fs.len() == 1 {
            return vec![f];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, modular_factors) = best.expect("some small prime keeps the polynomial squarefree");

    // Coefficient bound for any factor of f (times lc): 2^n * ||f||_2 * |lc|.
    let norm2_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + BigInt::one();
    let bound = (BigInt::one() << n) * norm2 * lc.abs();
    let twice = &bound * 2;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    while pk <= twice {
        pk *= &pb;
        k += 1;
    }
    let lifted = modular::hensel_lift(&f, &modular_factors, p, k);
    recombine(&f, lifted, &pk)
}

fn recombine(f: &IntPoly, mut pool: Vec<Vec<BigInt>>, pk: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut cur = f.clone();
    let mut size = 1;
    while 2 * size <= pool.len() {
        let mut found = None;
        for subset in Combinations::new(pool.len(), size) {
            let lc = cur.lead().expect("nonzero").clone();
            let mut acc: Vec<BigInt> = vec![lc];
            for &i in &subset {
                acc = modular::zm_mul(&acc, &pool[i], pk);
            }
            let cand = IntPoly::new(acc.iter().map(|c| modular::symmetric(c, pk)).collect())
                .primitive_part();
            if cand.deg() == 0 {
                continue;
            }
            if let Some(q) = cur.div_exact(&cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                cur = q.primitive_part();
                for &i in subset.iter().rev() {
                    pool.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if cur.deg() > 0 {
        out.push(cur);
    }
    out
}

/// Index subsets of a given size in lexicographic order.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn circulant_charpoly_splits_off_perron_factor() {
        // (t - 2)(t^4 - 3t^3 + 4t^2 - 2t + 1)
        let p = &ip(&[-2, 1]) * &ip(&[1, -2, 4, -3, 1]);
        let f = factor_over_z(&p).unwrap();
        assert_eq!(f.scalar, BigInt::one());
        assert_eq!(f.factors, vec![(ip(&[-2, 1]), 1), (ip(&[1, -2, 4, -3, 1]), 1)]);
    }

    #[test]
    fn cubic_times_t3_plus_1_splits_three_ways() {
        let p = &ip(&[-1, -1, 0, 1]) * &ip(&[1, 0, 0, 1]);
        let f = factor_over_z(&p).unwrap();
        assert_eq!(
            f.factors,
            vec![(ip(&[1, 1]), 1), (ip(&[1, -1, 1]), 1), (ip(&[-1, -1, 0, 1]), 1)]
        );
    }

    #[test]
    fn square_of_t() {
        let f = factor_over_z(&ip(&[0, 0, 1])).unwrap();
        assert_eq!(f.factors, vec![(ip(&[0, 1]), 2)]);
    }

    #[test]
    fn content_is_kept_in_scalar() {
        let p = ip(&[-4, 0, 2]);
        let f = factor_over_z(&p).unwrap();
        assert_eq!(f.scalar, BigInt::from(2));
        assert_eq!(f.expand(), p);
        let neg = factor_over_z(&ip(&[3, -3])).unwrap();
        assert_eq!(neg.scalar, BigInt::from(-3));
        assert_eq!(neg.factors, vec![(ip(&[-1, 1]), 1)]);
    }

    #[test]
    fn swinnerton_dyer_like_many_modular_factors() {
        // x^4 - 10x^2 + 1 is irreducible but splits mod every prime.
        let p = ip(&[1, 0, -10, 0, 1]);
        let f = factor_over_z(&p).unwrap();
        assert_eq!(f.factors, vec![(p, 1)]);
    }

    #[test]
    fn non_monic_product() {
        let p = &ip(&[1, 2]) * &ip(&[-3, 0, 5]);
        let f = factor_over_z(&p).unwrap();
        assert_eq!(f.expand(), p);
        assert_eq!(f.factors.len(), 2);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(factor_over_z(&IntPoly::zero()), Err(Error::ZeroPolynomial));
    }
}
