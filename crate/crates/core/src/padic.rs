//! Idempotent powers modulo prime powers, their p-adic towers, and row
//! spaces over `Z/p^m` in Howell normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::matops::IntMatrix;

/// Step budget for cycle detection.
pub const DEFAULT_CYCLE_BUDGET: usize = 1_000_000;

/// A matrix with entries reduced into `0..modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModMatrix {
    #[serde(serialize_with = "crate::ser::display")]
    modulus: BigInt,
    matrix: IntMatrix,
}

impl ModMatrix {
    pub fn new(m: &IntMatrix, modulus: &BigInt) -> Self {
        ModMatrix { modulus: modulus.clone(), matrix: m.map(|x| x.mod_floor(modulus)) }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn mul(&self, o: &ModMatrix) -> Result<ModMatrix> {
        if self.modulus != o.modulus {
            return Err(Error::DimensionMismatch("different moduli".into()));
        }
        Ok(ModMatrix::new(&self.matrix.mul(&o.matrix)?, &self.modulus))
    }

    pub fn pow(&self, e: &BigInt) -> Result<ModMatrix> {
        let n = self.matrix.rows();
        let mut acc = ModMatrix::new(&IntMatrix::identity(n), &self.modulus);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc)?;
            if e.bit(i) {
                acc = acc.mul(self)?;
            }
        }
        Ok(acc)
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        Ok(self.mul(self)? == *self)
    }

    /// Reduction to a modulus dividing the current one.
    pub fn reduce(&self, modulus: &BigInt) -> ModMatrix {
        ModMatrix::new(&self.matrix, modulus)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::Unsupported(format!("{p} is not prime")));
    }
    Ok(())
}

fn prime_power(p: u64, m: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), m as usize)
}

/// Exponent of `GL_n(Z/p^m)`: `p^(ceil(log_p n) + m - 1) * lcm(p^i - 1, i <= n)`.
fn group_exponent(n: usize, p: u64, m: u32) -> BigInt {
    let pb = BigInt::from(p);
    let mut l = BigInt::one();
    let mut pi = BigInt::one();
    for _ in 0..n {
        pi *= &pb;
        l = l.lcm(&(&pi - 1u32));
    }
    let mut k = 0usize;
    let mut pk = BigInt::one();
    while pk < BigInt::from(n) {
        pk *= &pb;
        k += 1;
    }
    l * num_traits::pow(pb, k + m as usize - 1)
}

/// The idempotent in the cyclic semigroup of powers of `a` modulo `p^m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentPower {
    /// An exponent with `a^e` idempotent.
    #[serde(serialize_with = "crate::ser::display")]
    pub exponent: BigInt,
    pub idempotent: ModMatrix,
}

/// Computes the idempotent power of `a` modulo `p^m` as `a^e`, where `e` is
/// a multiple of the exponent of `GL_n(Z/p^m)` no smaller than `n*m`. The
/// nilpotent part dies by power `n*m` and the invertible part has order
/// dividing the group exponent, so `a^e` is the unique idempotent.
pub fn idempotent_power_mod(a: &IntMatrix, p: u64, m: u32) -> Result<IdempotentPower> {
    check_prime(p)?;
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let modulus = prime_power(p, m.max(1));
    let n = a.rows();
    let g = group_exponent(n, p, m.max(1));
    let floor = BigInt::from(n * m.max(1) as usize);
    let e = &g * Integer::div_ceil(&floor, &g).max(BigInt::one());
    let idempotent = ModMatrix::new(a, &modulus).pow(&e)?;
    if !idempotent.is_idempotent()? {
        return Err(Error::Certification("power is not idempotent".into()));
    }
    Ok(IdempotentPower { exponent: e, idempotent })
}

/// Tail, period and idempotent of the powers of `a` modulo `p^m`, found by
/// explicit iteration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCycle {
    pub tail: usize,
    pub period: usize,
    /// Smallest positive multiple of `period` that is at least `tail`.
    pub exponent: usize,
    pub idempotent: ModMatrix,
}

pub fn power_cycle(a: &IntMatrix, p: u64, m: u32, budget: usize) -> Result<PowerCycle> {
    check_prime(p)?;
    let modulus = prime_power(p, m.max(1));
    let base = ModMatrix::new(a, &modulus);
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut powers = vec![base.clone()];
    let mut cur = base.clone();
    for i in 1..=budget {
        if let Some(&first) = seen.get(cur.matrix.data()) {
            let (tail, period) = (first, i - first);
            let exponent = Integer::div_ceil(&tail, &period).max(1) * period;
            let idempotent = if exponent <= powers.len() {
                powers[exponent - 1].clone()
            } else {
                base.pow(&BigInt::from(exponent))?
            };
            return Ok(PowerCycle { tail, period, exponent, idempotent });
        }
        seen.insert(cur.matrix.data().to_vec(), i);
        cur = cur.mul(&base)?;
        powers.push(cur.clone());
    }
    Err(Error::BudgetExhausted(format!("no cycle within {budget} powers")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicLevel {
    pub m: u32,
    #[serde(serialize_with = "crate::ser::display")]
    pub exponent: BigInt,
    pub idempotent: ModMatrix,
}

/// Coherent tower of idempotents `J_1 mod p^m` for `m = 1..=m_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicLimit {
    pub p: u64,
    pub levels: Vec<PAdicLevel>,
}

pub fn p_adic_limit(j: &IntMatrix, p: u64, m_max: u32) -> Result<PAdicLimit> {
    let mut levels: Vec<PAdicLevel> = Vec::new();
    for m in 1..=m_max {
        let ip = idempotent_power_mod(j, p, m)?;
        if let Some(prev) = levels.last() {
            if ip.idempotent.reduce(prev.idempotent.modulus()) != prev.idempotent {
                return Err(Error::Certification(format!(
                    "idempotents mod {p}^{m} and {p}^{} disagree",
                    m - 1
                )));
            }
        }
        levels.push(PAdicLevel { m, exponent: ip.exponent, idempotent: ip.idempotent });
    }
    Ok(PAdicLimit { p, levels })
}

/// Row space of a matrix over `Z/p^m`, stored in Howell normal form so that
/// equal modules have identical forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowSpaceMod {
    pub p: u64,
    pub m: u32,
    pub cols: usize,
    #[serde(serialize_with = "rows_ser")]
    pub rows: Vec<Vec<BigInt>>,
}

fn rows_ser<S: serde::Serializer>(rows: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

fn valuation(x: &BigInt, p: &BigInt, m: u32) -> u32 {
    if x.is_zero() {
        return m;
    }
    let mut v = 0;
    let mut y = x.clone();
    while v < m && (&y % p).is_zero() {
        y /= p;
        v += 1;
    }
    v
}

fn unit_inverse(u: &BigInt, modulus: &BigInt) -> BigInt {
    let g = u.extended_gcd(modulus);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(modulus)
}

/// Howell normal form of the row span of `rows` over `Z/p^m`.
pub fn row_space_mod(a: &IntMatrix, p: u64, m: u32) -> Result<RowSpaceMod> {
    check_prime(p)?;
    let m = m.max(1);
    let q = prime_power(p, m);
    let pb = BigInt::from(p);
    let cols = a.cols();
    let reduce = |r: &mut Vec<BigInt>| r.iter_mut().for_each(|x| *x = x.mod_floor(&q));
    let mut pool: Vec<Vec<BigInt>> = a
        .to_rows()
        .into_iter()
        .map(|mut r| {
            reduce(&mut r);
            r
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut out: Vec<(usize, u32, Vec<BigInt>)> = Vec::new();
    for c in 0..cols {
        let best = pool
            .iter()
            .enumerate()
            .map(|(i, r)| (valuation(&r[c], &pb, m), i))
            .filter(|&(v, _)| v < m)
            .min();
        let Some((k, idx)) = best else {
            continue;
        };
        let mut piv = pool.swap_remove(idx);
        let pk = num_traits::pow(pb.clone(), k as usize);
        let unit = &piv[c] / &pk;
        let inv = unit_inverse(&unit, &q);
        piv.iter_mut().for_each(|x| *x = (&*x * &inv).mod_floor(&q));
        for r in pool.iter_mut() {
            if !r[c].is_zero() {
                let f = &r[c] / &pk;
                for (x, y) in r.iter_mut().zip(&piv) {
                    *x = (&*x - &f * y).mod_floor(&q);
                }
            }
        }
        // Howell closure: p^(m-k) times the pivot row vanishes in column c.
        let mut extra: Vec<BigInt> =
            piv.iter().map(|x| (x * num_traits::pow(pb.clone(), (m - k) as usize)).mod_floor(&q)).collect();
        if extra.iter().any(|x| !x.is_zero()) {
            reduce(&mut extra);
            pool.push(extra);
        }
        pool.retain(|r| r.iter().any(|x| !x.is_zero()));
        out.push((c, k, piv));
    }
    // Reduce entries above each pivot into 0..p^k.
    for t in 0..out.len() {
        let (c, k, piv) = out[t].clone();
        let pk = num_traits::pow(pb.clone(), k as usize);
        for row in out.iter_mut().take(t) {
            let f = row.2[c].div_floor(&pk);
            if !f.is_zero() {
                for (x, y) in row.2.iter_mut().zip(&piv) {
                    *x = (&*x - &f * y).mod_floor(&q);
                }
            }
        }
    }
    Ok(RowSpaceMod { p, m, cols, rows: out.into_iter().map(|t| t.2).collect() })
}

impl RowSpaceMod {
    /// Number of elements of the module, as a power of `p`.
    pub fn log_p_size(&self) -> u32 {
        let pb = BigInt::from(self.p);
        self.rows
            .iter()
            .map(|r| {
                let lead = r.iter().find(|x| !x.is_zero()).expect("nonzero row");
                self.m - valuation(lead, &pb, self.m)
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Whether `self` is contained in `other`.
    pub fn is_subspace_of(&self, other: &RowSpaceMod) -> Result<bool> {
        if self.p != other.p || self.m != other.m || self.cols != other.cols {
            return Err(Error::DimensionMismatch("row spaces over different rings".into()));
        }
        let mut rows = other.rows.clone();
        rows.extend(self.rows.iter().cloned());
        if rows.is_empty() {
            return Ok(true);
        }
        let joined = row_space_mod(&IntMatrix::from_rows(rows)?, self.p, self.m)?;
        Ok(joined == *other)
    }
}

/// Outcome of the p-adic row space test at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowSpaceCheck {
    pub p: u64,
    pub m: u32,
    pub passed: bool,
    /// The `r` for which `K^r A1` worked, if any.
    pub replacement_power: Option<u32>,
    pub j_space: RowSpaceMod,
    pub k_space: RowSpaceMod,
}

/// Tests whether `K_1 K^r A1` and `J_1` have equal row spaces modulo `p^m`
/// for some `r <= r_max`, where `J_1`, `K_1` are the idempotent powers.
pub fn padic_row_space_condition(
    j: &IntMatrix,
    k: &IntMatrix,
    a1: &IntMatrix,
    p: u64,
    m: u32,
    r_max: u32,
) -> Result<RowSpaceCheck> {
    if a1.rows() != k.rows() || a1.cols() != j.rows() {
        return Err(Error::DimensionMismatch("A1 must map the J side to the K side".into()));
    }
    let j1 = idempotent_power_mod(j, p, m)?.idempotent;
    let k1 = idempotent_power_mod(k, p, m)?.idempotent;
    let j_space = row_space_mod(j1.matrix(), p, m)?;
    let mut first = None;
    let mut replacement_power = None;
    let mut a = a1.clone();
    for r in 0..=r_max {
        let ks = row_space_mod(&k1.matrix().mul(&a)?, p, m)?;
        if first.is_none() {
            first = Some(ks.clone());
        }
        if ks == j_space {
            replacement_power = Some(r);
            first = Some(ks);
            break;
        }
        a = k.mul(&a)?;
    }
    Ok(RowSpaceCheck {
        p,
        m,
        passed: replacement_power.is_some(),
        replacement_power,
        j_space,
        k_space: first.expect("at least one attempt"),
    })
}

/// Distinct primes dividing `n`, by trial division.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            while (&n % &d).is_zero() {
                n /= &d;
            }
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// Runs the row space test at every prime dividing `det J * det K`.
pub fn padic_row_space_battery(
    j: &IntMatrix,
    k: &IntMatrix,
    a1: &IntMatrix,
    m: u32,
    r_max: u32,
) -> Result<Vec<RowSpaceCheck>> {
    let primes = prime_divisors(&(j.det()? * k.det()?));
    primes
        .iter()
        .map(|p| {
            let p = p
                .to_u64()
                .ok_or_else(|| Error::Unsupported(format!("prime {p} too large")))?;
            padic_row_space_condition(j, k, a1, p, m, r_max)
        })
        .collect()
}

/// Whether `a` is nilpotent modulo `p`.
pub fn is_nilpotent_mod(a: &IntMatrix, p: u64) -> Result<bool> {
    Ok(idempotent_power_mod(a, p, 1)?.idempotent.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn idempotent_examples() {
        let a = im(&[&[4, 1], &[32, 0]]);
        assert!(idempotent_power_mod(&a, 2, 1).unwrap().idempotent.is_zero());
        let one = idempotent_power_mod(&im(&[&[3]]), 2, 1).unwrap();
        assert_eq!(one.idempotent.matrix(), &im(&[&[1]]));
        let d = idempotent_power_mod(&im(&[&[2, 0], &[0, 3]]), 3, 1).unwrap();
        assert_eq!(d.idempotent.matrix(), &im(&[&[1, 0], &[0, 0]]));
    }

    #[test]
    fn cycle_detection_agrees() {
        let cases = [im(&[&[4, 1], &[32, 0]]), im(&[&[2, 0], &[0, 3]]), im(&[&[1, 1], &[1, 0]])];
        for a in &cases {
            for p in [2, 3, 5] {
                for m in 1..=3 {
                    let c = power_cycle(a, p, m, 100_000).unwrap();
                    let g = idempotent_power_mod(a, p, m).unwrap();
                    assert_eq!(c.idempotent, g.idempotent);
                }
            }
        }
    }

    #[test]
    fn howell_examples() {
        assert!(row_space_mod(&IntMatrix::zeros(2, 2), 2, 2).unwrap().is_zero());
        let full = row_space_mod(&IntMatrix::identity(2), 2, 2).unwrap();
        assert_eq!(full.log_p_size(), 4);
        let half = row_space_mod(&im(&[&[2, 0], &[0, 1]]), 2, 2).unwrap();
        assert_eq!(half.rows, vec![vec![BigInt::from(2), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(1)]]);
        assert_ne!(half, full);
        assert!(half.is_subspace_of(&full).unwrap());
        assert!(!full.is_subspace_of(&half).unwrap());
    }

    #[test]
    fn howell_property_row() {
        // Span of (2, 1) mod 4 contains 2*(2,1) = (0,2).
        let s = row_space_mod(&im(&[&[2, 1]]), 2, 2).unwrap();
        assert_eq!(s.log_p_size(), 2);
        let t = row_space_mod(&im(&[&[2, 1], &[0, 2]]), 2, 2).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn scalar_conditions() {
        let (j, k, one) = (im(&[&[6]]), im(&[&[10]]), im(&[&[1]]));
        assert!(!padic_row_space_condition(&j, &k, &one, 5, 2, 0).unwrap().passed);
        assert!(padic_row_space_condition(&j, &k, &one, 2, 2, 0).unwrap().passed);
        let twelve = im(&[&[12]]);
        assert!(padic_row_space_battery(&j, &twelve, &one, 3, 0).unwrap().iter().all(|c| c.passed));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_divisors(&BigInt::from(-360)), vec![2.into(), 3.into(), 5.into()]);
        assert!(prime_divisors(&BigInt::one()).is_empty());
    }
}
