use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::conditions::{intertwiner_conditions, IntertwinerReport};
use crate::error::{Error, Result};
use crate::matops::{IntMatrix, RatMatrix};
use crate::padic::{is_nilpotent_mod, padic_row_space_battery, prime_divisors, RowSpaceCheck};
use crate::perron::{intertwined_dominance_constant, GrowthConstant};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateOptions {
    /// Number `T` of ladder steps to realize.
    pub prefix: usize,
    /// Largest exponent tried for any single `n(k)` or `m(k)`.
    pub budget: u64,
    /// Precision `m` of the row-space test modulo `p^m`.
    pub padic_precision: u32,
    /// Largest `r` in the `K^r A1` replacements of the row-space test.
    pub replacement_bound: u32,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { prefix: 2, budget: 64, padic_precision: 4, replacement_bound: 4 }
    }
}

/// How integrality of the ladder was justified before searching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Precondition {
    /// Both determinants are units.
    NoPrimes,
    /// `J` and `K` are nilpotent modulo every prime of the determinants,
    /// and `det A1` is supported on those primes.
    Nilpotent {
        #[serde(serialize_with = "crate::ser::display_seq")]
        primes: Vec<BigInt>,
    },
    /// Nilpotence fails at some prime; the p-adic row space condition held
    /// at every prime instead, and integrality was then found by search.
    RowSpaceFallback {
        #[serde(serialize_with = "crate::ser::display_seq")]
        non_nilpotent_primes: Vec<BigInt>,
        checks: Vec<RowSpaceCheck>,
    },
}

/// A realized prefix of a commuting ladder
/// `J^n(k) = B(k) A(k)`, `K^m(k) = A(k+1) B(k)` with
/// `A(k+1) = K^(m(1)+..+m(k)) A1 J^-(n(1)+..+n(k))` and
/// `B(k) = J^(n(1)+..+n(k)) A1^-1 K^-(m(1)+..+m(k-1))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CStarCertificate {
    pub a1: IntMatrix,
    pub n: Vec<u64>,
    pub m: Vec<u64>,
    /// `A(1), ..., A(T+1)`.
    pub a: Vec<IntMatrix>,
    /// `B(1), ..., B(T)`.
    pub b: Vec<IntMatrix>,
    pub precondition: Precondition,
    pub conditions: IntertwinerReport,
    pub growth: Option<GrowthConstant>,
    pub growth_note: Option<String>,
}

impl CStarCertificate {
    /// Re-checks every ladder identity and entrywise nonnegativity.
    pub fn verify(&self, j: &IntMatrix, k: &IntMatrix) -> Result<bool> {
        if self.a.len() != self.b.len() + 1 || self.n.len() != self.b.len() || self.m.len() != self.b.len() {
            return Ok(false);
        }
        if self.a[0] != self.a1 {
            return Ok(false);
        }
        if !self.a.iter().chain(&self.b).all(IntMatrix::is_nonnegative) {
            return Ok(false);
        }
        for i in 0..self.b.len() {
            if self.b[i].mul(&self.a[i])? != j.pow(self.n[i])? {
                return Ok(false);
            }
            if self.a[i + 1].mul(&self.b[i])? != k.pow(self.m[i])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn nonnegative(m: &RatMatrix) -> bool {
    m.data().iter().all(|x| !x.is_negative())
}

/// Smallest exponent found by doubling from 1 until `make(e)` is integral,
/// then stepping by one until it is also nonnegative.
fn schedule(budget: u64, what: &str, mut make: impl FnMut(u64) -> Result<RatMatrix>) -> Result<(u64, IntMatrix)> {
    let mut e = 1;
    let mut cur = make(e)?;
    while !cur.is_integral() {
        e *= 2;
        if e > budget {
            return Err(Error::BudgetExhausted(format!("{what}: no integral power up to {budget}")));
        }
        cur = make(e)?;
    }
    while !nonnegative(&cur) {
        e += 1;
        if e > budget {
            return Err(Error::BudgetExhausted(format!("{what}: no nonnegative power up to {budget}")));
        }
        cur = make(e)?;
    }
    Ok((e, cur.to_int().expect("integral")))
}

fn precondition(j: &IntMatrix, k: &IntMatrix, a1: &IntMatrix, opts: &CertificateOptions) -> Result<Precondition> {
    let primes = prime_divisors(&(j.det()? * k.det()?));
    if primes.is_empty() {
        return Ok(Precondition::NoPrimes);
    }
    let mut bad = Vec::new();
    for p in &primes {
        let pu = u64::try_from(p).map_err(|_| Error::Unsupported(format!("prime {p} too large")))?;
        if !is_nilpotent_mod(j, pu)? || !is_nilpotent_mod(k, pu)? {
            bad.push(p.clone());
        }
    }
    let mut det_a = a1.det()?.abs();
    for p in &primes {
        while (&det_a % p).is_zero() {
            det_a /= p;
        }
    }
    if bad.is_empty() && det_a.is_one() {
        return Ok(Precondition::Nilpotent { primes });
    }
    let checks = padic_row_space_battery(j, k, a1, opts.padic_precision, opts.replacement_bound)?;
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::IntegralityPrecondition {
            prime: c.p,
            detail: "row spaces of the p-adic limits do not correspond".into(),
        });
    }
    Ok(Precondition::RowSpaceFallback { non_nilpotent_primes: bad, checks })
}

/// Builds `T` steps of a commuting ladder between `J` and `K` starting from
/// `A1`, with greedy exponents, and verifies it.
pub fn build_cstar_certificate(
    j: &IntMatrix,
    k: &IntMatrix,
    a1: &IntMatrix,
    opts: &CertificateOptions,
) -> Result<CStarCertificate> {
    a1.require_nonnegative()?;
    let conditions = intertwiner_conditions(j, k, a1, 8)?;
    if let Some(which) = conditions.first_failure() {
        let detail = match conditions.obstruction() {
            Some(crate::equiv::Obstruction::SpectralMapFailure { detail, .. }) => detail,
            _ => String::new(),
        };
        return Err(Error::IntertwinerCondition { which, detail });
    }
    let precondition = precondition(j, k, a1, opts)?;
    let (growth, growth_note) = match intertwined_dominance_constant(j, k, a1) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(e.to_string())),
    };

    let (jr, kr) = (j.to_rat(), k.to_rat());
    let (jinv, kinv, a1inv) = (j.inverse()?, k.inverse()?, a1.inverse()?);
    let a1r = a1.to_rat();
    let (mut big_n, mut big_m) = (0u64, 0u64);
    let (mut ns, mut ms, mut bs) = (Vec::new(), Vec::new(), Vec::new());
    let mut as_ = vec![a1.clone()];
    for step in 1..=opts.prefix {
        let tail = a1inv.mul(&kinv.pow(big_m)?)?;
        let (n, b) = schedule(opts.budget, &format!("n({step})"), |e| jr.pow(big_n + e)?.mul(&tail))?;
        big_n += n;
        let head = a1r.mul(&jinv.pow(big_n)?)?;
        let (m, a) = schedule(opts.budget, &format!("m({step})"), |e| kr.pow(big_m + e)?.mul(&head))?;
        big_m += m;
        ns.push(n);
        ms.push(m);
        bs.push(b);
        as_.push(a);
    }
    let cert = CStarCertificate {
        a1: a1.clone(),
        n: ns,
        m: ms,
        a: as_,
        b: bs,
        precondition,
        conditions,
        growth,
        growth_note,
    };
    if !cert.verify(j, k)? {
        return Err(Error::Certification("ladder identities failed re-verification".into()));
    }
    Ok(cert)
}

/// Searches `n0, m0 <= bound` with `A1 J^n0 e1 = K^m0 e1`.
pub fn unit_preservation_check(
    cert: &CStarCertificate,
    j: &IntMatrix,
    k: &IntMatrix,
    bound: u32,
) -> Result<Option<(u32, u32)>> {
    let e1 = |n: usize| -> Vec<BigInt> { (0..n).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect() };
    let lhs: Vec<Vec<BigInt>> = (0..=bound)
        .map(|n0| cert.a1.mul(&j.pow(u64::from(n0))?)?.mul_vec(&e1(j.rows())))
        .collect::<Result<_>>()?;
    for m0 in 0..=bound {
        let rhs = k.pow(u64::from(m0))?.mul_vec(&e1(k.rows()))?;
        if let Some(n0) = lhs.iter().position(|l| *l == rhs) {
            return Ok(Some((n0 as u32, m0)));
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
    fn scalar_ladder() {
        let (j, k) = (comp(&[6]), comp(&[12]));
        let one = IntMatrix::identity(1);
        let c = build_cstar_certificate(&j, &k, &one, &CertificateOptions { prefix: 3, ..Default::default() }).unwrap();
        assert!(c.verify(&j, &k).unwrap());
        assert_eq!(c.a.len(), 4);
        assert_eq!(c.precondition, Precondition::Nilpotent { primes: vec![2.into(), 3.into()] });
    }

    #[test]
    fn companion_pair_ladder() {
        let (j, k) = (comp(&[4, 32]), comp(&[6, 16]));
        let c = build_cstar_certificate(&j, &k, &IntMatrix::identity(2), &CertificateOptions::default()).unwrap();
        assert!(c.verify(&j, &k).unwrap());
        assert_eq!(unit_preservation_check(&c, &j, &j, 0).unwrap(), Some((0, 0)));
    }

    #[test]
    fn tampered_certificate_fails() {
        let (j, k) = (comp(&[6]), comp(&[12]));
        let mut c = build_cstar_certificate(&j, &k, &IntMatrix::identity(1), &CertificateOptions::default()).unwrap();
        c.n[0] += 1;
        assert!(!c.verify(&j, &k).unwrap());
    }
}
