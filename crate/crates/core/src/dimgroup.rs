//! The stationary dimension group `G(J) = union of J^(-m) Z^N` inside `Q^N`,
//! with its trace and positive cone.
//!
//! Stages are 1-indexed when talking about the inductive system: stage 1 is
//! `G_0 = Z^N`, and a vector `x` at stage `s` stands for `J^(1-s) x`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::NfElem;
use crate::matops::{smith_form, IntMatrix, RatMatrix};
use crate::perron::{perron_data, PerronData};

/// Default search depth for membership witnesses.
pub const DEFAULT_MEMBERSHIP_DEPTH: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    /// `J^level g` is integral and `level` is the smallest such exponent.
    Member { level: u32 },
    /// A denominator has a prime factor not dividing `det J`; no power of
    /// `J` can clear it.
    NotMember {
        #[serde(serialize_with = "crate::ser::display")]
        prime: BigInt,
    },
    /// Still fractional after `checked_to` multiplications.
    Unknown { checked_to: u32 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

#[derive(Clone, Debug)]
pub struct DimensionGroup {
    j: IntMatrix,
    det: BigInt,
    perron: PerronData,
}

fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

/// A prime dividing `den` but not `det`, found by trial division after
/// stripping the part of `den` supported on primes of `det`.
fn prime_not_dividing(den: &BigInt, det: &BigInt) -> Option<BigInt> {
    let mut d = den.abs();
    loop {
        let g = d.gcd(det);
        if g.is_one() {
            break;
        }
        while (&d % &g).is_zero() {
            d /= &g;
        }
    }
    if d.is_one() {
        return None;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= d {
        if (&d % &p).is_zero() {
            return Some(p);
        }
        p += 1;
    }
    Some(d)
}

impl DimensionGroup {
    /// `J` must be primitive and nonsingular.
    pub fn new(j: &IntMatrix) -> Result<Self> {
        let perron = perron_data(j)?;
        let det = j.det()?;
        Ok(DimensionGroup { j: j.clone(), det, perron })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.j
    }

    pub fn perron(&self) -> &PerronData {
        &self.perron
    }

    /// The trace functional `alpha`, the normalized left Perron vector.
    pub fn alpha(&self) -> &[NfElem] {
        &self.perron.left
    }

    fn check_len(&self, g: &[BigRational]) -> Result<()> {
        if g.len() != self.j.rows() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                g.len(),
                self.j.rows(),
                self.j.rows()
            )));
        }
        Ok(())
    }

    pub fn membership(&self, g: &[BigRational], m_max: u32) -> Result<Membership> {
        self.check_len(g)?;
        let den = g.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        if let Some(prime) = prime_not_dividing(&den, &self.det) {
            return Ok(Membership::NotMember { prime });
        }
        let jr = self.j.to_rat();
        let mut cur = g.to_vec();
        for level in 0..=m_max {
            if is_integral(&cur) {
                return Ok(Membership::Member { level });
            }
            cur = jr.mul_vec(&cur)?;
        }
        Ok(Membership::Unknown { checked_to: m_max })
    }

    fn require_member(&self, g: &[BigRational]) -> Result<()> {
        match self.membership(g, DEFAULT_MEMBERSHIP_DEPTH)? {
            Membership::Member { .. } => Ok(()),
            Membership::NotMember { .. } => Err(Error::NotMember),
            Membership::Unknown { checked_to } => Err(Error::BudgetExhausted(format!(
                "membership undecided after {checked_to} steps"
            ))),
        }
    }

    /// `<alpha | g>` in `Q(lambda)`.
    pub fn trace(&self, g: &[BigRational]) -> Result<NfElem> {
        self.require_member(g)?;
        let f = self.perron.field.clone();
        let x: Vec<NfElem> = g.iter().map(|q| NfElem::from_rational(&f, q.clone())).collect();
        self.perron.pair_left(&x)
    }

    /// Positive cone: trace strictly positive, or `g = 0`.
    pub fn is_positive(&self, g: &[BigRational]) -> Result<bool> {
        let t = self.trace(g)?;
        if g.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        Ok(t.signum()? > 0)
    }

    /// Index `(G_(m+1) : G_m)`, which is `|det J|`; cross-checked against the
    /// product of the Smith invariants of `J`.
    pub fn quotient_index(&self) -> Result<BigInt> {
        let by_det = self.det.abs();
        let by_smith = smith_form(&self.j)
            .diagonal()
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d.abs());
        if by_det != by_smith {
            return Err(Error::Certification(format!(
                "index mismatch: |det| = {by_det}, Smith product = {by_smith}"
            )));
        }
        Ok(by_det)
    }

    /// Image of an integer vector at stage `stage >= 1` in the concrete
    /// realization: `J^(1-stage) x`.
    pub fn from_stage(&self, x: &[BigInt], stage: u32) -> Result<Vec<BigRational>> {
        if stage == 0 {
            return Err(Error::Unsupported("stages start at 1".into()));
        }
        let xr: Vec<BigRational> = x.iter().map(|a| BigRational::from_integer(a.clone())).collect();
        self.check_len(&xr)?;
        self.j.pow_signed(1 - i64::from(stage))?.mul_vec(&xr)
    }

    /// Trace of `x` given at stage `stage`: `lambda^(1-stage) <alpha | x>`.
    pub fn stage_trace(&self, x: &[BigInt], stage: u32) -> Result<NfElem> {
        if stage == 0 {
            return Err(Error::Unsupported("stages start at 1".into()));
        }
        let f = self.perron.field.clone();
        let xs: Vec<NfElem> = x.iter().map(|a| NfElem::from_int(&f, a)).collect();
        let lam = NfElem::generator(&f);
        lam.pow(1 - i64::from(stage))?.mul(&self.perron.pair_left(&xs)?)
    }

    /// The shift automorphism `g -> J g`.
    pub fn shift(&self, g: &[BigRational]) -> Result<Vec<BigRational>> {
        self.j.to_rat().mul_vec(g)
    }

    pub fn unshift(&self, g: &[BigRational]) -> Result<Vec<BigRational>> {
        self.j.inverse()?.mul_vec(g)
    }
}

/// Closed forms for the powers of the two 2x2 companion matrices
/// `[[4,1],[32,0]]` and `[[6,1],[16,0]]`, valid for every integer `n`.
pub fn closed_form_power(m: &IntMatrix, n: i64) -> Result<RatMatrix> {
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let pw = |b: i64, e: i64| -> BigRational {
        let base = q(b);
        if e >= 0 {
            num_traits::pow(base, e as usize)
        } else {
            num_traits::pow(base.recip(), (-e) as usize)
        }
    };
    let sign = if n % 2 == 0 { q(1) } else { q(-1) };
    let entries = if *m == IntMatrix::from_i64_rows(&[&[4, 1], &[32, 0]]) {
        let s = pw(2, n);
        let pre = pw(4, n - 1) / q(3);
        [
            q(4) * (q(2) * &s + &sign),
            &s - &sign,
            q(32) * (&s - &sign),
            q(4) * (&s + q(2) * &sign),
        ]
        .map(|x| x * &pre)
    } else if *m == IntMatrix::from_i64_rows(&[&[6, 1], &[16, 0]]) {
        let f = pw(4, n);
        let pre = pw(2, n - 1) / q(5);
        [
            q(2) * (q(4) * &f + &sign),
            &f - &sign,
            q(16) * (&f - &sign),
            q(2) * (&f + q(4) * &sign),
        ]
        .map(|x| x * &pre)
    } else {
        return Err(Error::Unsupported(format!("no closed form for {m}")));
    };
    RatMatrix::new(2, 2, entries.to_vec())
}

/// Whether the closed form agrees with exact matrix powers at `n`.
pub fn closed_form_check(m: &IntMatrix, n: i64) -> Result<bool> {
    Ok(closed_form_power(m, n)? == m.pow_signed(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn companion() -> DimensionGroup {
        DimensionGroup::new(&IntMatrix::from_i64_rows(&[&[4, 1], &[32, 0]])).unwrap()
    }

    #[test]
    fn membership_examples() {
        let g = companion();
        assert!(g.membership(&[r(1, 2), r(3, 4)], 16).unwrap().is_member());
        assert_eq!(
            g.membership(&[r(1, 3), r(0, 1)], 16).unwrap(),
            Membership::NotMember { prime: 3.into() }
        );
        assert_eq!(g.membership(&[r(0, 1), r(0, 1)], 16).unwrap(), Membership::Member { level: 0 });
    }

    #[test]
    fn trace_and_positivity() {
        let g = companion();
        assert_eq!(g.trace(&[r(1, 1), r(-7, 1)]).unwrap().to_rational(), Some(r(1, 1)));
        assert!(g.is_positive(&[r(1, 1), r(-7, 1)]).unwrap());
        assert!(g.is_positive(&[r(-1, 1), r(9, 1)]).unwrap());
        assert!(!g.is_positive(&[r(1, 1), r(-8, 1)]).unwrap());
        assert!(g.is_positive(&[r(0, 1), r(0, 1)]).unwrap());
        assert_eq!(g.trace(&[r(1, 3), r(0, 1)]).unwrap_err(), Error::NotMember);
    }

    #[test]
    fn indices() {
        assert_eq!(companion().quotient_index().unwrap(), 32.into());
        let k = DimensionGroup::new(&IntMatrix::from_i64_rows(&[&[6, 1], &[16, 0]])).unwrap();
        assert_eq!(k.quotient_index().unwrap(), 16.into());
    }

    #[test]
    fn stage_convention_matches_concrete_trace() {
        let g = companion();
        let x = [BigInt::from(3), BigInt::from(-5)];
        for s in 1..5 {
            let concrete = g.from_stage(&x, s).unwrap();
            assert_eq!(g.trace(&concrete).unwrap(), g.stage_trace(&x, s).unwrap());
        }
    }

    #[test]
    fn closed_forms() {
        let j = IntMatrix::from_i64_rows(&[&[4, 1], &[32, 0]]);
        let k = IntMatrix::from_i64_rows(&[&[6, 1], &[16, 0]]);
        for n in -4..=4 {
            assert!(closed_form_check(&j, n).unwrap(), "J at {n}");
            assert!(closed_form_check(&k, n).unwrap(), "K at {n}");
        }
        assert!(closed_form_power(&IntMatrix::identity(2), 1).is_err());
    }
}
