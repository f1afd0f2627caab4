use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Coefficient ring for [`Poly`].
pub trait Ring:
    Clone
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + fmt::Debug
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + fmt::Debug
        + Neg<Output = T>
        + for<'a> Add<&'a T, Output = T>
        + for<'a> Sub<&'a T, Output = T>
        + for<'a> Mul<&'a T, Output = T>
{
}

/// Dense univariate polynomial, coefficients stored lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

pub type IntPoly = Poly<BigInt>;
pub type RatPoly = Poly<BigRational>;

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    /// The indeterminate `t`.
    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| T::from_i64(c).expect("i64 fits")).collect())
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; only for callers that
    /// have excluded zero already.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x + c)
    }

    /// `self(other(t))`
    pub fn compose(&self, other: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * &T::from_usize(i).expect("usize fits"))
                .collect(),
        )
    }

    /// `t^deg * self(1/t)`
    pub fn reversed(&self) -> Self {
        let mut cs = self.coeffs.clone();
        cs.reverse();
        Poly::new(cs)
    }

    /// `self(-t)`
    pub fn negate_var(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `self(t^k)`
    pub fn inflate(&self, k: usize) -> Self {
        let mut cs = vec![T::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            cs[i * k] = c.clone();
        }
        Poly::new(cs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = std::mem::replace(&mut out[i + j], T::zero()) + &(a.clone() * b);
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Ring> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Self) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Ring> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Self) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Ring> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Self) -> Poly<T> {
        &self * &rhs
    }
}

impl<'a, T: Ring> Add<&'a Poly<T>> for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        &self + rhs
    }
}

impl<'a, T: Ring> Sub<&'a Poly<T>> for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        &self - rhs
    }
}

impl<'a, T: Ring> Mul<&'a Poly<T>> for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        &self * rhs
    }
}

impl<T: Ring> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        -&self
    }
}

impl<T: Ring> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for Poly<T> {
    fn one() -> Self {
        Poly::one()
    }
}

/// Constants, so polynomials can serve as matrix entries.
impl<T: Ring> FromPrimitive for Poly<T> {
    fn from_i64(n: i64) -> Option<Self> {
        T::from_i64(n).map(Poly::constant)
    }
    fn from_u64(n: u64) -> Option<Self> {
        T::from_u64(n).map(Poly::constant)
    }
}

impl<T: Ring + fmt::Display + Signed> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Coefficient list, lowest degree first.
impl<T: fmt::Debug> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

/// Serialized as the coefficient list, lowest degree first, each coefficient
/// as a decimal string.
impl<T: fmt::Display> Serialize for Poly<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Rational coefficients: Euclidean domain operations.

impl Poly<BigRational> {
    pub fn from_int(p: &IntPoly) -> Self {
        p.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lead().ok_or(Error::ZeroPolynomialDivisor)?.clone();
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
    pub fn xgcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s2 = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s2);
            let t2 = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Clears denominators and removes the content; lead coefficient positive.
    pub fn primitive_int(&self) -> IntPoly {
        if self.is_zero() {
            return Poly::zero();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let p = Poly::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        );
        p.primitive_part()
    }
}

// ---------------------------------------------------------------------------
// Integer coefficients.

impl Poly<BigInt> {
    pub fn to_rat(&self) -> RatPoly {
        RatPoly::from_int(self)
    }

    /// Gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides by the content and makes the lead coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.lead().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        Poly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// Sign of `self(x)` for rational `x`, computed without rationals:
    /// `den^deg * p(num/den)` has the same sign.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let (n, d) = (x.numer(), x.denom());
        let deg = self.deg();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for _ in 0..=deg {
            terms.push(dpow.clone());
            dpow *= d;
        }
        // sum c_i n^i d^(deg-i)
        let mut npow = BigInt::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * &npow * &terms[deg - i];
            npow *= n;
        }
        match acc.sign() {
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
            num_bigint::Sign::Plus => 1,
        }
    }

    /// Exact quotient if `d` divides `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dl = d.lead()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if self.coeffs.len() < d.coeffs.len() {
            return None;
        }
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + dd].div_rem(dl);
            if !rem.is_zero() {
                return None;
            }
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Poly::new(q))
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Result<Self> {
        let dl = d.lead().ok_or(Error::ZeroPolynomialDivisor)?.clone();
        let dd = d.deg();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let c = r[top].clone();
            for x in r.iter_mut() {
                *x *= &dl;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[top - dd + j] -= &c * dc;
            }
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Ok(Poly::new(r))
    }

    /// Primitive gcd with positive lead coefficient (primitive PRS).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
    }

    /// Division with remainder over the rationals, reported as rationals.
    pub fn div_rem_rational(&self, d: &Self) -> Result<(RatPoly, RatPoly)> {
        self.to_rat().div_rem(&d.to_rat())
    }

    /// Squarefree decomposition `self = c * prod f_i^i` (Yun). Returns the
    /// nonconstant primitive factors with their multiplicities.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, usize)> {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let mut c = fp.to_rat().div_rem(&a.to_rat()).expect("nonzero").0;
        let mut out = Vec::new();
        let mut i = 1;
        loop {
            let bd = b.to_rat().derivative();
            let d = &c - &bd;
            if d.is_zero() {
                if b.deg() > 0 {
                    out.push((b.primitive_part(), i));
                }
                break;
            }
            a = b.gcd(&d.primitive_int());
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_rem(&a.to_rat()).expect("nonzero").0;
            i += 1;
            if b.deg() == 0 {
                break;
            }
        }
        out
    }

    /// Product of the distinct irreducible factors, primitive.
    pub fn squarefree_part(&self) -> Self {
        let f = self.primitive_part();
        if f.deg() == 0 {
            return f;
        }
        let g = f.gcd(&f.derivative());
        f.div_exact(&g).expect("gcd divides").primitive_part()
    }

    pub fn is_squarefree(&self) -> bool {
        self.deg() == 0 || self.gcd(&self.derivative()).deg() == 0
    }

    /// Cauchy bound: every complex root has modulus below the result.
    pub fn root_bound(&self) -> BigInt {
        let lead = self.lead().expect("nonzero").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigInt::one() + m.div_ceil(&lead)
    }
}

/// Resultant of two polynomials over the rationals.
pub fn resultant(a: &RatPoly, b: &RatPoly) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    let (da, db) = (a.deg(), b.deg());
    if db == 0 {
        return num_traits::pow(b.coeff(0), da);
    }
    if da == 0 {
        return num_traits::pow(a.coeff(0), db);
    }
    let r = a.rem(b).expect("nonzero");
    if r.is_zero() {
        return BigRational::zero();
    }
    let sign = if (da * db) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    let lb = num_traits::pow(b.lead().expect("nonzero").clone(), da - r.deg());
    sign * lb * resultant(b, &r)
}

/// Discriminant of an integer polynomial of degree at least one.
pub fn discriminant(f: &IntPoly) -> Result<BigInt> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Err(Error::Unsupported("discriminant of a constant".into()));
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let fr = f.to_rat();
    let res = resultant(&fr, &fr.derivative());
    let lead = BigRational::from_integer(f.lead().expect("nonzero").clone());
    let mut d = res / lead;
    if (n * (n - 1) / 2) % 2 == 1 {
        d = -d;
    }
    debug_assert!(d.is_integer());
    Ok(d.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn gcd_of_shared_root() {
        // t^2 - 1 and t^2 - 2t + 1 share t - 1
        assert_eq!(ip(&[-1, 0, 1]).gcd(&ip(&[1, -2, 1])), ip(&[-1, 1]));
    }

    #[test]
    fn product_matches_hand_expansion() {
        // (t - 2)(t^4 + t^3 + 1) = t^5 - t^4 - 2t^3 + t - 2
        let p = &ip(&[-2, 1]) * &ip(&[1, 0, 0, 1, 1]);
        assert_eq!(p, ip(&[-2, 1, 0, -2, -1, 1]));
    }

    #[test]
    fn divmod_by_monomial() {
        let (q, r) = ip(&[0, 0, 0, 1]).div_rem_rational(&ip(&[0, 1])).unwrap();
        assert_eq!(q, ip(&[0, 0, 1]).to_rat());
        assert!(r.is_zero());
        assert_eq!(
            ip(&[1, 1]).div_rem_rational(&IntPoly::zero()),
            Err(Error::ZeroPolynomialDivisor)
        );
    }

    #[test]
    fn content_and_primitive_part() {
        let p = ip(&[-4, 6, -2]);
        assert_eq!(p.content(), BigInt::from(2));
        assert_eq!(p.primitive_part(), ip(&[2, -3, 1]));
    }

    #[test]
    fn squarefree_decomposition_recovers_powers() {
        // (t-1)^2 (t+2)^3 t
        let f = &(&ip(&[-1, 1]).pow(2) * &ip(&[2, 1]).pow(3)) * &ip(&[0, 1]);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(ip(&[0, 1]), 1), (ip(&[-1, 1]), 2), (ip(&[2, 1]), 3)]);
        assert_eq!(f.squarefree_part(), &(&ip(&[-1, 1]) * &ip(&[2, 1])) * &ip(&[0, 1]));
    }

    #[test]
    fn discriminants_of_quartic_factors() {
        assert_eq!(discriminant(&ip(&[1, -2, 4, -3, 1])).unwrap(), BigInt::from(125));
        assert_eq!(discriminant(&ip(&[1, 0, 0, 1, 1])).unwrap(), BigInt::from(229));
        assert_eq!(discriminant(&ip(&[-2, 0, 1])).unwrap(), BigInt::from(8));
    }

    #[test]
    fn xgcd_gives_bezout() {
        let a = ip(&[-1, -1, 0, 1]).to_rat();
        let b = ip(&[0, 1]).to_rat();
        let (g, s, t) = RatPoly::xgcd(&a, &b);
        assert!(g.is_one_poly());
        assert_eq!(&(&s * &a) + &(&t * &b), RatPoly::one());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(ip(&[-2, 1, 0, -2, -1, 1]).to_string(), "t^5 - t^4 - 2*t^3 + t - 2");
    }

    impl RatPoly {
        fn is_one_poly(&self) -> bool {
            *self == RatPoly::one()
        }
    }
}
