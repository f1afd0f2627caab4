//! Real root isolation by Sturm sequences and real algebraic numbers.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::factor::factor_over_z;
use super::interval::Interval;
use super::poly::{IntPoly, RatPoly};
use crate::error::{Error, Result};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sturm sequence of a squarefree polynomial, each member scaled by a
/// positive constant to integer coefficients.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

/// Rescales a rational polynomial to a primitive integer one without
/// changing the sign of its values.
fn positive_rescale(r: &RatPoly) -> IntPoly {
    let p = r.primitive_int();
    let same = p.lead().map(|l| l.is_positive()) == r.lead().map(|l| l.is_positive());
    if same {
        p
    } else {
        -&p
    }
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone()];
        if p.deg() == 0 {
            return Sturm { seq };
        }
        seq.push(positive_rescale(&p.derivative().to_rat()));
        loop {
            let n = seq.len();
            let r = seq[n - 2]
                .to_rat()
                .rem(&seq[n - 1].to_rat())
                .expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            seq.push(-&positive_rescale(&r));
        }
        Sturm { seq }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Isolating intervals for the real roots of an irreducible polynomial of
/// degree at least two, sorted ascending. Endpoints are never roots.
fn isolate_irreducible(f: &IntPoly) -> Vec<(BigRational, BigRational)> {
    let sturm = Sturm::new(f);
    let b = BigRational::from_integer(f.root_bound());
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                // An irreducible polynomial of degree >= 2 has no rational
                // roots, so the midpoint is never a root.
                let mid = (&lo + &hi) / rat(2);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// A real algebraic number: an irreducible primitive integer polynomial with
/// positive lead coefficient and an interval containing exactly one of its
/// roots. Rational numbers carry a degenerate interval `[q, q]`.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

impl AlgebraicNumber {
    pub fn from_rational(q: BigRational) -> Self {
        let minpoly = IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]);
        AlgebraicNumber { minpoly, lo: q.clone(), hi: q }
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    /// Builds the root of `minpoly` in `(lo, hi)`, checking that the
    /// polynomial is irreducible and the interval isolates exactly one root.
    pub fn new(minpoly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        if minpoly.deg() == 0 {
            return Err(Error::ZeroPolynomial);
        }
        let f = factor_over_z(&minpoly)?;
        if f.factors.len() != 1 || f.factors[0].1 != 1 {
            return Err(Error::Unsupported(format!("{minpoly} is not irreducible")));
        }
        let minpoly = f.factors[0].0.clone();
        if minpoly.deg() == 1 {
            let q = BigRational::new(-minpoly.coeff(0), minpoly.coeff(1));
            if q < lo || q > hi {
                return Err(Error::Unsupported("interval misses the root".into()));
            }
            return Ok(Self::from_rational(q));
        }
        if minpoly.sign_at(&lo) == 0 || minpoly.sign_at(&hi) == 0 {
            return Err(Error::Unsupported("interval endpoint is a root".into()));
        }
        if lo > hi || Sturm::new(&minpoly).count(&lo, &hi) != 1 {
            return Err(Error::Unsupported("interval does not isolate one root".into()));
        }
        Ok(AlgebraicNumber { minpoly, lo, hi })
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo.clone(), self.hi.clone())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        (self.minpoly.deg() == 1).then(|| self.lo.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.minpoly.deg() == 1
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.is_rational() {
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        let s_lo = self.minpoly.sign_at(&self.lo);
        let s_mid = self.minpoly.sign_at(&mid);
        debug_assert!(s_mid != 0);
        if s_lo == s_mid {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Refines until the interval is at most `width` wide.
    pub fn refine_to(&mut self, width: &BigRational) {
        while &self.hi - &self.lo > *width {
            self.refine();
        }
    }

    /// A copy refined to width at most `width`.
    pub fn refined(&self, width: &BigRational) -> Self {
        let mut c = self.clone();
        c.refine_to(width);
        c
    }

    pub fn signum(&self) -> i8 {
        self.cmp_rational(&BigRational::zero()) as i8
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if let Some(r) = self.to_rational() {
            return r.cmp(q);
        }
        let mut a = self.clone();
        loop {
            if &a.hi < q {
                return Ordering::Less;
            }
            if &a.lo > q {
                return Ordering::Greater;
            }
            if a.minpoly.sign_at(q) == 0 {
                unreachable!("irreducible of degree >= 2 has no rational root");
            }
            a.refine();
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.refined(&BigRational::new(BigInt::one(), BigInt::one() << 64));
        let mid = (&a.lo + &a.hi) / rat(2);
        mid.to_f64().unwrap_or(f64::NAN)
    }

    pub fn neg(&self) -> Self {
        AlgebraicNumber {
            minpoly: self.minpoly.negate_var().primitive_part(),
            lo: -self.hi.clone(),
            hi: -self.lo.clone(),
        }
    }

    /// Reciprocal of a nonzero number.
    pub fn recip(&self) -> Result<Self> {
        if let Some(q) = self.to_rational() {
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Self::from_rational(q.recip()));
        }
        let mut a = self.clone();
        while a.interval().contains_zero() {
            a.refine();
        }
        Ok(AlgebraicNumber {
            minpoly: a.minpoly.reversed().primitive_part(),
            lo: a.hi.recip(),
            hi: a.lo.recip(),
        })
    }

    /// Nonnegative square root of a nonnegative number.
    pub fn sqrt(&self) -> Result<Self> {
        if self.signum() < 0 {
            return Err(Error::Unsupported("square root of a negative number".into()));
        }
        if self.signum() == 0 {
            return Ok(self.clone());
        }
        // The positive roots of f(t^2) are the square roots of the positive
        // roots of f, in the same order.
        let own: Vec<AlgebraicNumber> = isolate_real_roots(&self.minpoly)?
            .into_iter()
            .filter(|r| r.signum() > 0)
            .collect();
        let idx = own
            .iter()
            .position(|r| r == self)
            .expect("self is a root of its minpoly");
        let roots: Vec<AlgebraicNumber> = isolate_real_roots(&self.minpoly.inflate(2))?
            .into_iter()
            .filter(|r| r.signum() > 0)
            .collect();
        Ok(roots[idx].clone())
    }

    /// `self^2`, located among the roots of `g_e(t)^2 - t*g_o(t)^2` where
    /// `g(x) = g_e(x^2) + x*g_o(x^2)`.
    pub fn square(&self) -> Result<Self> {
        if let Some(q) = self.to_rational() {
            return Ok(Self::from_rational(&q * &q));
        }
        let cs = self.minpoly.coeffs();
        let even = IntPoly::new(cs.iter().step_by(2).cloned().collect());
        let odd = IntPoly::new(cs.iter().skip(1).step_by(2).cloned().collect());
        let h = &(&even * &even) - &(&IntPoly::x() * &(&odd * &odd));
        let mut a = self.clone();
        locate_root(&h, || {
            a.refine();
            a.interval().pow(2)
        })
    }

    /// Interval enclosure of `self^e`, with the base refined to `width`.
    pub fn pow_interval(&self, e: u32, width: &BigRational) -> Interval {
        self.refined(width).interval().pow(e)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        if let Some(q) = other.to_rational() {
            return self.cmp_rational(&q);
        }
        if let Some(q) = self.to_rational() {
            return other.cmp_rational(&q).reverse();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let same_poly = a.minpoly == b.minpoly;
        let sturm = same_poly.then(|| Sturm::new(&a.minpoly));
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if let Some(s) = &sturm {
                // Each interval holds one root; if their overlap holds
                // exactly one root it is the root of both.
                let lo = (&a.lo).max(&b.lo);
                let hi = (&a.hi).min(&b.hi);
                if s.count(lo, hi) == 1 {
                    return Ordering::Equal;
                }
            }
            a.refine();
            b.refine();
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(
                f,
                "root of {} in [{}, {}] (~{:.9})",
                self.minpoly,
                self.lo,
                self.hi,
                self.to_f64()
            ),
        }
    }
}

/// Serialized as minimal polynomial, isolating interval and a decimal
/// approximation for readers.
impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AlgebraicNumber", 3)?;
        st.serialize_field("minpoly", &self.minpoly)?;
        st.serialize_field("interval", &[self.lo.to_string(), self.hi.to_string()])?;
        st.serialize_field("approx", &format!("{:.12}", self.to_f64()))?;
        st.end()
    }
}

/// Identifies a real root of `p` from a sequence of enclosures that contain
/// it and shrink towards it.
pub fn locate_root(p: &IntPoly, mut enclose: impl FnMut() -> Interval) -> Result<AlgebraicNumber> {
    let mut roots = isolate_real_roots(p)?;
    for _ in 0..400 {
        let iv = enclose();
        let w = iv.width();
        let mut hits = Vec::new();
        for (i, r) in roots.iter_mut().enumerate() {
            if !w.is_zero() {
                r.refine_to(&w);
            } else if let Some(q) = r.to_rational() {
                if q == iv.lo {
                    return Ok(r.clone());
                }
            }
            if r.interval().overlaps(&iv) {
                hits.push(i);
            }
        }
        match hits.len() {
            0 => return Err(Error::Certification("no root in enclosure".into())),
            1 => return Ok(roots[hits[0]].clone()),
            _ => {}
        }
    }
    Err(Error::Certification("enclosures did not separate roots".into()))
}

/// All real roots of a nonzero polynomial, distinct and sorted ascending.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
    let fac = factor_over_z(p)?;
    let mut out = Vec::new();
    for f in fac.irreducibles() {
        if f.deg() == 1 {
            out.push(AlgebraicNumber::from_rational(BigRational::new(
                -f.coeff(0),
                f.coeff(1),
            )));
        } else {
            for (lo, hi) in isolate_irreducible(f) {
                out.push(AlgebraicNumber { minpoly: f.clone(), lo, hi });
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_roots() {
        let r = isolate_real_roots(&ip(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].cmp_rational(&q(-1, 1)) == Ordering::Less);
        assert!(r[0].cmp_rational(&q(-2, 1)) == Ordering::Greater);
        assert!(r[1].cmp_rational(&q(1, 1)) == Ordering::Greater);
        assert!(r[1].cmp_rational(&q(2, 1)) == Ordering::Less);
    }

    #[test]
    fn plastic_number_refines_into_bracket() {
        let r = isolate_real_roots(&ip(&[-1, -1, 0, 1])).unwrap();
        assert_eq!(r.len(), 1);
        let x = r[0].refined(&q(1, 1000));
        assert!(x.lo() >= &q(132, 100) && x.hi() <= &q(133, 100));
    }

    #[test]
    fn rational_roots_are_exact() {
        let r = isolate_real_roots(&ip(&[-8, 1])).unwrap();
        assert_eq!(r[0].to_rational(), Some(q(8, 1)));
        let r = isolate_real_roots(&(&ip(&[-8, 1]) * &ip(&[4, 1]))).unwrap();
        assert_eq!(r[0].to_rational(), Some(q(-4, 1)));
        assert_eq!(r[1].to_rational(), Some(q(8, 1)));
    }

    #[test]
    fn equality_across_interval_choices() {
        let f = ip(&[-2, 0, 1]);
        let a = AlgebraicNumber::new(f.clone(), q(1, 1), q(2, 1)).unwrap();
        let b = AlgebraicNumber::new(f.clone(), q(13, 10), q(3, 2)).unwrap();
        assert_eq!(a, b);
        let c = AlgebraicNumber::new(f, q(-2, 1), q(-1, 1)).unwrap();
        assert!(c < a);
        assert!(AlgebraicNumber::new(ip(&[-2, 0, 1]), q(-2, 1), q(2, 1)).is_err());
    }

    #[test]
    fn sqrt_and_recip() {
        let two = AlgebraicNumber::from_integer(2.into());
        let s = two.sqrt().unwrap();
        assert_eq!(s.minpoly(), &ip(&[-2, 0, 1]));
        assert!(s.is_positive());
        let r = s.recip().unwrap();
        assert_eq!(r.minpoly(), &ip(&[-1, 0, 2]));
        assert!((r.to_f64() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let four = AlgebraicNumber::from_integer(4.into());
        assert_eq!(four.sqrt().unwrap().to_rational(), Some(q(2, 1)));
    }

    #[test]
    fn square_of_quadratic_irrational() {
        // golden ratio squared is phi + 1, root of t^2 - 3t + 1
        let phi = isolate_real_roots(&ip(&[-1, -1, 1])).unwrap()[1].clone();
        let sq = phi.square().unwrap();
        assert_eq!(sq.minpoly(), &ip(&[1, -3, 1]));
        assert!(sq.cmp_rational(&q(2, 1)) == Ordering::Greater);
        let s2 = isolate_real_roots(&ip(&[-2, 0, 1])).unwrap()[0].square().unwrap();
        assert_eq!(s2.to_rational(), Some(q(2, 1)));
    }

    #[test]
    fn sturm_count_matches_isolation() {
        let p = &(&ip(&[-2, 0, 1]) * &ip(&[-1, -1, 0, 1])) * &ip(&[1, 0, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count(&q(-10, 1), &q(10, 1)), 3);
        assert_eq!(isolate_real_roots(&p).unwrap().len(), 3);
    }
}
