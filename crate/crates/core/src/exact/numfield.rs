//! Arithmetic in simple number fields `Q[x]/(f)` and embeddings between them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::complex::interpolate;
use super::factor::factor_over_z;
use super::interval::Interval;
use super::poly::{resultant, IntPoly, RatPoly};
use super::roots::{locate_root, AlgebraicNumber};
use crate::error::{Error, Result};

/// `Q[x]/(modulus)` for an irreducible modulus, optionally with a chosen real
/// embedding of the generator.
#[derive(Clone, Debug)]
pub struct NumberField {
    modulus: IntPoly,
    monic: RatPoly,
    embedding: Option<AlgebraicNumber>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus
    }
}

impl NumberField {
    /// The field generated by a real algebraic number, embedded by it.
    pub fn generated_by(a: &AlgebraicNumber) -> Arc<Self> {
        let modulus = a.minpoly().clone();
        Arc::new(NumberField {
            monic: modulus.to_rat().monic(),
            modulus,
            embedding: Some(a.clone()),
        })
    }

    /// An abstract field; `modulus` must be irreducible.
    pub fn new(modulus: IntPoly) -> Result<Arc<Self>> {
        if modulus.deg() == 0 || !super::factor::is_irreducible(&modulus) {
            return Err(Error::Unsupported(format!("{modulus} is not irreducible")));
        }
        let modulus = modulus.primitive_part();
        Ok(Arc::new(NumberField {
            monic: modulus.to_rat().monic(),
            modulus,
            embedding: None,
        }))
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn embedding(&self) -> Option<&AlgebraicNumber> {
        self.embedding.as_ref()
    }
}

/// An element of a [`NumberField`] in the power basis of the generator.
#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for NfElem {}

impl NfElem {
    fn from_poly(field: &Arc<NumberField>, p: &RatPoly) -> Self {
        let r = p.rem(&field.monic).expect("nonzero modulus");
        let d = field.degree();
        NfElem {
            field: field.clone(),
            coords: (0..d).map(|i| r.coeff(i)).collect(),
        }
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for a degree {} field",
                coords.len(),
                field.degree()
            )));
        }
        Ok(NfElem { field: field.clone(), coords })
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        Self::from_poly(field, &RatPoly::constant(q))
    }

    pub fn from_int(field: &Arc<NumberField>, n: &BigInt) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.clone()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        NfElem { field: field.clone(), coords: vec![BigRational::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rational(field, BigRational::one())
    }

    /// The generator `x mod modulus`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &RatPoly::x())
    }

    /// `p(generator)` for a rational polynomial `p`.
    pub fn eval_poly(field: &Arc<NumberField>, p: &RatPoly) -> Self {
        Self::from_poly(field, p)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn as_poly(&self) -> RatPoly {
        RatPoly::new(self.coords.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.coords[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coords[0].clone())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field == o.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(NfElem {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(NfElem {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        NfElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(Self::from_poly(&self.field, &(&self.as_poly() * &o.as_poly())))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        NfElem {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| a * q).collect(),
        }
    }

    /// Inverse by the extended Euclidean algorithm: `r*a + s*f = 1`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, r, _) = RatPoly::xgcd(&self.as_poly(), &self.field.monic);
        debug_assert!(g.deg() == 0);
        Ok(Self::from_poly(&self.field, &r))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inverse()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one(&self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Minimal polynomial over the rationals: the first linear dependence
    /// among the powers `1, x, x^2, ...`.
    pub fn minpoly_over_q(&self) -> IntPoly {
        let d = self.field.degree();
        let mut basis: Vec<(Vec<BigRational>, usize)> = Vec::new();
        // Rows of the echelon form with the combination of powers that
        // produced them.
        let mut combos: Vec<Vec<BigRational>> = Vec::new();
        let mut power = Self::one(&self.field);
        for k in 0..=d {
            let mut v = power.coords.clone();
            let mut combo = vec![BigRational::zero(); d + 1];
            combo[k] = BigRational::one();
            for (row, (b, piv)) in basis.iter().enumerate() {
                if !v[*piv].is_zero() {
                    let f = &v[*piv] / &b[*piv];
                    for i in 0..d {
                        v[i] = &v[i] - &(&f * &b[i]);
                    }
                    for i in 0..=d {
                        combo[i] = &combo[i] - &(&f * &combos[row][i]);
                    }
                }
            }
            match v.iter().position(|c| !c.is_zero()) {
                Some(piv) => {
                    basis.push((v, piv));
                    combos.push(combo);
                }
                None => return RatPoly::new(combo).primitive_int(),
            }
            power = power.mul(self).expect("same field");
        }
        unreachable!("d + 1 powers in a d-dimensional space are dependent")
    }

    /// Sign under the field's real embedding.
    pub fn signum(&self) -> Result<i8> {
        if self.is_zero() {
            return Ok(0);
        }
        let mut a = self
            .field
            .embedding
            .clone()
            .ok_or_else(|| Error::Unsupported("field has no real embedding".into()))?;
        let p = self.as_poly();
        loop {
            let iv = a.interval().eval(&p);
            if iv.is_positive() {
                return Ok(1);
            }
            if iv.is_negative() {
                return Ok(-1);
            }
            a.refine();
        }
    }

    /// Enclosure of the value under the real embedding with the generator
    /// interval refined to width at most `width`.
    pub fn enclosure(&self, width: &BigRational) -> Result<Interval> {
        let a = self
            .field
            .embedding
            .as_ref()
            .ok_or_else(|| Error::Unsupported("field has no real embedding".into()))?;
        Ok(a.refined(width).interval().eval(&self.as_poly()))
    }

    /// The value under the real embedding as a real algebraic number.
    pub fn to_algebraic(&self) -> Result<AlgebraicNumber> {
        if let Some(q) = self.to_rational() {
            return Ok(AlgebraicNumber::from_rational(q));
        }
        let mut a = self
            .field
            .embedding
            .clone()
            .ok_or_else(|| Error::Unsupported("field has no real embedding".into()))?;
        let p = self.as_poly();
        let m = self.minpoly_over_q();
        locate_root(&m, || {
            a.refine();
            a.interval().eval(&p)
        })
    }

    pub fn cmp_zero(&self) -> Result<Ordering> {
        Ok(self.signum()?.cmp(&0))
    }
}

impl fmt::Display for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*L"),
                _ => format!("{c}*L^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Serialized as the power-basis coordinates.
impl Serialize for NfElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(|c| c.to_string()))
    }
}

/// `Res_y(g(y), f(x - k*y))` as a polynomial in `x`, by interpolation.
fn shifted_norm(f: &RatPoly, g: &RatPoly, k: i64) -> RatPoly {
    let deg = f.deg() * g.deg();
    let kq = BigRational::from_integer(BigInt::from(k));
    let xs: Vec<BigRational> = (0..=deg as i64)
        .map(|i| BigRational::from_integer(BigInt::from(i)))
        .collect();
    let shift = RatPoly::new(vec![BigRational::zero(), -kq]);
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|x0| {
            let arg = &RatPoly::constant(x0.clone()) + &shift;
            resultant(g, &f.compose(&arg))
        })
        .collect();
    interpolate(&xs, &ys)
}

/// Polynomials over a number field, used only for the gcd in [`roots_in_field`].
fn nf_poly_rem(a: &[NfElem], b: &[NfElem]) -> Result<Vec<NfElem>> {
    let mut r = a.to_vec();
    let lead_inv = b.last().expect("nonzero").inverse()?;
    while r.len() >= b.len() {
        let c = r.last().expect("nonempty").mul(&lead_inv)?;
        let shift = r.len() - b.len();
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&c.mul(bc)?)?;
        }
        r.pop();
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    Ok(r)
}

fn nf_poly_gcd(mut a: Vec<NfElem>, mut b: Vec<NfElem>) -> Result<Vec<NfElem>> {
    while !b.is_empty() {
        let r = nf_poly_rem(&a, &b)?;
        a = std::mem::replace(&mut b, r);
    }
    Ok(a)
}

/// All roots of `f` lying in `field`, each once.
pub fn roots_in_field(f: &IntPoly, field: &Arc<NumberField>) -> Result<Vec<NfElem>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.squarefree_part();
    let fr = f.to_rat();
    let g = field.monic.clone();
    let beta = NfElem::generator(field);
    // Choose a shift making the norm squarefree.
    let mut norm = None;
    for k in [1i64, -1, 2, -2, 3, -3, 4, 5, 7, 11, 13] {
        let n = shifted_norm(&fr, &g, k).primitive_int();
        if n.is_squarefree() {
            norm = Some((k, n));
            break;
        }
    }
    let (k, norm) = norm.ok_or_else(|| Error::Unsupported("no squarefree shifted norm".into()))?;
    let kb = beta.scale(&BigRational::from_integer(BigInt::from(k)));
    let f_nf: Vec<NfElem> = fr
        .coeffs()
        .iter()
        .map(|c| NfElem::from_rational(field, c.clone()))
        .collect();
    let mut out = Vec::new();
    for h in factor_over_z(&norm)?.irreducibles() {
        if h.deg() != field.degree() {
            continue;
        }
        // h(x + k*beta) over the field, by Horner.
        let lin = [kb.clone(), NfElem::one(field)];
        let mut acc: Vec<NfElem> = Vec::new();
        for c in h.coeffs().iter().rev() {
            let mut next = vec![NfElem::zero(field); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                for (j, l) in lin.iter().enumerate() {
                    next[i + j] = next[i + j].add(&a.mul(l)?)?;
                }
            }
            next[0] = next[0].add(&NfElem::from_int(field, c))?;
            while next.last().is_some_and(|x| x.is_zero()) {
                next.pop();
            }
            acc = next;
        }
        let g = nf_poly_gcd(f_nf.clone(), acc)?;
        if g.len() == 2 {
            out.push(g[0].div(&g[1])?.neg());
        }
    }
    Ok(out)
}

/// The element of `field` equal to the real algebraic number `a` under the
/// field's embedding, if there is one.
pub fn embed_real(a: &AlgebraicNumber, field: &Arc<NumberField>) -> Result<Option<NfElem>> {
    for r in roots_in_field(a.minpoly(), field)? {
        if r.to_algebraic()? == *a {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::roots::isolate_real_roots;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    fn plastic() -> Arc<NumberField> {
        let r = isolate_real_roots(&ip(&[-1, -1, 0, 1])).unwrap();
        NumberField::generated_by(&r[0])
    }

    #[test]
    fn cube_relation() {
        let k = plastic();
        let l = NfElem::generator(&k);
        let prod = l.mul(&l.pow(2).unwrap()).unwrap();
        assert_eq!(prod, l.add(&NfElem::one(&k)).unwrap());
    }

    #[test]
    fn inverse_of_generator() {
        let k = plastic();
        let l = NfElem::generator(&k);
        let inv = l.inverse().unwrap();
        let expect = l.pow(2).unwrap().sub(&NfElem::one(&k)).unwrap();
        assert_eq!(inv, expect);
        assert_eq!(NfElem::one(&k).inverse().unwrap(), NfElem::one(&k));
        assert_eq!(NfElem::zero(&k).inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn minimal_polynomials() {
        let k = plastic();
        let l = NfElem::generator(&k);
        assert_eq!(l.minpoly_over_q(), ip(&[-1, -1, 0, 1]));
        let eight = NfElem::from_int(&k, &BigInt::from(8));
        assert_eq!(eight.minpoly_over_q(), ip(&[-8, 1]));
        assert_eq!(l.pow(2).unwrap().minpoly_over_q(), ip(&[-1, 1, -2, 1]));
    }

    #[test]
    fn signs_under_embedding() {
        let k = plastic();
        let l = NfElem::generator(&k);
        assert_eq!(l.signum().unwrap(), 1);
        // 4/3 - L > 0 since L ~ 1.3247
        let x = NfElem::from_rational(&k, BigRational::new(4.into(), 3.into()))
            .sub(&l)
            .unwrap();
        assert_eq!(x.signum().unwrap(), 1);
        assert_eq!(x.neg().signum().unwrap(), -1);
        let a = x.to_algebraic().unwrap();
        assert!((a.to_f64() - (4.0 / 3.0 - 1.324_717_957_244_746)).abs() < 1e-12);
    }

    #[test]
    fn embedding_of_subfield_generator() {
        // Q(sqrt 2) inside Q(2^(1/4)): sqrt 2 = a^2.
        let r = isolate_real_roots(&ip(&[-2, 0, 0, 0, 1])).unwrap();
        let k = NumberField::generated_by(&r[1]);
        let s2 = isolate_real_roots(&ip(&[-2, 0, 1])).unwrap();
        let pos = embed_real(&s2[1], &k).unwrap().unwrap();
        assert_eq!(pos, NfElem::generator(&k).pow(2).unwrap());
        let neg = embed_real(&s2[0], &k).unwrap().unwrap();
        assert_eq!(neg, pos.neg());
        let s3 = isolate_real_roots(&ip(&[-3, 0, 1])).unwrap();
        assert!(embed_real(&s3[1], &k).unwrap().is_none());
    }
}
