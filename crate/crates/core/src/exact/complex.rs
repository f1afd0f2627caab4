//! Certified complex roots and exact squared moduli.
//!
//! Roots are approximated numerically, then certified: a disc of radius
//! `n|f(z)/f'(z)|` around `z` always contains a root, so `n` pairwise disjoint
//! discs pin down every root of a squarefree degree-`n` polynomial. The exact
//! squared modulus `|mu|^2 = mu * conj(mu)` is a root of the polynomial whose
//! roots are all pairwise products of roots, and is picked out of it by the
//! disc enclosure.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::interval::Interval;
use super::poly::{resultant, IntPoly, RatPoly};
use super::roots::{locate_root, AlgebraicNumber};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    fn zero() -> Self {
        GaussRat { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn from_c64(z: Complex64) -> Option<Self> {
        Some(GaussRat {
            re: BigRational::from_f64(z.re)?,
            im: BigRational::from_f64(z.im)?,
        })
    }

    fn sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Self) -> Self {
        let n = o.norm_sq();
        let conj = GaussRat { re: o.re.clone(), im: -o.im.clone() };
        let p = self.mul(&conj);
        GaussRat { re: p.re / &n, im: p.im / n }
    }

    fn round(&self, bits: u32) -> Self {
        let scale = BigRational::from_integer(BigInt::one() << bits);
        let r = |x: &BigRational| (x * &scale).round() / &scale;
        GaussRat { re: r(&self.re), im: r(&self.im) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

fn eval_gauss(p: &RatPoly, z: &GaussRat) -> GaussRat {
    let mut acc = GaussRat::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

/// Rational bounds `lo <= sqrt(q) <= hi` with about `bits` bits of absolute
/// precision.
pub fn sqrt_bounds(q: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!q.is_negative());
    let (n, d) = (q.numer(), q.denom());
    let shift = BigInt::one() << (2 * bits);
    let s = (n * d * shift).sqrt();
    let den = d * (BigInt::one() << bits);
    (
        BigRational::new(s.clone(), den.clone()),
        BigRational::new(s + 1, den),
    )
}

/// Simultaneous Newton iteration (Aberth) in double precision.
fn aberth(p: &IntPoly) -> Vec<Complex64> {
    let n = p.deg();
    let lead = p.lead().expect("nonzero").to_f64().unwrap_or(1.0);
    let cs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN) / lead)
        .collect();
    let radius = 1.0 + cs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, th)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for c in cs.iter().rev() {
            df = df * x + f;
            f = f * x + c;
        }
        (f, df)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (f, df) = eval(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// A root of a squarefree polynomial enclosed in a certified disc that
/// contains no other root.
#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    center: GaussRat,
    /// Upper bound on the disc radius.
    radius: BigRational,
}

impl CertifiedRoot {
    pub fn approx(&self) -> Complex64 {
        self.center.to_c64()
    }

    /// Whether the disc meets the real axis (necessary for a real root).
    pub fn may_be_real(&self) -> bool {
        self.center.im.abs() <= self.radius
    }

    /// Enclosure of `|mu|^2`.
    pub fn modulus_sq_interval(&self) -> Interval {
        let (a, b) = sqrt_bounds(&self.center.norm_sq(), 128);
        let lo = &a - &self.radius;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        let hi = b + &self.radius;
        Interval::new(&lo * &lo, &hi * &hi)
    }
}

fn disc_radius(f: &RatPoly, df: &RatPoly, z: &GaussRat) -> Option<BigRational> {
    let n = BigRational::from_integer(BigInt::from(f.deg()));
    let fz = eval_gauss(f, z).norm_sq();
    if fz.is_zero() {
        return Some(BigRational::zero());
    }
    let dz = eval_gauss(df, z).norm_sq();
    if dz.is_zero() {
        return None;
    }
    let r_sq = &n * &n * fz / dz;
    Some(sqrt_bounds(&r_sq, 128).1)
}

fn discs_disjoint(roots: &[CertifiedRoot]) -> bool {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = roots[i].center.sub(&roots[j].center).norm_sq();
            let r = &roots[i].radius + &roots[j].radius;
            if d <= &r * &r {
                return false;
            }
        }
    }
    true
}

/// Certified discs for every complex root of a squarefree polynomial.
pub fn certified_roots(p: &IntPoly) -> Result<Vec<CertifiedRoot>> {
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    if !p.is_squarefree() {
        return Err(Error::Unsupported("certified roots need a squarefree polynomial".into()));
    }
    let f = p.to_rat();
    let df = f.derivative();
    let mut centers: Vec<GaussRat> = aberth(p)
        .into_iter()
        .map(|z| GaussRat::from_c64(z).ok_or_else(|| Error::Certification("non-finite root".into())))
        .collect::<Result<_>>()?;
    let mut bits = 96;
    for _ in 0..5 {
        let mut roots = Vec::with_capacity(centers.len());
        let mut ok = true;
        for c in &centers {
            match disc_radius(&f, &df, c) {
                Some(radius) => roots.push(CertifiedRoot { center: c.clone(), radius }),
                None => ok = false,
            }
        }
        if ok && discs_disjoint(&roots) {
            roots.sort_by(|a, b| {
                let (x, y) = (a.approx(), b.approx());
                x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
            });
            return Ok(roots);
        }
        // Newton steps in exact arithmetic, rounded to keep sizes bounded.
        for c in centers.iter_mut() {
            for _ in 0..2 {
                let d = eval_gauss(&df, c);
                if d.norm_sq().is_zero() {
                    break;
                }
                *c = c.sub(&eval_gauss(&f, c).div(&d)).round(bits);
            }
        }
        bits *= 2;
    }
    Err(Error::Certification(format!("could not separate the roots of {p}")))
}

/// Polynomial whose roots are the products `mu_i * mu_j` over all ordered
/// pairs of roots of `g`, built by interpolating resultants.
pub fn pairwise_product_poly(g: &IntPoly) -> IntPoly {
    let n = g.deg();
    let gr = g.to_rat();
    let points = n * n + 1;
    let xs: Vec<BigRational> = (0..points)
        .map(|k| BigRational::from_integer(BigInt::from(k)))
        .collect();
    let ys: Vec<BigRational> = xs
        .iter()
        .map(|t0| {
            // x^n g(t0 / x) = sum c_k t0^k x^(n-k)
            let mut cs = vec![BigRational::zero(); n + 1];
            let mut tp = BigRational::one();
            for k in 0..=n {
                cs[n - k] = gr.coeff(k) * &tp;
                tp *= t0;
            }
            resultant(&gr, &RatPoly::new(cs))
        })
        .collect();
    interpolate(&xs, &ys).primitive_int()
}

/// Newton interpolation over the rationals.
pub(crate) fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> RatPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = RatPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = RatPoly::new(vec![-xs[i].clone(), BigRational::one()]);
        p = &(&p * &lin) + &RatPoly::constant(coef[i].clone());
    }
    p
}

/// A complex root with its exact squared modulus.
#[derive(Clone, Debug)]
pub struct RootModulus {
    pub approx: Complex64,
    pub modulus_sq: AlgebraicNumber,
}

impl serde::Serialize for RootModulus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootModulus", 3)?;
        st.serialize_field("re", &format!("{:.12}", self.approx.re))?;
        st.serialize_field("im", &format!("{:.12}", self.approx.im))?;
        st.serialize_field("modulus_sq", &self.modulus_sq)?;
        st.end()
    }
}

/// Exact squared moduli of all roots of a squarefree polynomial, one entry
/// per root.
pub fn squared_moduli(p: &IntPoly) -> Result<Vec<RootModulus>> {
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    let roots = certified_roots(p)?;
    let products = pairwise_product_poly(p);
    let f = p.to_rat();
    let df = f.derivative();
    let mut out = Vec::with_capacity(roots.len());
    for root in roots {
        let approx = root.approx();
        let mut cur = root;
        let mut bits = 128;
        let mut first = true;
        let modulus_sq = locate_root(&products, || {
            if !first {
                // Tighten the disc by an exact Newton step.
                let d = eval_gauss(&df, &cur.center);
                if !d.norm_sq().is_zero() {
                    let c = cur.center.sub(&eval_gauss(&f, &cur.center).div(&d)).round(bits);
                    if let Some(r) = disc_radius(&f, &df, &c) {
                        let moved = c.sub(&cur.center).norm_sq();
                        let slack = &cur.radius - &r;
                        // Keep the new disc only if it lies inside the old one.
                        if !slack.is_negative() && moved <= &slack * &slack {
                            cur = CertifiedRoot { center: c, radius: r };
                        }
                    }
                }
                bits *= 2;
            }
            first = false;
            cur.modulus_sq_interval()
        })?;
        out.push(RootModulus { approx, modulus_sq });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn ip(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(cs)
    }

    #[test]
    fn product_poly_of_quadratic() {
        // roots +-sqrt(2): products 2, -2, -2, 2
        let p = pairwise_product_poly(&ip(&[-2, 0, 1]));
        assert_eq!(p, &(&ip(&[-2, 1]) * &ip(&[-2, 1])) * &(&ip(&[2, 1]) * &ip(&[2, 1])));
    }

    #[test]
    fn gaussian_integers_on_circle() {
        // t^2 + 1: both roots have modulus 1
        let m = squared_moduli(&ip(&[1, 0, 1])).unwrap();
        assert_eq!(m.len(), 2);
        for r in m {
            assert_eq!(r.modulus_sq.to_rational(), Some(BigRational::one()));
        }
    }

    #[test]
    fn cubic_moduli() {
        // t^3 + t + 1: one real root of modulus ~0.6823 and a complex pair of
        // modulus ~1.2106 whose squares multiply out to the constant term.
        let m = squared_moduli(&ip(&[1, 1, 0, 1])).unwrap();
        let mut vals: Vec<f64> = m.iter().map(|r| r.modulus_sq.to_f64().sqrt()).collect();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 0.6823).abs() < 1e-3);
        assert!((vals[1] - 1.2106).abs() < 1e-3);
        assert!((vals[2] - 1.2106).abs() < 1e-3);
        let big: Vec<_> = m
            .iter()
            .filter(|r| r.modulus_sq.cmp_rational(&BigRational::one()) == Ordering::Greater)
            .collect();
        assert_eq!(big.len(), 2);
        assert_eq!(big[0].modulus_sq, big[1].modulus_sq);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let q = BigRational::new(2.into(), 1.into());
        let (lo, hi) = sqrt_bounds(&q, 40);
        assert!(&lo * &lo <= q && &hi * &hi >= q);
    }
}
