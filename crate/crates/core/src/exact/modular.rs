//! Polynomial arithmetic over `Z/pZ` (small word-sized prime) and over
//! `Z/p^kZ` (big modulus), as needed by factorization.

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Zero};

use super::poly::IntPoly;

// ---------------------------------------------------------------------------
// Z/pZ with p < 2^31, coefficients lowest first, no trailing zeros.

pub(crate) type Fp = Vec<u64>;

fn trim(v: &mut Fp) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn reduce(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    let mut v: Fp = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.mod_floor(&pb);
            u64::try_from(r).expect("residue fits")
        })
        .collect();
    trim(&mut v);
    v
}

pub(crate) fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut v: Fp = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut v);
    v
}

pub(crate) fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    trim(&mut v);
    v
}

pub(crate) fn fp_divrem(a: &Fp, d: &Fp, p: u64) -> (Fp, Fp) {
    assert!(!d.is_empty(), "division by zero polynomial mod p");
    let mut r = a.clone();
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let dd = d.len() - 1;
    let linv = inv_mod(*d.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] * linv % p;
        if c != 0 {
            for (j, &dc) in d.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * dc % p) % p;
            }
        }
        q[k] = c;
    }
    r.truncate(dd);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

pub(crate) fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fp_monic(&a, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
pub(crate) fn fp_xgcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], Vec::new());
    let (mut t0, mut t1): (Fp, Fp) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = inv_mod(*r0.last().expect("nonzero gcd"), p);
    let sc = |v: &Fp| {
        let mut w: Fp = v.iter().map(|&c| c * inv % p).collect();
        trim(&mut w);
        w
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    let mut v: Fp = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (i as u64 % p) * c % p)
        .collect();
    trim(&mut v);
    v
}

pub(crate) fn fp_is_squarefree(a: &Fp, p: u64) -> bool {
    fp_gcd(a, &fp_derivative(a, p), p).len() == 1
}

/// Berlekamp factorization of a monic squarefree polynomial over `F_p`.
/// Returns monic irreducible factors sorted by (degree, coefficients).
pub(crate) fn berlekamp(f: &Fp, p: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.clone()];
    }
    // Rows: x^(i p) mod f, minus the identity.
    let xp = {
        let mut base: Fp = vec![0, 1];
        let mut acc: Fp = vec![1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_divrem(&fp_mul(&acc, &base, p), f, p).1;
            }
            base = fp_divrem(&fp_mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut rows = vec![vec![0u64; n]; n];
    let mut cur: Fp = vec![1];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = cur.get(j).copied().unwrap_or(0);
        }
        row[i] = (row[i] + p - 1) % p;
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // Left kernel of `rows`: v with v * rows = 0. Work on the transpose.
    let kernel = left_kernel(&rows, p);
    let r = kernel.len();
    let mut factors = vec![f.clone()];
    if r == 1 {
        return factors;
    }
    'outer: for v in kernel.iter() {
        let mut g: Fp = v.clone();
        trim(&mut g);
        if g.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for h in factors.drain(..) {
            if h.len() <= 2 {
                next.push(h);
                continue;
            }
            let mut rest = h;
            for s in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let gs = fp_sub(&g, &vec![s], p);
                let d = fp_gcd(&rest, &gs, p);
                if d.len() > 1 && d.len() < rest.len() {
                    rest = fp_divrem(&rest, &d, p).0;
                    rest = fp_monic(&rest, p);
                    next.push(d);
                }
            }
            next.push(rest);
        }
        factors = next;
        if factors.len() == r {
            break 'outer;
        }
    }
    factors.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    factors
}

fn left_kernel(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    // Solve M^T x = 0 where M = rows.
    let n = rows.len();
    let m = rows[0].len();
    let mut a: Vec<Vec<u64>> = (0..m).map(|j| (0..n).map(|i| rows[i][j]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..m {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[row][fc]) % p;
            }
            v
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Z/mZ for a big modulus m (a prime power), symmetric lifting helpers.

pub(crate) type Zm = Vec<BigInt>;

fn zm_trim(v: &mut Zm) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub(crate) fn zm_reduce(v: &[BigInt], m: &BigInt) -> Zm {
    let mut w: Zm = v.iter().map(|c| c.mod_floor(m)).collect();
    zm_trim(&mut w);
    w
}

pub(crate) fn zm_from_fp(v: &Fp) -> Zm {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

fn zm_add(a: &Zm, b: &Zm, m: &BigInt) -> Zm {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    zm_reduce(&v, m)
}

fn zm_sub(a: &Zm, b: &Zm, m: &BigInt) -> Zm {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let v: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    zm_reduce(&v, m)
}

pub(crate) fn zm_mul(a: &Zm, b: &Zm, m: &BigInt) -> Zm {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    zm_reduce(&v, m)
}

/// Division by a monic polynomial modulo m.
fn zm_divrem_monic(a: &Zm, d: &Zm, m: &BigInt) -> (Zm, Zm) {
    debug_assert!(d.last().is_some_and(|l| l.is_one()));
    let mut r = a.clone();
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let dd = d.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd].mod_floor(m);
        if !c.is_zero() {
            for (j, dc) in d.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
        }
        q[k] = c;
    }
    r.truncate(dd);
    (zm_reduce(&q, m), zm_reduce(&r, m))
}

/// One quadratic Hensel step: from `f = g h (mod m)`, `s g + t h = 1 (mod m)`,
/// `h` monic, produce the same relations modulo `m^2`.
fn hensel_step(f: &Zm, g: &Zm, h: &Zm, s: &Zm, t: &Zm, m: &BigInt) -> (Zm, Zm, Zm, Zm) {
    let m2 = m * m;
    let e = zm_sub(&zm_reduce(f, &m2), &zm_mul(g, h, &m2), &m2);
    let (q, r) = zm_divrem_monic(&zm_mul(s, &e, &m2), h, &m2);
    let g1 = zm_add(&zm_add(g, &zm_mul(t, &e, &m2), &m2), &zm_mul(&q, g, &m2), &m2);
    let h1 = zm_add(h, &r, &m2);
    let one: Zm = vec![BigInt::one()];
    let b = zm_sub(
        &zm_add(&zm_mul(s, &g1, &m2), &zm_mul(t, &h1, &m2), &m2),
        &one,
        &m2,
    );
    let (c, d) = zm_divrem_monic(&zm_mul(s, &b, &m2), &h1, &m2);
    let s1 = zm_sub(s, &d, &m2);
    let t1 = zm_sub(
        &zm_sub(t, &zm_mul(t, &b, &m2), &m2),
        &zm_mul(&c, &g1, &m2),
        &m2,
    );
    (g1, h1, s1, t1)
}

/// Lifts a factorization `f = lc(f) * prod u_i (mod p)` (u_i monic, pairwise
/// coprime) to monic factors modulo `p^k`.
pub(crate) fn hensel_lift(f: &IntPoly, factors: &[Fp], p: u64, k: u32) -> Vec<Zm> {
    let pk = BigInt::from(p).pow(k);
    let mut out = Vec::with_capacity(factors.len());
    let mut cur: Zm = zm_reduce(f.coeffs(), &pk);
    for i in 0..factors.len() {
        let lc = cur.last().expect("nonzero").clone();
        if i + 1 == factors.len() {
            let inv = mod_inverse(&lc, &pk);
            let w: Vec<BigInt> = cur.iter().map(|c| c * &inv).collect();
            out.push(zm_reduce(&w, &pk));
            break;
        }
        let lc_p = u64::try_from(lc.mod_floor(&BigInt::from(p))).expect("fits");
        let u = &factors[i];
        let rest = factors[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, v| fp_mul(&acc, v, p));
        let g0: Fp = u.iter().map(|&c| c * lc_p % p).collect();
        let (_, s0, t0) = fp_xgcd(&g0, &rest, p);
        let (mut g, mut h, mut s, mut t) = (zm_from_fp(&g0), zm_from_fp(&rest), zm_from_fp(&s0), zm_from_fp(&t0));
        let mut m = BigInt::from(p);
        while m < pk {
            let step = hensel_step(&cur, &g, &h, &s, &t, &m);
            g = step.0;
            h = step.1;
            s = step.2;
            t = step.3;
            m = &m * &m;
        }
        let g = zm_reduce(&g, &pk);
        let h = zm_reduce(&h, &pk);
        let inv = mod_inverse(&lc, &pk);
        let w: Vec<BigInt> = g.iter().map(|c| c * &inv).collect();
        out.push(zm_reduce(&w, &pk));
        cur = h;
    }
    out
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Symmetric representative in `(-m/2, m/2]`.
pub(crate) fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn berlekamp_splits_x5_minus_1_mod_11() {
        // 11 = 1 mod 5, so x^5 - 1 splits into linear factors.
        let f: Fp = vec![10, 0, 0, 0, 0, 1];
        let fs = berlekamp(&f, 11);
        assert_eq!(fs.len(), 5);
        let prod = fs.iter().fold(vec![1u64], |a, b| fp_mul(&a, b, 11));
        assert_eq!(prod, f);
    }

    #[test]
    fn berlekamp_keeps_irreducible() {
        // x^2 + 1 is irreducible mod 3
        assert_eq!(berlekamp(&vec![1, 0, 1], 3), vec![vec![1, 0, 1]]);
    }

    #[test]
    fn hensel_lift_reconstructs_modulo_power() {
        // (x - 3)(x + 5) = x^2 + 2x - 15 ; mod 7: (x + 4)(x + 5)
        let f = IntPoly::from_i64s(&[-15, 2, 1]);
        let fs = berlekamp(&reduce(&f, 7), 7);
        let lifted = hensel_lift(&f, &fs, 7, 4);
        let m = BigInt::from(7).pow(4);
        let prod = lifted.iter().fold(vec![BigInt::one()], |a, b| zm_mul(&a, b, &m));
        assert_eq!(prod, zm_reduce(f.coeffs(), &m));
    }
}
