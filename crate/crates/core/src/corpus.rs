//! Named example matrices and the checks run against them.
//!
//! Each item bundles one or two matrices with the facts expected of them.
//! [`run_item`] evaluates every check and never panics; failures and errors
//! are reported per check.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::dimgroup::{closed_form_check, DimensionGroup};
use crate::equiv::{
    build_cstar_certificate, check_shift_equivalence, field_and_prime_conditions,
    intertwiner_conditions, no_power_conjugacy_obstruction, powers_conjugate_over_q,
    rational_conjugator, scaled_companion, CertificateOptions, ObstructionKind,
};
use crate::error::{Error, Result};
use crate::exact::{factor_over_z, is_irreducible, IntPoly};
use crate::matops::{CompanionSpec, IntMatrix};
use crate::padic::{
    p_adic_limit, padic_row_space_battery, power_cycle, row_space_mod, DEFAULT_CYCLE_BUDGET,
};
use crate::perron::{dominance_constant, eigenvectors, perron_data};

fn im(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows)
}

fn companion(m: &[i64]) -> IntMatrix {
    CompanionSpec::from_i64s(m).expect("valid companion spec").matrix()
}

/// The 2x2 companion pair `[[4,1],[32,0]]`, `[[6,1],[16,0]]`.
pub fn companion_pair() -> (IntMatrix, IntMatrix) {
    (companion(&[4, 32]), companion(&[6, 16]))
}

/// Two 5x5 matrices built from circulant blocks, both with Perron
/// eigenvalue 2 and determinant 2.
pub fn circulant_pair() -> (IntMatrix, IntMatrix) {
    let j = im(&[
        &[1, 1, 0, 0, 0],
        &[0, 1, 1, 0, 0],
        &[0, 0, 1, 1, 0],
        &[0, 0, 0, 1, 1],
        &[1, 0, 0, 0, 1],
    ]);
    let k = im(&[
        &[0, 1, 1, 0, 0],
        &[0, 0, 1, 1, 0],
        &[1, 0, 0, 0, 1],
        &[1, 1, 0, 0, 0],
        &[0, 0, 0, 1, 1],
    ]);
    (j, k)
}

/// `(J, K, A1)` with `K` unimodular, `A1 = K^20 (K - 1)` and `J = K A1`.
pub fn unimodular_triple() -> (IntMatrix, IntMatrix, IntMatrix) {
    let k = im(&[&[0, 0, 1, 1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
    let a1 = k
        .pow(20)
        .and_then(|p| p.mul(&k.sub(&IntMatrix::identity(4))?))
        .expect("square");
    let j = k.mul(&a1).expect("square");
    (j, k, a1)
}

/// Two unimodular 5x5 matrices whose Perron eigenvalue is the real root of
/// `t^3 - t - 1`.
pub fn cubic_5x5_pair() -> (IntMatrix, IntMatrix) {
    let j = im(&[
        &[1, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 1],
        &[1, 0, 0, 0, 0],
    ]);
    let k = im(&[
        &[0, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[1, 0, 0, 1, 0],
        &[1, 0, 0, 0, 1],
        &[1, 0, 0, 0, 0],
    ]);
    (j, k)
}

/// 6x6 pair with characteristic polynomials `(t^3-t-1)(t^3+1)` and
/// `(t^3-t-1)(t^3+t+1)`.
pub fn cubic_6x6_pair() -> (IntMatrix, IntMatrix) {
    let j = im(&[
        &[0, 1, 0, 0, 0, 0],
        &[1, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[1, 0, 0, 0, 0, 1],
        &[1, 0, 0, 0, 0, 0],
    ]);
    let k = im(&[
        &[0, 1, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[1, 0, 0, 0, 1, 0],
        &[2, 0, 0, 0, 0, 1],
        &[1, 0, 0, 0, 0, 0],
    ]);
    (j, k)
}

pub fn sextic_specs() -> (CompanionSpec, CompanionSpec) {
    (
        CompanionSpec::from_i64s(&[6, 16, 197, 90, 2200, 12000]).expect("valid"),
        CompanionSpec::from_i64s(&[8, 2, 97, 370, 3400, 12000]).expect("valid"),
    )
}

/// The 6x6 companion pair whose squares are similar over the rationals.
pub fn sextic_pair() -> (IntMatrix, IntMatrix) {
    let (a, b) = sextic_specs();
    (a.matrix(), b.matrix())
}

/// The sextic pair with `m_k` replaced by `m_k d^k`.
pub fn scaled_pair(d: u64) -> Result<(IntMatrix, IntMatrix)> {
    let (a, b) = sextic_specs();
    Ok((scaled_companion(&a, d)?.matrix(), scaled_companion(&b, d)?.matrix()))
}

pub fn scalar(n: i64) -> IntMatrix {
    im(&[&[n]])
}

/// Every named matrix in the corpus, sorted by name.
pub fn matrices() -> Vec<(String, IntMatrix)> {
    let (j25, k25) = companion_pair();
    let (j20, k21) = circulant_pair();
    let (j8, k29, a1) = unimodular_triple();
    let (j31, k31) = cubic_5x5_pair();
    let (j32, k32) = cubic_6x6_pair();
    let (j9, k9) = sextic_pair();
    let mut out = vec![
        ("circulant-5x5-j".to_string(), j20),
        ("circulant-5x5-k".to_string(), k21),
        ("companion-2x2-j".to_string(), j25),
        ("companion-2x2-k".to_string(), k25),
        ("cubic-5x5-j".to_string(), j31),
        ("cubic-5x5-k".to_string(), k31),
        ("cubic-6x6-j".to_string(), j32),
        ("cubic-6x6-k".to_string(), k32),
        ("scalar-10".to_string(), scalar(10)),
        ("scalar-12".to_string(), scalar(12)),
        ("scalar-6".to_string(), scalar(6)),
        ("sextic-6x6-j".to_string(), j9),
        ("sextic-6x6-k".to_string(), k9),
        ("unimodular-4x4-a1".to_string(), a1),
        ("unimodular-4x4-j".to_string(), j8),
        ("unimodular-4x4-k".to_string(), k29),
    ];
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn matrix(name: &str) -> Option<IntMatrix> {
    matrices().into_iter().find(|(n, _)| n == name).map(|(_, m)| m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusItem {
    pub tag: &'static str,
    pub description: &'static str,
}

pub const ITEMS: &[CorpusItem] = &[
    CorpusItem {
        tag: "circulant-5x5",
        description: "circulant-built 5x5 pair with Perron eigenvalue 2, C*-equivalent but no powers conjugate",
    },
    CorpusItem {
        tag: "companion-2x2",
        description: "2x2 companions [[4,1],[32,0]] and [[6,1],[16,0]] with dimension group Z[1/2]^2",
    },
    CorpusItem {
        tag: "companion-rigidity",
        description: "distinct companion specs are never shift equivalent within bounds; equal specs are at lag 1",
    },
    CorpusItem {
        tag: "cubic-5x5",
        description: "unimodular 5x5 pair whose 12th powers share a characteristic polynomial",
    },
    CorpusItem {
        tag: "cubic-6x6",
        description: "6x6 pair with equal Perron eigenvalue separated by non-Perron moduli",
    },
    CorpusItem {
        tag: "scalar-1x1",
        description: "1x1 matrices [6] and [12], C*-equivalent",
    },
    CorpusItem {
        tag: "scalar-1x1-mismatch",
        description: "1x1 matrices [6] and [10], separated by prime support",
    },
    CorpusItem {
        tag: "scaled-6x6",
        description: "d-scaled sextic companions: rational similarity of squares and a bounded search for integral shift equivalence",
    },
    CorpusItem {
        tag: "sextic-6x6",
        description: "6x6 companion pair whose squares are similar over Q",
    },
    CorpusItem {
        tag: "unimodular-4x4",
        description: "unimodular 4x4 K with J = K A1, A1 = K^20 (K - 1)",
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemReport {
    pub tag: String,
    pub description: String,
    pub passed: bool,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip)]
    pub elapsed: Duration,
}

struct Checks(Vec<CheckOutcome>);

impl Checks {
    fn run(&mut self, name: &str, f: impl FnOnce() -> Result<(bool, String)>) {
        let (passed, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        self.0.push(CheckOutcome { name: name.to_string(), passed, detail });
    }
}

fn poly(cs: &[i64]) -> IntPoly {
    IntPoly::from_i64s(cs)
}

fn product(fs: &[&[i64]]) -> IntPoly {
    fs.iter().fold(IntPoly::one(), |acc, f| &acc * &poly(f))
}

fn charpoly_check(c: &mut Checks, name: &str, m: &IntMatrix, expected: IntPoly) {
    c.run(name, || {
        let p = m.charpoly()?;
        Ok((p == expected, format!("{p}")))
    });
}

fn int_vec(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
}

fn rational_coords(v: &[crate::exact::NfElem]) -> Option<Vec<BigRational>> {
    v.iter().map(|x| x.to_rational()).collect()
}

/// Largest eigenvalue estimate from plain power iteration in `f64`. The
/// iterate stays positive, so the growth of its 1-norm is the estimate.
fn power_iteration(m: &IntMatrix) -> Option<f64> {
    let n = m.rows();
    let a: Vec<f64> = m.data().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
    let mut v = vec![1.0 / n as f64; n];
    let mut est = f64::NAN;
    for _ in 0..5_000 {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| a[i * n + j] * v[j]).sum()).collect();
        est = w.iter().sum::<f64>();
        v = w.iter().map(|x| x / est).collect();
    }
    Some(est).filter(|x| x.is_finite())
}

fn numeric_check(c: &mut Checks, label: &str, m: &IntMatrix) {
    c.run(&format!("numeric-perron {label}"), || {
        let pd = perron_data(m)?;
        let w = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
        let lam = pd.lambda.refined(&w);
        let est = power_iteration(m).ok_or_else(|| Error::Unsupported("no estimate".into()))?;
        let (lo, hi) = (lam.lo().to_f64().unwrap_or(f64::NAN), lam.hi().to_f64().unwrap_or(f64::NAN));
        let ok = lo - 1e-4 <= est && est <= hi + 1e-4;
        Ok((ok, format!("[{lo:.8}, {hi:.8}] vs {est:.8}")))
    });
}

fn padic_invariants_check(c: &mut Checks, label: &str, m: &IntMatrix) {
    c.run(&format!("padic-invariants {label}"), || {
        for p in [2u64, 3, 5] {
            // p_adic_limit verifies idempotency and coherence level by level.
            let limit = p_adic_limit(m, p, 4)?;
            for level in &limit.levels {
                let cycle = power_cycle(m, p, level.m, DEFAULT_CYCLE_BUDGET)?;
                if cycle.idempotent != level.idempotent {
                    return Ok((false, format!("cycle idempotent differs at {p}^{}", level.m)));
                }
                let target = row_space_mod(level.idempotent.matrix(), p, level.m)?;
                for n in cycle.tail.max(1)..cycle.tail.max(1) + 3 {
                    if row_space_mod(&m.pow(n as u64)?, p, level.m)? != target {
                        return Ok((false, format!("row space of power {n} differs at {p}^{}", level.m)));
                    }
                }
            }
        }
        Ok((true, "p in {2,3,5}, m <= 4".into()))
    });
}

fn generic_checks(c: &mut Checks, ms: &[(&str, &IntMatrix)]) {
    for (label, m) in ms {
        numeric_check(c, label, m);
        padic_invariants_check(c, label, m);
    }
}

fn certificate_check(c: &mut Checks, j: &IntMatrix, k: &IntMatrix, a1: &IntMatrix) {
    c.run("cstar-certificate", || {
        let cert = build_cstar_certificate(j, k, a1, &CertificateOptions::default())?;
        let ok = cert.b.len() >= 2 && cert.verify(j, k)?;
        Ok((ok, format!("n = {:?}, m = {:?}", cert.n, cert.m)))
    });
}

fn obstruction_check(c: &mut Checks, j: &IntMatrix, k: &IntMatrix, want: ObstructionKind) {
    c.run("obstruction", || {
        let got = no_power_conjugacy_obstruction(j, k)?.map(|o| o.kind());
        Ok((got == Some(want), format!("{got:?}")))
    });
}

fn no_conjugate_powers_check(c: &mut Checks, j: &IntMatrix, k: &IntMatrix) {
    c.run("powers-not-conjugate n,m <= 6", || {
        for n in 1..=6 {
            for m in 1..=6 {
                if powers_conjugate_over_q(j, k, n, m)?.conjugate {
                    return Ok((false, format!("J^{n} ~ K^{m}")));
                }
            }
        }
        Ok((true, "36 pairs".into()))
    });
}

fn row_space_check(c: &mut Checks, j: &IntMatrix, k: &IntMatrix, a1: &IntMatrix, expect: bool) {
    c.run("padic-row-space", || {
        let checks = padic_row_space_battery(j, k, a1, 4, 4)?;
        let ok = checks.iter().all(|r| r.passed);
        let ps: Vec<String> = checks.iter().map(|r| format!("{}:{}", r.p, r.passed)).collect();
        Ok((ok == expect, format!("[{}]", ps.join(", "))))
    });
}

fn field_prime_check(c: &mut Checks, j: &IntMatrix, k: &IntMatrix, want: Option<ObstructionKind>) {
    c.run("field-and-prime", || {
        let r = field_and_prime_conditions(j, k, 3)?;
        let got = r.obstruction().map(|o| o.kind());
        let ok = match want {
            None => r.passed(),
            Some(_) => got == want,
        };
        Ok((ok, format!("passed = {}, obstruction = {got:?}", r.passed())))
    });
}

fn companion_2x2(c: &mut Checks) {
    let (j, k) = companion_pair();
    charpoly_check(c, "charpoly J", &j, product(&[&[-8, 1], &[4, 1]]));
    charpoly_check(c, "charpoly K", &k, product(&[&[-8, 1], &[2, 1]]));
    c.run("perron data", || {
        let pj = perron_data(&j)?;
        let pk = perron_data(&k)?;
        let eight = BigRational::from_integer(8.into());
        let ok = pj.lambda.to_rational() == Some(eight.clone())
            && pk.lambda.to_rational() == Some(eight)
            && rational_coords(&pj.left) == Some(int_vec(&[8, 1]))
            && rational_coords(&pk.left) == Some(int_vec(&[8, 1]));
        Ok((ok, format!("lambda = {}, {}", pj.lambda, pk.lambda)))
    });
    c.run("non-Perron eigenvectors", || {
        let (lj, _) = eigenvectors(&j, &crate::exact::AlgebraicNumber::from_integer((-4).into()))?;
        let (lk, _) = eigenvectors(&k, &crate::exact::AlgebraicNumber::from_integer((-2).into()))?;
        let ok = rational_coords(&lj) == Some(int_vec(&[4, -1]))
            && rational_coords(&lk) == Some(int_vec(&[2, -1]));
        let show = |v: &[crate::exact::NfElem]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        Ok((ok, format!("({}) / ({})", show(&lj), show(&lk))))
    });
    c.run("dimension group membership grid", || {
        let g = DimensionGroup::new(&j)?;
        let mut count = 0;
        for den in [1i64, 2, 3, 4, 5, 6, 7, 8, 12, 16, 64] {
            for num in [-3i64, 1, 5, 7] {
                for other in [0i64, 1] {
                    let v = vec![
                        BigRational::new(num.into(), den.into()),
                        BigRational::new(other.into(), 1.into()),
                    ];
                    let member = g.membership(&v, 64)?.is_member();
                    let dyadic = v[0].denom().to_u64().is_some_and(u64::is_power_of_two);
                    if member != dyadic {
                        return Ok((false, format!("{num}/{den}")));
                    }
                    count += 1;
                }
            }
        }
        Ok((true, format!("{count} points")))
    });
    c.run("positive cone 8x+y > 0", || {
        let g = DimensionGroup::new(&j)?;
        for x in -4i64..=4 {
            for y in -40i64..=40 {
                for den in [1i64, 4] {
                    let v = vec![BigRational::new(x.into(), den.into()), BigRational::new(y.into(), 1.into())];
                    let want = (x == 0 && y == 0) || 8 * x + den * y > 0;
                    if g.is_positive(&v)? != want {
                        return Ok((false, format!("({x}/{den}, {y})")));
                    }
                }
            }
        }
        let boundary = g.is_positive(&int_vec(&[1, -8]))?;
        Ok((!boundary, "(1,-8) not positive".into()))
    });
    c.run("quotient indices", || {
        let a = DimensionGroup::new(&j)?.quotient_index()?;
        let b = DimensionGroup::new(&k)?.quotient_index()?;
        Ok((a == 32.into() && b == 16.into(), format!("{a}, {b}")))
    });
    c.run("closed-form powers", || {
        for n in -4..=4 {
            if !closed_form_check(&j, n)? || !closed_form_check(&k, n)? {
                return Ok((false, format!("n = {n}")));
            }
        }
        Ok((true, "n in -4..=4".into()))
    });
    certificate_check(c, &j, &k, &IntMatrix::identity(2));
    obstruction_check(c, &j, &k, ObstructionKind::EigenvalueModulus);
    no_conjugate_powers_check(c, &j, &k);
    row_space_check(c, &j, &k, &IntMatrix::identity(2), true);
    field_prime_check(c, &j, &k, None);
    generic_checks(c, &[("J", &j), ("K", &k)]);
}

fn circulant_5x5(c: &mut Checks) {
    let (j, k) = circulant_pair();
    charpoly_check(c, "charpoly J", &j, product(&[&[-2, 1], &[1, -2, 4, -3, 1]]));
    charpoly_check(c, "charpoly K", &k, product(&[&[-2, 1], &[1, 0, 0, 1, 1]]));
    c.run("perron data", || {
        let ones = int_vec(&[1; 5]);
        let two = BigRational::from_integer(2.into());
        let mut ok = true;
        for m in [&j, &k] {
            let p = perron_data(m)?;
            ok &= p.lambda.to_rational() == Some(two.clone())
                && rational_coords(&p.left) == Some(ones.clone())
                && rational_coords(&p.right) == Some(ones.clone())
                && m.det()? == 2.into();
        }
        Ok((ok, "lambda = 2, all-ones vectors, det = 2".into()))
    });
    c.run("dominance constant", || {
        let g = dominance_constant(&j, &k)?;
        Ok((true, format!("c = {}, window c = {}", g.c, g.window_c)))
    });
    let i5 = IntMatrix::identity(5);
    certificate_check(c, &j, &k, &i5);
    obstruction_check(c, &j, &k, ObstructionKind::RootsOfUnity);
    no_conjugate_powers_check(c, &j, &k);
    row_space_check(c, &j, &k, &i5, true);
    field_prime_check(c, &j, &k, None);
    generic_checks(c, &[("J", &j), ("K", &k)]);
}

fn unimodular_4x4(c: &mut Checks) {
    let (j, k, a1) = unimodular_triple();
    c.run("A1 shape", || {
        let det = a1.det()?;
        let irr = is_irreducible(&k.charpoly()?);
        let ok = a1.is_nonnegative() && det.abs().is_one() && irr;
        Ok((ok, format!("det A1 = {det}, K charpoly irreducible = {irr}")))
    });
    certificate_check(c, &j, &k, &a1);
    row_space_check(c, &j, &k, &a1, true);
    field_prime_check(c, &j, &k, None);
    generic_checks(c, &[("J", &j), ("K", &k)]);
}

fn cubic_5x5(c: &mut Checks) {
    let (j, k) = cubic_5x5_pair();
    c.run("12th powers share charpoly", || {
        let pj = j.pow(12)?.charpoly()?;
        let pk = k.pow(12)?.charpoly()?;
        let f = factor_over_z(&pj)?;
        let unit_mult = f
            .factors
            .iter()
            .find(|(g, _)| *g == poly(&[-1, 1]))
            .map_or(0, |(_, m)| *m);
        Ok((pj == pk && unit_mult == 2, format!("{pj}")))
    });
    c.run("unimodular", || Ok((j.is_unimodular() && k.is_unimodular(), String::new())));
    c.run("intertwiner conditions with A1 = 1", || {
        let r = intertwiner_conditions(&j, &k, &IntMatrix::identity(5), 4)?;
        Ok((r.passed(), format!("first failure = {:?}", r.first_failure())))
    });
    row_space_check(c, &j, &k, &IntMatrix::identity(5), true);
    field_prime_check(c, &j, &k, None);
    generic_checks(c, &[("J", &j), ("K", &k)]);
}

fn cubic_6x6(c: &mut Checks) {
    let (j, k) = cubic_6x6_pair();
    charpoly_check(c, "charpoly J", &j, product(&[&[-1, -1, 0, 1], &[1, 0, 0, 1]]));
    charpoly_check(c, "charpoly K", &k, product(&[&[-1, -1, 0, 1], &[1, 1, 0, 1]]));
    obstruction_check(c, &j, &k, ObstructionKind::EigenvalueModulus);
    no_conjugate_powers_check(c, &j, &k);
    generic_checks(c, &[("J", &j), ("K", &k)]);
}

fn scalar_1x1(c: &mut Checks) {
    let (j, k) = (scalar(6), scalar(12));
    certificate_check(c, &j, &k, &IntMatrix::identity(1));
    row_space_check(c, &j, &k, &IntMatrix::identity(1), true);
    field_prime_check(c, &j, &k, None);
    generic_checks(c, &[("[6]", &j), ("[12]", &k)]);
}

fn scalar_1x1_mismatch(c: &mut Checks) {
    let (j, k) = (scalar(6), scalar(10));
    row_space_check(c, &j, &k, &IntMatrix::identity(1), false);
    field_prime_check(c, &j, &k, Some(ObstructionKind::PrimeSupport));
    generic_checks(c, &[("[10]", &k)]);
}

fn sextic_6x6(c: &mut Checks) {
    let (j, k) = sextic_pair();
    charpoly_check(c, "charpoly J", &j, product(&[&[-10, 1], &[3, 1], &[16, -4, 1], &[25, 5, 1]]));
    charpoly_check(c, "charpoly K", &k, product(&[&[-10, 1], &[3, 1], &[16, 4, 1], &[25, -5, 1]]));
    c.run("squares share charpoly", || {
        let want = product(&[&[-100, 1], &[-9, 1], &[256, 16, 1], &[625, 25, 1]]);
        let pj = j.pow(2)?.charpoly()?;
        let pk = k.pow(2)?.charpoly()?;
        Ok((pj == want && pk == want, format!("{pj}")))
    });
    c.run("squares similar over Q", || {
        let (j2, k2) = (j.pow(2)?, k.pow(2)?);
        let Some(x) = rational_conjugator(&j2, &k2)? else {
            return Ok((false, "no conjugator".into()));
        };
        let ok = !x.det()?.is_zero() && x.mul(&j2.to_rat())? == k2.to_rat().mul(&x)?;
        Ok((ok, "X J^2 = K^2 X with det X != 0".into()))
    });
    generic_checks(c, &[("J", &j), ("K", &k)]);
}

/// Largest `d` tried in the scaled-family experiment.
pub const SCALED_D_MAX: u64 = 64;

fn scaled_6x6(c: &mut Checks) {
    c.run("scaled squares similar over Q", || {
        for d in 1..=SCALED_D_MAX {
            let (j, k) = scaled_pair(d)?;
            if !powers_conjugate_over_q(&j, &k, 2, 2)?.conjugate {
                return Ok((false, format!("d = {d}")));
            }
        }
        Ok((true, format!("d <= {SCALED_D_MAX}")))
    });
    c.run("scaled squares shift equivalence search", || {
        let mut found = Vec::new();
        for d in 1..=SCALED_D_MAX {
            let (j, k) = scaled_pair(d)?;
            let (j2, k2) = (j.pow(2)?, k.pow(2)?);
            if let Some(w) = check_shift_equivalence(&j2, &k2, 1, false, 1)?.witness() {
                if !w.verify(&j2, &k2)? {
                    return Ok((false, format!("witness at d = {d} fails verification")));
                }
                found.push(d);
            }
        }
        Ok((true, format!("witnesses at d in {found:?}")))
    });
}

fn companion_rigidity_item(c: &mut Checks) {
    // A fixed family of valid specs; every ordered pair is checked.
    let specs: Vec<Vec<i64>> = vec![
        vec![1, 1],
        vec![2, 1],
        vec![1, 2],
        vec![3, 4],
        vec![1, 0, 1],
        vec![0, 1, 1],
        vec![1, 1, 1],
        vec![2, 0, 3],
        vec![1, 0, 0, 1],
        vec![0, 0, 1, 1],
        vec![1, 1, 0, 2],
        vec![1, 0, 0, 0, 1],
        vec![0, 1, 0, 0, 1],
        vec![1, 1, 1, 1, 1],
    ];
    c.run("rigidity over fixed family", || {
        let ms: Vec<IntMatrix> = specs.iter().map(|s| companion(s)).collect();
        let mut pairs = 0;
        for (a, ja) in ms.iter().enumerate() {
            for (b, kb) in ms.iter().enumerate() {
                let search = check_shift_equivalence(ja, kb, 2, true, 2)?;
                let ok = match search.witness() {
                    Some(w) => a == b && w.lag == 1 && w.verify(ja, kb)?,
                    None => a != b,
                };
                if !ok {
                    return Ok((false, format!("{:?} vs {:?}", specs[a], specs[b])));
                }
                pairs += 1;
            }
        }
        Ok((true, format!("{pairs} pairs")))
    });
}

fn run_checks(tag: &str) -> Option<Vec<CheckOutcome>> {
    let mut c = Checks(Vec::new());
    match tag {
        "circulant-5x5" => circulant_5x5(&mut c),
        "companion-2x2" => companion_2x2(&mut c),
        "companion-rigidity" => companion_rigidity_item(&mut c),
        "cubic-5x5" => cubic_5x5(&mut c),
        "cubic-6x6" => cubic_6x6(&mut c),
        "scalar-1x1" => scalar_1x1(&mut c),
        "scalar-1x1-mismatch" => scalar_1x1_mismatch(&mut c),
        "scaled-6x6" => scaled_6x6(&mut c),
        "sextic-6x6" => sextic_6x6(&mut c),
        "unimodular-4x4" => unimodular_4x4(&mut c),
        _ => return None,
    }
    Some(c.0)
}

pub fn item(tag: &str) -> Option<CorpusItem> {
    ITEMS.iter().find(|i| i.tag == tag).copied()
}

/// Runs every check of one item, single-threaded.
pub fn run_item(tag: &str) -> Option<ItemReport> {
    let it = item(tag)?;
    let start = Instant::now();
    let checks = run_checks(tag)?;
    Some(ItemReport {
        tag: it.tag.to_string(),
        description: it.description.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        elapsed: start.elapsed(),
    })
}

/// Items whose tag starts with `only`, or all of them.
pub fn select(only: Option<&str>) -> Vec<CorpusItem> {
    ITEMS
        .iter()
        .filter(|i| only.is_none_or(|o| i.tag.starts_with(o)))
        .copied()
        .collect()
}
