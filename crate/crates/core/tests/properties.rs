//! Property tests for the invariants of each layer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use stationary_af::corpus;
use stationary_af::dimgroup::DimensionGroup;
use stationary_af::equiv::{
    build_cstar_certificate, check_shift_equivalence, powers_conjugate_over_q, CertificateOptions,
};
use stationary_af::exact::{
    factor_over_z, isolate_real_roots, IntPoly, NfElem, NumberField, RatPoly, Sturm,
};
use stationary_af::matops::{is_primitive, smith_form, CompanionSpec, IntMatrix};
use stationary_af::padic::{padic_row_space_condition, row_space_mod};
use stationary_af::perron::{dominance_constant, perron_data, proportional, spectral_membership};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn int_matrix(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(lo..=hi, n * n).prop_map(move |v| {
        IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

fn valid_spec(max_n: usize, max_entry: i64) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_n)
        .prop_flat_map(move |n| proptest::collection::vec(0..=max_entry, n))
        .prop_filter("valid spec", |m| {
            let g = m
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0)
                .fold(0usize, |g, (i, _)| num_integer::gcd(g, i + 1));
            *m.last().unwrap() != 0 && g == 1
        })
}

/// Primitive iff some power up to the Wielandt bound is strictly positive.
fn brute_primitive(m: &IntMatrix) -> bool {
    let n = m.rows();
    let bound = (n - 1) * (n - 1) + 1;
    let mut p = m.clone();
    for _ in 0..bound {
        if p.data().iter().all(|x| x.is_positive()) {
            return true;
        }
        p = p.mul(m).unwrap();
    }
    false
}

fn nonzero_corpus() -> Vec<(String, IntMatrix)> {
    corpus::matrices().into_iter().filter(|(n, _)| !n.ends_with("-a1")).collect()
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn factorization_reconstructs(cs in proptest::collection::vec(-6i64..=6, 1..=7)) {
        let p = IntPoly::from_i64s(&cs);
        prop_assume!(!p.is_zero());
        prop_assert_eq!(factor_over_z(&p).unwrap().expand(), p);
    }

    #[test]
    fn sturm_count_matches_isolation(cs in proptest::collection::vec(-5i64..=5, 2..=6)) {
        let p = IntPoly::from_i64s(&cs);
        prop_assume!(p.deg() >= 1);
        let sq = p.squarefree_part();
        let b = BigRational::from_integer(sq.root_bound() + 1);
        let count = Sturm::new(&sq).count(&-b.clone(), &b);
        prop_assert_eq!(isolate_real_roots(&sq).unwrap().len(), count);
    }

    #[test]
    fn refinement_halves_and_keeps_root(cs in proptest::collection::vec(-5i64..=5, 3..=6)) {
        let p = IntPoly::from_i64s(&cs);
        prop_assume!(p.deg() >= 2);
        for mut r in isolate_real_roots(&p.squarefree_part()).unwrap() {
            if r.is_rational() {
                continue;
            }
            for _ in 0..8 {
                let w = r.hi() - r.lo();
                r.refine();
                prop_assert_eq!(r.hi() - r.lo(), w / BigRational::from_integer(2.into()));
                let (a, b) = (r.minpoly().sign_at(r.lo()), r.minpoly().sign_at(r.hi()));
                prop_assert!(a * b < 0);
            }
        }
    }

    #[test]
    fn field_inverse(coords in proptest::collection::vec(-9i64..=9, 3)) {
        let f = NumberField::new(IntPoly::from_i64s(&[-1, -1, 0, 1])).unwrap();
        let a = NfElem::from_coords(&f, coords.iter().map(|&c| BigRational::from_integer(c.into())).collect()).unwrap();
        prop_assume!(!a.is_zero());
        prop_assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), NfElem::one(&f));
    }

    #[test]
    fn det_is_multiplicative(a in int_matrix(3, -5, 5), b in int_matrix(3, -5, 5)) {
        prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
    }

    #[test]
    fn companion_charpoly(spec in valid_spec(6, 9)) {
        let s = CompanionSpec::from_i64s(&spec).unwrap();
        let mut want = vec![0i64; spec.len() + 1];
        want[spec.len()] = 1;
        for (k, m) in spec.iter().enumerate() {
            want[spec.len() - 1 - k] = -m;
        }
        prop_assert_eq!(s.matrix().charpoly().unwrap(), IntPoly::from_i64s(&want));
    }

    #[test]
    fn signed_powers_are_inverse(a in int_matrix(3, -4, 4), n in 0i64..=8) {
        prop_assume!(!a.det().unwrap().is_zero());
        let prod = a.pow_signed(n).unwrap().mul(&a.pow_signed(-n).unwrap()).unwrap();
        prop_assert_eq!(prod, IntMatrix::identity(3).to_rat());
    }

    #[test]
    fn smith_form_reverifies(a in int_matrix(4, -6, 6)) {
        let s = smith_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.det().unwrap().abs().is_one());
        prop_assert!(s.v.det().unwrap().abs().is_one());
        let d = s.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn primitivity_on_4x4(a in int_matrix(4, 0, 2)) {
        prop_assert_eq!(is_primitive(&a).unwrap(), brute_primitive(&a));
    }

    #[test]
    fn hyperplane_is_subspace(x in proptest::collection::vec(-5i64..=5, 2), y in proptest::collection::vec(-5i64..=5, 2)) {
        // For [[4,1],[32,0]] the hyperplane is 8 x0 + x1 = 0.
        let (j, _) = corpus::companion_pair();
        let pd = perron_data(&j).unwrap();
        let on = |t: i64| vec![NfElem::from_int(&pd.field, &t.into()), NfElem::from_int(&pd.field, &(-8 * t).into())];
        let (a, b) = (on(x[0]), on(y[0]));
        prop_assert!(spectral_membership(&pd, &a).unwrap());
        prop_assert!(spectral_membership(&pd, &b).unwrap());
        let sum: Vec<_> = a.iter().zip(&b).map(|(p, q)| p.add(q).unwrap()).collect();
        prop_assert!(spectral_membership(&pd, &sum).unwrap());
        let off = vec![NfElem::from_int(&pd.field, &x[1].into()), NfElem::from_int(&pd.field, &y[1].into())];
        prop_assert_eq!(spectral_membership(&pd, &off).unwrap(), 8 * x[1] + y[1] == 0);
    }

    #[test]
    fn dimension_group_chain_and_trace(num in proptest::collection::vec(-50i64..=50, 2), e in 0u32..=5, stage in 1u32..=4) {
        let (j, _) = corpus::companion_pair();
        let g = DimensionGroup::new(&j).unwrap();
        let v: Vec<BigRational> = num.iter().map(|&a| BigRational::new(a.into(), BigInt::from(2).pow(e))).collect();
        let level = match g.membership(&v, 64).unwrap() {
            stationary_af::dimgroup::Membership::Member { level } => level,
            other => return Err(TestCaseError::fail(format!("{other:?}"))),
        };
        // Chain inclusion: one more multiplication stays integral.
        let jr = j.to_rat();
        let lifted = jr.pow_signed(i64::from(level) + 1).unwrap().mul_vec(&v).unwrap();
        prop_assert!(lifted.iter().all(|x| x.is_integer()));
        // Shift is a bijection on the group.
        prop_assert!(g.membership(&g.shift(&v).unwrap(), 64).unwrap().is_member());
        prop_assert!(g.membership(&g.unshift(&v).unwrap(), 64).unwrap().is_member());
        // Trace of x at stage s equals trace of J x at stage s + 1.
        let x: Vec<BigInt> = num.iter().map(|&a| BigInt::from(a)).collect();
        let jx = j.mul_vec(&x).unwrap();
        prop_assert_eq!(g.stage_trace(&x, stage).unwrap(), g.stage_trace(&jx, stage + 1).unwrap());
    }

    #[test]
    fn positive_cone(a in proptest::collection::vec(-30i64..=30, 4), k in 0i64..=5) {
        let (j, _) = corpus::companion_pair();
        let g = DimensionGroup::new(&j).unwrap();
        let q = |x: i64| BigRational::from_integer(x.into());
        let (x, y) = (vec![q(a[0]), q(a[1])], vec![q(a[2]), q(a[3])]);
        let (px, py) = (g.is_positive(&x).unwrap(), g.is_positive(&y).unwrap());
        if px && py {
            let s: Vec<_> = x.iter().zip(&y).map(|(u, v)| u + v).collect();
            prop_assert!(g.is_positive(&s).unwrap());
        }
        if px {
            let s: Vec<_> = x.iter().map(|u| u * q(k)).collect();
            prop_assert!(g.is_positive(&s).unwrap());
        }
        let neg: Vec<_> = x.iter().map(|u| -u).collect();
        if px && g.is_positive(&neg).unwrap() {
            prop_assert!(x.iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn conjugacy_symmetric_and_reflexive(a in valid_spec(3, 4), b in valid_spec(3, 4), n in 1u32..=3, m in 1u32..=3) {
        prop_assume!(a.len() == b.len());
        let ja = CompanionSpec::from_i64s(&a).unwrap().matrix();
        let kb = CompanionSpec::from_i64s(&b).unwrap().matrix();
        let fwd = powers_conjugate_over_q(&ja, &kb, n, m).unwrap();
        let back = powers_conjugate_over_q(&kb, &ja, m, n).unwrap();
        prop_assert_eq!(fwd.conjugate, back.conjugate);
        if fwd.conjugate {
            prop_assert_eq!(&fwd.charpoly_j, &fwd.charpoly_k);
        }
        prop_assert!(powers_conjugate_over_q(&ja, &ja, n, n).unwrap().conjugate);
    }

    #[test]
    fn row_space_form_is_canonical(a in int_matrix(3, 0, 30), p in prop::sample::select(vec![2u64, 3, 5]), m in 1u32..=3, c in -4i64..=4, i in 0usize..3, j in 0usize..3) {
        let base = row_space_mod(&a, p, m).unwrap();
        let mut rows = a.to_rows();
        if i != j {
            let rj = rows[j].clone();
            for (x, y) in rows[i].iter_mut().zip(&rj) {
                *x += BigInt::from(c) * y;
            }
        }
        rows.swap(0, 2);
        // Multiplying a row by a unit mod p^m.
        for x in rows[1].iter_mut() {
            *x *= BigInt::from(p + 1);
        }
        let moved = IntMatrix::from_rows(rows).unwrap();
        prop_assert_eq!(row_space_mod(&moved, p, m).unwrap(), base);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    #[test]
    fn self_shift_equivalence_and_hierarchy(spec in valid_spec(3, 4)) {
        // A found shift equivalence must yield a certificate.
        let j = CompanionSpec::from_i64s(&spec).unwrap().matrix();
        let search = check_shift_equivalence(&j, &j, 1, false, 2).unwrap();
        let w = search.witness().expect("lag 1 witness for identical input");
        prop_assert!(w.verify(&j, &j).unwrap());
        if w.is_nonnegative() && !w.a.det().unwrap().is_zero() {
            let cert = build_cstar_certificate(&j, &j, &w.a, &CertificateOptions::default());
            if let Ok(cert) = cert {
                prop_assert!(cert.verify(&j, &j).unwrap());
            }
        }
    }

    #[test]
    fn nilpotent_primes_pass_row_space(a in valid_spec(3, 3), b in valid_spec(3, 3)) {
        // Doubling every coefficient makes the companion nilpotent mod 2.
        let double = |s: &[i64]| s.iter().map(|x| 2 * x).collect::<Vec<_>>();
        let (da, db) = (double(&a), double(&b));
        prop_assume!(da.len() == db.len());
        let j = CompanionSpec::from_i64s(&da);
        let k = CompanionSpec::from_i64s(&db);
        // Doubled specs may fail the gcd condition; those are skipped.
        prop_assume!(j.is_ok() && k.is_ok());
        let (j, k) = (j.unwrap().matrix(), k.unwrap().matrix());
        let primes = stationary_af::padic::prime_divisors(&(j.det().unwrap() * k.det().unwrap()));
        for p in primes {
            let p = u64::try_from(p).unwrap();
            if stationary_af::padic::is_nilpotent_mod(&j, p).unwrap() && stationary_af::padic::is_nilpotent_mod(&k, p).unwrap() {
                let r = padic_row_space_condition(&j, &k, &IntMatrix::identity(j.rows()), p, 3, 2).unwrap();
                prop_assert!(r.passed);
            }
        }
    }
}

#[test]
fn primitivity_exhaustive_up_to_3x3() {
    for n in 1..=3usize {
        let total = 3usize.pow((n * n) as u32);
        for idx in 0..total {
            let mut t = idx;
            let data: Vec<BigInt> = (0..n * n)
                .map(|_| {
                    let d = t % 3;
                    t /= 3;
                    BigInt::from(d)
                })
                .collect();
            let m = IntMatrix::new(n, n, data).unwrap();
            assert_eq!(is_primitive(&m).unwrap(), brute_primitive(&m), "{m}");
        }
    }
}

#[test]
fn cayley_hamilton_on_corpus() {
    for (name, m) in corpus::matrices() {
        let p = m.charpoly().unwrap();
        assert!(m.eval_poly(&p).unwrap().is_zero(), "{name}");
    }
}

#[test]
fn minpoly_vanishes_in_field() {
    for (name, m) in nonzero_corpus() {
        let pd = perron_data(&m).unwrap();
        let mp = RatPoly::from_int(pd.field.modulus());
        assert!(NfElem::eval_poly(&pd.field, &mp).is_zero(), "{name}");
        let lam = NfElem::generator(&pd.field);
        let val = pd.minpoly_factor.coeffs().iter().rev().fold(NfElem::zero(&pd.field), |acc, c| {
            acc.mul(&lam).unwrap().add(&NfElem::from_int(&pd.field, c)).unwrap()
        });
        assert!(val.is_zero(), "{name}");
    }
}

#[test]
fn perron_vectors_and_dominance_on_corpus() {
    for (name, m) in nonzero_corpus() {
        let pd = perron_data(&m).unwrap();
        let f = &pd.field;
        let lam = NfElem::generator(f);
        let n = m.rows();
        for c in 0..n {
            let vj = (0..n).fold(NfElem::zero(f), |acc, r| {
                acc.add(&pd.left[r].mul(&NfElem::from_int(f, &m[(r, c)])).unwrap()).unwrap()
            });
            assert_eq!(vj, lam.mul(&pd.left[c]).unwrap(), "{name}: left residual");
            let jw = (0..n).fold(NfElem::zero(f), |acc, k| {
                acc.add(&NfElem::from_int(f, &m[(c, k)]).mul(&pd.right[k]).unwrap()).unwrap()
            });
            assert_eq!(jw, lam.mul(&pd.right[c]).unwrap(), "{name}: right residual");
        }
        let lam_sq = pd.lambda.square().unwrap();
        let mut at_radius = 0;
        for sf in &pd.spectrum {
            for r in &sf.roots {
                match r.modulus_sq.cmp(&lam_sq) {
                    std::cmp::Ordering::Greater => panic!("{name}: root beyond lambda"),
                    std::cmp::Ordering::Equal => at_radius += sf.multiplicity,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        assert_eq!(at_radius, 1, "{name}: lambda not strictly dominant");
    }
}

#[test]
fn perron_data_is_permutation_invariant() {
    let perm = [2usize, 0, 4, 1, 3];
    let p = IntMatrix::new(
        5,
        5,
        (0..25).map(|i| BigInt::from((perm[i / 5] == i % 5) as i64)).collect(),
    )
    .unwrap();
    for (j, _) in [corpus::circulant_pair(), corpus::cubic_5x5_pair()] {
        let conj = p.mul(&j).unwrap().mul(&p.transpose()).unwrap();
        let (a, b) = (perron_data(&j).unwrap(), perron_data(&conj).unwrap());
        assert_eq!(a.lambda, b.lambda);
        // (P J P^T) (P w) = lambda P w, so b.right is a.right permuted, up
        // to the normalization scalar.
        let permuted: Vec<_> = (0..5).map(|i| a.right[perm[i]].clone()).collect();
        assert!(proportional(&b.right, &permuted).unwrap());
        let permuted: Vec<_> = (0..5).map(|i| a.left[perm[i]].clone()).collect();
        assert!(proportional(&b.left, &permuted).unwrap());
    }
}

#[test]
fn dominance_window_reverifies() {
    let (j, k) = corpus::circulant_pair();
    let g = dominance_constant(&j, &k).unwrap();
    let kinv = k.inverse().unwrap();
    for n in g.n0..g.n0 + 4 {
        let m = j.to_rat().pow(g.c * n).unwrap().mul(&kinv.pow(n).unwrap()).unwrap();
        assert!(m.data().iter().all(|x| !x.is_negative()), "n = {n}");
    }
}
