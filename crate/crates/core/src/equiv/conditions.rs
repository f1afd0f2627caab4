use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::obstruction::Obstruction;
use super::shift::shells;
use crate::error::{Error, Result};
use crate::exact::{embed_real, IntPoly, NfElem, NumberField};
use crate::matops::{lll_reduce, smith_form, IntMatrix, RatMatrix};
use crate::padic::prime_divisors;
use crate::perron::{common_field, dot, perron_data, proportional, ratmat_vec, vec_mat, CommonField};

/// Per-condition outcome of the three intertwiner conditions for `A1`:
/// hyperplane transport, positive Perron pairings, and a nonnegative
/// `v_J A1^-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntertwinerReport {
    /// Whether `lambda_K` lies in `Q(lambda_J)` so the vectors could be compared.
    pub common_field: bool,
    /// `v_K A1` is proportional to `v_J`.
    pub hyperplane: bool,
    /// Signs of `v_K A1 w_J` and `v_J A1^-1 w_K`.
    pub forward_pairing_sign: i8,
    pub backward_pairing_sign: i8,
    pub pairing: bool,
    /// Sign of `v_J A1 w_K`, the alternative wording of the pairing
    /// condition; informational only.
    pub literal_pairing_sign: i8,
    /// `v_J A1^-1` has no negative coordinate.
    pub inverse_nonnegative: bool,
    /// Smallest `s >= 1` for which `A1 J^s` satisfies the previous
    /// condition, when `A1` itself does not.
    pub repair_exponent: Option<u32>,
}

impl IntertwinerReport {
    pub fn passed(&self) -> bool {
        self.hyperplane && self.pairing && (self.inverse_nonnegative || self.repair_exponent.is_some())
    }

    /// Number (1, 2 or 3) of the first failing condition.
    pub fn first_failure(&self) -> Option<u8> {
        if !self.hyperplane {
            Some(1)
        } else if !self.pairing {
            Some(2)
        } else if !(self.inverse_nonnegative || self.repair_exponent.is_some()) {
            Some(3)
        } else {
            None
        }
    }

    pub fn obstruction(&self) -> Option<Obstruction> {
        self.first_failure().map(|condition| Obstruction::SpectralMapFailure {
            condition,
            detail: match condition {
                1 => "A1 does not carry the non-Perron hyperplane of J onto that of K",
                2 => "A1 does not pair the Perron vectors positively",
                _ => "v_J A1^-1 has a negative coordinate",
            }
            .into(),
        })
    }
}

fn sign(x: &NfElem) -> Result<i8> {
    x.signum()
}

fn nonnegative(v: &[NfElem]) -> Result<bool> {
    for x in v {
        if sign(x)? < 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn intertwiner_conditions(
    j: &IntMatrix,
    k: &IntMatrix,
    a1: &IntMatrix,
    repair_bound: u32,
) -> Result<IntertwinerReport> {
    if a1.rows() != k.rows() || a1.cols() != j.rows() {
        return Err(Error::DimensionMismatch("A1 must map the J side to the K side".into()));
    }
    let a1inv = a1.inverse()?;
    let pj = perron_data(j)?;
    let pk = perron_data(k)?;
    let Some(cf) = common_field(&pj, &pk)? else {
        return Ok(IntertwinerReport {
            common_field: false,
            hyperplane: false,
            forward_pairing_sign: 0,
            backward_pairing_sign: 0,
            pairing: false,
            literal_pairing_sign: 0,
            inverse_nonnegative: false,
            repair_exponent: None,
        });
    };
    let vka = vec_mat(&cf.left_k, a1)?;
    let hyperplane = proportional(&vka, &cf.left_j)?;
    let forward = sign(&dot(&vka, &cf.right_j)?)?;
    let backward = sign(&dot(&cf.left_j, &ratmat_vec(&a1inv, &cf.right_k)?)?)?;
    let literal = sign(&dot(&vec_mat(&cf.left_j, a1)?, &cf.right_k)?)?;
    let vinv = vec_mat_rat(&cf.left_j, &a1inv)?;
    let inverse_nonnegative = nonnegative(&vinv)?;
    let mut repair_exponent = None;
    if !inverse_nonnegative {
        // (A1 J^s)^-1 = J^-s A1^-1; try the replacements in turn.
        let jinv = j.inverse()?;
        let mut cur = cf.left_j.clone();
        for s in 1..=repair_bound {
            cur = vec_mat_rat(&cur, &jinv)?;
            if nonnegative(&vec_mat_rat(&cur, &a1inv)?)? {
                repair_exponent = Some(s);
                break;
            }
        }
    }
    Ok(IntertwinerReport {
        common_field: true,
        hyperplane,
        forward_pairing_sign: forward,
        backward_pairing_sign: backward,
        pairing: forward > 0 && backward > 0,
        literal_pairing_sign: literal,
        inverse_nonnegative,
        repair_exponent,
    })
}

fn vec_mat_rat(x: &[NfElem], m: &RatMatrix) -> Result<Vec<NfElem>> {
    ratmat_vec(&m.transpose(), x)
}

/// Result of the bounded search for a module isomorphism between the
/// dimension groups inside the common field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModuleProbe {
    NotApplicable { reason: String },
    /// `x G_J` lies in `G_K` and `lambda^e0 x^-1 G_K` lies in `G_J`.
    Witness { x: NfElem, e0: u32 },
    NoneWithinBounds { bound: i64 },
}

/// Field, prime-support and module conditions on the Perron data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldPrimeReport {
    pub j_minpoly: IntPoly,
    pub k_minpoly: IntPoly,
    pub same_field: bool,
    #[serde(serialize_with = "crate::ser::display_seq")]
    pub j_norm_primes: Vec<BigInt>,
    #[serde(serialize_with = "crate::ser::display_seq")]
    pub k_norm_primes: Vec<BigInt>,
    pub same_prime_support: bool,
    pub module_probe: ModuleProbe,
    pub note: String,
}

impl FieldPrimeReport {
    pub fn obstruction(&self) -> Option<Obstruction> {
        if !self.same_field {
            return Some(Obstruction::FieldMismatch {
                j_minpoly: self.j_minpoly.clone(),
                k_minpoly: self.k_minpoly.clone(),
            });
        }
        if !self.same_prime_support {
            return Some(Obstruction::PrimeSupport {
                j_primes: self.j_norm_primes.clone(),
                k_primes: self.k_norm_primes.clone(),
            });
        }
        None
    }

    pub fn passed(&self) -> bool {
        self.obstruction().is_none()
    }
}

/// Multiplication-by-`y` matrix on power-basis coordinates (row convention).
fn mult_matrix(y: &NfElem) -> Result<RatMatrix> {
    let f = y.field().clone();
    let g = NfElem::generator(&f);
    let mut rows = Vec::with_capacity(f.degree());
    let mut p = y.clone();
    for _ in 0..f.degree() {
        rows.push(p.coords().to_vec());
        p = p.mul(&g)?;
    }
    RatMatrix::from_rows(rows)
}

fn basis_matrix(v: &[NfElem]) -> Result<RatMatrix> {
    RatMatrix::from_rows(v.iter().map(|x| x.coords().to_vec()).collect())
}

/// Whether `y * span_Z(gens)` lies in the lattice with basis rows `b_inv^-1`.
fn maps_into(y: &NfElem, gens: &[NfElem], b_inv: &RatMatrix) -> Result<bool> {
    for g in gens {
        let c = y.mul(g)?;
        let row = RatMatrix::from_rows(vec![c.coords().to_vec()])?.mul(b_inv)?;
        if !row.is_integral() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Z-basis of `{x : x * span(m1) lies in span(m2)}`, LLL-reduced.
fn colon_lattice(m1: &[NfElem], b2_inv: &RatMatrix) -> Result<Vec<Vec<BigRational>>> {
    let blocks: Vec<RatMatrix> = m1
        .iter()
        .map(|y| mult_matrix(y)?.mul(b2_inv))
        .collect::<Result<_>>()?;
    let d = b2_inv.rows();
    let width = d * blocks.len();
    let mut c = RatMatrix::zeros(d, width);
    for (bi, b) in blocks.iter().enumerate() {
        for r in 0..d {
            for s in 0..d {
                c[(r, bi * d + s)] = b[(r, s)].clone();
            }
        }
    }
    let (ci, den) = c.clear_denominators();
    let sf = smith_form(&ci);
    // Dual of the column lattice of C: rows (den / s_i) U_i.
    let diag = sf.diagonal();
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::Certification("module generators are dependent".into()));
    }
    let rows: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let f = BigRational::new(den.clone(), diag[i].clone());
            sf.u.row(i).iter().map(|x| &f * BigRational::from_integer(x.clone())).collect()
        })
        .collect();
    let common = rows.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| (x * BigRational::from_integer(common.clone())).to_integer()).collect())
        .collect();
    Ok(lll_reduce(ints)
        .into_iter()
        .map(|r| r.into_iter().map(|x| BigRational::new(x, common.clone())).collect())
        .collect())
}

fn module_probe(
    cf: &CommonField,
    field: &Arc<NumberField>,
    equal_lambda: bool,
    bound: i64,
    e_max: u32,
) -> Result<ModuleProbe> {
    let b1_inv = basis_matrix(&cf.left_j)?.inverse()?;
    let b2_inv = basis_matrix(&cf.left_k)?.inverse()?;
    let colon = colon_lattice(&cf.left_j, &b2_inv)?;
    let lam = NfElem::generator(field);
    let e_top = if equal_lambda { e_max } else { 0 };
    for c in shells(colon.len(), bound) {
        let mut coords = vec![BigRational::zero(); field.degree()];
        for (ci, row) in c.iter().zip(&colon) {
            for (x, r) in coords.iter_mut().zip(row) {
                *x += r * BigRational::from_integer((*ci).into());
            }
        }
        let x = NfElem::from_coords(field, coords)?;
        if x.is_zero() {
            continue;
        }
        let mut y = x.inverse()?;
        for e0 in 0..=e_top {
            if maps_into(&y, &cf.left_k, &b1_inv)? {
                return Ok(ModuleProbe::Witness { x, e0 });
            }
            y = y.mul(&lam)?;
        }
    }
    Ok(ModuleProbe::NoneWithinBounds { bound })
}

/// Norm primes of an algebraic integer's minimal polynomial.
fn norm_primes(minpoly: &IntPoly) -> Vec<BigInt> {
    prime_divisors(&minpoly.coeff(0))
}

/// Necessary conditions on the Perron fields and norms, plus a bounded
/// module-isomorphism probe when both characteristic polynomials are
/// irreducible. Only rational primes are compared, not prime ideals.
pub fn field_and_prime_conditions(j: &IntMatrix, k: &IntMatrix, probe_bound: i64) -> Result<FieldPrimeReport> {
    let pj = perron_data(j)?;
    let pk = perron_data(k)?;
    let same_field = pj.field.degree() == pk.field.degree()
        && embed_real(&pk.lambda, &pj.field)?.is_some()
        && embed_real(&pj.lambda, &pk.field)?.is_some();
    let j_norm_primes = norm_primes(&pj.minpoly_factor);
    let k_norm_primes = norm_primes(&pk.minpoly_factor);
    let same_prime_support = j_norm_primes == k_norm_primes;
    let irreducible = pj.charpoly == pj.minpoly_factor && pk.charpoly == pk.minpoly_factor;
    let equal_lambda = pj.lambda == pk.lambda;
    let unimodular = j.is_unimodular() && k.is_unimodular();
    let module_probe = if !irreducible {
        ModuleProbe::NotApplicable { reason: "characteristic polynomial is reducible".into() }
    } else if !same_field {
        ModuleProbe::NotApplicable { reason: "Perron fields differ".into() }
    } else if !(equal_lambda || unimodular) {
        ModuleProbe::NotApplicable { reason: "Perron values differ and a determinant is not a unit".into() }
    } else {
        match common_field(&pj, &pk)? {
            Some(cf) => module_probe(&cf, &pj.field, equal_lambda, probe_bound, 8)?,
            None => ModuleProbe::NotApplicable { reason: "Perron fields differ".into() },
        }
    };
    Ok(FieldPrimeReport {
        j_minpoly: pj.minpoly_factor.clone(),
        k_minpoly: pk.minpoly_factor.clone(),
        same_field,
        j_norm_primes,
        k_norm_primes,
        same_prime_support,
        module_probe,
        note: "prime support compared on rational norms only".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::ObstructionKind;
    use crate::matops::CompanionSpec;

    fn comp(m: &[i64]) -> IntMatrix {
        CompanionSpec::from_i64s(m).unwrap().matrix()
    }

    #[test]
    fn identity_intertwiner_on_companion_pair() {
        let r = intertwiner_conditions(&comp(&[4, 32]), &comp(&[6, 16]), &IntMatrix::identity(2), 4).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!((r.forward_pairing_sign, r.backward_pairing_sign), (1, 1));
    }

    #[test]
    fn different_quadratic_fields_fail_hyperplane() {
        let r = intertwiner_conditions(&comp(&[2, 1]), &comp(&[3, 1]), &IntMatrix::identity(2), 4).unwrap();
        assert_eq!(r.first_failure(), Some(1));
        assert_eq!(r.obstruction().unwrap().kind(), ObstructionKind::SpectralMapFailure);
    }

    #[test]
    fn singular_intertwiner() {
        let a = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            intertwiner_conditions(&comp(&[4, 32]), &comp(&[6, 16]), &a, 1).unwrap_err(),
            Error::Singular
        );
    }

    #[test]
    fn scalar_prime_support() {
        let r = field_and_prime_conditions(&comp(&[6]), &comp(&[12]), 2).unwrap();
        assert!(r.passed());
        let r = field_and_prime_conditions(&comp(&[6]), &comp(&[10]), 2).unwrap();
        assert_eq!(r.obstruction().unwrap().kind(), ObstructionKind::PrimeSupport);
    }

    #[test]
    fn field_mismatch() {
        let r = field_and_prime_conditions(&comp(&[2, 1]), &comp(&[3, 1]), 2).unwrap();
        assert_eq!(r.obstruction().unwrap().kind(), ObstructionKind::FieldMismatch);
    }

    #[test]
    fn module_probe_on_identical_irreducible() {
        let j = comp(&[1, 1]);
        let r = field_and_prime_conditions(&j, &j, 2).unwrap();
        assert!(matches!(r.module_probe, ModuleProbe::Witness { .. }), "{:?}", r.module_probe);
    }
}
