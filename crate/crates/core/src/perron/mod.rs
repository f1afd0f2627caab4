//! Perron-Frobenius data over `Q(lambda)`, the spectrum with exact moduli,
//! and the constants making `J^(cn) K^(-n)` eventually nonnegative.

mod growth;

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    embed_real, factor_over_z, isolate_real_roots, squared_moduli, AlgebraicNumber, IntPoly,
    NfElem, NumberField, RootModulus,
};
use crate::matops::{is_primitive, IntMatrix};

pub use growth::{dominance_constant, intertwined_dominance_constant, GrowthConstant};

/// One irreducible factor of a characteristic polynomial with the exact
/// squared moduli of its roots.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumFactor {
    pub factor: IntPoly,
    pub multiplicity: usize,
    pub roots: Vec<RootModulus>,
}

/// Factors `p` and computes every root's squared modulus.
pub fn spectrum(p: &IntPoly) -> Result<Vec<SpectrumFactor>> {
    factor_over_z(p)?
        .factors
        .into_iter()
        .map(|(factor, multiplicity)| {
            let roots = squared_moduli(&factor)?;
            Ok(SpectrumFactor { factor, multiplicity, roots })
        })
        .collect()
}

/// Perron eigenvalue, eigenvectors and spectral radii of a primitive
/// nonsingular matrix.
#[derive(Clone, Debug, Serialize)]
pub struct PerronData {
    pub lambda: AlgebraicNumber,
    /// The irreducible factor of the characteristic polynomial with root
    /// `lambda`.
    pub minpoly_factor: IntPoly,
    /// Row vector with `v J = lambda v`, coordinates in `Q(lambda)`.
    pub left: Vec<NfElem>,
    /// Column vector with `J w = lambda w`.
    pub right: Vec<NfElem>,
    /// Largest modulus among the other eigenvalues; `None` for 1x1 input.
    pub lambda2: Option<AlgebraicNumber>,
    /// Largest modulus among eigenvalues of the inverse.
    pub lambda3: AlgebraicNumber,
    pub charpoly: IntPoly,
    pub spectrum: Vec<SpectrumFactor>,
    #[serde(skip)]
    pub field: Arc<NumberField>,
}

impl PerronData {
    /// `v . x` for a column vector over the same field.
    pub fn pair_left(&self, x: &[NfElem]) -> Result<NfElem> {
        dot(&self.left, x)
    }
}

pub(crate) fn dot(a: &[NfElem], b: &[NfElem]) -> Result<NfElem> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.len(), b.len())));
    }
    let field = a.first().map(|x| x.field().clone()).ok_or_else(|| {
        Error::DimensionMismatch("empty vectors".into())
    })?;
    let mut acc = NfElem::zero(&field);
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y)?)?;
    }
    Ok(acc)
}

/// Integer matrix times a vector over a number field.
pub(crate) fn mat_vec(m: &IntMatrix, x: &[NfElem]) -> Result<Vec<NfElem>> {
    if m.cols() != x.len() || x.is_empty() {
        return Err(Error::DimensionMismatch("matrix-vector".into()));
    }
    let field = x[0].field().clone();
    (0..m.rows())
        .map(|i| {
            let mut acc = NfElem::zero(&field);
            for (j, xj) in x.iter().enumerate() {
                if !m[(i, j)].is_zero() {
                    acc = acc.add(&xj.scale(&BigRational::from_integer(m[(i, j)].clone())))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Row vector times an integer matrix.
pub(crate) fn vec_mat(x: &[NfElem], m: &IntMatrix) -> Result<Vec<NfElem>> {
    mat_vec(&m.transpose(), x)
}

/// Rational matrix times a vector over a number field.
pub(crate) fn ratmat_vec(m: &crate::matops::RatMatrix, x: &[NfElem]) -> Result<Vec<NfElem>> {
    if m.cols() != x.len() || x.is_empty() {
        return Err(Error::DimensionMismatch("matrix-vector".into()));
    }
    let field = x[0].field().clone();
    (0..m.rows())
        .map(|i| {
            let mut acc = NfElem::zero(&field);
            for (j, xj) in x.iter().enumerate() {
                if !m[(i, j)].is_zero() {
                    acc = acc.add(&xj.scale(&m[(i, j)]))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Basis of the right kernel of a matrix over a number field.
fn nf_kernel(mut a: Vec<Vec<NfElem>>, field: &Arc<NumberField>) -> Result<Vec<Vec<NfElem>>> {
    let r = a.len();
    let c = a.first().map_or(0, |x| x.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        let Some(p) = (row..r).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].inverse()?;
        for j in 0..c {
            a[row][j] = a[row][j].mul(&inv)?;
        }
        for i in 0..r {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..c {
                    let v = f.mul(&a[row][j])?;
                    a[i][j] = a[i][j].sub(&v)?;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
    free.iter()
        .map(|&fcol| {
            let mut v = vec![NfElem::zero(field); c];
            v[fcol] = NfElem::one(field);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = a[i][fcol].neg();
            }
            Ok(v)
        })
        .collect()
}

fn sign_of(x: &NfElem) -> i8 {
    match x.signum() {
        Ok(s) => s,
        Err(_) => x
            .coords()
            .iter()
            .find(|c| !c.is_zero())
            .map_or(0, |c| if c.is_negative() { -1 } else { 1 }),
    }
}

/// Scales a nonzero vector so that its last nonzero coordinate is 1, then
/// clears denominators, removes the common content of all rational
/// coordinates, and makes the first nonzero coordinate positive.
pub fn normalize_vector(v: &[NfElem]) -> Result<Vec<NfElem>> {
    let last = v
        .iter()
        .rposition(|x| !x.is_zero())
        .ok_or_else(|| Error::Unsupported("zero eigenvector".into()))?;
    let inv = v[last].inverse()?;
    let mut out: Vec<NfElem> = v.iter().map(|x| x.mul(&inv)).collect::<Result<_>>()?;
    let den = out
        .iter()
        .flat_map(|x| x.coords().iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = out
        .iter()
        .flat_map(|x| x.coords().iter())
        .fold(BigInt::zero(), |acc, c| acc.gcd(&(c * BigRational::from_integer(den.clone())).to_integer()));
    let scale = BigRational::new(den, num);
    out = out.iter().map(|x| x.scale(&scale)).collect();
    let first = out.iter().find(|x| !x.is_zero()).expect("nonzero vector");
    if sign_of(first) < 0 {
        out = out.iter().map(|x| x.neg()).collect();
    }
    Ok(out)
}

/// Left and right eigenvectors of `m` for a real eigenvalue `mu` whose
/// eigenspace is one-dimensional, over `Q(mu)` and normalized.
pub fn eigenvectors(m: &IntMatrix, mu: &AlgebraicNumber) -> Result<(Vec<NfElem>, Vec<NfElem>)> {
    let field = NumberField::generated_by(mu);
    eigenvectors_in(m, &field)
}

fn eigenvectors_in(
    m: &IntMatrix,
    field: &Arc<NumberField>,
) -> Result<(Vec<NfElem>, Vec<NfElem>)> {
    let n = m.rows();
    let mu = NfElem::generator(field);
    let shifted = |t: &IntMatrix| -> Result<Vec<Vec<NfElem>>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = NfElem::from_int(field, &t[(i, j)]);
                        if i == j {
                            e.sub(&mu)
                        } else {
                            Ok(e)
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let right = nf_kernel(shifted(m)?, field)?;
    let left = nf_kernel(shifted(&m.transpose())?, field)?;
    if right.len() != 1 || left.len() != 1 {
        return Err(Error::Unsupported(format!(
            "eigenspace of dimension {} (right) / {} (left), expected 1",
            right.len(),
            left.len()
        )));
    }
    Ok((normalize_vector(&left[0])?, normalize_vector(&right[0])?))
}

pub fn perron_data(j: &IntMatrix) -> Result<PerronData> {
    if !is_primitive(j)? {
        return Err(Error::NotPrimitive);
    }
    if j.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let charpoly = j.charpoly()?;
    let spectrum = spectrum(&charpoly)?;
    let lambda = isolate_real_roots(&charpoly)?
        .pop()
        .ok_or_else(|| Error::PerronMismatch("no real eigenvalue".into()))?;
    let minpoly_factor = lambda.minpoly().clone();
    let lambda_sq = lambda.square()?;

    // Strict dominance: exactly one root (lambda itself) attains lambda^2.
    let mut others: Vec<&AlgebraicNumber> = Vec::new();
    let mut all: Vec<&AlgebraicNumber> = Vec::new();
    let mut top = 0;
    for sf in &spectrum {
        for r in &sf.roots {
            for _ in 0..sf.multiplicity {
                all.push(&r.modulus_sq);
            }
            match r.modulus_sq.cmp(&lambda_sq) {
                Ordering::Greater => {
                    return Err(Error::PerronMismatch("an eigenvalue exceeds lambda".into()))
                }
                Ordering::Equal => top += sf.multiplicity,
                Ordering::Less => {
                    for _ in 0..sf.multiplicity {
                        others.push(&r.modulus_sq);
                    }
                }
            }
        }
    }
    if top != 1 {
        return Err(Error::PerronMismatch(
            "Perron eigenvalue is not strictly dominant".into(),
        ));
    }
    let lambda2 = match others.iter().max() {
        Some(m) => Some(m.sqrt()?),
        None => None,
    };
    let min_sq = all.iter().min().expect("nonempty spectrum");
    let lambda3 = min_sq.sqrt()?.recip()?;

    let field = NumberField::generated_by(&lambda);
    let (left, right) = eigenvectors_in(j, &field)?;
    Ok(PerronData {
        lambda,
        minpoly_factor,
        left,
        right,
        lambda2,
        lambda3,
        charpoly,
        spectrum,
        field,
    })
}

/// Whether `x` lies in the sum of the non-Perron generalized eigenspaces,
/// which is the hyperplane `v . x = 0`.
pub fn spectral_membership(pd: &PerronData, x: &[NfElem]) -> Result<bool> {
    Ok(pd.pair_left(x)?.is_zero())
}

/// Rewrites an element of `Q(beta)` in another field, given the image of
/// `beta` there.
pub fn transport(x: &NfElem, image: &NfElem) -> Result<NfElem> {
    let target = image.field().clone();
    let mut acc = NfElem::zero(&target);
    let mut p = NfElem::one(&target);
    for c in x.coords() {
        acc = acc.add(&p.scale(c))?;
        p = p.mul(image)?;
    }
    Ok(acc)
}

/// Eigenvectors of two matrices expressed in the field of the first.
#[derive(Clone, Debug)]
pub struct CommonField {
    pub field: Arc<NumberField>,
    pub left_j: Vec<NfElem>,
    pub right_j: Vec<NfElem>,
    pub left_k: Vec<NfElem>,
    pub right_k: Vec<NfElem>,
}

/// Moves the Perron data of `K` into `Q(lambda_J)` when `lambda_K` lies in
/// that field and the two fields have equal degree; `None` otherwise.
pub fn common_field(pj: &PerronData, pk: &PerronData) -> Result<Option<CommonField>> {
    if pj.field.degree() != pk.field.degree() {
        return Ok(None);
    }
    let Some(image) = embed_real(&pk.lambda, &pj.field)? else {
        return Ok(None);
    };
    let mv = |v: &[NfElem]| -> Result<Vec<NfElem>> { v.iter().map(|x| transport(x, &image)).collect() };
    Ok(Some(CommonField {
        field: pj.field.clone(),
        left_j: pj.left.clone(),
        right_j: pj.right.clone(),
        left_k: mv(&pk.left)?,
        right_k: mv(&pk.right)?,
    }))
}

/// Whether two vectors over one field are proportional.
pub fn proportional(a: &[NfElem], b: &[NfElem]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i].mul(&b[j])? != a[j].mul(&b[i])? {
                return Ok(false);
            }
        }
    }
    Ok(a.iter().any(|x| !x.is_zero()) == b.iter().any(|x| !x.is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn ints(v: &[NfElem]) -> Vec<i64> {
        v.iter()
            .map(|x| {
                let q = x.to_rational().expect("rational");
                assert!(q.is_integer());
                i64::try_from(q.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn companion_pair_eigendata() {
        let pd = perron_data(&im(&[&[4, 1], &[32, 0]])).unwrap();
        assert_eq!(pd.lambda.to_rational(), Some(BigRational::from_integer(8.into())));
        assert_eq!(ints(&pd.left), vec![8, 1]);
        assert_eq!(ints(&pd.right), vec![1, 4]);
        assert_eq!(pd.lambda2.as_ref().unwrap().to_rational(), Some(BigRational::from_integer(4.into())));
        assert_eq!(pd.lambda3.to_rational(), Some(BigRational::from_integer(1.into()) / BigRational::from_integer(4.into())));

        let pk = perron_data(&im(&[&[6, 1], &[16, 0]])).unwrap();
        assert_eq!(ints(&pk.left), vec![8, 1]);
        assert_eq!(ints(&pk.right), vec![1, 2]);
    }

    #[test]
    fn non_perron_eigenvectors() {
        let j = im(&[&[4, 1], &[32, 0]]);
        let mu = AlgebraicNumber::from_integer((-4).into());
        let (l, r) = eigenvectors(&j, &mu).unwrap();
        assert_eq!(ints(&l), vec![4, -1]);
        assert_eq!(ints(&r), vec![1, -8]);
        let k = im(&[&[6, 1], &[16, 0]]);
        let (l, _) = eigenvectors(&k, &AlgebraicNumber::from_integer((-2).into())).unwrap();
        assert_eq!(ints(&l), vec![2, -1]);
    }

    #[test]
    fn membership_in_spectral_hyperplane() {
        let pd = perron_data(&im(&[&[4, 1], &[32, 0]])).unwrap();
        let f = pd.field.clone();
        let x: Vec<NfElem> = [1, -8].iter().map(|&a| NfElem::from_int(&f, &a.into())).collect();
        assert!(spectral_membership(&pd, &x).unwrap());
        assert!(!spectral_membership(&pd, &pd.right).unwrap());
        let z = vec![NfElem::zero(&f), NfElem::zero(&f)];
        assert!(spectral_membership(&pd, &z).unwrap());
    }

    #[test]
    fn irrational_perron_vector_residual() {
        // golden-mean shift
        let j = im(&[&[1, 1], &[1, 0]]);
        let pd = perron_data(&j).unwrap();
        let lam = NfElem::generator(&pd.field);
        let jw = mat_vec(&j, &pd.right).unwrap();
        for (a, b) in jw.iter().zip(&pd.right) {
            assert_eq!(*a, b.mul(&lam).unwrap());
        }
        let vj = vec_mat(&pd.left, &j).unwrap();
        for (a, b) in vj.iter().zip(&pd.left) {
            assert_eq!(*a, b.mul(&lam).unwrap());
        }
        assert!(pd.left.iter().all(|x| x.signum().unwrap() > 0));
    }

    #[test]
    fn rejects_non_primitive_and_singular() {
        assert_eq!(perron_data(&im(&[&[0, 1], &[1, 0]])).unwrap_err(), Error::NotPrimitive);
        assert_eq!(perron_data(&im(&[&[1, 1], &[1, 1]])).unwrap_err(), Error::Singular);
    }
}
