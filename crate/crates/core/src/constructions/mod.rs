//! Three ways to build a complete orthogonal basis, plus the ingredients they need.

mod mub;
mod orthogonal;
mod weyl;

pub use mub::{is_prime, line_index, mub_prime, mus_prime, MubSet, MusSet, MUB_TOL};
pub use orthogonal::{OrthogonalMatrix, ORTHOGONAL_TOL};
pub use weyl::{
    covariant_cob, fiducial_operator_from_vector, is_fiducial_vector, known_sic_fiducial,
    weyl_heisenberg, FiducialCheck, WeylHeisenbergSet,
};

use crate::cob::{validate_cob, Cob, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::operator::{
    gram_schmidt_operators, hs_inner, BasisKind, HermitianOperator, OperatorBasis,
};

fn check_identity_first(basis: &OperatorBasis) -> Result<()> {
    if basis.kind() != BasisKind::Orthonormal {
        return Err(Error::Constraint("basis must be orthonormal".into()));
    }
    let d = basis.dim();
    let t0 = HermitianOperator::identity(d).scale(1.0 / (d as f64).sqrt());
    let dev = basis.elements()[0].max_abs_diff(&t0);
    if dev > 1e-12 {
        return Err(Error::Constraint(format!(
            "first basis element must be I/sqrt(d): max deviation {dev:e}"
        )));
    }
    Ok(())
}

/// `A_i = (1/sqrt(d)) sum_j O_ji T_j`.
///
/// Every COB arises this way for a suitable orthogonal `O` with constant first row.
pub fn construction1(basis: &OperatorBasis, o: &OrthogonalMatrix) -> Result<Cob> {
    check_identity_first(basis)?;
    let d = basis.dim();
    let n = d * d;
    if o.size() != n {
        return Err(Error::Dimension(format!(
            "orthogonal matrix of size {} for a basis of {n} elements",
            o.size()
        )));
    }
    let scale = 1.0 / (d as f64).sqrt();
    let elements = (0..n)
        .map(|i| {
            let coeffs: Vec<f64> = (0..n).map(|j| o.get(j, i) * scale).collect();
            basis.synthesize(&coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    validate_cob(elements, DEFAULT_TOL)
}

/// Closed-form COB from a single orthonormal basis with `T_0 = I/sqrt(d)`:
///
/// ```text
/// A_0 = (T_0 - sum_{j>=1} f(j) T_j) / (d sqrt d)
/// A_i = (T_0 - sum_{j<i} f(j) T_j + (d^2 - i) f(i) T_i) / (d sqrt d)
/// f(j) = d / sqrt((d^2 - j)(d^2 - j + 1))
/// ```
pub fn construction2(basis: &OperatorBasis) -> Result<Cob> {
    check_identity_first(basis)?;
    let d = basis.dim();
    let n = d * d;
    let df = d as f64;
    let nf = n as f64;
    let f: Vec<f64> = (0..n)
        .map(|j| {
            let jf = j as f64;
            df / ((nf - jf) * (nf - jf + 1.0)).sqrt()
        })
        .collect();
    let prefactor = 1.0 / (df * df.sqrt());

    let mut coeffs = vec![0.0; n];
    let mut elements = Vec::with_capacity(n);
    coeffs[0] = prefactor;
    for j in 1..n {
        coeffs[j] = -f[j] * prefactor;
    }
    elements.push(basis.synthesize(&coeffs)?);
    for i in 1..n {
        let mut coeffs = vec![0.0; n];
        coeffs[0] = prefactor;
        for j in 1..i {
            coeffs[j] = -f[j] * prefactor;
        }
        coeffs[i] = (nf - i as f64) * f[i] * prefactor;
        elements.push(basis.synthesize(&coeffs)?);
    }
    validate_cob(elements, DEFAULT_TOL)
}

/// The same COB as [`construction2`], computed by orthonormalizing
/// `{sum_i T_i, T_1, ..., T_{d^2-1}}` into `(S_j)` and setting
/// `A_i = (1/sqrt(d)) sum_j <<S_j, T_i>> T_j`.
pub fn construction2_gram_schmidt(basis: &OperatorBasis) -> Result<Cob> {
    check_identity_first(basis)?;
    let d = basis.dim();
    let ts = basis.elements();
    let mut seq = Vec::with_capacity(ts.len());
    seq.push(HermitianOperator::sum(ts)?);
    seq.extend(ts[1..].iter().cloned());
    let s = gram_schmidt_operators(&seq)?;
    let scale = 1.0 / (d as f64).sqrt();
    let elements = ts
        .iter()
        .map(|ti| {
            let coeffs = s
                .iter()
                .map(|sj| hs_inner(sj, ti).map(|z| z.re * scale))
                .collect::<Result<Vec<_>>>()?;
            basis.synthesize(&coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    validate_cob(elements, DEFAULT_TOL)
}

/// `A_k = (sum_J |J, s(k,J)><J, s(k,J)| - I) / d`, where `s(k, J)` is the line of
/// striation `J` through point `k`. MUB `J` is paired with striation `J`.
pub fn construction3(mubs: &MubSet, mus: &MusSet) -> Result<Cob> {
    let d = mubs.dim();
    if mus.dim() != d {
        return Err(Error::Constraint(format!(
            "MUB dimension {d} does not match MUS dimension {}",
            mus.dim()
        )));
    }
    let projectors: Vec<Vec<HermitianOperator>> = mubs
        .bases()
        .iter()
        .map(|b| b.iter().map(HermitianOperator::projector).collect())
        .collect();
    let id = HermitianOperator::identity(d);
    let inv_d = 1.0 / d as f64;
    let elements = (0..d * d)
        .map(|k| {
            let mut acc = -&id;
            for (j, basis) in projectors.iter().enumerate() {
                let i = line_index(mus, k, j).expect("MUS is a partition");
                acc = &acc + &basis[i];
            }
            acc.scale(inv_d)
        })
        .collect();
    validate_cob(elements, DEFAULT_TOL)
}

/// `max_{J,i} || |J,i><J,i| - sum_{k in L_i^(J)} A_k ||` for a COB built from
/// `mubs` and `mus`.
pub fn line_sum_residual(cob: &Cob, mubs: &MubSet, mus: &MusSet) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (j, striation) in mus.striations().iter().enumerate() {
        for (i, line) in striation.iter().enumerate() {
            let members: Vec<HermitianOperator> =
                line.iter().map(|&k| cob.elements()[k].clone()).collect();
            let sum = HermitianOperator::sum(&members)?;
            let proj = HermitianOperator::projector(mubs.vector(j, i));
            worst = worst.max((&sum - &proj).norm());
        }
    }
    Ok(worst)
}
