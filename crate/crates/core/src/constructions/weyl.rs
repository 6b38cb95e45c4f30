//! Weyl-Heisenberg displacement operators and fiducial verification.
//!
//! Only verification is provided: given a candidate fiducial vector or operator,
//! check the group-covariance conditions and build the orbit.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cob::{validate_cob, Cob, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, ComplexVector, HermitianOperator};

/// The `d^2` displacement operators
/// `D_jk = w^(jk/2) sum_m w^(jm) |k+m><m|`, `w = exp(2 pi i/d)`,
/// with `w^(jk/2) = exp(pi i jk/d)`. Stored at index `j d + k`.
#[derive(Clone, Debug)]
pub struct WeylHeisenbergSet {
    dim: usize,
    unitaries: Vec<CMatrix>,
}

impl WeylHeisenbergSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn get(&self, j: usize, k: usize) -> &CMatrix {
        &self.unitaries[self.index(j, k)]
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        (j % self.dim) * self.dim + (k % self.dim)
    }

    /// Group label `(j, k)` of a flat index.
    pub fn label(&self, g: usize) -> (usize, usize) {
        (g / self.dim, g % self.dim)
    }

    /// Index of the group product `g g'` (componentwise addition mod `d`).
    pub fn compose_index(&self, g: usize, h: usize) -> usize {
        let (j1, k1) = self.label(g);
        let (j2, k2) = self.label(h);
        self.index(j1 + j2, k1 + k2)
    }

    /// `sum_g U_g C U_g^dagger`.
    pub fn twirl(&self, op: &CMatrix) -> CMatrix {
        self.unitaries
            .iter()
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, u| {
                acc + u * op * u.adjoint()
            })
    }
}

pub fn weyl_heisenberg(d: usize) -> Result<WeylHeisenbergSet> {
    if d < 2 {
        return Err(Error::Dimension(format!("requires d >= 2, got {d}")));
    }
    let df = d as f64;
    let mut unitaries = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let prefactor = Complex64::from_polar(1.0, PI * ((j * k) % (2 * d)) as f64 / df);
            let mut u = CMatrix::zeros(d, d);
            for m in 0..d {
                let phase = Complex64::from_polar(1.0, 2.0 * PI * ((j * m) % d) as f64 / df);
                u[((k + m) % d, m)] = prefactor * phase;
            }
            unitaries.push(u);
        }
    }
    Ok(WeylHeisenbergSet { dim: d, unitaries })
}

/// Result of checking `|<phi|U_g phi>|^2 = 1/(d+1)` for every `g != e`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiducialCheck {
    pub is_fiducial: bool,
    /// Signed residual `|<phi|U_g phi>|^2 - 1/(d+1)` per group index; 0 at `g = e`.
    pub residuals: Vec<f64>,
    pub worst: f64,
}

pub fn is_fiducial_vector(
    phi: &ComplexVector,
    wh: &WeylHeisenbergSet,
    tol: f64,
) -> Result<FiducialCheck> {
    let d = wh.dim();
    if phi.dim() != d {
        return Err(Error::Dimension(format!(
            "vector of dimension {} for a dimension-{d} group",
            phi.dim()
        )));
    }
    if !phi.is_normalized(1e-12) {
        return Err(Error::InvalidOperator(format!(
            "fiducial vector must be normalized, norm = {}",
            phi.norm()
        )));
    }
    let target = 1.0 / (d + 1) as f64;
    let residuals: Vec<f64> = wh
        .unitaries()
        .iter()
        .enumerate()
        .map(|(g, u)| {
            if g == 0 {
                0.0
            } else {
                phi.inner(&phi.apply(u)).norm_sqr() - target
            }
        })
        .collect();
    let worst = residuals.iter().map(|r| r.abs()).fold(0.0, f64::max);
    Ok(FiducialCheck {
        is_fiducial: worst <= tol,
        residuals,
        worst,
    })
}

/// Verifies that `a` is a fiducial operator (`tr A = tr A^2 = 1/d` and
/// `tr(A U_g^dagger A U_g) = 0` for `g != e`) and returns its orbit COB
/// `(U_g A U_g^dagger)_g`.
pub fn covariant_cob(a: &HermitianOperator, wh: &WeylHeisenbergSet, tol: f64) -> Result<Cob> {
    let d = wh.dim();
    if a.dim() != d {
        return Err(Error::Dimension(format!(
            "operator of dimension {} for a dimension-{d} group",
            a.dim()
        )));
    }
    let inv_d = 1.0 / d as f64;
    let mut problems = Vec::new();
    let norm_res = a.norm_sqr() - inv_d;
    if norm_res.abs() > tol {
        problems.push(format!("tr A^2 - 1/d = {norm_res:e}"));
    }
    let trace_res = a.trace() - inv_d;
    if trace_res.abs() > tol {
        problems.push(format!("tr A - 1/d = {trace_res:e}"));
    }
    let orbit = wh
        .unitaries()
        .iter()
        .map(|u| a.conjugate_by(u))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = (0, 0.0_f64);
    for (g, ag) in orbit.iter().enumerate().skip(1) {
        // tr(A U^dagger A U) = tr(A (U^dagger A U)) = <<A, U^dagger A U>>; equal to
        // <<U A U^dagger, A>> by cyclicity
        let overlap = ag.expectation(a);
        if overlap.abs() > worst.1 {
            worst = (g, overlap.abs());
        }
    }
    if worst.1 > tol {
        let (j, k) = wh.label(worst.0);
        problems.push(format!(
            "max |tr(A U_g^dagger A U_g)| = {:e} at g = ({j},{k})",
            worst.1
        ));
    }
    if !problems.is_empty() {
        return Err(Error::NotFiducial(problems.join("; ")));
    }
    validate_cob(orbit, tol.max(DEFAULT_TOL))
}

/// Fiducial operator `(G - (1 - l) I/d^2)/l` of the SIC POVM `G = |phi><phi|/d`,
/// `l = 1/sqrt(d+1)`.
pub fn fiducial_operator_from_vector(phi: &ComplexVector) -> HermitianOperator {
    let d = phi.dim();
    let df = d as f64;
    let lambda = 1.0 / (df + 1.0).sqrt();
    let g = HermitianOperator::projector(phi).scale(1.0 / df);
    let shift = HermitianOperator::identity(d).scale((1.0 - lambda) / (df * df));
    (&g - &shift).scale(1.0 / lambda)
}

/// Known Weyl-Heisenberg SIC fiducial vectors for small `d`.
///
/// `d = 2`: Bloch vector `(1,1,1)/sqrt(3)`. `d = 3`: `(0, 1, -1)/sqrt(2)`.
pub fn known_sic_fiducial(d: usize) -> Option<ComplexVector> {
    match d {
        2 => {
            let cos_theta = 1.0 / 3f64.sqrt();
            let a = ((1.0 + cos_theta) / 2.0).sqrt();
            let b = ((1.0 - cos_theta) / 2.0).sqrt();
            ComplexVector::new(vec![c(a, 0.0), Complex64::from_polar(b, PI / 4.0)]).ok()
        }
        3 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            ComplexVector::new(vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0)]).ok()
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cob::{sic_criterion, spectral_profile, SIC_GAP_TOL};
    use crate::random::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn d2_shift_and_clock() {
        let wh = weyl_heisenberg(2).unwrap();
        let x =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let z =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
        assert!((wh.get(0, 1) - x).camax() < 1e-15);
        assert!((wh.get(1, 0) - z).camax() < 1e-15);
        assert!((wh.get(0, 0) - CMatrix::identity(2, 2)).camax() < 1e-15);
    }

    #[test]
    fn bloch_state_is_fiducial() {
        let wh = weyl_heisenberg(2).unwrap();
        let phi = known_sic_fiducial(2).unwrap();
        // Bloch vector check: <sigma_x> = <sigma_y> = <sigma_z> = 1/sqrt(3)
        let rho = HermitianOperator::projector(&phi);
        let r = 1.0 / 3f64.sqrt();
        assert!((2.0 * rho.get(0, 1).re - r).abs() < 1e-14);
        assert!((-2.0 * rho.get(0, 1).im - r).abs() < 1e-14);
        assert!((rho.get(0, 0).re - rho.get(1, 1).re - r).abs() < 1e-14);

        let chk = is_fiducial_vector(&phi, &wh, 1e-10).unwrap();
        assert!(chk.is_fiducial, "{chk:?}");
        assert_eq!(chk.residuals[0], 0.0);
    }

    #[test]
    fn basis_vector_is_not_fiducial() {
        let wh = weyl_heisenberg(2).unwrap();
        let chk = is_fiducial_vector(&ComplexVector::basis(2, 0), &wh, 1e-10).unwrap();
        assert!(!chk.is_fiducial);
        // clock D_10 fixes |0>, overlap 1
        assert!((chk.residuals[wh.index(1, 0)] - (1.0 - 1.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn unnormalized_vector_rejected() {
        let wh = weyl_heisenberg(2).unwrap();
        let v = ComplexVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(is_fiducial_vector(&v, &wh, 1e-10).is_err());
    }

    #[test]
    fn covariant_cobs_from_known_fiducials() {
        for d in [2, 3] {
            let wh = weyl_heisenberg(d).unwrap();
            let phi = known_sic_fiducial(d).unwrap();
            assert!(is_fiducial_vector(&phi, &wh, 1e-10).unwrap().is_fiducial);
            let a = fiducial_operator_from_vector(&phi);
            let cob = covariant_cob(&a, &wh, 1e-10).unwrap();
            assert_eq!(cob.len(), d * d);
            let report = sic_criterion(&cob, SIC_GAP_TOL);
            assert!(report.is_sic_capable, "d={d}: {report:?}");
            for r in &report.trace_power_residuals {
                assert!(*r < 1e-12);
            }
            let p = spectral_profile(&cob);
            assert!((p.lambda_star - 1.0 / ((d + 1) as f64).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_is_not_fiducial() {
        let wh = weyl_heisenberg(3).unwrap();
        let a = HermitianOperator::identity(3).scale(1.0 / 3.0);
        match covariant_cob(&a, &wh, 1e-10) {
            Err(Error::NotFiducial(msg)) => assert!(msg.contains("tr(A U_g^dagger A U_g)")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negated_fiducial_rejected_by_trace() {
        let wh = weyl_heisenberg(2).unwrap();
        let a = fiducial_operator_from_vector(&known_sic_fiducial(2).unwrap()).scale(-1.0);
        match covariant_cob(&a, &wh, 1e-10) {
            Err(Error::NotFiducial(msg)) => {
                assert!(msg.contains("tr A - 1/d"));
                assert!(!msg.contains("U_g"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn random_operator_fails_with_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let wh = weyl_heisenberg(3).unwrap();
        for _ in 0..5 {
            let a = random_hermitian(3, &mut rng);
            let a = a.scale((1.0 / 3.0f64).sqrt() / a.norm());
            assert!(matches!(
                covariant_cob(&a, &wh, 1e-8),
                Err(Error::NotFiducial(_))
            ));
        }
    }
}
