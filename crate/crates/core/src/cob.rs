//! Complete orthogonal bases (COBs): validation, spectral profile, and the
//! criteria deciding when the canonical GSIC POVM built from a COB is a SIC POVM.
//!
//! A COB is a list of `d^2` Hermitian operators `A_i` with
//! `<<A_i, A_j>> = delta_ij / d` and `sum_i A_i = I`. Every element then has
//! `tr A_i = tr A_i^2 = 1/d` and a strictly negative minimum eigenvalue.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{eig_hermitian, gram_matrix, HermitianOperator};
use crate::random::{random_pure_vector, random_real_vector};

/// Default absolute tolerance for COB validation.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Tolerance on `1/sqrt(d+1) - lambda*` below which a COB is SIC-capable.
pub const SIC_GAP_TOL: f64 = 1e-8;

/// A validated complete orthogonal basis.
#[derive(Clone, Debug)]
pub struct Cob {
    dim: usize,
    elements: Vec<HermitianOperator>,
}

impl Cob {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn into_elements(self) -> Vec<HermitianOperator> {
        self.elements
    }

    /// Largest entry-wise deviation from another COB, element by element.
    pub fn max_abs_diff(&self, other: &Cob) -> f64 {
        self.elements
            .iter()
            .zip(&other.elements)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Worst deviations from the two defining constraints.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CobResiduals {
    pub dim: usize,
    /// `max_ij |<<A_i, A_j>> - delta_ij / d|`
    pub sub_orthonormality: f64,
    /// Frobenius norm of `sum_i A_i - I`.
    pub completeness: f64,
}

impl CobResiduals {
    pub fn passes(&self, tol: f64) -> bool {
        self.sub_orthonormality <= tol && self.completeness <= tol
    }
}

fn infer_dim(ops: &[HermitianOperator]) -> Result<usize> {
    let first = ops.first().ok_or(Error::Count {
        expected: 1,
        actual: 0,
    })?;
    let d = first.dim();
    if ops.len() != d * d {
        return Err(Error::Count {
            expected: d * d,
            actual: ops.len(),
        });
    }
    if let Some(bad) = ops.iter().find(|a| a.dim() != d) {
        return Err(Error::Dimension(format!(
            "element of dimension {} in a dimension-{d} set",
            bad.dim()
        )));
    }
    Ok(d)
}

/// Computes the COB residuals without judging them.
pub fn cob_residuals(ops: &[HermitianOperator]) -> Result<CobResiduals> {
    let d = infer_dim(ops)?;
    let g = gram_matrix(ops);
    let inv_d = 1.0 / d as f64;
    let mut sub = 0.0_f64;
    for i in 0..ops.len() {
        for j in 0..ops.len() {
            let target = if i == j { inv_d } else { 0.0 };
            sub = sub.max((g[(i, j)] - target).abs());
        }
    }
    let total = HermitianOperator::sum(ops)?;
    let completeness = (&total - &HermitianOperator::identity(d)).norm();
    Ok(CobResiduals {
        dim: d,
        sub_orthonormality: sub,
        completeness,
    })
}

/// Validates `ops` as a COB within `tol`.
///
/// The error message lists every violated constraint with its worst deviation.
pub fn validate_cob(ops: Vec<HermitianOperator>, tol: f64) -> Result<Cob> {
    let r = cob_residuals(&ops)?;
    let mut violations = Vec::new();
    if r.sub_orthonormality > tol {
        violations.push(format!(
            "sub-orthonormality: max |<<A_i,A_j>> - delta_ij/d| = {:e}",
            r.sub_orthonormality
        ));
    }
    if r.completeness > tol {
        violations.push(format!(
            "completeness: ||sum A_i - I|| = {:e}",
            r.completeness
        ));
    }
    if !violations.is_empty() {
        return Err(Error::ValidationFailure(violations.join("; ")));
    }
    Ok(Cob {
        dim: r.dim,
        elements: ops,
    })
}

/// Minimum eigenvalues and the quantities derived from them.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub dim: usize,
    pub min_eigenvalues: Vec<f64>,
    /// `max_i |m_i|`
    pub tau: f64,
    /// `1 / (1 + d^2 tau)`, the largest admissible mixing parameter.
    pub lambda_star: f64,
    /// `d tau`
    pub negativity: f64,
}

pub fn spectral_profile(cob: &Cob) -> SpectralProfile {
    let d = cob.dim();
    let min_eigenvalues: Vec<f64> = cob
        .elements()
        .iter()
        .map(|a| eig_hermitian(a).min())
        .collect();
    let tau = min_eigenvalues.iter().map(|m| m.abs()).fold(0.0, f64::max);
    let df = d as f64;
    SpectralProfile {
        dim: d,
        min_eigenvalues,
        tau,
        lambda_star: 1.0 / (1.0 + df * df * tau),
        negativity: df * tau,
    }
}

/// Upper bound `1/sqrt(d+1)` on `lambda*`.
pub fn optimal_lambda(d: usize) -> f64 {
    1.0 / ((d + 1) as f64).sqrt()
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Dimension(format!("requires d >= 2, got {d}")));
    }
    Ok(())
}

/// Lower bound `(sqrt(d+1) - 1) / d^2` on `|x_min|` for real `d`-tuples with
/// `sum x = sum x^2 = 1/d`, and hence on `tau` for any COB.
pub fn min_eigenvalue_bound(d: usize) -> Result<f64> {
    check_dim(d)?;
    let df = d as f64;
    Ok(((df + 1.0).sqrt() - 1.0) / (df * df))
}

/// The unique spectrum saturating [`min_eigenvalue_bound`]: `x1` once and `x2`
/// with multiplicity `d - 1`.
pub fn sic_spectrum(d: usize) -> Result<(f64, f64)> {
    check_dim(d)?;
    let df = d as f64;
    let r = (df + 1.0).sqrt();
    Ok(((1.0 + (df - 1.0) * r) / (df * df), (1.0 - r) / (df * df)))
}

/// `tr A^n` for `n = 3..=d` on the SIC spectrum. Empty for `d = 2`.
pub fn sic_trace_targets(d: usize) -> Result<Vec<f64>> {
    let (x1, x2) = sic_spectrum(d)?;
    let m = (d - 1) as f64;
    Ok((3..=d as i32)
        .map(|n| x1.powi(n) + m * x2.powi(n))
        .collect())
}

/// Diagnostics for whether the canonical GSIC POVM of a COB is a SIC POVM.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SicCriterionReport {
    pub is_sic_capable: bool,
    /// `1/sqrt(d+1) - lambda*`
    pub lambda_star_gap: f64,
    /// `tau - (sqrt(d+1) - 1)/d^2`
    pub tau_gap: f64,
    /// For `n = 3..=d`, `max_i |tr A_i^n - target_n|`.
    pub trace_power_residuals: Vec<f64>,
    /// Per element, the largest eigenvalue deviation from the SIC spectrum.
    pub spectrum_residuals: Vec<f64>,
}

/// Checks the SIC conditions on a COB.
///
/// `lambda_star_gap < tol` is the deciding test; the tau gap, trace powers, and
/// spectra are reported as diagnostics. Spectral residuals grow like the square
/// root of the gap near saturation, so they can sit well above `tol` for a
/// SIC-capable COB computed in floating point.
pub fn sic_criterion(cob: &Cob, tol: f64) -> SicCriterionReport {
    let d = cob.dim();
    let profile = spectral_profile(cob);
    let bound = min_eigenvalue_bound(d).expect("validated COB has d >= 2");
    let targets = sic_trace_targets(d).expect("validated COB has d >= 2");
    let (x1, x2) = sic_spectrum(d).expect("validated COB has d >= 2");

    let mut trace_power_residuals = vec![0.0_f64; targets.len()];
    let mut spectrum_residuals = Vec::with_capacity(cob.len());
    for a in cob.elements() {
        let eig = eig_hermitian(a);
        let dev = eig
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| (v - if k == 0 { x1 } else { x2 }).abs())
            .fold(0.0, f64::max);
        spectrum_residuals.push(dev);
        for (slot, (n, target)) in trace_power_residuals.iter_mut().zip((3..).zip(&targets)) {
            let tr: f64 = eig.values.iter().map(|v| v.powi(n)).sum();
            *slot = slot.max((tr - target).abs());
        }
    }

    let lambda_star_gap = optimal_lambda(d) - profile.lambda_star;
    SicCriterionReport {
        is_sic_capable: lambda_star_gap.abs() < tol,
        lambda_star_gap,
        tau_gap: profile.tau - bound,
        trace_power_residuals,
        spectrum_residuals,
    }
}

/// Quasiprobabilities `mu_i(rho) = tr A_i rho`.
pub fn quasiprobabilities(cob: &Cob, rho: &HermitianOperator) -> Vec<f64> {
    cob.elements().iter().map(|a| a.expectation(rho)).collect()
}

/// `d * max(0, -min_i tr A_i rho)`.
pub fn state_negativity(cob: &Cob, rho: &HermitianOperator) -> f64 {
    let min = quasiprobabilities(cob, rho)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    cob.dim() as f64 * (-min).max(0.0)
}

/// Sampled lower estimate of the COB negativity `max_rho d max(0, -min_i tr A_i rho)`.
///
/// Maximizes over `samples` Haar-random pure states drawn from `seed`, and, when
/// `include_eigenvector_states` is set, over the minimum-eigenvalue eigenvectors
/// of every element (which attain the maximum).
pub fn negativity_oracle(
    cob: &Cob,
    samples: usize,
    seed: u64,
    include_eigenvector_states: bool,
) -> f64 {
    let d = cob.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0_f64;
    for _ in 0..samples {
        let psi = random_pure_vector(d, &mut rng);
        best = best.max(state_negativity(cob, &HermitianOperator::projector(&psi)));
    }
    if include_eigenvector_states {
        for a in cob.elements() {
            let eig = eig_hermitian(a);
            let phi = eig.vectors.last().expect("nonempty spectrum");
            best = best.max(state_negativity(cob, &HermitianOperator::projector(phi)));
        }
    }
    best
}

/// Uniform sample of a real `d`-tuple with `sum x = sum x^2 = 1/d`.
///
/// Draws `a` uniformly on the sphere `sum a = 0, sum a^2 = 2` and maps back through
/// `x_i = (1 + a_i sqrt(d(d^2-1)/2)) / d^2`. Returned in descending order.
pub fn sample_trace_constrained_tuple<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let df = d as f64;
    let a = loop {
        let mut g = random_real_vector(d, rng);
        let mean = g.mean();
        g.add_scalar_mut(-mean);
        let n = g.norm();
        if n > 1e-12 {
            break g * (2f64.sqrt() / n);
        }
    };
    let scale = (df * (df * df - 1.0) / 2.0).sqrt();
    let mut x: Vec<f64> = a.iter().map(|ai| (1.0 + ai * scale) / (df * df)).collect();
    x.sort_by(|p, q| q.total_cmp(p));
    x
}
