//! General SIC POVMs and their correspondence with complete orthogonal bases.
//!
//! For a COB `(A_i)` and `0 < lambda <= lambda*`, the operators
//! `G_i = lambda A_i + (1 - lambda) I/d^2` form a GSIC POVM with
//! `tr G_i^2 = a'` and `tr G_i G_j = b'` (`i != j`). Conversely every GSIC POVM
//! yields a COB with `lambda = sqrt(1 - b' d^3)`.

use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use crate::cob::{optimal_lambda, spectral_profile, validate_cob, Cob, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::operator::{eig_hermitian, gram_matrix, HermitianOperator};

/// Relative eigenvalue threshold for the span rank of a Gram matrix.
pub const RANK_TOL: f64 = 1e-10;

/// A rank-one element has second eigenvalue below this fraction of its largest.
pub const RANK_ONE_TOL: f64 = 1e-8;

/// Allowed disagreement between the `b'` and `a'` routes to `lambda`.
pub const LAMBDA_CONSISTENCY_TOL: f64 = 1e-8;

/// Slack allowed above `lambda*` when mixing a COB into a POVM.
pub const LAMBDA_SLACK: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct GsicPovm {
    dim: usize,
    elements: Vec<HermitianOperator>,
    lambda: f64,
    a_prime: f64,
    b_prime: f64,
}

impl GsicPovm {
    /// Validates `ops` as a GSIC POVM within `tol` and recovers `lambda` from the
    /// fitted constants.
    pub fn from_operators(ops: Vec<HermitianOperator>, tol: f64) -> Result<Self> {
        let report = validate_povm(&ops, tol)?;
        if !report.is_gsic {
            return Err(Error::ValidationFailure(format!(
                "not a GSIC POVM: {}",
                report.summary()
            )));
        }
        let d = ops[0].dim();
        let (a_prime, b_prime) = (report.a_prime.unwrap(), report.b_prime.unwrap());
        let lambda = lambda_from_constants(d, a_prime, b_prime)?;
        Ok(Self {
            dim: d,
            elements: ops,
            lambda,
            a_prime,
            b_prime,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<HermitianOperator> {
        self.elements
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn a_prime(&self) -> f64 {
        self.a_prime
    }

    pub fn b_prime(&self) -> f64 {
        self.b_prime
    }

    pub fn is_sic(&self, tol: f64) -> bool {
        let df = self.dim as f64;
        (self.a_prime - 1.0 / (df * df)).abs() <= tol
    }
}

fn check_lambda(lambda: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Dimension(format!("requires d >= 2, got {d}")));
    }
    let max = optimal_lambda(d);
    if !(lambda > 0.0 && lambda <= max + LAMBDA_SLACK) {
        return Err(Error::LambdaRange {
            lambda,
            max,
            detail: String::new(),
        });
    }
    Ok(())
}

/// `a' = l^2/d + (1 - l^2)/d^3`, `b' = (1 - l^2)/d^3`.
pub fn gsic_constants(lambda: f64, d: usize) -> Result<(f64, f64)> {
    check_lambda(lambda, d)?;
    Ok(constants_unchecked(lambda, d))
}

fn constants_unchecked(lambda: f64, d: usize) -> (f64, f64) {
    let df = d as f64;
    let l2 = lambda * lambda;
    let b = (1.0 - l2) / (df * df * df);
    (l2 / df + b, b)
}

/// Recovers `lambda = sqrt(1 - b' d^3)` and cross-checks `sqrt((d^3 a' - 1)/(d^2 - 1))`.
pub fn lambda_from_constants(d: usize, a_prime: f64, b_prime: f64) -> Result<f64> {
    let df = d as f64;
    let d3 = df * df * df;
    let from_b = 1.0 - b_prime * d3;
    if from_b <= 1e-12 {
        return Err(Error::DegenerateGsic(format!(
            "b' d^3 = {} >= 1, lambda would vanish (elements proportional to the identity)",
            b_prime * d3
        )));
    }
    let lambda = from_b.sqrt();
    let from_a = ((d3 * a_prime - 1.0) / (df * df - 1.0)).max(0.0).sqrt();
    if (lambda - from_a).abs() > LAMBDA_CONSISTENCY_TOL {
        return Err(Error::DegenerateGsic(format!(
            "inconsistent constants: lambda from b' = {lambda}, from a' = {from_a}"
        )));
    }
    Ok(lambda)
}

/// `G_i = lambda A_i + (1 - lambda) I/d^2` for `0 < lambda <= lambda*`.
///
/// Values above `lambda*` would make some `G_i` non-positive and are rejected.
pub fn cob_to_gsic(cob: &Cob, lambda: f64) -> Result<GsicPovm> {
    let d = cob.dim();
    let profile = spectral_profile(cob);
    let lstar = profile.lambda_star;
    if !(lambda > 0.0 && lambda <= lstar + LAMBDA_SLACK) {
        let df = d as f64;
        let min_m = profile
            .min_eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let detail = if lambda > lstar {
            format!(
                "; smallest eigenvalue of the mixed elements would be {:e}",
                lambda * min_m + (1.0 - lambda) / (df * df)
            )
        } else {
            String::new()
        };
        return Err(Error::LambdaRange {
            lambda,
            max: lstar,
            detail,
        });
    }
    let df = d as f64;
    let shift = HermitianOperator::identity(d).scale((1.0 - lambda) / (df * df));
    let elements = cob
        .elements()
        .iter()
        .map(|a| &a.scale(lambda) + &shift)
        .collect();
    let (a_prime, b_prime) = constants_unchecked(lambda, d);
    Ok(GsicPovm {
        dim: d,
        elements,
        lambda,
        a_prime,
        b_prime,
    })
}

/// Inverts [`cob_to_gsic`]: fits `a'`, `b'` from the elements, recovers `lambda`,
/// and returns `A_i = (G_i - (1 - lambda) I/d^2)/lambda` with that `lambda`.
pub fn gsic_to_cob(povm: &GsicPovm) -> Result<(Cob, f64)> {
    let d = povm.dim();
    let (a_prime, b_prime, _) = fit_symmetry(&gram_matrix(povm.elements()));
    let lambda = lambda_from_constants(d, a_prime, b_prime)?;
    let df = d as f64;
    let shift = HermitianOperator::identity(d).scale((1.0 - lambda) / (df * df));
    let elements = povm
        .elements()
        .iter()
        .map(|g| (g - &shift).scale(1.0 / lambda))
        .collect();
    let cob = validate_cob(elements, DEFAULT_TOL)?;
    Ok((cob, lambda))
}

/// Means of the diagonal and off-diagonal Gram entries and the worst deviation
/// from them.
fn fit_symmetry(g: &nalgebra::DMatrix<f64>) -> (f64, f64, f64) {
    let n = g.nrows();
    let a = g.diagonal().mean();
    let b = if n > 1 {
        (g.sum() - g.diagonal().sum()) / (n * (n - 1)) as f64
    } else {
        0.0
    };
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { a } else { b };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    (a, b, worst)
}

/// Outcome of checking a list of operators against the POVM, IC, GSIC and SIC
/// conditions.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PovmValidationReport {
    pub dim: usize,
    pub count: usize,
    pub is_povm: bool,
    pub is_ic: bool,
    pub is_gsic: bool,
    pub is_sic: bool,
    /// Rank of the Gram matrix `tr F_i F_j`.
    pub span_rank: usize,
    /// `max(0, -min eigenvalue)` over all elements.
    pub positivity_residual: f64,
    /// `||sum F_i - I||`
    pub completeness_residual: f64,
    pub a_prime: Option<f64>,
    pub b_prime: Option<f64>,
    /// Worst deviation of the Gram matrix from the fitted `a'`/`b'` pattern.
    pub symmetry_residual: Option<f64>,
    pub all_rank_one: bool,
}

impl PovmValidationReport {
    pub fn summary(&self) -> String {
        format!(
            "povm={} (positivity {:e}, completeness {:e}), ic={} (rank {}/{}), gsic={}, sic={}",
            self.is_povm,
            self.positivity_residual,
            self.completeness_residual,
            self.is_ic,
            self.span_rank,
            self.dim * self.dim,
            self.is_gsic,
            self.is_sic
        )
    }
}

/// Rank of a real symmetric positive semidefinite matrix, relative threshold [`RANK_TOL`].
pub fn psd_rank(g: &nalgebra::DMatrix<f64>) -> usize {
    let eig = SymmetricEigen::new(g.clone());
    let max = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    eig.eigenvalues
        .iter()
        .filter(|&&v| v > RANK_TOL * max)
        .count()
}

pub fn validate_povm(ops: &[HermitianOperator], tol: f64) -> Result<PovmValidationReport> {
    let first = ops.first().ok_or(Error::Count {
        expected: 1,
        actual: 0,
    })?;
    let d = first.dim();
    if let Some(bad) = ops.iter().find(|f| f.dim() != d) {
        return Err(Error::Dimension(format!(
            "element of dimension {} in a dimension-{d} set",
            bad.dim()
        )));
    }
    let n = ops.len();

    let mut positivity_residual = 0.0_f64;
    let mut all_rank_one = true;
    for f in ops {
        let eig = eig_hermitian(f);
        positivity_residual = positivity_residual.max(-eig.min());
        let top = eig.max();
        let second = eig.values.get(1).copied().unwrap_or(0.0);
        if top <= 0.0 || second.abs() >= RANK_ONE_TOL * top {
            all_rank_one = false;
        }
    }
    let total = HermitianOperator::sum(ops)?;
    let completeness_residual = (&total - &HermitianOperator::identity(d)).norm();
    let is_povm = positivity_residual <= tol && completeness_residual <= tol;

    let g = gram_matrix(ops);
    let span_rank = psd_rank(&g);
    let is_ic = span_rank == d * d;

    let (a_prime, b_prime, symmetry_residual, is_gsic) = if n == d * d {
        let (a, b, worst) = fit_symmetry(&g);
        let ok = is_povm && is_ic && worst <= tol && a > b;
        (Some(a), Some(b), Some(worst), ok)
    } else {
        (None, None, None, false)
    };
    let df = d as f64;
    let is_sic =
        is_gsic && all_rank_one && a_prime.is_some_and(|a| (a - 1.0 / (df * df)).abs() <= tol);

    Ok(PovmValidationReport {
        dim: d,
        count: n,
        is_povm,
        is_ic,
        is_gsic,
        is_sic,
        span_rank,
        positivity_residual,
        completeness_residual,
        a_prime,
        b_prime,
        symmetry_residual,
        all_rank_one,
    })
}

/// `sum_i (tr P_i^2 / (tr P_i)^2) (tr P_i / d)`.
pub fn average_purity(povm: &[HermitianOperator]) -> Result<f64> {
    let first = povm.first().ok_or(Error::Count {
        expected: 1,
        actual: 0,
    })?;
    let df = first.dim() as f64;
    let mut total = 0.0;
    for (i, p) in povm.iter().enumerate() {
        let tr = p.trace();
        if tr.abs() < 1e-15 {
            return Err(Error::DegenerateElement(i));
        }
        total += p.norm_sqr() / tr / df;
    }
    Ok(total)
}

/// Closed-form average purity `((d^2 - 1) lambda^2 + 1)/d` of a GSIC POVM.
pub fn gsic_average_purity(lambda: f64, d: usize) -> f64 {
    let df = d as f64;
    ((df * df - 1.0) * lambda * lambda + 1.0) / df
}
