//! Linear state tomography with an informationally complete POVM.
//!
//! The canonical dual frame `Theta_i` reconstructs any state from its outcome
//! probabilities, `rho = sum_i p_i Theta_i`. Replacing `p_i` by observed
//! frequencies gives the linear estimator whose scaled mean squared error is
//! `E(rho) = sum_i p_i tr Theta_i^2 - tr rho^2`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cob::optimal_lambda;
use crate::error::{Error, Result};
use crate::gsic::{average_purity, lambda_from_constants, psd_rank, validate_povm, LAMBDA_SLACK};
use crate::operator::{eig_hermitian, gell_mann_basis, gram_matrix, HermitianOperator};

/// Frame condition number above which a warning is logged.
pub const CONDITION_WARN: f64 = 1e12;

/// Tolerance on the trace and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-10;

/// Tolerance on `sum_i p_i = 1` before sampling.
pub const PROBABILITY_TOL: f64 = 1e-9;

/// Dual operators `Theta_i` paired with the elements of a source POVM.
#[derive(Clone, Debug)]
pub struct DualFrame {
    dim: usize,
    elements: Vec<HermitianOperator>,
}

impl DualFrame {
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

    /// `sum_i weights[i] Theta_i`.
    pub fn reconstruct(&self, weights: &[f64]) -> Result<HermitianOperator> {
        HermitianOperator::linear_combination(weights, &self.elements)
    }
}

/// Canonical dual: `Theta_i = F^{-1}(P_i)` with the frame map
/// `F(C) = sum_j <<P_j, C>> P_j`.
///
/// The frame map is inverted on its range; a rank below `d^2` means the POVM is not
/// informationally complete.
pub fn canonical_dual(povm: &[HermitianOperator]) -> Result<DualFrame> {
    let first = povm.first().ok_or(Error::Count {
        expected: 1,
        actual: 0,
    })?;
    let d = first.dim();
    let n = d * d;
    let basis = gell_mann_basis(d)?;
    let coords = povm
        .iter()
        .map(|p| basis.coefficients(p).map(DVector::from_vec))
        .collect::<Result<Vec<_>>>()?;
    let v = DMatrix::from_columns(&coords);
    let frame = &v * v.transpose();
    let rank = psd_rank(&frame);
    if rank < n {
        return Err(Error::NotInformationallyComplete { rank, required: n });
    }
    let eig = SymmetricEigen::new(frame);
    let max = eig.eigenvalues.max();
    let min = eig.eigenvalues.min();
    if min <= 0.0 || max / min > CONDITION_WARN {
        log::warn!(
            "frame operator is ill-conditioned (condition number {:e})",
            max / min.max(f64::MIN_POSITIVE)
        );
    }
    let inv_vals = eig
        .eigenvalues
        .map(|x| if x > max * 1e-14 { 1.0 / x } else { 0.0 });
    let inverse =
        &eig.eigenvectors * DMatrix::from_diagonal(&inv_vals) * eig.eigenvectors.transpose();
    let elements = coords
        .iter()
        .map(|c| basis.synthesize((&inverse * c).as_slice()))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualFrame { dim: d, elements })
}

/// Checks that `rho` is a density matrix within [`STATE_TOL`].
pub fn check_state(rho: &HermitianOperator) -> Result<()> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
    }
    let min = eig_hermitian(rho).min();
    if min < -STATE_TOL {
        return Err(Error::InvalidState(format!(
            "state has negative eigenvalue {min:e}"
        )));
    }
    Ok(())
}

fn check_pair(povm: &[HermitianOperator], dual: &DualFrame, rho: &HermitianOperator) -> Result<()> {
    if povm.len() != dual.len() {
        return Err(Error::Count {
            expected: povm.len(),
            actual: dual.len(),
        });
    }
    if rho.dim() != dual.dim() || povm.iter().any(|p| p.dim() != rho.dim()) {
        return Err(Error::Dimension(format!(
            "state of dimension {} with a dimension-{} frame",
            rho.dim(),
            dual.dim()
        )));
    }
    Ok(())
}

/// Outcome probabilities `p_i = tr P_i rho`.
pub fn probabilities(povm: &[HermitianOperator], rho: &HermitianOperator) -> Vec<f64> {
    povm.iter().map(|p| p.expectation(rho)).collect()
}

/// `sum_i p_i tr Theta_i^2 - tr rho^2`.
pub fn scaled_mse(
    povm: &[HermitianOperator],
    dual: &DualFrame,
    rho: &HermitianOperator,
) -> Result<f64> {
    check_pair(povm, dual, rho)?;
    check_state(rho)?;
    let p = probabilities(povm, rho);
    let weighted: f64 = p
        .iter()
        .zip(dual.elements())
        .map(|(pi, th)| pi * th.norm_sqr())
        .sum();
    Ok(weighted - rho.norm_sqr())
}

/// Maximum of [`scaled_mse`] over the unitary orbit `{U rho U^dagger}`.
///
/// `E` is affine in the state through `tr(Q rho)` with `Q = sum_i tr(Theta_i^2) P_i`,
/// and the maximum of `tr(Q U rho U^dagger)` over unitaries pairs the eigenvalues of
/// `Q` and `rho` in the same order.
pub fn max_scaled_mse_over_orbit(
    povm: &[HermitianOperator],
    dual: &DualFrame,
    rho: &HermitianOperator,
) -> Result<f64> {
    check_pair(povm, dual, rho)?;
    check_state(rho)?;
    let weights: Vec<f64> = dual
        .elements()
        .iter()
        .map(HermitianOperator::norm_sqr)
        .collect();
    let q = HermitianOperator::linear_combination(&weights, povm)?;
    let qs = eig_hermitian(&q).values;
    let rs = eig_hermitian(rho).values;
    let top: f64 = qs.iter().zip(&rs).map(|(a, b)| a * b).sum();
    Ok(top - rho.norm_sqr())
}

fn check_purity(d: usize, purity: f64) -> Result<()> {
    let lo = 1.0 / d as f64;
    if !(purity >= lo - 1e-12 && purity <= 1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "state purity {purity} outside [1/d, 1] = [{lo}, 1]"
        )));
    }
    Ok(())
}

/// Worst-case scaled MSE of a GSIC POVM with mixing parameter `lambda`:
/// `(d^2 - 1)/(d lambda^2) + 1/d - tr rho^2`.
pub fn gsic_max_mse(lambda: f64, d: usize, state_purity: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Range(format!("dimension must be >= 2, got {d}")));
    }
    let max = optimal_lambda(d);
    if !(lambda > 0.0 && lambda <= max + LAMBDA_SLACK) {
        return Err(Error::Range(format!(
            "lambda {lambda} outside (0, 1/sqrt(d+1)] = (0, {max}]"
        )));
    }
    check_purity(d, state_purity)?;
    let df = d as f64;
    Ok((df * df - 1.0) / (df * lambda * lambda) + 1.0 / df - state_purity)
}

/// Lower bound `(d^2 - 1)^2 / (d^2 p - d) + 1/d - tr rho^2` on the worst-case scaled
/// MSE of any minimal IC POVM with average purity `p`.
pub fn zhu_bound(d: usize, avg_purity: f64, state_purity: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Range(format!("dimension must be >= 2, got {d}")));
    }
    let df = d as f64;
    if !(avg_purity > 1.0 / df && avg_purity <= 1.0 + 1e-12) {
        return Err(Error::Range(format!(
            "average purity {avg_purity} outside (1/d, 1] = ({}, 1]",
            1.0 / df
        )));
    }
    check_purity(d, state_purity)?;
    let denom = df * df * avg_purity - df;
    Ok((df * df - 1.0).powi(2) / denom + 1.0 / df - state_purity)
}

/// Closed-form, bound, and Monte Carlo values for one POVM and one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TomographyReport {
    pub dim: usize,
    pub state_purity: f64,
    pub avg_purity: f64,
    /// `E(rho)` from the dual frame.
    pub scaled_mse: f64,
    /// Worst case over the unitary orbit of the state.
    pub max_mse_over_orbit: f64,
    /// Recovered mixing parameter when the POVM is a GSIC POVM.
    pub lambda: Option<f64>,
    /// Closed-form worst case for GSIC POVMs.
    pub closed_form_max: Option<f64>,
    pub zhu_bound: f64,
    /// Mean over trials of `N ||rho - rho_hat||^2`.
    pub empirical_mse: f64,
    pub standard_error: f64,
    pub copies: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Mean and standard error of `N ||rho - rho_hat||^2` over independent trials.
///
/// Trial `t` samples from its own ChaCha stream `(seed, t)`, so the result does not
/// depend on how trials are scheduled across threads.
pub fn monte_carlo_mse(
    povm: &[HermitianOperator],
    dual: &DualFrame,
    rho: &HermitianOperator,
    copies: usize,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if copies == 0 || trials == 0 {
        return Err(Error::Range("copies and trials must be >= 1".into()));
    }
    check_pair(povm, dual, rho)?;
    check_state(rho)?;
    let p = probabilities(povm, rho);
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::InvalidState(format!(
            "outcome probabilities sum to {total}, expected 1"
        )));
    }
    if let Some(neg) = p.iter().copied().find(|&x| x < -PROBABILITY_TOL) {
        return Err(Error::InvalidState(format!(
            "negative outcome probability {neg}"
        )));
    }
    let mut cdf: Vec<f64> = p
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x.max(0.0);
            Some(*acc)
        })
        .collect();
    let last = *cdf.last().expect("nonempty");
    cdf.iter_mut().for_each(|c| *c /= last);
    let theta_gram = gram_matrix(dual.elements());
    let n = p.len();
    let nf = copies as f64;

    let errors: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let mut counts = vec![0usize; n];
            for _ in 0..copies {
                let u: f64 = rng.random();
                let idx = cdf.partition_point(|&c| c <= u).min(n - 1);
                counts[idx] += 1;
            }
            let delta =
                DVector::from_iterator(n, p.iter().zip(&counts).map(|(pi, &k)| pi - k as f64 / nf));
            nf * delta.dot(&(&theta_gram * &delta))
        })
        .collect();

    let tf = trials as f64;
    let mean = errors.iter().sum::<f64>() / tf;
    let var = if trials > 1 {
        errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (tf - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / tf).sqrt()))
}

/// Runs the Monte Carlo estimate and collects the analytic values alongside it.
pub fn simulate_tomography(
    povm: &[HermitianOperator],
    dual: &DualFrame,
    rho: &HermitianOperator,
    copies: usize,
    trials: usize,
    seed: u64,
) -> Result<TomographyReport> {
    let (empirical_mse, standard_error) = monte_carlo_mse(povm, dual, rho, copies, trials, seed)?;
    let d = rho.dim();
    let state_purity = rho.norm_sqr();
    let avg_purity = average_purity(povm)?;
    let report = validate_povm(povm, 1e-9)?;
    let lambda = if report.is_gsic {
        lambda_from_constants(d, report.a_prime.unwrap(), report.b_prime.unwrap()).ok()
    } else {
        None
    };
    let closed_form_max = match lambda {
        Some(l) => Some(gsic_max_mse(
            l.min(optimal_lambda(d)),
            d,
            state_purity.clamp(1.0 / d as f64, 1.0),
        )?),
        None => None,
    };
    Ok(TomographyReport {
        dim: d,
        state_purity,
        avg_purity,
        scaled_mse: scaled_mse(povm, dual, rho)?,
        max_mse_over_orbit: max_scaled_mse_over_orbit(povm, dual, rho)?,
        lambda,
        closed_form_max,
        zhu_bound: zhu_bound(d, avg_purity, state_purity.clamp(1.0 / d as f64, 1.0))?,
        empirical_mse,
        standard_error,
        copies,
        trials,
        seed,
    })
}

/// Draws `copies` outcomes once and returns the frequency estimate `sum_i f_i Theta_i`.
pub fn estimate_state<R: Rng + ?Sized>(
    povm: &[HermitianOperator],
    dual: &DualFrame,
    rho: &HermitianOperator,
    copies: usize,
    rng: &mut R,
) -> Result<HermitianOperator> {
    check_pair(povm, dual, rho)?;
    if copies == 0 {
        return Err(Error::Range("copies must be >= 1".into()));
    }
    let p = probabilities(povm, rho);
    let mut counts = vec![0.0; p.len()];
    for _ in 0..copies {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut idx = p.len() - 1;
        for (i, pi) in p.iter().enumerate() {
            acc += pi.max(0.0);
            if u < acc {
                idx = i;
                break;
            }
        }
        counts[idx] += 1.0;
    }
    let freqs: Vec<f64> = counts.iter().map(|c| c / copies as f64).collect();
    dual.reconstruct(&freqs)
}
