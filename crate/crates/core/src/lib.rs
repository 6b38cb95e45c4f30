//! Complete orthogonal bases (COBs) of Hermitian operators and the general SIC
//! POVMs they induce.
//!
//! A COB is a set of `d^2` Hermitian operators `A_i` with `tr(A_i A_j) = delta_ij / d`
//! and `sum_i A_i = I`. Mixing it with the maximally mixed state,
//! `G_i = lambda A_i + (1 - lambda) I / d^2`, gives a GSIC POVM whenever
//! `lambda <= lambda*`, and a SIC POVM exactly when `lambda* = 1/sqrt(d+1)`.
//!
//! ```
//! use gsic_core::{construction2, gell_mann_basis, spectral_profile};
//!
//! let cob = construction2(&gell_mann_basis(2).unwrap()).unwrap();
//! let p = spectral_profile(&cob);
//! assert!((p.lambda_star - 1.0 / 3f64.sqrt()).abs() < 1e-12);
//! ```

pub mod cob;
pub mod constructions;
pub mod error;
pub mod gsic;
pub mod io;
pub mod operator;
pub mod random;
pub mod tomography;

pub use cob::{
    cob_residuals, min_eigenvalue_bound, negativity_oracle, optimal_lambda, quasiprobabilities,
    sample_trace_constrained_tuple, sic_criterion, sic_spectrum, sic_trace_targets,
    spectral_profile, state_negativity, validate_cob, Cob, CobResiduals, SicCriterionReport,
    SpectralProfile,
};
pub use constructions::{
    construction1, construction2, construction2_gram_schmidt, construction3, covariant_cob,
    known_sic_fiducial, line_index, mub_prime, mus_prime, weyl_heisenberg, MubSet, MusSet,
    OrthogonalMatrix, WeylHeisenbergSet,
};
pub use error::{Error, Result};
pub use gsic::{
    average_purity, cob_to_gsic, gsic_constants, gsic_to_cob, lambda_from_constants, validate_povm,
    GsicPovm, PovmValidationReport,
};
pub use io::{AnalysisRecord, OperatorSetFile, SetKind};
pub use operator::{
    eig_hermitian, gell_mann_basis, gram_matrix, gram_schmidt_operators, hs_inner, CMatrix,
    ComplexVector, HermitianOperator, OperatorBasis,
};
pub use tomography::{
    canonical_dual, gsic_max_mse, scaled_mse, simulate_tomography, zhu_bound, DualFrame,
    TomographyReport,
};
