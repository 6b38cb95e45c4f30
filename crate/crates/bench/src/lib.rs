//! Inputs shared by the benchmarks.

use gsic_core::{cob_to_gsic, construction2, gell_mann_basis, spectral_profile, Cob, GsicPovm};

pub fn c2_cob(d: usize) -> Cob {
    construction2(&gell_mann_basis(d).expect("d >= 1")).expect("construction 2 succeeds")
}

/// Canonical GSIC POVM of the construction 2 COB.
pub fn c2_gsic(d: usize) -> GsicPovm {
    let cob = c2_cob(d);
    let lambda = spectral_profile(&cob).lambda_star;
    cob_to_gsic(&cob, lambda).expect("lambda* is admissible")
}
