mod common;

use common::*;
use gsic_core::cob::sic_criterion;
use gsic_core::constructions::{covariant_cob, fiducial_operator_from_vector, line_sum_residual};
use gsic_core::{
    cob_to_gsic, construction1, construction2, construction3, gell_mann_basis, known_sic_fiducial,
    mub_prime, mus_prime, spectral_profile, weyl_heisenberg, OrthogonalMatrix,
};

#[test]
fn construction1_half_matrix() {
    let o = OrthogonalMatrix::new(half_orthogonal()).unwrap();
    let cob = construction1(&gell_mann_basis(2).unwrap(), &o).unwrap();
    assert!(max_dev(cob.elements(), &ex_const1()) < 1e-15);
}

#[test]
fn construction2_pauli() {
    let cob = construction2(&gell_mann_basis(2).unwrap()).unwrap();
    assert!(max_dev(cob.elements(), &c2_d2()) < 1e-15);
    let p = spectral_profile(&cob);
    assert!((p.lambda_star - 1.0 / 3f64.sqrt()).abs() < 1e-14);
    let g = cob_to_gsic(&cob, p.lambda_star).unwrap();
    assert!(max_dev(g.elements(), &canonical_sic_d2()) < 1e-14);
}

#[test]
fn construction2_gell_mann_d3() {
    let cob = construction2(&gell_mann_basis(3).unwrap()).unwrap();
    assert!(max_dev(cob.elements(), &c2_d3()) < 1e-14);
}

#[test]
fn construction3_pauli_mubs() {
    let mubs = pauli_mubs();
    let mus = square_mus();
    let cob = construction3(&mubs, &mus).unwrap();
    assert!(line_sum_residual(&cob, &mubs, &mus).unwrap() < 1e-15);
    let g = cob_to_gsic(&cob, spectral_profile(&cob).lambda_star).unwrap();
    assert!(max_dev(g.elements(), &c3_sic_d2()) < 1e-14);

    // same set as the construction 1 example, with the middle two elements swapped
    let mut expected = ex_const1();
    expected.swap(1, 2);
    assert!(max_dev(cob.elements(), &expected) < 1e-15);

    // the generated prime-dimension fixtures agree with the explicit ones
    let generated = construction3(&mub_prime(2).unwrap(), &mus_prime(2).unwrap()).unwrap();
    assert!(generated.max_abs_diff(&cob) < 1e-15);
}

#[test]
fn eigenvalues_of_any_d2_cob() {
    // every qubit COB element has spectrum (1 +- sqrt 3)/4
    for ops in [ex_const1(), c2_d2()] {
        for a in &ops {
            let e = gsic_core::eig_hermitian(a);
            assert!((e.max() - (1.0 + 3f64.sqrt()) / 4.0).abs() < 1e-14);
            assert!((e.min() - (1.0 - 3f64.sqrt()) / 4.0).abs() < 1e-14);
        }
    }
}

#[test]
fn covariant_sic_cobs() {
    for d in [2, 3] {
        let wh = weyl_heisenberg(d).unwrap();
        let a = fiducial_operator_from_vector(&known_sic_fiducial(d).unwrap());
        let cob = covariant_cob(&a, &wh, 1e-10).unwrap();
        let r = sic_criterion(&cob, 1e-8);
        assert!(r.is_sic_capable, "d = {d}: gap {}", r.lambda_star_gap);
        for res in r.trace_power_residuals {
            assert!(res < 1e-12);
        }
    }
}
