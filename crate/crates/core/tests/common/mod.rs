//! Matrices transcribed from published worked examples, plus small helpers.
#![allow(dead_code)]

use gsic_core::{ComplexVector, HermitianOperator, MubSet, MusSet};
use nalgebra::DMatrix;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hermitian matrix from its diagonal and strict upper triangle (row-major).
pub fn herm(diag: &[f64], upper: &[Complex64]) -> HermitianOperator {
    let d = diag.len();
    let mut m = DMatrix::from_element(d, d, c(0.0, 0.0));
    let mut it = upper.iter();
    for r in 0..d {
        m[(r, r)] = c(diag[r], 0.0);
        for col in r + 1..d {
            let z = *it.next().expect("upper triangle too short");
            m[(r, col)] = z;
            m[(col, r)] = z.conj();
        }
    }
    assert!(it.next().is_none(), "upper triangle too long");
    HermitianOperator::new(m).unwrap()
}

pub fn max_dev(a: &[HermitianOperator], b: &[HermitianOperator]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x.max_abs_diff(y))
        .fold(0.0, f64::max)
}

/// The `+-1/2` orthogonal matrix used with the Pauli basis.
pub fn half_orthogonal() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.5, 0.5, 0.5, 0.5, //
            0.5, -0.5, 0.5, -0.5, //
            0.5, 0.5, -0.5, -0.5, //
            0.5, -0.5, -0.5, 0.5,
        ],
    )
}

/// COB from the `+-1/2` orthogonal matrix and the Pauli basis.
pub fn ex_const1() -> Vec<HermitianOperator> {
    vec![
        herm(&[0.5, 0.0], &[c(0.25, -0.25)]),
        herm(&[0.0, 0.5], &[c(-0.25, -0.25)]),
        herm(&[0.0, 0.5], &[c(0.25, 0.25)]),
        herm(&[0.5, 0.0], &[c(-0.25, 0.25)]),
    ]
}

/// Construction 2 on the Pauli basis, `d = 2`.
pub fn c2_d2() -> Vec<HermitianOperator> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    let off = c(-1.0 / (4.0 * s3), 1.0 / (2.0 * s6));
    vec![
        herm(&[0.25 - 1.0 / (2.0 * s2), 0.25 + 1.0 / (2.0 * s2)], &[off]),
        herm(&[0.25, 0.25], &[c(s3 / 4.0, 0.0)]),
        herm(&[0.25, 0.25], &[c(-1.0 / (4.0 * s3), -1.0 / s6)]),
        herm(&[0.25 + 1.0 / (2.0 * s2), 0.25 - 1.0 / (2.0 * s2)], &[off]),
    ]
}

/// Canonical SIC POVM from [`c2_d2`].
pub fn canonical_sic_d2() -> Vec<HermitianOperator> {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let t = 1.0 / 12.0;
    vec![
        herm(&[(3.0 - s6) * t, (3.0 + s6) * t], &[c(-t, s2 * t)]),
        herm(&[0.25, 0.25], &[c(0.25, 0.0)]),
        herm(&[0.25, 0.25], &[c(-t, -2.0 * s2 * t)]),
        herm(&[(3.0 + s6) * t, (3.0 - s6) * t], &[c(-t, s2 * t)]),
    ]
}

/// SIC POVM from Construction 3 with the Pauli MUBs.
pub fn c3_sic_d2() -> Vec<HermitianOperator> {
    let s3 = 3f64.sqrt();
    let k = 1.0 / (4.0 * s3);
    let hi = (1.0 + s3) * k;
    let lo = (s3 - 1.0) * k;
    vec![
        herm(&[hi, lo], &[c(k, -k)]),
        herm(&[lo, hi], &[c(k, k)]),
        herm(&[lo, hi], &[c(-k, -k)]),
        herm(&[hi, lo], &[c(-k, k)]),
    ]
}

/// Construction 2 on the generalized Gell-Mann basis, `d = 3`.
pub fn c2_d3() -> Vec<HermitianOperator> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let s7 = 7f64.sqrt();
    let s15 = 15f64.sqrt();
    let n = 1.0 / 9.0;
    let p = c(-7.0, 3.0 * s7) / (84.0 * s3);
    let q = c(-1.0 / (6.0 * s7), 1.0 / (6.0 * s5));
    let r = c(-s15, 5.0) / (30.0 * s2);
    let z = c(0.0, 0.0);
    vec![
        herm(&[-2.0 * n, n, 4.0 * n], &[p, q, r]),
        herm(&[n, n, n], &[c(2.0 / (3.0 * s3), 0.0), z, z]),
        herm(&[n, n, n], &[c(-1.0, -3.0 * s7) / (12.0 * s3), z, z]),
        herm(&[n, n, n], &[p, c(1.0 / s7, 0.0), z]),
        herm(&[n, n, n], &[p, c(-1.0 / (6.0 * s7), -s5 / 6.0), z]),
        herm(&[n, n, n], &[p, q, c((2.0f64 / 15.0).sqrt(), 0.0)]),
        herm(&[n, n, n], &[p, q, -c(s15, 15.0) / (30.0 * s2)]),
        herm(&[4.0 * n, -2.0 * n, n], &[p, q, r]),
        herm(&[n, 4.0 * n, -2.0 * n], &[p, q, r]),
    ]
}

/// Pauli eigenbases `x`, `y`, `z`, listed explicitly.
pub fn pauli_mubs() -> MubSet {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: Complex64, b: Complex64| ComplexVector::new(vec![a, b]).unwrap();
    MubSet::new(vec![
        vec![v(c(s, 0.0), c(s, 0.0)), v(c(s, 0.0), c(-s, 0.0))],
        vec![v(c(s, 0.0), c(0.0, s)), v(c(s, 0.0), c(0.0, -s))],
        vec![v(c(1.0, 0.0), c(0.0, 0.0)), v(c(0.0, 0.0), c(1.0, 0.0))],
    ])
    .unwrap()
}

/// Striations `{1,2},{3,4} / {1,3},{2,4} / {1,4},{2,3}` with zero-based points.
pub fn square_mus() -> MusSet {
    MusSet::new(vec![
        vec![vec![0, 1], vec![2, 3]],
        vec![vec![0, 2], vec![1, 3]],
        vec![vec![0, 3], vec![1, 2]],
    ])
    .unwrap()
}
