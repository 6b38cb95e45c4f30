//! Complete sets of mutually unbiased bases (MUBs) and mutually unbiased
//! striations (MUSs) for prime dimensions.
//!
//! Indices are zero-based throughout: bases and striations `J in 0..=d`, vectors
//! and lines `i in 0..d`, points `k in 0..d^2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{c, CMatrix, ComplexVector};

pub const MUB_TOL: f64 = 1e-10;

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    (2..)
        .take_while(|p| p * p <= n)
        .all(|p| !n.is_multiple_of(p))
}

/// `d + 1` orthonormal bases with pairwise overlaps `1/d`.
#[derive(Clone, Debug)]
pub struct MubSet {
    dim: usize,
    bases: Vec<Vec<ComplexVector>>,
}

impl MubSet {
    /// Validates completeness (`d + 1` bases of `d` vectors) and unbiasedness.
    pub fn new(bases: Vec<Vec<ComplexVector>>) -> Result<Self> {
        let dim = bases
            .first()
            .and_then(|b| b.first())
            .map(ComplexVector::dim)
            .ok_or_else(|| Error::Constraint("empty MUB set".into()))?;
        if bases.len() != dim + 1 {
            return Err(Error::Constraint(format!(
                "complete MUB set needs {} bases, got {}",
                dim + 1,
                bases.len()
            )));
        }
        for b in &bases {
            if b.len() != dim || b.iter().any(|v| v.dim() != dim) {
                return Err(Error::Constraint(format!(
                    "every basis must hold {dim} vectors of dimension {dim}"
                )));
            }
        }
        let inv_d = 1.0 / dim as f64;
        for (ja, ba) in bases.iter().enumerate() {
            for (jb, bb) in bases.iter().enumerate().skip(ja) {
                for (ia, u) in ba.iter().enumerate() {
                    for (ib, v) in bb.iter().enumerate() {
                        let target = if ja == jb {
                            if ia == ib {
                                1.0
                            } else {
                                0.0
                            }
                        } else {
                            inv_d
                        };
                        let got = u.inner(v).norm_sqr();
                        if (got - target).abs() > MUB_TOL {
                            return Err(Error::Constraint(format!(
                                "|<{ja},{ia}|{jb},{ib}>|^2 = {got}, expected {target}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { dim, bases })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[Vec<ComplexVector>] {
        &self.bases
    }

    pub fn vector(&self, basis: usize, index: usize) -> &ComplexVector {
        &self.bases[basis][index]
    }

    /// Basis `J` as a unitary matrix whose columns are its vectors.
    pub fn basis_matrix(&self, basis: usize) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, d, |r, col| self.bases[basis][col].entries()[r])
    }
}

/// Complete MUB set for prime `d`.
///
/// Odd `d`: bases `a = 0..d-1` with components `w^(a m^2 + i m) / sqrt(d)`,
/// `w = exp(2 pi i / d)`, followed by the computational basis. `d = 2`: the
/// eigenbases of `sigma_x`, `sigma_y`, `sigma_z` in that order.
pub fn mub_prime(d: usize) -> Result<MubSet> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut bases = Vec::with_capacity(d + 1);
    if d == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = |x: [Complex64; 2]| ComplexVector::new(x.to_vec()).expect("nonempty");
        bases.push(vec![b([c(s, 0.0), c(s, 0.0)]), b([c(s, 0.0), c(-s, 0.0)])]);
        bases.push(vec![b([c(s, 0.0), c(0.0, s)]), b([c(s, 0.0), c(0.0, -s)])]);
    } else {
        let norm = 1.0 / (d as f64).sqrt();
        for a in 0..d {
            let basis = (0..d)
                .map(|i| {
                    let comps = (0..d)
                        .map(|m| {
                            let phase = ((a * m * m + i * m) % d) as f64;
                            Complex64::from_polar(norm, 2.0 * PI * phase / d as f64)
                        })
                        .collect();
                    ComplexVector::new(comps).expect("nonempty")
                })
                .collect();
            bases.push(basis);
        }
    }
    bases.push((0..d).map(|i| ComplexVector::basis(d, i)).collect());
    MubSet::new(bases)
}

/// `d + 1` partitions of the `d^2` points into lines of `d` points, any two lines
/// from different striations meeting in exactly one point.
#[derive(Clone, Debug)]
pub struct MusSet {
    dim: usize,
    striations: Vec<Vec<Vec<usize>>>,
    /// `line_of[k][J]`
    line_of: Vec<Vec<usize>>,
}

impl MusSet {
    pub fn new(striations: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let dim = striations
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Constraint("empty MUS set".into()))?;
        let n = dim * dim;
        if dim < 2 || striations.len() != dim + 1 {
            return Err(Error::Constraint(format!(
                "complete MUS set needs {} striations of {dim} lines, got {}",
                dim + 1,
                striations.len()
            )));
        }
        let mut line_of = vec![vec![usize::MAX; dim + 1]; n];
        for (j, striation) in striations.iter().enumerate() {
            if striation.len() != dim {
                return Err(Error::Constraint(format!(
                    "striation {j} has {} lines, expected {dim}",
                    striation.len()
                )));
            }
            for (i, line) in striation.iter().enumerate() {
                if line.len() != dim {
                    return Err(Error::Constraint(format!(
                        "line ({j},{i}) has {} points, expected {dim}",
                        line.len()
                    )));
                }
                for &k in line {
                    if k >= n {
                        return Err(Error::Constraint(format!("point {k} out of range 0..{n}")));
                    }
                    if line_of[k][j] != usize::MAX {
                        return Err(Error::Constraint(format!(
                            "point {k} lies on two lines of striation {j}"
                        )));
                    }
                    line_of[k][j] = i;
                }
            }
        }
        // every point covered once per striation (counts above force a partition);
        // now check cross-striation intersections are single points
        for ja in 0..=dim {
            for jb in ja + 1..=dim {
                let mut counts = vec![0usize; dim * dim];
                for row in &line_of {
                    counts[row[ja] * dim + row[jb]] += 1;
                }
                if let Some(pos) = counts.iter().position(|&c| c != 1) {
                    return Err(Error::Constraint(format!(
                        "lines ({ja},{}) and ({jb},{}) meet in {} points",
                        pos / dim,
                        pos % dim,
                        counts[pos]
                    )));
                }
            }
        }
        Ok(Self {
            dim,
            striations,
            line_of,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn striations(&self) -> &[Vec<Vec<usize>>] {
        &self.striations
    }

    pub fn line(&self, striation: usize, index: usize) -> &[usize] {
        &self.striations[striation][index]
    }
}

/// Complete MUS set for prime `d` on the affine plane `Z_d x Z_d`.
///
/// Point `k = x d + y` is `(x, y)`. Striation 0 holds the vertical lines
/// `{(i, y)}`; striation `1 + s` holds the lines `{(x, s x + i mod d)}` of slope `s`.
pub fn mus_prime(d: usize) -> Result<MusSet> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension(d));
    }
    let mut striations = Vec::with_capacity(d + 1);
    striations.push(
        (0..d)
            .map(|i| (0..d).map(|y| i * d + y).collect())
            .collect(),
    );
    for slope in 0..d {
        striations.push(
            (0..d)
                .map(|i| (0..d).map(|x| x * d + (slope * x + i) % d).collect())
                .collect(),
        );
    }
    MusSet::new(striations)
}

/// The unique line of striation `striation` containing point `k`.
pub fn line_index(mus: &MusSet, k: usize, striation: usize) -> Option<usize> {
    mus.line_of.get(k)?.get(striation).copied()
}
