use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::random_real_vector;

/// Tolerance for accepting a real matrix as orthogonal with constant first row.
pub const ORTHOGONAL_TOL: f64 = 1e-10;

/// A real orthogonal `D x D` matrix whose first row is constant `1/sqrt(D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMatrix {
    entries: DMatrix<f64>,
}

impl OrthogonalMatrix {
    /// Accepts any matrix meeting both constraints within [`ORTHOGONAL_TOL`].
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::Dimension(format!(
                "orthogonal matrix must be square and nonempty, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        let orth = (&entries * entries.transpose() - DMatrix::identity(n, n)).amax();
        if orth > ORTHOGONAL_TOL {
            return Err(Error::Constraint(format!(
                "matrix is not orthogonal: max |O O^T - I| = {orth:e}"
            )));
        }
        let target = 1.0 / (n as f64).sqrt();
        let row = entries
            .row(0)
            .iter()
            .map(|x| (x - target).abs())
            .fold(0.0, f64::max);
        if row > ORTHOGONAL_TOL {
            return Err(Error::Constraint(format!(
                "first row must equal 1/sqrt({n}) = {target}: max deviation {row:e}"
            )));
        }
        Ok(Self { entries })
    }

    /// Deterministic completion: Gram-Schmidt over `(1,...,1), e_0, e_1, ...`,
    /// dropping the one standard vector that becomes dependent. Rows are the outputs.
    pub fn fixed_row(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Dimension("size must be >= 1".into()));
        }
        let seeds = std::iter::once(DVector::from_element(size, 1.0)).chain((0..size).map(|i| {
            let mut e = DVector::zeros(size);
            e[i] = 1.0;
            e
        }));
        Self::complete(size, seeds)
    }

    /// Random completion: Gram-Schmidt over `(1,...,1)` followed by Gaussian vectors.
    pub fn random_fixed_row<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Result<Self> {
        if size == 0 {
            return Err(Error::Dimension("size must be >= 1".into()));
        }
        let mut gaussians = Vec::with_capacity(size);
        for _ in 0..size * 2 {
            gaussians.push(random_real_vector(size, rng));
        }
        let seeds = std::iter::once(DVector::from_element(size, 1.0)).chain(gaussians);
        Self::complete(size, seeds)
    }

    fn complete(size: usize, seeds: impl Iterator<Item = DVector<f64>>) -> Result<Self> {
        let mut rows: Vec<DVector<f64>> = Vec::with_capacity(size);
        for x in seeds {
            if rows.len() == size {
                break;
            }
            let mut v = x.clone();
            for _pass in 0..2 {
                for q in &rows {
                    let p = q.dot(&v);
                    v.axpy(-p, q, 1.0);
                }
            }
            let n = v.norm();
            if n > 1e-10 * x.norm().max(1.0) {
                rows.push(v / n);
            }
        }
        if rows.len() < size {
            return Err(Error::RankDeficient {
                index: rows.len(),
                residual: 0.0,
            });
        }
        let m = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
        Self::new(m)
    }

    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_size_one() {
        let o = OrthogonalMatrix::fixed_row(1).unwrap();
        assert_eq!(o.entries(), &DMatrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn size_four_has_half_first_row() {
        let o = OrthogonalMatrix::fixed_row(4).unwrap();
        for j in 0..4 {
            assert!((o.get(0, j) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn fixed_and_random_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [1, 2, 4, 9, 16, 25, 36, 81] {
            for o in [
                OrthogonalMatrix::fixed_row(n).unwrap(),
                OrthogonalMatrix::random_fixed_row(n, &mut rng).unwrap(),
            ] {
                let r = (o.entries() * o.entries().transpose() - DMatrix::identity(n, n)).amax();
                assert!(r < 1e-12, "n={n}: {r}");
            }
        }
    }

    #[test]
    fn hadamard_type_matrix_accepted() {
        #[rustfmt::skip]
        let m = DMatrix::from_row_slice(4, 4, &[
            0.5, 0.5, 0.5, 0.5,
            0.5, -0.5, 0.5, -0.5,
            0.5, 0.5, -0.5, -0.5,
            0.5, -0.5, -0.5, 0.5,
        ]);
        assert!(OrthogonalMatrix::new(m).is_ok());
    }

    #[test]
    fn wrong_first_row_rejected() {
        let m = DMatrix::<f64>::identity(4, 4);
        assert!(matches!(
            OrthogonalMatrix::new(m),
            Err(Error::Constraint(_))
        ));
        let m = DMatrix::from_element(2, 2, 1.0 / 2f64.sqrt());
        assert!(matches!(
            OrthogonalMatrix::new(m),
            Err(Error::Constraint(_))
        ));
    }
}
