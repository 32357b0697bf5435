//! Growable lower-triangular Cholesky factor.
//!
//! Rows are appended one at a time as support nodes join the system, so each
//! append costs one forward substitution against the existing factor instead
//! of a full refactorization. Storage is packed row-major: row `i` holds `i + 1`
//! entries starting at offset `i (i + 1) / 2`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CholeskyState {
    order: usize,
    factor: Vec<f64>,
}

#[inline]
fn row_offset(i: usize) -> usize {
    i * (i + 1) / 2
}

impl CholeskyState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(order: usize) -> Self {
        Self {
            order: 0,
            factor: Vec::with_capacity(row_offset(order)),
        }
    }

    /// Number of factored rows.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Row `i` of `L` up to and including the diagonal.
    pub fn row(&self, i: usize) -> &[f64] {
        let start = row_offset(i);
        &self.factor[start..start + i + 1]
    }

    /// Entry `L[i][j]`; zero above the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i {
            0.0
        } else {
            self.factor[row_offset(i) + j]
        }
    }

    /// Extends the factor by the next row of the symmetric matrix.
    ///
    /// `new_row` holds the matrix entries of the new row against every prior
    /// row, followed by its diagonal. On failure the state is left untouched.
    pub fn append(&mut self, new_row: &[f64]) -> Result<()> {
        let n = self.order;
        if new_row.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                actual: new_row.len(),
            });
        }
        let start = self.factor.len();
        self.factor.reserve(n + 1);
        let mut sum_sq = 0.0;
        for j in 0..n {
            let row_j = &self.factor[row_offset(j)..row_offset(j) + j + 1];
            let partial = &self.factor[start..start + j];
            let dot: f64 = partial.iter().zip(&row_j[..j]).map(|(a, b)| a * b).sum();
            let l = (new_row[j] - dot) / row_j[j];
            sum_sq += l * l;
            self.factor.push(l);
        }
        let pivot = new_row[n] - sum_sq;
        if !pivot.is_finite() || pivot <= 0.0 {
            self.factor.truncate(start);
            return Err(Error::NotPositiveDefinite { row: n, pivot });
        }
        self.factor.push(pivot.sqrt());
        self.order += 1;
        Ok(())
    }

    /// Solves `L Lᵀ x = rhs` for each right-hand side in place.
    pub fn solve_in_place(&self, rhs: &mut [&mut [f64]]) -> Result<()> {
        let n = self.order;
        for b in rhs.iter() {
            if b.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: b.len(),
                });
            }
        }
        for b in rhs.iter_mut() {
            // L y = b
            for i in 0..n {
                let row = self.row(i);
                let dot: f64 = row[..i].iter().zip(&b[..i]).map(|(l, y)| l * y).sum();
                b[i] = (b[i] - dot) / row[i];
            }
            // Lᵀ x = y, sweeping rows of L from the bottom.
            for i in (0..n).rev() {
                let row = self.row(i);
                let xi = b[i] / row[i];
                b[i] = xi;
                for (bk, lik) in b[..i].iter_mut().zip(&row[..i]) {
                    *bk -= lik * xi;
                }
            }
        }
        Ok(())
    }

    /// Dense `L Lᵀ`, for checks.
    #[allow(clippy::needless_range_loop)]
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let n = self.order;
        let mut out = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v: f64 = self.row(i)[..=j]
                    .iter()
                    .zip(&self.row(j)[..=j])
                    .map(|(a, b)| a * b)
                    .sum();
                out[i][j] = v;
                out[j][i] = v;
            }
        }
        out
    }
}

/// Weight vectors for the three displacement components.
pub fn solve_weights(
    state: &CholeskyState,
    dx: &[f64],
    dy: &[f64],
    dz: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let (mut wx, mut wy, mut wz) = (dx.to_vec(), dy.to_vec(), dz.to_vec());
    state.solve_in_place(&mut [&mut wx, &mut wy, &mut wz])?;
    Ok((wx, wy, wz))
}
