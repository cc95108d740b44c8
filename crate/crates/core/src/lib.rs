//! Robust principal component analysis with maximum correntropy power
//! iterations (MCPI).
//!
//! Standard PCA finds the eigenvectors of the scatter matrix `XᵀX`, which
//! makes every sample count quadratically and lets a handful of outliers
//! rotate the estimated components. MCPI instead maximises the expected
//! Gaussian correntropy between each sample and its projection. The
//! stationary condition is an eigenproblem on the correntropy-weighted
//! scatter `XᵀGX`, solved by alternating weight updates with power
//! iterations, while the kernel size is shrunk geometrically so the solver
//! starts from the PCA solution and moves towards the robust one.
//!
//! The crate is organised as:
//!
//! * [`linalg`]: Jacobi eigendecomposition, power iteration, null-space vector.
//! * [`correntropy`]: Gaussian kernel, per-sample weights, weighted scatter.
//! * [`mcpi`]: the component solvers, deflation bookkeeping and [`mcpi::fit`].
//! * [`datagen`]: seeded Gaussian samples with outlier replacement.
//! * [`metrics`]: alignment and reconstruction-error comparisons.
//! * [`cli`]: the `mcpi` command line (`fit`, `synth`, `demo`).
//!
//! ```
//! use correntropy_pca::datagen::{generate, ExperimentSpec};
//! use correntropy_pca::mcpi::{fit, McpiConfig};
//!
//! let mut spec = ExperimentSpec::reference();
//! spec.n = 200;
//! let data = generate(&spec).unwrap();
//! let result = fit(&data.samples, &McpiConfig::default()).unwrap();
//! assert_eq!(result.components.ncols(), 3);
//! ```

// NaN must fail these guards, so `!(x > 0.0)` is written on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod correntropy;
pub mod datagen;
mod error;
pub mod linalg;
pub mod mcpi;
pub mod metrics;

pub use error::{Error, Result};

use nalgebra::{DMatrix, DVector};

/// Dense column-major matrix used for every p×p operator in the crate.
pub type Matrix = DMatrix<f64>;
/// Dense column vector.
pub type Vector = DVector<f64>;

/// An n×p sample matrix, one observation per row.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(Matrix);

impl DataMatrix {
    pub fn new(samples: Matrix) -> Result<Self> {
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("data matrix"));
        }
        Ok(Self(samples))
    }

    /// Builds a data matrix from row-major storage.
    pub fn from_row_slice(n: usize, p: usize, values: &[f64]) -> Result<Self> {
        if values.len() != n * p {
            return Err(Error::DimensionMismatch {
                expected: n * p,
                found: values.len(),
            });
        }
        Self::new(Matrix::from_row_slice(n, p, values))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: bad.len(),
            });
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_slice(rows.len(), p, &flat)
    }

    /// Number of samples.
    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    /// Number of variables.
    pub fn p(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn row(&self, k: usize) -> Vector {
        self.0.row(k).transpose()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vector> + '_ {
        (0..self.n()).map(move |k| self.row(k))
    }

    /// Column means.
    pub fn mean(&self) -> Vector {
        let n = self.n().max(1) as f64;
        Vector::from_iterator(self.p(), self.0.column_iter().map(|c| c.sum() / n))
    }

    /// Returns the matrix with the column means subtracted.
    pub fn centered(&self) -> Self {
        let mean = self.mean();
        let mut out = self.0.clone();
        for mut row in out.row_iter_mut() {
            row -= mean.transpose();
        }
        Self(out)
    }

    /// Largest Euclidean norm among the rows.
    pub fn max_row_norm(&self) -> f64 {
        self.0.row_iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Unnormalised scatter `XᵀX`.
    pub fn scatter(&self) -> Matrix {
        self.0.transpose() * &self.0
    }
}
