//! Seeded synthetic data: zero-mean Gaussian samples with a given scatter
//! matrix, a fraction of which are replaced by high-power outliers.
//!
//! All randomness comes from one ChaCha20 stream seeded with
//! [`ExperimentSpec::seed`]. Draws happen in a fixed order: the n×p standard
//! normals for the samples (row-major), then the replaced row indices, then
//! the outlier normals (row-major over the sorted indices). Standard normals
//! use the ziggurat sampler of `rand_distr::StandardNormal`.

use nalgebra::Cholesky;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::linalg::{max_asymmetry, sym_evd, EigenPairs, SYMMETRY_TOL};
use crate::{DataMatrix, Error, Matrix, Result, Vector};

/// Covariance used for outlier draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutlierBasis {
    /// `ν Λ` with Λ the true eigenvalues, axis-aligned in data coordinates.
    #[default]
    Literal,
    /// `ν S`, i.e. `ν V Λ Vᵀ`.
    Rotated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub n: usize,
    pub p: usize,
    /// True scatter matrix S, symmetric positive definite.
    pub scatter: Matrix,
    pub outlier_fraction: f64,
    /// Outlier power scale ν.
    pub nu: f64,
    pub seed: u64,
    pub outlier_basis: OutlierBasis,
}

/// The 3×3 scatter matrix of the reference experiment.
pub fn reference_scatter() -> Matrix {
    Matrix::from_row_slice(3, 3, &[8.0, 3.0, -1.0, 3.0, 4.0, -2.0, -1.0, -2.0, 6.0])
}

impl ExperimentSpec {
    /// n = 400 samples of the reference scatter, ν = 15, no outliers.
    pub fn reference() -> Self {
        Self {
            n: 400,
            p: 3,
            scatter: reference_scatter(),
            outlier_fraction: 0.0,
            nu: 15.0,
            seed: 0,
            outlier_basis: OutlierBasis::Literal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.p == 0 {
            return bad("p must be at least 1".into());
        }
        if self.scatter.nrows() != self.p || self.scatter.ncols() != self.p {
            return bad(format!(
                "scatter is {}x{} but p = {}",
                self.scatter.nrows(),
                self.scatter.ncols(),
                self.p
            ));
        }
        if !(0.0..=1.0).contains(&self.outlier_fraction) {
            return bad(format!(
                "outlier fraction {} outside [0, 1]",
                self.outlier_fraction
            ));
        }
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return bad(format!("nu must be positive, got {}", self.nu));
        }
        Ok(())
    }

    /// `round(outlier_fraction · n)`.
    pub fn outlier_count(&self) -> usize {
        ((self.outlier_fraction * self.n as f64).round() as usize).min(self.n)
    }

    /// Eigendecomposition of the true scatter.
    pub fn true_eigen(&self) -> Result<EigenPairs> {
        sym_evd(&self.scatter)
    }
}

/// Lower-triangular `L` with `L Lᵀ = A`.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    crate::linalg::ensure_square(a)?;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("cholesky input"));
    }
    let asymmetry = max_asymmetry(a);
    if asymmetry > SYMMETRY_TOL * a.amax().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Cholesky::new(a.clone())
        .map(|c| c.l())
        .ok_or(Error::NotPositiveDefinite)
}

/// Generated samples with their provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData {
    /// Samples after outlier replacement.
    pub samples: DataMatrix,
    /// Samples before replacement.
    pub clean: DataMatrix,
    /// Sorted indices of the replaced rows.
    pub outlier_indices: Vec<usize>,
    pub truth: EigenPairs,
}

/// A seeded random stream shared by the sampling steps.
pub struct SampleStream {
    rng: ChaCha20Rng,
}

impl SampleStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// n rows `L z` with `z ~ N(0, I)` and `L Lᵀ = S`.
    pub fn sample_mvn(&mut self, spec: &ExperimentSpec) -> Result<DataMatrix> {
        spec.validate()?;
        let l = cholesky(&spec.scatter)?;
        let (n, p) = (spec.n, spec.p);
        let mut z = Matrix::zeros(n, p);
        for i in 0..n {
            for j in 0..p {
                z[(i, j)] = self.normal();
            }
        }
        DataMatrix::new(z * l.transpose())
    }

    /// Replaces `round(fraction · n)` distinct uniformly chosen rows with draws
    /// from `N(0, ν Λ)` (or `N(0, ν S)` in [`OutlierBasis::Rotated`] mode).
    /// Returns the new matrix and the sorted replaced indices.
    pub fn inject_outliers(
        &mut self,
        x: &DataMatrix,
        spec: &ExperimentSpec,
        true_eigvals: &Vector,
    ) -> Result<(DataMatrix, Vec<usize>)> {
        spec.validate()?;
        let (n, p) = (x.n(), x.p());
        if true_eigvals.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: true_eigvals.len(),
            });
        }
        if true_eigvals.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::NotPositiveDefinite);
        }
        let count = ((spec.outlier_fraction * n as f64).round() as usize).min(n);
        let mut indices = rand::seq::index::sample(&mut self.rng, n, count).into_vec();
        indices.sort_unstable();

        let factor = match spec.outlier_basis {
            OutlierBasis::Literal => {
                Matrix::from_diagonal(&true_eigvals.map(|l| (spec.nu * l).sqrt()))
            }
            OutlierBasis::Rotated => cholesky(&(&spec.scatter * spec.nu))?,
        };
        let mut out = x.as_matrix().clone();
        for &k in &indices {
            let z = Vector::from_fn(p, |_, _| self.normal());
            out.set_row(k, &(&factor * z).transpose());
        }
        Ok((DataMatrix::new(out)?, indices))
    }
}

/// Clean samples for `spec` from a fresh stream seeded with `spec.seed`.
pub fn sample_mvn(spec: &ExperimentSpec) -> Result<DataMatrix> {
    SampleStream::new(spec.seed).sample_mvn(spec)
}

/// Samples then outliers, both from one stream seeded with `spec.seed`.
pub fn generate(spec: &ExperimentSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let truth = spec.true_eigen()?;
    let mut stream = SampleStream::new(spec.seed);
    let clean = stream.sample_mvn(spec)?;
    let (samples, outlier_indices) = stream.inject_outliers(&clean, spec, &truth.values)?;
    Ok(SyntheticData {
        samples,
        clean,
        outlier_indices,
        truth,
    })
}

/// Empirical `XᵀX / n` (zero-mean model, no centering).
pub fn empirical_scatter(x: &DataMatrix) -> Matrix {
    x.scatter() / x.n() as f64
}
