//! Isotropic Gaussian correntropy kernel and the per-sample weights it
//! induces on a projection residual.

use crate::{DataMatrix, Error, Matrix, Result, Vector};

/// Weights below this are treated as underflowed.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;

/// Gaussian kernel bandwidth σ.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct KernelSize(f64);

impl KernelSize {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self(sigma))
        } else {
            Err(Error::InvalidKernelSize(sigma))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Diagonal of the correntropy weight matrix, one entry per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vector);

impl Weights {
    pub fn as_vector(&self) -> &Vector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every weight is below [`UNDERFLOW_FLOOR`], leaving the
    /// weighted scatter numerically zero.
    pub fn all_underflowed(&self) -> bool {
        self.0.iter().all(|&w| w < UNDERFLOW_FLOOR)
    }

    /// Weights of one for every sample; turns [`weighted_scatter`] into `XᵀX`.
    pub fn uniform(n: usize) -> Self {
        Self(Vector::from_element(n, 1.0))
    }
}

impl From<Vector> for Weights {
    fn from(v: Vector) -> Self {
        Self(v)
    }
}

/// `exp(−‖e‖² / 2σ²)` from a precomputed squared norm.
pub fn kernel_of_squared_norm(squared_norm: f64, sigma: KernelSize) -> f64 {
    let s = sigma.get();
    (-squared_norm / (2.0 * s * s)).exp()
}

/// `κ_σ(e) = exp(−‖e‖² / 2σ²)`.
pub fn gaussian_kernel(e: &Vector, sigma: KernelSize) -> f64 {
    kernel_of_squared_norm(e.norm_squared(), sigma)
}

/// Weight of sample `k` is `κ_σ(R x_k)`, where `R` maps a sample to its
/// reconstruction error (for example `I − P − vvᵀ`).
pub fn residual_weights(x: &DataMatrix, residual: &Matrix, sigma: KernelSize) -> Result<Weights> {
    let p = x.p();
    if residual.nrows() != p || residual.ncols() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: residual.nrows().max(residual.ncols()),
        });
    }
    // Row k of X Rᵀ is (R x_k)ᵀ.
    let errors = x.as_matrix() * residual.transpose();
    let weights = errors
        .row_iter()
        .map(|e| kernel_of_squared_norm(e.norm_squared(), sigma));
    Ok(Weights(Vector::from_iterator(x.n(), weights)))
}

/// `Σₖ wₖ xₖ xₖᵀ`, accumulated in sample order and exactly symmetric.
pub fn weighted_scatter(x: &DataMatrix, w: &Weights) -> Result<Matrix> {
    if w.len() != x.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: w.len(),
        });
    }
    let p = x.p();
    let data = x.as_matrix();
    let mut s = Matrix::zeros(p, p);
    for (k, &wk) in w.as_vector().iter().enumerate() {
        for i in 0..p {
            let wxi = wk * data[(k, i)];
            for j in i..p {
                s[(i, j)] += wxi * data[(k, j)];
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            s[(i, j)] = s[(j, i)];
        }
    }
    Ok(s)
}
