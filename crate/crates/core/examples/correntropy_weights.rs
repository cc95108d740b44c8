//! How the Gaussian kernel down-weights samples that sit far from a line, and
//! how the weighted scatter follows as the kernel shrinks.

use correntropy_pca::correntropy::{residual_weights, weighted_scatter, KernelSize};
use correntropy_pca::{DataMatrix, Matrix, Vector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Nine points close to the x-axis and one far above it.
    let mut rows: Vec<Vec<f64>> = (0..9)
        .map(|k| vec![k as f64 - 4.0, 0.1 * ((k % 3) as f64 - 1.0)])
        .collect();
    rows.push(vec![1.0, 8.0]);
    let x = DataMatrix::from_rows(&rows)?;

    let v = Vector::from_vec(vec![1.0, 0.0]);
    let residual = Matrix::identity(2, 2) - &v * v.transpose();

    for sigma in [100.0, 5.0, 1.0, 0.3] {
        let w = residual_weights(&x, &residual, KernelSize::new(sigma)?)?;
        let s = weighted_scatter(&x, &w)?;
        let inliers = w.as_vector().rows(0, 9);
        let (min, max) = (inliers.min(), inliers.max());
        println!(
            "sigma {sigma:>6}: outlier weight {:.3e}, inlier weights in [{min:.3e}, {max:.3e}], scatter diag [{:.3}, {:.3}]",
            w.as_vector()[9],
            s[(0, 0)],
            s[(1, 1)],
        );
    }
    Ok(())
}
