//! Comparisons between estimated and reference components.

use serde::{Deserialize, Serialize};

use crate::linalg::orthonormality_deviation;
use crate::{DataMatrix, Error, Matrix, Result};

const ORTHONORMAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentReport {
    /// `|cos|` between estimated component i and its matched reference.
    pub per_component_abs_cos: Vec<f64>,
    pub min_abs_cos: f64,
    pub mean_abs_cos: f64,
    /// `component_order[i]` is the reference column matched to estimate i.
    pub component_order: Vec<usize>,
}

fn check_orthonormal(v: &Matrix) -> Result<()> {
    let deviation = orthonormality_deviation(v);
    if deviation > ORTHONORMAL_TOL || !deviation.is_finite() {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Matches each estimated component, in order, to the unmatched reference
/// component with the largest `|cos|` (ties to the lowest index).
pub fn component_alignment(estimated: &Matrix, reference: &Matrix) -> Result<AlignmentReport> {
    if estimated.shape() != reference.shape() {
        return Err(Error::DimensionMismatch {
            expected: reference.ncols(),
            found: estimated.ncols(),
        });
    }
    check_orthonormal(estimated)?;
    check_orthonormal(reference)?;

    let m = estimated.ncols();
    let cosines = (estimated.transpose() * reference).abs();
    let mut taken = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut per_component = Vec::with_capacity(m);
    for i in 0..m {
        let mut best: Option<usize> = None;
        for j in (0..m).filter(|&j| !taken[j]) {
            if best.is_none_or(|b| cosines[(i, j)] > cosines[(i, b)]) {
                best = Some(j);
            }
        }
        let j = best.expect("one unmatched reference per estimate");
        taken[j] = true;
        order.push(j);
        per_component.push(cosines[(i, j)].min(1.0));
    }

    let min_abs_cos = per_component.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_abs_cos = per_component.iter().sum::<f64>() / m.max(1) as f64;
    Ok(AlignmentReport {
        per_component_abs_cos: per_component,
        min_abs_cos: if m == 0 { 1.0 } else { min_abs_cos },
        mean_abs_cos,
        component_order: order,
    })
}

/// `Σₖ ‖(I − V Vᵀ) xₖ‖²` for orthonormal columns `V` (p×m).
pub fn reconstruction_error(x: &DataMatrix, v: &Matrix) -> Result<f64> {
    if v.nrows() != x.p() {
        return Err(Error::DimensionMismatch {
            expected: x.p(),
            found: v.nrows(),
        });
    }
    check_orthonormal(v)?;
    let data = x.as_matrix();
    let residual = data - data * v * v.transpose();
    Ok(residual.norm_squared())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_evd;
    use crate::Vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn basis(seed: u64, p: usize) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Matrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
        sym_evd(&(&m + m.transpose())).unwrap().vectors
    }

    #[test]
    fn identical_bases_align_perfectly() {
        let v = basis(1, 4);
        let r = component_alignment(&v, &v).unwrap();
        assert!(r
            .per_component_abs_cos
            .iter()
            .all(|&c| (c - 1.0).abs() < 1e-12));
        assert_eq!(r.component_order, vec![0, 1, 2, 3]);
    }

    #[test]
    fn sign_flips_do_not_matter() {
        let v = basis(2, 3);
        let mut flipped = v.clone();
        flipped.column_mut(1).neg_mut();
        let r = component_alignment(&flipped, &v).unwrap();
        assert!((r.min_abs_cos - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swapped_columns_are_matched() {
        let v = basis(3, 3);
        let mut swapped = v.clone();
        swapped.swap_columns(0, 2);
        let r = component_alignment(&swapped, &v).unwrap();
        assert!((r.min_abs_cos - 1.0).abs() < 1e-12);
        assert_eq!(r.component_order, vec![2, 1, 0]);
    }

    #[test]
    fn alignment_rejects_non_orthonormal() {
        let v = Matrix::from_element(2, 2, 1.0);
        assert!(component_alignment(&v, &Matrix::identity(2, 2)).is_err());
    }

    #[test]
    fn full_basis_leaves_no_residual() {
        let x = DataMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![-4.0, 0.5, 2.0]]).unwrap();
        let err = reconstruction_error(&x, &basis(4, 3)).unwrap();
        assert!(err <= 1e-8 * x.as_matrix().norm_squared());
    }

    #[test]
    fn orthogonal_subspace_keeps_everything() {
        let x = DataMatrix::from_rows(&[vec![2.0, 0.0], vec![-3.0, 0.0]]).unwrap();
        let v = Matrix::from_column_slice(2, 1, &[0.0, 1.0]);
        assert_eq!(reconstruction_error(&x, &v).unwrap(), 13.0);
    }

    #[test]
    fn matches_per_row_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x =
            DataMatrix::new(Matrix::from_fn(20, 4, |_, _| rng.random_range(-2.0..2.0))).unwrap();
        let v = basis(6, 4).columns(0, 2).into_owned();
        let mut naive = 0.0;
        for k in 0..20 {
            let xk = x.row(k);
            let mut e: Vector = xk.clone();
            for j in 0..2 {
                let c = v.column(j).into_owned();
                e -= &c * c.dot(&xk);
            }
            naive += e.norm_squared();
        }
        assert!((reconstruction_error(&x, &v).unwrap() - naive).abs() <= 1e-10);
    }

    #[test]
    fn error_shrinks_as_columns_are_added() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x =
            DataMatrix::new(Matrix::from_fn(30, 5, |_, _| rng.random_range(-2.0..2.0))).unwrap();
        let v = basis(8, 5);
        let errors: Vec<f64> = (0..=5)
            .map(|m| reconstruction_error(&x, &v.columns(0, m).into_owned()).unwrap())
            .collect();
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] + 1e-9);
        }
    }
}
