//! Small dense linear algebra: symmetric eigendecomposition by cyclic Jacobi
//! rotations, plain power iteration and the one-dimensional complement of a
//! set of orthonormal columns.

use crate::{Error, Matrix, Result, Vector};

/// Symmetry tolerance accepted by [`sym_evd`], relative to `max(1, max|A|)`.
pub const SYMMETRY_TOL: f64 = 1e-9;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted non-increasing, with the matching unit eigenvectors
/// stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vector,
    pub vectors: Matrix,
}

impl EigenPairs {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(λ) Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        &self.vectors * Matrix::from_diagonal(&self.values) * self.vectors.transpose()
    }
}

/// Outcome of [`power_iteration`].
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub vector: Vector,
    pub iterations: usize,
    pub converged: bool,
    /// The iterate kept flipping sign instead of settling: the operator's
    /// dominant eigenvalue is negative.
    pub oscillating: bool,
}

pub fn ensure_square(a: &Matrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(())
}

/// `max |A − Aᵀ|` over all entries.
pub fn max_asymmetry(a: &Matrix) -> f64 {
    let n = a.nrows().min(a.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

/// `max |VᵀV − I|` over all entries.
pub fn orthonormality_deviation(v: &Matrix) -> f64 {
    let gram = v.transpose() * v;
    let m = gram.nrows();
    (gram - Matrix::identity(m, m)).amax()
}

/// Flips `v` so its largest-magnitude entry is positive, ties going to the
/// lowest index.
pub fn sign_fix(v: &mut Vector) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.neg_mut();
    }
}

/// Applies [`sign_fix`] to every column.
pub fn sign_fix_columns(m: &mut Matrix) {
    for j in 0..m.ncols() {
        let mut col = m.column(j).into_owned();
        sign_fix(&mut col);
        m.set_column(j, &col);
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Cyclic Jacobi sweeps run until the off-diagonal Frobenius norm drops
/// below `1e-12·‖A‖_F`. Eigenvalues come back sorted non-increasing (ties
/// keep their original diagonal order) and every eigenvector is sign-fixed.
pub fn sym_evd(a: &Matrix) -> Result<EigenPairs> {
    ensure_square(a)?;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigendecomposition input"));
    }
    let asymmetry = max_asymmetry(a);
    if asymmetry > SYMMETRY_TOL * a.amax().max(1.0) {
        return Err(Error::NotSymmetric { asymmetry });
    }

    let n = a.nrows();
    // Work on the exactly symmetrised copy.
    let mut work = (a + a.transpose()) * 0.5;
    let mut vectors = Matrix::identity(n, n);
    let scale = work.norm();

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&work) <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut work, &mut vectors, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: equal eigenvalues stay in index order.
    order.sort_by(|&i, &j| work[(j, j)].total_cmp(&work[(i, i)]));

    let values = Vector::from_iterator(n, order.iter().map(|&i| work[(i, i)]));
    let mut sorted = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted.set_column(dst, &vectors.column(src));
    }
    sign_fix_columns(&mut sorted);
    Ok(EigenPairs {
        values,
        vectors: sorted,
    })
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation annihilating `a[p,q]`; accumulates into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.nrows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Repeats `v ← Kv / ‖Kv‖` until the displacement `‖v_new − v_old‖₂` is at
/// most `tol` or `max_iter` steps have run.
///
/// `K` need not be symmetric. The returned vector is not sign-fixed, so
/// callers iterating from a previous estimate keep its orientation.
pub fn power_iteration(
    k: &Matrix,
    v0: &Vector,
    tol: f64,
    max_iter: usize,
) -> Result<PowerIteration> {
    ensure_square(k)?;
    if k.nrows() != v0.len() {
        return Err(Error::DimensionMismatch {
            expected: k.nrows(),
            found: v0.len(),
        });
    }
    if k.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("power iteration operator"));
    }

    let mut v = v0.clone();
    let mut flips = 0usize;
    for iter in 1..=max_iter {
        let kv = k * &v;
        let norm = kv.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::SingularDirection);
        }
        let next = kv / norm;
        let displacement = (&next - &v).norm();
        let flipped = (&next + &v).norm() < displacement;
        flips = if flipped { flips + 1 } else { 0 };
        v = next;
        if displacement <= tol {
            return Ok(PowerIteration {
                vector: v,
                iterations: iter,
                converged: true,
                oscillating: false,
            });
        }
    }
    Ok(PowerIteration {
        vector: v,
        iterations: max_iter,
        converged: false,
        oscillating: flips >= 2,
    })
}

/// Unit vector spanning the orthogonal complement of the p−1 orthonormal
/// columns of `basis`.
///
/// Each standard basis vector is Gram–Schmidt orthogonalised (two passes)
/// against the columns; the candidate with the largest residual wins.
pub fn null_space_vector(basis: &Matrix) -> Result<Vector> {
    let p = basis.nrows();
    if p == 0 || basis.ncols() + 1 != p {
        return Err(Error::DimensionMismatch {
            expected: p.saturating_sub(1),
            found: basis.ncols(),
        });
    }
    if basis.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("null-space basis"));
    }
    let deviation = orthonormality_deviation(basis);
    if deviation > 1e-8 {
        return Err(Error::NotOrthonormal { deviation });
    }

    let mut best: Option<(f64, Vector)> = None;
    for j in 0..p {
        let mut r = Vector::zeros(p);
        r[j] = 1.0;
        for _ in 0..2 {
            let coeffs = basis.transpose() * &r;
            r -= basis * coeffs;
        }
        let norm = r.norm();
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, r));
        }
    }
    match best {
        Some((norm, r)) if norm >= 1e-12 => {
            let mut v = r / norm;
            sign_fix(&mut v);
            Ok(v)
        }
        _ => Err(Error::DegenerateBasis),
    }
}

/// Removes the components of `v` along the given orthonormal vectors
/// (one classical Gram–Schmidt pass).
pub fn orthogonalize_against(v: &Vector, basis: &[Vector]) -> Vector {
    let mut out = v.clone();
    for b in basis {
        out -= b * b.dot(v);
    }
    out
}
