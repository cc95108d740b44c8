//! Maximum correntropy power iterations.
//!
//! Each component is the fixed point of an alternating scheme: freeze the
//! direction, weight every sample by the Gaussian kernel of its
//! reconstruction error, then power-iterate on the weighted scatter (or its
//! deflated, shifted form for later components). [`fit`] wraps this in the
//! kernel-shrinking schedule that starts each component at the a-priori
//! singular value `√λᵢ` and multiplies σ by `η` after every round.

use serde::{Deserialize, Serialize};

use crate::correntropy::{residual_weights, weighted_scatter, KernelSize};
use crate::linalg::{
    ensure_square, null_space_vector, orthogonalize_against, orthonormality_deviation,
    power_iteration, sign_fix, sym_evd, EigenPairs,
};
use crate::{DataMatrix, Error, Matrix, Result, Vector};

/// Smallest a-priori eigenvalue accepted, relative to the largest.
pub const RANK_TOL: f64 = 1e-10;

/// Where the kernel size of each component starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaInit {
    /// `σᵢ = √λᵢ` from the eigendecomposition of `XᵀX / n`.
    APriori,
    /// The same starting σ for every component.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McpiConfig {
    /// Kernel decay factor, `0 < eta < 1`.
    pub eta: f64,
    /// Number of shrinking rounds per component.
    pub n_decay: usize,
    pub inner_tol: f64,
    pub inner_max_iter: usize,
    pub outer_tol: f64,
    pub outer_max_iter: usize,
    /// Subtract column means before fitting.
    pub center: bool,
    pub sigma_init: SigmaInit,
}

impl Default for McpiConfig {
    fn default() -> Self {
        Self {
            eta: 0.95,
            n_decay: 65,
            inner_tol: 1e-10,
            inner_max_iter: 1000,
            outer_tol: 1e-8,
            outer_max_iter: 200,
            center: false,
            sigma_init: SigmaInit::APriori,
        }
    }
}

impl McpiConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_owned()));
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad("eta must lie in (0, 1)");
        }
        if self.n_decay == 0 || self.inner_max_iter == 0 || self.outer_max_iter == 0 {
            return bad("iteration counts must be at least 1");
        }
        if !(self.inner_tol > 0.0 && self.outer_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if let SigmaInit::Fixed(s) = self.sigma_init {
            if !(s.is_finite() && s > 0.0) {
                return bad("fixed sigma must be positive and finite");
            }
        }
        Ok(())
    }
}

/// Result of one alternating solve at a fixed kernel size.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSolve {
    /// Unit, sign-fixed direction.
    pub vector: Vector,
    pub outer_iterations: usize,
    /// Power-iteration steps summed over all outer rounds.
    pub inner_iterations: usize,
    /// The outer displacement fell below `outer_tol`.
    pub converged: bool,
    /// Every inner power iteration met `inner_tol`.
    pub inner_converged: bool,
    /// Some inner iteration flipped sign without settling.
    pub oscillating: bool,
}

/// Projection onto the components found so far, together with
/// `Q = (I + P)⁻¹` kept up to date by rank-one Woodbury updates.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflationState {
    projection: Matrix,
    inverse_companion: Matrix,
    components: Vec<Vector>,
}

/// Worst-case violations of the [`DeflationState`] invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeflationCheck {
    pub asymmetry: f64,
    /// `max |P² − P|`.
    pub idempotence: f64,
    /// `max |(I + P) Q − I|`.
    pub inverse_residual: f64,
    pub orthonormality: f64,
    /// `max |P − Σ vⱼvⱼᵀ|`.
    pub projection_mismatch: f64,
}

impl DeflationCheck {
    pub fn holds(&self) -> bool {
        self.asymmetry <= 1e-8
            && self.idempotence <= 1e-8
            && self.inverse_residual <= 1e-8
            && self.orthonormality <= 1e-8
            && self.projection_mismatch <= 1e-10
    }
}

impl DeflationState {
    /// Empty state: `P = 0`, `Q = I`.
    pub fn new(p: usize) -> Self {
        Self {
            projection: Matrix::zeros(p, p),
            inverse_companion: Matrix::identity(p, p),
            components: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.projection.nrows()
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn inverse_companion(&self) -> &Matrix {
        &self.inverse_companion
    }

    pub fn components(&self) -> &[Vector] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Appends a unit component, updating `P` and `Q`.
    pub fn push(&mut self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        self.inverse_companion = woodbury_update(&self.inverse_companion, v)?;
        self.projection += v * v.transpose();
        self.components.push(v.clone());
        Ok(())
    }

    /// Components as the columns of a p×i matrix.
    pub fn basis(&self) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), self.len());
        for (j, v) in self.components.iter().enumerate() {
            m.set_column(j, v);
        }
        m
    }

    pub fn check(&self) -> DeflationCheck {
        let p = self.dim();
        let eye = Matrix::identity(p, p);
        let pp = &self.projection;
        let sum = self
            .components
            .iter()
            .fold(Matrix::zeros(p, p), |acc, v| acc + v * v.transpose());
        DeflationCheck {
            asymmetry: crate::linalg::max_asymmetry(pp),
            idempotence: (pp * pp - pp).amax(),
            inverse_residual: ((&eye + pp) * &self.inverse_companion - &eye).amax(),
            orthonormality: orthonormality_deviation(&self.basis()),
            projection_mismatch: (pp - sum).amax(),
        }
    }
}

/// `(I + P + vvᵀ)⁻¹` from `Q = (I + P)⁻¹` via the Sherman–Morrison form
/// `Q − Q v vᵀ Q / (1 + vᵀ Q v)`.
pub fn woodbury_update(q: &Matrix, v: &Vector) -> Result<Matrix> {
    ensure_square(q)?;
    if q.nrows() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: q.nrows(),
            found: v.len(),
        });
    }
    let qv = q * v;
    let vq = v.transpose() * q;
    let denominator = 1.0 + v.dot(&qv);
    if !(denominator > 1e-12) {
        return Err(Error::WoodburySingular { denominator });
    }
    Ok(q - (qv * vq) / denominator)
}

/// `K = Q (S − P S − S P)` shifted by `max |diag K|` so its dominant
/// eigenvalue is the largest positive one.
pub fn build_deflated_operator(s: &Matrix, state: &DeflationState) -> Result<Matrix> {
    let mut k = unshifted_deflated_operator(s, state)?;
    let shift = k.diagonal().amax();
    for i in 0..k.nrows() {
        k[(i, i)] += shift;
    }
    Ok(k)
}

/// `Q (S − P S − S P)` without the diagonal shift.
pub fn unshifted_deflated_operator(s: &Matrix, state: &DeflationState) -> Result<Matrix> {
    ensure_square(s)?;
    if s.nrows() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            found: s.nrows(),
        });
    }
    let p = state.projection();
    Ok(state.inverse_companion() * (s - p * s - s * p))
}

/// First principal component at a fixed kernel size: alternate weights
/// `κ_σ((I − vvᵀ)xₖ)` with power iterations on `XᵀGX`.
pub fn mcpi_first_component(
    x: &DataMatrix,
    sigma: KernelSize,
    v0: &Vector,
    cfg: &McpiConfig,
) -> Result<ComponentSolve> {
    let p = x.p();
    alternate(x, sigma, v0, cfg, &Matrix::identity(p, p), &[], |s| {
        Ok(s.clone())
    })
}

/// Component `i = state.len() + 1` at a fixed kernel size: weights use the
/// residual `(I − P − vvᵀ)xₖ` and the power iteration runs on the shifted
/// deflated operator. The result is orthogonal to every stored component.
pub fn mcpi_ith_component(
    x: &DataMatrix,
    state: &DeflationState,
    sigma: KernelSize,
    v0: &Vector,
    cfg: &McpiConfig,
) -> Result<ComponentSolve> {
    if state.dim() != x.p() {
        return Err(Error::DimensionMismatch {
            expected: x.p(),
            found: state.dim(),
        });
    }
    let p = x.p();
    let base = Matrix::identity(p, p) - state.projection();
    alternate(x, sigma, v0, cfg, &base, state.components(), |s| {
        build_deflated_operator(s, state)
    })
}

fn alternate(
    x: &DataMatrix,
    sigma: KernelSize,
    v0: &Vector,
    cfg: &McpiConfig,
    residual_base: &Matrix,
    found: &[Vector],
    operator: impl Fn(&Matrix) -> Result<Matrix>,
) -> Result<ComponentSolve> {
    if v0.len() != x.p() {
        return Err(Error::DimensionMismatch {
            expected: x.p(),
            found: v0.len(),
        });
    }
    let mut v = unit(orthogonalize_against(v0, found))?;
    let mut solve = ComponentSolve {
        vector: Vector::zeros(0),
        outer_iterations: 0,
        inner_iterations: 0,
        converged: false,
        inner_converged: true,
        oscillating: false,
    };

    for _ in 0..cfg.outer_max_iter {
        let residual = residual_base - &v * v.transpose();
        let weights = residual_weights(x, &residual, sigma)?;
        if weights.all_underflowed() {
            sign_fix(&mut v);
            return Err(Error::SigmaTooSmall { last_valid: v });
        }
        let scatter = weighted_scatter(x, &weights)?;
        let k = operator(&scatter)?;
        let inner = power_iteration(&k, &v, cfg.inner_tol, cfg.inner_max_iter)?;
        solve.outer_iterations += 1;
        solve.inner_iterations += inner.iterations;
        solve.inner_converged &= inner.converged;
        solve.oscillating |= inner.oscillating;

        // Drift guard: keep the iterate orthogonal to earlier components.
        let next = unit(orthogonalize_against(&inner.vector, found))?;
        let aligned = if next.dot(&v) < 0.0 { -&v } else { v.clone() };
        let displacement = (&next - aligned).norm();
        v = next;
        if displacement <= cfg.outer_tol {
            solve.converged = true;
            break;
        }
    }
    sign_fix(&mut v);
    solve.vector = v;
    Ok(solve)
}

fn unit(v: Vector) -> Result<Vector> {
    let norm = v.norm();
    if norm > 1e-12 && norm.is_finite() {
        Ok(v / norm)
    } else {
        Err(Error::SingularDirection)
    }
}

/// How a component in a [`PcaResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentSource {
    Mcpi,
    NullSpace,
    Eigendecomposition,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDiagnostics {
    pub index: usize,
    pub source: ComponentSource,
    pub initial_sigma: Option<f64>,
    /// σ after the completed decay rounds, `initial_sigma · η^rounds`.
    pub final_sigma: Option<f64>,
    pub decay_rounds: usize,
    /// Kernel size used in each completed round.
    pub sigmas: Vec<f64>,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    /// Every round's outer loop met `outer_tol`.
    pub converged: bool,
    pub inner_converged: bool,
    /// Shrinking stopped early because the weights underflowed.
    pub sigma_too_small: bool,
    pub oscillation: bool,
}

impl ComponentDiagnostics {
    fn closed_form(index: usize, source: ComponentSource) -> Self {
        Self {
            index,
            source,
            initial_sigma: None,
            final_sigma: None,
            decay_rounds: 0,
            sigmas: Vec::new(),
            outer_iterations: 0,
            inner_iterations: 0,
            converged: true,
            inner_converged: true,
            sigma_too_small: false,
            oscillation: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcaResult {
    /// p×p orthonormal matrix, one component per column in discovery order.
    pub components: Matrix,
    /// Eigenvalues of `XᵀX / n` in descending order. For MCPI fits these are
    /// the a-priori values used to seed the kernel sizes, not robust
    /// variances.
    pub apriori_eigenvalues: Vector,
    pub diagnostics: Vec<ComponentDiagnostics>,
    /// Column means removed before fitting, when centering was requested.
    pub mean: Option<Vector>,
}

impl PcaResult {
    pub fn component(&self, i: usize) -> Vector {
        self.components.column(i).into_owned()
    }
}

fn prepare(x: &DataMatrix, center: bool) -> Result<(DataMatrix, Option<Vector>, EigenPairs)> {
    let (n, p) = (x.n(), x.p());
    if p == 0 {
        return Err(Error::Degenerate("data has no columns".into()));
    }
    if n < p {
        return Err(Error::Degenerate(format!("{n} samples for {p} variables")));
    }
    let (data, mean) = if center {
        (x.centered(), Some(x.mean()))
    } else {
        (x.clone(), None)
    };
    let evd = sym_evd(&(data.scatter() / n as f64))?;
    Ok((data, mean, evd))
}

/// Ordinary PCA: eigendecomposition of `XᵀX / n`.
pub fn standard_pca(x: &DataMatrix, center: bool) -> Result<PcaResult> {
    let (_, mean, evd) = prepare(x, center)?;
    let diagnostics = (0..evd.dim())
        .map(|i| ComponentDiagnostics::closed_form(i, ComponentSource::Eigendecomposition))
        .collect();
    Ok(PcaResult {
        components: evd.vectors,
        apriori_eigenvalues: evd.values,
        diagnostics,
        mean,
    })
}

/// Full robust fit with kernel-size shrinking.
///
/// Components `1..p−1` each start from the matching a-priori eigenvector and
/// run `n_decay` rounds of [`mcpi_ith_component`], shrinking σ by `η` after
/// every round. If the weights underflow the component keeps its last
/// estimate and the diagnostics flag it. The last component is the unit
/// vector orthogonal to all others.
pub fn fit(x: &DataMatrix, cfg: &McpiConfig) -> Result<PcaResult> {
    fit_inspect(x, cfg, |_| {})
}

/// [`fit`], calling `inspect` with the deflation state after each component
/// is added to it.
pub fn fit_inspect(
    x: &DataMatrix,
    cfg: &McpiConfig,
    mut inspect: impl FnMut(&DeflationState),
) -> Result<PcaResult> {
    cfg.validate()?;
    let (data, mean, apriori) = prepare(x, cfg.center)?;
    let p = data.p();
    let (largest, smallest) = (apriori.values[0], apriori.values[p - 1]);
    if !(largest > 0.0) || smallest <= RANK_TOL * largest {
        return Err(Error::Degenerate(format!(
            "rank deficient: eigenvalues span [{smallest:e}, {largest:e}]"
        )));
    }

    let mut state = DeflationState::new(p);
    let mut diagnostics = Vec::with_capacity(p);
    for i in 0..p - 1 {
        let sigma0 = match cfg.sigma_init {
            SigmaInit::APriori => apriori.values[i].sqrt(),
            SigmaInit::Fixed(s) => s,
        };
        let mut v = initial_direction(&apriori.vectors, i, state.components())?;
        let mut diag = ComponentDiagnostics {
            initial_sigma: Some(sigma0),
            converged: true,
            ..ComponentDiagnostics::closed_form(i, ComponentSource::Mcpi)
        };

        for round in 0..cfg.n_decay {
            let sigma = sigma0 * cfg.eta.powi(round as i32);
            let Ok(kernel) = KernelSize::new(sigma) else {
                diag.sigma_too_small = true;
                break;
            };
            match mcpi_ith_component(&data, &state, kernel, &v, cfg) {
                Ok(solve) => {
                    v = solve.vector;
                    diag.sigmas.push(sigma);
                    diag.decay_rounds += 1;
                    diag.outer_iterations += solve.outer_iterations;
                    diag.inner_iterations += solve.inner_iterations;
                    diag.converged &= solve.converged;
                    diag.inner_converged &= solve.inner_converged;
                    diag.oscillation |= solve.oscillating;
                }
                Err(Error::SigmaTooSmall { .. } | Error::SingularDirection) => {
                    diag.sigma_too_small = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        diag.final_sigma = Some(sigma0 * cfg.eta.powi(diag.decay_rounds as i32));
        state.push(&v)?;
        inspect(&state);
        diagnostics.push(diag);
    }

    let last = null_space_vector(&state.basis())?;
    diagnostics.push(ComponentDiagnostics::closed_form(
        p - 1,
        ComponentSource::NullSpace,
    ));
    let mut components = state.basis().insert_column(p - 1, 0.0);
    components.set_column(p - 1, &last);

    Ok(PcaResult {
        components,
        apriori_eigenvalues: apriori.values,
        diagnostics,
        mean,
    })
}

/// Column `i` of the a-priori eigenvectors, orthogonalised against the
/// components already found. Falls back to the column with the largest
/// residual when column `i` lies (numerically) in their span.
fn initial_direction(apriori: &Matrix, i: usize, found: &[Vector]) -> Result<Vector> {
    let residual = |j: usize| orthogonalize_against(&apriori.column(j).into_owned(), found);
    let preferred = residual(i);
    if preferred.norm() > 1e-6 {
        return unit(preferred);
    }
    let best = (0..apriori.ncols())
        .map(residual)
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .ok_or(Error::DegenerateBasis)?;
    unit(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correntropy::gaussian_kernel;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gaussian_data(seed: u64, n: usize, scales: &[f64]) -> DataMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = scales.len();
        // Rotate axis-aligned samples so no component sits on an axis.
        let rot = sym_evd(&Matrix::from_fn(p, p, |i, j| {
            1.0 / (1.0 + i as f64 + j as f64)
        }))
        .unwrap()
        .vectors;
        let z = Matrix::from_fn(n, p, |_, j| {
            scales[j] * rng.sample::<f64, _>(StandardNormal)
        });
        DataMatrix::new(z * rot.transpose()).unwrap()
    }

    fn abs_cos(a: &Vector, b: &Vector) -> f64 {
        a.dot(b).abs() / (a.norm() * b.norm())
    }

    fn orthonormal_vectors(rng: &mut ChaCha8Rng, p: usize) -> Matrix {
        let m = Matrix::from_fn(p, p, |_, _| rng.random_range(-1.0..1.0));
        sym_evd(&(&m + m.transpose())).unwrap().vectors
    }

    #[test]
    fn default_config_is_valid() {
        McpiConfig::default().validate().unwrap();
        let bad = McpiConfig {
            eta: 1.0,
            ..McpiConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = McpiConfig {
            n_decay: 0,
            ..McpiConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn woodbury_from_identity() {
        let v = Vector::from_vec(vec![0.6, 0.8, 0.0]);
        let q = woodbury_update(&Matrix::identity(3, 3), &v).unwrap();
        let want = Matrix::identity(3, 3) - &v * v.transpose() / 2.0;
        assert!((q - want).amax() <= 1e-15);
    }

    #[test]
    fn woodbury_matches_direct_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let basis = orthonormal_vectors(&mut rng, 4);
        let mut state = DeflationState::new(4);
        for j in 0..3 {
            let v = basis.column(j).into_owned();
            state.push(&v).unwrap();
            let eye = Matrix::identity(4, 4);
            // Inverse oracle through the eigendecomposition of I + P.
            let evd = sym_evd(&(&eye + state.projection())).unwrap();
            let inv = &evd.vectors
                * Matrix::from_diagonal(&evd.values.map(|l| 1.0 / l))
                * evd.vectors.transpose();
            assert!((state.inverse_companion() - inv).amax() <= 1e-10);
            assert!(state.check().holds());
        }
    }

    #[test]
    fn two_orthogonal_updates_halve_both_directions() {
        let v1 = Vector::from_vec(vec![1.0, 1.0, 0.0]) / 2f64.sqrt();
        let v2 = Vector::from_vec(vec![0.0, 0.0, 1.0]);
        let q1 = woodbury_update(&Matrix::identity(3, 3), &v1).unwrap();
        let q2 = woodbury_update(&q1, &v2).unwrap();
        let want = Matrix::identity(3, 3) - (&v1 * v1.transpose() + &v2 * v2.transpose()) / 2.0;
        assert!((q2 - want).amax() <= 1e-10);
    }

    #[test]
    fn woodbury_detects_corrupted_state() {
        let q = -Matrix::identity(2, 2);
        let v = Vector::from_vec(vec![1.0, 0.0]);
        assert!(matches!(
            woodbury_update(&q, &v),
            Err(Error::WoodburySingular { .. })
        ));
    }

    #[test]
    fn deflated_operator_without_deflation() {
        let s = Matrix::from_row_slice(2, 2, &[3.0, 1.0, 1.0, -5.0]);
        let k = build_deflated_operator(&s, &DeflationState::new(2)).unwrap();
        assert_eq!(k, &s + Matrix::identity(2, 2) * 5.0);
    }

    #[test]
    fn deflated_operator_hand_computed() {
        let s = Matrix::from_diagonal(&Vector::from_vec(vec![4.0, 1.0]));
        let mut state = DeflationState::new(2);
        state.push(&Vector::from_vec(vec![1.0, 0.0])).unwrap();
        let raw = unshifted_deflated_operator(&s, &state).unwrap();
        assert!((raw - Matrix::from_diagonal(&Vector::from_vec(vec![-2.0, 1.0]))).amax() < 1e-15);
        let k = build_deflated_operator(&s, &state).unwrap();
        assert!((&k - Matrix::from_diagonal(&Vector::from_vec(vec![0.0, 3.0]))).amax() < 1e-15);
        let top = power_iteration(&k, &Vector::from_vec(vec![0.6, 0.8]), 1e-12, 100).unwrap();
        assert!(abs_cos(&top.vector, &Vector::from_vec(vec![0.0, 1.0])) > 1.0 - 1e-12);
    }

    #[test]
    fn deflated_directions_are_eigenvectors() {
        // K v₁ = Q(S v₁ − v₁ v₁ᵀ S v₁ − S v₁) = −(v₁ᵀ S v₁)/2 · v₁, so after
        // the shift v₁ has eigenvalue θ − v₁ᵀ S v₁ / 2.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let b = Matrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
            let s = &b * b.transpose();
            let v = Vector::from_fn(4, |_, _| rng.random_range(-1.0..1.0)).normalize();
            let mut state = DeflationState::new(4);
            state.push(&v).unwrap();
            let raw = unshifted_deflated_operator(&s, &state).unwrap();
            let theta = raw.diagonal().amax();
            let k = build_deflated_operator(&s, &state).unwrap();
            let want = &v * (theta - v.dot(&(&s * &v)) / 2.0);
            assert!((&k * &v - want).amax() <= 1e-8);
        }
    }

    #[test]
    fn single_axis_data_gives_that_axis() {
        let x = DataMatrix::from_rows(&[
            vec![2.0, 0.0, 0.0],
            vec![-1.0, 0.0, 0.0],
            vec![3.0, 0.0, 0.0],
        ])
        .unwrap();
        let v0 = Vector::from_vec(vec![1.0, 1.0, 1.0]).normalize();
        for sigma in [0.5, 5.0, 500.0] {
            let out = mcpi_first_component(
                &x,
                KernelSize::new(sigma).unwrap(),
                &v0,
                &McpiConfig::default(),
            )
            .unwrap();
            assert!((out.vector - Vector::from_vec(vec![1.0, 0.0, 0.0])).amax() <= 1e-8);
        }
    }

    #[test]
    fn first_component_reduces_to_pca_for_huge_sigma() {
        let x = gaussian_data(1, 300, &[3.0, 1.5, 0.5]);
        let sigma = KernelSize::new(1e6 * x.max_row_norm()).unwrap();
        let v0 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
        let out = mcpi_first_component(&x, sigma, &v0, &McpiConfig::default()).unwrap();
        assert!(out.converged);
        let top = sym_evd(&x.scatter())
            .unwrap()
            .vectors
            .column(0)
            .into_owned();
        assert!(abs_cos(&out.vector, &top) >= 1.0 - 1e-6);
    }

    #[test]
    fn ith_component_with_empty_state_matches_first() {
        let x = gaussian_data(2, 200, &[2.0, 1.0, 0.7]);
        let sigma = KernelSize::new(1.5).unwrap();
        let v0 = Vector::from_vec(vec![1.0, 1.0, 0.0]).normalize();
        let cfg = McpiConfig::default();
        let a = mcpi_first_component(&x, sigma, &v0, &cfg).unwrap();
        let b = mcpi_ith_component(&x, &DeflationState::new(3), sigma, &v0, &cfg).unwrap();
        assert!(abs_cos(&a.vector, &b.vector) >= 1.0 - 1e-8);
    }

    #[test]
    fn second_component_reduces_to_pca_for_huge_sigma() {
        let x = gaussian_data(3, 300, &[3.0, 1.5, 0.5]);
        let evd = sym_evd(&x.scatter()).unwrap();
        let mut state = DeflationState::new(3);
        state.push(&evd.vectors.column(0).into_owned()).unwrap();
        let sigma = KernelSize::new(1e6 * x.max_row_norm()).unwrap();
        let v0 = Vector::from_vec(vec![0.3, -0.5, 0.8]).normalize();
        let out = mcpi_ith_component(&x, &state, sigma, &v0, &McpiConfig::default()).unwrap();
        assert!(abs_cos(&out.vector, &evd.vectors.column(1).into_owned()) >= 1.0 - 1e-4);
        assert!(out.vector.dot(&state.components()[0]).abs() <= 1e-8);
    }

    #[test]
    fn ith_component_weights_use_the_deflated_residual() {
        // One outer round with a huge iteration budget: the operator built
        // from independently recomputed weights must reproduce the step.
        let x = gaussian_data(4, 50, &[2.0, 1.0, 0.5]);
        let mut state = DeflationState::new(3);
        let v1 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
        state.push(&v1).unwrap();
        let v = Vector::from_vec(vec![0.0, 0.6, 0.8]);
        let sigma = KernelSize::new(0.9).unwrap();
        let cfg = McpiConfig {
            outer_max_iter: 1,
            ..McpiConfig::default()
        };
        let out = mcpi_ith_component(&x, &state, sigma, &v, &cfg).unwrap();

        let mut s = Matrix::zeros(3, 3);
        for k in 0..x.n() {
            let xk = x.row(k);
            let e = &xk - &v1 * v1.dot(&xk) - &v * v.dot(&xk);
            s += &xk * xk.transpose() * gaussian_kernel(&e, sigma);
        }
        let k = build_deflated_operator(&s, &state).unwrap();
        let mut expected = power_iteration(&k, &v, cfg.inner_tol, cfg.inner_max_iter)
            .unwrap()
            .vector;
        expected -= &v1 * v1.dot(&expected);
        assert!(abs_cos(&out.vector, &expected) >= 1.0 - 1e-12);
    }

    #[test]
    fn tiny_sigma_reports_underflow_with_last_estimate() {
        let x = DataMatrix::from_rows(&[vec![100.0, 1.0], vec![1.0, 100.0], vec![-50.0, 70.0]])
            .unwrap();
        let v0 = Vector::from_vec(vec![0.0, 1.0]);
        let err = mcpi_first_component(
            &x,
            KernelSize::new(1e-6).unwrap(),
            &v0,
            &McpiConfig::default(),
        )
        .unwrap_err();
        match err {
            Error::SigmaTooSmall { last_valid } => assert_eq!(last_valid, v0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fit_produces_orthonormal_components_and_consistent_state() {
        let x = gaussian_data(5, 400, &[3.0, 2.0, 1.0, 0.5]);
        let mut checks = Vec::new();
        let result = fit_inspect(&x, &McpiConfig::default(), |s| checks.push(s.check())).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(DeflationCheck::holds));
        assert!(orthonormality_deviation(&result.components) <= 1e-6);
        assert_eq!(result.diagnostics.len(), 4);
        assert_eq!(result.diagnostics[3].source, ComponentSource::NullSpace);
        for i in 1..4 {
            assert!(result.apriori_eigenvalues[i - 1] >= result.apriori_eigenvalues[i]);
        }
    }

    #[test]
    fn sigma_schedule_is_geometric() {
        let x = gaussian_data(6, 200, &[2.0, 1.0, 0.5]);
        let cfg = McpiConfig {
            n_decay: 12,
            ..McpiConfig::default()
        };
        let result = fit(&x, &cfg).unwrap();
        for (i, d) in result.diagnostics.iter().take(2).enumerate() {
            let s0 = result.apriori_eigenvalues[i].sqrt();
            assert_eq!(d.initial_sigma, Some(s0));
            for (j, s) in d.sigmas.iter().enumerate() {
                assert_eq!(*s, s0 * cfg.eta.powi(j as i32));
            }
            assert_eq!(
                d.final_sigma,
                Some(s0 * cfg.eta.powi(d.decay_rounds as i32))
            );
        }
    }

    #[test]
    fn fit_with_one_variable() {
        let x = DataMatrix::from_rows(&[vec![1.0], vec![2.0], vec![0.5]]).unwrap();
        let result = fit(&x, &McpiConfig::default()).unwrap();
        assert_eq!(result.components, Matrix::from_element(1, 1, 1.0));
    }

    #[test]
    fn fit_rejects_degenerate_inputs() {
        let short = DataMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0]]).unwrap();
        assert!(matches!(
            fit(&short, &McpiConfig::default()),
            Err(Error::Degenerate(_))
        ));
        let flat =
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![-1.0, -2.0]]).unwrap();
        assert!(matches!(
            fit(&flat, &McpiConfig::default()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn standard_pca_is_the_scaled_scatter_evd() {
        let x = gaussian_data(7, 100, &[1.0, 2.0, 3.0]);
        let pca = standard_pca(&x, false).unwrap();
        let evd = sym_evd(&(x.scatter() / 100.0)).unwrap();
        assert_eq!(pca.components, evd.vectors);
        assert_eq!(pca.apriori_eigenvalues, evd.values);
    }

    #[test]
    fn standard_pca_on_axis_data() {
        let x = DataMatrix::from_rows(&[
            vec![3.0, 0.0],
            vec![-3.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ])
        .unwrap();
        let pca = standard_pca(&x, false).unwrap();
        assert_eq!(pca.components, Matrix::identity(2, 2));
    }

    #[test]
    fn centering_removes_the_mean() {
        let base = gaussian_data(8, 300, &[2.0, 1.0, 0.5]);
        let shifted = DataMatrix::new(Matrix::from_fn(300, 3, |i, j| {
            base.as_matrix()[(i, j)] + [10.0, -4.0, 2.0][j]
        }))
        .unwrap();
        let a = standard_pca(&base.centered(), false).unwrap();
        let b = standard_pca(&shifted, true).unwrap();
        assert!((a.components - b.components).amax() <= 1e-9);
        assert!(b.mean.is_some());
    }
}
