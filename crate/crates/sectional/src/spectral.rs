//! Constructive symmetric eigensolver. The recursive mode extracts
//! eigenvectors from extremal 2-planes of the form's curvature tensor and
//! deflates; the sweep mode applies the same 2x2 rotation at the largest
//! off-diagonal pivot until the matrix is diagonal.

use std::fmt;

use serde::Serialize;

use crate::curvature::{plane_curvature, CanonicalTensor, TwoPlane};
use crate::linalg::{
    complete_frame, diagonalizing_rotation, restrict_form, Frame, SymmetricForm, Vector,
};
use crate::oracle::{polish_plane, refine_plane, sample_planes, RefineMode};

/// Minor tolerance below which a form's curvature tensor counts as zero.
pub const CURVATURE_ZERO_TOL: f64 = 1e-12;

/// Forms with no entry above this are treated as the zero form.
pub const ZERO_FORM_TOL: f64 = 1e-12;

/// Default solver tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// An extremal-plane eigenvector is accepted when its residual is below
/// this multiple of tol * the form's entry scale.
const ACCEPT_RESIDUAL_FACTOR: f64 = 10.0;

/// Failed acceptance triggers up to this many single-sweep re-refinements
/// before the solver falls back to sweep mode for the subproblem.
const EXTRA_REFINEMENTS: usize = 3;

/// Sweep budget per extremal-plane search.
const EXTREMAL_SWEEPS: usize = 60;

/// Sweep mode errors out after 50 n^2 rotations.
const SWEEP_ROTATION_FACTOR: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    RankAboveOne { largest_minor: f64 },
    ConvergenceFailure { iterations: usize, residual: f64 },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::RankAboveOne { largest_minor } => {
                write!(f, "form has a 2x2 minor of magnitude {largest_minor:e}; rank exceeds 1")
            }
            SpectralError::ConvergenceFailure { iterations, residual } => {
                write!(
                    f,
                    "rotation sweeps stalled after {iterations} rotations at off-diagonal residual {residual:e}"
                )
            }
        }
    }
}

impl std::error::Error for SpectralError {}

/// Which construction produced a result: `Paper` deflates along eigenvectors
/// read off extremal 2-planes, `Sweep` rotates away the largest off-diagonal
/// pivot until none is left. The lowercase token names are the CLI and JSON
/// vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralMode {
    Paper,
    Sweep,
}

/// An orthonormal eigenframe with its eigenvalues. `iterations` counts
/// accepted deflation steps in `Paper` mode (plus rotations of any sweep
/// fallback) and rotations in `Sweep` mode; `max_offdiagonal` is
/// max |phi(f_i, f_j)| over i != j, recomputed from the input form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    pub frame: Frame,
    pub mode: SpectralMode,
    pub iterations: usize,
    pub max_offdiagonal: f64,
}

impl SpectralResult {
    /// Entrywise max |sum_i lambda_i f_i f_i^T - phi|.
    pub fn reconstruction_error(&self, phi: &SymmetricForm) -> f64 {
        let n = phi.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut entry = 0.0;
                for (lambda, f) in self.eigenvalues.iter().zip(self.frame.vectors()) {
                    entry += lambda * f[i] * f[j];
                }
                worst = worst.max((entry - phi.entry(i, j)).abs());
            }
        }
        worst
    }

    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut sorted = self.eigenvalues.clone();
        sorted.sort_by(f64::total_cmp);
        sorted
    }
}

fn largest_minor(phi: &SymmetricForm) -> f64 {
    let n = phi.dim();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in (k + 1)..n {
                    let minor = phi.entry(i, k) * phi.entry(j, l) - phi.entry(i, l) * phi.entry(j, k);
                    worst = worst.max(minor.abs());
                }
            }
        }
    }
    worst
}

/// True when every 2x2 minor of the form is at most tol * max(1, scale^2),
/// which is exactly when the form's curvature tensor vanishes at tolerance:
/// the tensor's components on basis vectors are these minors.
pub fn is_curvature_zero(phi: &SymmetricForm, tol: f64) -> bool {
    assert!(tol > 0.0);
    let scale = phi.max_abs();
    largest_minor(phi) <= tol * (scale * scale).max(1.0)
}

/// ||A v - (v^T A v) v|| for a unit vector v; zero exactly when v is an
/// eigenvector.
pub fn eigen_residual(phi: &SymmetricForm, v: &Vector) -> f64 {
    assert!((v.norm() - 1.0).abs() <= 1e-10);
    let image = phi.apply(v);
    let rayleigh = image.dot(v);
    let mut residual = image;
    residual.add_scaled(-rayleigh, v);
    residual.norm()
}

enum RankOne {
    Zero,
    Principal { f1: Vector, lambda: f64 },
}

fn rank_one_principal(phi: &SymmetricForm) -> RankOne {
    let n = phi.dim();
    if phi.max_abs() <= ZERO_FORM_TOL {
        return RankOne::Zero;
    }
    let mut best = 0usize;
    let mut best_norm = -1.0_f64;
    for j in 0..n {
        let norm = (0..n).map(|i| phi.entry(i, j) * phi.entry(i, j)).sum::<f64>().sqrt();
        if norm > best_norm {
            best = j;
            best_norm = norm;
        }
    }
    let column = Vector::new((0..n).map(|i| phi.entry(i, best)).collect());
    let f1 = column.scaled(1.0 / best_norm);
    let lambda = phi.eval(&f1, &f1);
    RankOne::Principal { f1, lambda }
}

fn standard_vectors(n: usize) -> Vec<Vector> {
    (0..n).map(|i| Vector::standard_basis(n, i)).collect()
}

fn frame_offdiagonal(phi: &SymmetricForm, vectors: &[Vector]) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..vectors.len() {
        let image = phi.apply(&vectors[i]);
        for v in vectors.iter().skip(i + 1) {
            worst = worst.max(image.dot(v).abs());
        }
    }
    worst
}

/// Spectrum of a form whose curvature tensor vanishes, hence whose rank is
/// at most 1: the unit principal column is the only eigenvector with a
/// possibly nonzero eigenvalue. Forms with every entry at or below
/// [`ZERO_FORM_TOL`] get the zero spectrum on the standard basis.
pub fn rank_one_spectrum(phi: &SymmetricForm) -> Result<SpectralResult, SpectralError> {
    if !is_curvature_zero(phi, CURVATURE_ZERO_TOL) {
        return Err(SpectralError::RankAboveOne { largest_minor: largest_minor(phi) });
    }
    let n = phi.dim();
    let (eigenvalues, vectors) = match rank_one_principal(phi) {
        RankOne::Zero => (vec![0.0; n], standard_vectors(n)),
        RankOne::Principal { f1, lambda } => {
            let partial = Frame::new(vec![f1]).expect("normalized column is a unit vector");
            let full = complete_frame(&partial);
            let mut eigenvalues = vec![0.0; n];
            eigenvalues[0] = lambda;
            (eigenvalues, full.vectors().to_vec())
        }
    };
    let max_offdiagonal = frame_offdiagonal(phi, &vectors);
    let frame = Frame::new(vectors).expect("completion yields an orthonormal frame");
    Ok(SpectralResult { eigenvalues, frame, mode: SpectralMode::Paper, iterations: 0, max_offdiagonal })
}

fn level_seed(seed: u64, level: u64) -> u64 {
    seed.wrapping_add(level.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A plane of (approximately) maximal |kappa|: refine the best sampled plane
/// upward and the worst downward, keep whichever lands further from zero.
/// Any critical plane with nonzero curvature supports eigenvector
/// extraction, so global optimality is not required.
fn extremal_curvature_plane(t: &CanonicalTensor, dim: usize, seed: u64) -> TwoPlane {
    let count = 16.max(2 * dim);
    let planes: Vec<TwoPlane> =
        sample_planes(dim, count, seed).expect("solver dimension is at least 2").collect();
    let kappas: Vec<f64> = planes.iter().map(|plane| plane_curvature(t, plane)).collect();
    let mut hi = 0usize;
    let mut lo = 0usize;
    for (i, kappa) in kappas.iter().enumerate().skip(1) {
        if *kappa > kappas[hi] {
            hi = i;
        }
        if *kappa < kappas[lo] {
            lo = i;
        }
    }
    let up = refine_plane(t, &planes[hi], EXTREMAL_SWEEPS, RefineMode::Maximize);
    let down = refine_plane(t, &planes[lo], EXTREMAL_SWEEPS, RefineMode::Minimize);
    if plane_curvature(t, &up).abs() >= plane_curvature(t, &down).abs() {
        up
    } else {
        down
    }
}

fn lift(coefficients: &Vector, basis: &[Vector]) -> Vector {
    let mut v = Vector::zeros(basis[0].dim());
    for (j, b) in basis.iter().enumerate() {
        v.add_scaled(coefficients[j], b);
    }
    v
}

/// Core recursion: returns eigenvalues and eigenvectors in phi's own
/// coordinates, accumulating step counts into `iterations`. Restricted
/// forms can have larger entries than the original input, so residual
/// thresholds stay pinned to the original entry scale passed down as
/// `scale`.
fn solve_level(
    phi: &SymmetricForm,
    tol: f64,
    scale: f64,
    seed: u64,
    level: u64,
    iterations: &mut usize,
) -> Result<(Vec<f64>, Vec<Vector>), SpectralError> {
    let n = phi.dim();
    if n == 1 {
        return Ok((vec![phi.entry(0, 0)], vec![Vector::new(vec![1.0])]));
    }

    if is_curvature_zero(phi, CURVATURE_ZERO_TOL) {
        return match rank_one_principal(phi) {
            RankOne::Zero => Ok((vec![0.0; n], standard_vectors(n))),
            RankOne::Principal { f1, lambda } => {
                *iterations += 1;
                deflate(phi, tol, scale, seed, level, iterations, vec![(f1, lambda)])
            }
        };
    }

    let t = CanonicalTensor::new(phi.clone());
    let accept = ACCEPT_RESIDUAL_FACTOR * tol * scale;
    let tight = tol * scale;
    let mut plane = extremal_curvature_plane(&t, n, level_seed(seed, level));
    let mut taken: Vec<(Vector, f64)> = Vec::new();
    let mut taken_residual = f64::INFINITY;
    // each extra sweep re-zeroes the cross terms analytically, cutting the
    // residual roughly quadratically; stop as soon as it is below tol * scale
    for round in 0..=EXTRA_REFINEMENTS {
        let restricted = restrict_form(phi, plane.frame()).expect("plane lives in phi's space");
        let rotation = diagonalizing_rotation(
            restricted.entry(0, 0),
            restricted.entry(0, 1),
            restricted.entry(1, 1),
        );
        let (u, v) = plane.basis();
        let (f1, f2) = rotation.rotate_pair(u, v);
        let mut round_taken: Vec<(Vector, f64)> = Vec::new();
        let mut round_residual = 0.0_f64;
        for f in [f1, f2] {
            let residual = eigen_residual(phi, &f);
            if residual <= accept {
                let lambda = phi.eval(&f, &f);
                round_taken.push((f, lambda));
                round_residual = round_residual.max(residual);
            }
        }
        if !round_taken.is_empty() && round_residual < taken_residual {
            taken = round_taken;
            taken_residual = round_residual;
        }
        if taken_residual <= tight {
            break;
        }
        if round < EXTRA_REFINEMENTS {
            let mode = if plane_curvature(&t, &plane) >= 0.0 {
                RefineMode::Maximize
            } else {
                RefineMode::Minimize
            };
            plane = polish_plane(&t, &plane, mode);
        }
    }

    if taken.is_empty() || taken_residual > tight {
        // the plane never became extremal enough to pin both directions down
        // to tol * scale; the sweep solver finishes this subproblem, stopping
        // at the original scale's threshold
        let sub = sweep_core(phi, tight)?;
        *iterations += sub.iterations;
        return Ok((sub.eigenvalues, sub.frame.vectors().to_vec()));
    }

    *iterations += taken.len();
    deflate(phi, tol, scale, seed, level, iterations, taken)
}

/// Removes the accepted eigenvectors, solves the restriction of phi to
/// their orthogonal complement, and lifts the sub-eigenvectors back.
fn deflate(
    phi: &SymmetricForm,
    tol: f64,
    scale: f64,
    seed: u64,
    level: u64,
    iterations: &mut usize,
    accepted: Vec<(Vector, f64)>,
) -> Result<(Vec<f64>, Vec<Vector>), SpectralError> {
    let mut eigenvalues: Vec<f64> = accepted.iter().map(|(_, lambda)| *lambda).collect();
    let mut vectors: Vec<Vector> = accepted.into_iter().map(|(f, _)| f).collect();
    let k = vectors.len();
    let partial = Frame::new(vectors.clone()).expect("accepted eigenvectors are orthonormal");
    let full = complete_frame(&partial);
    let rest = &full.vectors()[k..];
    if rest.is_empty() {
        return Ok((eigenvalues, vectors));
    }
    let rest_frame = Frame::new(rest.to_vec()).expect("frame completion is orthonormal");
    let sub_phi = restrict_form(phi, &rest_frame).expect("restriction to a frame of phi's space");
    let (sub_values, sub_vectors) = solve_level(&sub_phi, tol, scale, seed, level + 1, iterations)?;
    eigenvalues.extend(sub_values);
    vectors.extend(sub_vectors.iter().map(|s| lift(s, rest)));
    Ok((eigenvalues, vectors))
}

/// Eigensolver following the constructive route: find an extremal-curvature
/// 2-plane of R_phi, rotate its basis into eigenvectors, deflate, recurse;
/// rank-at-most-1 restrictions are handled in closed form. Deterministic in
/// (phi, tol, seed). Falls back to sweep mode on any subproblem whose
/// extremal plane fails the residual acceptance, which keeps the solver
/// total; convergence failure can then still propagate from the fallback.
pub fn paper_spectrum(
    phi: &SymmetricForm,
    tol: f64,
    seed: u64,
) -> Result<SpectralResult, SpectralError> {
    assert!(tol > 0.0);
    let mut iterations = 0usize;
    let scale = phi.max_abs();
    let (eigenvalues, vectors) = solve_level(phi, tol, scale, seed, 0, &mut iterations)?;
    let max_offdiagonal = frame_offdiagonal(phi, &vectors);
    let frame = Frame::new(vectors).expect("deflation returns an orthonormal frame");
    Ok(SpectralResult { eigenvalues, frame, mode: SpectralMode::Paper, iterations, max_offdiagonal })
}

/// Classical largest-pivot rotation sweeps: repeatedly zero the biggest
/// off-diagonal entry until every one is at most tol * the input's entry
/// scale. Errors out after 50 n^2 rotations.
pub fn sweep_spectrum(phi: &SymmetricForm, tol: f64) -> Result<SpectralResult, SpectralError> {
    assert!(tol > 0.0);
    sweep_core(phi, tol * phi.max_abs())
}

/// Sweep loop against an absolute off-diagonal threshold, so the recursive
/// mode's fallback can stop at the original input's scale.
fn sweep_core(phi: &SymmetricForm, threshold: f64) -> Result<SpectralResult, SpectralError> {
    let n = phi.dim();
    let cap = SWEEP_ROTATION_FACTOR * n * n;
    let mut a = phi.rows();
    let mut vectors = standard_vectors(n);
    let mut rotations = 0usize;

    loop {
        let mut p = 0usize;
        let mut q = 0usize;
        let mut pivot = -1.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                if a[i][j].abs() > pivot {
                    pivot = a[i][j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if pivot <= threshold {
            break;
        }
        if rotations == cap {
            return Err(SpectralError::ConvergenceFailure { iterations: rotations, residual: pivot });
        }

        let rotation = diagonalizing_rotation(a[p][p], a[p][q], a[q][q]);
        let (c, s) = (rotation.cos(), rotation.sin());
        for j in 0..n {
            if j == p || j == q {
                continue;
            }
            let apj = a[p][j];
            let aqj = a[q][j];
            let new_p = c * apj - s * aqj;
            let new_q = s * apj + c * aqj;
            a[p][j] = new_p;
            a[j][p] = new_p;
            a[q][j] = new_q;
            a[j][q] = new_q;
        }
        let app = a[p][p];
        let apq = a[p][q];
        let aqq = a[q][q];
        a[p][p] = c * c * app - 2.0 * c * s * apq + s * s * aqq;
        a[q][q] = s * s * app + 2.0 * c * s * apq + c * c * aqq;
        a[p][q] = 0.0;
        a[q][p] = 0.0;

        let old_p = vectors[p].clone();
        let old_q = vectors[q].clone();
        let mut new_p = old_p.scaled(c);
        new_p.add_scaled(-s, &old_q);
        let mut new_q = old_p.scaled(s);
        new_q.add_scaled(c, &old_q);
        vectors[p] = new_p;
        vectors[q] = new_q;
        rotations += 1;
    }

    let eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let max_offdiagonal = frame_offdiagonal(phi, &vectors);
    let frame = Frame::new(vectors).expect("rotations preserve orthonormality");
    Ok(SpectralResult {
        eigenvalues,
        frame,
        mode: SpectralMode::Sweep,
        iterations: rotations,
        max_offdiagonal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn form(rows: &[&[f64]]) -> SymmetricForm {
        let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        SymmetricForm::from_rows(&rows).unwrap()
    }

    fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, span: f64) -> SymmetricForm {
        let raw: Vec<Vec<f64>> =
            (0..n).map(|_| (0..n).map(|_| rng.random_range(-span..span)).collect()).collect();
        let mut sym = raw.clone();
        for i in 0..n {
            for j in 0..n {
                sym[i][j] = 0.5 * (raw[i][j] + raw[j][i]);
            }
        }
        SymmetricForm::from_rows(&sym).unwrap()
    }

    fn random_frame(rng: &mut ChaCha8Rng, n: usize) -> Frame {
        loop {
            let vectors: Vec<Vector> = (0..n)
                .map(|_| Vector::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()))
                .collect();
            if let Ok(frame) = crate::linalg::gram_schmidt(&vectors) {
                return frame;
            }
        }
    }

    #[test]
    fn outer_product_form_has_zero_curvature() {
        let u = [1.0, 2.0, 0.0];
        let rows: Vec<Vec<f64>> =
            (0..3).map(|i| (0..3).map(|j| u[i] * u[j]).collect()).collect();
        let phi = SymmetricForm::from_rows(&rows).unwrap();
        assert!(is_curvature_zero(&phi, CURVATURE_ZERO_TOL));
    }

    #[test]
    fn degenerate_diagonal_form_has_nonzero_curvature() {
        assert!(!is_curvature_zero(&SymmetricForm::diagonal(&[1.0, 1.0, 0.0]), CURVATURE_ZERO_TOL));
    }

    #[test]
    fn zero_form_has_zero_curvature() {
        assert!(is_curvature_zero(&SymmetricForm::zeros(3), CURVATURE_ZERO_TOL));
    }

    #[test]
    fn rank_one_of_zero_form_is_the_standard_basis() {
        let result = rank_one_spectrum(&SymmetricForm::zeros(3)).unwrap();
        assert_eq!(result.eigenvalues, vec![0.0, 0.0, 0.0]);
        for (i, v) in result.frame.vectors().iter().enumerate() {
            assert_eq!(v, &Vector::standard_basis(3, i));
        }
    }

    #[test]
    fn rank_one_of_basis_projector() {
        let phi = form(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]);
        let result = rank_one_spectrum(&phi).unwrap();
        assert_eq!(result.eigenvalues, vec![1.0, 0.0, 0.0]);
        assert_eq!(result.frame.get(0), &Vector::standard_basis(3, 0));
    }

    #[test]
    fn rank_one_recovers_scaled_unit_outer_product() {
        let u = [0.6, 0.8];
        let rows: Vec<Vec<f64>> =
            (0..2).map(|i| (0..2).map(|j| 2.0 * u[i] * u[j]).collect()).collect();
        let phi = SymmetricForm::from_rows(&rows).unwrap();
        let result = rank_one_spectrum(&phi).unwrap();
        assert!((result.eigenvalues[0] - 2.0).abs() <= 1e-12);
        assert_eq!(result.eigenvalues[1], 0.0);
        let f1 = result.frame.get(0);
        assert!((f1[0] - 0.6).abs() <= 1e-12 && (f1[1] - 0.8).abs() <= 1e-12);
    }

    #[test]
    fn rank_one_rejects_higher_rank() {
        let err = rank_one_spectrum(&SymmetricForm::diagonal(&[1.0, 1.0, 0.0])).unwrap_err();
        assert!(matches!(err, SpectralError::RankAboveOne { .. }));
    }

    #[test]
    fn residual_of_exact_eigenvector_is_zero() {
        assert_eq!(
            eigen_residual(&SymmetricForm::diagonal(&[1.0, 2.0]), &Vector::standard_basis(2, 0)),
            0.0
        );
        let antidiagonal = form(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let v = Vector::new(vec![1.0, 1.0]).scaled(1.0 / 2.0_f64.sqrt());
        assert!(eigen_residual(&antidiagonal, &v) <= 1e-15);
    }

    #[test]
    fn residual_of_a_swapped_basis_vector_is_one() {
        let antidiagonal = form(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(eigen_residual(&antidiagonal, &Vector::standard_basis(2, 0)), 1.0);
    }

    #[test]
    fn recursive_mode_diagonalizes_a_permuted_diagonal() {
        let result = paper_spectrum(&SymmetricForm::diagonal(&[3.0, 1.0, 2.0]), DEFAULT_TOL, 0).unwrap();
        let sorted = result.sorted_eigenvalues();
        for (got, want) in sorted.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() <= 1e-9, "got {sorted:?}");
        }
        // frame is a signed permutation of the standard basis
        for v in result.frame.vectors() {
            let close_to_axis = (0..3).any(|i| (v[i].abs() - 1.0).abs() <= 1e-8);
            assert!(close_to_axis, "vector {v:?} is not a basis axis");
        }
        assert_eq!(result.mode, SpectralMode::Paper);
    }

    #[test]
    fn recursive_mode_splits_the_antidiagonal() {
        let result = paper_spectrum(&form(&[&[0.0, 1.0], &[1.0, 0.0]]), DEFAULT_TOL, 0).unwrap();
        let sorted = result.sorted_eigenvalues();
        assert!((sorted[0] + 1.0).abs() <= 1e-9 && (sorted[1] - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn recursive_mode_block_example() {
        let phi = form(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let result = paper_spectrum(&phi, DEFAULT_TOL, 0).unwrap();
        let sorted = result.sorted_eigenvalues();
        for (got, want) in sorted.iter().zip([1.0, 3.0, 5.0]) {
            assert!((got - want).abs() <= 1e-9, "got {sorted:?}");
        }
    }

    #[test]
    fn recursive_mode_handles_rank_one_with_deflation() {
        let u = [0.5, -0.5, 0.5, 0.5];
        let rows: Vec<Vec<f64>> =
            (0..4).map(|i| (0..4).map(|j| 3.0 * u[i] * u[j]).collect()).collect();
        let phi = SymmetricForm::from_rows(&rows).unwrap();
        let result = paper_spectrum(&phi, DEFAULT_TOL, 1).unwrap();
        let sorted = result.sorted_eigenvalues();
        assert!((sorted[3] - 3.0).abs() <= 1e-10);
        for value in &sorted[..3] {
            assert!(value.abs() <= 1e-10);
        }
        assert!(result.reconstruction_error(&phi) <= 1e-10);
    }

    #[test]
    fn recursive_mode_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let phi = random_symmetric(&mut rng, 6, 2.0);
        let a = paper_spectrum(&phi, DEFAULT_TOL, 123).unwrap();
        let b = paper_spectrum(&phi, DEFAULT_TOL, 123).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_mode_leaves_diagonal_input_alone() {
        let result = sweep_spectrum(&SymmetricForm::diagonal(&[4.0, -1.0, 2.0]), DEFAULT_TOL).unwrap();
        assert_eq!(result.iterations, 0);
        assert_eq!(result.eigenvalues, vec![4.0, -1.0, 2.0]);
        for (i, v) in result.frame.vectors().iter().enumerate() {
            assert_eq!(v, &Vector::standard_basis(3, i));
        }
        assert_eq!(result.mode, SpectralMode::Sweep);
    }

    #[test]
    fn sweep_mode_rank_one_constant_matrix() {
        let result = sweep_spectrum(&form(&[&[1.0, 1.0], &[1.0, 1.0]]), DEFAULT_TOL).unwrap();
        assert_eq!(result.iterations, 1);
        let sorted = result.sorted_eigenvalues();
        assert!(sorted[0].abs() <= 1e-12 && (sorted[1] - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn modes_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for trial in 0..20 {
            let n = rng.random_range(2..=8);
            let phi = random_symmetric(&mut rng, n, 2.0);
            let a = paper_spectrum(&phi, DEFAULT_TOL, trial).unwrap();
            let b = sweep_spectrum(&phi, DEFAULT_TOL).unwrap();
            for (x, y) in a.sorted_eigenvalues().iter().zip(b.sorted_eigenvalues()) {
                assert!((x - y).abs() <= 1e-8, "trial {trial}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn both_modes_satisfy_the_frame_and_reconstruction_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for trial in 0..30 {
            let n = rng.random_range(2..=10);
            let phi = random_symmetric(&mut rng, n, 3.0);
            let scale = phi.max_abs();
            for result in [
                paper_spectrum(&phi, DEFAULT_TOL, trial).unwrap(),
                sweep_spectrum(&phi, DEFAULT_TOL).unwrap(),
            ] {
                assert!(result.frame.gram_error() <= 1e-10);
                assert!(result.reconstruction_error(&phi) <= 1e-8 * scale);
                assert!(result.max_offdiagonal <= DEFAULT_TOL * scale, "{}", result.max_offdiagonal);
                for (lambda, f) in result.eigenvalues.iter().zip(result.frame.vectors()) {
                    assert!((phi.eval(f, f) - lambda).abs() <= DEFAULT_TOL * scale);
                }
            }
        }
    }

    #[test]
    fn eigenvalues_are_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for trial in 0..10 {
            let n = rng.random_range(2..=8);
            let phi = random_symmetric(&mut rng, n, 2.0);
            let frame = random_frame(&mut rng, n);
            let conjugated = restrict_form(&phi, &frame).unwrap();
            let a = sweep_spectrum(&phi, DEFAULT_TOL).unwrap();
            let b = sweep_spectrum(&conjugated, DEFAULT_TOL).unwrap();
            for (x, y) in a.sorted_eigenvalues().iter().zip(b.sorted_eigenvalues()) {
                assert!((x - y).abs() <= 1e-8, "trial {trial}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn known_spectra_roundtrip_through_both_modes() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for trial in 0..10 {
            let n = rng.random_range(2..=8);
            let wanted: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let frame = random_frame(&mut rng, n);
            let phi = restrict_form(&SymmetricForm::diagonal(&wanted), &frame).unwrap();
            let mut sorted_wanted = wanted.clone();
            sorted_wanted.sort_by(f64::total_cmp);
            for result in [
                paper_spectrum(&phi, DEFAULT_TOL, trial).unwrap(),
                sweep_spectrum(&phi, DEFAULT_TOL).unwrap(),
            ] {
                for (x, y) in result.sorted_eigenvalues().iter().zip(&sorted_wanted) {
                    assert!((x - y).abs() <= 1e-8, "trial {trial}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn result_serializes_with_the_contract_fields() {
        let result = sweep_spectrum(&SymmetricForm::diagonal(&[1.0, 2.0]), DEFAULT_TOL).unwrap();
        let json = serde_json::to_value(&result).unwrap();
        assert_eq!(json["eigenvalues"], serde_json::json!([1.0, 2.0]));
        assert_eq!(json["frame"], serde_json::json!([[1.0, 0.0], [0.0, 1.0]]));
        assert_eq!(json["mode"], "sweep");
        assert_eq!(json["iterations"], 0);
        assert_eq!(json["max_offdiagonal"], 0.0);
    }
}
