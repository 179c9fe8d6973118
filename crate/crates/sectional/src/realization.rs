//! Geometric realization of a prescribed curvature interval: choose
//! eigenvalues whose pairwise products span the interval, embed a graph
//! hypersurface with that second fundamental form, and verify the interval
//! by finite-difference curvature at the base point.

use std::fmt;

use serde::Serialize;

use crate::curvature::{to_dense, CanonicalTensor, CurvatureError, DenseTensor};
use crate::linalg::{SymmetricForm, Vector};
use crate::oracle::{estimate_range, OracleError};

/// Largest tolerated curvature-identity violation in the finite-difference
/// tensor; beyond it the step is unusable.
pub const SYMMETRY_VIOLATION_LIMIT: f64 = 1e-3;

/// Default finite-difference step: small enough for second-order accuracy
/// at unit-scale shapes, large enough to stay above roundoff noise.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Monte-Carlo budget of the default range measurement.
pub const DEFAULT_RANGE_SAMPLES: usize = 4096;

/// Refinement sweeps for each extremal candidate of the measured range.
const RANGE_REFINEMENT_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub enum RealizationError {
    /// No eigenvalue list has a negative maximal pairwise product: among any
    /// three reals two share a sign or one is zero.
    UnrealizableInterval { a: f64, b: f64 },
    IntervalInverted { a: f64, b: f64 },
    DimensionTooSmall { dim: usize },
    /// Finite differences at this step break the curvature identities.
    StepTooLarge { step: f64, violation: f64 },
    Curvature(CurvatureError),
    Oracle(OracleError),
}

impl fmt::Display for RealizationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizationError::UnrealizableInterval { a, b } => {
                write!(f, "no realization exists for [{a}, {b}]: the maximum must be nonnegative")
            }
            RealizationError::IntervalInverted { a, b } => {
                write!(f, "interval endpoints are inverted: {a} > {b}")
            }
            RealizationError::DimensionTooSmall { dim } => {
                write!(f, "interval realization needs dimension at least 3, got {dim}")
            }
            RealizationError::StepTooLarge { step, violation } => {
                write!(
                    f,
                    "finite differences at step {step} violate curvature identities by \
                     {violation}, above the usable limit {SYMMETRY_VIOLATION_LIMIT}"
                )
            }
            RealizationError::Curvature(err) => write!(f, "{err}"),
            RealizationError::Oracle(err) => write!(f, "{err}"),
        }
    }
}

impl std::error::Error for RealizationError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            RealizationError::Curvature(err) => Some(err),
            RealizationError::Oracle(err) => Some(err),
            _ => None,
        }
    }
}

impl From<CurvatureError> for RealizationError {
    fn from(err: CurvatureError) -> Self {
        RealizationError::Curvature(err)
    }
}

impl From<OracleError> for RealizationError {
    fn from(err: OracleError) -> Self {
        RealizationError::Oracle(err)
    }
}

/// Eigenvalues whose pairwise products have minimum `a` and maximum `b`.
/// Two copies of sqrt(b) pin the maximum; a/sqrt(b) against them pins the
/// minimum. Padding repeats sqrt(b) when every product must stay positive
/// and uses zeros otherwise. A zero maximum forces the pattern (t, a/t, 0).
pub fn eigenvalues_for_interval(a: f64, b: f64, n: usize) -> Result<Vec<f64>, RealizationError> {
    if n < 3 {
        return Err(RealizationError::DimensionTooSmall { dim: n });
    }
    if a > b {
        return Err(RealizationError::IntervalInverted { a, b });
    }
    if b < 0.0 {
        return Err(RealizationError::UnrealizableInterval { a, b });
    }
    let mut lambdas = Vec::with_capacity(n);
    if b > 0.0 {
        let root = b.sqrt();
        lambdas.extend([root, root, a / root]);
        let pad = if a > 0.0 { root } else { 0.0 };
        lambdas.resize(n, pad);
    } else {
        let t = 1.0_f64.max(a.abs().sqrt());
        lambdas.extend([t, a / t]);
        lambdas.resize(n, 0.0);
    }
    Ok(lambdas)
}

/// The graph of h(x) = half the lambda-weighted sum of squares, embedded in
/// Euclidean space one dimension up. At the origin the induced metric is the
/// identity and the second fundamental form is diag(lambda), so the ambient
/// flatness makes the curvature there the canonical tensor of diag(lambda).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypersurface {
    dim: usize,
    shape: Vec<f64>,
}

impl Hypersurface {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &[f64] {
        &self.shape
    }

    /// Height of the graph over chart coordinates.
    pub fn height(&self, x: &Vector) -> f64 {
        assert_eq!(x.dim(), self.dim);
        0.5 * self.shape.iter().zip(x.as_slice()).map(|(l, xi)| l * xi * xi).sum::<f64>()
    }

    /// The embedded point (x, h(x)).
    pub fn graph_point(&self, x: &Vector) -> Vec<f64> {
        let mut point = x.as_slice().to_vec();
        point.push(self.height(x));
        point
    }
}

pub fn build_hypersurface(lambdas: &[f64]) -> Hypersurface {
    assert!(lambdas.len() >= 2);
    assert!(lambdas.iter().all(|l| l.is_finite()));
    Hypersurface { dim: lambdas.len(), shape: lambdas.to_vec() }
}

/// Induced metric of the graph embedding at chart coordinates `x`:
/// the identity plus the outer product of the height gradient.
pub fn metric_at(s: &Hypersurface, x: &Vector) -> SymmetricForm {
    let n = s.dim();
    assert_eq!(x.dim(), n);
    assert!(x.is_finite());
    let gradient: Vec<f64> = s.shape.iter().zip(x.as_slice()).map(|(l, xi)| l * xi).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let kronecker = if i == j { 1.0 } else { 0.0 };
            data[i * n + j] = kronecker + gradient[i] * gradient[j];
        }
    }
    SymmetricForm::from_raw(n, data)
}

/// Finite-difference curvature components at the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureAtPoint {
    pub components: DenseTensor,
    pub step: f64,
}

/// Gauss-Jordan inverse with partial pivoting. The graph metric is the
/// identity plus a rank-one positive term, so it is always invertible.
fn invert(g: &SymmetricForm) -> Vec<Vec<f64>> {
    let n = g.dim();
    let mut a = g.rows();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .expect("column range is nonempty");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let lead = a[col][col];
        assert!(lead != 0.0, "graph metric is positive definite");
        for j in 0..n {
            a[col][j] /= lead;
            inv[col][j] /= lead;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..n {
                a[row][j] -= factor * a[col][j];
                inv[row][j] -= factor * inv[col][j];
            }
        }
    }
    inv
}

fn shifted(x: &Vector, axis: usize, delta: f64) -> Vector {
    let mut entries = x.as_slice().to_vec();
    entries[axis] += delta;
    Vector::new(entries)
}

/// Christoffel symbols gamma[k][i][j] at `x` from central differences of the
/// induced metric.
fn christoffels(s: &Hypersurface, x: &Vector, step: f64) -> Vec<Vec<Vec<f64>>> {
    let n = s.dim();
    let inverse = invert(&metric_at(s, x));
    // dg[l][i][j] approximates the l-th partial of g_ij
    let dg: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|l| {
            let plus = metric_at(s, &shifted(x, l, step));
            let minus = metric_at(s, &shifted(x, l, -step));
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (plus.entry(i, j) - minus.entry(i, j)) / (2.0 * step))
                        .collect()
                })
                .collect()
        })
        .collect();
    (0..n)
        .map(|k| {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            0.5 * (0..n)
                                .map(|l| {
                                    inverse[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])
                                })
                                .sum::<f64>()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Curvature components R(e_i, e_j, e_k, e_l) at the base point from central
/// differences of the Christoffel symbols plus their quadratic terms, all
/// indices lowered by the metric at the base point.
pub fn curvature_at_point(
    s: &Hypersurface,
    step: f64,
) -> Result<CurvatureAtPoint, RealizationError> {
    assert!(step > 0.0);
    let n = s.dim();
    let origin = Vector::zeros(n);
    let at_origin = christoffels(s, &origin, step);
    // dgamma[m][k][i][j] approximates the m-th partial of gamma[k][i][j]
    let dgamma: Vec<Vec<Vec<Vec<f64>>>> = (0..n)
        .map(|m| {
            let plus = christoffels(s, &shifted(&origin, m, step), step);
            let minus = christoffels(s, &shifted(&origin, m, -step), step);
            (0..n)
                .map(|k| {
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| (plus[k][i][j] - minus[k][i][j]) / (2.0 * step))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let metric = metric_at(s, &origin);
    let mut components = DenseTensor::zeros(n)?;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // upper[m] carries the endomorphism applied to e_k
                let upper: Vec<f64> = (0..n)
                    .map(|m| {
                        let derivative = dgamma[i][m][j][k] - dgamma[j][m][i][k];
                        let quadratic: f64 = (0..n)
                            .map(|p| {
                                at_origin[m][i][p] * at_origin[p][j][k]
                                    - at_origin[m][j][p] * at_origin[p][i][k]
                            })
                            .sum();
                        derivative + quadratic
                    })
                    .collect();
                for l in 0..n {
                    let lowered: f64 =
                        (0..n).map(|m| metric.entry(l, m) * upper[m]).sum();
                    components.set(i, j, k, l, lowered);
                }
            }
        }
    }
    let violation = components.identity_residuals().max();
    if violation > SYMMETRY_VIOLATION_LIMIT {
        return Err(RealizationError::StepTooLarge { step, violation });
    }
    Ok(CurvatureAtPoint { components, step })
}

/// End-to-end realization evidence for one interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationReport {
    pub target: (f64, f64),
    pub eigenvalues: Vec<f64>,
    pub measured_range: (f64, f64),
    pub max_symmetry_violation: f64,
    pub max_component_error: f64,
    pub step: f64,
}

/// Realizes [a, b] and measures it back: eigenvalue choice, graph
/// hypersurface, finite-difference curvature, then the estimated range of
/// that measured tensor, with its deviation from the exact canonical tensor
/// of the chosen eigenvalues.
pub fn realize_interval_with(
    a: f64,
    b: f64,
    n: usize,
    step: f64,
    samples: usize,
    seed: u64,
) -> Result<RealizationReport, RealizationError> {
    let eigenvalues = eigenvalues_for_interval(a, b, n)?;
    let surface = build_hypersurface(&eigenvalues);
    let measured = curvature_at_point(&surface, step)?;
    let exact = to_dense(&CanonicalTensor::new(SymmetricForm::diagonal(&eigenvalues)))?;
    let estimate =
        estimate_range(&measured.components, n, samples, RANGE_REFINEMENT_SWEEPS, seed)?;
    Ok(RealizationReport {
        target: (a, b),
        eigenvalues,
        measured_range: (estimate.min_value, estimate.max_value),
        max_symmetry_violation: measured.components.identity_residuals().max(),
        max_component_error: measured.components.max_difference(&exact),
        step: measured.step,
    })
}

/// [`realize_interval_with`] at the default sampling budget and seed 0.
pub fn realize_interval(
    a: f64,
    b: f64,
    n: usize,
    step: f64,
) -> Result<RealizationReport, RealizationError> {
    realize_interval_with(a, b, n, step, DEFAULT_RANGE_SAMPLES, 0)
}
