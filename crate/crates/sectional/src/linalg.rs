//! Small dense vectors, symmetric bilinear forms, orthonormal frames, and the
//! closed-form 2x2 diagonalizing rotation used everywhere else in the crate.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::ops::Index;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};

/// Maximum allowed deviation of a frame's Gram matrix from the identity.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Dependence threshold for orthonormalization, relative to the largest input norm.
pub const RANK_TOL: f64 = 1e-10;

/// Allowed asymmetry in raw matrix input, relative to the largest entry.
pub const ASYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    EmptyInput,
    DimensionMismatch { expected: usize, found: usize },
    NotSquare { dim: usize, row: usize, len: usize },
    NonFinite { row: usize, col: usize },
    NonSymmetric { row: usize, col: usize, delta: f64 },
    DependentInput { index: usize },
    NotOrthonormal { i: usize, j: usize, inner: f64 },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::EmptyInput => write!(f, "input contains no entries"),
            LinalgError::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            LinalgError::NotSquare { dim, row, len } => {
                write!(f, "matrix with {dim} rows has row {row} of length {len}")
            }
            LinalgError::NonFinite { row, col } => {
                write!(f, "non-finite entry at ({row}, {col})")
            }
            LinalgError::NonSymmetric { row, col, delta } => {
                write!(
                    f,
                    "asymmetric entry pair ({row}, {col}) and ({col}, {row}): difference {delta:e}"
                )
            }
            LinalgError::DependentInput { index } => {
                write!(f, "vector {index} is linearly dependent on its predecessors")
            }
            LinalgError::NotOrthonormal { i, j, inner } => {
                write!(f, "vectors {i} and {j} are not orthonormal: inner product {inner}")
            }
        }
    }
}

impl std::error::Error for LinalgError {}

/// A vector of V in coordinates on the fixed ambient orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Self {
        assert!(!entries.is_empty(), "vectors have at least one entry");
        Vector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector::new(vec![0.0; dim])
    }

    /// The i-th standard basis vector of R^dim.
    pub fn standard_basis(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut entries = vec![0.0; dim];
        entries[index] = 1.0;
        Vector(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|e| e.is_finite())
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, c: f64) -> Vector {
        Vector(self.0.iter().map(|e| c * e).collect())
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, c: f64, other: &Vector) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += c * b;
        }
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

/// A symmetric bilinear form phi, stored as its matrix on the ambient basis.
/// The matrix is exactly symmetric by construction; raw input is validated
/// against [`ASYMMETRY_TOL`] and then averaged with its transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricForm {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(LinalgError::EmptyInput);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(LinalgError::NotSquare { dim, row: i, len: row.len() });
            }
            for (j, e) in row.iter().enumerate() {
                if !e.is_finite() {
                    return Err(LinalgError::NonFinite { row: i, col: j });
                }
            }
        }
        let scale = rows
            .iter()
            .flatten()
            .fold(0.0_f64, |m, e| m.max(e.abs()));
        for i in 0..dim {
            for j in (i + 1)..dim {
                let delta = (rows[i][j] - rows[j][i]).abs();
                if delta > ASYMMETRY_TOL * scale {
                    return Err(LinalgError::NonSymmetric { row: i, col: j, delta });
                }
            }
        }
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let value = 0.5 * (rows[i][j] + rows[j][i]);
                data[i * dim + j] = value;
                data[j * dim + i] = value;
            }
        }
        Ok(SymmetricForm { dim, data })
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let dim = entries.len();
        assert!(dim > 0);
        let mut data = vec![0.0; dim * dim];
        for (i, e) in entries.iter().enumerate() {
            data[i * dim + i] = *e;
        }
        SymmetricForm { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        SymmetricForm::diagonal(&vec![1.0; dim])
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0);
        SymmetricForm { dim, data: vec![0.0; dim * dim] }
    }

    /// Builds directly from packed row-major data that is already symmetric.
    pub(crate) fn from_raw(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dim * dim);
        debug_assert!((0..dim).all(|i| (0..dim).all(|j| data[i * dim + j] == data[j * dim + i])));
        SymmetricForm { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.data[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect()
    }

    /// Matrix-vector product A x.
    pub fn apply(&self, x: &Vector) -> Vector {
        debug_assert_eq!(x.dim(), self.dim);
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            out[i] = row.iter().zip(x.as_slice()).map(|(a, b)| a * b).sum();
        }
        Vector(out)
    }

    /// phi(x, y) = <A x, y>.
    pub fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        self.apply(x).dot(y)
    }

    pub fn scaled(&self, c: f64) -> SymmetricForm {
        SymmetricForm {
            dim: self.dim,
            data: self.data.iter().map(|e| c * e).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, e| m.max(e.abs()))
    }
}

impl Serialize for SymmetricForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            dim: usize,
            matrix: Vec<Vec<f64>>,
        }
        Repr { dim: self.dim, matrix: self.rows() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymmetricForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            matrix: Vec<Vec<f64>>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.matrix.len() != repr.dim {
            return Err(serde::de::Error::custom(format!(
                "declared dim {} but matrix has {} rows",
                repr.dim,
                repr.matrix.len()
            )));
        }
        SymmetricForm::from_rows(&repr.matrix).map_err(serde::de::Error::custom)
    }
}

/// An ordered list of k <= n orthonormal vectors in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<Vector>,
}

impl Frame {
    pub fn new(vectors: Vec<Vector>) -> Result<Self, LinalgError> {
        let first = vectors.first().ok_or(LinalgError::EmptyInput)?;
        let dim = first.dim();
        for v in &vectors {
            if v.dim() != dim {
                return Err(LinalgError::DimensionMismatch { expected: dim, found: v.dim() });
            }
            if !v.is_finite() {
                return Err(LinalgError::NonFinite { row: 0, col: 0 });
            }
        }
        if vectors.len() > dim {
            return Err(LinalgError::DependentInput { index: dim });
        }
        for i in 0..vectors.len() {
            for j in i..vectors.len() {
                let target = if i == j { 1.0 } else { 0.0 };
                let inner = vectors[i].dot(&vectors[j]);
                if (inner - target).abs() > ORTHONORMALITY_TOL {
                    return Err(LinalgError::NotOrthonormal { i, j, inner });
                }
            }
        }
        Ok(Frame { dim, vectors })
    }

    pub(crate) fn new_unchecked(dim: usize, vectors: Vec<Vector>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.dim() == dim));
        let frame = Frame { dim, vectors };
        debug_assert!(frame.gram_error() <= ORTHONORMALITY_TOL);
        frame
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> &Vector {
        &self.vectors[i]
    }

    /// Max-norm deviation of the Gram matrix from the identity.
    pub fn gram_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.len() {
            for j in i..self.len() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.vectors[i].dot(&self.vectors[j]) - target).abs());
            }
        }
        worst
    }
}

impl Serialize for Frame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.vectors.len()))?;
        for v in &self.vectors {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

/// A plane rotation by theta, cached with its cosine and sine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation2 {
    theta: f64,
    cos: f64,
    sin: f64,
}

impl Rotation2 {
    pub fn new(theta: f64) -> Self {
        Rotation2 { theta, cos: theta.cos(), sin: theta.sin() }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cos(&self) -> f64 {
        self.cos
    }

    pub fn sin(&self) -> f64 {
        self.sin
    }

    /// The rotated pair f1 = cos(t) e1 - sin(t) e2, f2 = sin(t) e1 + cos(t) e2.
    pub fn rotate_pair(&self, e1: &Vector, e2: &Vector) -> (Vector, Vector) {
        let mut f1 = e1.scaled(self.cos);
        f1.add_scaled(-self.sin, e2);
        let mut f2 = e1.scaled(self.sin);
        f2.add_scaled(self.cos, e2);
        (f1, f2)
    }
}

/// Orthonormalizes `vectors` in order. The first output vector is a positive
/// multiple of the first input vector. Two projection passes per vector keep
/// the Gram error near machine precision even for ill-conditioned input.
pub fn gram_schmidt(vectors: &[Vector]) -> Result<Frame, LinalgError> {
    let first = vectors.first().ok_or(LinalgError::EmptyInput)?;
    let dim = first.dim();
    for (i, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(LinalgError::DimensionMismatch { expected: dim, found: v.dim() });
        }
        if let Some(j) = v.as_slice().iter().position(|e| !e.is_finite()) {
            return Err(LinalgError::NonFinite { row: i, col: j });
        }
    }
    if vectors.len() > dim {
        return Err(LinalgError::DependentInput { index: dim });
    }
    let max_norm = vectors.iter().map(Vector::norm).fold(0.0_f64, f64::max);
    let mut frame: Vec<Vector> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &frame {
                let c = w.dot(q);
                w.add_scaled(-c, q);
            }
        }
        let norm = w.norm();
        if norm < RANK_TOL * max_norm {
            return Err(LinalgError::DependentInput { index });
        }
        frame.push(w.scaled(1.0 / norm));
    }
    Ok(Frame::new_unchecked(dim, frame))
}

/// Extends a partial frame to a full orthonormal frame of R^n by appending
/// standard basis vectors in index order, orthogonalizing each and discarding
/// residuals of norm below [`RANK_TOL`]. Deterministic: identical input gives
/// bit-identical output.
pub fn complete_frame(partial: &Frame) -> Frame {
    let n = partial.dim();
    let mut vectors = partial.vectors().to_vec();
    let mut rejected: Vec<usize> = Vec::new();
    for i in 0..n {
        if vectors.len() == n {
            break;
        }
        match orthogonal_residual(n, i, &vectors, RANK_TOL) {
            Some(w) => vectors.push(w),
            None => rejected.push(i),
        }
    }
    // The standard basis spans R^n, so in exact arithmetic the loop above
    // always reaches n vectors; if cancellation discarded too many, retry the
    // rejected indices without the threshold.
    for i in rejected {
        if vectors.len() == n {
            break;
        }
        if let Some(w) = orthogonal_residual(n, i, &vectors, 0.0) {
            vectors.push(w);
        }
    }
    debug_assert_eq!(vectors.len(), n);
    Frame::new_unchecked(n, vectors)
}

fn orthogonal_residual(n: usize, i: usize, accepted: &[Vector], tol: f64) -> Option<Vector> {
    let mut w = Vector::standard_basis(n, i);
    for _ in 0..2 {
        for q in accepted {
            let c = w.dot(q);
            w.add_scaled(-c, q);
        }
    }
    let norm = w.norm();
    // standard basis vectors are unit norm, so the threshold is absolute
    if norm <= tol {
        None
    } else {
        Some(w.scaled(1.0 / norm))
    }
}

/// The rotation angle that zeroes the off-diagonal entry of the 2x2 form
/// [[phi11, phi12], [phi12, phi22]] under f1 = cos(t) e1 - sin(t) e2,
/// f2 = sin(t) e1 + cos(t) e2. The returned theta lies in (-pi/4, pi/4].
pub fn diagonalizing_rotation(phi11: f64, phi12: f64, phi22: f64) -> Rotation2 {
    // phi(f1, f2) = cos sin (phi11 - phi22) + (cos^2 - sin^2) phi12 vanishes
    // when tan(2t) = 2 phi12 / (phi22 - phi11); atan2 resolves the branch at
    // phi11 == phi22, and quarter-turn reduction keeps the zeroing property
    // because it only permutes and flips the rotated pair.
    let mut theta = 0.5 * (2.0 * phi12).atan2(phi22 - phi11);
    if theta > FRAC_PI_4 {
        theta -= FRAC_PI_2;
    }
    if theta <= -FRAC_PI_4 {
        theta += FRAC_PI_2;
    }
    Rotation2::new(theta)
}

/// The k x k matrix of phi(f_i, f_j) over the frame vectors. Each unordered
/// pair is evaluated once so the output is exactly symmetric.
pub fn restrict_form(phi: &SymmetricForm, frame: &Frame) -> Result<SymmetricForm, LinalgError> {
    if frame.dim() != phi.dim() {
        return Err(LinalgError::DimensionMismatch { expected: phi.dim(), found: frame.dim() });
    }
    let k = frame.len();
    let images: Vec<Vector> = frame.vectors().iter().map(|f| phi.apply(f)).collect();
    let mut data = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let value = frame.get(i).dot(&images[j]);
            data[i * k + j] = value;
            data[j * k + i] = value;
        }
    }
    Ok(SymmetricForm::from_raw(k, data))
}
