//! Algebraic curvature tensors generated by symmetric forms: canonical
//! tensors R_phi, signed sums of them, sectional curvature, and randomized
//! verification of the curvature identities.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{Frame, LinalgError, SymmetricForm, Vector};

/// Largest dimension for which a dense rank-4 export is allowed.
pub const MAX_DENSE_DIM: usize = 6;

/// Planes are rejected as degenerate when the Gram determinant of the
/// spanning pair falls below this fraction of its scale.
pub const PLANE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureError {
    DimensionMismatch { expected: usize, found: usize },
    ZeroCoefficient { index: usize },
    EmptySum,
    DegeneratePlane { denominator: f64 },
    DimensionTooLarge { dim: usize, max: usize },
    Linalg(LinalgError),
}

impl fmt::Display for CurvatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureError::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            CurvatureError::ZeroCoefficient { index } => {
                write!(f, "term {index} has coefficient 0; drop it before normalizing")
            }
            CurvatureError::EmptySum => write!(f, "tensor sum needs at least one term"),
            CurvatureError::DegeneratePlane { denominator } => {
                write!(f, "vectors do not span a 2-plane: Gram determinant {denominator:e}")
            }
            CurvatureError::DimensionTooLarge { dim, max } => {
                write!(f, "dense export limited to dimension {max}, got {dim}")
            }
            CurvatureError::Linalg(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CurvatureError {}

impl From<LinalgError> for CurvatureError {
    fn from(e: LinalgError) -> Self {
        CurvatureError::Linalg(e)
    }
}

/// A 4-linear evaluator R(x, y, z, w). Implementations are expected to be
/// multilinear; the curvature identities themselves are checked, not assumed,
/// by [`check_symmetries`].
pub trait CurvatureEvaluator {
    fn dim(&self) -> usize;
    fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64;
}

/// The canonical algebraic curvature tensor of a symmetric form:
/// R(x,y,z,w) = phi(x,w) phi(y,z) - phi(x,z) phi(y,w).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CanonicalTensor {
    form: SymmetricForm,
}

impl CanonicalTensor {
    pub fn new(form: SymmetricForm) -> Self {
        CanonicalTensor { form }
    }

    pub fn form(&self) -> &SymmetricForm {
        &self.form
    }
}

impl CurvatureEvaluator for CanonicalTensor {
    fn dim(&self) -> usize {
        self.form.dim()
    }

    fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        debug_assert!(
            x.dim() == self.dim() && y.dim() == self.dim() && z.dim() == self.dim() && w.dim() == self.dim()
        );
        let ax = self.form.apply(x);
        let ay = self.form.apply(y);
        ax.dot(w) * ay.dot(z) - ax.dot(z) * ay.dot(w)
    }
}

/// A term sign in a signed sum of canonical tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A signed sum of canonical tensors, sum of sign_i * R_{phi_i}. Coefficients
/// other than +-1 are absorbed into the forms by [`normalize_sum`].
#[derive(Debug, Clone, PartialEq)]
pub struct TensorSum {
    dim: usize,
    terms: Vec<(Sign, SymmetricForm)>,
}

impl TensorSum {
    pub fn new(terms: Vec<(Sign, SymmetricForm)>) -> Result<Self, CurvatureError> {
        let dim = terms.first().ok_or(CurvatureError::EmptySum)?.1.dim();
        for (_, form) in &terms {
            if form.dim() != dim {
                return Err(CurvatureError::DimensionMismatch { expected: dim, found: form.dim() });
            }
        }
        Ok(TensorSum { dim, terms })
    }

    pub fn terms(&self) -> &[(Sign, SymmetricForm)] {
        &self.terms
    }
}

impl CurvatureEvaluator for TensorSum {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        self.terms
            .iter()
            .map(|(sign, form)| {
                let ax = form.apply(x);
                let ay = form.apply(y);
                sign.value() * (ax.dot(w) * ay.dot(z) - ax.dot(z) * ay.dot(w))
            })
            .sum()
    }
}

/// Absorbs real coefficients into the forms: since R_{c phi} = c^2 R_phi,
/// each (alpha, phi) becomes (sign(alpha), sqrt(|alpha|) * phi) without
/// changing any evaluation.
pub fn normalize_sum(coeffs: &[(f64, SymmetricForm)]) -> Result<TensorSum, CurvatureError> {
    let mut terms = Vec::with_capacity(coeffs.len());
    for (index, (alpha, form)) in coeffs.iter().enumerate() {
        if *alpha == 0.0 {
            return Err(CurvatureError::ZeroCoefficient { index });
        }
        terms.push((Sign::of(*alpha), form.scaled(alpha.abs().sqrt())));
    }
    TensorSum::new(terms)
}

/// An ordered orthonormal pair spanning a 2-plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TwoPlane {
    basis: Frame,
}

impl TwoPlane {
    pub fn new(u: Vector, v: Vector) -> Result<Self, CurvatureError> {
        Ok(TwoPlane { basis: Frame::new(vec![u, v])? })
    }

    pub fn from_frame(basis: Frame) -> Result<Self, CurvatureError> {
        if basis.len() != 2 {
            return Err(CurvatureError::DimensionMismatch { expected: 2, found: basis.len() });
        }
        Ok(TwoPlane { basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> (&Vector, &Vector) {
        (self.basis.get(0), self.basis.get(1))
    }

    pub fn frame(&self) -> &Frame {
        &self.basis
    }
}

/// kappa(span{x, y}) = R(x,y,y,x) / (<x,x><y,y> - <x,y>^2). Basis-independent
/// for algebraic curvature tensors; reduces to R(x,y,y,x) when x, y are
/// orthonormal.
pub fn sectional_curvature<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    x: &Vector,
    y: &Vector,
) -> Result<f64, CurvatureError> {
    if x.dim() != t.dim() {
        return Err(CurvatureError::DimensionMismatch { expected: t.dim(), found: x.dim() });
    }
    if y.dim() != t.dim() {
        return Err(CurvatureError::DimensionMismatch { expected: t.dim(), found: y.dim() });
    }
    let xx = x.dot(x);
    let yy = y.dot(y);
    let xy = x.dot(y);
    let denominator = xx * yy - xy * xy;
    if denominator <= PLANE_TOL * xx * yy {
        return Err(CurvatureError::DegeneratePlane { denominator });
    }
    Ok(t.eval(x, y, y, x) / denominator)
}

/// Sectional curvature at an already-orthonormal plane.
pub fn plane_curvature<T: CurvatureEvaluator + ?Sized>(t: &T, plane: &TwoPlane) -> f64 {
    let (u, v) = plane.basis();
    sectional_curvature(t, u, v).expect("orthonormal plane basis is never degenerate")
}

/// Worst absolute violations of the three curvature identities, together
/// with the sampling configuration and the value scale they were measured at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub seed: u64,
    pub trials: usize,
    /// Max |R(...)| over every evaluation made; violations are relative to it.
    pub scale: f64,
    pub antisymmetry: f64,
    pub pair_exchange: f64,
    pub first_bianchi: f64,
}

impl SymmetryReport {
    pub fn max_violation(&self) -> f64 {
        self.antisymmetry.max(self.pair_exchange).max(self.first_bianchi)
    }

    /// True when every violation is within tol relative to the value scale.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_violation() <= tol * self.scale
    }
}

/// Samples `trials` pseudo-random argument quadruples and measures the worst
/// violation of antisymmetry, pair exchange, and the first Bianchi identity.
/// Each trial derives its own generator stream from (seed, trial index), so
/// the report does not depend on evaluation order.
pub fn check_symmetries<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    trials: usize,
    seed: u64,
) -> SymmetryReport {
    assert!(trials >= 1);
    let n = t.dim();
    let mut report = SymmetryReport {
        seed,
        trials,
        scale: 0.0,
        antisymmetry: 0.0,
        pair_exchange: 0.0,
        first_bianchi: 0.0,
    };
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let mut draw = || Vector::new((0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect());
        let (x, y, z, w) = (draw(), draw(), draw(), draw());

        let xyzw = t.eval(&x, &y, &z, &w);
        let yxzw = t.eval(&y, &x, &z, &w);
        let zwxy = t.eval(&z, &w, &x, &y);
        let xwyz = t.eval(&x, &w, &y, &z);
        let xzwy = t.eval(&x, &z, &w, &y);
        for value in [xyzw, yxzw, zwxy, xwyz, xzwy] {
            report.scale = report.scale.max(value.abs());
        }
        report.antisymmetry = report.antisymmetry.max((xyzw + yxzw).abs());
        report.pair_exchange = report.pair_exchange.max((xyzw - zwxy).abs());
        report.first_bianchi = report.first_bianchi.max((xyzw + xwyz + xzwy).abs());
    }
    report
}

/// Worst absolute residuals of the curvature identities over every index
/// quadruple of a dense tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub antisymmetry: f64,
    pub pair_exchange: f64,
    pub first_bianchi: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.antisymmetry.max(self.pair_exchange).max(self.first_bianchi)
    }
}

/// A dense rank-4 component array R(e_i, e_j, e_k, e_l), usable only at
/// small dimension. Exists for test cross-checks and the finite-difference
/// curvature of the realization pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    components: Vec<f64>,
}

impl DenseTensor {
    pub fn zeros(dim: usize) -> Result<Self, CurvatureError> {
        if dim > MAX_DENSE_DIM {
            return Err(CurvatureError::DimensionTooLarge { dim, max: MAX_DENSE_DIM });
        }
        assert!(dim >= 1);
        Ok(DenseTensor { dim, components: vec![0.0; dim * dim * dim * dim] })
    }

    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.components[self.offset(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        let at = self.offset(i, j, k, l);
        self.components[at] = value;
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0_f64, |m, e| m.max(e.abs()))
    }

    /// Componentwise max |self - other|.
    pub fn max_difference(&self, other: &DenseTensor) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.components
            .iter()
            .zip(&other.components)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Exhaustive identity residuals over all index quadruples.
    pub fn identity_residuals(&self) -> IdentityResiduals {
        let n = self.dim;
        let mut res = IdentityResiduals { antisymmetry: 0.0, pair_exchange: 0.0, first_bianchi: 0.0 };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let xyzw = self.get(i, j, k, l);
                        res.antisymmetry = res.antisymmetry.max((xyzw + self.get(j, i, k, l)).abs());
                        res.pair_exchange = res.pair_exchange.max((xyzw - self.get(k, l, i, j)).abs());
                        res.first_bianchi = res
                            .first_bianchi
                            .max((xyzw + self.get(i, l, j, k) + self.get(i, k, l, j)).abs());
                    }
                }
            }
        }
        res
    }
}

impl CurvatureEvaluator for DenseTensor {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        let n = self.dim;
        debug_assert!(x.dim() == n && y.dim() == n && z.dim() == n && w.dim() == n);
        let mut sum = 0.0;
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = xi * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let xyz = xy * z[k];
                    if xyz == 0.0 {
                        continue;
                    }
                    for l in 0..n {
                        sum += xyz * w[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        sum
    }
}

/// Evaluates `t` on every standard-basis quadruple. Only for dimensions up
/// to [`MAX_DENSE_DIM`].
pub fn to_dense<T: CurvatureEvaluator + ?Sized>(t: &T) -> Result<DenseTensor, CurvatureError> {
    let n = t.dim();
    let mut dense = DenseTensor::zeros(n)?;
    let basis: Vec<Vector> = (0..n).map(|i| Vector::standard_basis(n, i)).collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    dense.set(i, j, k, l, t.eval(&basis[i], &basis[j], &basis[k], &basis[l]));
                }
            }
        }
    }
    Ok(dense)
}

/// Raw single-form document: {"dim": n, "matrix": [[...], ...]}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormInput {
    pub dim: usize,
    pub matrix: Vec<Vec<f64>>,
}

impl FormInput {
    /// Validates the document and builds the form. Rejects size disagreement
    /// with `dim`, non-finite entries, and asymmetric matrices, naming the
    /// offending entry pair.
    pub fn build(&self) -> Result<SymmetricForm, CurvatureError> {
        if self.matrix.len() != self.dim {
            return Err(CurvatureError::DimensionMismatch {
                expected: self.dim,
                found: self.matrix.len(),
            });
        }
        Ok(SymmetricForm::from_rows(&self.matrix)?)
    }
}

impl From<&SymmetricForm> for FormInput {
    fn from(form: &SymmetricForm) -> Self {
        FormInput { dim: form.dim(), matrix: form.rows() }
    }
}

/// One term of a sum document: a real coefficient and a symmetric matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumTermInput {
    pub coefficient: f64,
    pub form: Vec<Vec<f64>>,
}

/// Raw signed-sum document:
/// {"dim": n, "terms": [{"coefficient": a, "form": [[...], ...]}]}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumInput {
    pub dim: usize,
    pub terms: Vec<SumTermInput>,
}

impl SumInput {
    /// Validates every term and normalizes coefficients into unit signs by
    /// absorbing their square roots into the forms.
    pub fn build(&self) -> Result<TensorSum, CurvatureError> {
        let mut coeffs = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            if term.form.len() != self.dim {
                return Err(CurvatureError::DimensionMismatch {
                    expected: self.dim,
                    found: term.form.len(),
                });
            }
            coeffs.push((term.coefficient, SymmetricForm::from_rows(&term.form)?));
        }
        normalize_sum(&coeffs)
    }
}

/// Either accepted input document, distinguished by its fields: a "matrix"
/// key means a single form, a "terms" key means a signed sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TensorInput {
    Form(FormInput),
    Sum(SumInput),
}

impl TensorInput {
    pub fn dim(&self) -> usize {
        match self {
            TensorInput::Form(input) => input.dim,
            TensorInput::Sum(input) => input.dim,
        }
    }
}
