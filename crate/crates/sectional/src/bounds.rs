//! Sharp sectional-curvature bounds in closed form: pairwise eigenvalue
//! products for a single canonical tensor, interval arithmetic for signed
//! sums, and the degenerate two-form fixture whose outer bound is not
//! attained.

use std::fmt;

use serde::Serialize;

use crate::curvature::{Sign, TensorSum};
use crate::linalg::{Frame, SymmetricForm, Vector};
use crate::spectral::{sweep_spectrum, SpectralError};

/// Eigensolve tolerance behind [`canonical_bounds`]; tighter than the
/// default solver tolerance because every downstream bound inherits it.
pub const BOUNDS_EIGEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum BoundsError {
    /// The Grassmannian of 2-planes is empty below dimension 2.
    DimensionTooSmall { dim: usize },
    Spectral(SpectralError),
}

impl fmt::Display for BoundsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsError::DimensionTooSmall { dim } => {
                write!(f, "curvature bounds need dimension at least 2, got {dim}")
            }
            BoundsError::Spectral(err) => write!(f, "eigensolve failed: {err}"),
        }
    }
}

impl std::error::Error for BoundsError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            BoundsError::Spectral(err) => Some(err),
            _ => None,
        }
    }
}

impl From<SpectralError> for BoundsError {
    fn from(err: SpectralError) -> Self {
        BoundsError::Spectral(err)
    }
}

/// The exact curvature range of a canonical tensor: the sectional curvature
/// attains every value in `[lower, upper]` and nothing outside it. Pairs
/// index the ascending `eigenvalues` list.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureBounds {
    #[serde(rename = "m")]
    pub lower: f64,
    #[serde(rename = "M")]
    pub upper: f64,
    pub eigenvalues: Vec<f64>,
    pub min_pair: (usize, usize),
    pub max_pair: (usize, usize),
}

/// With eigenvalues sorted ascending, the extreme pairwise products can only
/// involve the two smallest, the two largest, or the smallest and largest.
fn extreme_pairs(eigenvalues: &[f64]) -> ((usize, usize), (usize, usize)) {
    let n = eigenvalues.len();
    let candidates = [(0, 1), (0, n - 1), (n - 2, n - 1)];
    let product = |(i, j): (usize, usize)| eigenvalues[i] * eigenvalues[j];
    let mut min_pair = candidates[0];
    let mut max_pair = candidates[0];
    for pair in candidates {
        if product(pair) < product(min_pair) {
            min_pair = pair;
        }
        if product(pair) > product(max_pair) {
            max_pair = pair;
        }
    }
    debug_assert!({
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                lo = lo.min(eigenvalues[i] * eigenvalues[j]);
                hi = hi.max(eigenvalues[i] * eigenvalues[j]);
            }
        }
        lo == product(min_pair) && hi == product(max_pair)
    });
    (min_pair, max_pair)
}

fn bounds_from_sorted(eigenvalues: Vec<f64>) -> CurvatureBounds {
    let (min_pair, max_pair) = extreme_pairs(&eigenvalues);
    CurvatureBounds {
        lower: eigenvalues[min_pair.0] * eigenvalues[min_pair.1],
        upper: eigenvalues[max_pair.0] * eigenvalues[max_pair.1],
        eigenvalues,
        min_pair,
        max_pair,
    }
}

/// The sharp curvature range of the canonical tensor built from `phi`,
/// together with the eigen-frame sorted to match the ascending eigenvalue
/// order. The planes spanned by the `min_pair` (resp. `max_pair`) frame
/// vectors attain `lower` (resp. `upper`).
pub fn canonical_bounds_with_frame(
    phi: &SymmetricForm,
) -> Result<(CurvatureBounds, Frame), BoundsError> {
    let n = phi.dim();
    if n < 2 {
        return Err(BoundsError::DimensionTooSmall { dim: n });
    }
    let spectrum = sweep_spectrum(phi, BOUNDS_EIGEN_TOL)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| spectrum.eigenvalues[a].total_cmp(&spectrum.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| spectrum.eigenvalues[i]).collect();
    let vectors: Vec<Vector> =
        order.iter().map(|&i| spectrum.frame.vectors()[i].clone()).collect();
    let frame = Frame::new(vectors).expect("reordering preserves orthonormality");
    Ok((bounds_from_sorted(eigenvalues), frame))
}

/// The sharp curvature range of the canonical tensor built from `phi`.
pub fn canonical_bounds(phi: &SymmetricForm) -> Result<CurvatureBounds, BoundsError> {
    canonical_bounds_with_frame(phi).map(|(bounds, _)| bounds)
}

/// Outer bounds for a signed sum of canonical tensors by interval
/// arithmetic: a plus term contributes its own range, a minus term the
/// negated and swapped range. Every sectional curvature of the sum lies
/// inside the result, which need not be attained.
pub fn sum_bounds(t: &TensorSum) -> Result<(f64, f64), BoundsError> {
    let mut lower = 0.0;
    let mut upper = 0.0;
    for (sign, form) in t.terms() {
        let bounds = canonical_bounds(form)?;
        match sign {
            Sign::Plus => {
                lower += bounds.lower;
                upper += bounds.upper;
            }
            Sign::Minus => {
                lower -= bounds.upper;
                upper -= bounds.lower;
            }
        }
    }
    Ok((lower, upper))
}

/// The two-term degenerate sum on dimension 3 whose outer bound of 2 is
/// provably not attained, paired with that outer bound. Each form has a
/// rank-2 diagonal with units in complementary slots, so each term alone
/// has maximal curvature 1, yet no single plane maximizes both at once.
pub fn remark_2_4_fixture() -> (TensorSum, f64) {
    let phi1 = SymmetricForm::diagonal(&[1.0, 1.0, 0.0]);
    let phi2 = SymmetricForm::diagonal(&[1.0, 0.0, 1.0]);
    let sum = TensorSum::new(vec![(Sign::Plus, phi1), (Sign::Plus, phi2)])
        .expect("two terms of matching dimension");
    (sum, 2.0)
}
