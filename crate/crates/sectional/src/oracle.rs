//! Brute-force range estimation over the Grassmannian of 2-planes:
//! rotation-invariant sampling, closed-form coordinate-ascent refinement,
//! and a bisection solver producing a plane of any prescribed curvature
//! value inside the estimated range.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{plane_curvature, CurvatureEvaluator, TwoPlane};
use crate::linalg::{complete_frame, gram_schmidt, Vector};

/// Histogram resolution of a range estimate.
pub const HISTOGRAM_BINS: usize = 64;

/// A refinement sweep stops once it improves the objective by less than
/// this fraction of max(1, |kappa|).
pub const SWEEP_IMPROVEMENT_TOL: f64 = 1e-14;

/// How many best and worst sampled planes get refinement sweeps.
const REFINEMENT_CANDIDATES: usize = 8;

/// Relative tolerance met by [`plane_for_value`].
pub const PLANE_VALUE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    DimensionTooSmall { dim: usize },
    DimensionMismatch { expected: usize, found: usize },
    ValueOutOfRange { value: f64, min: f64, max: f64 },
    PathDegenerate { at: f64 },
    BisectionFailed { target: f64, achieved: f64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::DimensionTooSmall { dim } => {
                write!(f, "2-planes need ambient dimension at least 2, got {dim}")
            }
            OracleError::DimensionMismatch { expected, found } => {
                write!(f, "evaluator has dimension {expected}, requested {found}")
            }
            OracleError::ValueOutOfRange { value, min, max } => {
                write!(f, "target {value} lies outside the bracketing values [{min}, {max}]")
            }
            OracleError::PathDegenerate { at } => {
                write!(f, "interpolated plane stayed degenerate near t = {at}")
            }
            OracleError::BisectionFailed { target, achieved } => {
                write!(f, "bisection stalled at {achieved} while targeting {target}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Whether refinement pushes the curvature up or down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefineMode {
    Maximize,
    Minimize,
}

/// Estimated curvature range with the planes attaining it and the sample
/// distribution. Reported endpoints are re-evaluations at the attaining
/// planes, so every value is the curvature of a concrete plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureRangeEstimate {
    #[serde(rename = "min")]
    pub min_value: f64,
    #[serde(rename = "max")]
    pub max_value: f64,
    pub argmin_plane: TwoPlane,
    pub argmax_plane: TwoPlane,
    pub samples: usize,
    /// 64 bins spanning [min_value, max_value] as (lower edge, count).
    pub histogram: Vec<(f64, u64)>,
}

/// The plane drawn at one sample index. Pure in (dim, seed, index), which
/// is what makes estimates independent of worker count.
fn plane_at(dim: usize, seed: u64, index: u64) -> TwoPlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    loop {
        let mut draw =
            || Vector::new((0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect());
        let pair = [draw(), draw()];
        // dependent Gaussian pairs have probability zero; redraw on the
        // same stream keeps determinism
        if let Ok(frame) = gram_schmidt(&pair) {
            return TwoPlane::from_frame(frame).expect("two independent vectors span a plane");
        }
    }
}

/// Draws `count` planes from the rotation-invariant distribution on the
/// space of 2-planes (independent standard Gaussian pairs, orthonormalized).
/// Each index derives its own generator stream, so the sequence is
/// deterministic in (dim, seed) and order-independent.
pub fn sample_planes(
    dim: usize,
    count: usize,
    seed: u64,
) -> Result<impl Iterator<Item = TwoPlane>, OracleError> {
    if dim < 2 {
        return Err(OracleError::DimensionTooSmall { dim });
    }
    assert!(count >= 1);
    Ok((0..count as u64).map(move |index| plane_at(dim, seed, index)))
}

/// One closed-form coordinate step: along the family
/// cos(theta) f_leg + sin(theta) f_j with the other leg fixed, the curvature
/// is mid + half cos(2 theta) + cross sin(2 theta), so the optimum is
/// analytic. Returns the rotation angle for the (leg, j) pair.
fn best_step_angle<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    leg: &Vector,
    other: &Vector,
    direction: &Vector,
    sign: f64,
) -> f64 {
    let a = t.eval(leg, other, other, leg);
    let b = t.eval(direction, other, other, direction);
    let c1 = t.eval(leg, other, other, direction);
    let c2 = t.eval(direction, other, other, leg);
    let half = sign * 0.5 * (a - b);
    let cross = sign * 0.5 * (c1 + c2);
    0.5 * cross.atan2(half)
}

fn mode_sign(mode: RefineMode) -> f64 {
    match mode {
        RefineMode::Maximize => 1.0,
        RefineMode::Minimize => -1.0,
    }
}

/// One full coordinate sweep in place: both legs against every
/// complementary direction, each step at its closed-form optimum.
fn apply_coordinate_sweep<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    vectors: &mut [Vector],
    sign: f64,
) {
    let n = vectors.len();
    for leg in 0..2 {
        let other = 1 - leg;
        for j in 2..n {
            let theta = best_step_angle(t, &vectors[leg], &vectors[other], &vectors[j], sign);
            if theta == 0.0 {
                continue;
            }
            let (c, s) = (theta.cos(), theta.sin());
            let mut new_leg = vectors[leg].scaled(c);
            new_leg.add_scaled(s, &vectors[j]);
            let mut new_dir = vectors[leg].scaled(-s);
            new_dir.add_scaled(c, &vectors[j]);
            vectors[leg] = new_leg;
            vectors[j] = new_dir;
        }
    }
}

fn reorthonormalized(pair: (Vector, Vector)) -> Option<TwoPlane> {
    let frame = gram_schmidt(&[pair.0, pair.1]).ok()?;
    TwoPlane::from_frame(frame).ok()
}

/// Coordinate ascent (or descent) over the plane's two legs against every
/// complementary frame direction, each step solved in closed form. Stops
/// when a full sweep improves the objective by less than
/// [`SWEEP_IMPROVEMENT_TOL`] relative to max(1, |kappa|) or after
/// `max_iters` sweeps. The returned plane never has a worse objective than
/// `start`.
pub fn refine_plane<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    start: &TwoPlane,
    max_iters: usize,
    mode: RefineMode,
) -> TwoPlane {
    assert!(max_iters >= 1);
    let sign = mode_sign(mode);
    let full = complete_frame(start.frame());
    let mut vectors: Vec<Vector> = full.vectors().to_vec();

    let pair_value = |vectors: &[Vector]| sign * t.eval(&vectors[0], &vectors[1], &vectors[1], &vectors[0]);
    let mut current = pair_value(&vectors);
    let mut best_value = current;
    let mut best_pair = (vectors[0].clone(), vectors[1].clone());

    for _ in 0..max_iters {
        apply_coordinate_sweep(t, &mut vectors, sign);
        let value = pair_value(&vectors);
        if value > best_value {
            best_value = value;
            best_pair = (vectors[0].clone(), vectors[1].clone());
        }
        let improvement = value - current;
        current = value;
        if improvement < SWEEP_IMPROVEMENT_TOL * value.abs().max(1.0) {
            break;
        }
    }

    // rotations preserve orthonormality up to roundoff; re-orthonormalize
    // and keep the start if roundoff ever made things worse
    match reorthonormalized(best_pair) {
        Some(plane) if sign * plane_curvature(t, &plane) >= sign * plane_curvature(t, start) => {
            plane
        }
        _ => start.clone(),
    }
}

/// Restart budget for the complement-pair escape; each kept restart strictly
/// improves the refined value, so the loop ends far earlier in practice.
const MAX_ESCAPE_RESTARTS: usize = 8;

/// Relative improvement a restart must deliver to be kept.
const ESCAPE_IMPROVEMENT_TOL: f64 = 1e-12;

/// Escape hatch for converged coordinate ascent: a stuck plane sits on a
/// critical pair of directions, and any strictly better pair disjoint from
/// it lies entirely inside its orthogonal complement. Reseeding ascent from
/// the best complement pair therefore either improves the value or certifies
/// that no disjoint pair does better.
fn refine_with_escapes<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    start: &TwoPlane,
    refinements: usize,
    mode: RefineMode,
) -> (f64, TwoPlane) {
    let sign = mode_sign(mode);
    let mut current = start.clone();
    let mut value = sign * plane_curvature(t, &current);
    let dim = current.frame().vectors()[0].dim();
    if dim >= 4 {
        for _ in 0..MAX_ESCAPE_RESTARTS {
            let full = complete_frame(current.frame());
            let vectors = full.vectors();
            let mut best: Option<(f64, TwoPlane)> = None;
            for k in 2..dim {
                for l in (k + 1)..dim {
                    let plane = TwoPlane::new(vectors[k].clone(), vectors[l].clone())
                        .expect("completed frame directions are orthonormal");
                    let complement_value = sign * plane_curvature(t, &plane);
                    if best.as_ref().is_none_or(|(b, _)| complement_value > *b) {
                        best = Some((complement_value, plane));
                    }
                }
            }
            let Some((_, seed_plane)) = best else { break };
            let candidate = refine_plane(t, &seed_plane, refinements, mode);
            let candidate_value = sign * plane_curvature(t, &candidate);
            if candidate_value <= value + ESCAPE_IMPROVEMENT_TOL * value.abs().max(1.0) {
                break;
            }
            current = candidate;
            value = candidate_value;
        }
    }
    (plane_curvature(t, &current), current)
}

/// One unconditional sweep with no improvement guard. Near a critical plane
/// the steps are pure recentering rotations that shrink the cross terms
/// quadratically even when the objective itself is already converged, which
/// is what eigenvector extraction needs.
pub(crate) fn polish_plane<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    start: &TwoPlane,
    mode: RefineMode,
) -> TwoPlane {
    let sign = mode_sign(mode);
    let full = complete_frame(start.frame());
    let mut vectors: Vec<Vector> = full.vectors().to_vec();
    apply_coordinate_sweep(t, &mut vectors, sign);
    reorthonormalized((vectors[0].clone(), vectors[1].clone())).unwrap_or_else(|| start.clone())
}

/// Samples the curvature over `samples` random planes, refines the 8 best
/// and 8 worst candidates for `refinements` sweeps each, reseeds each
/// winner from its orthogonal complement until no disjoint pair improves
/// it, and reports the resulting range with a 64-bin histogram of the raw
/// samples. Deterministic in (inputs, seed) for any rayon worker count:
/// each sample index owns a generator stream and the reduction is
/// order-fixed.
pub fn estimate_range<T: CurvatureEvaluator + Sync + ?Sized>(
    t: &T,
    dim: usize,
    samples: usize,
    refinements: usize,
    seed: u64,
) -> Result<CurvatureRangeEstimate, OracleError> {
    if dim < 2 {
        return Err(OracleError::DimensionTooSmall { dim });
    }
    if t.dim() != dim {
        return Err(OracleError::DimensionMismatch { expected: t.dim(), found: dim });
    }
    assert!(samples >= 1);

    let kappas: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|index| plane_curvature(t, &plane_at(dim, seed, index)))
        .collect();

    let mut order: Vec<usize> = (0..samples).collect();
    order.sort_by(|&i, &j| kappas[i].total_cmp(&kappas[j]).then(i.cmp(&j)));
    let k = REFINEMENT_CANDIDATES.min(samples);

    let polished = |index: usize, mode: RefineMode| -> (f64, TwoPlane) {
        let start = plane_at(dim, seed, index as u64);
        let plane = if refinements >= 1 {
            refine_plane(t, &start, refinements, mode)
        } else {
            start
        };
        (plane_curvature(t, &plane), plane)
    };

    let mut best_min: Option<(f64, TwoPlane)> = None;
    for &index in order.iter().take(k) {
        let (value, plane) = polished(index, RefineMode::Minimize);
        if best_min.as_ref().is_none_or(|(current, _)| value < *current) {
            best_min = Some((value, plane));
        }
    }
    let mut best_max: Option<(f64, TwoPlane)> = None;
    for &index in order.iter().rev().take(k) {
        let (value, plane) = polished(index, RefineMode::Maximize);
        if best_max.as_ref().is_none_or(|(current, _)| value > *current) {
            best_max = Some((value, plane));
        }
    }
    let escaped = |best: Option<(f64, TwoPlane)>, mode: RefineMode| -> (f64, TwoPlane) {
        let (value, plane) = best.expect("samples >= 1");
        if refinements >= 1 {
            refine_with_escapes(t, &plane, refinements, mode)
        } else {
            (value, plane)
        }
    };
    let (min_value, argmin_plane) = escaped(best_min, RefineMode::Minimize);
    let (max_value, argmax_plane) = escaped(best_max, RefineMode::Maximize);

    let width = (max_value - min_value) / HISTOGRAM_BINS as f64;
    let mut histogram: Vec<(f64, u64)> = (0..HISTOGRAM_BINS)
        .map(|b| (min_value + b as f64 * width, 0))
        .collect();
    for &kappa in &kappas {
        let bin = if width > 0.0 {
            (((kappa - min_value) / width) as usize).min(HISTOGRAM_BINS - 1)
        } else {
            0
        };
        histogram[bin].1 += 1;
    }

    Ok(CurvatureRangeEstimate { min_value, max_value, argmin_plane, argmax_plane, samples, histogram })
}

/// The interpolated plane at path position s: orthonormalization of the
/// linear interpolation between the two endpoint bases.
fn path_plane(pmin: &TwoPlane, pmax: &TwoPlane, s: f64) -> Option<TwoPlane> {
    let (u0, v0) = pmin.basis();
    let (u1, v1) = pmax.basis();
    let mut u = u0.scaled(1.0 - s);
    u.add_scaled(s, u1);
    let mut v = v0.scaled(1.0 - s);
    v.add_scaled(s, v1);
    let frame = gram_schmidt(&[u, v]).ok()?;
    Some(TwoPlane::from_frame(frame).expect("orthonormalized pair spans a plane"))
}

/// `path_plane` with the degenerate-interpolant escape: nudge s in steps of
/// 1e-6 until the interpolation regains rank 2.
fn path_plane_robust(pmin: &TwoPlane, pmax: &TwoPlane, s: f64) -> Result<TwoPlane, OracleError> {
    if let Some(plane) = path_plane(pmin, pmax, s) {
        return Ok(plane);
    }
    for step in 1..=4 {
        for direction in [1.0, -1.0] {
            let nudged = (s + direction * step as f64 * 1e-6).clamp(0.0, 1.0);
            if let Some(plane) = path_plane(pmin, pmax, nudged) {
                return Ok(plane);
            }
        }
    }
    Err(OracleError::PathDegenerate { at: s })
}

/// Produces a plane whose curvature is `c` within 1e-8 relative tolerance,
/// given bracketing planes with kappa(pmin) <= c <= kappa(pmax). Bisects
/// along a continuous path of planes interpolating the two bases; curvature
/// is continuous on the connected space of 2-planes, so the path crosses
/// every intermediate value.
pub fn plane_for_value<T: CurvatureEvaluator + ?Sized>(
    t: &T,
    pmin: &TwoPlane,
    pmax: &TwoPlane,
    c: f64,
) -> Result<TwoPlane, OracleError> {
    let kappa_min = plane_curvature(t, pmin);
    let kappa_max = plane_curvature(t, pmax);
    let tol = PLANE_VALUE_TOL * c.abs().max(1.0);
    if (c - kappa_min).abs() <= tol {
        return Ok(pmin.clone());
    }
    if (c - kappa_max).abs() <= tol {
        return Ok(pmax.clone());
    }
    if c < kappa_min || c > kappa_max {
        return Err(OracleError::ValueOutOfRange { value: c, min: kappa_min, max: kappa_max });
    }

    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut best: Option<(f64, f64, TwoPlane)> = None;
    // keep bisecting down to the absolute tolerance; the relative one is the
    // contract and gates the fallback below
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let plane = path_plane_robust(pmin, pmax, mid)?;
        let kappa = plane_curvature(t, &plane);
        let error = (kappa - c).abs();
        if best.as_ref().is_none_or(|(e, _, _)| error < *e) {
            best = Some((error, kappa, plane.clone()));
        }
        if error <= PLANE_VALUE_TOL {
            return Ok(plane);
        }
        if kappa < c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    match best {
        Some((error, _, plane)) if error <= tol => Ok(plane),
        Some((_, kappa, _)) => Err(OracleError::BisectionFailed { target: c, achieved: kappa }),
        None => Err(OracleError::BisectionFailed { target: c, achieved: kappa_min }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CanonicalTensor;
    use crate::linalg::SymmetricForm;

    fn diag(entries: &[f64]) -> CanonicalTensor {
        CanonicalTensor::new(SymmetricForm::diagonal(entries))
    }

    #[test]
    fn planes_in_dimension_two_all_have_the_determinant_curvature() {
        let t = diag(&[1.0, 2.0]);
        for plane in sample_planes(2, 100, 3).unwrap() {
            assert!((plane_curvature(&t, &plane) - 2.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn sampling_is_deterministic_in_the_seed() {
        let first: Vec<TwoPlane> = sample_planes(3, 50, 11).unwrap().collect();
        let second: Vec<TwoPlane> = sample_planes(3, 50, 11).unwrap().collect();
        assert_eq!(first, second);
    }

    #[test]
    fn constant_curvature_form_in_dimension_four() {
        let t = diag(&[1.0, 1.0, 1.0, 1.0]);
        for plane in sample_planes(4, 10_000, 5).unwrap() {
            assert_eq!(plane_curvature(&t, &plane), 1.0);
        }
    }

    #[test]
    fn sampling_rejects_dimension_below_two() {
        assert!(matches!(
            sample_planes(1, 10, 0).map(|it| it.count()),
            Err(OracleError::DimensionTooSmall { dim: 1 })
        ));
    }

    #[test]
    fn refinement_keeps_an_already_extremal_plane() {
        let t = diag(&[1.0, 2.0, 3.0]);
        let plane =
            TwoPlane::new(Vector::standard_basis(3, 1), Vector::standard_basis(3, 2)).unwrap();
        let refined = refine_plane(&t, &plane, 50, RefineMode::Maximize);
        assert_eq!(plane_curvature(&t, &refined), 6.0);
    }

    #[test]
    fn refinement_reaches_both_extremes_from_random_starts() {
        let t = diag(&[1.0, 2.0, 3.0]);
        for (index, start) in sample_planes(3, 10, 17).unwrap().enumerate() {
            let up = refine_plane(&t, &start, 200, RefineMode::Maximize);
            let down = refine_plane(&t, &start, 200, RefineMode::Minimize);
            assert!(
                (plane_curvature(&t, &up) - 6.0).abs() <= 1e-9,
                "start {index}: max {}",
                plane_curvature(&t, &up)
            );
            assert!(
                (plane_curvature(&t, &down) - 2.0).abs() <= 1e-9,
                "start {index}: min {}",
                plane_curvature(&t, &down)
            );
        }
    }

    #[test]
    fn refinement_never_worsens_the_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let raw: Vec<Vec<f64>> =
                (0..4).map(|_| (0..4).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
            let mut sym = raw.clone();
            for i in 0..4 {
                for j in 0..4 {
                    sym[i][j] = 0.5 * (raw[i][j] + raw[j][i]);
                }
            }
            let t = CanonicalTensor::new(SymmetricForm::from_rows(&sym).unwrap());
            for start in sample_planes(4, 5, rng.random()).unwrap() {
                let before = plane_curvature(&t, &start);
                let up = refine_plane(&t, &start, 3, RefineMode::Maximize);
                let down = refine_plane(&t, &start, 3, RefineMode::Minimize);
                assert!(plane_curvature(&t, &up) >= before);
                assert!(plane_curvature(&t, &down) <= before);
            }
        }
    }

    #[test]
    fn estimate_for_identity_form_is_a_point_with_one_occupied_bin() {
        let t = diag(&[1.0, 1.0, 1.0]);
        let estimate = estimate_range(&t, 3, 500, 10, 7).unwrap();
        assert_eq!(estimate.min_value, 1.0);
        assert_eq!(estimate.max_value, 1.0);
        assert_eq!(estimate.histogram.len(), HISTOGRAM_BINS);
        let occupied = estimate.histogram.iter().filter(|(_, count)| *count > 0).count();
        assert_eq!(occupied, 1);
        assert_eq!(estimate.histogram[0].1, 500);
    }

    #[test]
    fn estimate_recovers_the_pairwise_product_range() {
        let t = diag(&[1.0, 2.0, 3.0]);
        let estimate = estimate_range(&t, 3, 1000, 60, 1).unwrap();
        assert!((estimate.min_value - 2.0).abs() <= 1e-6, "min {}", estimate.min_value);
        assert!((estimate.max_value - 6.0).abs() <= 1e-6, "max {}", estimate.max_value);
    }

    #[test]
    fn estimate_endpoints_are_reproduced_by_their_planes() {
        let t = diag(&[-1.0, 2.0, 3.0]);
        let estimate = estimate_range(&t, 3, 800, 60, 2).unwrap();
        assert!(
            (plane_curvature(&t, &estimate.argmin_plane) - estimate.min_value).abs() <= 1e-9
        );
        assert!(
            (plane_curvature(&t, &estimate.argmax_plane) - estimate.max_value).abs() <= 1e-9
        );
        let total: u64 = estimate.histogram.iter().map(|(_, count)| count).sum();
        assert_eq!(total, 800);
    }

    #[test]
    fn estimate_is_identical_for_any_worker_count() {
        let t = diag(&[1.0, -2.0, 3.0, 0.5]);
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_range(&t, 4, 2000, 25, 9).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn estimate_rejects_mismatched_dimension() {
        let t = diag(&[1.0, 2.0, 3.0]);
        assert_eq!(
            estimate_range(&t, 4, 10, 1, 0).unwrap_err(),
            OracleError::DimensionMismatch { expected: 3, found: 4 }
        );
    }

    #[test]
    fn degenerate_sum_of_forms_has_range_inside_the_unit_interval() {
        use crate::curvature::{Sign, TensorSum};
        let sum = TensorSum::new(vec![
            (Sign::Plus, SymmetricForm::diagonal(&[1.0, 1.0, 0.0])),
            (Sign::Plus, SymmetricForm::diagonal(&[1.0, 0.0, 1.0])),
        ])
        .unwrap();
        let estimate = estimate_range(&sum, 3, 2000, 80, 4).unwrap();
        assert!(estimate.min_value.abs() <= 1e-9, "min {}", estimate.min_value);
        assert!((estimate.max_value - 1.0).abs() <= 1e-6, "max {}", estimate.max_value);
    }

    #[test]
    fn plane_for_value_returns_endpoints_at_endpoint_targets() {
        let t = diag(&[1.0, 2.0, 3.0]);
        let pmin =
            TwoPlane::new(Vector::standard_basis(3, 0), Vector::standard_basis(3, 1)).unwrap();
        let pmax =
            TwoPlane::new(Vector::standard_basis(3, 1), Vector::standard_basis(3, 2)).unwrap();
        assert_eq!(plane_for_value(&t, &pmin, &pmax, 2.0).unwrap(), pmin);
        assert_eq!(plane_for_value(&t, &pmin, &pmax, 6.0).unwrap(), pmax);
    }

    #[test]
    fn plane_for_value_hits_an_interior_target() {
        let t = diag(&[1.0, 2.0, 3.0]);
        let pmin =
            TwoPlane::new(Vector::standard_basis(3, 0), Vector::standard_basis(3, 1)).unwrap();
        let pmax =
            TwoPlane::new(Vector::standard_basis(3, 1), Vector::standard_basis(3, 2)).unwrap();
        let plane = plane_for_value(&t, &pmin, &pmax, 4.0).unwrap();
        assert!((plane_curvature(&t, &plane) - 4.0).abs() <= 1e-8 * 4.0);
    }

    #[test]
    fn plane_for_value_rejects_targets_outside_the_bracket() {
        let t = diag(&[1.0, 2.0, 3.0]);
        let pmin =
            TwoPlane::new(Vector::standard_basis(3, 0), Vector::standard_basis(3, 1)).unwrap();
        let pmax =
            TwoPlane::new(Vector::standard_basis(3, 1), Vector::standard_basis(3, 2)).unwrap();
        assert!(matches!(
            plane_for_value(&t, &pmin, &pmax, 7.0),
            Err(OracleError::ValueOutOfRange { .. })
        ));
    }
}
