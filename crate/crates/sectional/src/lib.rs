//! Sharp sectional-curvature bounds for canonical algebraic curvature
//! tensors, a constructive symmetric eigensolver built from extremal
//! 2-planes, a brute-force Grassmannian range oracle, and a hypersurface
//! realization of prescribed curvature intervals.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod curvature;
pub mod linalg;
pub mod oracle;
pub mod realization;
pub mod spectral;

