//! Criterion benchmarks for the numerical kernels; see `benches/`.

use schiffer_core::{build_curve, BoundaryCurve, CurveSpec};

/// The a/b = 1.2 ellipse used across benchmarks.
pub fn ellipse(n_samples: usize) -> BoundaryCurve {
    build_curve(
        &CurveSpec::ellipse(1.2, 1.0).expect("valid ellipse"),
        n_samples,
    )
    .expect("valid curve")
}
