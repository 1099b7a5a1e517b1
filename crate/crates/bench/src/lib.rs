//! Shared fixtures for the benchmarks.

use qdecay_core::curvature::{surface_of_revolution_chart, RadialFn};
use qdecay_core::geom::ChartedMetric;

/// Capped power-law surface used across the benches.
pub fn bench_surface(c: f64) -> ChartedMetric {
    let warp = RadialFn::power(c);
    surface_of_revolution_chart("bench", &warp, (1.0, 1e4), 1.0).unwrap()
}

/// Same surface with the closed-form derivatives stripped, to exercise the
/// finite-difference fallback.
pub fn bench_surface_fd(c: f64) -> ChartedMetric {
    use std::sync::Arc;
    let warp = RadialFn::power(c);
    let f = move |t: f64| warp.eval(t);
    qdecay_core::geom::ChartedMetric::new(
        "bench-fd",
        qdecay_core::geom::ChartDomain::new(vec![(1.0, 1e4), (-100.0, 100.0)]),
        vec![1.0, 0.0],
        Arc::new(move |p: &[f64]| {
            let fv = f(p[0]);
            nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, fv * fv]))
        }),
    )
    .unwrap()
}
