//! Quantitative comparison geometry along radial geodesics.
//!
//! Under the lower Ricci decay `Ric(v,v) >= -(n-1) C / t^2`, the mean
//! curvature `Pi(t)` of distance spheres satisfies the Riccati inequality
//! `Pi' + Pi^2 <= -Ric/(n-1)` and is bounded by `alpha / t` with
//! `alpha = (sqrt(1+4C)+1)/2`. From this follow the volume comparison
//! inequalities with exponent `N = (n-1)(alpha-1) + n`, checked here on
//! sampled growth curves with an explicitly fitted constant `C0`.
//!
//! Also here: the excess function, the Toponogov cosh threshold used to
//! exclude critical points, and the packing bound on component diameters.

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::growth::GrowthCurve;

/// The constants of the volume comparison lemma.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonParams {
    /// Lower quadratic Ricci decay constant.
    pub c: f64,
    /// Dimension.
    pub n: usize,
    /// `alpha = (sqrt(1+4C)+1)/2`; the mean-curvature bound is `alpha/t`.
    pub alpha: f64,
    /// Volume growth exponent `N = (n-1)(sqrt(1+4C)-1)/2 + n`.
    pub big_n: f64,
    /// Comparison constant, fitted by `volume_comparison_check`; the lemma
    /// only asserts its existence.
    pub c0: Option<f64>,
}

/// Builds the constants from `(C, n)`.
pub fn comparison_params(c: f64, n: usize) -> Result<ComparisonParams> {
    if c < 0.0 {
        return Err(GeomError::InvalidParameter {
            name: "C",
            message: format!("decay constant must be nonnegative, got {c}"),
        });
    }
    if n < 2 {
        return Err(GeomError::InvalidParameter {
            name: "n",
            message: format!("dimension must be >= 2, got {n}"),
        });
    }
    let root = (1.0 + 4.0 * c).sqrt();
    let alpha = (root + 1.0) / 2.0;
    let big_n = (n as f64 - 1.0) * (root - 1.0) / 2.0 + n as f64;
    Ok(ComparisonParams {
        c,
        n,
        alpha,
        big_n,
        c0: None,
    })
}

/// Sampled radial data: mean curvature and area element of distance spheres
/// along one radial direction.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    /// Strictly increasing radial grid.
    pub grid: Vec<f64>,
    /// Mean curvature `Pi(t_k)`.
    pub mean_curvature: Vec<f64>,
    /// Area element `eta(t_k) > 0`.
    pub area_element: Vec<f64>,
    /// Samples of `Ric(v(t), v(t))` along the radial direction.
    pub ricci: Vec<f64>,
}

impl RadialProfile {
    pub fn new(
        grid: Vec<f64>,
        mean_curvature: Vec<f64>,
        area_element: Vec<f64>,
        ricci: Vec<f64>,
    ) -> Result<Self> {
        if grid.len() < 3 {
            return Err(GeomError::GridTooCoarse {
                needed: 3,
                got: grid.len(),
            });
        }
        assert!(grid.windows(2).all(|w| w[0] < w[1]), "grid must increase");
        assert!(area_element.iter().all(|&e| e > 0.0), "eta must be positive");
        assert_eq!(grid.len(), mean_curvature.len());
        assert_eq!(grid.len(), area_element.len());
        assert_eq!(grid.len(), ricci.len());
        Ok(Self {
            grid,
            mean_curvature,
            area_element,
            ricci,
        })
    }

    /// The equality case `Pi = alpha/t`, `eta = t^{(n-1) alpha}`,
    /// `Ric = -(n-1) alpha (alpha - 1) / t^2` on the given grid.
    pub fn equality_case(params: &ComparisonParams, grid: Vec<f64>) -> Result<Self> {
        let alpha = params.alpha;
        let n1 = params.n as f64 - 1.0;
        let pi: Vec<f64> = grid.iter().map(|t| alpha / t).collect();
        let eta: Vec<f64> = grid.iter().map(|t| t.powf(n1 * alpha)).collect();
        let ric: Vec<f64> = grid
            .iter()
            .map(|t| -n1 * alpha * (alpha - 1.0) / (t * t))
            .collect();
        Self::new(grid, pi, eta, ric)
    }
}

/// Derivative on a (possibly nonuniform) grid from the Lagrange interpolant
/// through a 5-point window (4th-order; 3-point fallback on tiny grids).
/// The extra order matters: the acceptance tolerances on the Riccati defect
/// sit at 1e-8, out of reach of centered differences on affordable grids.
fn grid_derivative(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let n = grid.len();
    let width = if n >= 5 { 5 } else { 3 };
    let mut out = vec![0.0; n];
    for k in 0..n {
        let start = k
            .saturating_sub(width / 2)
            .min(n - width);
        let nodes = &grid[start..start + width];
        let vals = &values[start..start + width];
        let x = grid[k];
        // d/dx of the Lagrange basis L_m at x
        let mut d = 0.0;
        for m in 0..width {
            let mut basis_d = 0.0;
            for j in 0..width {
                if j == m {
                    continue;
                }
                let mut term = 1.0;
                for (i, &xi) in nodes.iter().enumerate() {
                    if i == m || i == j {
                        continue;
                    }
                    term *= (x - xi) / (nodes[m] - xi);
                }
                basis_d += term / (nodes[m] - nodes[j]);
            }
            d += vals[m] * basis_d;
        }
        out[k] = d;
    }
    out
}

/// Riccati defects `d_k = Pi'(t_k) + Pi(t_k)^2 + Ric(t_k)/(n-1)`.
///
/// The comparison hypothesis holds iff every defect is `<= tolerance`.
pub fn riccati_defect(profile: &RadialProfile, n: usize) -> Result<Vec<f64>> {
    if profile.grid.len() < 3 {
        return Err(GeomError::GridTooCoarse {
            needed: 3,
            got: profile.grid.len(),
        });
    }
    let dpi = grid_derivative(&profile.grid, &profile.mean_curvature);
    Ok((0..profile.grid.len())
        .map(|k| {
            dpi[k]
                + profile.mean_curvature[k] * profile.mean_curvature[k]
                + profile.ricci[k] / (n as f64 - 1.0)
        })
        .collect())
}

/// Result of the mean-curvature comparison `Pi(t) <= alpha / t`.
#[derive(Clone, Debug, Serialize)]
pub struct MeanCurvatureCheck {
    pub passes: bool,
    /// `max_k (Pi(t_k) - alpha / t_k)`, positive when the bound fails.
    pub max_violation: f64,
    /// Max of the comparison test function
    /// `f(t) = e^{int Pi} (t^alpha Pi - alpha t^{alpha-1})`, which must stay
    /// nonpositive.
    pub max_test_function: f64,
}

pub fn mean_curvature_bound_check(
    profile: &RadialProfile,
    params: &ComparisonParams,
) -> Result<MeanCurvatureCheck> {
    let alpha = params.alpha;
    let tol = 1e-9;
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_f = f64::NEG_INFINITY;
    // cumulative trapezoid of Pi from the first grid point
    let mut integral = 0.0;
    for k in 0..profile.grid.len() {
        if k > 0 {
            let dt = profile.grid[k] - profile.grid[k - 1];
            integral += 0.5 * dt * (profile.mean_curvature[k] + profile.mean_curvature[k - 1]);
        }
        let t = profile.grid[k];
        let pi = profile.mean_curvature[k];
        max_violation = max_violation.max(pi - alpha / t);
        let f = integral.exp() * (t.powf(alpha) * pi - alpha * t.powf(alpha - 1.0));
        max_f = max_f.max(f);
    }
    Ok(MeanCurvatureCheck {
        passes: max_violation <= tol && max_f <= tol,
        max_violation: max_violation.max(0.0),
        max_test_function: max_f,
    })
}

/// Max relative deviation of `eta_t / t^{(n-1) alpha}` from constancy; zero
/// for the equality case, where the nonincreasing quantity is constant.
pub fn eta_power_law_deviation(profile: &RadialProfile, params: &ComparisonParams) -> f64 {
    let e = (params.n as f64 - 1.0) * params.alpha;
    let ratios: Vec<f64> = profile
        .grid
        .iter()
        .zip(&profile.area_element)
        .map(|(t, eta)| eta / t.powf(e))
        .collect();
    let first = ratios[0];
    ratios
        .iter()
        .map(|r| (r / first - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Report of the two volume comparison inequalities with a fitted `C0`.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeComparisonReport {
    /// Smallest constant making both inequalities hold on the grid for t >= 3.
    pub c0_fitted: f64,
    /// `C0` components for each inequality.
    pub c0_ball: f64,
    pub c0_annulus: f64,
    /// Refits used for the stability judgment.
    pub c0_coarse_grid: f64,
    pub c0_half_range: f64,
    pub comparison1_ok: bool,
    pub comparison2_ok: bool,
    /// `(t, vol(B_{t+1}-B_{t-1}) (t-1) / vol(B_{t-1}))` samples.
    pub annulus_ratios: Vec<(f64, f64)>,
}

fn interp(curve: &GrowthCurve, t: f64) -> f64 {
    let grid = &curve.radii;
    let vols = &curve.volumes;
    if t <= grid[0] {
        return vols[0];
    }
    if t >= *grid.last().unwrap() {
        return *vols.last().unwrap();
    }
    let idx = grid.partition_point(|&x| x < t);
    let (t0, t1) = (grid[idx - 1], grid[idx]);
    let (v0, v1) = (vols[idx - 1], vols[idx]);
    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
}

fn fit_c0(curve: &GrowthCurve, params: &ComparisonParams, stride: usize, t_max: f64) -> (f64, f64) {
    let vol1 = interp(curve, 1.0);
    // vol(S_1) from the slope of the curve at t = 1
    let h = 0.05 * (curve.radii[1] - curve.radii[0]).max(0.02);
    let vol_s1 = (interp(curve, 1.0 + h) - interp(curve, (1.0 - h).max(curve.radii[0]))) / (2.0 * h);
    let vol_s1 = vol_s1.max(1e-300);
    let mut c0_ball: f64 = 0.0;
    let mut c0_ann: f64 = 0.0;
    for (k, &t) in curve.radii.iter().enumerate() {
        if k % stride != 0 || t < 3.0 || t > t_max {
            continue;
        }
        let need1 = (curve.volumes[k] - vol1) / (vol_s1 * t.powf(params.big_n));
        c0_ball = c0_ball.max(need1);
        if t + 1.0 <= t_max {
            let annulus = interp(curve, t + 1.0) - interp(curve, t - 1.0);
            let denom = interp(curve, t - 1.0);
            if denom > 0.0 {
                c0_ann = c0_ann.max(annulus * (t - 1.0) / denom);
            }
        }
    }
    (c0_ball, c0_ann)
}

/// Fits the smallest `C0` making both inequalities
/// `vol(B_t) <= C0 vol(S_1) t^N + vol(B_1)` and
/// `vol(B_{t+1}-B_{t-1}) <= C0 vol(B_{t-1})/(t-1)` hold for grid `t >= 3`,
/// and judges stability under grid coarsening and range halving.
pub fn volume_comparison_check(
    curve: &GrowthCurve,
    params: &ComparisonParams,
) -> Result<VolumeComparisonReport> {
    let t_max = *curve.radii.last().unwrap();
    if curve.radii[0] > 1.0 || t_max < 3.0 {
        return Err(GeomError::InvalidParameter {
            name: "curve",
            message: format!(
                "curve must span [1, T] with T >= 3; got [{}, {}]",
                curve.radii[0], t_max
            ),
        });
    }
    for w in curve.volumes.windows(2) {
        if w[1] < w[0] - 1e-12 * w[0].abs() {
            let idx = curve.volumes.windows(2).position(|x| x[1] < x[0]).unwrap();
            return Err(GeomError::DecreasingVolume {
                t: curve.radii[idx + 1],
            });
        }
    }

    let (b_full, a_full) = fit_c0(curve, params, 1, t_max);
    let (b_coarse, a_coarse) = fit_c0(curve, params, 2, t_max);
    let (b_half, a_half) = fit_c0(curve, params, 1, (t_max / 2.0).max(4.0));
    let stable = |full: f64, other: f64| {
        full.is_finite() && (full - other).abs() <= 0.05 * full.abs().max(1e-300)
    };

    let mut annulus_ratios = Vec::new();
    for &t in &curve.radii {
        if t >= 3.0 && t + 1.0 <= t_max {
            let denom = interp(curve, t - 1.0);
            if denom > 0.0 {
                let r = (interp(curve, t + 1.0) - interp(curve, t - 1.0)) * (t - 1.0) / denom;
                annulus_ratios.push((t, r));
            }
        }
    }

    Ok(VolumeComparisonReport {
        c0_fitted: b_full.max(a_full),
        c0_ball: b_full,
        c0_annulus: a_full,
        c0_coarse_grid: b_coarse.max(a_coarse),
        c0_half_range: b_half.max(a_half),
        comparison1_ok: stable(b_full, b_coarse) && stable(b_full, b_half),
        comparison2_ok: stable(a_full, a_coarse) && stable(a_full, a_half),
        annulus_ratios,
    })
}

/// The excess `e_pq(x) = d(p,x) + d(q,x) - d(p,q)`; zero iff `x` lies on a
/// minimal p-q geodesic metrically.
pub fn excess(d_px: f64, d_qx: f64, d_pq: f64) -> Result<f64> {
    if d_px < 0.0 || d_qx < 0.0 || d_pq < 0.0 {
        return Err(GeomError::InvalidParameter {
            name: "distance",
            message: "distances must be nonnegative".into(),
        });
    }
    let sum = d_px + d_qx;
    if d_pq > sum + 1e-12 * sum.max(1.0) {
        return Err(GeomError::TriangleViolation { d_pq, sum });
    }
    Ok((sum - d_pq).max(0.0))
}

/// Whether `cosh(3/lambda) <= cosh^2(2/lambda)` holds at the given `lambda`.
pub fn toponogov_inequality_holds(lambda: f64) -> bool {
    let lhs = (3.0 / lambda).cosh();
    let rhs = (2.0 / lambda).cosh().powi(2);
    lhs <= rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct ToponogovThreshold {
    pub lambda_star: f64,
    /// `|cosh(3/lambda*) - cosh^2(2/lambda*)|` at the returned root.
    pub residual: f64,
}

/// The unique `lambda* > 0` where `cosh(3/lambda) = cosh^2(2/lambda)`.
/// The inequality holds for `lambda < lambda*` and fails for all larger
/// `lambda` (the contradiction threshold of the critical-point argument).
pub fn toponogov_threshold() -> ToponogovThreshold {
    let f = |lambda: f64| (3.0 / lambda).cosh() - (2.0 / lambda).cosh().powi(2);
    // f < 0 (inequality holds) at lambda = 1, f > 0 at lambda = 10
    let mut lo = 1.0f64;
    let mut hi = 10.0f64;
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * lo {
            break;
        }
    }
    let lambda_star = 0.5 * (lo + hi);
    ToponogovThreshold {
        lambda_star,
        residual: f(lambda_star).abs(),
    }
}

/// Packing bound on the diameter of a boundary component crossed by a chain
/// of disjoint unit balls in the annulus: with `k+1 <= annulus_volume / v`
/// balls and each hop of length `<= 2 * hop_radius`, the diameter is at most
/// `2 * hop_radius * annulus_volume / v`.
pub fn diameter_bound(annulus_volume: f64, v_noncollapse: f64, hop_radius: f64) -> Result<f64> {
    if v_noncollapse <= 0.0 {
        return Err(GeomError::InvalidParameter {
            name: "v_noncollapse",
            message: format!("noncollapse volume must be positive, got {v_noncollapse}"),
        });
    }
    if annulus_volume < 0.0 {
        return Err(GeomError::InvalidParameter {
            name: "annulus_volume",
            message: "annulus volume must be nonnegative".into(),
        });
    }
    Ok(2.0 * hop_radius * annulus_volume / v_noncollapse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::{GrowthCurve, GrowthMethod};
    use approx::assert_relative_eq;

    #[test]
    fn params_examples() {
        let p = comparison_params(2.0, 2).unwrap();
        assert_relative_eq!(p.alpha, 2.0);
        assert_relative_eq!(p.big_n, 3.0);

        let p = comparison_params(0.0, 5).unwrap();
        assert_relative_eq!(p.alpha, 1.0);
        assert_relative_eq!(p.big_n, 5.0);

        let p = comparison_params(6.0, 3).unwrap();
        assert_relative_eq!(p.alpha, 3.0);
        assert_relative_eq!(p.big_n, 7.0);

        assert!(comparison_params(-1.0, 2).is_err());
    }

    #[test]
    fn params_invariants() {
        for c in [0.0, 0.5, 2.0, 6.0, 17.3] {
            let p = comparison_params(c, 4).unwrap();
            assert_relative_eq!(p.alpha * (p.alpha - 1.0), c, epsilon = 1e-12);
            assert_relative_eq!(
                p.big_n,
                (p.n as f64 - 1.0) * (p.alpha - 1.0) + p.n as f64,
                epsilon = 1e-12
            );
            assert!(p.alpha >= 1.0);
        }
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| a + (b - a) * k as f64 / (n - 1) as f64)
            .collect()
    }

    /// Geometric grid: constant relative spacing, so the 1/t-scale profiles
    /// differentiate with uniform relative accuracy.
    fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn riccati_equality_case_has_zero_defect() {
        let params = comparison_params(2.0, 2).unwrap();
        let profile = RadialProfile::equality_case(&params, log_grid(1.0, 100.0, 2000)).unwrap();
        let defects = riccati_defect(&profile, 2).unwrap();
        // Pi = alpha/t is not polynomial, so the windowed Lagrange derivative
        // carries a truncation error ~ h^4; below 1e-8 on this grid.
        assert!(defects.iter().all(|d| d.abs() < 1e-8));
    }

    #[test]
    fn riccati_flat_model() {
        let g = log_grid(1.0, 50.0, 2000);
        let pi: Vec<f64> = g.iter().map(|t| 1.0 / t).collect();
        let eta: Vec<f64> = g.clone();
        let ric = vec![0.0; g.len()];
        let profile = RadialProfile::new(g, pi, eta, ric).unwrap();
        let defects = riccati_defect(&profile, 2).unwrap();
        assert!(defects.iter().all(|d| d.abs() < 1e-8));
    }

    #[test]
    fn riccati_violation_is_flagged() {
        // Pi = 2/t with Ric = 0: defect 2/t^2 > 0
        let g = log_grid(1.0, 10.0, 400);
        let pi: Vec<f64> = g.iter().map(|t| 2.0 / t).collect();
        let eta = vec![1.0; g.len()];
        let ric = vec![0.0; g.len()];
        let profile = RadialProfile::new(g.clone(), pi, eta, ric).unwrap();
        let defects = riccati_defect(&profile, 2).unwrap();
        for (t, d) in g.iter().zip(&defects) {
            assert_relative_eq!(*d, 2.0 / (t * t), max_relative = 1e-4);
        }
        assert!(defects.iter().any(|d| *d > 1e-6));
    }

    #[test]
    fn mean_curvature_bound_cases() {
        let params = comparison_params(2.0, 2).unwrap();
        let g = grid(1.0, 100.0, 500);

        // equality case: passes with zero violation
        let eq = RadialProfile::equality_case(&params, g.clone()).unwrap();
        let check = mean_curvature_bound_check(&eq, &params).unwrap();
        assert!(check.passes);
        assert_relative_eq!(check.max_violation, 0.0, epsilon = 1e-12);

        // strictly below the bound
        let pi: Vec<f64> = g.iter().map(|t| params.alpha / t - 1.0 / (t * t)).collect();
        let below = RadialProfile::new(g.clone(), pi, vec![1.0; g.len()], vec![0.0; g.len()])
            .unwrap();
        assert!(mean_curvature_bound_check(&below, &params).unwrap().passes);

        // constructed violation (alpha + 0.1)/t
        let pi: Vec<f64> = g.iter().map(|t| (params.alpha + 0.1) / t).collect();
        let above =
            RadialProfile::new(g.clone(), pi, vec![1.0; g.len()], vec![0.0; g.len()]).unwrap();
        let check = mean_curvature_bound_check(&above, &params).unwrap();
        assert!(!check.passes);
        assert_relative_eq!(check.max_violation, 0.1 / g[0], epsilon = 1e-12);
    }

    #[test]
    fn eta_power_law_constant_in_equality_case() {
        let params = comparison_params(6.0, 3).unwrap();
        let profile = RadialProfile::equality_case(&params, grid(1.0, 100.0, 300)).unwrap();
        assert!(eta_power_law_deviation(&profile, &params) < 1e-8);
    }

    fn model_curve(f: impl Fn(f64) -> f64, t_max: f64, n_pts: usize, dim: usize) -> GrowthCurve {
        let radii = grid(1.0, t_max, n_pts);
        let volumes = radii.iter().map(|&t| f(t)).collect();
        GrowthCurve {
            dim,
            radii,
            volumes,
            stderr: None,
            method: GrowthMethod::Model,
        }
    }

    #[test]
    fn flat_plane_annulus_ratio_tends_to_four() {
        let params = comparison_params(0.0, 2).unwrap();
        let curve = model_curve(|t| std::f64::consts::PI * t * t, 200.0, 4000, 2);
        let report = volume_comparison_check(&curve, &params).unwrap();
        assert!(report.comparison1_ok && report.comparison2_ok);
        // ratio 4t/(t-1) -> 4; within 2% by t = 100
        let (_, r) = *report
            .annulus_ratios
            .iter()
            .filter(|(t, _)| *t >= 100.0)
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
            .unwrap();
        assert!((r - 4.0).abs() < 0.02 * 4.0, "ratio at t=100 was {r}");
        // fitted C0 is dominated by the small-t annulus ratio 4t/(t-1) at t=3
        assert!(report.c0_fitted < 6.2 && report.c0_fitted > 3.9);
    }

    #[test]
    fn power_model_curve_annulus_ratio() {
        // vol(B_t) = t^{alpha+1}/(alpha+1): ratio -> 2(alpha+1)
        let alpha = 2.0;
        let params = comparison_params(alpha * (alpha - 1.0), 2).unwrap();
        let curve = model_curve(|t| t.powf(alpha + 1.0) / (alpha + 1.0), 400.0, 8000, 2);
        let report = volume_comparison_check(&curve, &params).unwrap();
        assert!(report.comparison1_ok && report.comparison2_ok);
        let (_, r_last) = *report.annulus_ratios.last().unwrap();
        assert_relative_eq!(r_last, 2.0 * (alpha + 1.0), max_relative = 0.01);
    }

    #[test]
    fn exponential_curve_is_unstable() {
        let params = comparison_params(0.0, 2).unwrap();
        let curve = model_curve(|t| t.exp(), 60.0, 2000, 2);
        let report = volume_comparison_check(&curve, &params).unwrap();
        // the annulus constant keeps growing with the range
        assert!(!report.comparison2_ok);
    }

    #[test]
    fn decreasing_curve_is_rejected() {
        let params = comparison_params(0.0, 2).unwrap();
        let radii = vec![1.0, 2.0, 3.0, 4.0];
        let volumes = vec![1.0, 2.0, 1.5, 3.0];
        let curve = GrowthCurve {
            dim: 2,
            radii,
            volumes,
            stderr: None,
            method: GrowthMethod::Model,
        };
        assert!(matches!(
            volume_comparison_check(&curve, &params),
            Err(GeomError::DecreasingVolume { .. })
        ));
    }

    #[test]
    fn excess_examples() {
        assert_relative_eq!(excess(3.0, 4.0, 7.0).unwrap(), 0.0);
        assert_relative_eq!(excess(5.0, 5.0, 6.0).unwrap(), 4.0);
        assert_relative_eq!(excess(1.0, 1.0, 2.0).unwrap(), 0.0);
        assert!(excess(1.0, 1.0, 3.0).is_err());
    }

    #[test]
    fn toponogov_examples_and_threshold() {
        // lambda = 1: cosh(3) <= cosh^2(2) holds
        assert!(toponogov_inequality_holds(1.0));
        assert_relative_eq!(3.0f64.cosh(), 10.0677, epsilon = 1e-4);
        assert_relative_eq!(2.0f64.cosh().powi(2), 14.1539, epsilon = 1e-3);
        // lambda = 10: fails
        assert!(!toponogov_inequality_holds(10.0));

        let th = toponogov_threshold();
        assert!(th.lambda_star > 2.17 && th.lambda_star < 2.20, "{}", th.lambda_star);
        assert!(th.residual < 1e-10);
    }

    #[test]
    fn diameter_bound_examples() {
        assert_relative_eq!(diameter_bound(10.0, 1.0, 2.0).unwrap(), 40.0);
        assert_relative_eq!(diameter_bound(0.0, 1.0, 2.0).unwrap(), 0.0);
        assert_relative_eq!(diameter_bound(3.0, 3.0, 2.0).unwrap(), 4.0);
        assert!(diameter_bound(1.0, 0.0, 2.0).is_err());
    }
}
