//! Distances, ball volumes, and growth/decay diagnostics.
//!
//! This module turns a `ChartedMetric` into the quantities the decay and
//! growth conditions are stated in: `d(m_0, m)`, `vol(B_t)`, the fitted
//! constant `sup |K| d^2`, the ratio sequence `vol(B_t)/t^n`, and the
//! Gauss-Bonnet total of capped surfaces.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{christoffel, sectional, surface_of_revolution_chart, RadialFn};
use crate::error::{GeomError, Result};
use crate::geom::ChartedMetric;

// ---------------------------------------------------------------------------
// Growth curves
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthMethod {
    Quadrature,
    MonteCarlo,
    /// Closed-form or synthetic model curve.
    Model,
}

/// Sampled `t -> vol(B_t)`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthCurve {
    pub dim: usize,
    pub radii: Vec<f64>,
    pub volumes: Vec<f64>,
    /// Monte Carlo standard errors, when applicable.
    pub stderr: Option<Vec<f64>>,
    pub method: GrowthMethod,
}

impl GrowthCurve {
    /// CSV with columns `t,vol,stderr` (stderr empty for exact methods).
    pub fn csv(&self) -> String {
        let mut out = String::from("t,vol,stderr\n");
        for (k, (&t, &v)) in self.radii.iter().zip(&self.volumes).enumerate() {
            let se = self
                .stderr
                .as_ref()
                .map(|s| format!("{:.12e}", s[k]))
                .unwrap_or_default();
            out.push_str(&format!("{t:.12e},{v:.12e},{se}\n"));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Geodesics
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GeodesicPath {
    pub points: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    pub arc_lengths: Vec<f64>,
    /// True when the trace left the chart before reaching the target length.
    pub exited: bool,
    /// `max |g(xdot, xdot) - 1|` along the path.
    pub max_unit_speed_defect: f64,
}

impl GeodesicPath {
    pub fn endpoint(&self) -> &[f64] {
        self.points.last().unwrap()
    }
}

/// Right-hand side of the geodesic system in first-order form.
fn geodesic_rhs(metric: &ChartedMetric, x: &[f64], v: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = x.len();
    let gamma = christoffel(metric, x)?;
    let mut acc = vec![0.0; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                s += gamma.get(i, j, k) * v[j] * v[k];
            }
        }
        acc[i] = -s;
    }
    Ok((v.to_vec(), acc))
}

fn rk4_step(
    metric: &ChartedMetric,
    x: &[f64],
    v: &[f64],
    h: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = x.len();
    let (k1x, k1v) = geodesic_rhs(metric, x, v)?;
    let ax: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * h * k1x[i]).collect();
    let av: Vec<f64> = (0..n).map(|i| v[i] + 0.5 * h * k1v[i]).collect();
    let (k2x, k2v) = geodesic_rhs(metric, &ax, &av)?;
    let bx: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * h * k2x[i]).collect();
    let bv: Vec<f64> = (0..n).map(|i| v[i] + 0.5 * h * k2v[i]).collect();
    let (k3x, k3v) = geodesic_rhs(metric, &bx, &bv)?;
    let cx: Vec<f64> = (0..n).map(|i| x[i] + h * k3x[i]).collect();
    let cv: Vec<f64> = (0..n).map(|i| v[i] + h * k3v[i]).collect();
    let (k4x, k4v) = geodesic_rhs(metric, &cx, &cv)?;
    let nx = (0..n)
        .map(|i| x[i] + h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]))
        .collect();
    let nv = (0..n)
        .map(|i| v[i] + h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]))
        .collect();
    Ok((nx, nv))
}

/// Integrates `xddot^i + Gamma^i_jk xdot^j xdot^k = 0` from `(p, v)` for the
/// given arc length with step-doubling adaptivity. `v` must be g-unit.
/// Leaving the chart truncates the path and sets the exit flag.
pub fn geodesic_trace(
    metric: &ChartedMetric,
    p: &[f64],
    v: &[f64],
    length: f64,
) -> Result<GeodesicPath> {
    let vv = DVector::from_column_slice(v);
    let norm_sq = metric.inner(p, &vv, &vv)?;
    if (norm_sq - 1.0).abs() > 1e-8 {
        return Err(GeomError::NotUnit { norm_sq });
    }

    let tol = 1e-10;
    let (h_min, h_max) = (1e-5, 0.05);
    let mut h = 0.01f64;
    let mut s = 0.0;
    let mut x = p.to_vec();
    let mut vel = v.to_vec();
    let mut path = GeodesicPath {
        points: vec![x.clone()],
        velocities: vec![vel.clone()],
        arc_lengths: vec![0.0],
        exited: false,
        max_unit_speed_defect: (norm_sq - 1.0).abs(),
    };

    while s < length {
        let step = h.min(length - s);
        // one full step vs two half steps
        let full = rk4_step(metric, &x, &vel, step);
        let halves = rk4_step(metric, &x, &vel, 0.5 * step)
            .and_then(|(mx, mv)| rk4_step(metric, &mx, &mv, 0.5 * step));
        let ((fx, fv), (nx, nv)) = match (full, halves) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                // a stage left the chart
                path.exited = true;
                break;
            }
        };
        let err = nx
            .iter()
            .zip(&fx)
            .chain(nv.iter().zip(&fv))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if err > tol && h > h_min {
            h = (0.5 * h).max(h_min);
            continue;
        }
        if !metric.domain().contains(&nx) {
            path.exited = true;
            break;
        }
        x = nx;
        vel = nv;
        s += step;
        let vv = DVector::from_column_slice(&vel);
        if let Ok(ns) = metric.inner(&x, &vv, &vv) {
            path.max_unit_speed_defect = path.max_unit_speed_defect.max((ns - 1.0).abs());
        }
        path.points.push(x.clone());
        path.velocities.push(vel.clone());
        path.arc_lengths.push(s);
        if err < tol / 32.0 {
            h = (2.0 * h).min(h_max);
        }
    }
    Ok(path)
}

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// All-pairs-free Dijkstra distance field from the basepoint on an eps-net
/// of a 2D chart, with a rich coprime stencil (offsets up to 5) keeping the
/// angular overestimate below ~0.5%.
pub struct GraphDistanceField {
    lo: [f64; 2],
    eps: f64,
    nx: usize,
    ny: usize,
    dist: Vec<f64>,
}

struct HeapEntry {
    dist: f64,
    node: u32,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other
            .dist
            .total_cmp(&self.dist)
            .then(other.node.cmp(&self.node))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn stencil_offsets() -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for dx in -5i64..=5 {
        for dy in -5i64..=5 {
            if (dx, dy) == (0, 0) {
                continue;
            }
            if gcd(dx.unsigned_abs(), dy.unsigned_abs()) == 1 {
                out.push((dx, dy));
            }
        }
    }
    out
}

pub fn graph_distance_field(metric: &ChartedMetric, eps: f64) -> Result<GraphDistanceField> {
    if metric.dim() != 2 {
        return Err(GeomError::MethodInfeasible {
            method: "graph",
            message: format!("graph distances support 2D charts, got dim {}", metric.dim()),
        });
    }
    let r = &metric.domain().ranges;
    let (lx, hx) = r[0];
    let (ly, hy) = r[1];
    let nx = ((hx - lx) / eps).floor() as usize + 1;
    let ny = ((hy - ly) / eps).floor() as usize + 1;
    let n_nodes = nx * ny;
    if n_nodes > 8_000_000 {
        return Err(GeomError::BudgetExceeded {
            message: format!("graph of {n_nodes} nodes exceeds the 8M-node budget"),
        });
    }

    // precompute the metric at every node (entries g11, g12, g22)
    let coords = |i: usize| -> [f64; 2] {
        [lx + (i % nx) as f64 * eps, ly + (i / nx) as f64 * eps]
    };
    let g_at: Vec<[f64; 3]> = (0..n_nodes)
        .into_par_iter()
        .map(|i| {
            let p = coords(i);
            let g = metric.eval_unchecked(&p);
            [g[(0, 0)], g[(0, 1)], g[(1, 1)]]
        })
        .collect();
    let seg_norm = |g: &[f64; 3], dx: f64, dy: f64| -> f64 {
        (g[0] * dx * dx + 2.0 * g[1] * dx * dy + g[2] * dy * dy).sqrt()
    };

    let bp = metric.basepoint();
    let si = ((bp[0] - lx) / eps).round() as usize;
    let sj = ((bp[1] - ly) / eps).round() as usize;
    let start = sj.min(ny - 1) * nx + si.min(nx - 1);

    let offsets = stencil_offsets();
    let mut dist = vec![f64::INFINITY; n_nodes];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: start as u32,
    });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        let u = node as usize;
        if d > dist[u] {
            continue;
        }
        let (ui, uj) = ((u % nx) as i64, (u / nx) as i64);
        for &(dx, dy) in &offsets {
            let (vi, vj) = (ui + dx, uj + dy);
            if vi < 0 || vj < 0 || vi >= nx as i64 || vj >= ny as i64 {
                continue;
            }
            let v = vj as usize * nx + vi as usize;
            let (ex, ey) = (dx as f64 * eps, dy as f64 * eps);
            let len = 0.5 * (seg_norm(&g_at[u], ex, ey) + seg_norm(&g_at[v], ex, ey));
            let nd = d + len;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapEntry {
                    dist: nd,
                    node: v as u32,
                });
            }
        }
    }
    Ok(GraphDistanceField {
        lo: [lx, ly],
        eps,
        nx,
        ny,
        dist,
    })
}

impl GraphDistanceField {
    /// Distance at the nearest lattice node.
    pub fn query(&self, m: &[f64]) -> Result<f64> {
        let i = ((m[0] - self.lo[0]) / self.eps).round() as i64;
        let j = ((m[1] - self.lo[1]) / self.eps).round() as i64;
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            return Err(GeomError::OutsideDomain { point: m.to_vec() });
        }
        let d = self.dist[j as usize * self.nx + i as usize];
        if d.is_finite() {
            Ok(d)
        } else {
            Err(GeomError::BudgetExceeded {
                message: "target node unreached by the distance sweep".into(),
            })
        }
    }
}

#[derive(Clone)]
pub enum DistanceMethod {
    /// `d = |t - t0|` along the radial coordinate; exact for rotationally
    /// symmetric charts carrying a radial structure.
    Radial,
    Graph { eps: f64 },
    /// Geodesic shooting from the basepoint (2D), fan search plus local
    /// refinement of the shooting angle.
    Shoot { fan: usize },
}

fn distance_radial(metric: &ChartedMetric, m: &[f64]) -> Result<f64> {
    let radial = metric
        .radial_structure()
        .ok_or(GeomError::MethodInfeasible {
            method: "radial",
            message: "metric carries no radial structure".into(),
        })?;
    Ok((m[0] - radial.basepoint_t).abs())
}

fn distance_shoot(metric: &ChartedMetric, m: &[f64], fan: usize) -> Result<f64> {
    if metric.dim() != 2 {
        return Err(GeomError::MethodInfeasible {
            method: "shoot",
            message: "shooting supports 2D charts".into(),
        });
    }
    let bp = metric.basepoint().to_vec();
    let g = metric.eval(&bp)?;
    let gm = metric.eval(m)?;
    // generous length budget: twice the coordinate diagonal scaled by the
    // largest eigenvalue at the endpoints
    let diag: f64 = metric
        .domain()
        .ranges
        .iter()
        .map(|(a, b)| (b - a) * (b - a))
        .sum::<f64>()
        .sqrt();
    let scale = g[(0, 0)].max(g[(1, 1)]).max(1.0).sqrt();
    let budget = 2.0 * diag * scale;

    // g-orthonormal frame at the basepoint
    let e1 = [1.0 / g[(0, 0)].sqrt(), 0.0];
    let mut e2 = [-g[(0, 1)] * e1[0] * e1[0], 1.0];
    let wn = (g[(0, 0)] * e2[0] * e2[0] + 2.0 * g[(0, 1)] * e2[0] * e2[1]
        + g[(1, 1)] * e2[1] * e2[1])
        .sqrt();
    e2[0] /= wn;
    e2[1] /= wn;

    let closest = |angle: f64| -> (f64, f64) {
        let v = vec![
            angle.cos() * e1[0] + angle.sin() * e2[0],
            angle.sin() * e2[1],
        ];
        let path = match geodesic_trace(metric, &bp, &v, budget) {
            Ok(p) => p,
            Err(_) => {
                return (f64::INFINITY, f64::INFINITY);
            }
        };
        // closest approach over path segments, projecting within each
        // segment to kill the sampling bias of the discrete trace
        let q = |a: &[f64], b: &[f64]| {
            gm[(0, 0)] * a[0] * b[0]
                + gm[(0, 1)] * (a[0] * b[1] + a[1] * b[0])
                + gm[(1, 1)] * a[1] * b[1]
        };
        let mut best = (f64::INFINITY, f64::INFINITY);
        for (w, s) in path.points.windows(2).zip(path.arc_lengths.windows(2)) {
            let seg = [w[1][0] - w[0][0], w[1][1] - w[0][1]];
            let to_m = [m[0] - w[0][0], m[1] - w[0][1]];
            let denom = q(&seg, &seg);
            let u = if denom > 0.0 {
                (q(&to_m, &seg) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let d = [to_m[0] - u * seg[0], to_m[1] - u * seg[1]];
            let miss = q(&d, &d).sqrt();
            if miss < best.0 {
                best = (miss, s[0] + u * (s[1] - s[0]));
            }
        }
        best
    };

    let mut best_angle = 0.0;
    let mut best = (f64::INFINITY, f64::INFINITY);
    for k in 0..fan {
        let a = 2.0 * std::f64::consts::PI * k as f64 / fan as f64;
        let c = closest(a);
        if c.0 < best.0 {
            best = c;
            best_angle = a;
        }
    }
    // golden-section refinement around the best fan angle
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let width = 2.0 * std::f64::consts::PI / fan as f64;
    let (mut a, mut b) = (best_angle - width, best_angle + width);
    for _ in 0..40 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if closest(x1).0 < closest(x2).0 {
            b = x2;
        } else {
            a = x1;
        }
    }
    let refined = closest(0.5 * (a + b));
    let (miss, s) = if refined.0 < best.0 { refined } else { best };
    if miss > 0.05 {
        return Err(GeomError::BudgetExceeded {
            message: format!("shooting missed the target by {miss:.3}"),
        });
    }
    Ok(s + miss)
}

/// Distance from the basepoint; the minimum over the requested methods.
pub fn distance_estimate(
    metric: &ChartedMetric,
    m: &[f64],
    methods: &[DistanceMethod],
) -> Result<f64> {
    let mut best: Option<f64> = None;
    let mut last_err = None;
    for method in methods {
        let d = match method {
            DistanceMethod::Radial => distance_radial(metric, m),
            DistanceMethod::Graph { eps } => {
                graph_distance_field(metric, *eps).and_then(|f| f.query(m))
            }
            DistanceMethod::Shoot { fan } => distance_shoot(metric, m, *fan),
        };
        match d {
            Ok(d) => best = Some(best.map_or(d, |b: f64| b.min(d))),
            Err(e) => last_err = Some(e),
        }
    }
    match best {
        Some(d) => Ok(d),
        None => Err(last_err.unwrap_or(GeomError::EmptySample)),
    }
}

// ---------------------------------------------------------------------------
// Ball volumes
// ---------------------------------------------------------------------------

pub type PointDistanceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum VolumeMethod {
    /// 1D reduction through the chart's radial structure.
    RadialQuadrature,
    /// Rejection sampling over the chart box with an explicit distance
    /// oracle; deterministic for a fixed seed and sample count.
    MonteCarlo {
        samples: usize,
        seed: u64,
        distance: PointDistanceFn,
    },
}

/// Adaptive Simpson quadrature with Richardson extrapolation. Handles the
/// wildly nonuniform integrands here (t^{-2} tails next to t^3 bulks) that
/// defeat any fixed panel count.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    // seed with 32 panels so narrow features are not stepped over
    let n0 = 32;
    let h = (b - a) / n0 as f64;
    let mut total = 0.0;
    for k in 0..n0 {
        let (x0, x1) = (a + k as f64 * h, a + (k + 1) as f64 * h);
        let xm = 0.5 * (x0 + x1);
        let (f0, f1, fm) = (f(x0), f(x1), f(xm));
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += recurse(f, x0, f0, x1, f1, xm, fm, whole, tol / n0 as f64, 40);
    }
    total
}

fn ball_volume_quadrature(metric: &ChartedMetric, t: f64) -> Result<f64> {
    let radial = metric
        .radial_structure()
        .ok_or(GeomError::MethodInfeasible {
            method: "radial-quadrature",
            message: "metric carries no radial structure".into(),
        })?;
    let upper_domain = metric.domain().ranges[0].1;
    let upper = (radial.basepoint_t + t).min(upper_domain);
    if upper <= radial.t_lo {
        return Ok(radial.base_volume);
    }
    let area = radial.sphere_area.clone();
    let f = move |s: f64| (area)(s);
    let rough = (f(radial.t_lo) + f(upper)) * 0.5 * (upper - radial.t_lo);
    let tol = 1e-11 * rough.abs().max(1e-12);
    Ok(radial.base_volume + adaptive_simpson(&f, radial.t_lo, upper, tol))
}

fn ball_volume_mc(
    metric: &ChartedMetric,
    t: f64,
    samples: usize,
    seed: u64,
    distance: &PointDistanceFn,
) -> Result<(f64, f64)> {
    let ranges = metric.domain().ranges.clone();
    let box_vol: f64 = ranges.iter().map(|(a, b)| b - a).product();
    let n_chunks = 64usize;
    let per_chunk = samples.div_ceil(n_chunks);
    let total = n_chunks * per_chunk;
    let stats: Vec<(f64, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64 + 1);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let mut p = vec![0.0; ranges.len()];
            for _ in 0..per_chunk {
                for (x, (a, b)) in p.iter_mut().zip(&ranges) {
                    *x = rng.gen_range(*a..*b);
                }
                if (distance)(&p) <= t {
                    let w = metric.volume_density(&p).unwrap_or(0.0);
                    sum += w;
                    sum_sq += w * w;
                }
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = stats
        .iter()
        .fold((0.0, 0.0), |(s, q), (a, b)| (s + a, q + b));
    let mean = sum / total as f64;
    let var = (sum_sq / total as f64 - mean * mean).max(0.0);
    let stderr = box_vol * (var / total as f64).sqrt();
    Ok((box_vol * mean, stderr))
}

/// `vol(B_t)` with an error estimate for sampled methods.
pub fn ball_volume(
    metric: &ChartedMetric,
    t: f64,
    method: &VolumeMethod,
) -> Result<(f64, Option<f64>)> {
    if t <= 0.0 {
        return Err(GeomError::InvalidParameter {
            name: "t",
            message: format!("ball radius must be positive, got {t}"),
        });
    }
    match method {
        VolumeMethod::RadialQuadrature => Ok((ball_volume_quadrature(metric, t)?, None)),
        VolumeMethod::MonteCarlo {
            samples,
            seed,
            distance,
        } => {
            let (v, se) = ball_volume_mc(metric, t, *samples, *seed, distance)?;
            Ok((v, Some(se)))
        }
    }
}

/// Evaluates `ball_volume` over a radii grid.
pub fn growth_curve(
    metric: &ChartedMetric,
    radii: &[f64],
    method: &VolumeMethod,
) -> Result<GrowthCurve> {
    let mut volumes = Vec::with_capacity(radii.len());
    let mut errs = Vec::with_capacity(radii.len());
    let mut any_err = false;
    for &t in radii {
        let (v, se) = ball_volume(metric, t, method)?;
        volumes.push(v);
        any_err |= se.is_some();
        errs.push(se.unwrap_or(0.0));
    }
    Ok(GrowthCurve {
        dim: metric.dim(),
        radii: radii.to_vec(),
        volumes,
        stderr: any_err.then_some(errs),
        method: match method {
            VolumeMethod::RadialQuadrature => GrowthMethod::Quadrature,
            VolumeMethod::MonteCarlo { .. } => GrowthMethod::MonteCarlo,
        },
    })
}

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

/// How to place sample points at a given radial parameter, and what distance
/// that parameter corresponds to.
#[derive(Clone)]
pub struct RadialSampler {
    pub point_at: Arc<dyn Fn(f64, &mut ChaCha8Rng) -> Vec<f64> + Send + Sync>,
    pub distance_of: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialSampler {
    /// Coordinate 0 is the radial axis; remaining coordinates sampled
    /// uniformly in a window of the chart (rotationally symmetric charts).
    pub fn coordinate_radial(metric: &ChartedMetric) -> Result<Self> {
        let radial = metric
            .radial_structure()
            .ok_or(GeomError::MethodInfeasible {
                method: "coordinate_radial",
                message: "metric carries no radial structure".into(),
            })?;
        let t0 = radial.basepoint_t;
        let ranges = metric.domain().ranges.clone();
        Ok(Self {
            point_at: Arc::new(move |t, rng| {
                let mut p = vec![t];
                for (a, b) in ranges.iter().skip(1) {
                    let (lo, hi) = (a.max(-3.0), b.min(3.0));
                    p.push(rng.gen_range(lo..hi));
                }
                p
            }),
            distance_of: Arc::new(move |t| (t - t0).abs()),
        })
    }

    /// Points on the Euclidean coordinate sphere of radius `t` around the
    /// basepoint (flat and conformally flat charts).
    pub fn euclidean(metric: &ChartedMetric) -> Self {
        let bp = metric.basepoint().to_vec();
        let n = metric.dim();
        Self {
            point_at: Arc::new(move |t, rng| {
                // random direction from Gaussian samples
                loop {
                    let dir: Vec<f64> = (0..n)
                        .map(|_| {
                            let (u1, u2): (f64, f64) =
                                (rng.gen_range(1e-12..1.0), rng.gen_range(0.0..1.0));
                            (-2.0 * u1.ln()).sqrt()
                                * (2.0 * std::f64::consts::PI * u2).cos()
                        })
                        .collect();
                    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
                    if norm > 1e-6 {
                        return bp
                            .iter()
                            .zip(&dir)
                            .map(|(b, d)| b + t * d / norm)
                            .collect();
                    }
                }
            }),
            distance_of: Arc::new(|t| t),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecaySampling {
    pub points_per_radius: usize,
    pub planes_per_point: usize,
    pub seed: u64,
}

impl Default for DecaySampling {
    fn default() -> Self {
        Self {
            points_per_radius: 6,
            planes_per_point: 6,
            seed: 0x5eed,
        }
    }
}

/// Per-radius extremes of `K d^2` plus the fitted constants of the decay
/// conditions.
#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    /// `(t, d, max |K| d^2, min K d^2)` per sampled radius.
    pub per_radius: Vec<(f64, f64, f64, f64)>,
    /// `sup |K| d^2` over all samples: the fitted two-sided constant.
    pub c_upper: f64,
    /// `inf K d^2` over all samples (for the one-sided lower bound).
    pub inf_kd2: f64,
    /// Set when `max |K| d^2` keeps growing with `log t` (slope > 0.1).
    pub divergence: bool,
    pub samples: usize,
}

impl DecayReport {
    /// CSV with columns `t,max_abs_K_times_d2`.
    pub fn csv(&self) -> String {
        let mut out = String::from("t,max_abs_K_times_d2\n");
        for (t, _, m, _) in &self.per_radius {
            out.push_str(&format!("{t:.12e},{m:.12e}\n"));
        }
        out
    }
}

fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}

fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let u1: f64 = rng.gen_range(1e-12..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let a = 2.0 * std::f64::consts::PI * u2;
    (r * a.cos(), r * a.sin())
}

fn sample_decay(
    metric: &ChartedMetric,
    radii: &[f64],
    sampling: &DecaySampling,
    sampler: &RadialSampler,
) -> Result<DecayReport> {
    if radii.is_empty() {
        return Err(GeomError::EmptySample);
    }
    for &t in radii {
        if (sampler.distance_of)(t) <= 0.0 {
            return Err(GeomError::InvalidParameter {
                name: "radii",
                message: format!("radius {t} has nonpositive distance from the basepoint"),
            });
        }
    }
    let n = metric.dim();
    let per_radius: Vec<(f64, f64, f64, f64)> = radii
        .par_iter()
        .enumerate()
        .map(|(idx, &t)| {
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            rng.set_stream(idx as u64 + 1);
            let d = (sampler.distance_of)(t);
            let mut max_abs = 0.0f64;
            let mut min_kd2 = f64::INFINITY;
            for _ in 0..sampling.points_per_radius {
                let p = (sampler.point_at)(t, &mut rng);
                let curv = match crate::curvature::riemann(metric, &p) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let mut planes = 0;
                while planes < sampling.planes_per_point {
                    let mut v = vec![0.0; n];
                    let mut w = vec![0.0; n];
                    for i in 0..n {
                        let (a, b) = gaussian_pair(&mut rng);
                        v[i] = a;
                        w[i] = b;
                    }
                    let plane = match metric.orthonormal_plane(&p, &v, &w) {
                        Ok(pl) => pl,
                        Err(_) => continue, // degenerate draw, resample
                    };
                    let k = crate::curvature::sectional_from_tensor(&curv, &plane);
                    let kd2 = k * d * d;
                    max_abs = max_abs.max(kd2.abs());
                    min_kd2 = min_kd2.min(kd2);
                    planes += 1;
                }
            }
            (t, d, max_abs, min_kd2)
        })
        .collect();

    let c_upper = per_radius.iter().map(|r| r.2).fold(0.0f64, f64::max);
    let inf_kd2 = per_radius.iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
    let log_t: Vec<f64> = per_radius.iter().map(|r| r.0.ln()).collect();
    let max_kd2: Vec<f64> = per_radius.iter().map(|r| r.2).collect();
    let divergence = linear_slope(&log_t, &max_kd2) > 0.1;
    Ok(DecayReport {
        per_radius,
        c_upper,
        inf_kd2,
        divergence,
        samples: radii.len() * sampling.points_per_radius * sampling.planes_per_point,
    })
}

/// Fits `C = sup |K(P)| d(m_0, m)^2` over randomized points and planes at
/// the given radii.
pub fn decay_constant(
    metric: &ChartedMetric,
    radii: &[f64],
    sampling: &DecaySampling,
    sampler: &RadialSampler,
) -> Result<DecayReport> {
    sample_decay(metric, radii, sampling, sampler)
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerDecayReport {
    /// Fitted constant of the one-sided bound: `sup max(0, -K d^2)`.
    pub c_lower: f64,
    pub divergence: bool,
}

/// One-sided version: only curvature below the lower barrier counts.
pub fn lower_decay_check(
    metric: &ChartedMetric,
    radii: &[f64],
    sampling: &DecaySampling,
    sampler: &RadialSampler,
) -> Result<LowerDecayReport> {
    let report = sample_decay(metric, radii, sampling, sampler)?;
    let neg: Vec<f64> = report
        .per_radius
        .iter()
        .map(|r| (-r.3).max(0.0))
        .collect();
    let log_t: Vec<f64> = report.per_radius.iter().map(|r| r.0.ln()).collect();
    Ok(LowerDecayReport {
        c_lower: neg.iter().fold(0.0f64, |m, &x| m.max(x)),
        divergence: linear_slope(&log_t, &neg) > 0.1,
    })
}

// ---------------------------------------------------------------------------
// Slow volume growth
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct SlowGrowthReport {
    /// `(t, vol(B_t)/t^n)`.
    pub ratios: Vec<(f64, f64)>,
    /// Minimum ratio over the top decade: the finite-data liminf stand-in.
    pub liminf_estimate: f64,
    /// Reference ratio: minimum over the first decade.
    pub first_decade_ref: f64,
    /// Running-minimum subsequence witnessing the decay.
    pub witness: Vec<(f64, f64)>,
    /// Log-log slope of the ratio along the witness subsequence.
    pub witness_slope: f64,
    pub slow: bool,
}

/// Finite-data version of the slow-growth condition: the flag is set when
/// the top-decade minimum of `vol(B_t)/t^n` falls below `fraction` of the
/// first-decade reference and the witness subsequence has negative log-log
/// slope.
pub fn slow_growth_check(curve: &GrowthCurve, fraction: f64) -> Result<SlowGrowthReport> {
    let t_min = curve.radii[0];
    let t_max = *curve.radii.last().unwrap();
    let decades = (t_max / t_min).log10();
    if decades < 2.0 {
        return Err(GeomError::RangeTooShort {
            decades,
            needed: 2.0,
        });
    }
    let n = curve.dim as f64;
    let ratios: Vec<(f64, f64)> = curve
        .radii
        .iter()
        .zip(&curve.volumes)
        .map(|(&t, &v)| (t, v / t.powf(n)))
        .collect();

    let first_decade_ref = ratios
        .iter()
        .filter(|(t, _)| *t <= 10.0 * t_min)
        .map(|(_, r)| *r)
        .fold(f64::INFINITY, f64::min);
    let liminf_estimate = ratios
        .iter()
        .filter(|(t, _)| *t >= t_max / 10.0)
        .map(|(_, r)| *r)
        .fold(f64::INFINITY, f64::min);

    let mut witness = Vec::new();
    let mut running = f64::INFINITY;
    for &(t, r) in &ratios {
        if r < running * (1.0 - 1e-9) {
            running = r;
            witness.push((t, r));
        } else if witness.is_empty() {
            running = r;
            witness.push((t, r));
        }
    }
    let wx: Vec<f64> = witness.iter().map(|(t, _)| t.ln()).collect();
    let wy: Vec<f64> = witness.iter().map(|(_, r)| r.ln()).collect();
    let witness_slope = linear_slope(&wx, &wy);

    let slow = liminf_estimate < fraction * first_decade_ref && witness_slope < -0.01;
    Ok(SlowGrowthReport {
        ratios,
        liminf_estimate,
        first_decade_ref,
        witness,
        witness_slope,
        slow,
    })
}

// ---------------------------------------------------------------------------
// Gauss-Bonnet on capped surfaces of revolution
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct GaussBonnetReport {
    pub t_max: f64,
    /// `1 - f'(T)`: interior total by the boundary formula.
    pub boundary_total: f64,
    /// Independent route: area quadrature of the curvature computed by the
    /// full tensor engine.
    pub quadrature_total: f64,
    pub difference: f64,
}

/// `(1/2pi) int_{B_T} K dA` for the capped profile `dt^2 + f(t)^2 dtheta^2`
/// with `f(0) = 0`, `f'(0) = 1`.
pub fn gauss_bonnet_disk(warp: &RadialFn, t_max: f64) -> Result<GaussBonnetReport> {
    let slope = warp.deriv(0.0);
    if (slope - 1.0).abs() > 1e-6 || warp.eval(0.0).abs() > 1e-9 {
        return Err(GeomError::BadCap { slope });
    }
    let boundary_total = 1.0 - warp.deriv(t_max);

    // engine route: K from the generic tensor pipeline on the chart, area
    // quadrature away from the coordinate-degenerate cap tip
    let eps = 1e-2;
    let chart = surface_of_revolution_chart("gb-profile", warp, (eps / 2.0, t_max + 1.0), 1.0)?;
    let integrand = |t: f64| -> f64 {
        let p = [t, 0.0];
        let plane = chart
            .orthonormal_plane(&p, &[1.0, 0.0], &[0.0, 1.0])
            .expect("coordinate plane");
        let k = sectional(&chart, &p, &plane).expect("sectional on profile");
        k * warp.eval(t)
    };
    let bulk = adaptive_simpson(&integrand, eps, t_max, 1e-8);
    // tip contribution from the profile's own derivative data
    let tip = warp.deriv(0.0) - warp.deriv(eps);
    let quadrature_total = tip + bulk;

    Ok(GaussBonnetReport {
        t_max,
        boundary_total,
        quadrature_total,
        difference: (boundary_total - quadrature_total).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::doubly_warped_chart;
    use crate::geom::{flat_metric, RadialStructure};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn flat_geodesics_are_straight() {
        let m = flat_metric(2, 20.0);
        let v = [3.0f64 / 5.0, 4.0 / 5.0];
        let path = geodesic_trace(&m, &[0.0, 0.0], &v, 10.0).unwrap();
        assert!(!path.exited);
        let end = path.endpoint();
        assert_relative_eq!(end[0], 6.0, epsilon = 1e-10);
        assert_relative_eq!(end[1], 8.0, epsilon = 1e-10);
        assert!(path.max_unit_speed_defect < 1e-10);
    }

    #[test]
    fn polar_radial_lines_are_geodesics() {
        let warp = RadialFn::power(1.0);
        let m = surface_of_revolution_chart("polar", &warp, (0.5, 100.0), 1.0).unwrap();
        let path = geodesic_trace(&m, &[1.0, 0.3], &[1.0, 0.0], 5.0).unwrap();
        let end = path.endpoint();
        assert_relative_eq!(end[0], 6.0, epsilon = 1e-8);
        assert_relative_eq!(end[1], 0.3, epsilon = 1e-12);
        assert_relative_eq!(*path.arc_lengths.last().unwrap(), 5.0);
    }

    #[test]
    fn sphere_geodesics_close_after_two_pi() {
        let warp = RadialFn::new(|t| t.sin(), |t| t.cos(), |t| -t.sin());
        let m = surface_of_revolution_chart("sphere", &warp, (0.2, PI - 0.2), PI / 2.0).unwrap();
        // tilted great circle through (pi/2, 0)
        let beta = 0.3f64;
        let v = [beta.sin(), beta.cos()]; // f(pi/2) = 1, so this is unit
        let path = geodesic_trace(&m, &[PI / 2.0, 0.0], &v, 2.0 * PI).unwrap();
        assert!(!path.exited);
        assert!(path.max_unit_speed_defect < 1e-6);
        let end = path.endpoint();
        assert_relative_eq!(end[0], PI / 2.0, epsilon = 1e-6);
        assert_relative_eq!(end[1], 2.0 * PI, epsilon = 1e-6);
    }

    #[test]
    fn radial_distance_on_warped_end() {
        let warp = RadialFn::power(2.0);
        let m = surface_of_revolution_chart("c2", &warp, (1.0, 100.0), 1.0)
            .unwrap()
            .with_radial_structure(RadialStructure {
                basepoint_t: 1.0,
                t_lo: 1.0,
                base_volume: 0.0,
                sphere_area: Arc::new(|t| 2.0 * PI * t * t),
            });
        assert_relative_eq!(
            distance_estimate(&m, &[7.0, 0.4], &[DistanceMethod::Radial]).unwrap(),
            6.0
        );
    }

    #[test]
    fn graph_distance_on_flat_plane_within_one_percent() {
        let m = flat_metric(2, 2.0);
        let field = graph_distance_field(&m, 0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 100 {
            let x: f64 = rng.gen_range(-1.9..1.9);
            let y: f64 = rng.gen_range(-1.9..1.9);
            let true_d = (x * x + y * y).sqrt();
            if true_d < 0.5 {
                continue;
            }
            let d = field.query(&[x, y]).unwrap();
            assert!(d >= true_d - 2.0 * 0.01, "graph underestimated: {d} vs {true_d}");
            assert!(
                (d - true_d) / true_d < 0.01,
                "graph off by more than 1%: {d} vs {true_d}"
            );
            checked += 1;
        }
    }

    #[test]
    fn shooting_recovers_flat_distance() {
        let m = flat_metric(2, 10.0);
        let d = distance_estimate(&m, &[3.0, 4.0], &[DistanceMethod::Shoot { fan: 64 }]).unwrap();
        assert_relative_eq!(d, 5.0, epsilon = 1e-2);
    }

    #[test]
    fn flat_ball_volume_quadrature() {
        let m = flat_metric(2, 10.0);
        let (v, _) = ball_volume(&m, 2.0, &VolumeMethod::RadialQuadrature).unwrap();
        assert_relative_eq!(v, 4.0 * PI, max_relative = 1e-10);
    }

    #[test]
    fn flat_ball_volume_monte_carlo() {
        let m = flat_metric(2, 2.0);
        let method = VolumeMethod::MonteCarlo {
            samples: 400_000,
            seed: 42,
            distance: Arc::new(|p: &[f64]| (p[0] * p[0] + p[1] * p[1]).sqrt()),
        };
        let (v, se) = ball_volume(&m, 1.5, &method).unwrap();
        let se = se.unwrap();
        let exact = PI * 1.5 * 1.5;
        assert!(se < 0.05, "stderr too large: {se}");
        assert!((v - exact).abs() < 4.0 * se, "MC estimate {v} vs {exact} (se {se})");
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let m = flat_metric(2, 2.0);
        let dist: PointDistanceFn = Arc::new(|p: &[f64]| (p[0] * p[0] + p[1] * p[1]).sqrt());
        let method = VolumeMethod::MonteCarlo {
            samples: 50_000,
            seed: 9,
            distance: dist,
        };
        let a = ball_volume(&m, 1.0, &method).unwrap();
        let b = ball_volume(&m, 1.0, &method).unwrap();
        assert_eq!(a.0.to_bits(), b.0.to_bits());
    }

    #[test]
    fn finite_volume_end_c_minus_two() {
        // dt^2 + t^{-4} dtheta^2 from t = 1: vol([1, T]) = 2 pi (1 - 1/T)
        let warp = RadialFn::power(-2.0);
        let m = surface_of_revolution_chart("cm2", &warp, (1.0, 1e4), 1.0)
            .unwrap()
            .with_radial_structure(RadialStructure {
                basepoint_t: 1.0,
                t_lo: 1.0,
                base_volume: 0.0,
                sphere_area: Arc::new(|t| 2.0 * PI * t.powi(-2)),
            });
        let (v, _) = ball_volume(&m, 999.0, &VolumeMethod::RadialQuadrature).unwrap();
        assert_relative_eq!(v, 2.0 * PI * (1.0 - 1.0 / 1000.0), max_relative = 1e-8);
    }

    #[test]
    fn product_with_circle_obeys_fubini_bound() {
        // (surface dt^2 + f^2 dtheta^2) x (circle of length L): the ball
        // projects into the surface ball, so vol <= L * vol_surface
        let f = RadialFn::power(2.0);
        let ell = RadialFn::constant(3.0); // circle factor, length 2 pi * 3
        let circle_len = 2.0 * PI * 3.0;
        let prod = doubly_warped_chart("prod", &f, &ell, (1.0, 100.0), 1.0)
            .unwrap()
            .with_radial_structure(RadialStructure {
                basepoint_t: 1.0,
                t_lo: 1.0,
                base_volume: 0.0,
                sphere_area: Arc::new(move |t| 2.0 * PI * t * t * circle_len),
            });
        let surf = surface_of_revolution_chart("surf", &f, (1.0, 100.0), 1.0)
            .unwrap()
            .with_radial_structure(RadialStructure {
                basepoint_t: 1.0,
                t_lo: 1.0,
                base_volume: 0.0,
                sphere_area: Arc::new(|t| 2.0 * PI * t * t),
            });
        for t in [2.0, 10.0, 50.0] {
            let (vp, _) = ball_volume(&prod, t, &VolumeMethod::RadialQuadrature).unwrap();
            let (vs, _) = ball_volume(&surf, t, &VolumeMethod::RadialQuadrature).unwrap();
            assert!(vp <= circle_len * vs * (1.0 + 1e-10));
        }
    }

    #[test]
    fn flat_decay_constant_is_exactly_zero() {
        let m = flat_metric(2, 1100.0);
        let sampler = RadialSampler::euclidean(&m);
        let radii: Vec<f64> = (1..=10).map(|k| 100.0 * k as f64).collect();
        let report =
            decay_constant(&m, &radii, &DecaySampling::default(), &sampler).unwrap();
        assert_eq!(report.c_upper, 0.0);
        assert!(!report.divergence);
    }

    #[test]
    fn c2_end_decay_constant_near_two() {
        let warp = RadialFn::power(2.0);
        let m = surface_of_revolution_chart("c2", &warp, (1.0, 2000.0), 1.0).unwrap();
        let m = m.with_radial_structure(RadialStructure {
            basepoint_t: 1.0,
            t_lo: 1.0,
            base_volume: 0.0,
            sphere_area: Arc::new(|t| 2.0 * PI * t * t),
        });
        let sampler = RadialSampler::coordinate_radial(&m).unwrap();
        let radii: Vec<f64> = (0..20)
            .map(|k| 10.0 * (1000.0f64 / 10.0).powf(k as f64 / 19.0))
            .collect();
        let report = decay_constant(&m, &radii, &DecaySampling::default(), &sampler).unwrap();
        assert!(report.c_upper > 1.8 && report.c_upper < 2.2, "{}", report.c_upper);
        assert!(!report.divergence);

        let lower = lower_decay_check(&m, &radii, &DecaySampling::default(), &sampler).unwrap();
        assert!(lower.c_lower > 1.8 && lower.c_lower < 2.2, "{}", lower.c_lower);
    }

    #[test]
    fn hyperbolic_plane_trips_divergence() {
        let warp = RadialFn::new(|t| t.sinh(), |t| t.cosh(), |t| t.sinh());
        let m = surface_of_revolution_chart("hyp", &warp, (0.01, 25.0), 0.01).unwrap();
        let m = m.with_radial_structure(RadialStructure {
            basepoint_t: 0.01,
            t_lo: 0.01,
            base_volume: 0.0,
            sphere_area: Arc::new(|t| 2.0 * PI * t.sinh()),
        });
        let sampler = RadialSampler::coordinate_radial(&m).unwrap();
        let radii: Vec<f64> = (1..=8).map(|k| 2.5 * k as f64).collect();
        let report = decay_constant(&m, &radii, &DecaySampling::default(), &sampler).unwrap();
        assert!(report.divergence);
        let lower = lower_decay_check(&m, &radii, &DecaySampling::default(), &sampler).unwrap();
        assert!(lower.divergence);
    }

    #[test]
    fn decay_constant_is_scale_invariant() {
        // g -> u^{-2} g in arc-length form: f~(s) = f(u s)/u at radius t/u
        let base = RadialFn::power(2.0);
        let sampling = DecaySampling::default();
        let radii: Vec<f64> = (1..=10).map(|k| 10.0 * k as f64).collect();
        let m = surface_of_revolution_chart("c2", &base, (1.0, 200.0), 1.0)
            .unwrap()
            .with_radial_structure(RadialStructure {
                basepoint_t: 1.0,
                t_lo: 1.0,
                base_volume: 0.0,
                sphere_area: Arc::new(|t| 2.0 * PI * t * t),
            });
        let c_ref = decay_constant(&m, &radii, &sampling, &RadialSampler::coordinate_radial(&m).unwrap())
            .unwrap()
            .c_upper;
        for u in [2.0f64, 10.0] {
            let scaled = RadialFn::new(
                move |s| (u * s).powi(2) / u,
                move |s| 2.0 * u * s,
                move |_| 2.0 * u,
            );
            let ms = surface_of_revolution_chart("c2s", &scaled, (1.0 / u, 200.0 / u), 1.0 / u)
                .unwrap()
                .with_radial_structure(RadialStructure {
                    basepoint_t: 1.0 / u,
                    t_lo: 1.0 / u,
                    base_volume: 0.0,
                    sphere_area: Arc::new(move |t| 2.0 * PI * u * t * t),
                });
            let radii_s: Vec<f64> = radii.iter().map(|t| t / u).collect();
            let sampler_s = RadialSampler::coordinate_radial(&ms).unwrap();
            let c_s = decay_constant(&ms, &radii_s, &sampling, &sampler_s)
                .unwrap()
                .c_upper;
            assert_relative_eq!(c_s, c_ref, max_relative = 0.05);
        }
    }

    fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn flat_growth_is_not_slow() {
        let m = flat_metric(3, 1.0);
        // model curve: exact flat volumes
        let radii = log_grid(1.0, 1e4, 200);
        let volumes = radii.iter().map(|t| 4.0 / 3.0 * PI * t * t * t).collect();
        let curve = GrowthCurve {
            dim: m.dim(),
            radii,
            volumes,
            stderr: None,
            method: GrowthMethod::Model,
        };
        let report = slow_growth_check(&curve, 0.1).unwrap();
        assert!(!report.slow);
        assert_relative_eq!(report.liminf_estimate, 4.0 / 3.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn cone_growth_is_not_slow() {
        // dt^2 + (0.1 t)^2 dtheta^2: vol(B_t) = 0.1 pi t^2, ratio constant
        let radii = log_grid(1.0, 1e4, 200);
        let volumes = radii.iter().map(|t| 0.1 * PI * t * t).collect();
        let curve = GrowthCurve {
            dim: 2,
            radii,
            volumes,
            stderr: None,
            method: GrowthMethod::Model,
        };
        assert!(!slow_growth_check(&curve, 0.1).unwrap().slow);
    }

    #[test]
    fn decaying_ratio_is_slow() {
        // vol(B_t)/t^3 = log^2(1+t)/t
        let radii = log_grid(10.0, 1e4, 300);
        let volumes = radii
            .iter()
            .map(|t| t * t * t.ln_1p().powi(2))
            .collect();
        let curve = GrowthCurve {
            dim: 3,
            radii,
            volumes,
            stderr: None,
            method: GrowthMethod::Model,
        };
        let report = slow_growth_check(&curve, 0.1).unwrap();
        assert!(report.slow);
        assert!(report.witness_slope < -0.5);
    }

    #[test]
    fn short_range_is_rejected() {
        let curve = GrowthCurve {
            dim: 2,
            radii: vec![1.0, 2.0, 5.0],
            volumes: vec![1.0, 4.0, 25.0],
            stderr: None,
            method: GrowthMethod::Model,
        };
        assert!(matches!(
            slow_growth_check(&curve, 0.1),
            Err(GeomError::RangeTooShort { .. })
        ));
    }

    #[test]
    fn gauss_bonnet_flat_plane_is_zero() {
        let warp = RadialFn::power(1.0);
        let report = gauss_bonnet_disk(&warp, 50.0).unwrap();
        assert!(report.boundary_total.abs() < 1e-12);
        assert!(report.quadrature_total.abs() < 1e-6);
    }

    #[test]
    fn gauss_bonnet_capped_cylinder_tends_to_one() {
        // smooth cap joining f = sin t near 0 to f = 1 for t >= pi/2
        let warp = RadialFn::new(
            |t| if t < PI / 2.0 { t.sin() } else { 1.0 },
            |t| if t < PI / 2.0 { t.cos() } else { 0.0 },
            |t| if t < PI / 2.0 { -t.sin() } else { 0.0 },
        );
        let report = gauss_bonnet_disk(&warp, 30.0).unwrap();
        assert_relative_eq!(report.boundary_total, 1.0, epsilon = 1e-12);
        assert!(report.difference < 1e-4, "difference {}", report.difference);
    }

    #[test]
    fn gauss_bonnet_rejects_bad_cap() {
        let warp = RadialFn::new(|t| 2.0 * t, |_| 2.0, |_| 0.0);
        assert!(matches!(
            gauss_bonnet_disk(&warp, 10.0),
            Err(GeomError::BadCap { .. })
        ));
    }

    #[test]
    fn growth_curve_csv_shape() {
        let m = flat_metric(2, 10.0);
        let curve = growth_curve(&m, &[1.0, 2.0], &VolumeMethod::RadialQuadrature).unwrap();
        let csv = curve.csv();
        assert!(csv.starts_with("t,vol,stderr\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
