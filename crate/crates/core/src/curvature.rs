//! Christoffel symbols, the Riemann tensor, sectional and Ricci curvature,
//! plus independent closed-form oracles for cross-validation.
//!
//! Index convention (fixed so the unit round sphere yields K = +1):
//!
//! ```text
//! R^i_jkl = d_k Gamma^i_jl - d_l Gamma^i_jk
//!         + Gamma^i_km Gamma^m_jl - Gamma^i_lm Gamma^m_jk
//! ```
//!
//! with `R_ijkl = g_im R^m_jkl` and, for a g-orthonormal pair `(v, w)`,
//! `K(P) = R_ijkl v^i w^j v^k w^l`.
//!
//! Three closed-form oracles are provided against which the generic pipeline
//! is cross-checked: warped products `dt^2 + f(t)^2 h`, doubly warped
//! products `dt^2 + a(t)^2 dx^2 + b(t)^2 dy^2`, and the conformal change
//! `g = e^{2 phi} h`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};
use crate::geom::{ChartDomain, ChartedMetric, Derivatives, TwoPlane};

// ---------------------------------------------------------------------------
// Small dense coordinate tables
// ---------------------------------------------------------------------------

/// Rank-3 coordinate table, e.g. Christoffel symbols `Gamma^i_jk`.
#[derive(Clone, Debug)]
pub struct Tensor3 {
    pub dim: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.dim + j) * self.dim + k] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

/// Rank-4 coordinate table, e.g. `R^i_jkl` or `R_ijkl`.
#[derive(Clone, Debug)]
pub struct Tensor4 {
    pub dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[((i * self.dim + j) * self.dim + k) * self.dim + l]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        self.data[((i * self.dim + j) * self.dim + k) * self.dim + l] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }
}

// ---------------------------------------------------------------------------
// Curvature tensor
// ---------------------------------------------------------------------------

/// Riemann tensor at a point, in raised `R^i_jkl` and lowered `R_ijkl` form.
#[derive(Clone, Debug)]
pub struct CurvatureTensor {
    pub point: Vec<f64>,
    pub up: Tensor4,
    pub low: Tensor4,
}

impl CurvatureTensor {
    pub fn dim(&self) -> usize {
        self.up.dim
    }

    fn from_up(point: Vec<f64>, up: Tensor4, g: &DMatrix<f64>) -> Self {
        let n = up.dim;
        let mut low = Tensor4::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = 0.0;
                        for m in 0..n {
                            s += g[(i, m)] * up.get(m, j, k, l);
                        }
                        low.set(i, j, k, l, s);
                    }
                }
            }
        }
        CurvatureTensor { point, up, low }
    }

    /// Worst relative violation of the algebraic symmetries
    /// `R_ijkl = -R_jikl = -R_ijlk = R_klij` and the first Bianchi identity.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.low.dim;
        let scale = self.low.max_abs().max(1e-300);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.low.get(i, j, k, l);
                        worst = worst.max((r + self.low.get(j, i, k, l)).abs());
                        worst = worst.max((r + self.low.get(i, j, l, k)).abs());
                        worst = worst.max((r - self.low.get(k, l, i, j)).abs());
                        let bianchi = self.low.get(i, j, k, l)
                            + self.low.get(i, k, l, j)
                            + self.low.get(i, l, j, k);
                        worst = worst.max(bianchi.abs());
                    }
                }
            }
        }
        worst / scale
    }
}

// ---------------------------------------------------------------------------
// Generic pipeline
// ---------------------------------------------------------------------------

/// Christoffel symbols `Gamma^i_jk` at `p`.
pub fn christoffel(metric: &ChartedMetric, p: &[f64]) -> Result<Tensor3> {
    let n = metric.dim();
    let g = metric.eval(p)?;
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| GeomError::NotPositiveDefinite {
            point: p.to_vec(),
            min_eigenvalue: 0.0,
        })?;
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| metric.d_metric(p, k))
        .collect::<Result<_>>()?;
    let mut gamma = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for m in 0..n {
                    s += g_inv[(i, m)] * (dg[j][(m, k)] + dg[k][(m, j)] - dg[m][(j, k)]);
                }
                gamma.set(i, j, k, 0.5 * s);
            }
        }
    }
    Ok(gamma)
}

/// Christoffel symbols together with their partial derivatives
/// `dGamma[l]` = `d_l Gamma^i_jk`, assembled from first and second metric
/// derivatives (no third derivatives needed).
fn christoffel_with_derivative(
    metric: &ChartedMetric,
    p: &[f64],
) -> Result<(Tensor3, Vec<Tensor3>)> {
    let n = metric.dim();
    let g = metric.eval(p)?;
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| GeomError::NotPositiveDefinite {
            point: p.to_vec(),
            min_eigenvalue: 0.0,
        })?;
    let dg: Vec<DMatrix<f64>> = (0..n)
        .map(|k| metric.d_metric(p, k))
        .collect::<Result<_>>()?;
    let mut d2g = vec![vec![DMatrix::<f64>::zeros(n, n); n]; n];
    for k in 0..n {
        for l in k..n {
            let m = metric.d2_metric(p, k, l)?;
            d2g[k][l] = m.clone();
            d2g[l][k] = m;
        }
    }
    // d_l g^{-1} = - g^{-1} (d_l g) g^{-1}
    let dginv: Vec<DMatrix<f64>> = (0..n).map(|l| -(&g_inv * &dg[l] * &g_inv)).collect();

    let mut gamma = Tensor3::zeros(n);
    let mut dgamma = vec![Tensor3::zeros(n); n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for m in 0..n {
                    s += g_inv[(i, m)] * (dg[j][(m, k)] + dg[k][(m, j)] - dg[m][(j, k)]);
                }
                gamma.set(i, j, k, 0.5 * s);
                for l in 0..n {
                    let mut t = 0.0;
                    for m in 0..n {
                        t += dginv[l][(i, m)]
                            * (dg[j][(m, k)] + dg[k][(m, j)] - dg[m][(j, k)]);
                        t += g_inv[(i, m)]
                            * (d2g[l][j][(m, k)] + d2g[l][k][(m, j)] - d2g[l][m][(j, k)]);
                    }
                    dgamma[l].set(i, j, k, 0.5 * t);
                }
            }
        }
    }
    Ok((gamma, dgamma))
}

/// Riemann tensor at `p` from the generic pipeline.
pub fn riemann(metric: &ChartedMetric, p: &[f64]) -> Result<CurvatureTensor> {
    let n = metric.dim();
    let (gamma, dgamma) = christoffel_with_derivative(metric, p)?;
    let mut up = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut r = dgamma[k].get(i, j, l) - dgamma[l].get(i, j, k);
                    for m in 0..n {
                        r += gamma.get(i, k, m) * gamma.get(m, j, l)
                            - gamma.get(i, l, m) * gamma.get(m, j, k);
                    }
                    up.set(i, j, k, l, r);
                }
            }
        }
    }
    let g = metric.eval(p)?;
    Ok(CurvatureTensor::from_up(p.to_vec(), up, &g))
}

/// Sectional curvature of an already-orthonormal plane, given the lowered
/// tensor: `K = R_ijkl v^i w^j v^k w^l`.
pub fn sectional_from_tensor(curv: &CurvatureTensor, plane: &TwoPlane) -> f64 {
    let n = curv.dim();
    let mut k_val = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    k_val +=
                        curv.low.get(i, j, k, l) * plane.v[i] * plane.w[j] * plane.v[k] * plane.w[l];
                }
            }
        }
    }
    k_val
}

/// Sectional curvature `K(P)` of an orthonormalized 2-plane.
pub fn sectional(metric: &ChartedMetric, p: &[f64], plane: &TwoPlane) -> Result<f64> {
    if plane.orthonormality_defect(metric)? > 1e-8 {
        return Err(GeomError::DegeneratePlane { tol: 1e-8 });
    }
    let curv = riemann(metric, p)?;
    Ok(sectional_from_tensor(&curv, plane))
}

/// Convenience: orthonormalize `(v, w)` at `p` and return `K`.
pub fn sectional_of_span(
    metric: &ChartedMetric,
    p: &[f64],
    v: &[f64],
    w: &[f64],
) -> Result<f64> {
    let plane = metric.orthonormal_plane(p, v, w)?;
    sectional(metric, p, &plane)
}

/// Ricci curvature `Ric(v, v)` for a g-unit vector `v` at `p`, via the trace
/// `Ric_jl = R^i_jil`.
pub fn ricci(metric: &ChartedMetric, p: &[f64], v: &[f64]) -> Result<f64> {
    let n = metric.dim();
    let vv = DVector::from_column_slice(v);
    let norm_sq = metric.inner(p, &vv, &vv)?;
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(GeomError::NotUnit { norm_sq });
    }
    let curv = riemann(metric, p)?;
    let mut ric = 0.0;
    for j in 0..n {
        for l in 0..n {
            let mut tr = 0.0;
            for i in 0..n {
                tr += curv.up.get(i, j, i, l);
            }
            ric += tr * vv[j] * vv[l];
        }
    }
    Ok(ric)
}

// ---------------------------------------------------------------------------
// Conformal change, Eq-style: g = e^{2 phi} h
// ---------------------------------------------------------------------------

/// Conformal factor data at a point, with respect to the background metric:
/// the value, gradient and covariant Hessian of `phi`.
#[derive(Clone, Debug)]
pub struct ConformalData {
    pub phi: f64,
    pub grad: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

impl ConformalData {
    pub fn constant(phi: f64, n: usize) -> Self {
        Self {
            phi,
            grad: DVector::zeros(n),
            hessian: DMatrix::zeros(n, n),
        }
    }
}

/// Riemann tensor of `g = e^{2 phi} h` from the curvature of `h`, evaluated
/// exactly as the transformation formula is printed (no simplification):
///
/// ```text
/// R^i_jkl(g) = R^i_jkl(h) - ~phi^i_k h_jl + ~phi^i_l h_jk
///            - delta^i_k ~phi_jl + delta^i_l ~phi_jk
///            - phi_;r phi^;r (delta^i_k h_jl - delta^i_l h_jk)
/// ```
///
/// where `~phi_ab = phi_;ab - phi_;a phi_;b`, indices raised with `h`.
pub fn conformal_riemann(
    h_curvature: &CurvatureTensor,
    h_metric: &DMatrix<f64>,
    data: &ConformalData,
) -> Result<CurvatureTensor> {
    let n = h_curvature.dim();
    if h_metric.nrows() != n || data.grad.len() != n || data.hessian.nrows() != n {
        return Err(GeomError::DimensionMismatch {
            expected: n,
            got: h_metric.nrows().max(data.grad.len()),
        });
    }
    let h_inv = h_metric
        .clone()
        .try_inverse()
        .ok_or_else(|| GeomError::NotPositiveDefinite {
            point: h_curvature.point.clone(),
            min_eigenvalue: 0.0,
        })?;

    // ~phi_ab = phi_;ab - phi_;a phi_;b
    let mut phi_tilde = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            phi_tilde[(a, b)] = data.hessian[(a, b)] - data.grad[a] * data.grad[b];
        }
    }
    // ~phi^i_k = h^{im} ~phi_mk
    let phi_tilde_up = &h_inv * &phi_tilde;
    // phi_;r phi^;r
    let grad_sq = (data.grad.transpose() * &h_inv * &data.grad)[(0, 0)];

    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut up = Tensor4::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let r = h_curvature.up.get(i, j, k, l)
                        - phi_tilde_up[(i, k)] * h_metric[(j, l)]
                        + phi_tilde_up[(i, l)] * h_metric[(j, k)]
                        - delta(i, k) * phi_tilde[(j, l)]
                        + delta(i, l) * phi_tilde[(j, k)]
                        - grad_sq
                            * (delta(i, k) * h_metric[(j, l)] - delta(i, l) * h_metric[(j, k)]);
                    up.set(i, j, k, l, r);
                }
            }
        }
    }
    let g = h_metric * (2.0 * data.phi).exp();
    Ok(CurvatureTensor::from_up(
        h_curvature.point.clone(),
        up,
        &g,
    ))
}

// ---------------------------------------------------------------------------
// Warped-product oracles
// ---------------------------------------------------------------------------

/// A radial scalar function with closed-form first and second derivatives.
#[derive(Clone)]
pub struct RadialFn {
    pub f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub df: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub d2f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl RadialFn {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        df: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            f: Arc::new(f),
            df: Arc::new(df),
            d2f: Arc::new(d2f),
        }
    }

    /// `t^c`
    pub fn power(c: f64) -> Self {
        Self::new(
            move |t| t.powf(c),
            move |t| c * t.powf(c - 1.0),
            move |t| c * (c - 1.0) * t.powf(c - 2.0),
        )
    }

    /// `e^{rate t}`
    pub fn exponential(rate: f64) -> Self {
        Self::new(
            move |t| (rate * t).exp(),
            move |t| rate * (rate * t).exp(),
            move |t| rate * rate * (rate * t).exp(),
        )
    }

    pub fn constant(v: f64) -> Self {
        Self::new(move |_| v, |_| 0.0, |_| 0.0)
    }

    /// `t^p * ln(1 + t)` — the collapsing-family warp shape.
    pub fn power_log1p(p: f64) -> Self {
        Self::new(
            move |t| t.powf(p) * t.ln_1p(),
            move |t| p * t.powf(p - 1.0) * t.ln_1p() + t.powf(p) / (1.0 + t),
            move |t| {
                p * (p - 1.0) * t.powf(p - 2.0) * t.ln_1p()
                    + 2.0 * p * t.powf(p - 1.0) / (1.0 + t)
                    - t.powf(p) / ((1.0 + t) * (1.0 + t))
            },
        )
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        (self.df)(t)
    }

    pub fn second(&self, t: f64) -> f64 {
        (self.d2f)(t)
    }
}

/// Warped product `dt^2 + f(t)^2 h`, with `h` of constant curvature `K_h`.
#[derive(Clone)]
pub struct WarpedProfile {
    pub warp: RadialFn,
    pub base_dim: usize,
    pub base_curvature: f64,
    /// For doubly warped torus ends: a second fiber warp `b(t)`, making the
    /// metric `dt^2 + warp(t)^2 dx^2 + b(t)^2 dy^2`.
    pub second_warp: Option<RadialFn>,
}

impl WarpedProfile {
    pub fn new(warp: RadialFn, base_dim: usize, base_curvature: f64) -> Self {
        Self {
            warp,
            base_dim,
            base_curvature,
            second_warp: None,
        }
    }
}

/// Closed-form sectional curvatures of a warped product at radius `t`:
/// `K_radial = -f''/f` and, when the base has dimension >= 2,
/// `K_tangential = (K_h - f'^2) / f^2`.
pub fn warped_sectional(profile: &WarpedProfile, t: f64) -> Result<(f64, Option<f64>)> {
    let f = profile.warp.eval(t);
    if f <= 0.0 {
        return Err(GeomError::NonpositiveWarp { t, value: f });
    }
    let k_radial = -profile.warp.second(t) / f;
    let k_tangential = if profile.base_dim >= 2 {
        let df = profile.warp.deriv(t);
        Some((profile.base_curvature - df * df) / (f * f))
    } else {
        None
    };
    Ok((k_radial, k_tangential))
}

/// Closed-form sectional curvatures of `dt^2 + a(t)^2 dx^2 + b(t)^2 dy^2`:
/// `K_ta = -a''/a`, `K_tb = -b''/b`, `K_ab = -a'b'/(ab)`.
pub fn doubly_warped_sectional(a: &RadialFn, b: &RadialFn, t: f64) -> Result<(f64, f64, f64)> {
    let av = a.eval(t);
    let bv = b.eval(t);
    if av <= 0.0 {
        return Err(GeomError::NonpositiveWarp { t, value: av });
    }
    if bv <= 0.0 {
        return Err(GeomError::NonpositiveWarp { t, value: bv });
    }
    Ok((
        -a.second(t) / av,
        -b.second(t) / bv,
        -a.deriv(t) * b.deriv(t) / (av * bv),
    ))
}

// ---------------------------------------------------------------------------
// Product charts with closed-form derivatives (generic-pipeline cross-checks)
// ---------------------------------------------------------------------------

/// 2D chart `dt^2 + f(t)^2 dtheta^2` with closed-form metric derivatives.
pub fn surface_of_revolution_chart(
    name: &str,
    warp: &RadialFn,
    t_range: (f64, f64),
    basepoint_t: f64,
) -> Result<ChartedMetric> {
    let f = warp.clone();
    let fd = warp.clone();
    let fdd = warp.clone();
    let domain = ChartDomain::new(vec![t_range, (-100.0, 100.0)]);
    let metric = ChartedMetric::new(
        name,
        domain,
        vec![basepoint_t, 0.0],
        Arc::new(move |p: &[f64]| {
            let fv = f.eval(p[0]);
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, fv * fv]))
        }),
    )?;
    let f1 = fd.clone();
    let first = Arc::new(move |p: &[f64], k: usize| {
        let mut m = DMatrix::zeros(2, 2);
        if k == 0 {
            m[(1, 1)] = 2.0 * f1.eval(p[0]) * f1.deriv(p[0]);
        }
        m
    });
    let second = Arc::new(move |p: &[f64], k: usize, l: usize| {
        let mut m = DMatrix::zeros(2, 2);
        if k == 0 && l == 0 {
            let fv = fdd.eval(p[0]);
            let dfv = fdd.deriv(p[0]);
            m[(1, 1)] = 2.0 * (dfv * dfv + fv * fdd.second(p[0]));
        }
        m
    });
    Ok(metric.with_derivatives(Derivatives::ClosedForm { first, second }))
}

/// 3D chart `dt^2 + f(t)^2 lambda(u,v)^2 (du^2 + dv^2)` where
/// `lambda = (1 + K_h (u^2+v^2)/4)^{-1}` is the standard constant-curvature
/// conformal factor. Valid near the base origin; used to cross-check
/// `K_tangential` of the warped oracle.
pub fn warped_chart_3d(
    name: &str,
    warp: &RadialFn,
    base_curvature: f64,
    t_range: (f64, f64),
    basepoint_t: f64,
) -> Result<ChartedMetric> {
    let base_extent = if base_curvature < 0.0 {
        // stay inside the disk of validity
        0.8 / (-base_curvature).sqrt()
    } else {
        1.0
    };
    let kh = base_curvature;
    // lambda^2 and its partials in (u, v)
    let lam2 = move |u: f64, v: f64| {
        let q = 1.0 + kh * (u * u + v * v) / 4.0;
        1.0 / (q * q)
    };
    let dlam2 = move |u: f64, v: f64, a: usize| {
        let q = 1.0 + kh * (u * u + v * v) / 4.0;
        let xa = if a == 0 { u } else { v };
        -kh * xa / (q * q * q)
    };
    let d2lam2 = move |u: f64, v: f64, a: usize, b: usize| {
        let q = 1.0 + kh * (u * u + v * v) / 4.0;
        let xa = if a == 0 { u } else { v };
        let xb = if b == 0 { u } else { v };
        let qa = kh * xa / 2.0;
        let qb = kh * xb / 2.0;
        let qab = if a == b { kh / 2.0 } else { 0.0 };
        6.0 * qa * qb / q.powi(4) - 2.0 * qab / q.powi(3)
    };

    let f0 = warp.clone();
    let domain = ChartDomain::new(vec![
        t_range,
        (-base_extent, base_extent),
        (-base_extent, base_extent),
    ]);
    let metric = ChartedMetric::new(
        name,
        domain,
        vec![basepoint_t, 0.0, 0.0],
        Arc::new(move |p: &[f64]| {
            let ff = f0.eval(p[0]).powi(2) * lam2(p[1], p[2]);
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, ff, ff]))
        }),
    )?;

    let f1 = warp.clone();
    let first = Arc::new(move |p: &[f64], k: usize| {
        let mut m = DMatrix::zeros(3, 3);
        let fv = f1.eval(p[0]);
        let entry = match k {
            0 => 2.0 * fv * f1.deriv(p[0]) * lam2(p[1], p[2]),
            _ => fv * fv * dlam2(p[1], p[2], k - 1),
        };
        m[(1, 1)] = entry;
        m[(2, 2)] = entry;
        m
    });
    let f2 = warp.clone();
    let second = Arc::new(move |p: &[f64], k: usize, l: usize| {
        let mut m = DMatrix::zeros(3, 3);
        let fv = f2.eval(p[0]);
        let dfv = f2.deriv(p[0]);
        let entry = match (k, l) {
            (0, 0) => 2.0 * (dfv * dfv + fv * f2.second(p[0])) * lam2(p[1], p[2]),
            (0, b) => 2.0 * fv * dfv * dlam2(p[1], p[2], b - 1),
            (a, 0) => 2.0 * fv * dfv * dlam2(p[1], p[2], a - 1),
            (a, b) => fv * fv * d2lam2(p[1], p[2], a - 1, b - 1),
        };
        m[(1, 1)] = entry;
        m[(2, 2)] = entry;
        m
    });
    Ok(metric.with_derivatives(Derivatives::ClosedForm { first, second }))
}

/// 3D chart `dt^2 + a(t)^2 dx^2 + b(t)^2 dy^2` with closed-form derivatives.
pub fn doubly_warped_chart(
    name: &str,
    a: &RadialFn,
    b: &RadialFn,
    t_range: (f64, f64),
    basepoint_t: f64,
) -> Result<ChartedMetric> {
    let (a0, b0) = (a.clone(), b.clone());
    let domain = ChartDomain::new(vec![t_range, (-100.0, 100.0), (-100.0, 100.0)]);
    let metric = ChartedMetric::new(
        name,
        domain,
        vec![basepoint_t, 0.0, 0.0],
        Arc::new(move |p: &[f64]| {
            DMatrix::from_diagonal(&DVector::from_vec(vec![
                1.0,
                a0.eval(p[0]).powi(2),
                b0.eval(p[0]).powi(2),
            ]))
        }),
    )?;
    let (a1, b1) = (a.clone(), b.clone());
    let first = Arc::new(move |p: &[f64], k: usize| {
        let mut m = DMatrix::zeros(3, 3);
        if k == 0 {
            m[(1, 1)] = 2.0 * a1.eval(p[0]) * a1.deriv(p[0]);
            m[(2, 2)] = 2.0 * b1.eval(p[0]) * b1.deriv(p[0]);
        }
        m
    });
    let (a2, b2) = (a.clone(), b.clone());
    let second = Arc::new(move |p: &[f64], k: usize, l: usize| {
        let mut m = DMatrix::zeros(3, 3);
        if k == 0 && l == 0 {
            m[(1, 1)] = 2.0 * (a2.deriv(p[0]).powi(2) + a2.eval(p[0]) * a2.second(p[0]));
            m[(2, 2)] = 2.0 * (b2.deriv(p[0]).powi(2) + b2.eval(p[0]) * b2.second(p[0]));
        }
        m
    });
    Ok(metric.with_derivatives(Derivatives::ClosedForm { first, second }))
}

/// Conformally flat chart `g = e^{2 phi} delta` from a scalar field with
/// closed-form partials. `phi_parts = (phi, grad phi, hess phi)`.
pub type ScalarValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type ScalarGradFn = Arc<dyn Fn(&[f64]) -> DVector<f64> + Send + Sync>;
pub type ScalarHessFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

#[derive(Clone)]
pub struct ScalarField {
    pub value: ScalarValueFn,
    pub grad: ScalarGradFn,
    pub hess: ScalarHessFn,
}

pub fn conformally_flat_chart(
    name: &str,
    n: usize,
    extent: f64,
    phi: &ScalarField,
    basepoint: Vec<f64>,
) -> Result<ChartedMetric> {
    let domain = ChartDomain::new(vec![(-extent, extent); n]);
    let p0 = phi.clone();
    let metric = ChartedMetric::new(
        name,
        domain,
        basepoint,
        Arc::new(move |p: &[f64]| DMatrix::identity(n, n) * (2.0 * (p0.value)(p)).exp()),
    )?;
    let p1 = phi.clone();
    let first = Arc::new(move |p: &[f64], k: usize| {
        let e = (2.0 * (p1.value)(p)).exp();
        DMatrix::identity(n, n) * (2.0 * (p1.grad)(p)[k] * e)
    });
    let p2 = phi.clone();
    let second = Arc::new(move |p: &[f64], k: usize, l: usize| {
        let e = (2.0 * (p2.value)(p)).exp();
        let grad = (p2.grad)(p);
        let hess = (p2.hess)(p);
        DMatrix::identity(n, n) * ((2.0 * hess[(k, l)] + 4.0 * grad[k] * grad[l]) * e)
    });
    Ok(metric.with_derivatives(Derivatives::ClosedForm { first, second }))
}
