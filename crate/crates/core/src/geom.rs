//! Chart-based metric tensor fields and pointwise metric algebra.
//!
//! A [`ChartedMetric`] is a smooth symmetric positive-definite matrix field
//! `g_ij(p)` on a box-shaped coordinate chart, together with a basepoint.
//! Metrics are chart-local by design: every construction verified here lives
//! on a single end or closed-form profile, so no atlas machinery is needed.
//!
//! Derivatives of the components are taken either by central finite
//! differences (with a step proportional to the local coordinate scale) or
//! from caller-supplied closed-form derivative maps. Closed-form maps take
//! precedence when supplied, so oracle comparisons can separate formula
//! errors from discretization errors.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

/// Box of coordinate ranges defining where the chart is valid.
#[derive(Clone, Debug)]
pub struct ChartDomain {
    pub ranges: Vec<(f64, f64)>,
}

impl ChartDomain {
    pub fn new(ranges: Vec<(f64, f64)>) -> Self {
        assert!(ranges.iter().all(|(lo, hi)| lo < hi), "empty coordinate range");
        Self { ranges }
    }

    pub fn dim(&self) -> usize {
        self.ranges.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.ranges.len()
            && p.iter()
                .zip(&self.ranges)
                .all(|(x, (lo, hi))| *x >= *lo && *x <= *hi)
    }
}

/// Map from a chart point to the symmetric matrix of metric components.
pub type ComponentFn = Arc<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync>;

/// First derivative map: `(p, k) -> d g / d x^k` at `p`.
pub type FirstDerivFn = Arc<dyn Fn(&[f64], usize) -> DMatrix<f64> + Send + Sync>;

/// Second derivative map: `(p, k, l) -> d^2 g / (d x^k d x^l)` at `p`.
pub type SecondDerivFn = Arc<dyn Fn(&[f64], usize, usize) -> DMatrix<f64> + Send + Sync>;

/// How metric derivatives are obtained.
#[derive(Clone)]
pub enum Derivatives {
    /// Central differences with step `rel_step * max(|x_k|, 1)` per axis.
    FiniteDifference { rel_step: f64 },
    /// Exact derivative maps.
    ClosedForm {
        first: FirstDerivFn,
        second: SecondDerivFn,
    },
}

/// Default relative step for finite differencing. A fixed absolute step
/// fails at radius 1e4, so the step scales with the local coordinate.
pub const DEFAULT_REL_STEP: f64 = 1e-5;

/// Rotational-symmetry metadata: exact radial distances and the 1D volume
/// reduction `vol(B_r) = base_volume + integral of sphere_area`.
#[derive(Clone)]
pub struct RadialStructure {
    /// Radial coordinate of the basepoint (coordinate 0 is the radial axis).
    pub basepoint_t: f64,
    /// Lower end of the radial integration range.
    pub t_lo: f64,
    /// Volume already enclosed below `t_lo` (a cap, or 0 for a bare end).
    pub base_volume: f64,
    /// `t -> vol(S_t)`, the (n-1)-volume of the distance sphere.
    pub sphere_area: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

/// A metric tensor field on a single coordinate chart with a basepoint.
#[derive(Clone)]
pub struct ChartedMetric {
    name: String,
    dim: usize,
    domain: ChartDomain,
    components: ComponentFn,
    derivatives: Derivatives,
    basepoint: Vec<f64>,
    radial: Option<RadialStructure>,
}

impl fmt::Debug for ChartedMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartedMetric")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("basepoint", &self.basepoint)
            .finish()
    }
}

impl ChartedMetric {
    /// Builds a metric with finite-difference derivatives.
    ///
    /// Validates that the basepoint lies in the domain and that the metric
    /// is symmetric positive definite there. Positive definiteness elsewhere
    /// is checked lazily at evaluated points, since domains are unbounded in
    /// practice.
    pub fn new(
        name: impl Into<String>,
        domain: ChartDomain,
        basepoint: Vec<f64>,
        components: ComponentFn,
    ) -> Result<Self> {
        let dim = domain.dim();
        let m = ChartedMetric {
            name: name.into(),
            dim,
            domain,
            components,
            derivatives: Derivatives::FiniteDifference {
                rel_step: DEFAULT_REL_STEP,
            },
            basepoint,
            radial: None,
        };
        if !m.domain.contains(&m.basepoint) {
            return Err(GeomError::OutsideDomain {
                point: m.basepoint.clone(),
            });
        }
        m.eval(&m.basepoint.clone())?;
        Ok(m)
    }

    pub fn with_derivatives(mut self, derivatives: Derivatives) -> Self {
        self.derivatives = derivatives;
        self
    }

    pub fn with_rel_step(mut self, rel_step: f64) -> Self {
        self.derivatives = Derivatives::FiniteDifference { rel_step };
        self
    }

    pub fn with_radial_structure(mut self, radial: RadialStructure) -> Self {
        self.radial = Some(radial);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &ChartDomain {
        &self.domain
    }

    pub fn basepoint(&self) -> &[f64] {
        &self.basepoint
    }

    pub fn radial_structure(&self) -> Option<&RadialStructure> {
        self.radial.as_ref()
    }

    pub fn has_closed_form_derivatives(&self) -> bool {
        matches!(self.derivatives, Derivatives::ClosedForm { .. })
    }

    /// Evaluates `g_ij(p)` with symmetry and positive-definiteness checks.
    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>> {
        if !self.domain.contains(p) {
            return Err(GeomError::OutsideDomain { point: p.to_vec() });
        }
        let g = (self.components)(p);
        let asym = max_asymmetry(&g);
        if asym > 1e-10 * (1.0 + g.norm()) {
            return Err(GeomError::NotSymmetric {
                point: p.to_vec(),
                asymmetry: asym,
            });
        }
        let min_ev = min_eigenvalue_sym(&g);
        if min_ev <= 0.0 {
            return Err(GeomError::NotPositiveDefinite {
                point: p.to_vec(),
                min_eigenvalue: min_ev,
            });
        }
        Ok(g)
    }

    /// Raw component evaluation, no validity checks. Used inside
    /// differentiation stencils where the point is already trusted.
    pub fn eval_unchecked(&self, p: &[f64]) -> DMatrix<f64> {
        (self.components)(p)
    }

    /// `sqrt(det g(p))`, the Riemannian volume density.
    pub fn volume_density(&self, p: &[f64]) -> Result<f64> {
        let g = self.eval(p)?;
        let det = g.determinant();
        if det <= 0.0 {
            return Err(GeomError::NotPositiveDefinite {
                point: p.to_vec(),
                min_eigenvalue: det,
            });
        }
        Ok(det.sqrt())
    }

    /// Inner product `g_p(v, w)`.
    pub fn inner(&self, p: &[f64], v: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        let g = self.eval(p)?;
        Ok((v.transpose() * g * w)[(0, 0)])
    }

    fn step(&self, p: &[f64], k: usize, rel: f64) -> f64 {
        rel * p[k].abs().max(1.0)
    }

    fn check_stencil(&self, p: &[f64], radius: &[f64]) -> Result<()> {
        for (k, r) in radius.iter().enumerate() {
            let (lo, hi) = self.domain.ranges[k];
            if p[k] - r < lo || p[k] + r > hi {
                return Err(GeomError::StencilOutsideDomain { point: p.to_vec() });
            }
        }
        Ok(())
    }

    /// First partial derivative `d g / d x^k` at `p`.
    pub fn d_metric(&self, p: &[f64], k: usize) -> Result<DMatrix<f64>> {
        match &self.derivatives {
            Derivatives::ClosedForm { first, .. } => Ok(first(p, k)),
            Derivatives::FiniteDifference { rel_step } => {
                let h = self.step(p, k, *rel_step);
                let mut radius = vec![0.0; self.dim];
                radius[k] = h;
                self.check_stencil(p, &radius)?;
                let mut pp = p.to_vec();
                let mut pm = p.to_vec();
                pp[k] += h;
                pm[k] -= h;
                Ok((self.eval_unchecked(&pp) - self.eval_unchecked(&pm)) / (2.0 * h))
            }
        }
    }

    /// Second partial derivative `d^2 g / (d x^k d x^l)` at `p`.
    ///
    /// The finite-difference step for second derivatives is larger than the
    /// first-derivative step (`rel_step^0.8`), balancing truncation against
    /// roundoff in the double difference.
    pub fn d2_metric(&self, p: &[f64], k: usize, l: usize) -> Result<DMatrix<f64>> {
        match &self.derivatives {
            Derivatives::ClosedForm { second, .. } => Ok(second(p, k, l)),
            Derivatives::FiniteDifference { rel_step } => {
                let rel = rel_step.powf(0.8);
                let hk = self.step(p, k, rel);
                let hl = self.step(p, l, rel);
                let mut radius = vec![0.0; self.dim];
                radius[k] += hk;
                radius[l] += hl;
                self.check_stencil(p, &radius)?;
                if k == l {
                    let mut pp = p.to_vec();
                    let mut pm = p.to_vec();
                    pp[k] += hk;
                    pm[k] -= hk;
                    let g0 = self.eval_unchecked(p);
                    Ok((self.eval_unchecked(&pp) - 2.0 * g0 + self.eval_unchecked(&pm))
                        / (hk * hk))
                } else {
                    let mut ppp = p.to_vec();
                    let mut ppm = p.to_vec();
                    let mut pmp = p.to_vec();
                    let mut pmm = p.to_vec();
                    ppp[k] += hk;
                    ppp[l] += hl;
                    ppm[k] += hk;
                    ppm[l] -= hl;
                    pmp[k] -= hk;
                    pmp[l] += hl;
                    pmm[k] -= hk;
                    pmm[l] -= hl;
                    Ok((self.eval_unchecked(&ppp) - self.eval_unchecked(&ppm)
                        - self.eval_unchecked(&pmp)
                        + self.eval_unchecked(&pmm))
                        / (4.0 * hk * hl))
                }
            }
        }
    }

    /// Gram-Schmidt with respect to `g(p)`: returns an orthonormal spanning
    /// pair for the 2-plane spanned by `(v, w)`.
    pub fn orthonormal_plane(&self, p: &[f64], v: &[f64], w: &[f64]) -> Result<TwoPlane> {
        if v.len() != self.dim || w.len() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: v.len().max(w.len()),
            });
        }
        let g = self.eval(p)?;
        let v = DVector::from_column_slice(v);
        let w = DVector::from_column_slice(w);
        let ip = |a: &DVector<f64>, b: &DVector<f64>| (a.transpose() * &g * b)[(0, 0)];

        let nv = ip(&v, &v).sqrt();
        if nv == 0.0 {
            return Err(GeomError::DegeneratePlane { tol: 1e-12 });
        }
        let e1 = &v / nv;
        let proj = ip(&w, &e1);
        let w_perp = &w - &e1 * proj;
        let nw = ip(&w_perp, &w_perp).sqrt();
        // parallel within 1e-12 of g-angle
        if nw <= 1e-12 * ip(&w, &w).sqrt() {
            return Err(GeomError::DegeneratePlane { tol: 1e-12 });
        }
        let e2 = &w_perp / nw;
        Ok(TwoPlane {
            point: p.to_vec(),
            v: e1,
            w: e2,
        })
    }
}

/// A 2-plane in a tangent space, spanned by a g-orthonormal pair.
#[derive(Clone, Debug)]
pub struct TwoPlane {
    pub point: Vec<f64>,
    pub v: DVector<f64>,
    pub w: DVector<f64>,
}

impl TwoPlane {
    /// Max deviation from orthonormality with respect to `metric` at the
    /// plane's point.
    pub fn orthonormality_defect(&self, metric: &ChartedMetric) -> Result<f64> {
        let gvv = metric.inner(&self.point, &self.v, &self.v)?;
        let gww = metric.inner(&self.point, &self.w, &self.w)?;
        let gvw = metric.inner(&self.point, &self.v, &self.w)?;
        Ok((gvv - 1.0).abs().max((gww - 1.0).abs()).max(gvw.abs()))
    }
}

pub(crate) fn max_asymmetry(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((g[(i, j)] - g[(j, i)]).abs());
        }
    }
    worst
}

pub(crate) fn min_eigenvalue_sym(g: &DMatrix<f64>) -> f64 {
    let sym = (g + g.transpose()) * 0.5;
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Flat Euclidean metric on the box `[-extent, extent]^n`, basepoint at the
/// origin. Used throughout as a control case.
pub fn flat_metric(n: usize, extent: f64) -> ChartedMetric {
    let domain = ChartDomain::new(vec![(-extent, extent); n]);
    let metric = ChartedMetric::new(
        "flat",
        domain,
        vec![0.0; n],
        Arc::new(move |_p: &[f64]| DMatrix::identity(n, n)),
    )
    .expect("flat metric is valid");
    let zero1: FirstDerivFn = Arc::new(move |_p, _k| DMatrix::zeros(n, n));
    let zero2: SecondDerivFn = Arc::new(move |_p, _k, _l| DMatrix::zeros(n, n));
    metric
        .with_derivatives(Derivatives::ClosedForm {
            first: zero1,
            second: zero2,
        })
        .with_radial_structure(RadialStructure {
            basepoint_t: 0.0,
            t_lo: 0.0,
            base_volume: 0.0,
            sphere_area: Arc::new(move |t: f64| {
                // vol(S_t) = n * omega_n * t^(n-1)
                let omega_n = std::f64::consts::PI.powf(n as f64 / 2.0)
                    / gamma_half_integer(n as f64 / 2.0 + 1.0);
                n as f64 * omega_n * t.powi(n as i32 - 1)
            }),
        })
}

/// Gamma(x) for the half-integer arguments needed by unit-ball volumes.
pub(crate) fn gamma_half_integer(x: f64) -> f64 {
    // x is k/2 + 1 for integer k >= 1; recurse down to Gamma(1) or Gamma(1/2).
    if (x - 1.0).abs() < 1e-12 {
        1.0
    } else if (x - 0.5).abs() < 1e-12 {
        std::f64::consts::PI.sqrt()
    } else {
        (x - 1.0) * gamma_half_integer(x - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn polar_plane(extent: f64) -> ChartedMetric {
        // dt^2 + t^2 dtheta^2 on t in (0.1, extent)
        let domain = ChartDomain::new(vec![(0.1, extent), (-10.0, 10.0)]);
        ChartedMetric::new(
            "polar",
            domain,
            vec![1.0, 0.0],
            Arc::new(|p: &[f64]| DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, p[0] * p[0]]))),
        )
        .unwrap()
    }

    #[test]
    fn flat_metric_is_identity() {
        let m = flat_metric(2, 10.0);
        let g = m.eval(&[3.0, -2.0]).unwrap();
        assert_eq!(g, DMatrix::identity(2, 2));
        assert_relative_eq!(m.volume_density(&[1.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn polar_metric_values() {
        let m = polar_plane(10.0);
        let g = m.eval(&[2.0, 0.0]).unwrap();
        assert_relative_eq!(g[(1, 1)], 4.0);
        assert_relative_eq!(m.volume_density(&[3.0, 0.0]).unwrap(), 3.0);
    }

    #[test]
    fn constant_conformal_factor() {
        let phi = 1.0f64;
        let domain = ChartDomain::new(vec![(-5.0, 5.0); 2]);
        let m = ChartedMetric::new(
            "conformal-const",
            domain,
            vec![0.0, 0.0],
            Arc::new(move |_p: &[f64]| DMatrix::identity(2, 2) * (2.0 * phi).exp()),
        )
        .unwrap();
        let g = m.eval(&[1.0, 2.0]).unwrap();
        assert_relative_eq!(g[(0, 0)], std::f64::consts::E.powi(2), epsilon = 1e-12);
        // det = e^{4 phi}, density = e^{2 phi}; with phi = 0.5 density = e
        let m2 = ChartedMetric::new(
            "conformal-half",
            ChartDomain::new(vec![(-5.0, 5.0); 2]),
            vec![0.0, 0.0],
            Arc::new(|_p: &[f64]| DMatrix::identity(2, 2) * 1.0f64.exp()),
        )
        .unwrap();
        assert_relative_eq!(
            m2.volume_density(&[0.3, -0.4]).unwrap(),
            std::f64::consts::E,
            epsilon = 1e-12
        );
    }

    #[test]
    fn outside_domain_is_an_error() {
        let m = polar_plane(10.0);
        assert!(matches!(
            m.eval(&[11.0, 0.0]),
            Err(GeomError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn non_positive_definite_is_reported() {
        let domain = ChartDomain::new(vec![(-5.0, 5.0); 2]);
        let m = ChartedMetric::new(
            "degenerating",
            domain,
            vec![0.0, 0.0],
            Arc::new(|p: &[f64]| {
                DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0 - p[0]]))
            }),
        )
        .unwrap();
        assert!(matches!(
            m.eval(&[2.0, 0.0]),
            Err(GeomError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn gram_schmidt_flat() {
        let m = flat_metric(2, 10.0);
        let p = [0.0, 0.0];
        let plane = m.orthonormal_plane(&p, &[1.0, 0.0], &[0.0, 2.0]).unwrap();
        assert_relative_eq!(plane.v[0], 1.0);
        assert_relative_eq!(plane.w[1], 1.0);

        let plane = m.orthonormal_plane(&p, &[1.0, 0.0], &[1.0, 1.0]).unwrap();
        assert_relative_eq!(plane.w[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(plane.w[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gram_schmidt_rescales_by_metric() {
        let domain = ChartDomain::new(vec![(-5.0, 5.0); 2]);
        let m = ChartedMetric::new(
            "diag14",
            domain,
            vec![0.0, 0.0],
            Arc::new(|_p: &[f64]| {
                DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]))
            }),
        )
        .unwrap();
        let plane = m
            .orthonormal_plane(&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0])
            .unwrap();
        assert_relative_eq!(plane.w[1], 0.5);
    }

    #[test]
    fn parallel_vectors_are_degenerate() {
        let m = flat_metric(2, 10.0);
        assert!(matches!(
            m.orthonormal_plane(&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]),
            Err(GeomError::DegeneratePlane { .. })
        ));
    }

    #[test]
    fn orthonormal_plane_is_idempotent() {
        let m = polar_plane(10.0);
        let p = [2.0, 0.5];
        let plane = m.orthonormal_plane(&p, &[1.0, 0.3], &[0.2, 1.0]).unwrap();
        let again = m
            .orthonormal_plane(&p, plane.v.as_slice(), plane.w.as_slice())
            .unwrap();
        assert!((&again.v - &plane.v).norm() < 1e-12);
        assert!((&again.w - &plane.w).norm() < 1e-12);
        assert!(plane.orthonormality_defect(&m).unwrap() < 1e-10);
    }

    #[test]
    fn finite_difference_matches_closed_form_derivative() {
        let m = polar_plane(10.0);
        let d = m.d_metric(&[2.0, 0.0], 0).unwrap();
        assert_relative_eq!(d[(1, 1)], 4.0, epsilon = 1e-7);
        let d2 = m.d2_metric(&[2.0, 0.0], 0, 0).unwrap();
        assert_relative_eq!(d2[(1, 1)], 2.0, epsilon = 1e-5);
    }

    #[test]
    fn gamma_values() {
        // omega_2 = pi, omega_3 = 4 pi / 3
        assert_relative_eq!(gamma_half_integer(2.0), 1.0);
        assert_relative_eq!(
            gamma_half_integer(2.5),
            0.75 * std::f64::consts::PI.sqrt(),
            epsilon = 1e-12
        );
    }
}
