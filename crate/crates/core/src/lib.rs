//! Numerical differential geometry on explicit chart-based metrics.
//!
//! The crate is organized around [`geom::ChartedMetric`], a metric tensor
//! field on a single coordinate chart. Everything else consumes it:
//!
//! * [`curvature`] — Christoffel symbols, the Riemann tensor, sectional and
//!   Ricci curvature, plus independent closed-form oracles (warped products,
//!   doubly warped products, conformal changes) for cross-validation.
//! * [`comparison`] — Riccati/mean-curvature comparison along radial
//!   geodesics, volume comparison constants, the excess function, the
//!   Toponogov cosh threshold and the packing diameter bound.
//! * [`growth`] — geodesics, distance estimates, ball volumes, curvature
//!   decay fitting, slow-volume-growth diagnostics and Gauss-Bonnet totals
//!   for rotationally symmetric surfaces.
//! * [`gallery`] — the explicit metric constructions under study: warped
//!   ends, capped planes, collapsing torus families, cusp blocks, Morse
//!   potentials and their log-space volume/distance estimates.
//! * [`logspace`] — signed log-magnitude arithmetic for quantities of size
//!   `exp(240 j^2)` that overflow `f64`.

pub mod comparison;
pub mod curvature;
pub mod error;
pub mod gallery;
pub mod geom;
pub mod growth;
pub mod logspace;

pub use error::{GeomError, Result};
pub use geom::{ChartDomain, ChartedMetric, TwoPlane};
pub use logspace::LogQuantity;
