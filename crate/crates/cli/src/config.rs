//! Scenario configuration: a single JSON document fully describing a run.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub metric: MetricSpec,
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub sampling: Sampling,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MetricSpec {
    /// Flat R^n on a Cartesian chart.
    Flat { dim: usize, extent: f64 },
    /// Warped end `dt^2 + t^{2c} h` over a constant-curvature base.
    Example1 { c: f64, dim: usize, base_curvature: f64 },
    /// Capped plane `dt^2 + f^2 dtheta^2`, `f = t^c` outside the unit cap.
    Example2 { c: f64 },
    /// Scaling model of the doubling surface (growth curve only).
    Example3 { a0: f64, l: f64, jmax: u32 },
    /// Collapsing torus family parametrized by the factor f in [1/2, 1).
    Collapse { f: f64 },
    /// Log-space volume/distance table of the slab construction.
    Prop3Estimates { jmax: u32 },
    /// Conformal metric e^{2 phi} delta on flat R^2.
    Lemma31 { profile: Lemma31Profile },
    /// Hyperbolic control surface (sinh warp); trips divergence flags.
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma31Profile {
    SmoothedDistance,
    Constant(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Decay,
    LowerDecay,
    Growth,
    Comparison,
    GaussBonnet,
    Prop3Estimates,
    FamilyCondition,
}

impl CheckName {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::Decay => "decay",
            CheckName::LowerDecay => "lower-decay",
            CheckName::Growth => "growth",
            CheckName::Comparison => "comparison",
            CheckName::GaussBonnet => "gauss-bonnet",
            CheckName::Prop3Estimates => "prop3-estimates",
            CheckName::FamilyCondition => "family-condition",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "decay" => Some(CheckName::Decay),
            "lower-decay" => Some(CheckName::LowerDecay),
            "growth" => Some(CheckName::Growth),
            "comparison" => Some(CheckName::Comparison),
            "gauss-bonnet" => Some(CheckName::GaussBonnet),
            "prop3-estimates" => Some(CheckName::Prop3Estimates),
            "family-condition" => Some(CheckName::FamilyCondition),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sampling {
    /// Radial range `(lo, hi)` of the sample/quadrature grids.
    pub radii: (f64, f64),
    /// Number of log-spaced radii.
    pub radius_count: usize,
    pub points_per_radius: usize,
    pub planes_per_point: usize,
    /// Monte Carlo budget for ball volumes; quadrature when absent.
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            radii: (10.0, 1000.0),
            radius_count: 24,
            points_per_radius: 6,
            planes_per_point: 6,
            mc_samples: None,
            seed: None,
        }
    }
}

impl Sampling {
    pub fn radii_grid(&self) -> Vec<f64> {
        let (lo, hi) = self.radii;
        let n = self.radius_count.max(2);
        (0..n)
            .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Ratio fraction of the slow-growth test.
    pub slow_growth_fraction: f64,
    /// Allowed disagreement between the Gauss-Bonnet routes.
    pub gauss_bonnet_routes: f64,
    /// Closed form vs log-domain quadrature in the slab estimates.
    pub prop3_quadrature: f64,
    /// Lower decay constant C fed to the volume comparison.
    pub comparison_c: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slow_growth_fraction: 0.1,
            gauss_bonnet_routes: 1e-4,
            prop3_quadrature: 1e-9,
            comparison_c: 0.0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), String> {
        let (lo, hi) = self.sampling.radii;
        if !(lo > 0.0 && hi > lo) {
            return Err(format!("radii range must be positive and increasing, got ({lo}, {hi})"));
        }
        if self.checks.is_empty() {
            return Err("at least one check must be requested".into());
        }
        if self.sampling.mc_samples.is_some() && self.sampling.seed.is_none() {
            return Err("seed is required when Monte Carlo sampling is requested".into());
        }
        Ok(())
    }
}

/// Gallery names addressable in a scenario config, with parameter lists.
pub fn catalog() -> Vec<&'static str> {
    vec![
        "flat(dim, extent)",
        "example1(c, dim, base_curvature)",
        "example2(c)",
        "example3(a0, l, jmax)",
        "collapse(f)",
        "prop3-estimates(jmax)",
        "lemma31(profile)",
        "hyperbolic",
    ]
}
