//! Executes the checks requested by a scenario and assembles the report.

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use qdecay_core::comparison::{comparison_params, volume_comparison_check};
use qdecay_core::curvature::{surface_of_revolution_chart, RadialFn};
use qdecay_core::gallery::{
    self, collapse_family, conformal_quadratic_construction, example1_end, example2_plane,
    example3_growth_model, prop3_log_estimates, ConformalFactor,
};
use qdecay_core::geom::{flat_metric, ChartedMetric, RadialStructure};
use qdecay_core::growth::{
    decay_constant, gauss_bonnet_disk, growth_curve, lower_decay_check, slow_growth_check,
    DecaySampling, GrowthCurve, RadialSampler, VolumeMethod,
};

use crate::config::{CheckName, Lemma31Profile, MetricSpec, ScenarioConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration: unknown names, invalid parameters, unreadable
    /// files. Exit code 2.
    Config(String),
    /// Valid config requesting something the metric cannot do. Exit code 2.
    Capability(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Capability(m) => write!(f, "capability error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Serialize)]
pub struct Report {
    pub scenario: ScenarioConfig,
    pub checks: Vec<CheckResult>,
    pub provenance: Provenance,
    pub all_passed: bool,
}

#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Numeric evidence behind the flag; never a bare boolean.
    pub evidence: serde_json::Value,
    /// `(file name, contents)` CSV artifacts; byte-stable per seed.
    #[serde(skip)]
    pub csv: Vec<(String, String)>,
}

#[derive(Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub radii: Vec<f64>,
    pub wall_time_ms: u128,
}

/// The pieces of a scenario metric the checks draw on.
struct Built {
    metric: Option<ChartedMetric>,
    /// Warp of a rotationally symmetric surface, when there is one.
    warp: Option<RadialFn>,
    /// Pre-built growth curve for model scenarios.
    model_curve: Option<GrowthCurve>,
    /// Diagonal family entries for the sufficient-condition check.
    condition_entries: Option<Vec<RadialFn>>,
    /// Euclidean (Cartesian chart) vs radial-coordinate sampling.
    euclidean_sampler: bool,
    dim: usize,
}

fn build_metric(spec: &MetricSpec) -> Result<Built, CliError> {
    let cfg_err = |e: qdecay_core::GeomError| CliError::Config(e.to_string());
    match spec {
        MetricSpec::Flat { dim, extent } => Ok(Built {
            metric: Some(flat_metric(*dim, *extent)),
            warp: None,
            model_curve: None,
            condition_entries: None,
            euclidean_sampler: true,
            dim: *dim,
        }),
        MetricSpec::Example1 {
            c,
            dim,
            base_curvature,
        } => {
            let e = example1_end(*c, *dim, *base_curvature).map_err(cfg_err)?;
            Ok(Built {
                metric: Some(e.metric),
                warp: (*dim == 2).then(|| e.warp.clone()),
                model_curve: None,
                condition_entries: None,
                euclidean_sampler: false,
                dim: *dim,
            })
        }
        MetricSpec::Example2 { c } => {
            let e = example2_plane(*c).map_err(cfg_err)?;
            Ok(Built {
                metric: Some(e.metric),
                warp: Some(e.warp),
                model_curve: None,
                condition_entries: None,
                euclidean_sampler: false,
                dim: 2,
            })
        }
        MetricSpec::Example3 { a0, l, jmax } => {
            let curve = example3_growth_model(*a0, *l, *jmax).map_err(cfg_err)?;
            Ok(Built {
                metric: None,
                warp: None,
                model_curve: Some(curve),
                condition_entries: None,
                euclidean_sampler: false,
                dim: 2,
            })
        }
        MetricSpec::Collapse { f } => {
            let fam = collapse_family(*f).map_err(cfg_err)?;
            let entries = fam.condition_entries();
            Ok(Built {
                metric: Some(fam.metric),
                warp: None,
                model_curve: None,
                condition_entries: Some(entries),
                euclidean_sampler: false,
                dim: 3,
            })
        }
        MetricSpec::Prop3Estimates { .. } | MetricSpec::Lemma31 { .. } => Ok(Built {
            metric: None,
            warp: None,
            model_curve: None,
            condition_entries: None,
            euclidean_sampler: false,
            dim: 2,
        }),
        MetricSpec::Hyperbolic => {
            let warp = RadialFn::new(|t: f64| t.sinh(), |t: f64| t.cosh(), |t: f64| t.sinh());
            let metric = surface_of_revolution_chart("hyperbolic", &warp, (0.5, 40.0), 1.0)
                .map_err(cfg_err)?
                .with_radial_structure(RadialStructure {
                    basepoint_t: 1.0,
                    t_lo: 0.5,
                    base_volume: 0.0,
                    sphere_area: Arc::new(|t: f64| 2.0 * std::f64::consts::PI * t.sinh()),
                });
            Ok(Built {
                metric: Some(metric),
                warp: Some(warp),
                model_curve: None,
                condition_entries: None,
                euclidean_sampler: false,
                dim: 2,
            })
        }
    }
}

fn sampler_for(built: &Built) -> Result<RadialSampler, qdecay_core::GeomError> {
    let metric = built.metric.as_ref().expect("sampler needs a metric");
    if built.euclidean_sampler {
        Ok(RadialSampler::euclidean(metric))
    } else {
        RadialSampler::coordinate_radial(metric)
    }
}

fn run_check(
    config: &ScenarioConfig,
    built: &Built,
    check: CheckName,
) -> Result<CheckResult, CliError> {
    let radii = config.sampling.radii_grid();
    let seed = config.sampling.seed.unwrap_or(0x5eed);
    let sampling = DecaySampling {
        points_per_radius: config.sampling.points_per_radius,
        planes_per_point: config.sampling.planes_per_point,
        seed,
    };
    let incompatible = |what: &str| {
        Err(CliError::Capability(format!(
            "check {} is not applicable to metric {what}",
            check.as_str()
        )))
    };
    // per-check numerical failures become failed results, not fatal errors
    let soft = |name: &str, e: qdecay_core::GeomError| CheckResult {
        name: name.to_string(),
        passed: false,
        evidence: json!({ "error": e.to_string() }),
        csv: vec![],
    };

    match check {
        CheckName::Decay => {
            if let MetricSpec::Lemma31 { profile } = &config.metric {
                let factor = match profile {
                    Lemma31Profile::SmoothedDistance => ConformalFactor::SmoothedDistance,
                    Lemma31Profile::Constant(k) => ConformalFactor::Constant(*k),
                };
                let r = match conformal_quadratic_construction(factor, &radii, false) {
                    Ok(r) => r,
                    Err(e) => return Ok(soft("decay", e)),
                };
                let passed = match profile {
                    Lemma31Profile::SmoothedDistance => {
                        r.conditions_ok && r.distance_bound_ok && r.c_fitted.is_finite()
                    }
                    Lemma31Profile::Constant(_) => r.c_fitted == 0.0,
                };
                return Ok(CheckResult {
                    name: "decay".into(),
                    passed,
                    evidence: serde_json::to_value(&r).unwrap(),
                    csv: vec![],
                });
            }
            let Some(metric) = built.metric.as_ref() else {
                return incompatible("without a chart");
            };
            let sampler = match sampler_for(built) {
                Ok(s) => s,
                Err(e) => return Ok(soft("decay", e)),
            };
            match decay_constant(metric, &radii, &sampling, &sampler) {
                Ok(report) => Ok(CheckResult {
                    name: "decay".into(),
                    passed: !report.divergence && report.c_upper.is_finite(),
                    evidence: json!({
                        "c_upper": report.c_upper,
                        "inf_kd2": report.inf_kd2,
                        "divergence": report.divergence,
                        "samples": report.samples,
                    }),
                    csv: vec![(format!("{}-decay.csv", config.name), report.csv())],
                }),
                Err(e) => Ok(soft("decay", e)),
            }
        }
        CheckName::LowerDecay => {
            let Some(metric) = built.metric.as_ref() else {
                return incompatible("without a chart");
            };
            let sampler = match sampler_for(built) {
                Ok(s) => s,
                Err(e) => return Ok(soft("lower-decay", e)),
            };
            match lower_decay_check(metric, &radii, &sampling, &sampler) {
                Ok(report) => Ok(CheckResult {
                    name: "lower-decay".into(),
                    passed: !report.divergence && report.c_lower.is_finite(),
                    evidence: serde_json::to_value(&report).unwrap(),
                    csv: vec![],
                }),
                Err(e) => Ok(soft("lower-decay", e)),
            }
        }
        CheckName::Growth => {
            let curve = if let Some(curve) = built.model_curve.as_ref() {
                curve.clone()
            } else {
                let Some(metric) = built.metric.as_ref() else {
                    return incompatible("without a chart");
                };
                let method = match config.sampling.mc_samples {
                    Some(samples) => {
                        let radial = metric.radial_structure().cloned();
                        let Some(radial) = radial else {
                            return incompatible("without a radial structure (Monte Carlo distance oracle)");
                        };
                        VolumeMethod::MonteCarlo {
                            samples,
                            seed,
                            distance: Arc::new(move |p: &[f64]| {
                                (p[0] - radial.basepoint_t).abs()
                            }),
                        }
                    }
                    None => VolumeMethod::RadialQuadrature,
                };
                match growth_curve(metric, &radii, &method) {
                    Ok(c) => c,
                    Err(e) => return Ok(soft("growth", e)),
                }
            };
            let monotone = curve.volumes.windows(2).all(|w| w[1] >= w[0] - 1e-12);
            let slow = slow_growth_check(&curve, config.tolerances.slow_growth_fraction);
            let evidence = match &slow {
                Ok(s) => json!({
                    "monotone": monotone,
                    "slow": s.slow,
                    "liminf_estimate": s.liminf_estimate,
                    "witness_slope": s.witness_slope,
                }),
                Err(e) => json!({ "monotone": monotone, "slow_check": e.to_string() }),
            };
            Ok(CheckResult {
                name: "growth".into(),
                passed: monotone,
                evidence,
                csv: vec![(format!("{}-growth.csv", config.name), curve.csv())],
            })
        }
        CheckName::Comparison => {
            let Some(metric) = built.metric.as_ref() else {
                return incompatible("without a chart");
            };
            if metric.radial_structure().is_none() {
                return incompatible("without a radial structure");
            }
            let params = match comparison_params(config.tolerances.comparison_c, built.dim) {
                Ok(p) => p,
                Err(e) => return Ok(soft("comparison", e)),
            };
            let curve = match growth_curve(metric, &radii, &VolumeMethod::RadialQuadrature) {
                Ok(c) => c,
                Err(e) => return Ok(soft("comparison", e)),
            };
            match volume_comparison_check(&curve, &params) {
                Ok(report) => Ok(CheckResult {
                    name: "comparison".into(),
                    passed: report.comparison1_ok && report.comparison2_ok,
                    evidence: serde_json::to_value(&report).unwrap(),
                    csv: vec![],
                }),
                Err(e) => Ok(soft("comparison", e)),
            }
        }
        CheckName::GaussBonnet => {
            let Some(warp) = built.warp.as_ref() else {
                return incompatible("without a rotationally symmetric surface profile");
            };
            match gauss_bonnet_disk(warp, config.sampling.radii.1) {
                Ok(report) => Ok(CheckResult {
                    name: "gauss-bonnet".into(),
                    passed: report.difference.abs() <= config.tolerances.gauss_bonnet_routes,
                    evidence: serde_json::to_value(&report).unwrap(),
                    csv: vec![],
                }),
                Err(e) => Ok(soft("gauss-bonnet", e)),
            }
        }
        CheckName::Prop3Estimates => {
            let MetricSpec::Prop3Estimates { jmax } = &config.metric else {
                return incompatible("other than prop3-estimates");
            };
            let mut rows = Vec::new();
            for j in 1..=*jmax {
                match prop3_log_estimates(j) {
                    Ok(r) => rows.push(r),
                    Err(e) => return Ok(soft("prop3-estimates", e)),
                }
            }
            let tol = config.tolerances.prop3_quadrature;
            let defects_ok = rows
                .iter()
                .all(|r| r.quadrature_defect_vol < tol && r.quadrature_defect_t < tol);
            // log ratio + 2(2j+2) should be constant across j
            let shifted: Vec<f64> = rows
                .iter()
                .map(|r| r.log_ratio + 2.0 * (2.0 * r.j as f64 + 2.0))
                .collect();
            let shift_spread = shifted
                .iter()
                .fold(0.0f64, |m, &s| m.max((s - shifted[0]).abs()));
            let mut csv = String::from("j,log_vol_Fj,log_t_lower,log_ratio\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{:.12e},{:.12e},{:.12e}\n",
                    r.j, r.log_vol_fj, r.log_t_lower, r.log_ratio
                ));
            }
            Ok(CheckResult {
                name: "prop3-estimates".into(),
                passed: defects_ok && shift_spread < 1e-6,
                evidence: json!({
                    "rows": rows,
                    "shift_spread": shift_spread,
                }),
                csv: vec![(format!("{}-prop3.csv", config.name), csv)],
            })
        }
        CheckName::FamilyCondition => {
            let Some(entries) = built.condition_entries.as_ref() else {
                return incompatible("without a cross-section family");
            };
            let report = gallery::family_condition_check(entries, config.sampling.radii);
            Ok(CheckResult {
                name: "family-condition".into(),
                passed: report.passes,
                evidence: serde_json::to_value(&report).unwrap(),
                csv: vec![],
            })
        }
    }
}

/// Order the checks so prerequisites come first (distance feeds volume
/// feeds growth diagnostics).
fn check_order(c: &CheckName) -> u8 {
    match c {
        CheckName::Decay => 0,
        CheckName::LowerDecay => 1,
        CheckName::Comparison => 2,
        CheckName::Growth => 3,
        CheckName::GaussBonnet => 4,
        CheckName::FamilyCondition => 5,
        CheckName::Prop3Estimates => 6,
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<Report, CliError> {
    config.validate().map_err(CliError::Config)?;
    let start = Instant::now();
    let built = build_metric(&config.metric)?;
    let mut checks = config.checks.clone();
    checks.sort_by_key(check_order);
    checks.dedup();
    let mut results = Vec::new();
    for check in checks {
        results.push(run_check(config, &built, check)?);
    }
    let all_passed = results.iter().all(|r| r.passed);
    Ok(Report {
        scenario: config.clone(),
        checks: results,
        provenance: Provenance {
            seed: config.sampling.seed.unwrap_or(0x5eed),
            radii: config.sampling.radii_grid(),
            wall_time_ms: start.elapsed().as_millis(),
        },
        all_passed,
    })
}

/// Writes the JSON report plus one file per CSV artifact; returns the paths.
/// CSV output is byte-stable for identical config and seed.
pub fn emit_report(report: &Report, dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::Io)?;
    let mut written = Vec::new();
    let json_path = dir.join(format!("{}.json", report.scenario.name));
    let mut body = serde_json::to_string_pretty(report).expect("report serializes");
    body.push('\n');
    std::fs::write(&json_path, body).map_err(CliError::Io)?;
    written.push(json_path);
    for check in &report.checks {
        for (file, contents) in &check.csv {
            let path = dir.join(file);
            std::fs::write(&path, contents).map_err(CliError::Io)?;
            written.push(path);
        }
    }
    Ok(written)
}
