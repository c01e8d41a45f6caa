//! The five subcommands. Each returns its exit code; all files are written
//! at the end of the run.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use qham_core::axioms::{check_axiom_exterior, check_axiom_kernel, check_axiom_three};
use qham_core::involution::{check_property_p, validate_hypotheses, HypothesisReport};
use qham_core::polytope::{
    compare_real_convexity, contains_identity, convex_hull, convexity_score, derived_rng, sample_momentum_image,
    ComparisonConfig, ConvexityScore, Source,
};
use qham_core::qspace::sample_point;
use qham_core::{Hull, QhamError, SpaceKind};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};
use crate::report::{write_json, write_samples_csv, Report, Timings, SCHEMA_VERSION};
use crate::svg::{embed_all, render, Layer};

fn finish<R: Serialize, S: Serialize>(
    cfg: &RunConfig,
    results: R,
    residuals: S,
    counters: BTreeMap<&'static str, u64>,
    started: Instant,
    pass: bool,
) -> Result<i32, CliError> {
    let report = Report {
        schema: SCHEMA_VERSION,
        config_echo: cfg,
        results,
        residuals,
        timings: Timings::new(counters, cfg.wall_clock.then(|| started.elapsed().as_secs_f64())),
    };
    let path = cfg.out.join(format!("{}.json", cfg.command.replace('-', "_")));
    write_json(&path, &report)?;
    println!("{} {}", if pass { "PASS" } else { "FAIL" }, path.display());
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct AxiomPoint {
    index: usize,
    residual_iii: f64,
    kernel_measured: usize,
    kernel_predicted: usize,
    residual_i: Option<f64>,
}

#[derive(Serialize)]
struct AxiomResults {
    axiom_i_supported: bool,
    points: Vec<AxiomPoint>,
}

#[derive(Serialize)]
struct AxiomResiduals {
    axiom_iii_max: f64,
    axiom_i_max: Option<f64>,
    kernel_mismatches: usize,
}

pub fn verify_axioms(cfg: &RunConfig) -> Result<i32, CliError> {
    let started = Instant::now();
    let spec = cfg.spec()?;
    let tol = &cfg.tolerances;
    let mut points = Vec::with_capacity(cfg.samples);
    let mut supported = true;
    for index in 0..cfg.samples {
        let x = sample_point(&spec, &mut derived_rng(cfg.seed, index as u64));
        let kernel = check_axiom_kernel(&spec, &x, tol.null_space);
        let residual_i = if supported {
            match check_axiom_exterior(&spec, &x, tol.exterior_step) {
                Ok(r) => Some(r),
                Err(QhamError::Unsupported(_)) => {
                    supported = false;
                    None
                }
                Err(e) => return Err(e.into()),
            }
        } else {
            None
        };
        points.push(AxiomPoint {
            index,
            residual_iii: check_axiom_three(&spec, &x),
            kernel_measured: kernel.measured,
            kernel_predicted: kernel.predicted,
            residual_i,
        });
    }
    let residuals = AxiomResiduals {
        axiom_iii_max: points.iter().map(|p| p.residual_iii).fold(0.0, f64::max),
        axiom_i_max: supported.then(|| points.iter().filter_map(|p| p.residual_i).fold(0.0, f64::max)),
        kernel_mismatches: points.iter().filter(|p| p.kernel_measured != p.kernel_predicted).count(),
    };
    let pass = residuals.axiom_iii_max < tol.axiom_contraction
        && residuals.kernel_mismatches == 0
        && residuals.axiom_i_max.is_none_or(|r| r < tol.axiom_exterior);
    let counters = BTreeMap::from([("points_evaluated", points.len() as u64)]);
    let results = AxiomResults {
        axiom_i_supported: supported,
        points,
    };
    finish(cfg, results, residuals, counters, started, pass)
}

#[derive(Serialize)]
struct InvolutionResults {
    property_p: bool,
    hypotheses: HypothesisReport,
}

#[derive(Serialize)]
struct InvolutionResiduals {
    involutivity: f64,
    equivariance: f64,
    momentum_compat: f64,
    form_reversal: f64,
}

pub fn verify_involution(cfg: &RunConfig) -> Result<i32, CliError> {
    let started = Instant::now();
    let spec = cfg.spec()?;
    if spec.kind() == SpaceKind::Double {
        return Err(CliError::Config("the involution is not defined on the double".into()));
    }
    let mut rng = derived_rng(cfg.seed, 0);
    let hypotheses = validate_hypotheses(&spec, cfg.samples, &mut rng, &cfg.tolerances, &cfg.solver)?;
    let property_p = check_property_p(spec.rank(), 100, &mut derived_rng(cfg.seed, 1));
    let pass = property_p && hypotheses.passes(&cfg.tolerances);
    let residuals = InvolutionResiduals {
        involutivity: hypotheses.residual_involutivity,
        equivariance: hypotheses.residual_equivariance,
        momentum_compat: hypotheses.residual_momentum_compat,
        form_reversal: hypotheses.residual_form_reversal,
    };
    let counters = BTreeMap::from([
        ("points_evaluated", cfg.samples as u64),
        ("fixed_points_checked", hypotheses.q0_checked as u64),
    ]);
    let results = InvolutionResults { property_p, hypotheses };
    finish(cfg, results, residuals, counters, started, pass)
}

#[derive(Serialize)]
struct SampleResults {
    source: Source,
    count: usize,
    principal_face: String,
    csv: String,
}

#[derive(Serialize)]
struct SampleResiduals {
    solver_failure_rate: f64,
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn sample(cfg: &RunConfig, source: Source) -> Result<i32, CliError> {
    let started = Instant::now();
    let spec = cfg.spec()?;
    let count = match source {
        Source::FullSpace => cfg.samples,
        Source::FixedPointSet => cfg.fixed_samples,
    };
    let batch = sample_momentum_image(&spec, count, cfg.seed, source, &cfg.solver, &cfg.tolerances)?;
    let csv_path = cfg.out.join("samples.csv");
    write_samples_csv(
        &csv_path,
        spec.rank(),
        batch.points.iter().map(|p| (p.angles(), source.tag())),
    )?;
    let face = face_label(batch.principal_face(cfg.tolerances.wall));
    let rate = if batch.attempts == 0 {
        0.0
    } else {
        batch.failures as f64 / batch.attempts as f64
    };
    let counters = BTreeMap::from([
        ("samples", batch.count as u64),
        ("solver_attempts", batch.attempts as u64),
    ]);
    let results = SampleResults {
        source,
        count: batch.count,
        principal_face: face,
        csv: file_name(&csv_path),
    };
    finish(cfg, results, SampleResiduals { solver_failure_rate: rate }, counters, started, true)
}

fn face_label(face: qham_core::Result<qham_core::FaceId>) -> String {
    match face {
        Ok(f) => f.to_string(),
        Err(e) => format!("unresolved: {e}"),
    }
}

#[derive(Serialize)]
struct PolytopeResults {
    hull: Hull,
    convexity: ConvexityScore,
    contains_identity: bool,
    principal_face: String,
    svg: Option<String>,
}

#[derive(Serialize)]
struct PolytopeResiduals {
    convexity_deficit: f64,
}

pub fn polytope(cfg: &RunConfig) -> Result<i32, CliError> {
    let started = Instant::now();
    let spec = cfg.spec()?;
    if spec.rank() > 4 {
        return Err(CliError::Config("hulls are supported up to SU(4)".into()));
    }
    let tol = &cfg.tolerances;
    let batch = sample_momentum_image(&spec, cfg.samples, cfg.seed, Source::FullSpace, &cfg.solver, tol)?;
    let hull = convex_hull(&batch, tol.hull)?;
    let convexity = convexity_score(&batch, cfg.grid_res, None, tol.hull)?;
    let embedded = embed_all(&batch.points);
    let svg = render(
        spec.rank(),
        "momentum image",
        &[Layer {
            label: "full space",
            color: "#1f77b4",
            hull: Some(&hull),
            points: &embedded,
        }],
    );
    let svg_name = match svg {
        Some(body) => {
            let path = cfg.out.join("polytope.svg");
            std::fs::write(&path, body)?;
            Some(file_name(&path))
        }
        None => None,
    };
    let pass = convexity.score >= tol.convexity;
    let counters = BTreeMap::from([("samples", batch.count as u64)]);
    let results = PolytopeResults {
        contains_identity: contains_identity(&hull, tol.hull),
        principal_face: face_label(batch.principal_face(tol.wall)),
        hull,
        convexity,
        svg: svg_name,
    };
    let residuals = PolytopeResiduals {
        convexity_deficit: 1.0 - convexity.score,
    };
    finish(cfg, results, residuals, counters, started, pass)
}

#[derive(Serialize)]
struct ConvexityResults {
    pass: bool,
    hull_full: Hull,
    hull_fixed: Hull,
    score_full: ConvexityScore,
    score_fixed: ConvexityScore,
    contains_identity: bool,
    csv: String,
    svg: Option<String>,
}

#[derive(Serialize)]
struct ConvexityResiduals {
    hausdorff: f64,
    convexity_deficit_full: f64,
    convexity_deficit_fixed: f64,
    solver_failure_rate: f64,
}

pub fn real_convexity(cfg: &RunConfig) -> Result<i32, CliError> {
    let started = Instant::now();
    let spec = cfg.spec()?;
    if spec.rank() > 4 {
        return Err(CliError::Config("real-convexity supports up to SU(4)".into()));
    }
    if spec.kind() == SpaceKind::Double {
        return Err(CliError::Config("the involution is not defined on the double".into()));
    }
    let comparison = ComparisonConfig {
        full_samples: cfg.samples,
        fixed_samples: cfg.fixed_samples,
        grid_res: cfg.grid_res,
        seed: cfg.seed,
    };
    let v = compare_real_convexity(&spec, &comparison, &cfg.tolerances, &cfg.solver)?;
    let csv_path = cfg.out.join("real_convexity.csv");
    write_samples_csv(
        &csv_path,
        spec.rank(),
        v.full
            .points
            .iter()
            .map(|p| (p.angles(), Source::FullSpace.tag()))
            .chain(v.fixed.points.iter().map(|p| (p.angles(), Source::FixedPointSet.tag()))),
    )?;
    let full = embed_all(&v.full.points);
    let fixed = embed_all(&v.fixed.points);
    let svg = render(
        spec.rank(),
        &format!("Hausdorff distance {:.4}", v.hausdorff),
        &[
            Layer {
                label: "full space",
                color: "#1f77b4",
                hull: Some(&v.hull_full),
                points: &full,
            },
            Layer {
                label: "fixed-point set",
                color: "#d62728",
                hull: Some(&v.hull_fixed),
                points: &fixed,
            },
        ],
    );
    let svg_name = match svg {
        Some(body) => {
            let path = cfg.out.join("real_convexity.svg");
            std::fs::write(&path, body)?;
            Some(file_name(&path))
        }
        None => None,
    };
    let residuals = ConvexityResiduals {
        hausdorff: v.hausdorff,
        convexity_deficit_full: 1.0 - v.score_full.score,
        convexity_deficit_fixed: 1.0 - v.score_fixed.score,
        solver_failure_rate: if v.solver_attempts == 0 {
            0.0
        } else {
            v.solver_failures as f64 / v.solver_attempts as f64
        },
    };
    let counters = BTreeMap::from([
        ("full_samples", v.full.count as u64),
        ("fixed_samples", v.fixed.count as u64),
        ("solver_attempts", v.solver_attempts as u64),
    ]);
    let pass = v.pass;
    let results = ConvexityResults {
        pass,
        contains_identity: contains_identity(&v.hull_full, cfg.tolerances.hull),
        hull_full: v.hull_full,
        hull_fixed: v.hull_fixed,
        score_full: v.score_full,
        score_fixed: v.score_fixed,
        csv: file_name(&csv_path),
        svg: svg_name,
    };
    finish(cfg, results, residuals, counters, started, pass)
}
