//! Monte-Carlo images `μ(M) ∩ exp(W̄)` and `μ(M^β) ∩ exp(W̄)` in alcove
//! coordinates, their convex hulls, convexity scores and the comparison of
//! the two images.
//!
//! Alcove points are embedded in orthonormal coordinates of the zero-sum
//! hyperplane before any geometry is done. Sampling is parallel; every sample
//! draws from its own ChaCha stream derived from `(seed, index)`, so batches
//! do not depend on the thread count.

mod hull;
mod neighbors;

pub use hull::{hausdorff, Facet, Hull};
pub use neighbors::BucketGrid;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{SolverConfig, Tolerances};
use crate::error::{QhamError, Result};
use crate::involution::{fixed_point_solve, fixed_point_torus_family, SolveOutcome};
use crate::qspace::{momentum, sample_point, SpaceSpec};
use crate::weyl::{principal_face, project_to_alcove, AlcovePoint, FaceId};

/// Share of a fixed-point batch taken from the torus family.
pub const TORUS_SHARE: f64 = 0.1;

/// Solver attempts per fixed-point sample before it is given up.
pub const MAX_ATTEMPTS: usize = 8;

/// Abort threshold on the solver failure rate.
pub const MAX_FAILURE_RATE: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    FullSpace,
    FixedPointSet,
}

impl Source {
    pub fn tag(&self) -> &'static str {
        match self {
            Source::FullSpace => "full_space",
            Source::FixedPointSet => "fixed_point_set",
        }
    }
}

/// Generator for sample `stream` of a run seeded with `seed`.
pub fn derived_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub spec: SpaceSpec,
    pub points: Vec<AlcovePoint>,
    pub count: usize,
    pub seed: u64,
    pub source: Source,
    /// Solver attempts and failures (zero for full-space batches).
    pub attempts: usize,
    pub failures: usize,
}

impl SampleBatch {
    /// Wraps precomputed points, e.g. synthetic controls.
    pub fn from_points(spec: SpaceSpec, points: Vec<AlcovePoint>, seed: u64, source: Source) -> Self {
        Self {
            spec,
            count: points.len(),
            points,
            seed,
            source,
            attempts: 0,
            failures: 0,
        }
    }

    pub fn embedded(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(AlcovePoint::embed).collect()
    }

    /// Face of the alcove meeting the batch in points of largest class
    /// dimension.
    pub fn principal_face(&self, tol: f64) -> Result<FaceId> {
        principal_face(&self.points, tol)
    }
}

const FIXED_STREAM_BASE: u64 = 1 << 48;

/// Samples `project_to_alcove(μ(x))` for `count` points. Fixed-point batches
/// take `round(count/10)` points cyclically from the torus family and the rest
/// from the solver, redrawing failed runs up to [`MAX_ATTEMPTS`] times.
pub fn sample_momentum_image(
    spec: &SpaceSpec,
    count: usize,
    seed: u64,
    source: Source,
    solver: &SolverConfig,
    tol: &Tolerances,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(QhamError::EmptyBatch);
    }
    match source {
        Source::FullSpace => {
            let points = (0..count)
                .into_par_iter()
                .map(|i| {
                    let x = sample_point(spec, &mut derived_rng(seed, i as u64));
                    project_to_alcove(&momentum(spec, &x))
                })
                .collect();
            Ok(SampleBatch {
                spec: spec.clone(),
                points,
                count,
                seed,
                source,
                attempts: 0,
                failures: 0,
            })
        }
        Source::FixedPointSet => {
            let family = fixed_point_torus_family(spec)?;
            let torus = ((count as f64 * TORUS_SHARE).round() as usize).min(count);
            let mut points: Vec<AlcovePoint> = (0..torus)
                .map(|i| project_to_alcove(&momentum(spec, &family[i % family.len()])))
                .collect();
            let solved: Vec<Result<(Option<AlcovePoint>, usize)>> = (torus..count)
                .into_par_iter()
                .map(|i| {
                    for attempt in 0..MAX_ATTEMPTS {
                        let stream = FIXED_STREAM_BASE + (i * MAX_ATTEMPTS + attempt) as u64;
                        let mut rng = derived_rng(seed, stream);
                        if let SolveOutcome::Fixed { point, .. } =
                            fixed_point_solve(spec, None, &mut rng, solver, tol.fixed_point)?
                        {
                            return Ok((Some(project_to_alcove(&momentum(spec, &point))), attempt + 1));
                        }
                    }
                    Ok((None, MAX_ATTEMPTS))
                })
                .collect();
            let mut attempts = 0;
            let mut successes = 0;
            for r in solved {
                let (p, used) = r?;
                attempts += used;
                if let Some(p) = p {
                    successes += 1;
                    points.push(p);
                }
            }
            let failures = attempts - successes;
            let rate = if attempts == 0 { 0.0 } else { failures as f64 / attempts as f64 };
            if rate > MAX_FAILURE_RATE || points.len() < count {
                return Err(QhamError::SolverAbort { rate, attempts });
            }
            Ok(SampleBatch {
                spec: spec.clone(),
                points,
                count,
                seed,
                source,
                attempts,
                failures,
            })
        }
    }
}

pub fn convex_hull(batch: &SampleBatch, tol: f64) -> Result<Hull> {
    Hull::from_points(&batch.embedded(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvexityScore {
    pub score: f64,
    /// The hull has no interior at margin `eps`; the score is then 1.
    pub degenerate: bool,
    pub eps: f64,
    pub interior_points: usize,
}

/// Mean distance from each point to its nearest other point.
pub fn mean_nearest_neighbor(points: &[Vec<f64>]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let grid = BucketGrid::auto(points);
    let d: Vec<f64> = (0..points.len()).into_par_iter().map(|i| grid.nearest_other(i)).collect();
    d.iter().sum::<f64>() / d.len() as f64
}

/// Fraction of the points of a `grid_res^dim` grid over the hull's bounding
/// box, taken at distance ≥ `eps` inside the hull, that have a sample within
/// `eps`. `eps` defaults to three mean nearest-neighbour spacings.
pub fn convexity_score(batch: &SampleBatch, grid_res: usize, eps: Option<f64>, tol: f64) -> Result<ConvexityScore> {
    let embedded = batch.embedded();
    score_points(&embedded, grid_res, eps, tol)
}

/// [`convexity_score`] on raw coordinates.
pub fn score_points(points: &[Vec<f64>], grid_res: usize, eps: Option<f64>, tol: f64) -> Result<ConvexityScore> {
    let hull = Hull::from_points(points, tol)?;
    let eps = eps.unwrap_or_else(|| 3.0 * mean_nearest_neighbor(points));
    let dim = hull.dim();
    let degenerate = ConvexityScore {
        score: 1.0,
        degenerate: true,
        eps,
        interior_points: 0,
    };
    if dim == 0 || grid_res == 0 {
        return Ok(degenerate);
    }
    let local: Vec<Vec<f64>> = points.iter().map(|p| hull.to_local(p)).collect();
    let lo: Vec<f64> = (0..dim).map(|k| local.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..dim).map(|k| local.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let total = grid_res.pow(dim as u32);
    let grid_point = |mut idx: usize| -> Vec<f64> {
        (0..dim)
            .map(|k| {
                let i = idx % grid_res;
                idx /= grid_res;
                lo[k] + (i as f64 + 0.5) * (hi[k] - lo[k]) / grid_res as f64
            })
            .collect()
    };
    let buckets = BucketGrid::new(&local, eps.max(f64::MIN_POSITIVE));
    let facets = hull.local_facets();
    let (interior, hits) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let g = grid_point(idx);
            if facets.iter().all(|f| f.slack(&g) >= eps) {
                (1usize, usize::from(buckets.any_within(&g, eps)))
            } else {
                (0, 0)
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if interior == 0 {
        return Ok(degenerate);
    }
    Ok(ConvexityScore {
        score: hits as f64 / interior as f64,
        degenerate: false,
        eps,
        interior_points: interior,
    })
}

/// Whether the alcove origin (the identity class) lies in the hull.
pub fn contains_identity(hull: &Hull, tol: f64) -> bool {
    hull.contains(&vec![0.0; hull.ambient_dim()], tol)
}

/// Range of the first eigen-angle over the hull vertices; on SU(2) this is
/// the hull as an interval of class angles.
pub fn angle_interval(hull: &Hull) -> (f64, f64) {
    hull.vertices()
        .iter()
        .map(|v| crate::weyl::unembed(v)[0])
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), a| (lo.min(a), hi.max(a)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub full_samples: usize,
    pub fixed_samples: usize,
    pub grid_res: usize,
    pub seed: u64,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        Self {
            full_samples: 100_000,
            fixed_samples: 1_000,
            grid_res: 50,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealConvexityVerdict {
    pub hausdorff: f64,
    pub hull_full: Hull,
    pub hull_fixed: Hull,
    pub score_full: ConvexityScore,
    pub score_fixed: ConvexityScore,
    pub solver_attempts: usize,
    pub solver_failures: usize,
    pub pass: bool,
    #[serde(skip)]
    pub full: SampleBatch,
    #[serde(skip)]
    pub fixed: SampleBatch,
}

/// Samples both images, hulls and scores them and compares the hulls.
/// Hulls of different intrinsic dimension still get a distance; the verdict
/// then fails.
pub fn compare_real_convexity(
    spec: &SpaceSpec,
    cfg: &ComparisonConfig,
    tol: &Tolerances,
    solver: &SolverConfig,
) -> Result<RealConvexityVerdict> {
    let full = sample_momentum_image(spec, cfg.full_samples, cfg.seed, Source::FullSpace, solver, tol)?;
    let fixed = sample_momentum_image(spec, cfg.fixed_samples, cfg.seed, Source::FixedPointSet, solver, tol)?;
    let hull_full = convex_hull(&full, tol.hull)?;
    let hull_fixed = convex_hull(&fixed, tol.hull)?;
    let distance = hull::hausdorff_any(&hull_full, &hull_fixed);
    let score_full = convexity_score(&full, cfg.grid_res, None, tol.hull)?;
    let score_fixed = convexity_score(&fixed, cfg.grid_res, None, tol.hull)?;
    let pass = hull_full.dim() == hull_fixed.dim()
        && distance < tol.hausdorff
        && score_full.score >= tol.convexity
        && score_fixed.score >= tol.convexity;
    Ok(RealConvexityVerdict {
        hausdorff: distance,
        hull_full,
        hull_fixed,
        score_full,
        score_fixed,
        solver_attempts: fixed.attempts,
        solver_failures: fixed.failures,
        pass,
        full,
        fixed,
    })
}
