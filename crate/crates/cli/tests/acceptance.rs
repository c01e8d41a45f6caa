//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! PASS/FAIL line per criterion and exits non-zero if any failed.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qham_core::axioms::{check_axiom_exterior, check_axiom_kernel, check_axiom_three};
use qham_core::involution::{beta, fixed_point_solve, partial_product_asymmetry, validate_hypotheses, SolveOutcome};
use qham_core::lie::haar_sample;
use qham_core::polytope::{angle_interval, compare_real_convexity, derived_rng, score_points, ComparisonConfig};
use qham_core::qspace::{momentum, sample_point};
use qham_core::weyl::{alcove_exp, project_to_alcove};
use qham_core::{AlcovePoint, GroupElement, QSpacePoint, SolverConfig, SpaceSpec, Tolerances};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, limit_secs: u64) -> bool {
    elapsed < Duration::from_secs(limit_secs)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn su2(thetas: &[f64]) -> SpaceSpec {
    SpaceSpec::su2_classes(thetas).unwrap()
}

fn su3_pair() -> SpaceSpec {
    SpaceSpec::class_product(vec![
        AlcovePoint::new(vec![1.1, 0.3, -1.4]).unwrap(),
        AlcovePoint::new(vec![0.9, -0.2, -0.7]).unwrap(),
    ])
    .unwrap()
}

fn alcove_machinery() -> Outcome {
    let start = Instant::now();
    let (mut invariance, mut round_trip): (f64, f64) = (0.0, 0.0);
    for n in 2..=4 {
        let mut rng = derived_rng(1, n as u64);
        for _ in 0..1000 {
            let g = haar_sample(n, &mut rng);
            let h = haar_sample(n, &mut rng);
            let p = project_to_alcove(&g);
            invariance = invariance.max(max_diff(p.angles(), project_to_alcove(&h.conjugate_by(&g)).angles()));
            round_trip = round_trip.max(max_diff(p.angles(), project_to_alcove(&alcove_exp(&p)).angles()));
        }
    }
    let t = start.elapsed();
    outcome(
        invariance < 1e-9 && round_trip < 1e-10 && within(t, 10),
        format!("conjugation invariance {invariance:.2e}, round trip {round_trip:.2e}, {t:.2?}"),
    )
}

fn axiom_contraction() -> Outcome {
    let start = Instant::now();
    let specs = [su2(&[1.1]), su2(&[PI / 3.0, PI / 4.0]), su3_pair()];
    let mut worst: f64 = 0.0;
    for (k, spec) in specs.iter().enumerate() {
        let mut rng = derived_rng(2, k as u64);
        for _ in 0..100 {
            worst = worst.max(check_axiom_three(spec, &sample_point(spec, &mut rng)));
        }
    }
    let t = start.elapsed();
    outcome(worst < 1e-8 && within(t, 60), format!("max residual {worst:.2e}, {t:.2?}"))
}

fn axiom_kernel() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default().null_space;
    let mut generic_ok = 0;
    for (k, spec) in [su2(&[PI / 3.0, PI / 4.0]), su3_pair()].iter().enumerate() {
        let mut rng = derived_rng(3, k as u64);
        for _ in 0..50 {
            let d = check_axiom_kernel(spec, &sample_point(spec, &mut rng), tol);
            if d.measured == 0 && d.predicted == 0 {
                generic_ok += 1;
            }
        }
    }
    let spec = su2(&[PI / 4.0, PI / 4.0]);
    let u = GroupElement::diagonal(&[PI / 4.0, -PI / 4.0]);
    let x = QSpacePoint::new(&spec, vec![u.clone(), u]).unwrap();
    let mu_defect = momentum(&spec, &x).distance(&GroupElement::diagonal(&[PI / 2.0, -PI / 2.0]));
    let crafted = check_axiom_kernel(&spec, &x, tol);
    let t = start.elapsed();
    outcome(
        generic_ok == 100 && mu_defect < 1e-12 && crafted.measured == crafted.predicted && within(t, 30),
        format!(
            "generic {generic_ok}/100 equal to 0, crafted measured {} predicted {}, {t:.2?}",
            crafted.measured, crafted.predicted
        ),
    )
}

fn axiom_exterior() -> Outcome {
    let spec = su2(&[1.1]);
    let step = Tolerances::default().exterior_step;
    let mut rng = derived_rng(4, 0);
    let measure = |x: &QSpacePoint| {
        let r = check_axiom_exterior(&spec, x, step).unwrap();
        (r, r / check_axiom_exterior(&spec, x, step / 2.0).unwrap())
    };
    let (r, ratio) = measure(&sample_point(&spec, &mut rng));
    // Further points are reported only: near 5e-5 the rounding floor of the
    // differences (~3e-11) is within an order of magnitude of the truncation
    // error, so single ratios scatter around 4.
    let others: Vec<String> = (0..4)
        .map(|_| format!("{:.3}", measure(&sample_point(&spec, &mut rng)).1))
        .collect();
    outcome(
        r < 1e-4 && (3.0..=5.0).contains(&ratio),
        format!("residual {r:.2e}, halving ratio {ratio:.3} (other points [{}])", others.join(", ")),
    )
}

fn hypotheses() -> Outcome {
    let spec = su2(&[PI / 3.0, PI / 4.0]);
    let r = validate_hypotheses(
        &spec,
        50,
        &mut derived_rng(5, 0),
        &Tolerances::default(),
        &SolverConfig::default(),
    )
    .unwrap();
    let algebraic = r.residual_involutivity.max(r.residual_equivariance).max(r.residual_momentum_compat);
    outcome(
        algebraic < 1e-10
            && r.residual_form_reversal < 1e-5
            && r.fixed_points_found >= 4
            && r.q0_checked > 0
            && r.q0_certified == r.q0_checked,
        format!(
            "algebraic {algebraic:.2e}, form reversal {:.2e}, fixed points {}, q0 {}/{}",
            r.residual_form_reversal, r.fixed_points_found, r.q0_certified, r.q0_checked
        ),
    )
}

fn solver() -> Outcome {
    let specs = [
        su2(&[PI / 3.0, PI / 4.0]),
        su2(&[PI / 2.0, PI / 2.0]),
        su2(&[PI / 4.0, PI / 12.0]),
        su2(&[1.0, 0.7]),
    ];
    let cfg = SolverConfig::default();
    let (mut ok, mut fixed_defect, mut asym): (usize, f64, f64) = (0, 0.0, 0.0);
    for run in 0..100 {
        let spec = &specs[run % specs.len()];
        let out = fixed_point_solve(spec, None, &mut derived_rng(6, run as u64), &cfg, 1e-8).unwrap();
        if let SolveOutcome::Fixed { point, .. } = out {
            ok += 1;
            fixed_defect = fixed_defect.max(beta(spec, &point).unwrap().distance(&point));
            asym = asym.max(partial_product_asymmetry(&point));
        }
    }
    outcome(
        ok >= 90 && fixed_defect <= 1e-8 && asym <= 1e-8,
        format!("{ok}/100 fixed, max beta defect {fixed_defect:.2e}, max asymmetry {asym:.2e}"),
    )
}

fn real_convexity_su2() -> Outcome {
    let tol = Tolerances::default();
    let cfg = ComparisonConfig {
        full_samples: 100_000,
        fixed_samples: 1000,
        grid_res: 50,
        seed: 7,
    };
    let mut pass = true;
    let mut lines = Vec::new();
    for (a, b) in [(PI / 2.0, PI / 2.0), (PI / 3.0, PI / 3.0), (PI / 4.0, PI / 12.0)] {
        let start = Instant::now();
        let v = compare_real_convexity(&su2(&[a, b]), &cfg, &tol, &SolverConfig::default()).unwrap();
        let t = start.elapsed();
        let oracle = ((a - b).abs(), (a + b).min(2.0 * PI - a - b));
        let endpoint_error = [angle_interval(&v.hull_full), angle_interval(&v.hull_fixed)]
            .iter()
            .map(|(lo, hi)| (lo - oracle.0).abs().max((hi - oracle.1).abs()))
            .fold(0.0, f64::max);
        pass &= endpoint_error < 0.02 && v.hausdorff < 0.05 && within(t, 300);
        lines.push(format!(
            "({a:.4},{b:.4}) endpoints {endpoint_error:.2e} hausdorff {:.2e} {t:.2?}",
            v.hausdorff
        ));
    }
    outcome(pass, lines.join("; "))
}

fn real_convexity_su3() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let cfg = ComparisonConfig {
        full_samples: 100_000,
        fixed_samples: 1000,
        grid_res: 50,
        seed: 8,
    };
    let v = compare_real_convexity(&su3_pair(), &cfg, &tol, &SolverConfig::default()).unwrap();
    let t = start.elapsed();
    outcome(
        v.score_full.score >= 0.99 && v.score_fixed.score >= 0.99 && v.hausdorff < 0.05 && within(t, 900),
        format!(
            "score full {:.4}, score fixed {:.4}, hausdorff {:.4}, solver failures {}/{}, {t:.2?}",
            v.score_full.score, v.score_fixed.score, v.hausdorff, v.solver_failures, v.solver_attempts
        ),
    )
}

fn negative_control() -> Outcome {
    let mut rng = derived_rng(9, 0);
    let pts: Vec<Vec<f64>> = (0..20_000)
        .map(|i| {
            let c = if i % 2 == 0 { 0.0 } else { 1.0 };
            vec![c + 0.15 * rng.gen::<f64>(), c + 0.15 * rng.gen::<f64>()]
        })
        .collect();
    let s = score_points(&pts, 50, None, Tolerances::default().hull).unwrap();
    outcome(s.score < 0.8, format!("two-cluster score {:.4}", s.score))
}

fn run_cli(out: &Path, args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_qham"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QHAM_SEED")
        .output()
        .expect("the qham binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn reproducibility() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["verify-axioms", "--group", "su2", "--classes", "pi/3;pi/4", "--seed", "10"],
        &["verify-involution", "--group", "su2", "--classes", "pi/3;pi/4", "--seed", "10"],
        &["polytope", "--group", "su3", "--classes", "1.1,0.3,-1.4;0.9,-0.2,-0.7", "--samples", "20000", "--seed", "10"],
        &["real-convexity", "--group", "su3", "--classes", "1.1,0.3,-1.4;0.9,-0.2,-0.7", "--samples", "20000", "--fixed-samples", "300", "--seed", "10"],
    ];
    let mut identical = 0;
    let mut compared = 0;
    for args in runs {
        let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
        let codes: Vec<i32> = dirs.iter().map(|d| run_cli(d.path(), args)).collect();
        let mut names: Vec<_> = std::fs::read_dir(dirs[0].path())
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        for name in names.iter().filter(|n| n.to_string_lossy().ends_with(".json")) {
            compared += 1;
            let a = std::fs::read(dirs[0].path().join(name)).unwrap();
            let b = std::fs::read(dirs[1].path().join(name)).unwrap_or_default();
            if a == b && codes[0] == codes[1] {
                identical += 1;
            }
        }
    }
    outcome(
        compared == runs.len() && identical == compared,
        format!("{identical}/{compared} reports byte-identical"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("alcove machinery", alcove_machinery),
        ("axiom (iii) contraction", axiom_contraction),
        ("axiom (ii) kernel", axiom_kernel),
        ("axiom (i) exterior derivative", axiom_exterior),
        ("involution hypotheses", hypotheses),
        ("fixed-point solver", solver),
        ("real convexity SU(2)", real_convexity_su2),
        ("real convexity SU(3)", real_convexity_su3),
        ("negative control", negative_control),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<30} {}  {}",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
