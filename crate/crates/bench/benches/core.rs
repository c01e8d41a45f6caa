use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qham_bench::{group_elements, image_points, points, su2_pair, su3_pair};
use qham_core::axioms::{check_axiom_exterior, check_axiom_kernel, check_axiom_three};
use qham_core::involution::fixed_point_solve;
use qham_core::lie::{exp_alg, log_group};
use qham_core::polytope::{derived_rng, score_points};
use qham_core::qspace::{tangent_basis, TwoForm};
use qham_core::weyl::project_to_alcove;
use qham_core::{Hull, SolverConfig, SpaceSpec, Tolerances};

fn lie(c: &mut Criterion) {
    let gs = group_elements(3, 64, 1);
    c.bench_function("log_exp_su3", |b| {
        b.iter(|| {
            for g in &gs {
                black_box(exp_alg(&log_group(g)));
            }
        })
    });
    c.bench_function("project_to_alcove_su3", |b| {
        b.iter(|| {
            for g in &gs {
                black_box(project_to_alcove(g));
            }
        })
    });
}

fn forms(c: &mut Criterion) {
    let spec = su3_pair();
    let x = points(&spec, 1, 2).remove(0);
    let basis = tangent_basis(&spec, &x);
    c.bench_function("two_form_gram_su3", |b| {
        b.iter(|| {
            let form = TwoForm::at(&spec, &x);
            let mut acc = 0.0;
            for v in &basis {
                for w in &basis {
                    acc += form.eval(v, w).unwrap();
                }
            }
            black_box(acc)
        })
    });
    let tol = Tolerances::default();
    c.bench_function("axiom_three_su3", |b| b.iter(|| black_box(check_axiom_three(&spec, &x))));
    c.bench_function("axiom_kernel_su3", |b| b.iter(|| black_box(check_axiom_kernel(&spec, &x, tol.null_space))));
    let su2 = su2_pair();
    let y = points(&su2, 1, 3).remove(0);
    c.bench_function("axiom_exterior_su2", |b| {
        b.iter(|| black_box(check_axiom_exterior(&su2, &y, tol.exterior_step).unwrap()))
    });
}

fn solver(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    for (name, spec) in [("fixed_point_solve_su2", su2_pair()), ("fixed_point_solve_su3", su3_pair())] {
        let mut stream = 0;
        c.bench_function(name, |b| {
            b.iter_batched(
                || {
                    stream += 1;
                    derived_rng(4, stream)
                },
                |mut rng| black_box(fixed_point_solve(&spec, None, &mut rng, &cfg, 1e-8).unwrap()),
                BatchSize::SmallInput,
            )
        });
    }
}

fn hulls(c: &mut Criterion) {
    let spec: SpaceSpec = su3_pair();
    let pts = image_points(&spec, 10_000, 5);
    c.bench_function("hull_2d_10k", |b| b.iter(|| black_box(Hull::from_points(&pts, 1e-9).unwrap())));
    c.bench_function("convexity_score_2d_10k", |b| {
        b.iter(|| black_box(score_points(&pts, 50, None, 1e-9).unwrap()))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = lie, forms, solver, hulls
}
criterion_main!(benches);
