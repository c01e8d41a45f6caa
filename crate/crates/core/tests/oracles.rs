//! Cross-module checks against independent oracles.
//!
//! For a product of two classes the momentum image of the fixed-point set is
//! exactly the set of spectra of `D₁·O·D₂·Oᵀ` with `O ∈ SO(n)`, where `Dⱼ` are
//! the diagonal class representatives. Sampling `O` directly bypasses the
//! fixed-point solver entirely.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qham_core::involution::{beta, fixed_point_solve, tau_minus, SolveOutcome};
use qham_core::lie::haar_sample_orthogonal;
use qham_core::polytope::{convex_hull, derived_rng, hausdorff, sample_momentum_image, Source};
use qham_core::qspace::{momentum, sample_point};
use qham_core::weyl::{alcove_exp, project_to_alcove};
use qham_core::{AlcovePoint, GroupElement, Hull, SolverConfig, SpaceSpec, Tolerances};

fn su3_pair() -> SpaceSpec {
    SpaceSpec::class_product(vec![
        AlcovePoint::new(vec![1.1, 0.3, -1.4]).unwrap(),
        AlcovePoint::new(vec![0.9, -0.2, -0.7]).unwrap(),
    ])
    .unwrap()
}

fn oracle_hull(spec: &SpaceSpec, count: usize, seed: u64) -> Hull {
    let n = spec.rank();
    let d: Vec<_> = spec.class_points().iter().map(|p| alcove_exp(p).into_matrix()).collect();
    let mut rng = derived_rng(seed, 0);
    let points: Vec<Vec<f64>> = (0..count)
        .map(|_| {
            let o: DMatrix<Complex64> = haar_sample_orthogonal(n, &mut rng).map(|x| Complex64::new(x, 0.0));
            let m = &d[0] * &o * &d[1] * o.transpose();
            project_to_alcove(&GroupElement::from_matrix_unchecked(m)).embed()
        })
        .collect();
    Hull::from_points(&points, 1e-9).unwrap()
}

#[test]
fn fixed_point_image_lies_in_the_orthogonal_oracle() {
    let spec = su3_pair();
    let tol = Tolerances::default();
    let fixed = sample_momentum_image(&spec, 1000, 11, Source::FixedPointSet, &SolverConfig::default(), &tol).unwrap();
    let oracle = oracle_hull(&spec, 50_000, 12);
    // Coverage in the other direction is limited by the vanishing sample
    // density near the walls and is left to the acceptance suite.
    let outside = fixed.embedded().iter().map(|p| oracle.distance(p)).fold(0.0, f64::max);
    assert!(outside < 0.01, "{outside}");
    let solved = convex_hull(&fixed, tol.hull).unwrap();
    assert_eq!(solved.dim(), oracle.dim());
    assert!(hausdorff(&solved, &oracle).unwrap() < 0.1);
}

#[test]
fn su2_oracle_interval() {
    // For SU(2) the orthogonal oracle already sweeps the whole interval.
    let (a, b) = (1.0, 0.4);
    let spec = SpaceSpec::su2_classes(&[a, b]).unwrap();
    let hull = oracle_hull(&spec, 20_000, 13);
    let ends: Vec<f64> = hull.vertices().iter().map(|v| v[0] / 2f64.sqrt()).collect();
    let (lo, hi) = ends.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(*x), h.max(*x)));
    assert!((lo - (a - b)).abs() < 1e-3 && (hi - (a + b)).abs() < 1e-3, "{lo} {hi}");
}

#[test]
fn solved_fixed_points_have_symmetric_momentum() {
    let spec = su3_pair();
    let mut rng = derived_rng(14, 0);
    let mut found = 0;
    for _ in 0..10 {
        if let SolveOutcome::Fixed { point, .. } =
            fixed_point_solve(&spec, None, &mut rng, &SolverConfig::default(), 1e-8).unwrap()
        {
            let mu = momentum(&spec, &point);
            assert!(mu.distance(&tau_minus(&mu)) < 1e-8);
            found += 1;
        }
    }
    assert!(found >= 8, "{found}");
}

fn class_product() -> impl Strategy<Value = SpaceSpec> {
    prop_oneof![
        prop::collection::vec(0.05f64..3.0, 1..=3).prop_map(|t| SpaceSpec::su2_classes(&t).unwrap()),
        (0.0f64..1.0, 0.0f64..1.0).prop_map(|(s, t)| {
            let a = AlcovePoint::normalized(vec![1.5 * s, 0.2, -0.9 * t]).unwrap().0;
            SpaceSpec::class_product(vec![a, AlcovePoint::new(vec![0.9, -0.2, -0.7]).unwrap()]).unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn beta_maps_momentum_by_tau_minus(spec in class_product(), seed in any::<u64>()) {
        let x = sample_point(&spec, &mut derived_rng(seed, 0));
        let y = beta(&spec, &x).unwrap();
        let lhs = momentum(&spec, &y);
        let rhs = tau_minus(&momentum(&spec, &x));
        prop_assert!(lhs.distance(&rhs) < 1e-10);
        let (p, q) = (project_to_alcove(&lhs), project_to_alcove(&momentum(&spec, &x)));
        prop_assert!(p.distance(&q) < 1e-9);
    }
}
