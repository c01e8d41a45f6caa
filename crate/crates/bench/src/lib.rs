//! Fixtures shared by the benchmarks in `benches/`.

use qham_core::polytope::derived_rng;
use qham_core::qspace::sample_point;
use qham_core::{AlcovePoint, GroupElement, QSpacePoint, SpaceSpec};

pub fn su2_pair() -> SpaceSpec {
    SpaceSpec::su2_classes(&[std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_4]).unwrap()
}

pub fn su3_pair() -> SpaceSpec {
    SpaceSpec::class_product(vec![
        AlcovePoint::new(vec![1.1, 0.3, -1.4]).unwrap(),
        AlcovePoint::new(vec![0.9, -0.2, -0.7]).unwrap(),
    ])
    .unwrap()
}

pub fn points(spec: &SpaceSpec, count: usize, seed: u64) -> Vec<QSpacePoint> {
    let mut rng = derived_rng(seed, 0);
    (0..count).map(|_| sample_point(spec, &mut rng)).collect()
}

pub fn group_elements(n: usize, count: usize, seed: u64) -> Vec<GroupElement> {
    let mut rng = derived_rng(seed, 0);
    (0..count).map(|_| qham_core::lie::haar_sample(n, &mut rng)).collect()
}

/// Embedded momentum values of `count` random points.
pub fn image_points(spec: &SpaceSpec, count: usize, seed: u64) -> Vec<Vec<f64>> {
    points(spec, count, seed)
        .iter()
        .map(|x| qham_core::weyl::project_to_alcove(&qham_core::qspace::momentum(spec, x)).embed())
        .collect()
}
