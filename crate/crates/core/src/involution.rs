//! The involution pair `τ(g) = ḡ`, `τ⁻(g) = τ(g⁻¹) = gᵀ` on SU(n), the
//! form-reversing involution `β` on class products, and samplers for its
//! fixed-point set.
//!
//! With partial products `w_j = u_1⋯u_j`,
//!
//! ```text
//! β(x)_j = τ(w_{j−1} u_j⁻¹ w_{j−1}⁻¹)
//! ```
//!
//! The partial products of `β(x)` are `τ⁻(w_j)`, so `μ∘β = τ⁻∘μ`, and `x` is
//! fixed iff every `w_j` is symmetric.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{SolverConfig, Tolerances};
use crate::error::{QhamError, Result};
use crate::lie::{
    exp_alg, haar_sample, haar_sample_orthogonal, max_abs_diff, real_to_complex, AlgebraElement,
    CMatrix, GroupElement, TangentVector,
};
use crate::qspace::{act, momentum, partial_products, sample_point, QSpacePoint, SpaceKind, SpaceSpec, TwoForm};
use crate::weyl::alcove_exp;

/// Maximal number of tuples returned by [`fixed_point_torus_family`].
pub const TORUS_FAMILY_CAP: usize = 10_000;

/// Number of path samples checked by [`q0_certificate`].
pub const Q0_PATH_SAMPLES: usize = 33;

pub fn tau(g: &GroupElement) -> GroupElement {
    g.conjugate()
}

pub fn tau_minus(g: &GroupElement) -> GroupElement {
    g.transpose()
}

/// The shipped pair on SU(n). Only the rank is variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionPair {
    pub n: usize,
}

impl InvolutionPair {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(QhamError::RankTooSmall(n));
        }
        Ok(Self { n })
    }

    pub fn tau(&self, g: &GroupElement) -> GroupElement {
        tau(g)
    }

    pub fn tau_minus(&self, g: &GroupElement) -> GroupElement {
        tau_minus(g)
    }

    /// Largest deviation from `τ∘τ = id` and `τ(gh) = τ(g)τ(h)` over samples.
    pub fn automorphism_defect<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> f64 {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let g = haar_sample(self.n, rng);
            let h = haar_sample(self.n, rng);
            worst = worst
                .max(tau(&tau(&g)).distance(&g))
                .max(tau(&g.compose(&h)).distance(&tau(&g).compose(&tau(&h))))
                .max(tau_minus(&g).distance(&tau(&g.inverse())));
        }
        worst
    }
}

/// Property (P): `τ⁻` fixes the diagonal maximal torus pointwise, checked on
/// `samples` random torus elements within 1e-14.
pub fn check_property_p<R: Rng + ?Sized>(n: usize, samples: usize, rng: &mut R) -> bool {
    if n < 2 {
        return false;
    }
    (0..samples).all(|_| {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let mean = angles.iter().sum::<f64>() / n as f64;
        angles.iter_mut().for_each(|a| *a -= mean);
        let t = GroupElement::diagonal(&angles);
        tau_minus(&t).distance(&t) < 1e-14
    })
}

fn require_class_product(spec: &SpaceSpec) -> Result<()> {
    match spec.kind() {
        SpaceKind::ClassProduct => Ok(()),
        SpaceKind::Double => Err(QhamError::Unsupported(
            "the involution β is defined on class products only".into(),
        )),
    }
}

pub fn beta(spec: &SpaceSpec, x: &QSpacePoint) -> Result<QSpacePoint> {
    require_class_product(spec)?;
    let w = partial_products(x);
    let factors = x
        .factors()
        .iter()
        .enumerate()
        .map(|(j, u)| tau(&w[j].conjugate_by(&u.inverse())))
        .collect();
    let image = QSpacePoint::from_factors_unchecked(factors);
    let defect = image.class_defect(spec);
    if defect > 1e-8 {
        return Err(QhamError::InvalidSpace(format!(
            "β left a class (defect {defect:e})"
        )));
    }
    Ok(image)
}

/// Largest asymmetry `|w_j − w_jᵀ|` over the partial products.
pub fn partial_product_asymmetry(x: &QSpacePoint) -> f64 {
    partial_products(x)
        .iter()
        .map(|w| w.distance(&tau_minus(w)))
        .fold(0.0, f64::max)
}

/// `dβ(v)` by central differences along the curve `x ↦ exp(tX)·x` in one
/// factor.
fn beta_differential(spec: &SpaceSpec, x: &QSpacePoint, factor: usize, generator: &AlgebraElement, step: f64) -> Result<CMatrix> {
    let shifted = |t: f64| -> Result<QSpacePoint> {
        let g = exp_alg(&generator.scale(t));
        let mut factors = x.factors().to_vec();
        factors[factor] = g.conjugate_by(&factors[factor]);
        beta(spec, &QSpacePoint::from_factors_unchecked(factors))
    };
    let plus = shifted(step)?;
    let minus = shifted(-step)?;
    let blocks: Vec<CMatrix> = plus
        .factors()
        .iter()
        .zip(minus.factors())
        .map(|(p, m)| (p.matrix() - m.matrix()) / Complex64::new(2.0 * step, 0.0))
        .collect();
    // flatten by stacking blocks horizontally; callers split again
    let n = spec.rank();
    let mut out = CMatrix::zeros(n, n * blocks.len());
    for (j, b) in blocks.iter().enumerate() {
        out.view_mut((0, j * n), (n, n)).copy_from(b);
    }
    Ok(out)
}

fn split_blocks(stacked: &CMatrix, n: usize) -> Vec<CMatrix> {
    (0..stacked.ncols() / n)
        .map(|j| stacked.view((0, j * n), (n, n)).into_owned())
        .collect()
}

/// `max |ω_{β(x)}(dβv, dβw) + ω_x(v, w)|` over the spanning set
/// `v = [X, u_j]` (one factor at a time, `X` orthonormal in su(n)).
pub fn form_reversal_residual(spec: &SpaceSpec, x: &QSpacePoint, fd_step: f64) -> Result<f64> {
    let n = spec.rank();
    let l = x.factors().len();
    let bx = beta(spec, x)?;
    let basis = AlgebraElement::basis(n);
    let mut source = Vec::new();
    let mut image = Vec::new();
    for j in 0..l {
        let u = x.factors()[j].matrix();
        for e in &basis {
            let mut ambient = vec![CMatrix::zeros(n, n); l];
            ambient[j] = e.matrix() * u - u * e.matrix();
            if ambient[j].iter().all(|z| z.norm() == 0.0) {
                continue;
            }
            source.push(TangentVector::new(x.factors().to_vec(), ambient)?);
            let d = beta_differential(spec, x, j, e, fd_step)?;
            image.push(TangentVector::new(bx.factors().to_vec(), split_blocks(&d, n))?);
        }
    }
    let form_x = TwoForm::at(spec, x);
    let form_b = TwoForm::at(spec, &bx);
    let mut worst = 0.0f64;
    for a in 0..source.len() {
        for b in a + 1..source.len() {
            let r = form_b.eval(&image[a], &image[b])? + form_x.eval(&source[a], &source[b])?;
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// All tuples of diagonal class representatives, one distinct permutation of
/// the eigen-angles per class, capped at [`TORUS_FAMILY_CAP`].
pub fn fixed_point_torus_family(spec: &SpaceSpec) -> Result<Vec<QSpacePoint>> {
    require_class_product(spec)?;
    let per_class: Vec<Vec<GroupElement>> = spec
        .class_points()
        .iter()
        .map(|c| {
            distinct_permutations(c.angles())
                .iter()
                .map(|p| GroupElement::diagonal(p))
                .collect()
        })
        .collect();
    let mut tuples: Vec<Vec<GroupElement>> = vec![Vec::new()];
    for options in &per_class {
        let mut next = Vec::new();
        'outer: for t in &tuples {
            for o in options {
                if next.len() == TORUS_FAMILY_CAP {
                    break 'outer;
                }
                let mut grown = t.clone();
                grown.push(o.clone());
                next.push(grown);
            }
        }
        tuples = next;
    }
    Ok(tuples.into_iter().map(QSpacePoint::from_factors_unchecked).collect())
}

/// Distinct orderings of `values` (exact comparison), in lexicographic order
/// of positions.
fn distinct_permutations(values: &[f64]) -> Vec<Vec<f64>> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(sorted.len());
    let mut used = vec![false; sorted.len()];
    fn rec(sorted: &[f64], used: &mut [bool], current: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if current.len() == sorted.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..sorted.len() {
            if used[i] || (i > 0 && sorted[i] == sorted[i - 1] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            current.push(sorted[i]);
            rec(sorted, used, current, out);
            current.pop();
            used[i] = false;
        }
    }
    rec(&sorted, &mut used, &mut current, &mut out);
    out
}

/// Result of one [`fixed_point_solve`] run.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Fixed {
        point: QSpacePoint,
        iterations: usize,
        objective: f64,
    },
    Failed {
        factor: usize,
        objective: f64,
    },
}

impl SolveOutcome {
    pub fn point(&self) -> Option<&QSpacePoint> {
        match self {
            SolveOutcome::Fixed { point, .. } => Some(point),
            SolveOutcome::Failed { .. } => None,
        }
    }

    pub fn is_fixed(&self) -> bool {
        matches!(self, SolveOutcome::Fixed { .. })
    }
}

fn asymmetry(m: &CMatrix) -> f64 {
    (m - m.transpose()).iter().map(|z| z.norm_sqr()).sum()
}

/// Minimizes `F(h) = ‖w h u h⁻¹ − (w h u h⁻¹)ᵀ‖²` over `h` by gradient descent
/// with left retraction `h ← exp(−αG) h`. Returns the final factor, the
/// objective and the iteration count.
fn descend(w: &CMatrix, u0: &GroupElement, cfg: &SolverConfig) -> (GroupElement, f64, usize) {
    let n = u0.rank();
    let basis = AlgebraElement::basis(n);
    let steps: Vec<(CMatrix, CMatrix)> = basis
        .iter()
        .map(|e| {
            (
                exp_alg(&e.scale(cfg.gradient_step)).into_matrix(),
                exp_alg(&e.scale(-cfg.gradient_step)).into_matrix(),
            )
        })
        .collect();
    let objective = |u: &CMatrix| asymmetry(&(w * u));
    let mut u = u0.matrix().clone();
    let mut f = objective(&u);
    let mut iterations = 0;
    while iterations < cfg.max_iters && f >= cfg.objective_tol * 1e-4 {
        iterations += 1;
        let grad: Vec<f64> = steps
            .iter()
            .map(|(p, m)| {
                let up = p * &u * p.adjoint();
                let um = m * &u * m.adjoint();
                (objective(&up) - objective(&um)) / (2.0 * cfg.gradient_step)
            })
            .collect();
        let gnorm2: f64 = grad.iter().map(|g| g * g).sum();
        if gnorm2 == 0.0 {
            break;
        }
        let direction = basis
            .iter()
            .zip(&grad)
            .fold(AlgebraElement::zero(n), |acc, (e, g)| acc.add(&e.scale(-g)));
        let mut alpha = cfg.step_init;
        let mut accepted = false;
        while alpha > 1e-20 {
            let r = exp_alg(&direction.scale(alpha)).into_matrix();
            let trial = &r * &u * r.adjoint();
            let ft = objective(&trial);
            if ft <= f - cfg.armijo * alpha * gnorm2 {
                u = trial;
                f = ft;
                accepted = true;
                break;
            }
            alpha *= cfg.shrink;
        }
        if !accepted {
            break;
        }
    }
    (GroupElement::from_matrix_unchecked(u), f, iterations)
}

/// Samples a point of `Fix(β)` factor by factor: `u_1 = Q D Qᵀ` with `Q`
/// Haar in SO(n) is symmetric; for `j ≥ 2` the conjugator of `u_j` is found
/// by descent on the asymmetry of `w_{j−1} u_j`. Factors `j ≥ 2` start from
/// `seed_point` when given, else from Haar-random class elements.
pub fn fixed_point_solve<R: Rng + ?Sized>(
    spec: &SpaceSpec,
    seed_point: Option<&QSpacePoint>,
    rng: &mut R,
    cfg: &SolverConfig,
    fixed_tol: f64,
) -> Result<SolveOutcome> {
    require_class_product(spec)?;
    let n = spec.rank();
    let classes = spec.class_points();
    let start = match seed_point {
        Some(p) => {
            if p.factors().len() != classes.len() {
                return Err(QhamError::DimensionMismatch(classes.len(), p.factors().len()));
            }
            p.clone()
        }
        None => sample_point(spec, rng),
    };
    let q = real_to_complex(&haar_sample_orthogonal(n, rng));
    let d = alcove_exp(&classes[0]);
    let u1 = &q * d.matrix() * q.transpose();
    let mut factors = vec![GroupElement::from_matrix_unchecked(u1)];
    let mut w = factors[0].matrix().clone();
    let mut iterations = 0;
    let mut worst = asymmetry(&w);
    for j in 1..classes.len() {
        let (u, f, it) = descend(&w, &start.factors()[j], cfg);
        iterations += it;
        worst = worst.max(f);
        if f >= cfg.objective_tol {
            return Ok(SolveOutcome::Failed { factor: j, objective: f });
        }
        w = &w * u.matrix();
        factors.push(u);
    }
    let point = QSpacePoint::from_factors_unchecked(factors);
    let image = beta(spec, &point)?;
    if image.distance(&point) > fixed_tol || point.class_defect(spec) > 1e-8 {
        return Ok(SolveOutcome::Failed {
            factor: classes.len(),
            objective: worst,
        });
    }
    Ok(SolveOutcome::Fixed {
        point,
        iterations,
        objective: worst,
    })
}

/// Path `t ↦ O diag(e^{itφ}) Oᵀ = v_t v_tᵀ` from the identity to `g`.
#[derive(Debug, Clone)]
pub struct TakagiPath {
    pub orthogonal: DMatrix<f64>,
    pub phases: Vec<f64>,
}

impl TakagiPath {
    pub fn factor(&self, t: f64) -> CMatrix {
        let o = real_to_complex(&self.orthogonal);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|p| Complex64::from_polar(1.0, 0.5 * t * p)),
        ));
        o * d
    }

    pub fn at(&self, t: f64) -> CMatrix {
        let v = self.factor(t);
        &v * v.transpose()
    }
}

/// Takagi factorization `g = v vᵀ` of a symmetric special unitary: the real
/// and imaginary parts commute and are diagonalized by one real orthogonal
/// matrix; the phases are chosen with zero sum so the path stays in SU(n).
pub fn takagi_path(g: &GroupElement, sym_tol: f64) -> Result<TakagiPath> {
    let m = g.matrix();
    let n = g.rank();
    let asym = max_abs_diff(m, &m.transpose());
    if asym > sym_tol {
        return Err(QhamError::NotSymmetric(asym));
    }
    let re = m.map(|z| z.re);
    let im = m.map(|z| z.im);
    let re = (&re + re.transpose()) * 0.5;
    let im = (&im + im.transpose()) * 0.5;
    for c in [0.618_033_988_749_895, 1.324_717_957_244_746, -0.754_877_666_246_693] {
        let eig = SymmetricEigen::new(&re + &im * c);
        let mut o = eig.eigenvectors;
        if o.determinant() < 0.0 {
            o.column_mut(0).neg_mut();
        }
        let oc = real_to_complex(&o);
        let diag = oc.transpose() * m * &oc;
        let off = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|(a, b)| a != b)
            .map(|(a, b)| diag[(a, b)].norm())
            .fold(0.0, f64::max);
        if off > 1e-8 {
            continue;
        }
        let mut phases: Vec<f64> = (0..n).map(|k| diag[(k, k)].arg()).collect();
        let total: f64 = phases.iter().sum();
        let winding = (total / (2.0 * std::f64::consts::PI)).round() as i64;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| phases[b].total_cmp(&phases[a]));
        if winding > 0 {
            for &k in order.iter().take(winding as usize) {
                phases[k] -= 2.0 * std::f64::consts::PI;
            }
        } else {
            for &k in order.iter().rev().take((-winding) as usize) {
                phases[k] += 2.0 * std::f64::consts::PI;
            }
        }
        return Ok(TakagiPath {
            orthogonal: o,
            phases,
        });
    }
    Err(QhamError::FactorizationFailed(
        "no real orthogonal basis diagonalizes the input".into(),
    ))
}

/// Certifies `g ∈ Q_0`, the identity component of `Fix(τ⁻)`, by checking the
/// Takagi path at [`Q0_PATH_SAMPLES`] points for symmetry, unitarity and unit
/// determinant, and its endpoints.
pub fn q0_certificate(g: &GroupElement) -> Result<bool> {
    let path = takagi_path(g, 1e-8)?;
    let n = g.rank();
    let id = CMatrix::identity(n, n);
    let mut ok = max_abs_diff(&path.at(0.0), &id) < 1e-12 && max_abs_diff(&path.at(1.0), g.matrix()) < 1e-8;
    for k in 0..Q0_PATH_SAMPLES {
        let t = k as f64 / (Q0_PATH_SAMPLES - 1) as f64;
        let s = path.at(t);
        ok &= max_abs_diff(&s, &s.transpose()) < 1e-10;
        ok &= max_abs_diff(&(s.adjoint() * &s), &id) < 1e-10;
        ok &= (s.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-10;
    }
    Ok(ok)
}

/// Residuals of the hypotheses of the real convexity theorem on one spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub residual_form_reversal: f64,
    pub residual_equivariance: f64,
    pub residual_momentum_compat: f64,
    pub residual_involutivity: f64,
    pub fixed_points_found: usize,
    pub q0_checked: usize,
    pub q0_certified: usize,
    pub q0_witness: bool,
}

impl HypothesisReport {
    pub fn passes(&self, tol: &Tolerances) -> bool {
        self.residual_involutivity < tol.algebraic
            && self.residual_equivariance < tol.algebraic
            && self.residual_momentum_compat < tol.algebraic
            && self.residual_form_reversal < tol.form_reversal
            && self.fixed_points_found > 0
            && self.q0_witness
            && self.q0_certified == self.q0_checked
    }
}

/// Number of solver runs used by [`validate_hypotheses`] to exhibit fixed
/// points beyond the torus family.
pub const HYPOTHESIS_SOLVER_RUNS: usize = 4;

/// Evaluates involutivity, twisted equivariance, momentum compatibility and
/// form reversal on `sample_count` random points; exhibits fixed points (torus
/// family plus solver runs) and certifies their momenta lie in `Q_0`.
pub fn validate_hypotheses<R: Rng + ?Sized>(
    spec: &SpaceSpec,
    sample_count: usize,
    rng: &mut R,
    tol: &Tolerances,
    cfg: &SolverConfig,
) -> Result<HypothesisReport> {
    require_class_product(spec)?;
    let n = spec.rank();
    let mut report = HypothesisReport {
        residual_form_reversal: 0.0,
        residual_equivariance: 0.0,
        residual_momentum_compat: 0.0,
        residual_involutivity: 0.0,
        fixed_points_found: 0,
        q0_checked: 0,
        q0_certified: 0,
        q0_witness: false,
    };
    for _ in 0..sample_count {
        let x = sample_point(spec, rng);
        let g = haar_sample(n, rng);
        let bx = beta(spec, &x)?;
        report.residual_involutivity = report.residual_involutivity.max(beta(spec, &bx)?.distance(&x));
        let lhs = beta(spec, &act(spec, &g, &x)?)?;
        let rhs = act(spec, &tau(&g), &bx)?;
        report.residual_equivariance = report.residual_equivariance.max(lhs.distance(&rhs));
        report.residual_momentum_compat = report
            .residual_momentum_compat
            .max(momentum(spec, &bx).distance(&tau_minus(&momentum(spec, &x))));
        report.residual_form_reversal = report
            .residual_form_reversal
            .max(form_reversal_residual(spec, &x, tol.fd_step)?);
    }
    let mut fixed = fixed_point_torus_family(spec)?;
    for _ in 0..HYPOTHESIS_SOLVER_RUNS {
        if let SolveOutcome::Fixed { point, .. } = fixed_point_solve(spec, None, rng, cfg, tol.fixed_point)? {
            fixed.push(point);
        }
    }
    report.fixed_points_found = fixed.len();
    for x in &fixed {
        report.q0_checked += 1;
        if q0_certificate(&momentum(spec, x)).unwrap_or(false) {
            report.q0_certified += 1;
        }
    }
    report.q0_witness = report.q0_certified > 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::{project_to_alcove, AlcovePoint};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn tau_minus_examples() {
        let t = GroupElement::diagonal(&[0.3, 0.5, -0.8]);
        assert_eq!(tau_minus(&t), t);
        let mut r = rng(1);
        for _ in 0..50 {
            let g = haar_sample(3, &mut r);
            assert_eq!(tau_minus(&tau_minus(&g)), g);
            let prod = tau_minus(&g).matrix() * g.transpose().inverse().matrix();
            assert!(max_abs_diff(&prod, &CMatrix::identity(3, 3)) < 1e-12);
        }
        let pair = InvolutionPair::new(4).unwrap();
        assert!(pair.automorphism_defect(50, &mut r) < 1e-12);
        assert!(InvolutionPair::new(1).is_err());
    }

    #[test]
    fn property_p_holds() {
        assert!(check_property_p(2, 100, &mut rng(2)));
        assert!(check_property_p(5, 100, &mut rng(3)));
    }

    #[test]
    fn beta_single_factor_is_transpose() {
        let spec = SpaceSpec::su2_classes(&[0.7]).unwrap();
        let x = sample_point(&spec, &mut rng(4));
        let bx = beta(&spec, &x).unwrap();
        assert!(bx.factors()[0].distance(&x.factors()[0].transpose()) < 1e-14);
    }

    #[test]
    fn diagonal_factors_are_fixed() {
        let spec = SpaceSpec::su2_classes(&[0.7, 1.9]).unwrap();
        for x in fixed_point_torus_family(&spec).unwrap() {
            assert!(beta(&spec, &x).unwrap().distance(&x) < 1e-12);
        }
    }

    #[test]
    fn torus_family_counts() {
        assert_eq!(fixed_point_torus_family(&SpaceSpec::su2_classes(&[0.4]).unwrap()).unwrap().len(), 2);
        assert_eq!(fixed_point_torus_family(&SpaceSpec::su2_classes(&[0.4, 1.0]).unwrap()).unwrap().len(), 4);
        let degenerate = AlcovePoint::new(vec![0.4, 0.4, -0.8]).unwrap();
        let spec = SpaceSpec::class_product(vec![degenerate]).unwrap();
        assert_eq!(fixed_point_torus_family(&spec).unwrap().len(), 3);
        let generic = AlcovePoint::new(vec![1.0, 0.2, -1.2]).unwrap();
        let spec = SpaceSpec::class_product(vec![generic; 6]).unwrap();
        assert_eq!(fixed_point_torus_family(&spec).unwrap().len(), TORUS_FAMILY_CAP);
    }

    #[test]
    fn double_is_unsupported() {
        let spec = SpaceSpec::double(2).unwrap();
        let x = sample_point(&spec, &mut rng(5));
        assert!(matches!(beta(&spec, &x), Err(QhamError::Unsupported(_))));
        assert!(fixed_point_torus_family(&spec).is_err());
    }

    #[test]
    fn algebraic_identities_on_many_points() {
        let spec = SpaceSpec::su2_classes(&[PI / 3.0, PI / 4.0, 2.0]).unwrap();
        let mut r = rng(6);
        for _ in 0..1000 {
            let x = sample_point(&spec, &mut r);
            let bx = beta(&spec, &x).unwrap();
            assert!(beta(&spec, &bx).unwrap().distance(&x) < 1e-12);
            let mu = momentum(&spec, &x);
            assert!(momentum(&spec, &bx).distance(&tau_minus(&mu)) < 1e-12);
        }
    }

    #[test]
    fn classes_are_tau_minus_stable() {
        let mut r = rng(7);
        for n in 2..=4 {
            for _ in 0..100 {
                let g = haar_sample(n, &mut r);
                let d = project_to_alcove(&tau_minus(&g)).distance(&project_to_alcove(&g));
                assert!(d < 1e-10);
            }
        }
    }

    #[test]
    fn form_reversal_on_su3() {
        let c = AlcovePoint::new(vec![1.1, 0.3, -1.4]).unwrap();
        let d = AlcovePoint::new(vec![0.9, -0.2, -0.7]).unwrap();
        let spec = SpaceSpec::class_product(vec![c, d]).unwrap();
        let mut r = rng(8);
        for _ in 0..5 {
            let x = sample_point(&spec, &mut r);
            assert!(form_reversal_residual(&spec, &x, 1e-5).unwrap() < 1e-5);
        }
    }

    #[test]
    fn hypotheses_on_su2_pair() {
        let spec = SpaceSpec::su2_classes(&[PI / 3.0, PI / 4.0]).unwrap();
        let report = validate_hypotheses(&spec, 50, &mut rng(9), &Tolerances::default(), &SolverConfig::default()).unwrap();
        assert!(report.residual_involutivity < 1e-10);
        assert!(report.residual_equivariance < 1e-10);
        assert!(report.residual_momentum_compat < 1e-10);
        assert!(report.residual_form_reversal < 1e-5, "{report:?}");
        assert!(report.fixed_points_found >= 4);
        assert_eq!(report.q0_certified, report.q0_checked);
        assert!(report.passes(&Tolerances::default()));
    }

    #[test]
    fn hypotheses_on_central_class() {
        let spec = SpaceSpec::class_product(vec![AlcovePoint::origin(2)]).unwrap();
        let report = validate_hypotheses(&spec, 20, &mut rng(10), &Tolerances::default(), &SolverConfig::default()).unwrap();
        assert_eq!(report.residual_involutivity, 0.0);
        assert_eq!(report.residual_momentum_compat, 0.0);
        assert_eq!(report.residual_form_reversal, 0.0);
        assert!(report.residual_equivariance < 1e-15);
    }

    #[test]
    fn single_factor_solver_is_exact() {
        let spec = SpaceSpec::su2_classes(&[1.3]).unwrap();
        let mut r = rng(11);
        for _ in 0..100 {
            let out = fixed_point_solve(&spec, None, &mut r, &SolverConfig::default(), 1e-8).unwrap();
            let u = &out.point().unwrap().factors()[0];
            assert!(u.distance(&u.transpose()) < 1e-12);
        }
    }

    #[test]
    fn solver_success_rate_su2() {
        let spec = SpaceSpec::su2_classes(&[PI / 3.0, PI / 4.0]).unwrap();
        let mut r = rng(12);
        let mut ok = 0;
        for _ in 0..100 {
            if let SolveOutcome::Fixed { point, .. } = fixed_point_solve(&spec, None, &mut r, &SolverConfig::default(), 1e-8).unwrap() {
                ok += 1;
                assert!(beta(&spec, &point).unwrap().distance(&point) < 1e-8);
                assert!(partial_product_asymmetry(&point) < 1e-8);
                assert!(point.class_defect(&spec) < 1e-8);
            }
        }
        assert!(ok >= 90, "{ok} successes");
    }

    #[test]
    fn solver_on_su3_three_classes() {
        let c = AlcovePoint::new(vec![1.1, 0.3, -1.4]).unwrap();
        let d = AlcovePoint::new(vec![0.9, -0.2, -0.7]).unwrap();
        let spec = SpaceSpec::class_product(vec![c.clone(), d, c]).unwrap();
        let mut r = rng(13);
        let mut ok = 0;
        for _ in 0..20 {
            if let SolveOutcome::Fixed { point, .. } = fixed_point_solve(&spec, None, &mut r, &SolverConfig::default(), 1e-8).unwrap() {
                ok += 1;
                assert!(partial_product_asymmetry(&point) < 1e-8);
            }
        }
        assert!(ok >= 18, "{ok} successes");
    }

    #[test]
    fn fixed_iff_partial_products_symmetric_on_perturbed_points() {
        let spec = SpaceSpec::su2_classes(&[0.9, 1.7]).unwrap();
        let mut r = rng(14);
        let out = fixed_point_solve(&spec, None, &mut r, &SolverConfig::default(), 1e-8).unwrap();
        let x = out.point().unwrap().clone();
        let g = exp_alg(&AlgebraElement::basis(2)[0].scale(1e-3));
        let mut factors = x.factors().to_vec();
        factors[1] = g.conjugate_by(&factors[1]);
        let y = QSpacePoint::from_factors_unchecked(factors);
        assert!(beta(&spec, &y).unwrap().distance(&y) > 1e-8);
        assert!(partial_product_asymmetry(&y) > 1e-8);
    }

    #[test]
    fn q0_examples() {
        assert!(q0_certificate(&GroupElement::identity(3)).unwrap());
        assert!(q0_certificate(&GroupElement::diagonal(&[2.5, 1.0, -3.5])).unwrap());
        let mut r = rng(15);
        for _ in 0..50 {
            let o = real_to_complex(&haar_sample_orthogonal(3, &mut r));
            let d = alcove_exp(&AlcovePoint::new(vec![2.0, 0.5, -2.5]).unwrap());
            let g = GroupElement::from_matrix_unchecked(&o * d.matrix() * o.transpose());
            assert!(q0_certificate(&g).unwrap());
        }
        let g = haar_sample(3, &mut r);
        assert!(matches!(q0_certificate(&g), Err(QhamError::NotSymmetric(_))));
    }

    #[test]
    fn q0_on_repeated_eigenvalues() {
        let mut r = rng(16);
        let o = real_to_complex(&haar_sample_orthogonal(4, &mut r));
        let d = GroupElement::diagonal(&[1.0, 1.0, -1.0, -1.0]);
        let g = GroupElement::from_matrix_unchecked(&o * d.matrix() * o.transpose());
        assert!(q0_certificate(&g).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn twisted_equivariance(seed in any::<u64>(), t1 in 0.05f64..3.0, t2 in 0.05f64..3.0) {
            let spec = SpaceSpec::su2_classes(&[t1, t2]).unwrap();
            let mut r = rng(seed);
            let x = sample_point(&spec, &mut r);
            let g = haar_sample(2, &mut r);
            let lhs = beta(&spec, &act(&spec, &g, &x).unwrap()).unwrap();
            let rhs = act(&spec, &tau(&g), &beta(&spec, &x).unwrap()).unwrap();
            prop_assert!(lhs.distance(&rhs) < 1e-12);
        }

        #[test]
        fn beta_is_involutive_su3(seed in any::<u64>()) {
            let c = AlcovePoint::new(vec![1.1, 0.3, -1.4]).unwrap();
            let spec = SpaceSpec::class_product(vec![c.clone(), c]).unwrap();
            let x = sample_point(&spec, &mut rng(seed));
            let bx = beta(&spec, &x).unwrap();
            prop_assert!(beta(&spec, &bx).unwrap().distance(&x) < 1e-12);
        }

        #[test]
        fn solver_outputs_satisfy_both_characterizations(seed in any::<u64>()) {
            let spec = SpaceSpec::su2_classes(&[0.8, 2.1, 1.4]).unwrap();
            let out = fixed_point_solve(&spec, None, &mut rng(seed), &SolverConfig::default(), 1e-8).unwrap();
            if let Some(x) = out.point() {
                prop_assert!(beta(&spec, x).unwrap().distance(x) < 1e-8);
                prop_assert!(partial_product_asymmetry(x) < 1e-8);
            }
        }
    }
}
