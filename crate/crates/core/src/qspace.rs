//! Concrete quasi-Hamiltonian SU(n)-spaces: fusion products of conjugacy
//! classes and the double `D(G) = G × G`.
//!
//! A fusion product `C_1 ⊛ … ⊛ C_l` is fused left-associatively. Its momentum
//! map is the ordered product `u_1⋯u_l` and its 2-form is
//!
//! ```text
//! ω = Σ_j ω_{C_j} + ½ Σ_{j≥2} (w_{j−1}*θ^L , u_j*θ^R)
//! ```
//!
//! with `w_j = u_1⋯u_j` the partial products and `(α, β)(v, w) =
//! (α(v) | β(w)) − (α(w) | β(v))`. On a single class at `u`, with
//! `v = Xu − uX` and `w = Yu − uY`, `ω(v, w) = ½((Ad_u − Ad_{u⁻¹})X | Y)`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QhamError, Result};
use crate::lie::{
    haar_sample, inner_unchecked, unitary_spectrum, AlgebraElement, CMatrix, GroupElement,
    TangentVector,
};
use crate::weyl::{alcove_exp, project_to_alcove, AlcovePoint, WALL_TOL};

const MEMBERSHIP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    ClassProduct,
    Double,
}

/// A quasi-Hamiltonian space: an ordered list of conjugacy classes, or the
/// double.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    kind: SpaceKind,
    n: usize,
    class_points: Vec<AlcovePoint>,
}

impl SpaceSpec {
    pub fn class_product(class_points: Vec<AlcovePoint>) -> Result<Self> {
        let first = class_points
            .first()
            .ok_or_else(|| QhamError::InvalidSpace("a class product needs at least one class".into()))?;
        let n = first.rank();
        if n < 2 {
            return Err(QhamError::RankTooSmall(n));
        }
        if let Some(bad) = class_points.iter().find(|p| p.rank() != n) {
            return Err(QhamError::RankMismatch {
                expected: n,
                found: bad.rank(),
            });
        }
        Ok(Self {
            kind: SpaceKind::ClassProduct,
            n,
            class_points,
        })
    }

    /// Fusion product of SU(2) classes `(θ_j, −θ_j)`.
    pub fn su2_classes(thetas: &[f64]) -> Result<Self> {
        let points = thetas.iter().map(|&t| AlcovePoint::su2(t)).collect::<Result<_>>()?;
        Self::class_product(points)
    }

    pub fn double(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(QhamError::RankTooSmall(n));
        }
        Ok(Self {
            kind: SpaceKind::Double,
            n,
            class_points: Vec::new(),
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn class_points(&self) -> &[AlcovePoint] {
        &self.class_points
    }

    pub fn factor_count(&self) -> usize {
        match self.kind {
            SpaceKind::ClassProduct => self.class_points.len(),
            SpaceKind::Double => 2,
        }
    }

    /// Real dimension of the space.
    pub fn dimension(&self) -> usize {
        match self.kind {
            SpaceKind::ClassProduct => self
                .class_points
                .iter()
                .map(crate::weyl::class_dimension)
                .sum(),
            SpaceKind::Double => 2 * (self.n * self.n - 1),
        }
    }
}

/// A point of a [`SpaceSpec`]: one group element per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct QSpacePoint {
    factors: Vec<GroupElement>,
}

impl QSpacePoint {
    /// Checks factor count, ranks and class membership.
    pub fn new(spec: &SpaceSpec, factors: Vec<GroupElement>) -> Result<Self> {
        if factors.len() != spec.factor_count() {
            return Err(QhamError::DimensionMismatch(spec.factor_count(), factors.len()));
        }
        for f in &factors {
            if f.rank() != spec.rank() {
                return Err(QhamError::RankMismatch {
                    expected: spec.rank(),
                    found: f.rank(),
                });
            }
        }
        let x = Self { factors };
        let defect = x.class_defect(spec);
        if defect > MEMBERSHIP_TOL {
            return Err(QhamError::InvalidSpace(format!(
                "factors leave their conjugacy classes (defect {defect:e})"
            )));
        }
        Ok(x)
    }

    pub fn from_factors_unchecked(factors: Vec<GroupElement>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[GroupElement] {
        &self.factors
    }

    /// Largest distance between a factor's alcove projection and its class
    /// point (0 for the double).
    pub fn class_defect(&self, spec: &SpaceSpec) -> f64 {
        match spec.kind {
            SpaceKind::Double => 0.0,
            SpaceKind::ClassProduct => self
                .factors
                .iter()
                .zip(&spec.class_points)
                .map(|(u, c)| project_to_alcove(u).distance(c))
                .fold(0.0, f64::max),
        }
    }

    /// Max-entry distance between corresponding factors.
    pub fn distance(&self, other: &QSpacePoint) -> f64 {
        self.factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

pub fn sample_point<R: Rng + ?Sized>(spec: &SpaceSpec, rng: &mut R) -> QSpacePoint {
    let factors = match spec.kind {
        SpaceKind::ClassProduct => spec
            .class_points
            .iter()
            .map(|c| haar_sample(spec.n, rng).conjugate_by(&alcove_exp(c)))
            .collect(),
        SpaceKind::Double => vec![haar_sample(spec.n, rng), haar_sample(spec.n, rng)],
    };
    QSpacePoint { factors }
}

/// Simultaneous conjugation of every factor.
pub fn act(spec: &SpaceSpec, g: &GroupElement, x: &QSpacePoint) -> Result<QSpacePoint> {
    if g.rank() != spec.rank() {
        return Err(QhamError::RankMismatch {
            expected: spec.rank(),
            found: g.rank(),
        });
    }
    Ok(QSpacePoint {
        factors: x.factors.iter().map(|u| g.conjugate_by(u)).collect(),
    })
}

/// `w_0 = 1, w_j = u_1⋯u_j`.
pub fn partial_products(x: &QSpacePoint) -> Vec<GroupElement> {
    let n = x.factors[0].rank();
    let mut out = Vec::with_capacity(x.factors.len() + 1);
    out.push(GroupElement::identity(n));
    for u in &x.factors {
        let next = out.last().unwrap().compose(u);
        out.push(next);
    }
    out
}

pub fn momentum(spec: &SpaceSpec, x: &QSpacePoint) -> GroupElement {
    match spec.kind {
        SpaceKind::ClassProduct => partial_products(x).pop().unwrap(),
        SpaceKind::Double => {
            let (a, b) = (&x.factors[0], &x.factors[1]);
            a.compose(b).compose(&a.inverse()).compose(&b.inverse())
        }
    }
}

/// Leibniz expansion of `dμ`.
pub fn momentum_differential(spec: &SpaceSpec, x: &QSpacePoint, v: &TangentVector) -> Result<TangentVector> {
    v.ensure_based_at(&x.factors)?;
    let mu = momentum(spec, x);
    let ambient = match spec.kind {
        SpaceKind::ClassProduct => {
            let l = x.factors.len();
            let w = partial_products(x);
            // suffix[j] = u_{j+1}⋯u_l
            let n = spec.n;
            let mut suffix = vec![CMatrix::identity(n, n); l + 1];
            for j in (0..l).rev() {
                suffix[j] = x.factors[j].matrix() * &suffix[j + 1];
            }
            let mut acc = CMatrix::zeros(n, n);
            for j in 0..l {
                acc += w[j].matrix() * v.block(j) * &suffix[j + 1];
            }
            acc
        }
        SpaceKind::Double => {
            let a = x.factors[0].matrix();
            let b = x.factors[1].matrix();
            let (ai, bi) = (a.adjoint(), b.adjoint());
            let (va, vb) = (v.block(0), v.block(1));
            va * b * &ai * &bi + a * vb * &ai * &bi
                - a * b * &ai * va * &ai * &bi
                - a * b * &ai * &bi * vb * &bi
        }
    };
    Ok(TangentVector::at(&mu, ambient))
}

/// Generating vector field `X♯_x = d/dt exp(tX)·x` of the conjugation action.
pub fn fundamental_vector(x: &QSpacePoint, generator: &AlgebraElement) -> TangentVector {
    let xm = generator.matrix();
    let ambient = x
        .factors
        .iter()
        .map(|u| xm * u.matrix() - u.matrix() * xm)
        .collect();
    TangentVector::new(x.factors.clone(), ambient).expect("blocks match factors")
}

/// Spectral data of one class factor used to lift tangent vectors `v` at `u`
/// to the generator `X ⊥ z(u)` with `Xu − uX = v`.
#[derive(Debug, Clone)]
struct ClassChart {
    u: CMatrix,
    u_inv: CMatrix,
    vectors: CMatrix,
    eigenvalues: Vec<Complex64>,
}

impl ClassChart {
    fn new(u: &GroupElement) -> Self {
        let spec = unitary_spectrum(u.matrix());
        let eigenvalues = spec.angles.iter().map(|&a| Complex64::from_polar(1.0, a)).collect();
        Self {
            u: u.matrix().clone(),
            u_inv: u.matrix().adjoint(),
            vectors: spec.vectors,
            eigenvalues,
        }
    }

    fn distinct(&self, a: usize, b: usize) -> bool {
        (self.eigenvalues[a] - self.eigenvalues[b]).norm() > WALL_TOL
    }

    /// Orthonormal basis of the orthogonal complement of the centralizer.
    fn complement_basis(&self) -> Vec<CMatrix> {
        let n = self.u.nrows();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = &self.vectors;
        let mut out = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if !self.distinct(a, b) {
                    continue;
                }
                let mut re = CMatrix::zeros(n, n);
                re[(a, b)] = Complex64::new(s, 0.0);
                re[(b, a)] = Complex64::new(-s, 0.0);
                let mut im = CMatrix::zeros(n, n);
                im[(a, b)] = Complex64::new(0.0, s);
                im[(b, a)] = Complex64::new(0.0, s);
                out.push(p * re * p.adjoint());
                out.push(p * im * p.adjoint());
            }
        }
        out
    }

    /// Generator in the centralizer complement whose fundamental vector is
    /// (the tangent part of) `v`.
    fn lift(&self, v: &CMatrix) -> CMatrix {
        let n = self.u.nrows();
        let p = &self.vectors;
        let vt = p.adjoint() * v * p;
        let mut xt = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                if a != b && self.distinct(a, b) {
                    xt[(a, b)] = vt[(a, b)] / (self.eigenvalues[b] - self.eigenvalues[a]);
                }
            }
        }
        AlgebraElement::project(&(p * xt * p.adjoint())).into_matrix()
    }

    /// `½((Ad_u − Ad_{u⁻¹})X | Y)` for the lifts of `v` and `w`.
    fn form(&self, v: &CMatrix, w: &CMatrix) -> f64 {
        let x = self.lift(v);
        let y = self.lift(w);
        let ad = &self.u * &x * &self.u_inv - &self.u_inv * &x * &self.u;
        0.5 * inner_unchecked(&ad, &y)
    }
}

/// Precomputed data for evaluating the 2-form repeatedly at one point.
#[derive(Debug, Clone)]
pub struct TwoForm {
    kind: SpaceKind,
    factors: Vec<GroupElement>,
    charts: Vec<ClassChart>,
}

impl TwoForm {
    pub fn at(spec: &SpaceSpec, x: &QSpacePoint) -> Self {
        let charts = match spec.kind {
            SpaceKind::ClassProduct => x.factors.iter().map(ClassChart::new).collect(),
            SpaceKind::Double => Vec::new(),
        };
        Self {
            kind: spec.kind,
            factors: x.factors.clone(),
            charts,
        }
    }

    pub fn eval(&self, v: &TangentVector, w: &TangentVector) -> Result<f64> {
        v.ensure_based_at(&self.factors)?;
        w.ensure_based_at(&self.factors)?;
        Ok(match self.kind {
            SpaceKind::ClassProduct => self.eval_fusion(v.ambient(), w.ambient()),
            SpaceKind::Double => self.eval_double(v.ambient(), w.ambient()),
        })
    }

    /// `θ^L` of the partial products along `v`, for `j = 0..l`, by
    /// `L_j = Ad_{u_j⁻¹} L_{j−1} + u_j⁻¹ v_j`.
    fn partial_left(&self, v: &[CMatrix]) -> Vec<CMatrix> {
        let n = self.factors[0].rank();
        let mut out = Vec::with_capacity(v.len() + 1);
        out.push(CMatrix::zeros(n, n));
        for (chart, vj) in self.charts.iter().zip(v) {
            let prev = out.last().unwrap();
            let next = &chart.u_inv * prev * &chart.u + &chart.u_inv * vj;
            out.push(next);
        }
        out
    }

    fn eval_fusion(&self, v: &[CMatrix], w: &[CMatrix]) -> f64 {
        let mut total: f64 = self
            .charts
            .iter()
            .zip(v.iter().zip(w))
            .map(|(c, (vj, wj))| c.form(vj, wj))
            .sum();
        let lv = self.partial_left(v);
        let lw = self.partial_left(w);
        for j in 1..self.charts.len() {
            let u_inv = &self.charts[j].u_inv;
            let rv = &v[j] * u_inv;
            let rw = &w[j] * u_inv;
            total += 0.5 * (inner_unchecked(&lv[j], &rw) - inner_unchecked(&lw[j], &rv));
        }
        total
    }

    fn eval_double(&self, v: &[CMatrix], w: &[CMatrix]) -> f64 {
        let a = self.factors[0].matrix();
        let b = self.factors[1].matrix();
        let (ai, bi) = (a.adjoint(), b.adjoint());
        let ab_inv = &bi * &ai;
        // c = a⁻¹b⁻¹, c⁻¹ = ba
        let c_inv = b * a;
        let pair = |f: &dyn Fn(&[CMatrix]) -> CMatrix, g: &dyn Fn(&[CMatrix]) -> CMatrix| {
            inner_unchecked(&f(v), &g(w)) - inner_unchecked(&f(w), &g(v))
        };
        let a_left = |t: &[CMatrix]| &ai * &t[0];
        let a_right = |t: &[CMatrix]| &t[0] * &ai;
        let b_left = |t: &[CMatrix]| &bi * &t[1];
        let b_right = |t: &[CMatrix]| &t[1] * &bi;
        let ab_left = |t: &[CMatrix]| &ab_inv * (&t[0] * b + a * &t[1]);
        let c_right = |t: &[CMatrix]| {
            let dc = -(&ai * &t[0] * &ai * &bi) - &ai * &bi * &t[1] * &bi;
            dc * &c_inv
        };
        0.5 * (pair(&a_left, &b_right) + pair(&a_right, &b_left) + pair(&ab_left, &c_right))
    }
}

pub fn two_form(spec: &SpaceSpec, x: &QSpacePoint, v: &TangentVector, w: &TangentVector) -> Result<f64> {
    TwoForm::at(spec, x).eval(v, w)
}

/// Basis of `T_x M`: per class factor, `Xu_j − u_jX` for `X` running over an
/// orthonormal basis of the centralizer complement of `u_j`; for the double,
/// left translates of an orthonormal basis of su(n) in each factor.
pub fn tangent_basis(spec: &SpaceSpec, x: &QSpacePoint) -> Vec<TangentVector> {
    let n = spec.n;
    let l = x.factors.len();
    let mut out = Vec::new();
    for (j, u) in x.factors.iter().enumerate() {
        let blocks: Vec<CMatrix> = match spec.kind {
            SpaceKind::ClassProduct => ClassChart::new(u)
                .complement_basis()
                .into_iter()
                .map(|e| &e * u.matrix() - u.matrix() * &e)
                .collect(),
            SpaceKind::Double => AlgebraElement::basis(n)
                .into_iter()
                .map(|e| u.matrix() * e.matrix())
                .collect(),
        };
        for b in blocks {
            let mut ambient = vec![CMatrix::zeros(n, n); l];
            ambient[j] = b;
            out.push(TangentVector::new(x.factors.clone(), ambient).expect("blocks match factors"));
        }
    }
    out
}
