//! Numerics for the compact group SU(n) and its Lie algebra su(n).
//!
//! Elements are stored as dense complex matrices. The invariant inner product
//! on su(n) is `(X | Y) = -tr(XY)`, with no further normalization, so that the
//! SU(2) alcove has length π in eigen-angle coordinates.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{QhamError, Result};

pub type CMatrix = DMatrix<Complex64>;

const GROUP_TOL: f64 = 1e-10;
const ALGEBRA_TOL: f64 = 1e-12;
const BASE_TOL: f64 = 1e-10;
/// Eigenvalues closer than this to -1 make the principal logarithm ambiguous.
const BRANCH_TOL: f64 = 1e-8;

/// Largest entry modulus of a complex matrix.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

fn check_rank(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(QhamError::RankMismatch { expected, found })
    }
}

/// A point of SU(n).
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    m: CMatrix,
}

impl GroupElement {
    /// Validates unitarity and unit determinant within 1e-10.
    pub fn new(m: CMatrix) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(QhamError::NotInGroup {
                n,
                reason: format!("{}x{} matrix is not square", n, m.ncols()),
            });
        }
        let unitarity = max_abs_diff(&(m.adjoint() * &m), &CMatrix::identity(n, n));
        if unitarity >= GROUP_TOL {
            return Err(QhamError::NotInGroup {
                n,
                reason: format!("unitarity defect {unitarity:e}"),
            });
        }
        let det = m.determinant();
        if (det - Complex64::new(1.0, 0.0)).norm() >= GROUP_TOL {
            return Err(QhamError::NotInGroup {
                n,
                reason: format!("determinant {det}"),
            });
        }
        Ok(Self { m })
    }

    pub fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: CMatrix::identity(n, n),
        }
    }

    /// Diagonal element `diag(e^{iθ_1}, …, e^{iθ_n})`; the angles should sum to
    /// a multiple of 2π.
    pub fn diagonal(angles: &[f64]) -> Self {
        let n = angles.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &a) in angles.iter().enumerate() {
            m[(i, i)] = Complex64::from_polar(1.0, a);
        }
        Self { m }
    }

    pub fn rank(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn inverse(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Self {
            m: self.m.map(|z| z.conj()),
        }
    }

    /// `self · other`; panics on rank mismatch like the underlying matrices.
    pub fn compose(&self, other: &GroupElement) -> Self {
        Self {
            m: &self.m * &other.m,
        }
    }

    /// `self · other · self⁻¹`.
    pub fn conjugate_by(&self, other: &GroupElement) -> Self {
        Self {
            m: &self.m * &other.m * self.m.adjoint(),
        }
    }

    /// Max-entry distance to another element.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        max_abs_diff(&self.m, &other.m)
    }

    /// Max-entry residual of `g†g = 1` and `det g = 1`.
    pub fn group_defect(&self) -> f64 {
        let n = self.rank();
        let unitarity = max_abs_diff(&(self.m.adjoint() * &self.m), &CMatrix::identity(n, n));
        let det = (self.m.determinant() - Complex64::new(1.0, 0.0)).norm();
        unitarity.max(det)
    }
}

/// A point of su(n): an anti-Hermitian traceless matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    m: CMatrix,
}

impl AlgebraElement {
    /// Validates anti-Hermitian and traceless within 1e-12.
    pub fn new(m: CMatrix) -> Result<Self> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(QhamError::NotInAlgebra {
                n,
                reason: "matrix is not square".into(),
            });
        }
        let herm = max_abs(&(&m + m.adjoint()));
        if herm >= ALGEBRA_TOL {
            return Err(QhamError::NotInAlgebra {
                n,
                reason: format!("anti-Hermitian defect {herm:e}"),
            });
        }
        let tr = m.trace().norm();
        if tr >= ALGEBRA_TOL {
            return Err(QhamError::NotInAlgebra {
                n,
                reason: format!("trace {tr:e}"),
            });
        }
        Ok(Self { m })
    }

    pub fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    /// Orthogonal projection of an arbitrary square matrix onto su(n).
    pub fn project(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut a = (m - m.adjoint()).scale(0.5);
        let shift = a.trace() / Complex64::new(n as f64, 0.0);
        for i in 0..n {
            a[(i, i)] -= shift;
        }
        Self { m: a }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            m: CMatrix::zeros(n, n),
        }
    }

    /// `diag(iθ_1, …, iθ_n)`; the angles should sum to zero.
    pub fn diagonal(angles: &[f64]) -> Self {
        let n = angles.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &a) in angles.iter().enumerate() {
            m[(i, i)] = Complex64::new(0.0, a);
        }
        Self { m }
    }

    /// Orthonormal basis of su(n) for `(X | Y) = -tr(XY)`: the real and
    /// imaginary off-diagonal generators, then the generalized Gell-Mann
    /// diagonal ones. Its length is `n² - 1`.
    pub fn basis(n: usize) -> Vec<AlgebraElement> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::with_capacity(n * n - 1);
        for a in 0..n {
            for b in (a + 1)..n {
                let mut re = CMatrix::zeros(n, n);
                re[(a, b)] = Complex64::new(s, 0.0);
                re[(b, a)] = Complex64::new(-s, 0.0);
                out.push(Self { m: re });
                let mut im = CMatrix::zeros(n, n);
                im[(a, b)] = Complex64::new(0.0, s);
                im[(b, a)] = Complex64::new(0.0, s);
                out.push(Self { m: im });
            }
        }
        for k in 1..n {
            let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
            let mut d = CMatrix::zeros(n, n);
            for i in 0..k {
                d[(i, i)] = Complex64::new(0.0, norm);
            }
            d[(k, k)] = Complex64::new(0.0, -(k as f64) * norm);
            out.push(Self { m: d });
        }
        out
    }

    /// Coordinates in [`AlgebraElement::basis`].
    pub fn coordinates(&self) -> Vec<f64> {
        Self::basis(self.rank())
            .iter()
            .map(|e| inner_unchecked(&self.m, &e.m))
            .collect()
    }

    pub fn from_coordinates(n: usize, coords: &[f64]) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for (c, e) in coords.iter().zip(Self::basis(n)) {
            m += e.m.scale(*c);
        }
        Self { m }
    }

    pub fn rank(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { m: self.m.scale(s) }
    }

    pub fn add(&self, other: &AlgebraElement) -> Self {
        Self {
            m: &self.m + &other.m,
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> Self {
        Self {
            m: &self.m - &other.m,
        }
    }

    pub fn norm(&self) -> f64 {
        inner_unchecked(&self.m, &self.m).max(0.0).sqrt()
    }

    /// Max-entry residual of the anti-Hermitian traceless conditions.
    pub fn algebra_defect(&self) -> f64 {
        max_abs(&(&self.m + self.m.adjoint())).max(self.m.trace().norm())
    }
}

/// A tangent vector to a product of copies of SU(n), one ambient block per
/// factor. A single group element is the one-factor case.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Vec<GroupElement>,
    ambient: Vec<CMatrix>,
}

impl TangentVector {
    pub fn new(base: Vec<GroupElement>, ambient: Vec<CMatrix>) -> Result<Self> {
        if base.len() != ambient.len() {
            return Err(QhamError::DimensionMismatch(base.len(), ambient.len()));
        }
        for (g, a) in base.iter().zip(&ambient) {
            check_rank(g.rank(), a.nrows())?;
        }
        Ok(Self { base, ambient })
    }

    /// Tangent vector at a single group element.
    pub fn at(g: &GroupElement, ambient: CMatrix) -> Self {
        Self {
            base: vec![g.clone()],
            ambient: vec![ambient],
        }
    }

    /// `g·X`, the left translate of `X` to `g`.
    pub fn left_translate(g: &GroupElement, x: &AlgebraElement) -> Self {
        Self::at(g, g.matrix() * x.matrix())
    }

    pub fn zero(base: &[GroupElement]) -> Self {
        let ambient = base
            .iter()
            .map(|g| CMatrix::zeros(g.rank(), g.rank()))
            .collect();
        Self {
            base: base.to_vec(),
            ambient,
        }
    }

    pub fn base(&self) -> &[GroupElement] {
        &self.base
    }

    pub fn ambient(&self) -> &[CMatrix] {
        &self.ambient
    }

    pub fn block(&self, j: usize) -> &CMatrix {
        &self.ambient[j]
    }

    pub fn is_based_at(&self, base: &[GroupElement]) -> bool {
        self.base.len() == base.len()
            && self
                .base
                .iter()
                .zip(base)
                .all(|(a, b)| a.rank() == b.rank() && a.distance(b) < BASE_TOL)
    }

    pub fn ensure_based_at(&self, base: &[GroupElement]) -> Result<()> {
        if self.is_based_at(base) {
            Ok(())
        } else {
            Err(QhamError::BaseMismatch)
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            base: self.base.clone(),
            ambient: self.ambient.iter().map(|a| a.scale(s)).collect(),
        }
    }

    /// Sum of two vectors at the same base (the base of `self` is kept).
    pub fn add(&self, other: &TangentVector) -> Result<Self> {
        other.ensure_based_at(&self.base)?;
        Ok(Self {
            base: self.base.clone(),
            ambient: self
                .ambient
                .iter()
                .zip(&other.ambient)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Real coordinates of all blocks, stacked (real parts then imaginary parts
    /// per entry).
    pub fn to_real_vector(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for a in &self.ambient {
            for z in a.iter() {
                out.push(z.re);
                out.push(z.im);
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.ambient.iter().fold(0.0, |acc, a| acc.max(max_abs(a)))
    }
}

pub(crate) fn inner_unchecked(x: &CMatrix, y: &CMatrix) -> f64 {
    // -tr(XY) without forming the product.
    let n = x.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += x[(i, k)] * y[(k, i)];
        }
    }
    -acc.re
}

/// The invariant inner product `(X | Y) = -tr(XY)`.
pub fn inner(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    check_rank(x.rank(), y.rank())?;
    Ok(inner_unchecked(&x.m, &y.m))
}

/// `[X, Y] = XY - YX`.
pub fn bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    check_rank(x.rank(), y.rank())?;
    Ok(AlgebraElement {
        m: &x.m * &y.m - &y.m * &x.m,
    })
}

/// `Ad_g X = g X g⁻¹`.
pub fn adjoint(g: &GroupElement, x: &AlgebraElement) -> Result<AlgebraElement> {
    check_rank(g.rank(), x.rank())?;
    Ok(AlgebraElement {
        m: &g.m * &x.m * g.m.adjoint(),
    })
}

/// The Cartan 3-form at the identity, `χ(X, Y, Z) = ([X, Y] | Z)`.
pub fn cartan_three_form(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<f64> {
    check_rank(x.rank(), z.rank())?;
    inner(&bracket(x, y)?, z)
}

/// Matrix exponential of an anti-Hermitian matrix, computed through the
/// Hermitian eigendecomposition of `-iX` so that the result is unitary to
/// rounding.
pub fn exp_alg(x: &AlgebraElement) -> GroupElement {
    GroupElement {
        m: exp_anti_hermitian(&x.m),
    }
}

pub(crate) fn exp_anti_hermitian(x: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let h = x.map(|z| Complex64::new(z.im, -z.re)); // -iX
    let h = (&h + h.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    let mut d = CMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex64::from_polar(1.0, eig.eigenvalues[i]);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Spectral data of a unitary matrix: principal eigen-angles in (−π, π] and
/// a unitary whose columns are the matching eigenvectors, sorted by angle
/// descending (ties by the real part of the first eigenvector component).
#[derive(Debug, Clone)]
pub struct UnitarySpectrum {
    pub angles: Vec<f64>,
    pub vectors: CMatrix,
}

pub fn unitary_spectrum(m: &CMatrix) -> UnitarySpectrum {
    let n = m.nrows();
    let (q, t) = m.clone().schur().unpack();
    let mut order: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let mut a = t[(i, i)].arg();
            if a <= -PI {
                a += 2.0 * PI;
            }
            (a, q[(0, i)].re, i)
        })
        .collect();
    order.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal))
    });
    let angles = order.iter().map(|o| o.0).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| q[(r, order[c].2)]);
    UnitarySpectrum { angles, vectors }
}

/// Shifts descending principal angles by multiples of 2π so that they sum to
/// zero: 2π is subtracted from the largest angles (or added to the smallest)
/// as many times as the sum has full turns. Returns the adjusted angles in
/// the input order.
pub(crate) fn branch_adjust(angles: &mut [f64]) {
    let n = angles.len();
    let sum: f64 = angles.iter().sum();
    let turns = (sum / (2.0 * PI)).round() as i64;
    if turns > 0 {
        for a in angles.iter_mut().take((turns as usize).min(n)) {
            *a -= 2.0 * PI;
        }
    } else if turns < 0 {
        for a in angles.iter_mut().rev().take(((-turns) as usize).min(n)) {
            *a += 2.0 * PI;
        }
    }
}

/// Result of the principal logarithm with its branch-ambiguity flag.
#[derive(Debug, Clone)]
pub struct Logarithm {
    pub value: AlgebraElement,
    /// Set when an eigenvalue sits at −1, where the branch choice is a
    /// convention rather than a continuous function of the input.
    pub ill_conditioned: bool,
}

/// Principal logarithm with the branch convention of [`branch_adjust`].
pub fn log_group(g: &GroupElement) -> AlgebraElement {
    log_group_flagged(g).value
}

pub fn log_group_flagged(g: &GroupElement) -> Logarithm {
    let n = g.rank();
    let spec = unitary_spectrum(&g.m);
    let ill_conditioned = spec.angles.iter().any(|a| (a.abs() - PI).abs() < BRANCH_TOL);
    let mut angles = spec.angles.clone();
    branch_adjust(&mut angles);
    let mut d = CMatrix::zeros(n, n);
    for (i, a) in angles.iter().enumerate() {
        d[(i, i)] = Complex64::new(0.0, *a);
    }
    let m = &spec.vectors * d * spec.vectors.adjoint();
    Logarithm {
        value: AlgebraElement::project(&m),
        ill_conditioned,
    }
}

/// Left Maurer–Cartan form `θ^L_g(ξ) = g⁻¹ξ`.
pub fn maurer_cartan_left(g: &GroupElement, xi: &TangentVector) -> Result<AlgebraElement> {
    xi.ensure_based_at(std::slice::from_ref(g))?;
    Ok(AlgebraElement {
        m: g.m.adjoint() * &xi.ambient[0],
    })
}

/// Right Maurer–Cartan form `θ^R_g(ξ) = ξg⁻¹`.
pub fn maurer_cartan_right(g: &GroupElement, xi: &TangentVector) -> Result<AlgebraElement> {
    xi.ensure_based_at(std::slice::from_ref(g))?;
    Ok(AlgebraElement {
        m: &xi.ambient[0] * g.m.adjoint(),
    })
}

/// Haar-distributed element of SU(n): Ginibre matrix, QR with the phases of
/// `R`'s diagonal pushed into `Q`, then rescaled by an n-th root of the
/// determinant.
pub fn haar_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> GroupElement {
    assert!(n >= 1, "rank must be positive");
    let z = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let (q, r) = z.qr().unpack();
    let mut q = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    let det = q.determinant();
    let root = Complex64::from_polar(1.0, -det.arg() / n as f64);
    GroupElement { m: q.map(|z| z * root) }
}

/// Haar-distributed element of SO(n), viewed as a real matrix.
pub fn haar_sample_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let z = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let (mut q, r) = z.qr().unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

pub(crate) fn real_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}
