//! Type A_{n−1} root data, the Weyl alcove in eigen-angle coordinates, the
//! projection of SU(n) onto its fundamental domain `exp(W̄)`, and face analysis.
//!
//! Alcove coordinates are raw eigen-angles `λ_1 ≥ … ≥ λ_n`, `Σλ = 0`,
//! `λ_1 − λ_n ≤ 2π`. The normalized alcove (highest root pairing at most 1) is
//! obtained by dividing by 2π.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{QhamError, Result};
use crate::lie::{branch_adjust, unitary_spectrum, GroupElement};

/// Default distance below which a point lies on a wall.
pub const WALL_TOL: f64 = 1e-7;
const POINT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem {
    pub n: usize,
    pub simple_roots: Vec<Vec<f64>>,
    pub positive_roots: Vec<Vec<f64>>,
    pub highest_root: Vec<f64>,
}

fn root(n: usize, i: usize, j: usize) -> Vec<f64> {
    let mut r = vec![0.0; n];
    r[i] = 1.0;
    r[j] = -1.0;
    r
}

/// Roots `e_i − e_j` of SU(n), simple ones `e_i − e_{i+1}`.
pub fn build_root_system(n: usize) -> Result<RootSystem> {
    if n < 2 {
        return Err(QhamError::RankTooSmall(n));
    }
    let simple_roots = (0..n - 1).map(|i| root(n, i, i + 1)).collect();
    let positive_roots = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| root(n, i, j)))
        .collect();
    Ok(RootSystem {
        n,
        simple_roots,
        positive_roots,
        highest_root: root(n, 0, n - 1),
    })
}

impl RootSystem {
    /// Expansion of a root in simple roots; `None` if not an integer combination.
    pub fn simple_coefficients(&self, r: &[f64]) -> Option<Vec<i64>> {
        // e_i − e_j = α_i + … + α_{j−1}: the coefficient of α_k is the partial sum.
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.n - 1);
        for x in r.iter().take(self.n - 1) {
            acc += x;
            let k = acc.round();
            if (acc - k).abs() > 1e-12 {
                return None;
            }
            out.push(k as i64);
        }
        Some(out)
    }
}

/// Conjugation invariant of an SU(n) element: a point of the closed alcove.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlcovePoint {
    angles: Vec<f64>,
}

impl AlcovePoint {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        let n = angles.len();
        if n < 2 {
            return Err(QhamError::RankTooSmall(n));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(QhamError::InvalidAlcovePoint("non-finite angle".into()));
        }
        if angles.windows(2).any(|w| w[0] < w[1] - POINT_TOL) {
            return Err(QhamError::InvalidAlcovePoint(format!(
                "angles {angles:?} are not descending"
            )));
        }
        let sum: f64 = angles.iter().sum();
        if sum.abs() > POINT_TOL {
            return Err(QhamError::InvalidAlcovePoint(format!("angle sum {sum:e} is not zero")));
        }
        if angles[0] - angles[n - 1] > 2.0 * PI + POINT_TOL {
            return Err(QhamError::InvalidAlcovePoint(format!(
                "spread {} exceeds 2π",
                angles[0] - angles[n - 1]
            )));
        }
        Ok(Self { angles })
    }

    /// Sorts descending and removes the mean. Returns the point and whether
    /// the input needed either fix. The spread condition is still enforced.
    pub fn normalized(mut angles: Vec<f64>) -> Result<(Self, bool)> {
        let n = angles.len().max(1) as f64;
        let mut changed = false;
        if angles.windows(2).any(|w| w[0] < w[1]) {
            angles.sort_by(|a, b| b.total_cmp(a));
            changed = true;
        }
        let mean = angles.iter().sum::<f64>() / n;
        if mean.abs() > POINT_TOL {
            changed = true;
        }
        for a in &mut angles {
            *a -= mean;
        }
        Ok((Self::new(angles)?, changed))
    }

    /// The origin, i.e. the class of the identity.
    pub fn origin(n: usize) -> Self {
        Self { angles: vec![0.0; n] }
    }

    /// SU(2) class `(θ, −θ)`.
    pub fn su2(theta: f64) -> Result<Self> {
        Self::new(vec![theta, -theta])
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn rank(&self) -> usize {
        self.angles.len()
    }

    /// Orthonormal coordinates in the zero-sum hyperplane (see
    /// [`hyperplane_basis`]).
    pub fn embed(&self) -> Vec<f64> {
        embed_angles(&self.angles)
    }

    pub fn distance(&self, other: &AlcovePoint) -> f64 {
        self.angles
            .iter()
            .zip(&other.angles)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Helmert basis `(1,…,1,−k,0,…,0)/√(k(k+1))`, `k = 1..n−1`, of the zero-sum
/// hyperplane of ℝⁿ.
pub fn hyperplane_basis(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let s = 1.0 / ((k * (k + 1)) as f64).sqrt();
            let mut v = vec![0.0; n];
            for x in v.iter_mut().take(k) {
                *x = s;
            }
            v[k] = -(k as f64) * s;
            v
        })
        .collect()
}

pub fn embed_angles(angles: &[f64]) -> Vec<f64> {
    hyperplane_basis(angles.len())
        .iter()
        .map(|b| b.iter().zip(angles).map(|(x, y)| x * y).sum())
        .collect()
}

/// Inverse of [`embed_angles`].
pub fn unembed(coords: &[f64]) -> Vec<f64> {
    let n = coords.len() + 1;
    let mut out = vec![0.0; n];
    for (c, b) in coords.iter().zip(hyperplane_basis(n)) {
        for (o, x) in out.iter_mut().zip(b) {
            *o += c * x;
        }
    }
    out
}

/// The map `G → G/Int(G) ≅ W̄`.
pub fn project_to_alcove(g: &GroupElement) -> AlcovePoint {
    let mut angles = unitary_spectrum(g.matrix()).angles;
    branch_adjust(&mut angles);
    angles.sort_by(|a, b| b.total_cmp(a));
    // Remove rounding drift of the sum; the branch rule guarantees it is ~0.
    let mean = angles.iter().sum::<f64>() / angles.len() as f64;
    for a in &mut angles {
        *a -= mean;
    }
    AlcovePoint { angles }
}

/// Diagonal representative `diag(e^{iλ_1}, …, e^{iλ_n})`.
pub fn alcove_exp(p: &AlcovePoint) -> GroupElement {
    GroupElement::diagonal(&p.angles)
}

/// Vertices of the closed alcove: `k` leading entries `2π(n−k)/n`, the rest
/// `−2πk/n`, for `k = 0..n−1`.
pub fn alcove_vertices(n: usize) -> Vec<AlcovePoint> {
    (0..n)
        .map(|k| {
            let hi = 2.0 * PI * (n - k) as f64 / n as f64;
            let lo = -2.0 * PI * k as f64 / n as f64;
            let angles = (0..n).map(|i| if i < k { hi } else { lo }).collect();
            AlcovePoint { angles }
        })
        .collect()
}

/// Active walls of a face of the alcove. Simple wall `i` is `λ_i = λ_{i+1}`
/// (0-based), the affine wall is `λ_1 − λ_n = 2π`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceId {
    pub simple: BTreeSet<usize>,
    pub affine: bool,
}

impl FaceId {
    pub fn interior() -> Self {
        Self {
            simple: BTreeSet::new(),
            affine: false,
        }
    }

    pub fn wall_count(&self) -> usize {
        self.simple.len() + usize::from(self.affine)
    }

    pub fn is_interior(&self) -> bool {
        self.wall_count() == 0
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut labels: Vec<String> = self.simple.iter().map(|i| format!("a{}", i + 1)).collect();
        if self.affine {
            labels.push("a0".into());
        }
        write!(f, "{{{}}}", labels.join(","))
    }
}

pub fn face_signature(p: &AlcovePoint, tol: f64) -> FaceId {
    let a = &p.angles;
    let n = a.len();
    let simple = (0..n - 1).filter(|&i| a[i] - a[i + 1] < tol).collect();
    FaceId {
        simple,
        affine: a[0] - a[n - 1] > 2.0 * PI - tol,
    }
}

/// Sizes of the eigenvalue clusters of `alcove_exp(p)`, with the identification
/// `λ_1 ≡ λ_n + 2π` on the affine wall.
pub fn eigenvalue_clusters(p: &AlcovePoint, tol: f64) -> Vec<usize> {
    let a = &p.angles;
    let n = a.len();
    let mut clusters = vec![1usize];
    for i in 0..n - 1 {
        if a[i] - a[i + 1] < tol {
            *clusters.last_mut().unwrap() += 1;
        } else {
            clusters.push(1);
        }
    }
    if clusters.len() > 1 && a[0] - a[n - 1] > 2.0 * PI - tol {
        let last = clusters.pop().unwrap();
        clusters[0] += last;
    }
    clusters
}

/// Dimension of the conjugacy class `n² − Σ m_j²` (clusters at the default
/// wall tolerance).
pub fn class_dimension(p: &AlcovePoint) -> usize {
    class_dimension_with_tol(p, WALL_TOL)
}

pub fn class_dimension_with_tol(p: &AlcovePoint, tol: f64) -> usize {
    let n = p.rank();
    let sq: usize = eigenvalue_clusters(p, tol).iter().map(|m| m * m).sum();
    n * n - sq
}

/// Face carrying the sampled momentum values of maximal class dimension.
/// Two distinct faces sharing that dimension are reported, not resolved.
pub fn principal_face(points: &[AlcovePoint], tol: f64) -> Result<FaceId> {
    if points.is_empty() {
        return Err(QhamError::EmptyBatch);
    }
    let dims: Vec<usize> = points.iter().map(|p| class_dimension_with_tol(p, tol)).collect();
    let best = *dims.iter().max().unwrap();
    let faces: BTreeSet<FaceId> = points
        .iter()
        .zip(&dims)
        .filter(|(_, &d)| d == best)
        .map(|(p, _)| face_signature(p, tol))
        .collect();
    let mut it = faces.into_iter();
    let first = it.next().unwrap();
    match it.next() {
        None => Ok(first),
        Some(second) => Err(QhamError::AmbiguousFace {
            first: first.to_string(),
            second: second.to_string(),
            dimension: best,
        }),
    }
}
