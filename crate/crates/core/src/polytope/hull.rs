//! Convex hulls of point sets of intrinsic dimension at most 3.
//!
//! Points are first reduced to their affine hull (greedy orthonormal frame),
//! then hulled in local coordinates: interval, monotone chain or incremental
//! 3D hull. Facets are reported in ambient coordinates, with pairs of
//! opposite half-spaces pinning the complement of the affine hull.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{QhamError, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Half-space `normal · x ≤ offset` with unit normal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Facet {
    pub fn slack(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// Orthonormal frame of an affine subspace.
#[derive(Debug, Clone, PartialEq)]
struct Frame {
    origin: Vec<f64>,
    axes: Vec<Vec<f64>>,
}

impl Frame {
    fn local(&self, p: &[f64]) -> Vec<f64> {
        let q = sub(p, &self.origin);
        self.axes.iter().map(|a| dot(a, &q)).collect()
    }

    fn global(&self, c: &[f64]) -> Vec<f64> {
        let mut out = self.origin.clone();
        for (a, x) in self.axes.iter().zip(c) {
            for (o, ai) in out.iter_mut().zip(a) {
                *o += x * ai;
            }
        }
        out
    }

    fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut r = v.to_vec();
        for a in &self.axes {
            let c = dot(a, &r);
            for (ri, ai) in r.iter_mut().zip(a) {
                *ri -= c * ai;
            }
        }
        r
    }

    /// Greedy frame: repeatedly adds the point farthest from the current
    /// affine span while that distance exceeds `tol`. Returns the frame and
    /// the indices of the spanning points.
    fn fit(points: &[Vec<f64>], tol: f64) -> (Self, Vec<usize>) {
        let mut frame = Frame {
            origin: points[0].clone(),
            axes: Vec::new(),
        };
        let mut chosen = vec![0];
        let d = points[0].len();
        while frame.axes.len() < d {
            let (best, dist) = points
                .iter()
                .enumerate()
                .map(|(i, p)| (i, norm(&frame.residual(&sub(p, &frame.origin)))))
                .fold((0, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if dist <= tol {
                break;
            }
            let r = frame.residual(&sub(&points[best], &frame.origin));
            let r = frame.residual(&r);
            let len = norm(&r);
            frame.axes.push(r.iter().map(|x| x / len).collect());
            chosen.push(best);
        }
        (frame, chosen)
    }

    fn complement(&self) -> Vec<Vec<f64>> {
        let d = self.origin.len();
        let mut extended = self.clone();
        let mut out = Vec::new();
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            let r = extended.residual(&e);
            let r = extended.residual(&r);
            let len = norm(&r);
            if len > 1e-6 {
                let unit: Vec<f64> = r.iter().map(|x| x / len).collect();
                extended.axes.push(unit.clone());
                out.push(unit);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hull {
    dim: usize,
    ambient: usize,
    vertices: Vec<Vec<f64>>,
    facets: Vec<Facet>,
    #[serde(skip)]
    frame: Frame,
    #[serde(skip)]
    local_facets: Vec<Facet>,
    /// Boundary simplices in local coordinates (endpoints, edges or
    /// triangles).
    #[serde(skip)]
    boundary: Vec<Vec<Vec<f64>>>,
    #[serde(skip)]
    tol: f64,
}

impl Hull {
    /// Hull of `points` (all of one dimension ≤ 3); `tol` is scaled by the
    /// point-set diameter when that exceeds 1.
    pub fn from_points(points: &[Vec<f64>], tol: f64) -> Result<Self> {
        let first = points.first().ok_or(QhamError::EmptyBatch)?;
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(QhamError::InvalidSpace("points of mixed dimension".into()));
        }
        let extent = points
            .iter()
            .map(|p| norm(&sub(p, first)))
            .fold(0.0, f64::max);
        let tol = tol * extent.max(1.0);
        let (frame, chosen) = Frame::fit(points, tol);
        let dim = frame.axes.len();
        if dim > 3 {
            return Err(QhamError::Unsupported(format!(
                "convex hulls of intrinsic dimension {dim}"
            )));
        }
        let local: Vec<Vec<f64>> = points.iter().map(|p| frame.local(p)).collect();
        let (local_vertices, local_facets, boundary) = match dim {
            0 => (vec![Vec::new()], Vec::new(), Vec::new()),
            1 => interval(&local),
            2 => monotone_chain(&local, tol),
            _ => incremental_3d(&local, &chosen, tol),
        };
        let mut facets: Vec<Facet> = local_facets
            .iter()
            .map(|f| {
                let normal = frame.global(&f.normal);
                let normal = sub(&normal, &frame.origin);
                let offset = f.offset + dot(&normal, &frame.origin);
                Facet { normal, offset }
            })
            .collect();
        for c in frame.complement() {
            let o = dot(&c, &frame.origin);
            facets.push(Facet {
                normal: c.iter().map(|x| -x).collect(),
                offset: -o,
            });
            facets.push(Facet { normal: c, offset: o });
        }
        let vertices = local_vertices.iter().map(|v| frame.global(v)).collect();
        Ok(Self {
            dim,
            ambient,
            vertices,
            facets,
            frame,
            local_facets,
            boundary,
            tol,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Extreme points; counter-clockwise in the affine plane when `dim = 2`.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Scaled tolerance used while building the hull.
    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.facets.iter().all(|f| f.slack(x) >= -tol)
    }

    /// Coordinates in the orthonormal frame of the affine hull.
    pub fn to_local(&self, x: &[f64]) -> Vec<f64> {
        self.frame.local(x)
    }

    /// Facets in local coordinates (`dim` entries per normal).
    pub fn local_facets(&self) -> &[Facet] {
        &self.local_facets
    }

    /// Euclidean distance from `x` to the hull.
    pub fn distance(&self, x: &[f64]) -> f64 {
        let q = sub(x, &self.frame.origin);
        let local = self.frame.local(x);
        let orth2 = if self.dim == self.ambient {
            0.0
        } else {
            let r = self.frame.residual(&q);
            dot(&r, &r)
        };
        let inside = self.local_facets.iter().all(|f| f.slack(&local) >= 0.0);
        let d_local = if inside {
            0.0
        } else {
            self.boundary
                .iter()
                .map(|s| simplex_distance(&local, s))
                .fold(f64::INFINITY, f64::min)
        };
        (orth2 + d_local * d_local).sqrt()
    }
}

fn simplex_distance(p: &[f64], s: &[Vec<f64>]) -> f64 {
    match s.len() {
        1 => norm(&sub(p, &s[0])),
        2 => segment_distance(p, &s[0], &s[1]),
        _ => triangle_distance(p, &s[0], &s[1], &s[2]),
    }
}

fn segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(&ab, &ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        (dot(&sub(p, a), &ab) / len2).clamp(0.0, 1.0)
    };
    let closest: Vec<f64> = a.iter().zip(&ab).map(|(x, y)| x + t * y).collect();
    norm(&sub(p, &closest))
}

/// Closest-point distance to a triangle in ℝ³ (Voronoi-region case split).
fn triangle_distance(p: &[f64], a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(&ab, &ap);
    let d2 = dot(&ac, &ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return norm(&ap);
    }
    let bp = sub(p, b);
    let d3 = dot(&ab, &bp);
    let d4 = dot(&ac, &bp);
    if d3 >= 0.0 && d4 <= d3 {
        return norm(&bp);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        return segment_distance(p, a, b);
    }
    let cp = sub(p, c);
    let d5 = dot(&ab, &cp);
    let d6 = dot(&ac, &cp);
    if d6 >= 0.0 && d5 <= d6 {
        return norm(&cp);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        return segment_distance(p, a, c);
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0 {
        return segment_distance(p, b, c);
    }
    let n = cross(&ab, &ac);
    (dot(&n, &ap) / norm(&n)).abs()
}

type LocalHull = (Vec<Vec<f64>>, Vec<Facet>, Vec<Vec<Vec<f64>>>);

fn interval(local: &[Vec<f64>]) -> LocalHull {
    let lo = local.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = local.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    (
        vec![vec![lo], vec![hi]],
        vec![
            Facet { normal: vec![-1.0], offset: -lo },
            Facet { normal: vec![1.0], offset: hi },
        ],
        vec![vec![vec![lo]], vec![vec![hi]]],
    )
}

fn turn(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn monotone_chain(local: &[Vec<f64>], tol: f64) -> LocalHull {
    let mut pts: Vec<&Vec<f64>> = local.iter().collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut lower: Vec<&Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && strictly_left(lower[lower.len() - 2], lower[lower.len() - 1], p, tol) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && strictly_left(upper[upper.len() - 2], upper[upper.len() - 1], p, tol) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let vertices: Vec<Vec<f64>> = lower.into_iter().chain(upper).cloned().collect();
    let m = vertices.len();
    let mut facets = Vec::with_capacity(m);
    let mut boundary = Vec::with_capacity(m);
    for i in 0..m {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % m];
        let e = sub(b, a);
        let len = norm(&e);
        let normal = vec![e[1] / len, -e[0] / len];
        let offset = dot(&normal, a);
        facets.push(Facet { normal, offset });
        boundary.push(vec![a.clone(), b.clone()]);
    }
    (vertices, facets, boundary)
}

/// Signed distance of `p` from the line `o → a`, zeroed within `tol`.
fn strictly_left(o: &[f64], a: &[f64], p: &[f64], tol: f64) -> f64 {
    let len = norm(&sub(a, o));
    let d = turn(o, a, p) / len.max(f64::MIN_POSITIVE);
    if d.abs() <= tol {
        0.0
    } else {
        d
    }
}

#[derive(Debug, Clone)]
struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
}

fn make_face(pts: &[Vec<f64>], v: [usize; 3], interior: &[f64]) -> Face {
    let n = cross(&sub(&pts[v[1]], &pts[v[0]]), &sub(&pts[v[2]], &pts[v[0]]));
    let len = norm(&n);
    let mut normal = [n[0] / len, n[1] / len, n[2] / len];
    let mut v = v;
    let mut offset = dot(&normal, &pts[v[0]]);
    if dot(&normal, interior) > offset {
        v.swap(1, 2);
        normal = [-normal[0], -normal[1], -normal[2]];
        offset = -offset;
    }
    Face { v, normal, offset }
}

fn incremental_3d(pts: &[Vec<f64>], seed: &[usize], tol: f64) -> LocalHull {
    let interior: Vec<f64> = (0..3)
        .map(|k| seed.iter().map(|&i| pts[i][k]).sum::<f64>() / 4.0)
        .collect();
    let (a, b, c, d) = (seed[0], seed[1], seed[2], seed[3]);
    let mut faces: Vec<Face> = [[a, b, c], [a, b, d], [a, c, d], [b, c, d]]
        .iter()
        .map(|&f| make_face(pts, f, &interior))
        .collect();
    for (i, p) in pts.iter().enumerate() {
        if seed.contains(&i) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| dot(&f.normal, p) - f.offset > tol)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for (f, _) in faces.iter().zip(&visible).filter(|(_, &v)| v) {
            for k in 0..3 {
                edges.insert((f.v[k], f.v[(k + 1) % 3]));
            }
        }
        let mut next: Vec<Face> = Vec::with_capacity(faces.len() + 8);
        let mut horizon = Vec::new();
        for (f, vis) in faces.iter().zip(&visible) {
            if *vis {
                for k in 0..3 {
                    let (s, t) = (f.v[k], f.v[(k + 1) % 3]);
                    if !edges.contains(&(t, s)) {
                        horizon.push((s, t));
                    }
                }
            } else {
                next.push(f.clone());
            }
        }
        for (s, t) in horizon {
            next.push(make_face(pts, [s, t, i], &interior));
        }
        faces = next;
    }
    // merge coplanar triangles into facets
    let mut facets: Vec<Facet> = Vec::new();
    for f in &faces {
        let dup = facets.iter().any(|g| {
            (0..3).all(|k| (g.normal[k] - f.normal[k]).abs() < 1e-7) && (g.offset - f.offset).abs() <= tol
        });
        if !dup {
            facets.push(Facet {
                normal: f.normal.to_vec(),
                offset: f.offset,
            });
        }
    }
    let mut used: Vec<usize> = faces.iter().flat_map(|f| f.v).collect();
    used.sort_unstable();
    used.dedup();
    let vertices: Vec<Vec<f64>> = used
        .into_iter()
        .filter(|&i| {
            let active: Vec<&Facet> = facets.iter().filter(|f| f.slack(&pts[i]).abs() <= tol).collect();
            normal_rank(&active) == 3
        })
        .map(|i| pts[i].clone())
        .collect();
    let boundary = faces
        .iter()
        .map(|f| f.v.iter().map(|&i| pts[i].clone()).collect())
        .collect();
    (vertices, facets, boundary)
}

fn normal_rank(facets: &[&Facet]) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for f in facets {
        let mut r = f.normal.clone();
        for b in &basis {
            let c = dot(b, &r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri -= c * bi;
            }
        }
        let len = norm(&r);
        if len > 1e-6 {
            basis.push(r.iter().map(|x| x / len).collect());
        }
        if basis.len() == 3 {
            break;
        }
    }
    basis.len()
}

/// Symmetric Hausdorff distance, evaluated at the vertices.
pub fn hausdorff(a: &Hull, b: &Hull) -> Result<f64> {
    if a.dim != b.dim || a.ambient != b.ambient {
        return Err(QhamError::DimensionMismatch(a.dim, b.dim));
    }
    Ok(hausdorff_any(a, b))
}

/// Hausdorff distance without the intrinsic-dimension precondition.
pub(crate) fn hausdorff_any(a: &Hull, b: &Hull) -> f64 {
    let one = |x: &Hull, y: &Hull| x.vertices.iter().map(|v| y.distance(v)).fold(0.0, f64::max);
    one(a, b).max(one(b, a))
}
