//! Uniform bucket grid for nearest-neighbour and fixed-radius queries in
//! dimension ≤ 3.

use std::collections::HashMap;

pub struct BucketGrid<'a> {
    points: &'a [Vec<f64>],
    lower: Vec<f64>,
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
    key_lo: Vec<i64>,
    key_hi: Vec<i64>,
}

impl<'a> BucketGrid<'a> {
    pub fn new(points: &'a [Vec<f64>], cell: f64) -> Self {
        let dim = points.first().map_or(0, Vec::len);
        let lower = (0..dim)
            .map(|k| points.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min))
            .collect();
        let mut grid = Self {
            points,
            lower,
            cell: cell.max(f64::MIN_POSITIVE),
            buckets: HashMap::new(),
            key_lo: vec![i64::MAX; dim],
            key_hi: vec![i64::MIN; dim],
        };
        for (i, p) in points.iter().enumerate() {
            let key = grid.key(p);
            for (k, c) in key.iter().enumerate() {
                grid.key_lo[k] = grid.key_lo[k].min(*c);
                grid.key_hi[k] = grid.key_hi[k].max(*c);
            }
            grid.buckets.entry(key).or_default().push(i);
        }
        grid
    }

    /// Cell size giving about one point per cell over the bounding box.
    pub fn auto(points: &'a [Vec<f64>]) -> Self {
        let dim = points.first().map_or(0, Vec::len).max(1);
        let extents: Vec<f64> = (0..dim)
            .map(|k| {
                let lo = points.iter().map(|p| p.get(k).copied().unwrap_or(0.0)).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p.get(k).copied().unwrap_or(0.0)).fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .collect();
        let span = extents.iter().cloned().fold(0.0, f64::max);
        let volume: f64 = extents.iter().map(|e| e.max(span * 1e-3)).product();
        let cell = (volume / points.len().max(1) as f64).powf(1.0 / dim as f64);
        Self::new(points, if cell > 0.0 { cell } else { 1.0 })
    }

    fn key(&self, p: &[f64]) -> Vec<i64> {
        p.iter()
            .zip(&self.lower)
            .map(|(x, l)| ((x - l) / self.cell).floor() as i64)
            .collect()
    }

    fn shell(&self, centre: &[i64], r: i64, mut visit: impl FnMut(usize)) {
        let dim = centre.len();
        let mut offset = vec![-r; dim];
        loop {
            if offset.iter().any(|o| o.abs() == r) {
                let key: Vec<i64> = centre.iter().zip(&offset).map(|(c, o)| c + o).collect();
                if let Some(ids) = self.buckets.get(&key) {
                    ids.iter().for_each(|&i| visit(i));
                }
            }
            let mut k = 0;
            loop {
                if k == dim {
                    return;
                }
                offset[k] += 1;
                if offset[k] > r {
                    offset[k] = -r;
                    k += 1;
                } else {
                    break;
                }
            }
            if dim == 0 {
                return;
            }
        }
    }

    fn dist(&self, i: usize, q: &[f64]) -> f64 {
        self.points[i]
            .iter()
            .zip(q)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Whether some point lies within `radius` of `q`.
    pub fn any_within(&self, q: &[f64], radius: f64) -> bool {
        let centre = self.key(q);
        let reach = (radius / self.cell).ceil() as i64;
        for r in 0..=reach {
            let mut hit = false;
            self.shell(&centre, r, |i| hit |= self.dist(i, q) <= radius);
            if hit {
                return true;
            }
        }
        false
    }

    /// Distance from point `i` to its nearest other point.
    pub fn nearest_other(&self, i: usize) -> f64 {
        let q = &self.points[i];
        let centre = self.key(q);
        let limit = centre
            .iter()
            .enumerate()
            .map(|(k, c)| (c - self.key_lo[k]).max(self.key_hi[k] - c))
            .max()
            .unwrap_or(0);
        let mut best = f64::INFINITY;
        for r in 0..=limit {
            self.shell(&centre, r, |j| {
                if j != i {
                    best = best.min(self.dist(j, q));
                }
            });
            if best <= r as f64 * self.cell {
                break;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nearest_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dim in 1..=3 {
            let pts: Vec<Vec<f64>> = (0..300)
                .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0) * (1.0 + dim as f64)).collect())
                .collect();
            let grid = BucketGrid::auto(&pts);
            for i in 0..pts.len() {
                let brute = (0..pts.len())
                    .filter(|&j| j != i)
                    .map(|j| grid.dist(j, &pts[i]))
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(grid.nearest_other(i), brute);
            }
            for _ in 0..200 {
                let q: Vec<f64> = (0..dim).map(|_| rng.gen_range(-4.0..4.0)).collect();
                let r = rng.gen_range(0.0..0.5);
                let brute = (0..pts.len()).any(|j| grid.dist(j, &q) <= r);
                assert_eq!(grid.any_within(&q, r), brute);
            }
        }
    }
}
