use crate::error::{Error, Result};
use crate::graph::{DistanceMatrix, Drawing, Point};

use super::MetricId;

fn undefined(reason: &str) -> Error {
    Error::MetricUndefined {
        metric: MetricId::Stress,
        reason: reason.into(),
    }
}

fn check(n: usize, dist: &DistanceMatrix) -> Result<()> {
    if n != dist.len() {
        return Err(Error::SizeMismatch {
            expected: dist.len(),
            actual: n,
        });
    }
    if n < 2 {
        return Err(undefined("needs at least two nodes"));
    }
    Ok(())
}

/// Normalized stress after optimally rescaling the drawing.
///
/// The drawing is scaled by `alpha = sum(r/d) / sum(r^2/d^2)` over node pairs
/// (`r` Euclidean, `d` hop distance), then the mean of `(alpha*r - d)^2 / d^2`
/// over the `n(n-1)/2` pairs is returned. Coincident pairs contribute 1.
pub fn stress(d: &Drawing, dist: &DistanceMatrix) -> Result<f64> {
    let n = d.len();
    check(n, dist)?;
    let x = d.coords();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            let r = x[i].dist(x[j]);
            let h = f64::from(dist.get(i, j));
            num += r / h;
            den += r * r / (h * h);
        }
    }
    if den <= 0.0 {
        return Err(undefined("all nodes coincide, scale factor is undefined"));
    }
    let alpha = num / den;
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let h = f64::from(dist.get(i, j));
            let residual = alpha * x[i].dist(x[j]) - h;
            total += residual * residual / (h * h);
        }
    }
    Ok(total / pairs(n))
}

fn pairs(n: usize) -> f64 {
    (n * (n - 1)) as f64 / 2.0
}

/// Running sums `A = sum r/d` and `B = sum r^2/d^2`. Stress reduces to
/// `1 - A^2 / (B * P)` with `P` the pair count.
#[derive(Debug, Clone)]
pub(super) struct StressCache {
    sum_a: f64,
    sum_b: f64,
    pairs: f64,
}

impl StressCache {
    pub(super) fn new(d: &Drawing, dist: &DistanceMatrix) -> Result<Self> {
        let n = d.len();
        check(n, dist)?;
        let x = d.coords();
        let (mut sum_a, mut sum_b) = (0.0, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = terms(x[i], x[j], dist.get(i, j));
                sum_a += a;
                sum_b += b;
            }
        }
        if sum_b <= 0.0 {
            return Err(undefined("all nodes coincide, scale factor is undefined"));
        }
        Ok(StressCache {
            sum_a,
            sum_b,
            pairs: pairs(n),
        })
    }

    pub(super) fn value(&self) -> f64 {
        (1.0 - self.sum_a * self.sum_a / (self.sum_b * self.pairs)).max(0.0)
    }

    pub(super) fn update(
        &mut self,
        old: &[Point],
        new: &[Point],
        moved: &[usize],
        is_moved: &[bool],
        dist: &DistanceMatrix,
    ) -> Result<f64> {
        let (mut da, mut db) = (0.0, 0.0);
        for &i in moved {
            for j in 0..new.len() {
                // pairs of two moved nodes are visited once, from the smaller index
                if j == i || (is_moved[j] && j < i) {
                    continue;
                }
                let h = dist.get(i, j);
                let (oa, ob) = terms(old[i], old[j], h);
                let (na, nb) = terms(new[i], new[j], h);
                da += na - oa;
                db += nb - ob;
            }
        }
        let sum_b = self.sum_b + db;
        if sum_b <= 0.0 {
            return Err(undefined("all nodes coincide, scale factor is undefined"));
        }
        self.sum_a += da;
        self.sum_b = sum_b;
        Ok(self.value())
    }
}

#[inline]
fn terms(p: Point, q: Point, hops: u32) -> (f64, f64) {
    let h = f64::from(hops);
    let r = p.dist(q);
    (r / h, r * r / (h * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{shortest_paths, Graph};

    #[test]
    fn single_edge_is_zero() {
        let g = Graph::path(2).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = Drawing::from_pairs(&[(0.2, 0.3), (0.9, 0.1)]).unwrap();
        assert!(stress(&d, &dist).unwrap().abs() < 1e-15);
    }

    #[test]
    fn collinear_path_is_zero() {
        let g = Graph::path(3).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = Drawing::from_pairs(&[(0.0, 0.0), (0.5, 0.0), (1.0, 0.0)]).unwrap();
        assert!(stress(&d, &dist).unwrap().abs() < 1e-15);
    }

    #[test]
    fn right_triangle_fixture() {
        // alpha = (2 + sqrt 2) / 4; residuals summed by hand
        let g = Graph::complete(3).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = Drawing::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).unwrap();
        let s = stress(&d, &dist).unwrap();
        assert!((s - 0.028595).abs() < 1e-5, "{s}");
        let cache = StressCache::new(&d, &dist).unwrap();
        assert!((cache.value() - s).abs() < 1e-12);
    }

    #[test]
    fn coincident_pair_contributes_one() {
        let g = Graph::path(3).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = Drawing::from_pairs(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).unwrap();
        let s = stress(&d, &dist).unwrap();
        // alpha = 2/2 = 1 -> residuals 0, 0 and (0 - 2)^2 / 4 = 1
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn all_coincident_is_an_error() {
        let g = Graph::path(3).unwrap();
        let dist = shortest_paths(&g).unwrap();
        let d = Drawing::from_pairs(&[(0.5, 0.5); 3]).unwrap();
        assert!(stress(&d, &dist).is_err());
    }
}
