//! Point-set similarity between a drawing and its target.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimilarityKind {
    #[default]
    Greedy,
    Mse,
    Procrustes,
}

impl std::str::FromStr for SimilarityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "greedy" => Ok(SimilarityKind::Greedy),
            "mse" => Ok(SimilarityKind::Mse),
            "procrustes" => Ok(SimilarityKind::Procrustes),
            other => Err(Error::InvalidParameter(format!(
                "unknown similarity `{other}`"
            ))),
        }
    }
}

impl SimilarityKind {
    pub fn loss(self, x: &[Point], y: &[Point]) -> Result<f64> {
        match self {
            SimilarityKind::Greedy => sim_greedy(x, y),
            SimilarityKind::Mse => sim_mse(x, y),
            SimilarityKind::Procrustes => sim_procrustes(x, y),
        }
    }
}

fn same_size(x: &[Point], y: &[Point]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: y.len(),
            actual: x.len(),
        });
    }
    Ok(())
}

/// Greedy nearest-point matching loss.
///
/// Walks `x` in row order; each point is matched to the nearest still-unmatched
/// point of `y` (ties go to the lowest index) and the distances are summed.
/// The result depends on the order of `x` but not on the order of `y`.
pub fn sim_greedy(x: &[Point], y: &[Point]) -> Result<f64> {
    same_size(x, y)?;
    let mut remaining: Vec<Point> = y.to_vec();
    let mut loss = 0.0;
    for &p in x {
        let mut best = 0;
        let mut best_d2 = f64::INFINITY;
        for (k, q) in remaining.iter().enumerate() {
            let d2 = p.dist_sq(*q);
            if d2 < best_d2 {
                best_d2 = d2;
                best = k;
            }
        }
        loss += best_d2.sqrt();
        // Vec::remove keeps index order, so later ties still pick the lowest index
        remaining.remove(best);
    }
    Ok(loss)
}

/// `100 - current / baseline * 100`; negative when the drawing moved away.
pub fn percent(current_loss: f64, baseline_loss: f64) -> Result<f64> {
    if baseline_loss <= 0.0 {
        return Err(Error::AlreadyAtTarget);
    }
    Ok(100.0 - current_loss / baseline_loss * 100.0)
}

/// Mean squared distance under index correspondence.
pub fn sim_mse(x: &[Point], y: &[Point]) -> Result<f64> {
    same_size(x, y)?;
    if x.is_empty() {
        return Ok(0.0);
    }
    Ok(x.iter().zip(y).map(|(p, q)| p.dist_sq(*q)).sum::<f64>() / x.len() as f64)
}

/// Procrustes residual: squared error left after optimally translating,
/// rotating and uniformly scaling `x` onto `y`, relative to `y`'s centered
/// sum of squares. Lies in `[0, 1]`.
pub fn sim_procrustes(x: &[Point], y: &[Point]) -> Result<f64> {
    same_size(x, y)?;
    let n = x.len() as f64;
    let centroid = |s: &[Point]| {
        let (sx, sy) = s.iter().fold((0.0, 0.0), |(a, b), p| (a + p.x, b + p.y));
        Point::new(sx / n, sy / n)
    };
    let (cx, cy) = (centroid(x), centroid(y));
    let (mut sxx, mut syy, mut dot, mut cross) = (0.0, 0.0, 0.0, 0.0);
    for (p, q) in x.iter().zip(y) {
        let (ax, ay) = (p.x - cx.x, p.y - cx.y);
        let (bx, by) = (q.x - cy.x, q.y - cy.y);
        sxx += ax * ax + ay * ay;
        syy += bx * bx + by * by;
        dot += ax * bx + ay * by;
        cross += ax * by - ay * bx;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::DegenerateDrawing(
            "Procrustes needs point sets that are not all coincident".into(),
        ));
    }
    // best rotation aligns to angle atan2(cross, dot); the explained part is
    // |(dot, cross)|^2 / sxx
    let explained = (dot * dot + cross * cross) / sxx;
    Ok(((syy - explained) / syy).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().copied().map(Point::from).collect()
    }

    #[test]
    fn identical_sets_have_zero_loss() {
        let y = pts(&[(0.1, 0.2), (0.5, 0.5), (0.9, 0.3)]);
        assert_eq!(sim_greedy(&y, &y).unwrap(), 0.0);
        let swapped = pts(&[(1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(sim_greedy(&pts(&[(0.0, 0.0), (1.0, 0.0)]), &swapped).unwrap(), 0.0);
    }

    #[test]
    fn greedy_hand_trace() {
        // (0,0) -> (1,0), then (2,0) -> (3,0)
        let x = pts(&[(0.0, 0.0), (2.0, 0.0)]);
        let y = pts(&[(1.0, 0.0), (3.0, 0.0)]);
        assert_eq!(sim_greedy(&x, &y).unwrap(), 2.0);
    }

    #[test]
    fn greedy_depends_on_x_order() {
        // x = [2, 0] matches 2 -> 1 first, leaving 0 -> 3
        let x = pts(&[(2.0, 0.0), (0.0, 0.0)]);
        let y = pts(&[(1.0, 0.0), (3.0, 0.0)]);
        assert_eq!(sim_greedy(&x, &y).unwrap(), 4.0);
    }

    #[test]
    fn size_mismatch() {
        assert!(sim_greedy(&pts(&[(0.0, 0.0)]), &[]).is_err());
    }

    #[test]
    fn percent_fixtures() {
        assert_eq!(percent(0.0, 5.0).unwrap(), 100.0);
        assert_eq!(percent(5.0, 5.0).unwrap(), 0.0);
        assert!((percent(6.0, 5.0).unwrap() + 20.0).abs() < 1e-12);
        assert!(matches!(percent(1.0, 0.0), Err(Error::AlreadyAtTarget)));
    }

    #[test]
    fn mse_of_shift() {
        let y = pts(&[(0.0, 0.0), (0.3, 0.7), (1.0, 1.0)]);
        let x: Vec<Point> = y.iter().map(|p| Point::new(p.x + 0.1, p.y)).collect();
        assert!((sim_mse(&x, &y).unwrap() - 0.01).abs() < 1e-15);
        assert_eq!(sim_mse(&y, &y).unwrap(), 0.0);
    }

    #[test]
    fn procrustes_ignores_similarity_transforms() {
        let y = pts(&[(0.0, 0.0), (0.3, 0.7), (1.0, 1.0), (0.8, 0.1)]);
        assert!(sim_procrustes(&y, &y).unwrap() < 1e-12);
        let (s, c) = 37f64.to_radians().sin_cos();
        let x: Vec<Point> = y
            .iter()
            .map(|p| Point::new(3.0 * (c * p.x - s * p.y) + 2.0, 3.0 * (s * p.x + c * p.y) - 1.0))
            .collect();
        assert!(sim_procrustes(&x, &y).unwrap() < 1e-9);
        assert!(sim_procrustes(&pts(&[(1.0, 1.0); 4]), &y).is_err());
    }
}
