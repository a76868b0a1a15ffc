use crate::graph::{Drawing, Graph, Point};

/// Orientation values with magnitude at or below this are treated as
/// collinear. Coordinates live in the unit box, so this is absolute.
pub const COLLINEAR_TOL: f64 = 1e-12;

#[inline]
fn orientation(a: Point, b: Point, c: Point) -> i8 {
    let v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if v > COLLINEAR_TOL {
        1
    } else if v < -COLLINEAR_TOL {
        -1
    } else {
        0
    }
}

#[inline]
fn within_box(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test. Touching and collinear overlap both
/// count; a zero-length segment intersects nothing.
pub fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    if p1 == p2 || q1 == q2 {
        return false;
    }
    let o1 = orientation(p1, p2, q1);
    let o2 = orientation(p1, p2, q2);
    let o3 = orientation(q1, q2, p1);
    let o4 = orientation(q1, q2, p2);
    if o1 != o2 && o3 != o4 {
        return true;
    }
    (o1 == 0 && within_box(p1, p2, q1))
        || (o2 == 0 && within_box(p1, p2, q2))
        || (o3 == 0 && within_box(q1, q2, p1))
        || (o4 == 0 && within_box(q1, q2, p2))
}

#[inline]
fn adjacent(e: (usize, usize), f: (usize, usize)) -> bool {
    e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1
}

#[inline]
fn edges_cross(x: &[Point], e: (usize, usize), f: (usize, usize)) -> bool {
    !adjacent(e, f) && segments_cross(x[e.0], x[e.1], x[f.0], x[f.1])
}

/// Number of crossing edge pairs. Pairs sharing an endpoint never count.
pub fn crossing_number(d: &Drawing, g: &Graph) -> u64 {
    let x = d.coords();
    let edges = g.edges();
    let mut count = 0;
    for (i, &e) in edges.iter().enumerate() {
        for &f in &edges[i + 1..] {
            if edges_cross(x, e, f) {
                count += 1;
            }
        }
    }
    count
}

/// Symmetric `m x m` crossing flags plus the running count.
#[derive(Debug, Clone)]
pub(super) struct CrossingCache {
    m: usize,
    flags: Vec<bool>,
    count: u64,
}

impl CrossingCache {
    pub(super) fn new(d: &Drawing, g: &Graph) -> Self {
        let x = d.coords();
        let edges = g.edges();
        let m = edges.len();
        let mut flags = vec![false; m * m];
        let mut count = 0;
        for i in 0..m {
            for j in (i + 1)..m {
                if edges_cross(x, edges[i], edges[j]) {
                    flags[i * m + j] = true;
                    flags[j * m + i] = true;
                    count += 1;
                }
            }
        }
        CrossingCache { m, flags, count }
    }

    pub(super) fn value(&self) -> f64 {
        self.count as f64
    }

    pub(super) fn update(&mut self, new: &[Point], moved: &[usize], g: &Graph) -> f64 {
        let edges = g.edges();
        let m = self.m;
        let mut affected = vec![false; m];
        let mut list = Vec::new();
        for &v in moved {
            for &e in g.incident_edges(v) {
                if !affected[e] {
                    affected[e] = true;
                    list.push(e);
                }
            }
        }
        for &e in &list {
            for f in 0..m {
                if f == e || (affected[f] && f < e) {
                    continue;
                }
                let now = edges_cross(new, edges[e], edges[f]);
                let before = self.flags[e * m + f];
                if now != before {
                    self.flags[e * m + f] = now;
                    self.flags[f * m + e] = now;
                    if now {
                        self.count += 1;
                    } else {
                        self.count -= 1;
                    }
                }
            }
        }
        self.value()
    }
}
