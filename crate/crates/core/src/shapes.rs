//! Target point sets in the unit square.

use std::fmt;
use std::f64::consts::TAU;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Drawing, Point};
use crate::io;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ShapeLabel {
    X,
    Vert,
    Hor,
    O,
    Dino,
    Grid,
    Custom,
}

impl ShapeLabel {
    /// The six generated shapes.
    pub const BUILT_IN: [ShapeLabel; 6] = [
        ShapeLabel::X,
        ShapeLabel::Vert,
        ShapeLabel::Hor,
        ShapeLabel::O,
        ShapeLabel::Dino,
        ShapeLabel::Grid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeLabel::X => "X",
            ShapeLabel::Vert => "VERT",
            ShapeLabel::Hor => "HOR",
            ShapeLabel::O => "O",
            ShapeLabel::Dino => "DINO",
            ShapeLabel::Grid => "GRID",
            ShapeLabel::Custom => "CUSTOM",
        }
    }
}

impl fmt::Display for ShapeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "X" => Ok(ShapeLabel::X),
            "VERT" => Ok(ShapeLabel::Vert),
            "HOR" => Ok(ShapeLabel::Hor),
            "O" => Ok(ShapeLabel::O),
            "DINO" => Ok(ShapeLabel::Dino),
            "GRID" => Ok(ShapeLabel::Grid),
            "CUSTOM" => Ok(ShapeLabel::Custom),
            _ => Err(Error::UnknownShape(s.to_string())),
        }
    }
}

/// Knobs of the generated shapes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ShapeParams {
    /// Number of parallel lines in `VERT` and `HOR`.
    pub line_count: usize,
}

impl Default for ShapeParams {
    fn default() -> Self {
        ShapeParams { line_count: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetShape {
    pub label: ShapeLabel,
    pub points: Vec<Point>,
}

impl TargetShape {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Generates `n` points of a built-in shape with default parameters.
pub fn generate(label: ShapeLabel, n: usize) -> Result<TargetShape> {
    generate_with(label, n, &ShapeParams::default())
}

pub fn generate_with(label: ShapeLabel, n: usize, params: &ShapeParams) -> Result<TargetShape> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "target shapes need at least 4 points, got {n}"
        )));
    }
    let points = match label {
        ShapeLabel::O => circle(n),
        ShapeLabel::X => diagonals(n),
        ShapeLabel::Vert => lines(n, params.line_count.max(1), true),
        ShapeLabel::Hor => lines(n, params.line_count.max(1), false),
        ShapeLabel::Grid => lattice(n),
        ShapeLabel::Dino => dino(n)?,
        ShapeLabel::Custom => {
            return Err(Error::InvalidParameter(
                "CUSTOM targets are loaded from a file".into(),
            ))
        }
    };
    Ok(TargetShape { label, points })
}

/// Reads a target CSV (`x,y` header) and normalizes it into the unit box.
pub fn load_target(path: &Path, expected_n: Option<usize>) -> Result<TargetShape> {
    let raw = io::read_coords(path)?;
    if let Some(n) = expected_n {
        if raw.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: raw.len(),
            });
        }
    }
    let points = raw.normalize()?.into_coords();
    Ok(TargetShape {
        label: ShapeLabel::Custom,
        points,
    })
}

/// Evenly spaced on the circle of radius 0.5 around the box center.
fn circle(n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            Point::new(0.5 + 0.5 * t.cos(), 0.5 + 0.5 * t.sin())
        })
        .collect()
}

fn spread(j: usize, count: usize) -> f64 {
    if count <= 1 {
        0.5
    } else {
        j as f64 / (count - 1) as f64
    }
}

/// Even indices on the main diagonal, odd ones on the anti-diagonal.
fn diagonals(n: usize) -> Vec<Point> {
    let main = n.div_ceil(2);
    let anti = n / 2;
    (0..n)
        .map(|k| {
            let j = k / 2;
            if k % 2 == 0 {
                let t = spread(j, main);
                Point::new(t, t)
            } else {
                let t = spread(j, anti);
                Point::new(t, 1.0 - t)
            }
        })
        .collect()
}

fn lines(n: usize, count: usize, vertical: bool) -> Vec<Point> {
    let offset = |line: usize| {
        if count == 1 {
            0.5
        } else {
            0.1 + 0.8 * line as f64 / (count - 1) as f64
        }
    };
    (0..n)
        .map(|k| {
            let line = k % count;
            let on_line = n / count + usize::from(line < n % count);
            let along = spread(k / count, on_line);
            if vertical {
                Point::new(offset(line), along)
            } else {
                Point::new(along, offset(line))
            }
        })
        .collect()
}

/// First `n` points of a `ceil(sqrt n)`-square lattice, row-major.
fn lattice(n: usize) -> Vec<Point> {
    let mut side = (n as f64).sqrt().ceil() as usize;
    while side * side < n {
        side += 1;
    }
    (0..n)
        .map(|k| Point::new(spread(k % side, side), spread(k / side, side)))
        .collect()
}

/// Closed outline of a dinosaur, traced over the Datasaurus scatter
/// (coordinates in its original 0..100 frame).
const DINO_OUTLINE: [(f64, f64); 37] = [
    (28.0, 86.0),
    (36.0, 82.0),
    (44.0, 80.0),
    (45.0, 70.0),
    (44.0, 62.0),
    (38.0, 58.0),
    (35.0, 53.0),
    (41.0, 53.0),
    (46.0, 55.0),
    (49.0, 46.0),
    (47.0, 30.0),
    (45.0, 10.0),
    (43.0, 4.0),
    (51.0, 4.0),
    (52.0, 12.0),
    (54.0, 28.0),
    (60.0, 27.0),
    (61.0, 10.0),
    (59.0, 4.0),
    (67.0, 4.0),
    (68.0, 12.0),
    (69.0, 30.0),
    (76.0, 33.0),
    (86.0, 28.0),
    (98.0, 20.0),
    (90.0, 30.0),
    (80.0, 42.0),
    (72.0, 52.0),
    (64.0, 62.0),
    (58.0, 72.0),
    (57.0, 84.0),
    (56.0, 92.0),
    (50.0, 98.0),
    (40.0, 99.0),
    (32.0, 96.0),
    (27.0, 91.0),
    (28.0, 86.0),
];

/// `n` points at equal arc-length steps around the outline.
fn dino(n: usize) -> Result<Vec<Point>> {
    let outline: Vec<Point> = DINO_OUTLINE.iter().map(|&p| Point::from(p)).collect();
    let seg_len: Vec<f64> = outline.windows(2).map(|w| w[0].dist(w[1])).collect();
    let total: f64 = seg_len.iter().sum();
    let mut out = Vec::with_capacity(n);
    let mut seg = 0;
    let mut walked = 0.0;
    for k in 0..n {
        let target = total * k as f64 / n as f64;
        while seg + 1 < seg_len.len() && walked + seg_len[seg] < target {
            walked += seg_len[seg];
            seg += 1;
        }
        let t = ((target - walked) / seg_len[seg]).clamp(0.0, 1.0);
        let (a, b) = (outline[seg], outline[seg + 1]);
        out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
    }
    Ok(Drawing::new(out)?.normalize()?.into_coords())
}
