//! Edge-list and coordinate CSV files.
//!
//! Edge lists are plain text with one `i j` pair per line, 0-based, with `#`
//! starting a comment. Coordinate files are CSV with an `x,y` header where row
//! `k` holds node `k`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Drawing, Graph, Point};

pub fn parse_edge_list(text: &str, origin: &Path) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut max_node = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let mut fields = line.split(|c: char| c.is_whitespace() || c == ',').filter(|f| !f.is_empty());
        let mut index = || -> Result<usize> {
            let f = fields.next().ok_or_else(|| err("expected two node indices".into()))?;
            f.parse().map_err(|_| err(format!("`{f}` is not a node index")))
        };
        let (a, b) = (index()?, index()?);
        if fields.next().is_some() {
            return Err(err("trailing fields after edge".into()));
        }
        max_node = Some(max_node.unwrap_or(0).max(a).max(b));
        edges.push((a, b));
    }
    let n = max_node.map_or(0, |m| m + 1);
    Graph::new(n, edges)
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    let mut out = String::new();
    for (a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

#[derive(serde::Deserialize, serde::Serialize)]
struct Row {
    x: f64,
    y: f64,
}

pub fn parse_coords(reader: impl std::io::Read) -> Result<Drawing> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::InvalidParameter(format!(
            "coordinate CSV must start with an `x,y` header, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut coords = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row?;
        coords.push(Point::new(row.x, row.y));
    }
    Drawing::new(coords)
}

pub fn read_coords(path: &Path) -> Result<Drawing> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_coords(file)
}

/// Writes coordinates at full precision (shortest round-trip form).
pub fn write_coords(path: &Path, points: &[Point]) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    for p in points {
        wtr.serialize(Row { x: p.x, y: p.y })?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_with_comments() {
        let text = "# triangle\n0 1\n1 2 # closing edge next\n\n2 0\n";
        let g = parse_edge_list(text, Path::new("t.txt")).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = parse_edge_list("0 1\n1 x\n", Path::new("bad.txt")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(parse_edge_list("0 0\n", Path::new("loop.txt")).is_err());
    }

    #[test]
    fn coords_round_trip_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let pts = vec![Point::new(0.1 + 0.2, 1.0 / 3.0), Point::new(1e-300, 0.999_999_999_999_999_9)];
        write_coords(&path, &pts).unwrap();
        assert_eq!(read_coords(&path).unwrap().coords(), &pts[..]);
    }

    #[test]
    fn coords_need_header() {
        assert!(parse_coords("a,b\n1,2\n".as_bytes()).is_err());
    }
}
