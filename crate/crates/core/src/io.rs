//! Text and binary formats for point sets, measures and grids.
//!
//! Measures: UTF-8, one atom per line `x y [w]`, `#` starts a comment. When
//! no line carries a weight every atom gets `1/n`; mixing weighted and
//! unweighted lines is an error. Floats are written with 17 significant
//! digits, which round-trips `f64` exactly.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::grid::GridFunction;
use crate::measure::DiscreteMeasure;

/// Formats `v` with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_measure(reader: impl BufRead) -> Result<DiscreteMeasure> {
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut weighted: Option<bool> = None;
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parse = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse { line: k + 1, reason: format!("{s:?}: {e}") });
        let fields: Vec<&str> = body.split_whitespace().collect();
        let has_w = match fields.len() {
            2 => false,
            3 => true,
            c => return Err(Error::Parse { line: k + 1, reason: format!("expected 2 or 3 fields, got {c}") }),
        };
        if *weighted.get_or_insert(has_w) != has_w {
            return Err(Error::Parse { line: k + 1, reason: "mixed weighted and unweighted atoms".into() });
        }
        points.push(Point2::new(parse(fields[0])?, parse(fields[1])?));
        if has_w {
            weights.push(parse(fields[2])?);
        }
    }
    if weighted == Some(true) {
        DiscreteMeasure::new(points, weights)
    } else {
        DiscreteMeasure::uniform(points)
    }
}

pub fn read_measure(path: &Path) -> Result<DiscreteMeasure> {
    let f = std::fs::File::open(path)?;
    parse_measure(std::io::BufReader::new(f))
}

pub fn write_measure(mut w: impl Write, m: &DiscreteMeasure) -> Result<()> {
    writeln!(w, "# x y w")?;
    for (p, wt) in m.atoms() {
        writeln!(w, "{} {} {}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(wt))?;
    }
    Ok(())
}

/// Unweighted point list.
pub fn write_points(mut w: impl Write, points: &[Point2]) -> Result<()> {
    writeln!(w, "# x y")?;
    for p in points {
        writeln!(w, "{} {}", fmt_f64(p.x), fmt_f64(p.y))?;
    }
    Ok(())
}

/// Geometry of a grid stored without its values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub origin: Point2,
    pub spacing: f64,
    pub width: usize,
    pub height: usize,
    pub layout: String,
    pub dtype: String,
}

impl GridDescriptor {
    pub fn of(g: &GridFunction) -> Self {
        GridDescriptor {
            origin: g.origin,
            spacing: g.spacing,
            width: g.width,
            height: g.height,
            layout: "row-major".into(),
            dtype: "f64-le".into(),
        }
    }
}

/// CSV: header lines `origin_x,origin_y,spacing,width,height` and its
/// values, then one row of values per grid row.
pub fn write_grid_csv(mut w: impl Write, g: &GridFunction) -> Result<()> {
    writeln!(w, "origin_x,origin_y,spacing,width,height")?;
    writeln!(w, "{},{},{},{},{}", fmt_f64(g.origin.x), fmt_f64(g.origin.y), fmt_f64(g.spacing), g.width, g.height)?;
    for row in g.values.chunks(g.width) {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn read_grid_csv(reader: impl BufRead) -> Result<GridFunction> {
    let mut lines = reader.lines();
    let mut next = |k: usize| -> Result<String> {
        lines.next().ok_or(Error::Parse { line: k, reason: "unexpected end of file".into() })?.map_err(Error::from)
    };
    next(1)?;
    let head = next(2)?;
    let f: Vec<&str> = head.split(',').collect();
    if f.len() != 5 {
        return Err(Error::Parse { line: 2, reason: "expected 5 header fields".into() });
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse { line: 2, reason: e.to_string() });
    let int = |s: &str| s.trim().parse::<usize>().map_err(|e| Error::Parse { line: 2, reason: e.to_string() });
    let (width, height) = (int(f[3])?, int(f[4])?);
    let mut g = GridFunction::zeros(Point2::new(num(f[0])?, num(f[1])?), num(f[2])?, width, height)?;
    for j in 0..height {
        let line = next(j + 3)?;
        let row: Vec<&str> = line.split(',').collect();
        if row.len() != width {
            return Err(Error::Parse { line: j + 3, reason: format!("expected {width} values, got {}", row.len()) });
        }
        for (i, s) in row.iter().enumerate() {
            g.values[j * width + i] =
                s.trim().parse().map_err(|e: std::num::ParseFloatError| Error::Parse { line: j + 3, reason: e.to_string() })?;
        }
    }
    Ok(g)
}

/// Writes `<path>` as little-endian f64 values and `<path>.json` as the
/// descriptor.
pub fn write_grid_raw(path: &Path, g: &GridFunction) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 * g.values.len());
    for v in &g.values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    let desc = serde_json::to_string_pretty(&GridDescriptor::of(g)).map_err(|e| Error::Numeric(e.to_string()))?;
    std::fs::write(sidecar(path), desc)?;
    Ok(())
}

pub fn read_grid_raw(path: &Path) -> Result<GridFunction> {
    let desc: GridDescriptor = serde_json::from_str(&std::fs::read_to_string(sidecar(path))?)
        .map_err(|e| Error::Parse { line: e.line(), reason: e.to_string() })?;
    let bytes = std::fs::read(path)?;
    if bytes.len() != 8 * desc.width * desc.height {
        return Err(Error::Parse {
            line: 0,
            reason: format!("raw file holds {} bytes, descriptor implies {}", bytes.len(), 8 * desc.width * desc.height),
        });
    }
    let mut g = GridFunction::zeros(desc.origin, desc.spacing, desc.width, desc.height)?;
    for (v, chunk) in g.values.iter_mut().zip(bytes.chunks_exact(8)) {
        *v = f64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
    }
    Ok(g)
}

fn sidecar(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_round_trip_is_exact() {
        let m = DiscreteMeasure::new(vec![Point2::new(0.1, 1.0 / 3.0), Point2::new(-2.0, 1e-300)], vec![0.3, 0.7]).unwrap();
        let mut buf = Vec::new();
        write_measure(&mut buf, &m).unwrap();
        assert_eq!(parse_measure(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn default_weights_and_comments() {
        let m = parse_measure("# header\n0 0\n1 0 # trailing\n\n0 1\n".as_bytes()).unwrap();
        assert_eq!(m.len(), 3);
        assert!(m.weights().iter().all(|&w| w == 1.0 / 3.0));
        assert!(parse_measure("0 0 1\n1 1\n".as_bytes()).is_err());
        assert!(matches!(parse_measure("0 x\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn grid_round_trips() {
        let g = GridFunction::from_fn(Point2::new(-0.5, 0.25), 0.1, 3, 2, |p| p.x * p.x + 1.0 / (3.0 + p.y)).unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &g).unwrap();
        assert_eq!(read_grid_csv(buf.as_slice()).unwrap(), g);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.bin");
        write_grid_raw(&path, &g).unwrap();
        assert_eq!(read_grid_raw(&path).unwrap(), g);
    }
}
