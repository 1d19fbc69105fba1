//! Text and raster exports: CSV, binary PPM and glyph JSON.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use nalgebra::{Matrix3, Vector3};
use serde_json::{json, Value};

use super::mvf::RawMvf;
use crate::error::{Error, Result};
use crate::image::{Image, Shape};
use crate::linalg::{from_row_major, SymmetricEigen};
use crate::manifold::ManifoldKind;
use crate::manifolds::{rotation_angle, rotation_log, vee};

pub const GLYPH_SCHEMA: &str = "glyph/1";

/// Column names of the CSV header line.
pub fn coordinate_names(kind: &ManifoldKind) -> Vec<String> {
    let matrix = || (0..3).flat_map(|r| (0..3).map(move |c| format!("m{r}{c}"))).collect();
    match kind {
        ManifoldKind::Circle => vec!["angle".into()],
        ManifoldKind::Sphere => vec!["x".into(), "y".into(), "z".into()],
        ManifoldKind::Rotations | ManifoldKind::Spd => matrix(),
        ManifoldKind::Euclidean(k) => (0..*k).map(|i| format!("x{i}")).collect(),
        k if *k == ManifoldKind::lch() => vec!["L".into(), "C".into(), "h".into()],
        ManifoldKind::Product(parts) => parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| coordinate_names(p).into_iter().map(move |n| format!("p{i}.{n}")))
            .collect(),
    }
}

/// One header line, then one pixel per line in row-major order. Values use
/// the shortest representation that reads back to the same `f64`.
pub fn write_csv<W: Write>(raw: &RawMvf, mut w: W) -> Result<()> {
    writeln!(w, "{}", coordinate_names(&raw.kind).join(","))?;
    for i in 0..raw.shape.len() {
        let line: Vec<String> = raw.pixel(i).iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

/// Parses a CSV written by [`write_csv`]. Without a shape the pixels form a
/// one-dimensional signal.
pub fn read_csv<R: BufRead>(r: R, kind: ManifoldKind, shape: Option<Shape>) -> Result<RawMvf> {
    let names = coordinate_names(&kind);
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Format("empty CSV".into()))??;
    if header.trim() != names.join(",") {
        return Err(Error::Format(format!(
            "CSV header {:?} does not match {kind} columns {:?}",
            header.trim(),
            names.join(",")
        )));
    }
    let mut data = Vec::new();
    let mut count = 0;
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(Error::Format(format!(
                "CSV line {} has {} fields, expected {}",
                n + 2,
                fields.len(),
                names.len()
            )));
        }
        for f in fields {
            let v = f
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("CSV line {}: {f:?}: {e}", n + 2)))?;
            data.push(v);
        }
        count += 1;
    }
    let shape = shape.unwrap_or(Shape::Signal(count));
    RawMvf::new(kind, shape, data)
}

fn hue_to_rgb(angle: f64) -> [u8; 3] {
    let h = (angle / TAU).rem_euclid(1.0) * 6.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as u32 {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    [r, g, b].map(|c: f64| (c * 255.0).round() as u8)
}

fn ppm_header<W: Write>(w: &mut W, shape: Shape) -> Result<()> {
    write!(w, "P6\n{} {}\n255\n", shape.cols(), shape.rows())?;
    Ok(())
}

/// S¹ image as a fully saturated hue raster (angle 0 is red).
pub fn write_hue_ppm<W: Write>(raw: &RawMvf, mut w: W) -> Result<()> {
    if raw.kind != ManifoldKind::Circle {
        return Err(Error::Argument(format!("hue raster needs an s1 image, got {}", raw.kind)));
    }
    ppm_header(&mut w, raw.shape)?;
    let bytes: Vec<u8> = raw.data.iter().flat_map(|&a| hue_to_rgb(a)).collect();
    w.write_all(&bytes)?;
    Ok(())
}

/// Writes RGB values in [0, 1] as an 8-bit binary PPM.
pub fn write_ppm<W: Write>(img: &Image<Vector3<f64>>, mut w: W) -> Result<()> {
    ppm_header(&mut w, img.shape())?;
    let bytes: Vec<u8> = img
        .pixels()
        .iter()
        .flat_map(|p| [p.x, p.y, p.z].map(|c| (c.clamp(0.0, 1.0) * 255.0).round() as u8))
        .collect();
    w.write_all(&bytes)?;
    Ok(())
}

/// Reads a binary PPM with 8 or 16 bit samples into RGB values in [0, 1].
pub fn read_ppm(bytes: &[u8]) -> Result<Image<Vector3<f64>>> {
    let mut pos = 0;
    let mut token = || -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format("truncated PPM header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };
    if token()? != "P6" {
        return Err(Error::Format("not a binary PPM (P6)".into()));
    }
    let mut number = |what: &str| -> Result<usize> {
        let t = token()?;
        t.parse().map_err(|_| Error::Format(format!("bad PPM {what} {t:?}")))
    };
    let cols = number("width")?;
    let rows = number("height")?;
    let maxval = number("maxval")?;
    if !(1..=65535).contains(&maxval) {
        return Err(Error::Format(format!("bad PPM maxval {maxval}")));
    }
    // exactly one whitespace byte separates the header from the raster
    let raster = &bytes[(pos + 1).min(bytes.len())..];
    let width = if maxval < 256 { 1 } else { 2 };
    let want = rows * cols * 3 * width;
    if raster.len() < want {
        return Err(Error::Format(format!("PPM raster has {} bytes, need {want}", raster.len())));
    }
    let sample = |i: usize| -> f64 {
        let v = if width == 1 {
            raster[i] as f64
        } else {
            u16::from_be_bytes([raster[2 * i], raster[2 * i + 1]]) as f64
        };
        v / maxval as f64
    };
    let data = (0..rows * cols)
        .map(|p| Vector3::new(sample(3 * p), sample(3 * p + 1), sample(3 * p + 2)))
        .collect();
    Image::new(Shape::grid(rows, cols), data)
}

fn matrix_rows(m: &Matrix3<f64>) -> Value {
    json!((0..3).map(|r| [m[(r, 0)], m[(r, 1)], m[(r, 2)]]).collect::<Vec<_>>())
}

fn glyph(kind: &ManifoldKind, c: &[f64]) -> Result<Value> {
    Ok(match kind {
        ManifoldKind::Spd => {
            let e = SymmetricEigen::new(&from_row_major(c));
            let mut order = [0, 1, 2];
            order.sort_by(|&a, &b| e.values[b].total_cmp(&e.values[a]));
            let vectors: Vec<[f64; 3]> = order
                .iter()
                .map(|&i| {
                    let v = e.vectors.column(i);
                    [v[0], v[1], v[2]]
                })
                .collect();
            json!({
                "eigenvalues": order.map(|i| e.values[i]),
                "eigenvectors": vectors,
            })
        }
        ManifoldKind::Rotations => {
            let r = from_row_major(c);
            let theta = rotation_angle(&r);
            let axis = if theta == 0.0 {
                Vector3::z()
            } else if theta > 3.0 {
                // near π the skew part vanishes; read the axis off R + I
                let s = (r + Matrix3::identity()) * 0.5;
                let col = (0..3).max_by(|&a, &b| s[(a, a)].total_cmp(&s[(b, b)])).unwrap();
                s.column(col).normalize()
            } else {
                vee(&rotation_log(&r).0).normalize()
            };
            json!({ "axis": [axis.x, axis.y, axis.z], "angle": theta, "matrix": matrix_rows(&r) })
        }
        ManifoldKind::Sphere => json!({ "direction": [c[0], c[1], c[2]] }),
        ManifoldKind::Circle => json!({ "angle": c[0] }),
        other => {
            return Err(Error::Argument(format!("glyph export supports s1, s2, so3 and pos3, not {other}")))
        }
    })
}

/// Per-pixel glyph parameters: eigen-decompositions for tensors, axis and
/// angle for rotations, directions for S² and angles for S¹.
pub fn write_glyph_json<W: Write>(raw: &RawMvf, mut w: W) -> Result<()> {
    let glyphs = (0..raw.shape.len())
        .map(|i| {
            let (row, col) = (i / raw.shape.cols(), i % raw.shape.cols());
            let mut g = glyph(&raw.kind, raw.pixel(i))?;
            g["row"] = json!(row);
            g["col"] = json!(col);
            Ok(g)
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = json!({
        "schema": GLYPH_SCHEMA,
        "manifold": raw.kind.tag(),
        "shape": raw.shape.dims(),
        "glyphs": glyphs,
    });
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Error::Format(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}
