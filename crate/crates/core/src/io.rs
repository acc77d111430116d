//! Mesh files in, SVG and JSON out.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Point3;
use crate::lattice::Node;
use crate::layout::Layout;
use crate::mesh::{Mesh, MeshError};
use crate::scalar::Scalar;
use crate::verify::Report;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    /// By file extension, falling back to sniffing for an `OFF` header.
    pub fn detect(path: &Path, bytes: &[u8]) -> MeshFormat {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("off") => MeshFormat::Off,
            Some("obj") => MeshFormat::Obj,
            _ if String::from_utf8_lossy(bytes).trim_start().starts_with("OFF") => MeshFormat::Off,
            _ => MeshFormat::Obj,
        }
    }
}

/// Points and polygons as read, before mesh validation.
pub type Polygons = (Vec<Point3<f64>>, Vec<Vec<usize>>);

pub fn parse_mesh<S: Scalar>(bytes: &[u8], format: MeshFormat) -> Result<Mesh<S>, InputError> {
    let (points, faces) = match format {
        MeshFormat::Off => parse_off(bytes)?,
        MeshFormat::Obj => parse_obj(bytes)?,
    };
    Ok(Mesh::new(points.into_iter().map(|p| p.map(S::from_f64_lossy)).collect(), &faces)?)
}

fn text(bytes: &[u8]) -> Result<&str, ParseError> {
    std::str::from_utf8(bytes).map_err(|e| ParseError { line: 0, reason: format!("not UTF-8: {e}") })
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, ParseError> {
    let tok = tok.ok_or_else(|| ParseError { line, reason: format!("missing {what}") })?;
    tok.parse().map_err(|_| ParseError { line, reason: format!("bad {what} {tok:?}") })
}

fn finite(v: f64, line: usize) -> Result<f64, ParseError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseError { line, reason: format!("coordinate {v} is not finite") })
    }
}

/// Object File Format: `OFF`, then `V F E`, then vertex and face records.
pub fn parse_off(bytes: &[u8]) -> Result<Polygons, ParseError> {
    let mut lines = text(bytes)?
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(ParseError { line: 1, reason: "empty file".into() })?;
    let mut rest = header.strip_prefix("OFF").ok_or(ParseError { line, reason: "missing OFF header".into() })?.trim();
    let mut counts_line = line;
    if rest.is_empty() {
        let (l, next) = lines.next().ok_or(ParseError { line, reason: "missing counts".into() })?;
        counts_line = l;
        rest = next;
    }
    let mut tok = rest.split_whitespace();
    let nv: usize = number(tok.next(), counts_line, "vertex count")?;
    let nf: usize = number(tok.next(), counts_line, "face count")?;

    let mut points = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, l) = lines.next().ok_or(ParseError { line: 0, reason: format!("expected {nv} vertices") })?;
        let mut tok = l.split_whitespace();
        let mut p = [0.0; 3];
        for c in &mut p {
            *c = finite(number(tok.next(), line, "coordinate")?, line)?;
        }
        points.push(p);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, l) = lines.next().ok_or(ParseError { line: 0, reason: format!("expected {nf} faces") })?;
        let mut tok = l.split_whitespace();
        let k: usize = number(tok.next(), line, "face arity")?;
        let face = (0..k).map(|_| number(tok.next(), line, "vertex index")).collect::<Result<Vec<usize>, _>>()?;
        if let Some(&bad) = face.iter().find(|&&i| i >= nv) {
            return Err(ParseError { line, reason: format!("vertex index {bad} out of range") });
        }
        faces.push(face);
    }
    Ok((points, faces))
}

/// Wavefront OBJ: `v` and `f` records only; indices are 1-based, negative
/// indices count back from the latest vertex.
pub fn parse_obj(bytes: &[u8]) -> Result<Polygons, ParseError> {
    let mut points = Vec::new();
    let mut faces = Vec::new();
    for (i, l) in text(bytes)?.lines().enumerate() {
        let line = i + 1;
        let mut tok = l.split('#').next().unwrap_or("").split_whitespace();
        match tok.next() {
            Some("v") => {
                let mut p = [0.0; 3];
                for c in &mut p {
                    *c = finite(number(tok.next(), line, "coordinate")?, line)?;
                }
                points.push(p);
            }
            Some("f") => {
                let face = tok
                    .map(|t| {
                        let first = t.split('/').next().unwrap_or("");
                        let idx: i64 = number(Some(first), line, "vertex index")?;
                        let n = points.len() as i64;
                        let resolved = match idx {
                            0 => return Err(ParseError { line, reason: "vertex index 0 (indices are 1-based)".into() }),
                            i if i > 0 => i - 1,
                            i => n + i,
                        };
                        if resolved < 0 || resolved >= n {
                            return Err(ParseError { line, reason: format!("vertex index {idx} out of range") });
                        }
                        Ok(resolved as usize)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                faces.push(face);
            }
            _ => {}
        }
    }
    Ok((points, faces))
}

pub fn write_off<S: Scalar>(m: &Mesh<S>) -> String {
    let mut s = format!("OFF\n{} {} {}\n", m.vertex_count(), m.triangle_count(), m.edge_count());
    for p in m.points() {
        let _ = writeln!(s, "{} {} {}", p[0], p[1], p[2]);
    }
    for t in m.triangles() {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgStyle {
    /// Margin on each side as a fraction of the layout's larger extent.
    pub margin: f64,
    /// Stroke width as a fraction of the layout's height.
    pub stroke: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle { margin: 0.02, stroke: 0.004 }
    }
}

/// SVG 1.1 drawing: one polygon per triangle, a vertical line at every
/// strip boundary, triangles of two-triangle strips shaded.
pub fn emit_svg<S: Scalar>(l: &Layout<S>, style: SvgStyle) -> String {
    assert!(!l.strips.is_empty(), "a layout always has at least one strip");
    let [x0, y0, x1, y1] = l.bounding_box().map(|v| v.to_f64_exact());
    let (w, h) = (x1 - x0, y1 - y0);
    let pad = style.margin * w.max(h);
    let stroke = style.stroke * h.max(f64::MIN_POSITIVE);
    // The y axis points down in SVG.
    let (vx, vy, vw, vh) = (x0 - pad, -y1 - pad, w + 2.0 * pad, h + 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{vx} {vy} {vw} {vh}" width="{}" height="{}">"#,
        (1000.0 * vw / vh).clamp(100.0, 100000.0).round(),
        1000
    );
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="{stroke}" stroke-linejoin="round">"#);
    for pt in &l.triangles {
        let quad = matches!(l.strips[pt.strip].element, Node::Edge(_));
        let fill = if quad { "#999999" } else { "none" };
        let pts: Vec<String> = pt.corners.iter().map(|c| format!("{},{}", c[0].to_f64_exact(), -c[1].to_f64_exact())).collect();
        let _ = writeln!(s, r#"<polygon data-triangle="{}" fill="{fill}" points="{}"/>"#, pt.triangle, pts.join(" "));
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g stroke="#3366cc" stroke-width="{}" stroke-dasharray="{} {}">"##, stroke / 2.0, stroke * 2.0, stroke * 2.0);
    let mut xs: Vec<f64> = l.strips.iter().map(|st| st.left.to_f64_exact()).collect();
    xs.push(l.strips.last().unwrap().right.to_f64_exact());
    for x in xs {
        let _ = writeln!(s, r#"<line class="strip" x1="{x}" y1="{vy}" x2="{x}" y2="{}"/>"#, vy + vh);
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub edges: usize,
    pub facets: usize,
    pub genus: usize,
}

/// The mesh itself, so that a document can be re-verified on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshData<S> {
    pub points: Vec<Point3<S>>,
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunKind {
    Path,
    Cycle,
    Verify,
}

/// Everything one run produces, as written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDocument<S> {
    pub kind: RunKind,
    pub stats: MeshStats,
    pub mesh: MeshData<S>,
    pub nodes: Vec<Node>,
    pub quad_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout<S>>,
    pub report: Report,
}

impl<S: Scalar + Serialize> RunDocument<S> {
    pub fn new(kind: RunKind, m: &Mesh<S>, nodes: Vec<Node>, layout: Option<Layout<S>>, report: Report) -> Self {
        RunDocument {
            kind,
            stats: MeshStats {
                vertices: m.vertex_count(),
                edges: m.edge_count(),
                facets: m.triangle_count(),
                genus: m.genus(),
            },
            mesh: MeshData { points: m.points().to_vec(), triangles: m.triangles().to_vec() },
            quad_count: nodes.iter().filter(|n| matches!(n, Node::Edge(_))).count(),
            nodes,
            layout,
            report,
        }
    }

    /// Rebuilds and validates the stored mesh.
    pub fn mesh(&self) -> Result<Mesh<S>, MeshError> {
        Mesh::from_triangles(self.mesh.points.clone(), self.mesh.triangles.clone())
    }
}

/// Pretty-printed JSON. Numbers use the shortest text that parses back to
/// the identical float, so a reparsed layout is bit-for-bit the same.
pub fn emit_json<S: Scalar + Serialize>(doc: &RunDocument<S>) -> String {
    serde_json::to_string_pretty(doc).expect("documents always serialize")
}

pub fn parse_json<S: Scalar + for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<RunDocument<S>, serde_json::Error> {
    serde_json::from_slice(bytes)
}
