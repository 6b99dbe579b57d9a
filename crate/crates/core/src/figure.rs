//! Static SVG figures of a planar cone, its radial image and the closed convex hull.
//!
//! Output is byte-stable: coordinates are written with a fixed number of
//! decimals and every element is emitted in a fixed order.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::hulls::convex_hull_2d;
use crate::norm::{NormKind, SourceNorm};
use crate::scalar::Field;

const SIZE: f64 = 400.0;
const SCALE: f64 = 90.0;
const RAY_LENGTH: f64 = 2.1;
const ANGLE_TOL: f64 = 1e-9;
const ARC_STEP: f64 = PI / 180.0;

const STYLE: &str = "\
.axis{stroke:#bbbbbb;stroke-width:1}\
.sphere{fill:none;stroke:#333333;stroke-width:1.5;stroke-dasharray:6 4}\
.hull{fill:#8fb8de;fill-opacity:0.45;stroke:#2b6cb0;stroke-width:1}\
.cone{stroke:#2f855a;stroke-width:2;fill:none}\
.cone-fill{fill:#9ae6b4;fill-opacity:0.35;stroke:none}\
.slice{stroke:#805ad5;stroke-width:2;fill:none}\
.image{stroke:#e53e3e;stroke-width:3.5;fill:none;stroke-linecap:round}\
.image-point{fill:#e53e3e;stroke:none}\
.origin{stroke:#1a202c;stroke-width:1.5}\
.closed{fill:#1a202c}\
.open{fill:#ffffff}\
.label{font-family:monospace;font-size:13px;fill:#1a202c}";

/// A piece of `ρ(K)` described by polar angles.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    Point(f64),
    /// Counterclockwise from the first angle to the second.
    Arc(f64, f64),
    Full,
}

fn angle(v: &[f64]) -> f64 {
    v[1].atan2(v[0]).rem_euclid(TAU)
}

fn ccw_gap(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

/// `ρ` of the closure of a finitely generated planar convex cone.
fn convex_pieces(dirs: &[Vec<f64>], out: &mut Vec<Piece>) {
    let mut angles: Vec<f64> = dirs.iter().filter(|d| d[0] != 0.0 || d[1] != 0.0).map(|d| angle(d)).collect();
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < ANGLE_TOL);
    match angles.len() {
        0 => return,
        1 => return out.push(Piece::Point(angles[0])),
        2 if (ccw_gap(angles[0], angles[1]) - PI).abs() < ANGLE_TOL => {
            out.push(Piece::Point(angles[0]));
            out.push(Piece::Point(angles[1]));
            return;
        }
        _ => {}
    }
    let k = angles.len();
    for i in 0..k {
        let (a, b) = (angles[i], angles[(i + 1) % k]);
        if ccw_gap(a, b) >= PI - ANGLE_TOL {
            return out.push(Piece::Arc(b, a));
        }
    }
    out.push(Piece::Full);
}

fn pieces(k: &ConeSpec<f64>, out: &mut Vec<Piece>) {
    match k {
        ConeSpec::RayFan { generators, .. } => out.extend(generators.points().iter().map(|g| Piece::Point(angle(g)))),
        ConeSpec::ConvexCone { generators: g, .. } | ConeSpec::PolytopeCone { vertices: g, .. } => {
            convex_pieces(g.points(), out)
        }
        ConeSpec::AffineSlice(s) => {
            let mut dirs = s.support_points();
            if let Some(r) = s.recession_direction() {
                let minus: Vec<f64> = r.iter().map(|c| -c).collect();
                if s.verify_recession(&minus) {
                    dirs.push(minus);
                }
                dirs.push(r);
            }
            convex_pieces(&dirs, out)
        }
        ConeSpec::Union(members) => members.iter().for_each(|m| pieces(m, out)),
    }
}

/// Corner angles of the unit sphere for polyhedral norms.
fn corner_angles(n: &SourceNorm) -> Vec<f64> {
    match n.kind() {
        NormKind::LInf => (0..4).map(|i| PI / 4.0 + i as f64 * PI / 2.0).collect(),
        NormKind::L1 => (0..4).map(|i| i as f64 * PI / 2.0).collect(),
        _ => Vec::new(),
    }
}

/// Sphere points along a counterclockwise arc, including its corners.
fn arc_points(n: &SourceNorm, from: f64, to: f64) -> Vec<[f64; 2]> {
    let span = ccw_gap(from, to);
    let mut ts: Vec<f64> = Vec::new();
    let steps = (span / ARC_STEP).ceil().max(1.0) as usize;
    if !n.is_polyhedral() {
        ts.extend((0..=steps).map(|i| from + span * i as f64 / steps as f64));
    } else {
        ts.push(from);
        let mut inner: Vec<f64> = corner_angles(n).into_iter().map(|c| ccw_gap(from, c)).filter(|g| *g > 0.0 && *g < span).collect();
        inner.sort_by(f64::total_cmp);
        ts.extend(inner.into_iter().map(|g| from + g));
        ts.push(from + span);
    }
    ts.into_iter().map(|t| n.sphere_point_2d(t)).collect()
}

fn full_sphere(n: &SourceNorm) -> Vec<[f64; 2]> {
    let mut pts = arc_points(n, 0.0, TAU - ARC_STEP / 2.0);
    if n.is_polyhedral() {
        pts = corner_angles(n).into_iter().map(|t| n.sphere_point_2d(t)).collect();
    }
    pts
}

fn px(p: [f64; 2]) -> (f64, f64) {
    (SIZE / 2.0 + SCALE * p[0], SIZE / 2.0 - SCALE * p[1])
}

fn fmt_points(pts: &[[f64; 2]]) -> String {
    let mut s = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = px(*p);
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.3},{y:.3}");
    }
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A planar figure under a source norm, optionally with a cone overlay.
#[derive(Debug, Clone)]
pub struct Figure {
    norm: SourceNorm,
    cone: Option<ConeSpec<f64>>,
    label: Option<String>,
}

impl Figure {
    pub fn new(norm: SourceNorm) -> Self {
        Figure { norm, cone: None, label: None }
    }

    pub fn with_cone<F: Field>(mut self, k: &ConeSpec<F>) -> Result<Self> {
        if k.dim() != 2 {
            return Err(Error::Unsupported(format!("figures are planar; the cone has dimension {}", k.dim())));
        }
        self.cone = Some(k.to_float());
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn render(&self) -> Result<String> {
        let n = &self.norm;
        let mut svg = String::new();
        let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
        );
        let _ = writeln!(svg, "<style>{STYLE}</style>");
        let (c, _) = px([0.0, 0.0]);
        let _ = writeln!(svg, r#"<line class="axis" x1="0" y1="{c:.3}" x2="{SIZE}" y2="{c:.3}"/>"#);
        let _ = writeln!(svg, r#"<line class="axis" x1="{c:.3}" y1="0" x2="{c:.3}" y2="{SIZE}"/>"#);

        let overlay = self.cone.as_ref().map(|k| {
            let mut ps = Vec::new();
            pieces(k, &mut ps);
            (k, ps)
        });

        if let Some((k, ps)) = &overlay {
            self.cone_layer(k, ps, &mut svg);
            let mut hull_pts: Vec<Vec<f64>> = Vec::new();
            for p in ps {
                let pts = match *p {
                    Piece::Point(t) => vec![n.sphere_point_2d(t)],
                    Piece::Arc(a, b) => arc_points(n, a, b),
                    Piece::Full => full_sphere(n),
                };
                hull_pts.extend(pts.iter().map(|q| q.to_vec()));
            }
            if k.origin_status() {
                hull_pts.push(vec![0.0, 0.0]);
            }
            if !hull_pts.is_empty() {
                let hull = convex_hull_2d(&hull_pts)?;
                let verts: Vec<[f64; 2]> = hull.vertices().iter().map(|v| [v[0], v[1]]).collect();
                match verts.len() {
                    0 => {}
                    1 => {
                        let (x, y) = px(verts[0]);
                        let _ = writeln!(svg, r#"<circle class="hull" cx="{x:.3}" cy="{y:.3}" r="2.000"/>"#);
                    }
                    2 => {
                        let _ = writeln!(svg, r#"<polyline class="hull" points="{}"/>"#, fmt_points(&verts));
                    }
                    _ => {
                        let _ = writeln!(svg, r#"<polygon class="hull" points="{}"/>"#, fmt_points(&verts));
                    }
                }
            }
        }

        let _ = writeln!(svg, r#"<polygon class="sphere" points="{}"/>"#, fmt_points(&full_sphere(n)));

        if let Some((k, ps)) = &overlay {
            for p in ps {
                match *p {
                    Piece::Point(t) => {
                        let (x, y) = px(n.sphere_point_2d(t));
                        let _ = writeln!(svg, r#"<circle class="image-point" cx="{x:.3}" cy="{y:.3}" r="4.000"/>"#);
                    }
                    Piece::Arc(a, b) => {
                        let _ = writeln!(svg, r#"<polyline class="image" points="{}"/>"#, fmt_points(&arc_points(n, a, b)));
                    }
                    Piece::Full => {
                        let _ = writeln!(svg, r#"<polygon class="image" points="{}"/>"#, fmt_points(&full_sphere(n)));
                    }
                }
            }
            let (x, y) = px([0.0, 0.0]);
            let fill = if k.origin_status() { "closed" } else { "open" };
            let _ = writeln!(svg, r#"<circle class="origin {fill}" cx="{x:.3}" cy="{y:.3}" r="4.500"/>"#);
        }

        if let Some(label) = &self.label {
            let _ = writeln!(svg, r#"<text class="label" x="10" y="20">{}</text>"#, escape(label));
        }
        svg.push_str("</svg>\n");
        Ok(svg)
    }

    fn cone_layer(&self, k: &ConeSpec<f64>, ps: &[Piece], svg: &mut String) {
        let ray = |t: f64| [RAY_LENGTH * t.cos(), RAY_LENGTH * t.sin()];
        for p in ps {
            match *p {
                Piece::Point(t) => {
                    let _ = writeln!(svg, r#"<polyline class="cone" points="{}"/>"#, fmt_points(&[[0.0, 0.0], ray(t)]));
                }
                Piece::Arc(a, b) => {
                    let span = ccw_gap(a, b);
                    let steps = (span / ARC_STEP).ceil().max(1.0) as usize;
                    let mut pts = vec![[0.0, 0.0]];
                    pts.extend((0..=steps).map(|i| ray(a + span * i as f64 / steps as f64)));
                    let _ = writeln!(svg, r#"<polygon class="cone-fill" points="{}"/>"#, fmt_points(&pts));
                    let _ = writeln!(svg, r#"<polyline class="cone" points="{}"/>"#, fmt_points(&[ray(a), [0.0, 0.0], ray(b)]));
                }
                Piece::Full => {
                    let h = RAY_LENGTH;
                    let _ = writeln!(svg, r#"<polygon class="cone-fill" points="{}"/>"#, fmt_points(&[[-h, -h], [h, -h], [h, h], [-h, h]]));
                }
            }
        }
        self.slice_layer(k, svg);
    }

    fn slice_layer(&self, k: &ConeSpec<f64>, svg: &mut String) {
        let ConeSpec::AffineSlice(s) = k else { return };
        if let Ok(v) = s.vertices() {
            let pts: Vec<[f64; 2]> = v.iter().map(|p| [p[0], p[1]]).collect();
            let _ = writeln!(svg, r#"<polyline class="slice" points="{}"/>"#, fmt_points(&pts));
        } else if let (Some(p), Some(r)) = (s.feasible_point(), s.recession_direction()) {
            let back = s.verify_recession(&[-r[0], -r[1]]);
            let far = 10.0;
            let start = if back { [p[0] - far * r[0], p[1] - far * r[1]] } else { [p[0], p[1]] };
            let end = [p[0] + far * r[0], p[1] + far * r[1]];
            let _ = writeln!(svg, r#"<polyline class="slice" points="{}"/>"#, fmt_points(&[start, end]));
        }
    }
}

/// One-call rendering of `K` under `n`.
pub fn render_svg<F: Field>(k: &ConeSpec<F>, n: &SourceNorm, label: Option<&str>) -> Result<String> {
    let mut fig = Figure::new(*n).with_cone(k)?;
    if let Some(l) = label {
        fig = fig.with_label(l);
    }
    fig.render()
}
