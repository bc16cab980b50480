//! SVG figures of packings and tilings.
//!
//! Curves are drawn as polylines: great-circle arcs and cap boundaries on an
//! orthographic view of the sphere, geodesics and circles in the Poincaré
//! disc. Cells, discs and annotations go into separate `<g>` layers, with one
//! `<path>` per cell.

use std::f64::consts::TAU;
use std::fmt::Write;

use super::json::{Packing, PolygonDisc};
use crate::geom::hyper::klein_to_poincare;
use crate::geom::{hyperboloid_to_poincare, EPoint, HDisc, SDisc, Vec3};
use crate::tiling::hyper::boundary_samples;
use crate::tiling::{BBox, ConvexCellH, Tiling};

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Width and height of the drawing area in pixels.
    pub size: f64,
    pub margin: f64,
    /// Euclidean window; defaults to the packing's bbox.
    pub viewport: Option<BBox>,
    /// Direction the sphere is viewed from.
    pub view_dir: Vec3,
    /// Largest sampling step along curves.
    pub step: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            size: 800.0,
            margin: 20.0,
            viewport: None,
            view_dir: Vec3::new(0.0, 0.0, 1.0),
            step: 0.01,
        }
    }
}

/// A number with 17 significant digits, without trailing zeros.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".to_string();
    }
    let e = x.abs().log10().floor() as i32;
    let prec = (16 - e).max(0) as usize;
    let mut s = format!("{x:.prec$}");
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(t);
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// Affine map from view coordinates to pixels, `y` pointing up in the view.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub window: BBox,
    pub scale: f64,
    pub margin: f64,
    pub width: f64,
    pub height: f64,
}

impl Frame {
    pub fn new(window: BBox, opts: &SvgOptions) -> Self {
        let (w, h) = (window.xmax - window.xmin, window.ymax - window.ymin);
        let scale = opts.size / w.max(h);
        Frame {
            window,
            scale,
            margin: opts.margin,
            width: w * scale + 2.0 * opts.margin,
            height: h * scale + 2.0 * opts.margin,
        }
    }

    pub fn to_pixel(&self, p: EPoint) -> EPoint {
        EPoint::new(
            self.margin + (p.x - self.window.xmin) * self.scale,
            self.height - self.margin - (p.y - self.window.ymin) * self.scale,
        )
    }

    pub fn from_pixel(&self, q: EPoint) -> EPoint {
        EPoint::new(
            (q.x - self.margin) / self.scale + self.window.xmin,
            (self.height - self.margin - q.y) / self.scale + self.window.ymin,
        )
    }
}

/// Orthonormal `[e1, e2, v]` with `v` the view direction; the screen shows
/// `(u·e1, u·e2)`.
pub fn ortho_basis(view_dir: Vec3) -> [Vec3; 3] {
    let v = view_dir.normalized();
    let helper = if v.x.abs() < 0.6 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let e1 = helper.cross(v).normalized();
    let e2 = v.cross(e1);
    [e1, e2, v]
}

/// Point of the visible hemisphere over a screen point.
pub fn ortho_lift(basis: &[Vec3; 3], p: EPoint) -> Vec3 {
    let h = (1.0 - p.norm2()).max(0.0).sqrt();
    basis[0] * p.x + basis[1] * p.y + basis[2] * h
}

/// The visible parts of a polyline: one piece when it is fully visible,
/// else the maximal visible runs.
fn visible_runs(basis: &[Vec3; 3], pts: &[Vec3]) -> (Vec<Vec<EPoint>>, bool) {
    let project = |u: Vec3| EPoint::new(u.dot(basis[0]), u.dot(basis[1]));
    if pts.iter().all(|u| u.dot(basis[2]) >= 0.0) {
        return (vec![pts.iter().map(|&u| project(u)).collect()], true);
    }
    let mut runs = Vec::new();
    let mut cur = Vec::new();
    for &u in pts {
        if u.dot(basis[2]) >= 0.0 {
            cur.push(project(u));
        } else if !cur.is_empty() {
            runs.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        runs.push(cur);
    }
    runs.retain(|r| r.len() >= 2);
    (runs, false)
}

/// Poincaré image of a Klein polyline, refined until consecutive points are
/// at most `step` apart.
fn poincare_polyline(klein: &[EPoint], step: f64) -> Vec<EPoint> {
    fn refine(a: EPoint, b: EPoint, step: f64, depth: u32, out: &mut Vec<EPoint>) {
        let (pa, pb) = (klein_to_poincare(a), klein_to_poincare(b));
        if depth == 0 || pa.dist(pb) <= step {
            out.push(pb);
            return;
        }
        let m = a.lerp(b, 0.5);
        refine(a, m, step, depth - 1, out);
        refine(m, b, step, depth - 1, out);
    }
    let Some(&first) = klein.first() else { return Vec::new() };
    let mut out = vec![klein_to_poincare(first)];
    for w in klein.windows(2) {
        refine(w[0], w[1], step, 40, &mut out);
    }
    out
}

fn circle_points(step: f64, f: impl Fn(f64) -> EPoint) -> Vec<EPoint> {
    let count = (TAU / step).ceil() as usize;
    (0..=count).map(|i| f(TAU * i as f64 / count as f64)).collect()
}

fn cap_boundary(d: &SDisc, step: f64) -> Vec<Vec3> {
    let c = d.center.vec();
    let helper = if c.x.abs() < 0.6 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
    let a = c.cross(helper).normalized();
    let b = c.cross(a);
    let (sr, cr) = d.radius.sin_cos();
    let count = (TAU / step).ceil() as usize;
    (0..=count)
        .map(|i| {
            let (s, t) = (TAU * i as f64 / count as f64).sin_cos();
            c * cr + (a * t + b * s) * sr
        })
        .collect()
}

fn hyper_circle(d: &HDisc, step: f64) -> Vec<EPoint> {
    circle_points(step, |t| hyperboloid_to_poincare(d.boundary_point(t)))
}

/// Cell outlines in view coordinates, one entry per cell. The flag tells
/// whether the outline is a single closed loop.
pub fn cell_outlines(tiling: &Tiling, opts: &SvgOptions) -> Vec<(Vec<Vec<EPoint>>, bool)> {
    match tiling {
        Tiling::Euclid(t) => t.cells.iter().map(|c| (vec![c.vertices.clone()], true)).collect(),
        Tiling::Sphere(t) => {
            let basis = ortho_basis(opts.view_dir);
            t.cells
                .iter()
                .map(|c| {
                    let loops = c.boundary_polyline(opts.step);
                    let mut runs = Vec::new();
                    let mut closed = loops.len() == 1;
                    for l in &loops {
                        let (r, all) = visible_runs(&basis, l);
                        closed &= all;
                        runs.extend(r);
                    }
                    (runs, closed)
                })
                .collect()
        }
        Tiling::Hyper(t) => t.cells.iter().map(|c| (vec![hyper_outline(c, opts.step)], true)).collect(),
    }
}

fn hyper_outline(c: &ConvexCellH, step: f64) -> Vec<EPoint> {
    if c.vertices.is_empty() {
        return circle_points(step, EPoint::from_angle);
    }
    poincare_polyline(&boundary_samples(c, step), step)
}

struct Doc {
    frame: Frame,
    out: String,
}

impl Doc {
    fn new(frame: Frame) -> Self {
        let mut out = String::new();
        let (w, h) = (fmt17(frame.width), fmt17(frame.height));
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
        );
        Doc { frame, out }
    }

    fn open(&mut self, id: &str, style: &str) {
        let _ = writeln!(self.out, "<g id=\"{id}\" {style}>");
    }

    fn close(&mut self) {
        self.out.push_str("</g>\n");
    }

    fn path(&mut self, runs: &[Vec<EPoint>], closed: bool) {
        let mut d = String::new();
        for run in runs {
            for (i, &p) in run.iter().enumerate() {
                let q = self.frame.to_pixel(p);
                let _ = write!(d, "{}{} {} ", if i == 0 { 'M' } else { 'L' }, fmt17(q.x), fmt17(q.y));
            }
            if closed {
                d.push_str("Z ");
            }
        }
        let _ = writeln!(self.out, "<path d=\"{}\"/>", d.trim_end());
    }

    fn circle(&mut self, c: EPoint, r_px: f64) {
        let q = self.frame.to_pixel(c);
        let _ = writeln!(
            self.out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            fmt17(q.x),
            fmt17(q.y),
            fmt17(r_px)
        );
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

const CELL_STYLE: &str = "fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"1\"";
const DISC_STYLE: &str = "fill=\"#f2c14e\" fill-opacity=\"0.6\" stroke=\"#7a5c00\" stroke-width=\"0.75\"";
const NOTE_STYLE: &str = "fill=\"#b22222\" stroke=\"#b22222\" stroke-width=\"0.5\"";
const FRAME_STYLE: &str = "fill=\"none\" stroke=\"#888888\" stroke-width=\"0.75\"";

fn unit_window() -> BBox {
    BBox {
        xmin: -1.0,
        ymin: -1.0,
        xmax: 1.0,
        ymax: 1.0,
    }
}

/// Draws a circle packing and, when given, a tiling of the same geometry.
pub fn render_svg(packing: &Packing, tiling: Option<&Tiling>, opts: &SvgOptions) -> String {
    let window = match packing {
        Packing::Euclid { bbox, .. } => opts.viewport.unwrap_or(*bbox),
        _ => unit_window(),
    };
    let mut doc = Doc::new(Frame::new(window, opts));
    let outline = circle_points(opts.step, EPoint::from_angle);
    doc.open("frame", FRAME_STYLE);
    match packing {
        Packing::Euclid { bbox, .. } => {
            let c = [
                EPoint::new(bbox.xmin, bbox.ymin),
                EPoint::new(bbox.xmax, bbox.ymin),
                EPoint::new(bbox.xmax, bbox.ymax),
                EPoint::new(bbox.xmin, bbox.ymax),
            ];
            doc.path(&[c.to_vec()], true)
        }
        _ => doc.path(&[outline], true),
    }
    doc.close();

    doc.open("cells", CELL_STYLE);
    if let Some(t) = tiling.filter(|t| same_geometry(packing, t)) {
        for (runs, closed) in cell_outlines(t, opts) {
            doc.path(&runs, closed);
        }
    }
    doc.close();

    let basis = ortho_basis(opts.view_dir);
    doc.open("discs", DISC_STYLE);
    match packing {
        Packing::Euclid { discs, .. } => {
            for d in discs {
                let r = d.radius * doc.frame.scale;
                doc.circle(d.center, r);
            }
        }
        Packing::Sphere(discs) => {
            for d in discs {
                let (runs, closed) = visible_runs(&basis, &cap_boundary(d, opts.step));
                if !runs.is_empty() {
                    doc.path(&runs, closed);
                }
            }
        }
        Packing::Hyper(discs) => {
            for d in discs {
                doc.path(&[hyper_circle(d, opts.step)], true);
            }
        }
    }
    doc.close();

    doc.open("annotations", NOTE_STYLE);
    match packing {
        Packing::Euclid { discs, .. } => discs.iter().for_each(|d| doc.circle(d.center, 1.5)),
        Packing::Sphere(discs) => {
            for d in discs.iter().filter(|d| d.center.vec().dot(basis[2]) >= 0.0) {
                let u = d.center.vec();
                doc.circle(EPoint::new(u.dot(basis[0]), u.dot(basis[1])), 1.5);
            }
        }
        Packing::Hyper(discs) => discs.iter().for_each(|d| doc.circle(hyperboloid_to_poincare(d.center), 1.5)),
    }
    doc.close();
    doc.finish()
}

fn same_geometry(p: &Packing, t: &Tiling) -> bool {
    matches!(
        (p, t),
        (Packing::Euclid { .. }, Tiling::Euclid(_)) | (Packing::Sphere(_), Tiling::Sphere(_)) | (Packing::Hyper(_), Tiling::Hyper(_))
    )
}

/// Draws the copies of a polygon packing with the ring polygon, cap apexes
/// and contact points as annotations.
pub fn render_polygon_packing(pd: &PolygonDisc, window: BBox, opts: &SvgOptions) -> String {
    let mut doc = Doc::new(Frame::new(opts.viewport.unwrap_or(window), opts));
    doc.open("cells", CELL_STYLE);
    doc.close();
    doc.open("discs", DISC_STYLE);
    for c in &pd.copies {
        doc.path(&[c.disc.vertices().to_vec()], true);
    }
    doc.close();
    doc.open("annotations", NOTE_STYLE);
    doc.path(&[pd.ring.vertices().to_vec()], true);
    for c in &pd.copies {
        doc.circle(c.contact_in, 1.5);
        doc.circle(c.contact_out, 1.5);
    }
    doc.close();
    doc.finish()
}
