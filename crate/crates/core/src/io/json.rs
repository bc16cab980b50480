//! Packing and tiling documents.
//!
//! Sphere discs are unit 3-vectors with an angular radius; hyperbolic discs
//! are Poincaré-disc centers with a hyperbolic radius. Documents keep the
//! numbers exactly as read, so `emit(parse(text))` reproduces emitted text.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::IoError;
use crate::caps::ConvexDisc;
use crate::geom::hyper::{klein_to_poincare, poincare_to_klein};
use crate::geom::sphere::RADIUS_MARGIN;
use crate::geom::{
    hyperboloid_to_poincare, mdot, poincare_to_hyperboloid, EDisc, EPoint, GeodesicH, GreatCircleS, HDisc,
    OrientedLineE, SDisc, SPoint, Vec3,
};
use crate::nonsep::{Certificate, Construction, ConstructionParams, PlacedDisc, RingPolygon};
use crate::tiling::{
    BBox, ConvexCellE, ConvexCellH, ConvexCellS, EuclidTiling, HVertex, HyperTiling, SphereTiling, Tiling,
    MIN_CLEARANCE,
};

/// Accepted deviation of a sphere center from unit length.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Geometry {
    #[serde(rename = "euclidean")]
    Euclidean,
    #[serde(rename = "sphere")]
    Sphere,
    #[serde(rename = "hyperbolic-poincare")]
    Hyperbolic,
}

impl Geometry {
    pub fn as_str(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Sphere => "sphere",
            Geometry::Hyperbolic => "hyperbolic-poincare",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Geometry {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" | "plane" => Ok(Geometry::Euclidean),
            "sphere" => Ok(Geometry::Sphere),
            "hyperbolic-poincare" | "hyperbolic" => Ok(Geometry::Hyperbolic),
            _ => Err(format!("unknown geometry {s:?} (euclidean, sphere, hyperbolic-poincare)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscRecord {
    pub center: Vec<f64>,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Meta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub extra: BTreeMap<String, Value>,
}

impl Meta {
    pub fn tool() -> Self {
        Meta {
            tool_version: Some(format!("polysep {}", env!("CARGO_PKG_VERSION"))),
            ..Meta::default()
        }
    }

    pub fn with_seed(seed: u64) -> Self {
        Meta {
            seed: Some(seed),
            ..Meta::tool()
        }
    }
}

/// A packing of similar copies of one convex polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDisc {
    pub base: ConvexDisc,
    pub params: ConstructionParams,
    pub ring: RingPolygon,
    pub copies: Vec<PlacedDisc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackingDocument {
    pub geometry: Geometry,
    /// `[xmin, ymin, xmax, ymax]`, Euclidean only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<[f64; 4]>,
    #[serde(default)]
    pub discs: Vec<DiscRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polygon_disc: Option<PolygonDisc>,
    #[serde(default)]
    pub meta: Meta,
}

/// A validated packing in model coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Packing {
    Euclid { discs: Vec<EDisc>, bbox: BBox },
    Sphere(Vec<SDisc>),
    Hyper(Vec<HDisc>),
}

impl Packing {
    pub fn geometry(&self) -> Geometry {
        match self {
            Packing::Euclid { .. } => Geometry::Euclidean,
            Packing::Sphere(_) => Geometry::Sphere,
            Packing::Hyper(_) => Geometry::Hyperbolic,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Packing::Euclid { discs, .. } => discs.len(),
            Packing::Sphere(d) => d.len(),
            Packing::Hyper(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn coords<const N: usize>(v: &[f64], path: &str) -> Result<[f64; N], IoError> {
    let a: [f64; N] = v
        .try_into()
        .map_err(|_| schema(path, format!("expected {N} coordinates, found {}", v.len())))?;
    if a.iter().any(|x| !x.is_finite()) {
        return Err(schema(path, "non-finite coordinate"));
    }
    Ok(a)
}

/// Box around the discs with a margin of a tenth of their extent.
fn enclosing_bbox(discs: &[EDisc]) -> Result<BBox, IoError> {
    if discs.is_empty() {
        return Ok(BBox::unit());
    }
    let lo = discs.iter().fold(EPoint::new(f64::MAX, f64::MAX), |a, d| {
        EPoint::new(a.x.min(d.center.x - d.radius), a.y.min(d.center.y - d.radius))
    });
    let hi = discs.iter().fold(EPoint::new(f64::MIN, f64::MIN), |a, d| {
        EPoint::new(a.x.max(d.center.x + d.radius), a.y.max(d.center.y + d.radius))
    });
    let m = 0.1 * (hi - lo).norm();
    BBox::new(lo.x - m, lo.y - m, hi.x + m, hi.y + m).map_err(|e| schema("/discs", e.to_string()))
}

fn check_pairs<T>(discs: &[T], clearance: impl Fn(&T, &T) -> f64) -> Result<(), IoError> {
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            let c = clearance(&discs[i], &discs[j]);
            if !(c > MIN_CLEARANCE) {
                return Err(IoError::Overlap(i, j, c));
            }
        }
    }
    Ok(())
}

impl PackingDocument {
    /// Validates the document and converts it to model coordinates.
    pub fn packing(&self) -> Result<Packing, IoError> {
        if self.bbox.is_some() && self.geometry != Geometry::Euclidean {
            return Err(schema("/bbox", "bbox is only meaningful for euclidean packings"));
        }
        let radius = |k: usize, r: f64| -> Result<f64, IoError> {
            if r > 0.0 && r.is_finite() {
                Ok(r)
            } else {
                Err(schema(format!("/discs/{k}/r"), format!("invalid radius {r}")))
            }
        };
        match self.geometry {
            Geometry::Euclidean => {
                let mut discs = Vec::with_capacity(self.discs.len());
                for (k, d) in self.discs.iter().enumerate() {
                    let c = coords::<2>(&d.center, &format!("/discs/{k}/center"))?;
                    discs.push(EDisc::new(c.into(), radius(k, d.r)?).expect("checked radius"));
                }
                let bbox = match self.bbox {
                    Some([x0, y0, x1, y1]) => BBox::new(x0, y0, x1, y1).map_err(|e| schema("/bbox", e.to_string()))?,
                    None => enclosing_bbox(&discs)?,
                };
                if let Some(k) = discs.iter().position(|d| !bbox.contains_disc(d, 0.0)) {
                    return Err(schema(format!("/discs/{k}"), "disc not inside bbox"));
                }
                check_pairs(&discs, EDisc::clearance)?;
                Ok(Packing::Euclid { discs, bbox })
            }
            Geometry::Sphere => {
                let mut discs = Vec::with_capacity(self.discs.len());
                for (k, d) in self.discs.iter().enumerate() {
                    let path = format!("/discs/{k}/center");
                    let v = Vec3::from(coords::<3>(&d.center, &path)?);
                    let n = v.norm();
                    if (n - 1.0).abs() > UNIT_TOL {
                        return Err(schema(path, format!("center not unit (norm {n})")));
                    }
                    let c = SPoint::normalize(v).map_err(|e| schema(&path, e.to_string()))?;
                    let r = radius(k, d.r)?;
                    let disc = SDisc::new(c, r).map_err(|_| {
                        schema(
                            format!("/discs/{k}/r"),
                            format!("radius {r} not below π/2 - {RADIUS_MARGIN:e}"),
                        )
                    })?;
                    discs.push(disc);
                }
                check_pairs(&discs, SDisc::clearance)?;
                Ok(Packing::Sphere(discs))
            }
            Geometry::Hyperbolic => {
                let mut discs = Vec::with_capacity(self.discs.len());
                for (k, d) in self.discs.iter().enumerate() {
                    let path = format!("/discs/{k}/center");
                    let p = EPoint::from(coords::<2>(&d.center, &path)?);
                    let c = poincare_to_hyperboloid(p)
                        .map_err(|_| schema(&path, format!("outside Poincaré disc (|c| = {})", p.norm())))?;
                    discs.push(HDisc::new(c, radius(k, d.r)?).expect("checked radius"));
                }
                check_pairs(&discs, HDisc::clearance)?;
                Ok(Packing::Hyper(discs))
            }
        }
    }

    pub fn from_packing(packing: &Packing, meta: Meta) -> Self {
        let (geometry, bbox, discs) = match packing {
            Packing::Euclid { discs, bbox } => (
                Geometry::Euclidean,
                Some([bbox.xmin, bbox.ymin, bbox.xmax, bbox.ymax]),
                discs
                    .iter()
                    .map(|d| DiscRecord {
                        center: vec![d.center.x, d.center.y],
                        r: d.radius,
                    })
                    .collect(),
            ),
            Packing::Sphere(ds) => (
                Geometry::Sphere,
                None,
                ds.iter()
                    .map(|d| DiscRecord {
                        center: d.center.vec().to_array().to_vec(),
                        r: d.radius,
                    })
                    .collect(),
            ),
            Packing::Hyper(ds) => (
                Geometry::Hyperbolic,
                None,
                ds.iter()
                    .map(|d| {
                        let p = hyperboloid_to_poincare(d.center);
                        DiscRecord {
                            center: vec![p.x, p.y],
                            r: d.radius,
                        }
                    })
                    .collect(),
            ),
        };
        PackingDocument {
            geometry,
            bbox,
            discs,
            polygon_disc: None,
            meta,
        }
    }

    /// Polygon packing of a construction, framed by its bounding box.
    pub fn from_construction(c: &Construction, certificate: Option<Certificate>, meta: Meta) -> Self {
        let pts = c.copies.iter().flat_map(|p| p.disc.vertices().iter().copied());
        let (lo, hi) = pts.fold(
            (EPoint::new(f64::MAX, f64::MAX), EPoint::new(f64::MIN, f64::MIN)),
            |(lo, hi), p| (EPoint::new(lo.x.min(p.x), lo.y.min(p.y)), EPoint::new(hi.x.max(p.x), hi.y.max(p.y))),
        );
        let m = 0.05 * (hi - lo).norm();
        PackingDocument {
            geometry: Geometry::Euclidean,
            bbox: Some([lo.x - m, lo.y - m, hi.x + m, hi.y + m]),
            discs: Vec::new(),
            polygon_disc: Some(PolygonDisc {
                base: c.base.clone(),
                params: c.params.clone(),
                ring: c.ring.clone(),
                copies: c.copies.clone(),
                certificate,
            }),
            meta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintRecord {
    pub normal: Vec<f64>,
    /// Euclidean half-planes only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellRecord {
    pub owner: usize,
    pub constraints: Vec<ConstraintRecord>,
    pub neighbors: Vec<Option<usize>>,
    pub vertices: Vec<Vec<f64>>,
    /// Constraint index of the edge leaving each vertex; `null` marks an arc
    /// at infinity. Sphere and hyperbolic cells only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<Option<usize>>>,
    /// Which vertices are ideal points, hyperbolic cells only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Domain {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clip_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TilingDocument {
    pub geometry: Geometry,
    pub cells: Vec<CellRecord>,
    #[serde(default)]
    pub domain: Domain,
}

fn euclid_record(c: &ConvexCellE) -> CellRecord {
    CellRecord {
        owner: c.owner,
        constraints: c
            .constraints
            .iter()
            .map(|l| ConstraintRecord {
                normal: vec![l.normal.x, l.normal.y],
                offset: Some(l.offset),
            })
            .collect(),
        neighbors: c.neighbors.clone(),
        vertices: c.vertices.iter().map(|p| vec![p.x, p.y]).collect(),
        edges: None,
        ideal: None,
    }
}

fn sphere_record(c: &ConvexCellS) -> CellRecord {
    CellRecord {
        owner: c.owner,
        constraints: c
            .constraints
            .iter()
            .map(|g| ConstraintRecord {
                normal: g.normal.to_array().to_vec(),
                offset: None,
            })
            .collect(),
        neighbors: c.neighbors.clone(),
        vertices: c.vertices.iter().map(|u| u.vec().to_array().to_vec()).collect(),
        edges: Some(c.edges.iter().map(|&e| Some(e)).collect()),
        ideal: None,
    }
}

fn hyper_record(c: &ConvexCellH) -> CellRecord {
    CellRecord {
        owner: c.owner,
        constraints: c
            .constraints
            .iter()
            .map(|g| ConstraintRecord {
                normal: g.normal.to_array().to_vec(),
                offset: None,
            })
            .collect(),
        neighbors: c.neighbors.clone(),
        vertices: c
            .vertices
            .iter()
            .map(|v| {
                let p = if v.ideal { v.klein } else { klein_to_poincare(v.klein) };
                vec![p.x, p.y]
            })
            .collect(),
        edges: Some(c.vertices.iter().map(|v| v.edge).collect()),
        ideal: Some(c.vertices.iter().map(|v| v.ideal).collect()),
    }
}

/// Unit vector as stored, or rescaled when it is visibly off.
fn unit3(v: Vec3, path: &str) -> Result<Vec3, IoError> {
    let n = v.norm();
    if !(n > 0.0) {
        return Err(schema(path, "zero normal"));
    }
    Ok(if (n - 1.0).abs() <= 1e-12 { v } else { v * (1.0 / n) })
}

fn cell_prefix(k: usize) -> String {
    format!("/cells/{k}")
}

fn check_refs(cell: &CellRecord, k: usize) -> Result<(), IoError> {
    if cell.neighbors.len() != cell.constraints.len() {
        return Err(schema(
            format!("{}/neighbors", cell_prefix(k)),
            format!("{} neighbors for {} constraints", cell.neighbors.len(), cell.constraints.len()),
        ));
    }
    if let Some(edges) = &cell.edges {
        if let Some(i) = edges.iter().position(|e| e.is_some_and(|e| e >= cell.constraints.len())) {
            return Err(schema(format!("{}/edges/{i}", cell_prefix(k)), "constraint index out of range"));
        }
    }
    Ok(())
}

fn euclid_cell(cell: &CellRecord, k: usize) -> Result<ConvexCellE, IoError> {
    let pre = cell_prefix(k);
    let mut constraints = Vec::with_capacity(cell.constraints.len());
    for (i, c) in cell.constraints.iter().enumerate() {
        let path = format!("{pre}/constraints/{i}");
        let n = EPoint::from(coords::<2>(&c.normal, &format!("{path}/normal"))?);
        let offset = c
            .offset
            .filter(|o| o.is_finite())
            .ok_or_else(|| schema(format!("{path}/offset"), "missing or non-finite offset"))?;
        let line = if (n.norm() - 1.0).abs() <= 1e-12 {
            OrientedLineE { normal: n, offset }
        } else {
            OrientedLineE::new(n, offset).map_err(|e| schema(&path, e.to_string()))?
        };
        constraints.push(line);
    }
    let vertices = cell
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| coords::<2>(v, &format!("{pre}/vertices/{i}")).map(EPoint::from))
        .collect::<Result<_, _>>()?;
    Ok(ConvexCellE {
        owner: cell.owner,
        constraints,
        neighbors: cell.neighbors.clone(),
        vertices,
    })
}

fn sphere_cell(cell: &CellRecord, k: usize) -> Result<ConvexCellS, IoError> {
    let pre = cell_prefix(k);
    let mut constraints = Vec::with_capacity(cell.constraints.len());
    for (i, c) in cell.constraints.iter().enumerate() {
        let path = format!("{pre}/constraints/{i}/normal");
        let n = unit3(coords::<3>(&c.normal, &path)?.into(), &path)?;
        constraints.push(GreatCircleS { normal: n });
    }
    let mut vertices = Vec::with_capacity(cell.vertices.len());
    for (i, v) in cell.vertices.iter().enumerate() {
        let path = format!("{pre}/vertices/{i}");
        let u = Vec3::from(coords::<3>(v, &path)?);
        if (u.norm() - 1.0).abs() > UNIT_TOL {
            return Err(schema(path, format!("vertex not unit (norm {})", u.norm())));
        }
        vertices.push(SPoint::normalize(u).map_err(|e| schema(&path, e.to_string()))?);
    }
    let edges = cell
        .edges
        .as_ref()
        .ok_or_else(|| schema(format!("{pre}/edges"), "sphere cells need edges"))?
        .iter()
        .enumerate()
        .map(|(i, e)| e.ok_or_else(|| schema(format!("{pre}/edges/{i}"), "null edge on the sphere")))
        .collect::<Result<Vec<_>, _>>()?;
    let expected = if vertices.is_empty() { edges.len().min(1) } else { vertices.len() };
    if edges.len() != expected {
        return Err(schema(format!("{pre}/edges"), "edge count does not match the vertex loop"));
    }
    Ok(ConvexCellS {
        owner: cell.owner,
        constraints,
        neighbors: cell.neighbors.clone(),
        vertices,
        edges,
    })
}

fn hyper_cell(cell: &CellRecord, k: usize) -> Result<ConvexCellH, IoError> {
    let pre = cell_prefix(k);
    let mut constraints = Vec::with_capacity(cell.constraints.len());
    for (i, c) in cell.constraints.iter().enumerate() {
        let path = format!("{pre}/constraints/{i}/normal");
        let n = Vec3::from(coords::<3>(&c.normal, &path)?);
        let q = mdot(n, n);
        let g = if (q - 1.0).abs() <= 1e-12 {
            GeodesicH { normal: n }
        } else {
            GeodesicH::new(n).map_err(|_| schema(&path, "normal is not spacelike"))?
        };
        constraints.push(g);
    }
    let edges = cell
        .edges
        .as_ref()
        .ok_or_else(|| schema(format!("{pre}/edges"), "hyperbolic cells need edges"))?;
    let ideal = cell
        .ideal
        .as_ref()
        .ok_or_else(|| schema(format!("{pre}/ideal"), "hyperbolic cells need ideal flags"))?;
    if edges.len() != cell.vertices.len() || ideal.len() != cell.vertices.len() {
        return Err(schema(pre, "vertices, edges and ideal differ in length"));
    }
    let mut vertices = Vec::with_capacity(cell.vertices.len());
    for (i, v) in cell.vertices.iter().enumerate() {
        let path = format!("{pre}/vertices/{i}");
        let p = EPoint::from(coords::<2>(v, &path)?);
        let klein = if ideal[i] {
            if (p.norm() - 1.0).abs() > UNIT_TOL {
                return Err(schema(path, "ideal vertex off the unit circle"));
            }
            p
        } else {
            if !(p.norm() < 1.0) {
                return Err(schema(path, format!("outside Poincaré disc (|c| = {})", p.norm())));
            }
            poincare_to_klein(p)
        };
        vertices.push(HVertex {
            klein,
            ideal: ideal[i],
            edge: edges[i],
        });
    }
    Ok(ConvexCellH {
        owner: cell.owner,
        constraints,
        neighbors: cell.neighbors.clone(),
        vertices,
    })
}

impl TilingDocument {
    pub fn from_tiling(t: &Tiling) -> Self {
        match t {
            Tiling::Euclid(t) => TilingDocument {
                geometry: Geometry::Euclidean,
                cells: t.cells.iter().map(euclid_record).collect(),
                domain: Domain {
                    bbox: Some([t.bbox.xmin, t.bbox.ymin, t.bbox.xmax, t.bbox.ymax]),
                    clip_radius: None,
                },
            },
            Tiling::Sphere(t) => TilingDocument {
                geometry: Geometry::Sphere,
                cells: t.cells.iter().map(sphere_record).collect(),
                domain: Domain::default(),
            },
            Tiling::Hyper(t) => TilingDocument {
                geometry: Geometry::Hyperbolic,
                cells: t.cells.iter().map(hyper_record).collect(),
                domain: Domain {
                    bbox: None,
                    clip_radius: Some(t.clip_radius),
                },
            },
        }
    }

    /// Structural validation and conversion; whether the cells actually
    /// separate a packing is left to the verifiers.
    pub fn tiling(&self) -> Result<Tiling, IoError> {
        for (k, c) in self.cells.iter().enumerate() {
            check_refs(c, k)?;
        }
        match self.geometry {
            Geometry::Euclidean => {
                let [x0, y0, x1, y1] = self
                    .domain
                    .bbox
                    .ok_or_else(|| schema("/domain/bbox", "euclidean tilings need a bbox"))?;
                let bbox = BBox::new(x0, y0, x1, y1).map_err(|e| schema("/domain/bbox", e.to_string()))?;
                let cells = self.cells.iter().enumerate().map(|(k, c)| euclid_cell(c, k)).collect::<Result<_, _>>()?;
                Ok(Tiling::Euclid(EuclidTiling { bbox, cells }))
            }
            Geometry::Sphere => {
                let cells = self.cells.iter().enumerate().map(|(k, c)| sphere_cell(c, k)).collect::<Result<_, _>>()?;
                Ok(Tiling::Sphere(SphereTiling { cells }))
            }
            Geometry::Hyperbolic => {
                let clip_radius = self
                    .domain
                    .clip_radius
                    .filter(|r| *r > 0.0 && r.is_finite())
                    .ok_or_else(|| schema("/domain/clip_radius", "hyperbolic tilings need a positive clip_radius"))?;
                let cells = self.cells.iter().enumerate().map(|(k, c)| hyper_cell(c, k)).collect::<Result<_, _>>()?;
                Ok(Tiling::Hyper(HyperTiling { clip_radius, cells }))
            }
        }
    }
}

/// `/a/0/b` from a deserializer path.
fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .map(|seg| match seg {
            Segment::Seq { index } => format!("/{index}"),
            Segment::Map { key } => format!("/{}", key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => format!("/{variant}"),
            Segment::Unknown => "/?".to_string(),
        })
        .collect()
}

fn parse<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, IoError> {
    let text = std::str::from_utf8(bytes)?;
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = pointer(e.path());
        schema(path, e.into_inner().to_string())
    })?;
    de.end().map_err(|e| schema("", e.to_string()))?;
    Ok(value)
}

fn emit<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents hold only finite numbers");
    s.push('\n');
    s
}

/// Parses and validates a packing document.
pub fn parse_packing(bytes: &[u8]) -> Result<PackingDocument, IoError> {
    let doc: PackingDocument = parse(bytes)?;
    doc.packing()?;
    Ok(doc)
}

pub fn emit_packing(doc: &PackingDocument) -> String {
    emit(doc)
}

/// Parses a tiling document and checks its structure.
pub fn parse_tiling(bytes: &[u8]) -> Result<TilingDocument, IoError> {
    let doc: TilingDocument = parse(bytes)?;
    doc.tiling()?;
    Ok(doc)
}

pub fn emit_tiling(doc: &TilingDocument) -> String {
    emit(doc)
}

/// Reads a bare polygon `{"vertices": [[x, y], ...]}`.
pub fn parse_polygon(bytes: &[u8]) -> Result<ConvexDisc, IoError> {
    parse(bytes)
}
