//! Body description files.
//!
//! ```json
//! {"schema": 1, "kind": "angle", "vertex": [0, 0], "arm1": [1, 0], "arm2": [0, 1], "theta": 1.5707963267948966}
//! {"schema": 1, "kind": "strip", "line1": {"base": [0, 0], "dir": [1, 0]}, "line2": {"base": [0, 1], "dir": [1, 0]}}
//! {"schema": 1, "kind": "polygon", "vertices": [[0, 0], [6, 0], [0, 2]]}
//! {"schema": 1, "kind": "ellipse", "center": [0, 0], "semi_axes": [12, 1.6], "rotation": 0}
//! {"schema": 1, "kind": "polytope", "halfspaces": [{"normal": [1, 0], "offset": 1}, ...]}
//! {"schema": 1, "kind": "simplex", "vertices": [[1, -1, 0], [1, 1, 0], [-1, 0, 1], [-1, 0, -1]]}
//! {"schema": 1, "kind": "ellipsoid", "center": [0, 0, 0], "semi_axes": [1, 2, 3]}
//! {"schema": 1, "kind": "ball", "center": [0, 0, 0], "radius": 1}
//! ```
//!
//! Polygon vertices are counter-clockwise. `theta` and `rotation` are
//! optional; a stated `theta` is checked against the arms. Halfspace normals
//! need not be unit vectors.

use serde::{Deserialize, Serialize};

use super::{Angle2D, Body, Ellipse2D, Ellipsoid, Halfspace, Polygon2D, PolytopeH, SimplexV, Strip2D};
use crate::error::{Error, Result};
use crate::geometry::{point, Line, Point, Tolerance};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Angle {
        vertex: Vec<f64>,
        arm1: Vec<f64>,
        arm2: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
    Strip {
        line1: LineSpec,
        line2: LineSpec,
    },
    Polygon {
        vertices: Vec<Vec<f64>>,
    },
    Ellipse {
        center: Vec<f64>,
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    Polytope {
        halfspaces: Vec<HalfspaceSpec>,
    },
    Simplex {
        vertices: Vec<Vec<f64>>,
    },
    Ellipsoid {
        center: Vec<f64>,
        semi_axes: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
}

#[derive(Serialize, Deserialize)]
struct BodyFile {
    schema: u32,
    #[serde(flatten)]
    body: BodySpec,
}

fn pts(v: &[Vec<f64>]) -> Vec<Point> {
    v.iter().map(|p| point(p)).collect()
}

fn finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parse("non-finite coordinate".into()))
    }
}

pub(super) fn build(spec: &BodySpec) -> Result<Body> {
    Ok(match spec {
        BodySpec::Angle { vertex, arm1, arm2, theta } => {
            finite(vertex)?;
            let (e, u1, u2) = (point(vertex), point(arm1), point(arm2));
            Body::Angle(match theta {
                Some(t) => Angle2D::with_theta(e, u1, u2, *t, Tolerance { eps: 1e-6 })?,
                None => Angle2D::new(e, u1, u2)?,
            })
        }
        BodySpec::Strip { line1, line2 } => Body::Strip(Strip2D::new(
            Line::new(point(&line1.base), point(&line1.dir))?,
            Line::new(point(&line2.base), point(&line2.dir))?,
        )?),
        BodySpec::Polygon { vertices } => {
            vertices.iter().try_for_each(|v| finite(v))?;
            Body::Polygon(Polygon2D::new(pts(vertices))?)
        }
        BodySpec::Ellipse { center, semi_axes, rotation } => {
            finite(center)?;
            Body::Ellipse(Ellipse2D::new(point(center), semi_axes[0], semi_axes[1], *rotation)?)
        }
        BodySpec::Polytope { halfspaces } => {
            let dim = halfspaces.first().map(|h| h.normal.len()).ok_or_else(|| Error::InvalidBody("no halfspaces".into()))?;
            let hs = halfspaces.iter().map(|h| Halfspace::new(point(&h.normal), h.offset)).collect::<Result<Vec<_>>>()?;
            Body::Polytope(PolytopeH::new(hs, dim)?)
        }
        BodySpec::Simplex { vertices } => {
            vertices.iter().try_for_each(|v| finite(v))?;
            Body::Simplex(SimplexV::new(pts(vertices))?)
        }
        BodySpec::Ellipsoid { center, semi_axes } => {
            finite(center)?;
            Body::Ellipsoid(Ellipsoid::new(point(center), semi_axes.clone())?)
        }
        BodySpec::Ball { center, radius } => {
            finite(center)?;
            Body::Ellipsoid(Ellipsoid::ball(point(center), *radius)?)
        }
    })
}

fn v(p: &Point) -> Vec<f64> {
    p.iter().copied().collect()
}

pub(super) fn describe(body: &Body) -> BodySpec {
    match body {
        Body::Angle(a) => BodySpec::Angle { vertex: v(&a.vertex), arm1: v(&a.u1), arm2: v(&a.u2), theta: Some(a.theta) },
        Body::Strip(s) => BodySpec::Strip {
            line1: LineSpec { base: v(&s.line1.base), dir: v(&s.line1.dir) },
            line2: LineSpec { base: v(&s.line2.base), dir: v(&s.line2.dir) },
        },
        Body::Polygon(p) => BodySpec::Polygon { vertices: p.vertices.iter().map(v).collect() },
        Body::Ellipse(e) => BodySpec::Ellipse { center: v(&e.center), semi_axes: [e.a, e.b], rotation: e.rotation },
        Body::Polytope(p) => BodySpec::Polytope {
            halfspaces: p.halfspaces.iter().map(|h| HalfspaceSpec { normal: v(&h.normal), offset: h.offset }).collect(),
        },
        Body::Simplex(s) => BodySpec::Simplex { vertices: s.vertices.iter().map(v).collect() },
        Body::Ellipsoid(e) => BodySpec::Ellipsoid { center: v(&e.center), semi_axes: e.semi_axes.clone() },
    }
}

pub(super) fn parse(text: &str) -> Result<Body> {
    let file: BodyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.schema != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {}", file.schema)));
    }
    build(&file.body)
}

pub(super) fn render(body: &Body) -> String {
    let file = BodyFile { schema: SCHEMA_VERSION, body: describe(body) };
    serde_json::to_string_pretty(&file).expect("body descriptions always serialize")
}
