//! Convex bodies: membership, line chords, supporting hyperplanes and the
//! face dimension `d_C`.
//!
//! Every polyhedral variant (angle, strip, polygon, H-polytope, simplex) is
//! stored with its halfspace list so that chords, active sets and ranks share
//! one implementation. Ellipses and ellipsoids share the quadric code.

mod json;
pub(crate) mod polyhedral;
mod quadric;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use json::{BodySpec, HalfspaceSpec, LineSpec, SCHEMA_VERSION};
pub use polyhedral::Halfspace;
pub(crate) use polyhedral::{clip_line, dedup_constraints};
pub(crate) use quadric::Quadric;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{cross2, Hyperplane, Line, Point, Tolerance, Vector};

/// Angle with vertex `E` and arms along `u1`, `u2` (the convex region between them).
#[derive(Clone, Debug, PartialEq)]
pub struct Angle2D {
    pub vertex: Point,
    pub u1: Vector,
    pub u2: Vector,
    pub theta: f64,
    halfspaces: Vec<Halfspace>,
}

impl Angle2D {
    pub fn new(vertex: Point, u1: Vector, u2: Vector) -> Result<Self> {
        check_dim(2, vertex.len())?;
        check_dim(2, u1.len())?;
        check_dim(2, u2.len())?;
        let (n1, n2) = (u1.norm(), u2.norm());
        if !(n1 > 0.0 && n2 > 0.0) {
            return Err(Error::InvalidBody("angle arms need nonzero directions".into()));
        }
        let u1 = u1 / n1;
        let u2 = u2 / n2;
        let theta = cross2(&u1, &u2).abs().atan2(u1.dot(&u2));
        if !(theta > 1e-9 && theta < std::f64::consts::PI - 1e-9) {
            return Err(Error::InvalidBody(format!("angle opening {theta} is not in (0, π)")));
        }
        let inward = |u: &Vector, other: &Vector| {
            let w = other - u * u.dot(other);
            w.normalize()
        };
        let in1 = inward(&u1, &u2);
        let in2 = inward(&u2, &u1);
        let halfspaces = vec![
            Halfspace::new(-&in1, -in1.dot(&vertex))?,
            Halfspace::new(-&in2, -in2.dot(&vertex))?,
        ];
        Ok(Angle2D { vertex, u1, u2, theta, halfspaces })
    }

    /// As [`Angle2D::new`], additionally checking a stated opening angle.
    pub fn with_theta(vertex: Point, u1: Vector, u2: Vector, theta: f64, tol: Tolerance) -> Result<Self> {
        let a = Angle2D::new(vertex, u1, u2)?;
        if (a.theta - theta).abs() > tol.eps.max(1e-9) {
            return Err(Error::InvalidBody(format!("stated theta {theta} but the arms make {}", a.theta)));
        }
        Ok(a)
    }

    /// Coordinates `(x, y)` with `p = E + x·u1 + y·u2`.
    pub fn oblique_coords(&self, p: &Point) -> (f64, f64) {
        let d = p - &self.vertex;
        let det = cross2(&self.u1, &self.u2);
        (cross2(&d, &self.u2) / det, cross2(&self.u1, &d) / det)
    }
}

/// Region between two parallel lines.
#[derive(Clone, Debug, PartialEq)]
pub struct Strip2D {
    pub line1: Line,
    pub line2: Line,
    halfspaces: Vec<Halfspace>,
}

impl Strip2D {
    pub fn new(line1: Line, line2: Line) -> Result<Self> {
        check_dim(2, line1.dim())?;
        check_dim(2, line2.dim())?;
        if cross2(&line1.dir, &line2.dir).abs() > 1e-9 {
            return Err(Error::InvalidBody("strip lines are not parallel".into()));
        }
        let width = line1.distance_to(&line2.base);
        if width <= 1e-12 {
            return Err(Error::InvalidBody("strip lines coincide".into()));
        }
        let side = |l: &Line, other: &Point| -> Result<Halfspace> {
            let n = Vector::from_vec(vec![-l.dir[1], l.dir[0]]);
            let n = if n.dot(&(other - &l.base)) > 0.0 { -n } else { n };
            let off = n.dot(&l.base);
            Halfspace::new(n, off)
        };
        let halfspaces = vec![side(&line1, &line2.base)?, side(&line2, &line1.base)?];
        Ok(Strip2D { line1, line2, halfspaces })
    }

    pub fn width(&self) -> f64 {
        self.line1.distance_to(&self.line2.base)
    }
}

/// Convex polygon with counter-clockwise vertices; edge `i` runs from
/// vertex `i` to vertex `i + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon2D {
    pub vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
}

impl Polygon2D {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidBody("a polygon needs at least 3 vertices".into()));
        }
        for v in &vertices {
            check_dim(2, v.len())?;
        }
        let k = vertices.len();
        let scale = diameter_of(&vertices).max(1e-300);
        let mut halfspaces = Vec::with_capacity(k);
        for i in 0..k {
            let p = &vertices[i];
            let q = &vertices[(i + 1) % k];
            let r = &vertices[(i + 2) % k];
            let turn = cross2(&(q - p), &(r - q));
            if !(turn > 1e-12 * scale * scale) {
                return Err(Error::InvalidBody(format!("vertices are not strictly convex counter-clockwise at index {}", (i + 1) % k)));
            }
            let e = q - p;
            let n = Vector::from_vec(vec![e[1], -e[0]]);
            let off = n.dot(p);
            halfspaces.push(Halfspace::new(n, off)?);
        }
        Ok(Polygon2D { vertices, halfspaces })
    }
}

/// Ellipse with semi-axes `a` (along the rotated x-axis) and `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipse2D {
    pub center: Point,
    pub a: f64,
    pub b: f64,
    pub rotation: f64,
    quad: Quadric,
}

impl Ellipse2D {
    pub fn new(center: Point, a: f64, b: f64, rotation: f64) -> Result<Self> {
        check_dim(2, center.len())?;
        if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() && rotation.is_finite()) {
            return Err(Error::InvalidBody("ellipse semi-axes must be positive".into()));
        }
        let (s, c) = rotation.sin_cos();
        // inv = diag(1/a, 1/b) · R(-rotation)
        let inv = DMatrix::from_row_slice(2, 2, &[c / a, s / a, -s / b, c / b]);
        let quad = Quadric { center: center.clone(), inv, min_axis: a.min(b), max_axis: a.max(b) };
        Ok(Ellipse2D { center, a, b, rotation, quad })
    }
}

/// Axis-aligned ellipsoid in any dimension (a ball when all semi-axes agree).
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid {
    pub center: Point,
    pub semi_axes: Vec<f64>,
    quad: Quadric,
}

impl Ellipsoid {
    pub fn new(center: Point, semi_axes: Vec<f64>) -> Result<Self> {
        check_dim(center.len(), semi_axes.len())?;
        if center.len() < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        if semi_axes.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidBody("semi-axes must be positive".into()));
        }
        let n = center.len();
        let inv = DMatrix::from_fn(n, n, |r, c| if r == c { 1.0 / semi_axes[r] } else { 0.0 });
        let min_axis = semi_axes.iter().copied().fold(f64::INFINITY, f64::min);
        let max_axis = semi_axes.iter().copied().fold(0.0, f64::max);
        let quad = Quadric { center: center.clone(), inv, min_axis, max_axis };
        Ok(Ellipsoid { center, semi_axes, quad })
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let n = center.len();
        Ellipsoid::new(center, vec![radius; n])
    }
}

/// Bounded full-dimensional polytope `{x : <a_i, x> <= b_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeH {
    pub halfspaces: Vec<Halfspace>,
    pub dim: usize,
    vertices: Vec<Point>,
    interior: Point,
    diam: f64,
}

impl PolytopeH {
    pub fn new(halfspaces: Vec<Halfspace>, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBody("dimension must be at least 2".into()));
        }
        for h in &halfspaces {
            check_dim(dim, h.normal.len())?;
        }
        if halfspaces.len() <= dim {
            return Err(Error::InvalidBody(format!("{} halfspaces cannot bound a region in dimension {dim}", halfspaces.len())));
        }
        let eps = Tolerance::default().eps;
        let vertices = polyhedral::enumerate_vertices(&halfspaces, dim, eps)?;
        if vertices.len() <= dim {
            return Err(Error::InvalidBody("polytope is empty, unbounded or lower-dimensional".into()));
        }
        Self::from_parts(halfspaces, dim, vertices)
    }

    fn from_parts(halfspaces: Vec<Halfspace>, dim: usize, vertices: Vec<Point>) -> Result<Self> {
        let interior = centroid(&vertices);
        let diam = diameter_of(&vertices);
        let scale_tol = Tolerance::default().at_scale(diam);
        if halfspaces.iter().any(|h| h.slack(&interior) <= scale_tol) {
            return Err(Error::InvalidBody("polytope is not full-dimensional".into()));
        }
        // Sampled boundedness: rays from the interior point must exit.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut dirs: Vec<Vector> = Vec::new();
        for i in 0..dim {
            let mut e = Vector::zeros(dim);
            e[i] = 1.0;
            dirs.push(e);
        }
        for _ in 0..dim {
            let v = Vector::from_fn(dim, |_, _| StandardNormal.sample(&mut rng));
            dirs.push(v.normalize());
        }
        for d in &dirs {
            for s in [1.0, -1.0] {
                let dir = d * s;
                match clip_line(&halfspaces, &interior, &dir, scale_tol) {
                    Some(c) if c.lo.is_finite() && c.hi.is_finite() => {}
                    _ => return Err(Error::InvalidBody("polytope is unbounded".into())),
                }
            }
        }
        Ok(PolytopeH { halfspaces, dim, vertices, interior, diam })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }
}

/// Simplex given by `n + 1` affinely independent vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexV {
    pub vertices: Vec<Point>,
    poly: PolytopeH,
}

impl SimplexV {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let hs = polyhedral::simplex_halfspaces(&vertices, Tolerance::default().eps)?;
        let dim = vertices[0].len();
        let poly = PolytopeH::from_parts(hs, dim, vertices.clone())?;
        Ok(SimplexV { vertices, poly })
    }

    pub fn as_polytope(&self) -> &PolytopeH {
        &self.poly
    }
}

/// Facet halfspaces of a simplex, each facet plane oriented toward the omitted vertex.
pub fn simplex_to_halfspaces(s: &SimplexV) -> PolytopeH {
    s.poly.clone()
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Angle(Angle2D),
    Strip(Strip2D),
    Polygon(Polygon2D),
    Ellipse(Ellipse2D),
    Polytope(PolytopeH),
    Simplex(SimplexV),
    Ellipsoid(Ellipsoid),
}

pub(crate) enum Shape<'a> {
    Polyhedral(&'a [Halfspace]),
    Quadric(&'a Quadric),
}

/// How a boundary point is supported.
#[derive(Clone, Debug, PartialEq)]
pub enum FeatureSupport {
    /// Indices of the active halfspaces (arms, edges or facets).
    Facets(Vec<usize>),
    /// Smooth point with this outward unit normal.
    Smooth { normal: Vector },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFeature {
    pub point: Point,
    pub support: FeatureSupport,
    pub d_c: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Interior,
    Boundary(BoundaryFeature),
    Exterior,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    Unique(Hyperplane),
    /// Extreme supporting hyperplanes of a non-smooth point.
    Cone(Vec<Hyperplane>),
}

impl Support {
    pub fn is_unique(&self) -> bool {
        matches!(self, Support::Unique(_))
    }

    pub fn hyperplanes(&self) -> Vec<Hyperplane> {
        match self {
            Support::Unique(h) => vec![h.clone()],
            Support::Cone(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotClass {
    Interior,
    Boundary,
    Exterior,
}

/// Segment cut from a body by a line through a pivot.
///
/// For an interior pivot `a` is the endpoint in the direction of `dir`; for
/// an exterior pivot `b` is the endpoint nearer the pivot, so `b ∈ [pivot, a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chord {
    pub a: Point,
    pub b: Point,
    pub pivot: Point,
    pub dir: Vector,
    pub t_a: f64,
    pub t_b: f64,
    pub pivot_class: PivotClass,
    pub degenerate: bool,
}

impl Chord {
    pub fn length(&self) -> f64 {
        (self.t_a - self.t_b).abs()
    }

    pub fn line(&self) -> Line {
        Line { base: self.pivot.clone(), dir: self.dir.clone() }
    }

    pub fn midpoint(&self) -> Point {
        (&self.a + &self.b) * 0.5
    }

    /// `|OA|` and `|OB|`.
    pub fn pivot_distances(&self) -> (f64, f64) {
        (self.t_a.abs(), self.t_b.abs())
    }

    /// Largest distance between corresponding endpoints, trying both labelings.
    pub fn endpoint_distance(&self, other: &Chord) -> f64 {
        let same = (&self.a - &other.a).norm().max((&self.b - &other.b).norm());
        let swap = (&self.a - &other.b).norm().max((&self.b - &other.a).norm());
        same.min(swap)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChordResult {
    Segment(Chord),
    /// The line meets the body in a ray or a whole line.
    Unbounded,
    Empty,
}

impl ChordResult {
    pub fn segment(self) -> Option<Chord> {
        match self {
            ChordResult::Segment(c) => Some(c),
            _ => None,
        }
    }
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Angle(_) | Body::Strip(_) | Body::Polygon(_) | Body::Ellipse(_) => 2,
            Body::Polytope(p) => p.dim,
            Body::Simplex(s) => s.poly.dim,
            Body::Ellipsoid(e) => e.center.len(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Body::Angle(_) => "angle",
            Body::Strip(_) => "strip",
            Body::Polygon(_) => "polygon",
            Body::Ellipse(_) => "ellipse",
            Body::Polytope(_) => "polytope",
            Body::Simplex(_) => "simplex",
            Body::Ellipsoid(_) => "ellipsoid",
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Body::Angle(_) | Body::Strip(_))
    }

    /// Smooth bodies have a unique supporting hyperplane at every boundary point.
    pub fn is_smooth(&self) -> bool {
        matches!(self, Body::Ellipse(_) | Body::Ellipsoid(_))
    }

    pub fn is_polyhedral(&self) -> bool {
        !self.is_smooth()
    }

    pub fn halfspaces(&self) -> Option<&[Halfspace]> {
        match self {
            Body::Angle(a) => Some(&a.halfspaces),
            Body::Strip(s) => Some(&s.halfspaces),
            Body::Polygon(p) => Some(&p.halfspaces),
            Body::Polytope(p) => Some(&p.halfspaces),
            Body::Simplex(s) => Some(&s.poly.halfspaces),
            Body::Ellipse(_) | Body::Ellipsoid(_) => None,
        }
    }

    pub(crate) fn shape(&self) -> Shape<'_> {
        match self {
            Body::Ellipse(e) => Shape::Quadric(&e.quad),
            Body::Ellipsoid(e) => Shape::Quadric(&e.quad),
            _ => Shape::Polyhedral(self.halfspaces().unwrap_or(&[])),
        }
    }

    /// Corner points: polygon and polytope vertices, the apex of an angle.
    pub fn vertices(&self) -> Vec<Point> {
        match self {
            Body::Angle(a) => vec![a.vertex.clone()],
            Body::Polygon(p) => p.vertices.clone(),
            Body::Polytope(p) => p.vertices.clone(),
            Body::Simplex(s) => s.vertices.clone(),
            Body::Strip(_) | Body::Ellipse(_) | Body::Ellipsoid(_) => vec![],
        }
    }

    pub fn diameter(&self) -> Option<f64> {
        match self {
            Body::Angle(_) | Body::Strip(_) => None,
            Body::Polygon(p) => Some(diameter_of(&p.vertices)),
            Body::Polytope(p) => Some(p.diam),
            Body::Simplex(s) => Some(s.poly.diam),
            Body::Ellipse(e) => Some(2.0 * e.quad.max_axis),
            Body::Ellipsoid(e) => Some(2.0 * e.quad.max_axis),
        }
    }

    /// Configuration scale for the tolerance policy.
    pub fn scale(&self) -> f64 {
        match self {
            Body::Angle(_) => 1.0,
            Body::Strip(s) => s.width(),
            _ => self.diameter().unwrap_or(1.0),
        }
    }

    /// A point well inside the body.
    pub fn interior_point(&self) -> Point {
        match self {
            Body::Angle(a) => &a.vertex + (&a.u1 + &a.u2).normalize(),
            Body::Strip(s) => {
                let foot = s.line2.at(s.line2.param_of(&s.line1.base));
                (&s.line1.base + foot) * 0.5
            }
            Body::Polygon(p) => centroid(&p.vertices),
            Body::Polytope(p) => p.interior.clone(),
            Body::Simplex(s) => s.poly.interior.clone(),
            Body::Ellipse(e) => e.center.clone(),
            Body::Ellipsoid(e) => e.center.clone(),
        }
    }

    /// Parameter interval `[lo, hi]` of `{base + t·dir}` inside the body.
    pub(crate) fn interval(&self, base: &Point, dir: &Vector, tol: Tolerance) -> Option<(f64, f64)> {
        let t_tol = tol.at_scale(self.scale());
        match self.shape() {
            Shape::Polyhedral(hs) => clip_line(hs, base, dir, t_tol).map(|c| (c.lo, c.hi)),
            Shape::Quadric(q) => q.interval(base, dir, t_tol),
        }
    }

    fn pivot_class(&self, p: &Point, tol: Tolerance) -> PivotClass {
        match self.shape() {
            Shape::Polyhedral(hs) => {
                let mut on = false;
                for h in hs {
                    let s = h.slack(p);
                    let t = h.active_tol(tol.eps);
                    if s < -t {
                        return PivotClass::Exterior;
                    }
                    if s <= t {
                        on = true;
                    }
                }
                if on {
                    PivotClass::Boundary
                } else {
                    PivotClass::Interior
                }
            }
            Shape::Quadric(q) => {
                let r = q.radial(p);
                if (r - 1.0).abs() * q.min_axis <= tol.at_scale(self.scale()) {
                    PivotClass::Boundary
                } else if r < 1.0 {
                    PivotClass::Interior
                } else {
                    PivotClass::Exterior
                }
            }
        }
    }

    pub fn classify_point(&self, p: &Point, tol: Tolerance) -> Result<Classification> {
        check_dim(self.dim(), p.len())?;
        Ok(match self.pivot_class(p, tol) {
            PivotClass::Interior => Classification::Interior,
            PivotClass::Exterior => Classification::Exterior,
            PivotClass::Boundary => Classification::Boundary(self.boundary_feature(p, tol)),
        })
    }

    /// Feature at a point assumed to lie on the boundary. When no constraint
    /// is active within tolerance the nearest one is used.
    pub fn boundary_feature(&self, p: &Point, tol: Tolerance) -> BoundaryFeature {
        let n = self.dim();
        match self.shape() {
            Shape::Polyhedral(hs) => {
                let mut active = polyhedral::active_set(hs, p, tol.eps);
                if active.is_empty() {
                    let nearest = (0..hs.len())
                        .min_by(|&i, &j| hs[i].slack(p).abs().total_cmp(&hs[j].slack(p).abs()))
                        .unwrap_or(0);
                    active.push(nearest);
                }
                let d_c = polyhedral::face_dim_from_active(hs, &active, n, tol.eps);
                BoundaryFeature { point: p.clone(), support: FeatureSupport::Facets(active), d_c }
            }
            Shape::Quadric(q) => {
                BoundaryFeature { point: p.clone(), support: FeatureSupport::Smooth { normal: q.normal_at(p) }, d_c: 0 }
            }
        }
    }

    /// Chord cut by `l`; the line's base point is the pivot.
    pub fn chord(&self, l: &Line, tol: Tolerance) -> Result<ChordResult> {
        check_dim(self.dim(), l.dim())?;
        Ok(self.chord_through(&l.base, &l.dir, tol))
    }

    /// Chord on the line through `pivot` with unit direction `dir`.
    pub fn chord_through(&self, pivot: &Point, dir: &Vector, tol: Tolerance) -> ChordResult {
        let Some((lo, hi)) = self.interval(pivot, dir, tol) else {
            return ChordResult::Empty;
        };
        if !lo.is_finite() || !hi.is_finite() {
            return ChordResult::Unbounded;
        }
        let class = self.pivot_class(pivot, tol);
        let (t_a, t_b) = match class {
            PivotClass::Interior => (hi, lo),
            _ => {
                if lo.abs() <= hi.abs() {
                    (hi, lo)
                } else {
                    (lo, hi)
                }
            }
        };
        let t_tol = tol.at_scale(self.scale());
        ChordResult::Segment(Chord {
            a: pivot + dir * t_a,
            b: pivot + dir * t_b,
            pivot: pivot.clone(),
            dir: dir.clone(),
            t_a,
            t_b,
            pivot_class: class,
            degenerate: (hi - lo) <= t_tol,
        })
    }

    pub fn supporting_hyperplanes_at(&self, f: &BoundaryFeature) -> Result<Support> {
        match &f.support {
            FeatureSupport::Smooth { normal } => Ok(Support::Unique(Hyperplane::through(&f.point, normal.clone())?)),
            FeatureSupport::Facets(active) => {
                let hs = self.halfspaces().ok_or(Error::InteriorPoint)?;
                let eps = Tolerance::default().eps;
                let kept = dedup_constraints(hs, active, eps);
                match kept.len() {
                    0 => Err(Error::InteriorPoint),
                    1 => Ok(Support::Unique(hs[kept[0]].boundary())),
                    _ if self.dim() == 2 => {
                        // The two normals spanning the widest angle bound the cone.
                        let mut best = (kept[0], kept[1], f64::INFINITY);
                        for (i, &p) in kept.iter().enumerate() {
                            for &q in &kept[i + 1..] {
                                let d = hs[p].normal.dot(&hs[q].normal);
                                if d < best.2 {
                                    best = (p, q, d);
                                }
                            }
                        }
                        Ok(Support::Cone(vec![hs[best.0].boundary(), hs[best.1].boundary()]))
                    }
                    _ => Ok(Support::Cone(kept.iter().map(|&i| hs[i].boundary()).collect())),
                }
            }
        }
    }

    /// `d_C(P)`: `n` for interior points, `n - rank{active normals}` on the boundary.
    pub fn face_dimension(&self, p: &Point, tol: Tolerance) -> Result<usize> {
        match self.classify_point(p, tol)? {
            Classification::Interior => Ok(self.dim()),
            Classification::Boundary(f) => Ok(f.d_c),
            Classification::Exterior => Err(Error::InvalidArgument("point is outside the body".into())),
        }
    }

    pub fn from_spec(spec: &BodySpec) -> Result<Body> {
        json::build(spec)
    }

    pub fn to_spec(&self) -> BodySpec {
        json::describe(self)
    }

    pub fn from_json(text: &str) -> Result<Body> {
        json::parse(text)
    }

    pub fn to_json(&self) -> String {
        json::render(self)
    }
}

pub(crate) fn centroid(points: &[Point]) -> Point {
    let mut c = Point::zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

pub(crate) fn diameter_of(points: &[Point]) -> f64 {
    let mut d = 0.0_f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max((p - q).norm());
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use proptest::prelude::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn square() -> Body {
        Body::Polygon(
            Polygon2D::new(vec![point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[1.0, 1.0]), point(&[0.0, 1.0])]).unwrap(),
        )
    }

    pub(crate) fn tetrahedron() -> Body {
        Body::Simplex(
            SimplexV::new(vec![
                point(&[1.0, -1.0, 0.0]),
                point(&[1.0, 1.0, 0.0]),
                point(&[-1.0, 0.0, 1.0]),
                point(&[-1.0, 0.0, -1.0]),
            ])
            .unwrap(),
        )
    }

    fn triangle() -> Body {
        Body::Polygon(Polygon2D::new(vec![point(&[0.0, 0.0]), point(&[6.0, 0.0]), point(&[0.0, 2.0])]).unwrap())
    }

    #[test]
    fn classify_square() {
        let s = square();
        assert_eq!(s.classify_point(&point(&[0.5, 0.5]), tol()).unwrap(), Classification::Interior);
        match s.classify_point(&point(&[0.5, 0.0]), tol()).unwrap() {
            Classification::Boundary(f) => assert_eq!(f.d_c, 1),
            c => panic!("{c:?}"),
        }
        match s.classify_point(&point(&[0.0, 0.0]), tol()).unwrap() {
            Classification::Boundary(f) => assert_eq!(f.d_c, 0),
            c => panic!("{c:?}"),
        }
        assert_eq!(s.classify_point(&point(&[2.0, 0.5]), tol()).unwrap(), Classification::Exterior);
    }

    #[test]
    fn triangle_chord_through_exterior_pivot() {
        let t = triangle();
        let l = Line::through(&point(&[0.0, 3.0]), &point(&[3.0, 0.0])).unwrap();
        let c = t.chord(&l, tol()).unwrap().segment().unwrap();
        assert_eq!(c.pivot_class, PivotClass::Exterior);
        assert!((&c.a - point(&[3.0, 0.0])).norm() < 1e-12);
        assert!((&c.b - point(&[1.5, 1.5])).norm() < 1e-12);
        assert!((c.length() - 4.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_x_axis_chord() {
        let t = tetrahedron();
        let l = Line::new(point(&[0.0, 0.0, 0.0]), point(&[1.0, 0.0, 0.0])).unwrap();
        let c = t.chord(&l, tol()).unwrap().segment().unwrap();
        assert_eq!(c.pivot_class, PivotClass::Interior);
        assert!((c.length() - 2.0).abs() < 1e-12);
        assert!((&c.a - point(&[1.0, 0.0, 0.0])).norm() < 1e-12);
        assert!((&c.b - point(&[-1.0, 0.0, 0.0])).norm() < 1e-12);
    }

    #[test]
    fn disk_diameters() {
        let d = Body::Ellipse(Ellipse2D::new(point(&[0.0, 0.0]), 1.0, 1.0, 0.0).unwrap());
        for k in 0..10 {
            let a = k as f64 * 0.31;
            let l = Line::new(point(&[0.0, 0.0]), point(&[a.cos(), a.sin()])).unwrap();
            let c = d.chord(&l, tol()).unwrap().segment().unwrap();
            assert!((c.length() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn missing_and_tangent_lines() {
        let d = Body::Ellipse(Ellipse2D::new(point(&[0.0, 0.0]), 1.0, 1.0, 0.0).unwrap());
        let miss = Line::new(point(&[0.0, 2.0]), point(&[1.0, 0.0])).unwrap();
        assert_eq!(d.chord(&miss, tol()).unwrap(), ChordResult::Empty);
        let tangent = Line::new(point(&[0.0, 1.0]), point(&[1.0, 0.0])).unwrap();
        let c = d.chord(&tangent, tol()).unwrap().segment().unwrap();
        assert!(c.degenerate);
    }

    #[test]
    fn angle_rays_are_unbounded() {
        let a = Body::Angle(Angle2D::new(point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.0, 1.0])).unwrap());
        let l = Line::new(point(&[1.0, 1.0]), point(&[1.0, 0.0])).unwrap();
        assert_eq!(a.chord(&l, tol()).unwrap(), ChordResult::Unbounded);
        let l = Line::through(&point(&[1.0, 1.0]), &point(&[2.0, 0.0])).unwrap();
        let c = a.chord(&l, tol()).unwrap().segment().unwrap();
        assert!((c.length() - 8f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn supports_examples() {
        let e = Body::Ellipse(Ellipse2D::new(point(&[0.0, 0.0]), 12.0, 1.6, 0.0).unwrap());
        let f = e.boundary_feature(&point(&[12.0, 0.0]), tol());
        match e.supporting_hyperplanes_at(&f).unwrap() {
            Support::Unique(h) => assert!((&h.normal - point(&[1.0, 0.0])).norm() < 1e-14),
            s => panic!("{s:?}"),
        }

        let s = square();
        let Classification::Boundary(f) = s.classify_point(&point(&[0.0, 0.0]), tol()).unwrap() else { panic!() };
        match s.supporting_hyperplanes_at(&f).unwrap() {
            Support::Cone(v) => {
                assert_eq!(v.len(), 2);
                let normals: Vec<Vector> = v.into_iter().map(|h| h.normal).collect();
                assert!(normals.iter().any(|n| (n - point(&[-1.0, 0.0])).norm() < 1e-14));
                assert!(normals.iter().any(|n| (n - point(&[0.0, -1.0])).norm() < 1e-14));
            }
            s => panic!("{s:?}"),
        }

        // Edge [A1 A2] of the tetrahedron lies on exactly two facet planes.
        let t = tetrahedron();
        let Classification::Boundary(f) = t.classify_point(&point(&[1.0, 0.0, 0.0]), tol()).unwrap() else { panic!() };
        let hs = t.halfspaces().unwrap();
        let oracle: Vec<usize> = (0..4).filter(|&i| hs[i].slack(&point(&[1.0, 0.0, 0.0])).abs() < 1e-12).collect();
        assert_eq!(oracle.len(), 2);
        match t.supporting_hyperplanes_at(&f).unwrap() {
            Support::Cone(v) => {
                assert_eq!(v.len(), 2);
                for i in oracle {
                    assert!(v.iter().any(|h| (&h.normal - &hs[i].normal).norm() < 1e-14));
                }
            }
            s => panic!("{s:?}"),
        }
    }

    #[test]
    fn interior_point_has_no_support() {
        let s = square();
        let f = BoundaryFeature { point: point(&[0.5, 0.5]), support: FeatureSupport::Facets(vec![]), d_c: 2 };
        assert_eq!(s.supporting_hyperplanes_at(&f), Err(Error::InteriorPoint));
    }

    #[test]
    fn face_dimension_examples() {
        let t = tetrahedron();
        assert_eq!(t.face_dimension(&point(&[1.0, 0.0, 0.0]), tol()).unwrap(), 1);
        let facet_centroid = (point(&[1.0, -1.0, 0.0]) + point(&[1.0, 1.0, 0.0]) + point(&[-1.0, 0.0, 1.0])) / 3.0;
        assert_eq!(t.face_dimension(&facet_centroid, tol()).unwrap(), 2);
        assert_eq!(t.face_dimension(&point(&[0.0, 0.0, 0.0]), tol()).unwrap(), 3);
        assert_eq!(square().face_dimension(&point(&[0.3, 0.0]), tol()).unwrap(), 1);
    }

    #[test]
    fn simplex_round_trip() {
        let Body::Simplex(s) = tetrahedron() else { unreachable!() };
        let p = simplex_to_halfspaces(&s);
        assert_eq!(p.halfspaces.len(), 4);
        let b = Body::Polytope(p);
        assert_eq!(b.classify_point(&point(&[0.0, 0.0, 0.0]), tol()).unwrap(), Classification::Interior);
        for v in &s.vertices {
            assert!(matches!(b.classify_point(v, tol()).unwrap(), Classification::Boundary(_)));
        }
    }

    #[test]
    fn invalid_bodies_rejected() {
        let cw = vec![point(&[0.0, 0.0]), point(&[0.0, 1.0]), point(&[1.0, 0.0])];
        assert!(Polygon2D::new(cw).is_err());
        assert!(Angle2D::new(point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[-1.0, 0.0])).is_err());
        assert!(Angle2D::with_theta(point(&[0.0, 0.0]), point(&[1.0, 0.0]), point(&[0.0, 1.0]), 1.0, tol()).is_err());
        // A halfspace list with an unbounded direction.
        let hs = vec![
            Halfspace::new(point(&[1.0, 0.0]), 1.0).unwrap(),
            Halfspace::new(point(&[-1.0, 0.0]), 1.0).unwrap(),
            Halfspace::new(point(&[0.0, 1.0]), 1.0).unwrap(),
        ];
        assert!(PolytopeH::new(hs, 2).is_err());
    }

    #[test]
    fn polytope_vertices_of_box() {
        let mut hs = Vec::new();
        for i in 0..3 {
            for s in [1.0, -1.0] {
                let mut n = Vector::zeros(3);
                n[i] = s;
                hs.push(Halfspace::new(n, 1.0).unwrap());
            }
        }
        let p = PolytopeH::new(hs, 3).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert!((Body::Polytope(p).diameter().unwrap() - 12f64.sqrt()).abs() < 1e-12);
    }

    fn arb_dir3() -> impl Strategy<Value = Vector> {
        prop::array::uniform3(-1.0f64..1.0).prop_filter("nonzero", |a| a[0].abs() + a[1].abs() + a[2].abs() > 0.1).prop_map(|a| point(&a).normalize())
    }

    proptest! {
        #[test]
        fn chord_invariant_under_permutation_and_redundancy(d in arb_dir3(), rot in 0usize..4, extra in 0.01f64..2.0) {
            let Body::Simplex(s) = tetrahedron() else { unreachable!() };
            let mut hs = s.as_polytope().halfspaces.clone();
            let base = Body::Polytope(PolytopeH::new(hs.clone(), 3).unwrap());
            hs.rotate_left(rot);
            hs.push(Halfspace::new(point(&[0.3, 0.4, 0.5]), 10.0 + extra).unwrap());
            let perm = Body::Polytope(PolytopeH::new(hs, 3).unwrap());
            let o = point(&[0.05, -0.1, 0.02]);
            let a = base.chord_through(&o, &d, tol()).segment().unwrap();
            let b = perm.chord_through(&o, &d, tol()).segment().unwrap();
            prop_assert!((a.length() - b.length()).abs() <= 1e-12);
        }

        #[test]
        fn chord_endpoints_on_boundary(d in arb_dir3(), x in -0.3f64..0.3, y in -0.3f64..0.3) {
            let t = tetrahedron();
            let o = point(&[x, y, 0.0]);
            let c = t.chord_through(&o, &d, tol()).segment().unwrap();
            for e in [&c.a, &c.b] {
                prop_assert!(matches!(t.classify_point(e, tol()).unwrap(), Classification::Boundary(_)));
            }
            let sum = t.face_dimension(&c.a, tol()).unwrap() + t.face_dimension(&c.b, tol()).unwrap();
            prop_assert!(sum <= 4);
        }

        #[test]
        fn rigid_motion_and_scaling(ang in 0.0f64..6.28, tx in -5.0f64..5.0, ty in -5.0f64..5.0, s in 0.2f64..5.0, dir in 0.0f64..3.14) {
            let verts = [[0.0, 0.0], [3.0, 0.0], [4.0, 2.0], [1.0, 3.0]];
            let (sn, cs) = ang.sin_cos();
            let m = |p: &[f64; 2], k: f64| point(&[k * (cs * p[0] - sn * p[1]) + tx, k * (sn * p[0] + cs * p[1]) + ty]);
            let body = Body::Polygon(Polygon2D::new(verts.iter().map(|p| point(p)).collect()).unwrap());
            let moved = Body::Polygon(Polygon2D::new(verts.iter().map(|p| m(p, s)).collect()).unwrap());
            let o = [2.0, 1.2];
            let d = point(&[dir.cos(), dir.sin()]);
            let dm = point(&[cs * d[0] - sn * d[1], sn * d[0] + cs * d[1]]);
            let a = body.chord_through(&point(&o), &d, tol()).segment().unwrap();
            let b = moved.chord_through(&m(&o, s), &dm, tol()).segment().unwrap();
            prop_assert!((a.length() * s - b.length()).abs() <= 1e-9 * b.length());
        }
    }
}
