//! Shortest chord through a point inside an angle, by the classical
//! hyperbola–circle construction.
//!
//! The hyperbola through `O` with the arm lines as asymptotes meets the circle
//! on the diameter `[EO]` again at `E′`. The shortest chord is the line `OE′`,
//! and `E′` is the foot of the perpendicular from `E` onto it.

use crate::error::{check_dim, Error, Result};
use crate::geometry::{cross2, foot_of_perpendicular, Line, Point, Tolerance, Vector};
use crate::poly;

/// Roots of the circle parameter closer than this to zero are taken to be `O`.
const SAME_AS_O: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

/// Implicit conic `a x² + b xy + c y² + d x + e y + f = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conic(pub [f64; 6]);

impl Conic {
    pub fn eval(&self, p: &Point) -> f64 {
        let [a, b, c, d, e, f] = self.0;
        let (x, y) = (p[0], p[1]);
        a * x * x + b * x * y + c * y * y + d * x + e * y + f
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiloConstruction {
    pub vertex: Point,
    pub u1: Vector,
    pub u2: Vector,
    pub pivot: Point,
    pub hyperbola: Conic,
    pub circle: Circle,
    pub e_prime: Point,
    pub line: Line,
    pub degenerate_tangency: bool,
    /// Every second intersection found inside the angle; normally one.
    pub candidates: Vec<Point>,
}

impl PhiloConstruction {
    /// Chord endpoints on the first and second arm.
    pub fn endpoints(&self) -> Result<(Point, Point)> {
        Ok((arm_hit(&self.vertex, &self.u1, &self.line)?, arm_hit(&self.vertex, &self.u2, &self.line)?))
    }
}

fn arm_hit(e: &Point, u: &Vector, l: &Line) -> Result<Point> {
    let det = cross2(&l.dir, u);
    if det.abs() < 1e-14 {
        return Err(Error::Parallel("an arm"));
    }
    // base + t·dir = e + s·u
    let d = e - &l.base;
    let t = cross2(&d, u) / det;
    Ok(l.at(t))
}

/// Unit normal of the arm along `u`, pointing into the angle.
fn inward(u: &Vector, other: &Vector) -> Vector {
    let n = Vector::from_vec(vec![-u[1], u[0]]);
    if n.dot(other) < 0.0 {
        -n
    } else {
        n
    }
}

pub fn construct(e: &Point, u1: &Vector, u2: &Vector, o: &Point) -> Result<PhiloConstruction> {
    for v in [e, u1, u2, o] {
        check_dim(2, v.len())?;
    }
    let u1 = u1.normalize();
    let u2 = u2.normalize();
    if !(cross2(&u1, &u2).abs() > 1e-12) {
        return Err(Error::InvalidBody("arms must span an angle in (0, π)".into()));
    }
    let n1 = inward(&u1, &u2);
    let n2 = inward(&u2, &u1);
    let rel = o - e;
    let scale = rel.norm();
    let (d1, d2) = (n1.dot(&rel), n2.dot(&rel));
    let eps = Tolerance::default().at_scale(scale);
    if d1.abs() <= eps || d2.abs() <= eps {
        return Err(Error::BoundaryPivot);
    }
    if d1 < 0.0 || d2 < 0.0 {
        return Err(Error::InvalidArgument("pivot must lie inside the angle".into()));
    }
    let k = d1 * d2;

    // Points of the circle, relative to E: P(s) = (rel + s·g) / (1 + s²), with
    // g = rel turned by a right angle. s = 0 is O; s → ∞ is E.
    let g = Vector::from_vec(vec![-rel[1], rel[0]]);
    let q = |v: &Vector| n1.dot(v) * n2.dot(v);
    let bilinear = 0.5 * (n1.dot(&rel) * n2.dot(&g) + n1.dot(&g) * n2.dot(&rel));
    // q(rel + s g) − k (1 + s²)² = 0, constant term q(rel) − k = 0.
    let quartic = [0.0, 2.0 * bilinear, q(&g) - 2.0 * k, 0.0, -k];
    let cubic = poly::deflate(&quartic, 0.0);
    let roots = poly::real_roots(&cubic, 1e-10);
    let at = |s: f64| -> Point { e + (&rel + &g * s) / (1.0 + s * s) };
    let inside = |p: &Point| {
        let r = p - e;
        n1.dot(&r) > eps && n2.dot(&r) > eps
    };
    let candidates: Vec<Point> = roots.iter().filter(|s| s.abs() > SAME_AS_O).map(|&s| at(s)).filter(|p| inside(p)).collect();
    let tangent = roots.iter().any(|s| s.abs() <= SAME_AS_O);

    let (e_prime, line, degenerate_tangency) = if let Some(p) = candidates.first() {
        (p.clone(), Line::through(o, p)?, false)
    } else if tangent {
        (o.clone(), Line::new(o.clone(), g.clone())?, true)
    } else {
        return Err(Error::Construction("circle and hyperbola have no second real intersection inside the angle".into()));
    };

    let c = (e + o) * 0.5;
    let circle = Circle { radius: 0.5 * scale, center: c };
    Ok(PhiloConstruction {
        vertex: e.clone(),
        u1,
        u2,
        pivot: o.clone(),
        hyperbola: hyperbola_coeffs(e, &n1, &n2, k),
        circle,
        e_prime,
        line,
        degenerate_tangency,
        candidates,
    })
}

fn hyperbola_coeffs(e: &Point, n1: &Vector, n2: &Vector, k: f64) -> Conic {
    // d_i(P) = a_i x + b_i y + c_i
    let (a1, b1, c1) = (n1[0], n1[1], -n1.dot(e));
    let (a2, b2, c2) = (n2[0], n2[1], -n2.dot(e));
    Conic([a1 * a2, a1 * b2 + a2 * b1, b1 * b2, a1 * c2 + a2 * c1, b1 * c2 + b2 * c1, c1 * c2 - k])
}

impl Circle {
    pub fn eval(&self, p: &Point) -> f64 {
        (p - &self.center).norm_squared() - self.radius * self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropertyStar {
    /// `||BE′| − |AO|| / |AB|`
    pub len_residual: f64,
    /// `|∠EE′O − π/2|`
    pub angle_residual: f64,
}

pub fn check_property_star(c: &PhiloConstruction) -> Result<PropertyStar> {
    let (a, b) = c.endpoints()?;
    let ab = (&b - &a).norm();
    if ab <= 0.0 {
        return Err(Error::ZeroLengthChord);
    }
    let len_residual = ((&b - &c.e_prime).norm() - (&c.pivot - &a).norm()).abs() / ab;
    let angle_residual = if c.degenerate_tangency {
        0.0
    } else {
        let x = &c.vertex - &c.e_prime;
        let y = &c.pivot - &c.e_prime;
        (cross2(&x, &y).abs().atan2(x.dot(&y)) - std::f64::consts::FRAC_PI_2).abs()
    };
    Ok(PropertyStar { len_residual, angle_residual })
}

/// Replaces the line of a construction, moving `E′` to the foot from `E`.
pub fn with_line(c: &PhiloConstruction, line: Line) -> Result<PhiloConstruction> {
    let mut out = c.clone();
    out.e_prime = foot_of_perpendicular(&c.vertex, &line)?;
    out.degenerate_tangency = false;
    out.line = line;
    Ok(out)
}

/// Intercepts `(x, 0)` and `(0, y)` of the shortest chord through `(a, b)`
/// in the quadrant.
pub fn right_angle_closed_form(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!("need a, b > 0, got ({a}, {b})")));
    }
    let (ca, cb) = (a.cbrt(), b.cbrt());
    Ok((a + ca * cb * cb, b + ca * ca * cb))
}
