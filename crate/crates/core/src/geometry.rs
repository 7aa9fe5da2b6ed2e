//! Small-dimension affine primitives: points, lines, hyperplanes, the
//! tolerance policy and a few linear-algebra helpers shared by every module.

use nalgebra::DVector;

use crate::error::{check_dim, Error, Result};

pub type Point = DVector<f64>;
pub type Vector = DVector<f64>;

/// Builds a point from a coordinate slice.
pub fn point(coords: &[f64]) -> Point {
    DVector::from_row_slice(coords)
}

/// Threshold below which a direction is treated as parallel to a hyperplane.
pub const PARALLEL_EPS: f64 = 1e-12;

/// Single tolerance policy threaded through the crate.
///
/// `eps` is used as an absolute tolerance when the configuration scale is at
/// most one and relative to the scale otherwise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Tolerance { eps })
        } else {
            Err(Error::InvalidArgument(format!("tolerance must be positive, got {eps}")))
        }
    }

    pub fn at_scale(&self, scale: f64) -> f64 {
        if scale <= 1.0 {
            self.eps
        } else {
            self.eps * scale
        }
    }
}

/// Line `{base + t·dir}` with a unit direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub base: Point,
    pub dir: Vector,
}

impl Line {
    pub fn new(base: Point, dir: Vector) -> Result<Self> {
        check_dim(base.len(), dir.len())?;
        let norm = dir.norm();
        if !(norm > 0.0) || !norm.is_finite() || base.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("line needs a finite base and nonzero direction".into()));
        }
        Ok(Line { base, dir: dir / norm })
    }

    pub fn through(p: &Point, q: &Point) -> Result<Self> {
        Line::new(p.clone(), q - p)
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn at(&self, t: f64) -> Point {
        &self.base + &self.dir * t
    }

    /// Parameter of the orthogonal projection of `p` onto the line.
    pub fn param_of(&self, p: &Point) -> f64 {
        (p - &self.base).dot(&self.dir)
    }

    pub fn distance_to(&self, p: &Point) -> f64 {
        let foot = self.at(self.param_of(p));
        (p - foot).norm()
    }
}

/// Hyperplane `{x : <normal, x> = offset}` with a unit normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: f64,
}

impl Hyperplane {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let norm = normal.norm();
        if !(norm > 0.0) || !norm.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidArgument("hyperplane needs a finite nonzero normal".into()));
        }
        Ok(Hyperplane { normal: normal / norm, offset: offset / norm })
    }

    pub fn through(point: &Point, normal: Vector) -> Result<Self> {
        check_dim(point.len(), normal.len())?;
        let norm = normal.norm();
        if !(norm > 0.0) {
            return Err(Error::InvalidArgument("zero normal".into()));
        }
        let normal = normal / norm;
        let offset = normal.dot(point);
        Ok(Hyperplane { normal, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn signed_distance(&self, p: &Point) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// The normal line through `p` (usually a point of the hyperplane).
    pub fn normal_line_at(&self, p: &Point) -> Line {
        Line { base: p.clone(), dir: self.normal.clone() }
    }

    /// In the plane, the hyperplane as a line through its point nearest the origin.
    pub fn as_line_2d(&self) -> Result<Line> {
        check_dim(2, self.dim())?;
        let base = &self.normal * self.offset;
        Line::new(base, point(&[-self.normal[1], self.normal[0]]))
    }
}

/// Orthogonal projection of `p` onto `l`.
pub fn foot_of_perpendicular(p: &Point, l: &Line) -> Result<Point> {
    check_dim(l.dim(), p.len())?;
    Ok(l.at(l.param_of(p)))
}

/// Closest points between two lines.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosestApproach {
    pub p1: Point,
    pub p2: Point,
    pub gap: f64,
    /// The lines are parallel, so the closest pair is not unique. `p2` is then
    /// the base of the second line and `p1` its projection onto the first.
    pub parallel: bool,
}

impl ClosestApproach {
    pub fn midpoint(&self) -> Point {
        (&self.p1 + &self.p2) * 0.5
    }
}

pub fn line_line_closest(l1: &Line, l2: &Line) -> Result<ClosestApproach> {
    check_dim(l1.dim(), l2.dim())?;
    let w0 = &l1.base - &l2.base;
    let b = l1.dir.dot(&l2.dir);
    let d = l1.dir.dot(&w0);
    let e = l2.dir.dot(&w0);
    let denom = 1.0 - b * b;
    if denom < PARALLEL_EPS {
        let p2 = l2.base.clone();
        let p1 = l1.at(l1.param_of(&p2));
        let gap = (&p1 - &p2).norm();
        return Ok(ClosestApproach { p1, p2, gap, parallel: true });
    }
    let s = (b * e - d) / denom;
    let t = (e - b * d) / denom;
    let p1 = l1.at(s);
    let p2 = l2.at(t);
    let gap = (&p1 - &p2).norm();
    Ok(ClosestApproach { p1, p2, gap, parallel: false })
}

#[derive(Clone, Debug, PartialEq)]
pub enum LineHyperplane {
    Point(Point),
    Parallel,
}

pub fn line_hyperplane_intersect(l: &Line, h: &Hyperplane) -> Result<LineHyperplane> {
    check_dim(l.dim(), h.dim())?;
    let denom = l.dir.dot(&h.normal);
    if denom.abs() < PARALLEL_EPS {
        return Ok(LineHyperplane::Parallel);
    }
    let t = (h.offset - h.normal.dot(&l.base)) / denom;
    Ok(LineHyperplane::Point(l.at(t)))
}

/// Rank of the row set by Gaussian elimination with complete pivoting.
///
/// A pivot counts when it exceeds `tol` times the largest entry magnitude
/// (and at least `tol` in absolute terms).
pub fn rank(rows: &[Vector], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().copied().collect()).collect();
    let scale = m.iter().flatten().fold(0.0_f64, |acc, x| acc.max(x.abs())).max(1.0);
    let thresh = tol * scale;
    let nrows = m.len();
    let mut r = 0;
    let mut col_used = vec![false; ncols];
    while r < nrows {
        let mut best = (0.0, 0, 0);
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, &v) in row.iter().enumerate() {
                if !col_used[j] && v.abs() > best.0 {
                    best = (v.abs(), i, j);
                }
            }
        }
        if best.0 <= thresh {
            break;
        }
        let (_, pi, pj) = best;
        m.swap(r, pi);
        col_used[pj] = true;
        let pivot = m[r][pj];
        for i in (r + 1)..nrows {
            let factor = m[i][pj] / pivot;
            if factor != 0.0 {
                for j in 0..ncols {
                    m[i][j] -= factor * m[r][j];
                }
            }
        }
        r += 1;
    }
    r
}

/// Orthonormal basis of the span of `vectors` (modified Gram-Schmidt, twice).
pub fn orthonormal_basis(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let norm0 = v.norm();
        if norm0 <= tol {
            continue;
        }
        let mut w = v / norm0;
        for _ in 0..2 {
            for b in &basis {
                let c = w.dot(b);
                w -= b * c;
            }
        }
        let n = w.norm();
        if n > tol.max(1e-12) {
            basis.push(w / n);
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of the unit vector `d`.
pub fn orthogonal_complement(d: &Vector) -> Vec<Vector> {
    let n = d.len();
    let mut candidates = vec![d.clone()];
    for i in 0..n {
        let mut e = Vector::zeros(n);
        e[i] = 1.0;
        candidates.push(e);
    }
    let mut basis = orthonormal_basis(&candidates, 1e-10);
    basis.remove(0);
    basis.truncate(n - 1);
    basis
}

/// z-component of the planar cross product.
pub fn cross2(a: &Vector, b: &Vector) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Unit direction of the global line angle `alpha` inside the plane `(e1, e2)`.
pub fn direction_in_plane(e1: &Vector, e2: &Vector, alpha: f64) -> Vector {
    e1 * alpha.cos() + e2 * alpha.sin()
}

/// Reduces an angle to `[0, π)`.
pub fn wrap_pi(alpha: f64) -> f64 {
    let r = alpha.rem_euclid(std::f64::consts::PI);
    if r >= std::f64::consts::PI {
        0.0
    } else {
        r
    }
}

/// Distance between two line angles modulo π.
pub fn angle_distance_mod_pi(a: f64, b: f64) -> f64 {
    let d = wrap_pi(a - b);
    d.min(std::f64::consts::PI - d)
}
