use itertools::Itertools;
use nalgebra::DMatrix;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{rank, Hyperplane, Point, Vector};

/// Closed halfspace `{x : <normal, x> <= offset}` with a unit outward normal.
#[derive(Clone, Debug, PartialEq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let h = Hyperplane::new(normal, offset)?;
        Ok(Halfspace { normal: h.normal, offset: h.offset })
    }

    /// `offset - <normal, x>`: positive inside, zero on the boundary.
    pub fn slack(&self, x: &Point) -> f64 {
        self.offset - self.normal.dot(x)
    }

    /// Activity threshold `eps·(1 + |offset|)`.
    pub fn active_tol(&self, eps: f64) -> f64 {
        eps * (1.0 + self.offset.abs())
    }

    pub fn boundary(&self) -> Hyperplane {
        Hyperplane { normal: self.normal.clone(), offset: self.offset }
    }
}

/// Parameter interval of a line against a halfspace list.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Clip {
    pub lo: f64,
    pub hi: f64,
}

/// Clips `{base + t·dir}` against every halfspace. `None` when empty
/// beyond `t_tol`; near-empty intervals collapse to their midpoint.
pub(crate) fn clip_line(hs: &[Halfspace], base: &Point, dir: &Vector, t_tol: f64) -> Option<Clip> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for h in hs {
        let nd = h.normal.dot(dir);
        let s = h.slack(base);
        if nd.abs() < 1e-15 {
            if s < -t_tol {
                return None;
            }
            continue;
        }
        let t = s / nd;
        if nd > 0.0 {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
    }
    if lo > hi {
        if lo - hi > t_tol {
            return None;
        }
        let mid = 0.5 * (lo + hi);
        return Some(Clip { lo: mid, hi: mid });
    }
    Some(Clip { lo, hi })
}

/// Indices of halfspaces active at `x` under the `eps·(1+|b|)` rule.
pub(crate) fn active_set(hs: &[Halfspace], x: &Point, eps: f64) -> Vec<usize> {
    hs.iter()
        .enumerate()
        .filter(|(_, h)| h.slack(x).abs() <= h.active_tol(eps))
        .map(|(i, _)| i)
        .collect()
}

/// Drops parallel identical constraints (same normal and offset within `eps`).
pub(crate) fn dedup_constraints(hs: &[Halfspace], idx: &[usize], eps: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for &i in idx {
        let dup = kept.iter().any(|&j| {
            (&hs[i].normal - &hs[j].normal).norm() <= eps && (hs[i].offset - hs[j].offset).abs() <= hs[i].active_tol(eps)
        });
        if !dup {
            kept.push(i);
        }
    }
    kept
}

/// `n - rank{active normals}` after deduplication.
pub(crate) fn face_dim_from_active(hs: &[Halfspace], active: &[usize], n: usize, eps: f64) -> usize {
    let kept = dedup_constraints(hs, active, eps);
    let rows: Vec<Vector> = kept.iter().map(|&i| hs[i].normal.clone()).collect();
    n - rank(&rows, eps).min(n)
}

/// Lexicographic k-subsets of `0..m`.
pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    (0..m).combinations(k).collect()
}

const MAX_VERTEX_SUBSETS: usize = 2_000_000;

/// Vertices of `{x : A x <= b}` by solving every `n`-subset of constraints.
pub(crate) fn enumerate_vertices(hs: &[Halfspace], n: usize, eps: f64) -> Result<Vec<Point>> {
    let m = hs.len();
    let subsets = combinations(m, n);
    if subsets.len() > MAX_VERTEX_SUBSETS {
        return Err(Error::InvalidBody(format!("{m} halfspaces in dimension {n} is too many to enumerate vertices")));
    }
    let mut verts: Vec<Point> = Vec::new();
    for sub in subsets {
        let a = DMatrix::from_fn(n, n, |r, c| hs[sub[r]].normal[c]);
        let b = Vector::from_iterator(n, sub.iter().map(|&i| hs[i].offset));
        let lu = a.clone().lu();
        if lu.determinant().abs() < 1e-12 {
            continue;
        }
        let Some(x) = lu.solve(&b) else { continue };
        if x.iter().any(|v| !v.is_finite()) {
            continue;
        }
        if hs.iter().all(|h| h.slack(&x) >= -h.active_tol(eps * 10.0)) {
            let scale = 1.0 + x.norm();
            if !verts.iter().any(|v| (v - &x).norm() <= 1e-9 * scale) {
                verts.push(x);
            }
        }
    }
    Ok(verts)
}

/// Facet halfspaces of the simplex with the given `n + 1` vertices.
pub(crate) fn simplex_halfspaces(vertices: &[Point], eps: f64) -> Result<Vec<Halfspace>> {
    let n = vertices.first().map(|v| v.len()).unwrap_or(0);
    if n < 2 || vertices.len() != n + 1 {
        return Err(Error::InvalidBody(format!("a simplex in dimension {n} needs {} vertices", n + 1)));
    }
    for v in vertices {
        check_dim(n, v.len())?;
    }
    // Volume test on the edge matrix.
    let edges = DMatrix::from_fn(n, n, |r, c| vertices[r + 1][c] - vertices[0][c]);
    let det = edges.determinant();
    let scale = vertices.iter().map(|v| (v - &vertices[0]).norm()).fold(1.0_f64, f64::max);
    if det.abs() <= eps * scale.powi(n as i32) {
        return Err(Error::InvalidBody("simplex vertices are affinely dependent".into()));
    }
    let mut out = Vec::with_capacity(n + 1);
    for omit in 0..=n {
        let facet: Vec<&Point> = vertices.iter().enumerate().filter(|(i, _)| *i != omit).map(|(_, v)| v).collect();
        let rows = DMatrix::from_fn(n - 1, n, |r, c| facet[r + 1][c] - facet[0][c]);
        // Generalized cross product by cofactors.
        let mut normal = Vector::zeros(n);
        for j in 0..n {
            let minor = rows.clone().remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            normal[j] = sign * if n == 2 { minor[(0, 0)] } else { minor.determinant() };
        }
        let mut offset = normal.dot(facet[0]);
        if normal.dot(&vertices[omit]) > offset {
            normal = -normal;
            offset = -offset;
        }
        out.push(Halfspace::new(normal, offset)?);
    }
    Ok(out)
}
