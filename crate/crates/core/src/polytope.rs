//! Far-field constants, facet angles and the far-pivot audit for polytopes.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::body::polyhedral::{active_set, dedup_constraints};
use crate::body::{Body, Classification, Halfspace};
use crate::chord_scan::{ExtremumKind, ExtremumRecord};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::geometry::{orthonormal_basis, rank, Point, Tolerance, Vector};
use crate::nd_search::{find_local_extrema_nd, SearchConfig};
use crate::text::{num, vector};

/// Face enumeration runs over all subsets of facets.
pub const MAX_FACETS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct FarFieldConstants {
    /// Largest cosine between trivially intersecting face subspaces.
    pub c: f64,
    /// `M = ½(1 + 1/√(1 − c²))`.
    pub multiplier: f64,
    /// `M · diam`.
    pub u_radius: f64,
    /// `m`: smallest `|sin θ|` over facet pairs; zero with parallel facets.
    pub min_sin: Option<f64>,
    /// `½(1 + 1/m)`.
    pub min_multiplier: Option<f64>,
    pub diam: f64,
}

/// Exposed face of dimension at least one.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub vertices: Vec<usize>,
    pub dim: usize,
    /// Orthonormal basis of the direction space of the affine hull.
    pub basis: Vec<Vector>,
}

struct Incidence<'a> {
    hs: &'a [Halfspace],
    facets: Vec<usize>,
    vertices: Vec<Point>,
    /// `on[v]`: facets active at vertex `v`.
    on: Vec<Vec<usize>>,
    n: usize,
}

fn incidence(body: &Body) -> Result<Incidence<'_>> {
    if !body.is_bounded() {
        return Err(Error::Unbounded);
    }
    let hs = body.halfspaces().ok_or_else(|| Error::Unsupported(format!("{} is not a polytope", body.kind())))?;
    let n = body.dim();
    let eps = Tolerance::default().eps;
    let vertices = body.vertices();
    let on_all: Vec<Vec<usize>> = vertices.iter().map(|v| active_set(hs, v, eps)).collect();
    let all: Vec<usize> = (0..hs.len()).collect();
    let facets: Vec<usize> = dedup_constraints(hs, &all, eps)
        .into_iter()
        .filter(|&i| {
            let vs: Vec<&Point> = vertices.iter().zip(&on_all).filter(|(_, a)| a.contains(&i)).map(|(v, _)| v).collect();
            span_dim(&vs) == n - 1
        })
        .collect();
    if facets.len() > MAX_FACETS {
        return Err(Error::TooManyFacets { got: facets.len(), cap: MAX_FACETS });
    }
    let on = on_all.into_iter().map(|a| a.into_iter().filter(|i| facets.contains(i)).collect()).collect();
    Ok(Incidence { hs, facets, vertices, on, n })
}

fn differences(vs: &[&Point]) -> Vec<Vector> {
    vs.iter().skip(1).map(|v| *v - vs[0]).collect()
}

fn span_dim(vs: &[&Point]) -> usize {
    if vs.len() < 2 {
        return 0;
    }
    rank(&differences(vs), 1e-9)
}

/// Exposed faces of dimensions `1..n-1`, one per distinct vertex set.
pub fn exposed_faces(body: &Body) -> Result<Vec<Face>> {
    let inc = incidence(body)?;
    let k = inc.facets.len();
    let mut faces: Vec<Face> = Vec::new();
    for mask in 1u32..(1u32 << k) {
        let chosen: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| inc.facets[b]).collect();
        let ids: Vec<usize> = (0..inc.vertices.len()).filter(|&v| chosen.iter().all(|f| inc.on[v].contains(f))).collect();
        if ids.len() < 2 || faces.iter().any(|f| f.vertices == ids) {
            continue;
        }
        let pts: Vec<&Point> = ids.iter().map(|&i| &inc.vertices[i]).collect();
        let dim = span_dim(&pts);
        if dim == 0 || dim >= inc.n {
            continue;
        }
        let basis = orthonormal_basis(&differences(&pts), 1e-9);
        faces.push(Face { vertices: ids, dim, basis });
    }
    Ok(faces)
}

/// Largest cosine of the principal angles between two subspaces, or `None`
/// when they share a nonzero vector.
pub fn max_cosine(b1: &[Vector], b2: &[Vector]) -> Option<f64> {
    let mut all = b1.to_vec();
    all.extend_from_slice(b2);
    if rank(&all, 1e-9) < b1.len() + b2.len() {
        return None;
    }
    let m = DMatrix::from_fn(b1.len(), b2.len(), |i, j| b1[i].dot(&b2[j]));
    let s = m.singular_values();
    Some(s.iter().fold(0.0_f64, |a, &x| a.max(x)).min(1.0))
}

pub fn far_field_constants(body: &Body) -> Result<FarFieldConstants> {
    let faces = exposed_faces(body)?;
    let mut c = 0.0_f64;
    for (i, f) in faces.iter().enumerate() {
        for g in &faces[i + 1..] {
            if let Some(cos) = max_cosine(&f.basis, &g.basis) {
                c = c.max(cos);
            }
        }
    }
    let diam = body.diameter().ok_or(Error::Unbounded)?;
    let multiplier = 0.5 * (1.0 + 1.0 / (1.0 - c * c).sqrt());
    let fa = facet_angles(body)?;
    Ok(FarFieldConstants {
        c,
        multiplier,
        u_radius: multiplier * diam,
        min_sin: fa.min_sin,
        min_multiplier: fa.min_sin.filter(|&m| m > 0.0).map(|m| 0.5 * (1.0 + 1.0 / m)),
        diam,
    })
}

/// `1 + 1/sin θ − 2|OA|/|AB|`; nonnegative at every critical exterior
/// configuration of an angle with `θ < π/2`.
pub fn l9_bound_check(oa: f64, ab: f64, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("theta {theta} is not in (0, π/2)")));
    }
    if !(ab > 0.0 && oa > ab) {
        return Err(Error::InvalidArgument(format!("need |OA| > |AB| > 0, got {oa}, {ab}")));
    }
    Ok(1.0 + 1.0 / theta.sin() - 2.0 * oa / ab)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacetAngle {
    pub i: usize,
    pub j: usize,
    /// Angle between the outward normals.
    pub theta: f64,
    pub parallel: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacetAngles {
    pub angles: Vec<FacetAngle>,
    pub min_sin: Option<f64>,
    pub has_parallel_facets: bool,
}

pub fn facet_angles(body: &Body) -> Result<FacetAngles> {
    let inc = incidence(body)?;
    let tol = 1e-9;
    let mut angles = Vec::new();
    for (k, &i) in inc.facets.iter().enumerate() {
        for &j in &inc.facets[k + 1..] {
            let d = inc.hs[i].normal.dot(&inc.hs[j].normal).clamp(-1.0, 1.0);
            angles.push(FacetAngle { i, j, theta: d.acos(), parallel: 1.0 - d.abs() <= tol });
        }
    }
    let min_sin = angles.iter().map(|a| if a.parallel { 0.0 } else { a.theta.sin().abs() }).reduce(f64::min);
    let has_parallel_facets = angles.iter().any(|a| a.parallel);
    Ok(FacetAngles { angles, min_sin, has_parallel_facets })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditLine {
    pub sample: usize,
    pub pivot: Point,
    pub record: ExtremumRecord,
    pub check: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub constants: FarFieldConstants,
    pub has_parallel_facets: bool,
    pub radius: f64,
    pub lines: Vec<AuditLine>,
    /// Samples for which the search returned no maximum.
    pub samples_without_max: Vec<usize>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    /// One line per (pivot, record, verdict).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# c={} M={} U_radius={} radius={} parallel_facets={}\n",
            num(self.constants.c),
            num(self.constants.multiplier),
            num(self.constants.u_radius),
            num(self.radius),
            self.has_parallel_facets
        ));
        for l in &self.lines {
            let r = &l.record;
            out.push_str(&format!(
                "sample={} pivot={} kind={:?} length={} a={} b={} d_c={}+{} check=\"{}\" verdict={}\n",
                l.sample,
                vector(&l.pivot),
                r.kind,
                num(r.chord.length()),
                vector(&r.chord.a),
                vector(&r.chord.b),
                r.endpoint_features.0.d_c,
                r.endpoint_features.1.d_c,
                l.check,
                if l.passed { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditConfig {
    pub samples: usize,
    pub seed: u64,
    pub multistart: usize,
    pub exec: Execution,
}

impl AuditConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        AuditConfig { samples, seed, multistart: 16, exec: Execution::default() }
    }
}

/// Pivots far outside the polytope: uniform on a sphere about the centroid
/// of radius `1 + R + diam`, where `R` is the larger of `U_radius` and, for
/// polytopes without parallel facets, `½(1 + 1/m)·diam`.
pub fn far_field_audit(body: &Body, cfg: AuditConfig) -> Result<AuditReport> {
    let constants = far_field_constants(body)?;
    let fa = facet_angles(body)?;
    let n = body.dim();
    let exclusion = constants.u_radius.max(constants.min_multiplier.unwrap_or(0.0) * constants.diam);
    let radius = 1.0 + exclusion + constants.diam;
    let center = body.interior_point();
    let tol = Tolerance::default();
    let per_sample = map_indexed(cfg.samples, cfg.exec, |i| -> Result<(Point, Vec<ExtremumRecord>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
        let g = Vector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(&mut rng)));
        let o = &center + g.normalize() * radius;
        let mut sc = SearchConfig::new(cfg.multistart, cfg.seed ^ ((i as u64) << 32));
        sc.exec = Execution::Sequential;
        Ok((o.clone(), find_local_extrema_nd(body, &o, sc)?))
    });
    let mut lines = Vec::new();
    let mut samples_without_max = Vec::new();
    for (i, res) in per_sample.into_iter().enumerate() {
        let (o, recs) = res?;
        if !recs.iter().any(|r| r.kind == ExtremumKind::Max) {
            samples_without_max.push(i);
        }
        for r in recs {
            let (check, passed) = match r.kind {
                ExtremumKind::Max => {
                    ("max: d_C(A) + d_C(B) <= n - 1", r.endpoint_features.0.d_c + r.endpoint_features.1.d_c < n)
                }
                ExtremumKind::Min if !fa.has_parallel_facets => {
                    let inside = matches!(body.classify_point(&r.chord.midpoint(), tol)?, Classification::Interior);
                    ("min: chord stays in the boundary", !inside)
                }
                ExtremumKind::Min => ("min: skipped, parallel facets", true),
            };
            lines.push(AuditLine { sample: i, pivot: o.clone(), record: r, check, passed });
        }
    }
    Ok(AuditReport { constants, has_parallel_facets: fa.has_parallel_facets, radius, lines, samples_without_max })
}
