//! Residuals of the concurrent-perpendiculars property (CPP) at a chord.
//!
//! The perpendiculars to the supports at `A` and `B` should meet, and in the
//! plane their meeting point should lie on the perpendicular to the chord at
//! `O`. In higher dimensions the two normal lines should meet inside the
//! hyperplane through `O` orthogonal to the chord. Both residuals are divided
//! by `|AB|`, so they are scale-free.

use crate::body::{Body, BoundaryFeature, Chord, Classification, PivotClass};
use crate::chord_scan::{ExtremumKind, ExtremumRecord};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{line_line_closest, Hyperplane, Line, Point, Tolerance, Vector};
use crate::text::{num, vector};

/// Default acceptance threshold for normalized residuals.
pub const CPP_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct PairResidual {
    pub support_a: Hyperplane,
    pub support_b: Hyperplane,
    pub residual_normals: f64,
    pub residual_hyperplane: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CppReport {
    pub chord: Chord,
    pub pivot: Point,
    pub support_a: Hyperplane,
    pub support_b: Hyperplane,
    pub cone_a: bool,
    pub cone_b: bool,
    pub normal_a: Line,
    pub normal_b: Line,
    pub concurrency_point: Option<Point>,
    pub residual_normals: f64,
    pub residual_hyperplane: f64,
    pub smooth_a: bool,
    pub smooth_b: bool,
    /// Residuals for every pair of extreme supports when an endpoint is a cone.
    pub cone_pairs: Vec<PairResidual>,
}

impl CppReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_normals.max(self.residual_hyperplane)
    }

    /// Flat `key=value` lines.
    pub fn to_kv(&self) -> String {
        let mut out = Vec::new();
        let mut kv = |k: &str, v: String| out.push(format!("{k}={v}"));
        kv("pivot", vector(&self.pivot));
        kv("chord.a", vector(&self.chord.a));
        kv("chord.b", vector(&self.chord.b));
        kv("chord.length", num(self.chord.length()));
        for (tag, h, cone, smooth, nl) in [
            ("a", &self.support_a, self.cone_a, self.smooth_a, &self.normal_a),
            ("b", &self.support_b, self.cone_b, self.smooth_b, &self.normal_b),
        ] {
            kv(&format!("support_{tag}"), if cone { "cone".into() } else { "unique".into() });
            kv(&format!("support_{tag}.normal"), vector(&h.normal));
            kv(&format!("support_{tag}.offset"), num(h.offset));
            kv(&format!("normal_{tag}.base"), vector(&nl.base));
            kv(&format!("normal_{tag}.dir"), vector(&nl.dir));
            kv(&format!("smooth_{tag}"), smooth.to_string());
        }
        kv("concurrency_point", self.concurrency_point.as_ref().map(vector).unwrap_or_else(|| "absent".into()));
        kv("residual_normals", num(self.residual_normals));
        kv("residual_hyperplane", num(self.residual_hyperplane));
        kv("cone_pairs", self.cone_pairs.len().to_string());
        for (i, p) in self.cone_pairs.iter().enumerate() {
            kv(&format!("cone_pair.{i}.normal_a"), vector(&p.support_a.normal));
            kv(&format!("cone_pair.{i}.normal_b"), vector(&p.support_b.normal));
            kv(&format!("cone_pair.{i}.residual_normals"), num(p.residual_normals));
            kv(&format!("cone_pair.{i}.residual_hyperplane"), num(p.residual_hyperplane));
        }
        out.join("\n")
    }
}

struct Core {
    concurrency_point: Option<Point>,
    gap: f64,
    hyperplane: f64,
}

fn unit_chord_dir(chord: &Chord) -> Result<(Vector, f64)> {
    let ab = &chord.b - &chord.a;
    let len = ab.norm();
    if len <= 0.0 || chord.degenerate {
        return Err(Error::ZeroLengthChord);
    }
    Ok((ab / len, len))
}

fn core(na: &Line, nb: &Line, chord: &Chord, o: &Point) -> Result<Core> {
    let (dir, len) = unit_chord_dir(chord)?;
    let ca = line_line_closest(na, nb)?;
    if !ca.parallel {
        let p = ca.midpoint();
        let h = (&p - o).dot(&dir).abs() / len;
        return Ok(Core { concurrency_point: Some(p), gap: ca.gap / len, hyperplane: h });
    }
    // Parallel normals concur only when both run along the chord itself.
    let along = |l: &Line| 1.0 - l.dir.dot(&dir).abs() <= 1e-12;
    if along(na) && along(nb) {
        let off = na.distance_to(&chord.b) / len;
        return Ok(Core { concurrency_point: (off <= 1e-12).then(|| o.clone()), gap: off, hyperplane: 0.0 });
    }
    let fa = na.at(na.param_of(o));
    let fb = nb.at(nb.param_of(o));
    let mid = (&fa + &fb) * 0.5;
    Ok(Core { concurrency_point: None, gap: ca.gap / len, hyperplane: (&mid - o).dot(&dir).abs() / len })
}

fn build(sa: Hyperplane, sb: Hyperplane, chord: &Chord, o: &Point, planar: bool) -> Result<CppReport> {
    check_dim(chord.a.len(), o.len())?;
    check_dim(chord.a.len(), sa.dim())?;
    check_dim(chord.a.len(), sb.dim())?;
    let normal_a = Line { base: chord.a.clone(), dir: sa.normal.clone() };
    let normal_b = Line { base: chord.b.clone(), dir: sb.normal.clone() };
    let c = core(&normal_a, &normal_b, chord, o)?;
    // In the plane the normals always meet; what matters is the distance of
    // the meeting point from the perpendicular at O.
    let residual_normals = if planar && c.concurrency_point.is_some() { c.hyperplane } else { c.gap };
    Ok(CppReport {
        chord: chord.clone(),
        pivot: o.clone(),
        support_a: sa,
        support_b: sb,
        cone_a: false,
        cone_b: false,
        normal_a,
        normal_b,
        concurrency_point: c.concurrency_point,
        residual_normals,
        residual_hyperplane: c.hyperplane,
        smooth_a: true,
        smooth_b: true,
        cone_pairs: vec![],
    })
}

/// Planar check with supporting lines `l1` at `A` and `l2` at `B`.
pub fn cpp_residual_2d(l1: &Line, l2: &Line, chord: &Chord, o: &Point) -> Result<CppReport> {
    check_dim(2, l1.dim())?;
    check_dim(2, l2.dim())?;
    let perp = |l: &Line| Vector::from_vec(vec![-l.dir[1], l.dir[0]]);
    let sa = Hyperplane::through(&chord.a, perp(l1))?;
    let sb = Hyperplane::through(&chord.b, perp(l2))?;
    build(sa, sb, chord, o, true)
}

/// Check with supporting hyperplanes at `A` and `B` in any dimension.
pub fn cpp_residual_nd(support_a: &Hyperplane, support_b: &Hyperplane, chord: &Chord, o: &Point) -> Result<CppReport> {
    build(support_a.clone(), support_b.clone(), chord, o, chord.a.len() == 2)
}

/// One theorem clause checked on one record.
#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub clause: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub report: CppReport,
    pub d_c: (usize, usize),
    pub assertions: Vec<Assertion>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

fn report_for(body: &Body, o: &Point, chord: &Chord, fa: &BoundaryFeature, fb: &BoundaryFeature) -> Result<CppReport> {
    let spa = body.supporting_hyperplanes_at(fa)?;
    let spb = body.supporting_hyperplanes_at(fb)?;
    let ha = spa.hyperplanes();
    let hb = spb.hyperplanes();
    let mut pairs = Vec::new();
    for a in &ha {
        for b in &hb {
            let r = cpp_residual_nd(a, b, chord, o)?;
            pairs.push(PairResidual {
                support_a: a.clone(),
                support_b: b.clone(),
                residual_normals: r.residual_normals,
                residual_hyperplane: r.residual_hyperplane,
            });
        }
    }
    let mut report = cpp_residual_nd(&ha[0], &hb[0], chord, o)?;
    report.cone_a = !spa.is_unique();
    report.cone_b = !spb.is_unique();
    report.smooth_a = spa.is_unique();
    report.smooth_b = spb.is_unique();
    if report.cone_a || report.cone_b {
        report.cone_pairs = pairs;
    }
    Ok(report)
}

/// CPP report for an extremum plus the theorem clauses that apply to it.
///
/// Applied clauses:
/// - minimum through an interior pivot, or an exterior pivot whose chord
///   meets the interior: unique supports at both ends and CPP;
/// - any extremum with unique supports at both ends: CPP;
/// - polyhedral maximum: `d_C(A) + d_C(B) ≤ n - 1` (interior pivot) or `≤ n`
///   (exterior pivot), and `d_C(A) = n - 1 ⇒ d_C(B) = 0` for interior pivots.
pub fn verify_extremum(body: &Body, o: &Point, rec: &ExtremumRecord, tol: Tolerance) -> Result<Verification> {
    check_dim(body.dim(), o.len())?;
    let chord = &rec.chord;
    if (&chord.pivot - o).norm() > tol.at_scale(body.scale()) {
        return Err(Error::InvalidArgument("record was computed for a different pivot".into()));
    }
    let (fa, fb) = &rec.endpoint_features;
    let report = report_for(body, o, chord, fa, fb)?;
    let n = body.dim();
    let d_c = (fa.d_c, fb.d_c);
    let mut assertions = Vec::new();
    let smooth = report.smooth_a && report.smooth_b;
    let cpp_ok = report.max_residual() <= CPP_TOL;
    let residual_detail = format!("residual_normals={} residual_hyperplane={}", num(report.residual_normals), num(report.residual_hyperplane));

    let meets_interior = match chord.pivot_class {
        PivotClass::Interior => true,
        _ => matches!(body.classify_point(&chord.midpoint(), tol)?, Classification::Interior),
    };
    if rec.kind == ExtremumKind::Min && meets_interior {
        assertions.push(Assertion {
            clause: "min: unique supporting hyperplane at both endpoints",
            passed: smooth,
            detail: format!("smooth_a={} smooth_b={}", report.smooth_a, report.smooth_b),
        });
        assertions.push(Assertion { clause: "min: concurrent perpendiculars", passed: cpp_ok, detail: residual_detail.clone() });
    } else if smooth {
        assertions.push(Assertion { clause: "smooth critical chord: concurrent perpendiculars", passed: cpp_ok, detail: residual_detail });
    }
    if rec.kind == ExtremumKind::Max && body.is_polyhedral() {
        let sum = d_c.0 + d_c.1;
        let (bound, clause) = match chord.pivot_class {
            PivotClass::Interior => (n - 1, "max: d_C(A) + d_C(B) <= n - 1"),
            _ => (n, "max: d_C(A) + d_C(B) <= n"),
        };
        assertions.push(Assertion { clause, passed: sum <= bound, detail: format!("d_C={}+{}", d_c.0, d_c.1) });
        if chord.pivot_class == PivotClass::Interior && (d_c.0 == n - 1 || d_c.1 == n - 1) {
            let other = if d_c.0 == n - 1 { d_c.1 } else { d_c.0 };
            assertions.push(Assertion {
                clause: "max: facet-interior endpoint forces a vertex opposite",
                passed: other == 0,
                detail: format!("d_C={}+{}", d_c.0, d_c.1),
            });
        }
    }
    Ok(Verification { report, d_c, assertions })
}
