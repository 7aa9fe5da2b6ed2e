use std::fmt::Write;

use chords::body::Angle2D;
use chords::chord_scan::{find_extrema_with_grid, sweep, ExtremumKind, ExtremumRecord};
use chords::cpp::verify_extremum;
use chords::nd_search::{find_local_extrema_nd, SearchConfig};
use chords::philo::{check_property_star, construct};
use chords::polytope::{far_field_audit, AuditConfig};
use chords::text::{num, vector};
use chords::{Body, Classification, Execution, Point, Tolerance};

use crate::{CliError, Outcome, RunConfig};

const PHILO_TOL: f64 = 1e-8;

fn pivot_class(body: &Body, o: &Point, tol: Tolerance) -> Result<&'static str, CliError> {
    Ok(match body.classify_point(o, tol)? {
        Classification::Interior => "interior",
        Classification::Exterior => "exterior",
        Classification::Boundary(_) => return Err(CliError::BoundaryPivot),
    })
}

fn kind_name(k: ExtremumKind) -> &'static str {
    match k {
        ExtremumKind::Min => "min",
        ExtremumKind::Max => "max",
    }
}

/// Extremum records through the pivot, each with its CPP report and checks.
pub fn analyze(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let body = cfg.load_body()?;
    let o = cfg.load_pivot(body.dim())?;
    let tol = cfg.tolerance();
    let class = pivot_class(&body, &o, tol)?;
    let records: Vec<ExtremumRecord> = if body.dim() == 2 {
        find_extrema_with_grid(&body, &o, cfg.grid, tol, Execution::default())?
    } else {
        let mut sc = SearchConfig::new(cfg.multistart, cfg.seed);
        sc.tol = tol;
        find_local_extrema_nd(&body, &o, sc)?
    };
    let mut out = String::new();
    let mut passed = true;
    writeln!(out, "body.kind={}", body.kind()).unwrap();
    writeln!(out, "body.dim={}", body.dim()).unwrap();
    writeln!(out, "pivot={}", vector(&o)).unwrap();
    writeln!(out, "pivot_class={class}").unwrap();
    writeln!(out, "records={}", records.len()).unwrap();
    for (i, r) in records.iter().enumerate() {
        let v = verify_extremum(&body, &o, r, tol)?;
        writeln!(out, "\n[record {i}]").unwrap();
        writeln!(out, "kind={}", kind_name(r.kind)).unwrap();
        if let Some(phi) = r.phi_star {
            writeln!(out, "phi={}", num(phi)).unwrap();
        }
        writeln!(out, "kink={}", r.kink).unwrap();
        writeln!(out, "refinement_width={}", num(r.refinement_width)).unwrap();
        writeln!(out, "d_c={}+{}", v.d_c.0, v.d_c.1).unwrap();
        writeln!(out, "{}", v.report.to_kv()).unwrap();
        for (j, a) in v.assertions.iter().enumerate() {
            writeln!(out, "assertion.{j}={} | {} | {}", if a.passed { "PASS" } else { "FAIL" }, a.clause, a.detail).unwrap();
        }
        writeln!(out, "verdict={}", if v.passed() { "PASS" } else { "FAIL" }).unwrap();
        passed &= v.passed();
    }
    Ok(Outcome { text: out, passed })
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// CSV `phi,length,derivative,in_domain`; `phi` is the line angle.
pub fn sweep_csv(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let body = cfg.load_body()?;
    if body.dim() != 2 {
        return Err(CliError::NotPlanar("sweep"));
    }
    let o = cfg.load_pivot(2)?;
    pivot_class(&body, &o, cfg.tolerance())?;
    let samples = sweep(&body, &o, cfg.grid, cfg.tolerance(), Execution::default())?;
    let mut out = String::from("phi,length,derivative,in_domain\n");
    for s in samples {
        writeln!(out, "{},{},{},{}", num(s.phi), opt(s.length), opt(s.derivative), s.in_domain).unwrap();
    }
    Ok(Outcome { text: out, passed: true })
}

/// Hyperbola–circle construction for an angle body and an interior pivot.
pub fn philo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let body = cfg.load_body()?;
    let Body::Angle(Angle2D { vertex, u1, u2, .. }) = &body else {
        return Err(CliError::Input(format!("philo needs an angle body, got {}", body.kind())));
    };
    let o = cfg.load_pivot(2)?;
    if pivot_class(&body, &o, cfg.tolerance())? != "interior" {
        return Err(CliError::Input("philo needs a pivot inside the angle".into()));
    }
    let c = construct(vertex, u1, u2, &o)?;
    let star = check_property_star(&c)?;
    let (a, b) = c.endpoints()?;
    let mut out = String::new();
    writeln!(out, "vertex={}", vector(&c.vertex)).unwrap();
    writeln!(out, "pivot={}", vector(&c.pivot)).unwrap();
    writeln!(out, "hyperbola={}", c.hyperbola.0.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")).unwrap();
    writeln!(out, "circle.center={}", vector(&c.circle.center)).unwrap();
    writeln!(out, "circle.radius={}", num(c.circle.radius)).unwrap();
    writeln!(out, "e_prime={}", vector(&c.e_prime)).unwrap();
    writeln!(out, "degenerate_tangency={}", c.degenerate_tangency).unwrap();
    writeln!(out, "candidates={}", c.candidates.len()).unwrap();
    for (i, p) in c.candidates.iter().enumerate() {
        writeln!(out, "candidate.{i}={}", vector(p)).unwrap();
    }
    writeln!(out, "line.dir={}", vector(&c.line.dir)).unwrap();
    writeln!(out, "a={}", vector(&a)).unwrap();
    writeln!(out, "b={}", vector(&b)).unwrap();
    writeln!(out, "length={}", num((&b - &a).norm())).unwrap();
    writeln!(out, "len_residual={}", num(star.len_residual)).unwrap();
    writeln!(out, "angle_residual={}", num(star.angle_residual)).unwrap();
    let passed = star.len_residual <= PHILO_TOL && star.angle_residual <= PHILO_TOL;
    writeln!(out, "verdict={}", if passed { "PASS" } else { "FAIL" }).unwrap();
    Ok(Outcome { text: out, passed })
}

pub fn polytope_audit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let body = cfg.load_body()?;
    let mut ac = AuditConfig::new(cfg.samples, cfg.seed);
    ac.multistart = cfg.multistart;
    let rep = far_field_audit(&body, ac)?;
    Ok(Outcome { text: rep.to_text(), passed: rep.passed() })
}
