use std::fmt::Write;

use chords::body::{Angle2D, Polygon2D, SimplexV};
use chords::chord_scan::{find_extrema, ExtremumKind};
use chords::nd_search::{chord_objective, find_local_extrema_nd, SearchConfig};
use chords::philo::{construct, right_angle_closed_form};
use chords::text::{num, vector};
use chords::{point, Body, Chord, Execution, Point};

use crate::{CliError, Outcome, RunConfig};

/// Endpoint tolerance for maxima found by the derivative-free search.
const SEARCH_TOL: f64 = 1e-6;
/// Minimum distance of the triangle maximizer from every vertex.
const VERTEX_CLEARANCE: f64 = 1e-3;

struct Transcript {
    text: String,
    passed: bool,
}

impl Transcript {
    fn line(&mut self, ok: bool, name: &str, detail: String) {
        self.passed &= ok;
        writeln!(self.text, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" }).unwrap();
    }

    fn value(&mut self, name: &str, got: Option<f64>, want: f64, tol: f64) {
        match got {
            Some(g) => {
                let err = (g - want).abs();
                self.line(err <= tol, name, format!("got={} expected={} err={}", num(g), num(want), num(err)));
            }
            None => self.line(false, name, format!("got=none expected={}", num(want))),
        }
    }

    fn point(&mut self, name: &str, got: &Point, want: &Point, tol: f64) {
        let err = (got - want).norm();
        self.line(err <= tol, name, format!("got={} expected={} err={}", vector(got), vector(want), num(err)));
    }
}

fn default_tetrahedron() -> Body {
    let v = [[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [-1.0, 0.0, -1.0]];
    Body::Simplex(SimplexV::new(v.iter().map(|p| point(p)).collect()).expect("valid tetrahedron"))
}

fn tetrahedron(cfg: &RunConfig, t: &mut Transcript) -> Result<(), CliError> {
    let body = match &cfg.body {
        Some(_) => cfg.load_body()?,
        None => default_tetrahedron(),
    };
    if body.dim() != 3 || !body.is_polyhedral() {
        return Err(CliError::Input("the tetrahedron example needs a polyhedral body in dimension three".into()));
    }
    let tol = cfg.tolerance();
    let o = point(&[0.0, 0.0, 0.0]);
    writeln!(t.text, "# tetrahedron example, pivot {}", vector(&o)).unwrap();
    let len = |d: &[f64]| chord_objective(&body, &o, &point(d).normalize(), tol);
    let vertex_chord = 4.0 * 2f64.sqrt() / 3.0;
    for (i, v) in body.vertices().iter().enumerate() {
        t.value(&format!("vertex direction {i} chord"), chord_objective(&body, &o, &v.normalize(), tol), vertex_chord, cfg.tol);
    }
    t.value("x-axis chord", len(&[1.0, 0.0, 0.0]), 2.0, cfg.tol);
    t.value("mid-edge chord", len(&[0.0, 1.0, 1.0]), 2f64.sqrt(), cfg.tol);

    let mut sc = SearchConfig::new(cfg.multistart.max(64), cfg.seed);
    sc.tol = tol;
    let recs = find_local_extrema_nd(&body, &o, sc)?;
    let best = recs.iter().filter(|r| r.kind == ExtremumKind::Max).max_by(|a, b| a.chord.length().total_cmp(&b.chord.length()));
    match best {
        Some(r) => {
            let want = Chord { a: point(&[1.0, 0.0, 0.0]), b: point(&[-1.0, 0.0, 0.0]), ..r.chord.clone() };
            let err = r.chord.endpoint_distance(&want);
            t.line(
                err <= SEARCH_TOL,
                "global max chord",
                format!("got={}..{} expected={}..{} err={}", vector(&r.chord.a), vector(&r.chord.b), vector(&want.a), vector(&want.b), num(err)),
            );
        }
        None => t.line(false, "global max chord", "no maximum found".into()),
    }
    Ok(())
}

fn triangle(cfg: &RunConfig, t: &mut Transcript) -> Result<(), CliError> {
    let tol = cfg.tolerance();
    let body = Body::Polygon(Polygon2D::new(vec![point(&[0.0, 0.0]), point(&[6.0, 0.0]), point(&[0.0, 2.0])])?);
    let o = point(&[0.0, 3.0]);
    writeln!(t.text, "# triangle example, pivot {}", vector(&o)).unwrap();
    let dir = (point(&[3.0, 0.0]) - &o).normalize();
    match body.chord_through(&o, &dir, tol).segment() {
        Some(c) => {
            let (near, far) = if (&c.a - &o).norm() < (&c.b - &o).norm() { (&c.a, &c.b) } else { (&c.b, &c.a) };
            t.point("chord through (3,0): far endpoint", far, &point(&[3.0, 0.0]), cfg.tol);
            t.point("chord through (3,0): near endpoint", near, &point(&[1.5, 1.5]), cfg.tol);
            t.value("chord through (3,0): length", Some(c.length()), 4.5f64.sqrt(), cfg.tol);
        }
        None => t.line(false, "chord through (3,0)", "line misses the triangle".into()),
    }
    let recs = find_extrema(&body, &o, tol, Execution::default())?;
    match recs.iter().filter(|r| r.kind == ExtremumKind::Max).max_by(|a, b| a.chord.length().total_cmp(&b.chord.length())) {
        Some(r) => {
            let verts = body.vertices();
            let clearance = [&r.chord.a, &r.chord.b]
                .iter()
                .flat_map(|p| verts.iter().map(move |v| (*p - v).norm()))
                .fold(f64::INFINITY, f64::min);
            t.line(
                clearance >= VERTEX_CLEARANCE && r.chord.length() >= 4.5f64.sqrt(),
                "global maximizer avoids vertices",
                format!("a={} b={} length={} vertex_distance={}", vector(&r.chord.a), vector(&r.chord.b), num(r.chord.length()), num(clearance)),
            );
        }
        None => t.line(false, "global maximizer avoids vertices", "no maximum found".into()),
    }
    Ok(())
}

fn right_angle(cfg: &RunConfig, t: &mut Transcript) -> Result<(), CliError> {
    let e = point(&[0.0, 0.0]);
    let o = point(&[1.0, 8.0]);
    let (u1, u2) = (point(&[1.0, 0.0]), point(&[0.0, 1.0]));
    Angle2D::new(e.clone(), u1.clone(), u2.clone())?;
    writeln!(t.text, "# right angle construction, pivot {}", vector(&o)).unwrap();
    let c = construct(&e, &u1, &u2, &o)?;
    let (a, b) = c.endpoints()?;
    t.point("E'", &c.e_prime, &point(&[4.0, 2.0]), cfg.tol);
    t.point("endpoint on first arm", &a, &point(&[5.0, 0.0]), cfg.tol);
    t.point("endpoint on second arm", &b, &point(&[0.0, 10.0]), cfg.tol);
    let (x, y) = right_angle_closed_form(o[0], o[1])?;
    t.point("closed form agrees (first arm)", &a, &point(&[x, 0.0]), cfg.tol);
    t.point("closed form agrees (second arm)", &b, &point(&[0.0, y]), cfg.tol);
    Ok(())
}

/// Reproduces the worked examples; the tetrahedron can be replaced with `--body`.
pub fn examples(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut t = Transcript { text: String::new(), passed: true };
    tetrahedron(cfg, &mut t)?;
    triangle(cfg, &mut t)?;
    right_angle(cfg, &mut t)?;
    writeln!(t.text, "verdict={}", if t.passed { "PASS" } else { "FAIL" }).unwrap();
    Ok(Outcome { text: t.text, passed: t.passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn default_transcript_passes() {
        let cfg = RunConfig::parse_from(["chords", "examples"]);
        let out = examples(&cfg).unwrap();
        assert!(out.passed, "{}", out.text);
        assert!(!out.text.contains("FAIL"));
    }

    #[test]
    fn tight_tolerance_is_honoured() {
        let cfg = RunConfig::parse_from(["chords", "examples", "--tol", "1e-300"]);
        let out = examples(&cfg).unwrap();
        assert!(out.text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count() >= 12);
    }
}
