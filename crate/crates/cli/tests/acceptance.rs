//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Exits nonzero when a criterion fails unexpectedly, or when a criterion
//! listed in `KNOWN_RED` starts passing.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use chords::body::{Angle2D, Ellipse2D, Halfspace, Polygon2D, PolytopeH, SimplexV};
use chords::chord_scan::{angle_f, find_extrema, find_extrema_with_grid, sweep, AngleChart, ExtremumKind, Scan};
use chords::cpp::{cpp_residual_2d, verify_extremum};
use chords::geometry::cross2;
use chords::nd_search::{chord_objective, find_local_extrema_nd, SearchConfig};
use chords::philo::{check_property_star, construct, right_angle_closed_form};
use chords::polytope::{facet_angles, far_field_audit, far_field_constants, l9_bound_check, AuditConfig};
use chords::{point, Body, Chord, Classification, Execution, Line, Point, Tolerance, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail, with the reason.
const KNOWN_RED: &[(usize, &str)] = &[(
    1,
    "the vertex-direction chords of this tetrahedron measure 4*sqrt(2)/3, not 4*sqrt(5)/5; see the decisions ledger",
)];

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tol() -> Tolerance {
    Tolerance::default()
}

fn tetrahedron() -> Body {
    let v = [[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 0.0, 1.0], [-1.0, 0.0, -1.0]];
    Body::Simplex(SimplexV::new(v.iter().map(|p| point(p)).collect()).unwrap())
}

fn random_angle(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> (Angle2D, f64) {
    let theta = rng.random_range(lo..hi);
    let rot: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let e = point(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
    let u1 = point(&[rot.cos(), rot.sin()]);
    let u2 = point(&[(rot + theta).cos(), (rot + theta).sin()]);
    (Angle2D::new(e, u1, u2).unwrap(), theta)
}

fn interior_of(a: &Angle2D, rng: &mut ChaCha8Rng) -> Point {
    &a.vertex + &a.u1 * rng.random_range(0.1..3.0) + &a.u2 * rng.random_range(0.1..3.0)
}

/// A pivot beside the angle: outside it and outside its vertical angle.
fn exterior_of(a: &Angle2D, rng: &mut ChaCha8Rng) -> Point {
    &a.vertex - &a.u1 * rng.random_range(0.1..3.0) + &a.u2 * rng.random_range(0.1..3.0)
}

/// Arm lines carrying the endpoints `a` and `b` of a chord of an angle.
fn arm_lines(a: &Angle2D, c: &Chord) -> (Line, Line) {
    let arm = |u: &Vector| Line::new(a.vertex.clone(), u.clone()).unwrap();
    let d = |p: &Point, u: &Vector| cross2(&(p - &a.vertex), u).abs();
    if d(&c.a, &a.u1) <= d(&c.a, &a.u2) {
        (arm(&a.u1), arm(&a.u2))
    } else {
        (arm(&a.u2), arm(&a.u1))
    }
}

fn direction(alpha: f64) -> Vector {
    point(&[alpha.cos(), alpha.sin()])
}

fn c1_tetrahedron() -> Check {
    let t = tetrahedron();
    let o = point(&[0.0, 0.0, 0.0]);
    let len = |d: &Vector| chord_objective(&t, &o, &d.normalize(), tol()).ok_or("no chord".to_string());
    let stated = 4.0 * 5f64.sqrt() / 5.0;
    let mut vertex_lengths = Vec::new();
    for v in t.vertices() {
        vertex_lengths.push(len(&v)?);
    }
    let axis = len(&point(&[1.0, 0.0, 0.0]))?;
    let mid = len(&point(&[0.0, 1.0, 1.0]))?;
    ensure((axis - 2.0).abs() <= 1e-12, || format!("x-axis chord {axis}"))?;
    ensure((mid - 2f64.sqrt()).abs() <= 1e-12, || format!("mid-edge chord {mid}"))?;
    let recs = find_local_extrema_nd(&t, &o, SearchConfig::new(64, 0)).map_err(|e| e.to_string())?;
    let best = recs
        .iter()
        .filter(|r| r.kind == ExtremumKind::Max)
        .max_by(|a, b| a.chord.length().total_cmp(&b.chord.length()))
        .ok_or("no maximum")?;
    let want = Chord { a: point(&[1.0, 0.0, 0.0]), b: point(&[-1.0, 0.0, 0.0]), ..best.chord.clone() };
    let gap = best.chord.endpoint_distance(&want);
    ensure(gap <= 1e-6, || format!("global max endpoint gap {gap:.3e}"))?;
    let worst = vertex_lengths.iter().map(|l| (l - stated).abs()).fold(0.0, f64::max);
    ensure(worst <= 1e-9, || {
        format!(
            "vertex chords {:.15} (all four), stated {stated:.15}, |diff| {worst:.3e}; axis 2, mid-edge sqrt(2), global max gap {gap:.1e} all hold",
            vertex_lengths[0]
        )
    })?;
    Ok(format!("vertex chords {stated:.12}, axis 2, mid-edge sqrt(2), max gap {gap:.1e}"))
}

fn c2_triangle() -> Check {
    let t = Body::Polygon(Polygon2D::new(vec![point(&[0.0, 0.0]), point(&[6.0, 0.0]), point(&[0.0, 2.0])]).unwrap());
    let o = point(&[0.0, 3.0]);
    let c = t.chord_through(&o, &(point(&[3.0, 0.0]) - &o).normalize(), tol()).segment().ok_or("no chord through (3,0)")?;
    let near = if (&c.a - &o).norm() < (&c.b - &o).norm() { &c.a } else { &c.b };
    let b_err = (near - point(&[1.5, 1.5])).norm();
    ensure(b_err <= 1e-12, || format!("B off by {b_err:.3e}"))?;
    let l_err = (c.length() - 4.5f64.sqrt()).abs();
    ensure(l_err <= 1e-12, || format!("length off by {l_err:.3e}"))?;
    let recs = find_extrema(&t, &o, tol(), Execution::default()).map_err(|e| e.to_string())?;
    let best = recs
        .iter()
        .filter(|r| r.kind == ExtremumKind::Max)
        .max_by(|a, b| a.chord.length().total_cmp(&b.chord.length()))
        .ok_or("no maximum")?;
    let verts = t.vertices();
    let clearance =
        [&best.chord.a, &best.chord.b].iter().flat_map(|p| verts.iter().map(move |v| (*p - v).norm())).fold(f64::INFINITY, f64::min);
    ensure(clearance >= 1e-3, || format!("maximizer within {clearance:.3e} of a vertex"))?;
    Ok(format!("|AB| = sqrt(4.5), global max {:.12} with vertex clearance {clearance:.3}", best.chord.length()))
}

fn c3_angle_analytics() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let (a, _) = random_angle(&mut rng, 0.1, PI - 0.1);
        let o = interior_of(&a, &mut rng);
        let chart = AngleChart::new(&a, &o, tol()).map_err(|e| e.to_string())?;
        let (lo, hi) = chart.domain();
        let phi = lo + (hi - lo) * rng.random_range(0.02..0.98);
        let f = angle_f(&a, &o, phi).map_err(|e| e.to_string())?;
        let h = 1e-6;
        let fd = (angle_f(&a, &o, phi + h).unwrap().length - angle_f(&a, &o, phi - h).unwrap().length) / (2.0 * h);
        let rel = (fd - f.derivative).abs() / f.derivative.abs().max(f.length);
        worst = worst.max(rel);
        ensure(rel < 1e-6, || format!("instance {i}: relative error {rel:.3e}"))?;
        ensure(f.second_derivative > 0.0, || format!("instance {i}: f'' = {}", f.second_derivative))?;
    }
    Ok(format!("1000 instances, worst relative error {worst:.2e}, f'' > 0 throughout"))
}

fn c4_cpp_iff_critical() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut worst_at, mut least_off) = (0.0f64, f64::INFINITY);
    for i in 0..100 {
        let (a, _) = random_angle(&mut rng, 0.1, PI - 0.1);
        let o = interior_of(&a, &mut rng);
        let body = Body::Angle(a.clone());
        let recs = find_extrema(&body, &o, tol(), Execution::Sequential).map_err(|e| e.to_string())?;
        ensure(recs.len() == 1, || format!("instance {i}: {} critical directions", recs.len()))?;
        let r = &recs[0];
        let (l1, l2) = arm_lines(&a, &r.chord);
        let at = cpp_residual_2d(&l1, &l2, &r.chord, &o).map_err(|e| e.to_string())?.max_residual();
        worst_at = worst_at.max(at);
        ensure(at <= 1e-8, || format!("instance {i}: residual {at:.3e} at the critical direction"))?;
        let alpha = r.chord.dir[1].atan2(r.chord.dir[0]);
        for da in [-0.1, 0.1] {
            if let Some(c) = body.chord_through(&o, &direction(alpha + da), tol()).segment() {
                let (l1, l2) = arm_lines(&a, &c);
                let off = cpp_residual_2d(&l1, &l2, &c, &o).map_err(|e| e.to_string())?.max_residual();
                least_off = least_off.min(off);
                ensure(off >= 1e-3, || format!("instance {i}: residual {off:.3e} at offset {da}"))?;
            }
        }
    }
    Ok(format!("100 angles, one critical direction each, residual <= {worst_at:.1e}, off-critical >= {least_off:.2e}"))
}

fn angle_gap(a: &Vector, b: &Vector) -> f64 {
    let d = (a[1].atan2(a[0]) - b[1].atan2(b[0])).rem_euclid(PI);
    d.min(PI - d)
}

fn c5_philo() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst_gap, mut worst_star) = (0.0f64, 0.0f64);
    for i in 0..100 {
        let (a, _) = random_angle(&mut rng, 0.1, PI - 0.1);
        let o = interior_of(&a, &mut rng);
        let c = construct(&a.vertex, &a.u1, &a.u2, &o).map_err(|e| e.to_string())?;
        let star = check_property_star(&c).map_err(|e| e.to_string())?;
        worst_star = worst_star.max(star.len_residual).max(star.angle_residual);
        ensure(star.len_residual <= 1e-8 && star.angle_residual <= 1e-8, || format!("instance {i}: {star:?}"))?;
        let recs = find_extrema(&Body::Angle(a.clone()), &o, tol(), Execution::Sequential).map_err(|e| e.to_string())?;
        let m = recs.iter().find(|r| r.kind == ExtremumKind::Min).ok_or("no minimum")?;
        let gap = angle_gap(&m.chord.dir, &c.line.dir);
        worst_gap = worst_gap.max(gap);
        ensure(gap <= 1e-8, || format!("instance {i}: construction and scan differ by {gap:.3e} rad"))?;
    }
    let c = construct(&point(&[0.0, 0.0]), &point(&[1.0, 0.0]), &point(&[0.0, 1.0]), &point(&[1.0, 8.0])).map_err(|e| e.to_string())?;
    let (p, q) = c.endpoints().map_err(|e| e.to_string())?;
    let (x, y) = right_angle_closed_form(1.0, 8.0).map_err(|e| e.to_string())?;
    for (name, got, want) in
        [("E'", &c.e_prime, point(&[4.0, 2.0])), ("A", &p, point(&[5.0, 0.0])), ("B", &q, point(&[0.0, 10.0])), ("closed form A", &p, point(&[x, 0.0])), ("closed form B", &q, point(&[0.0, y]))]
    {
        let err = (got - &want).norm();
        ensure(err <= 1e-9, || format!("right angle: {name} off by {err:.3e}"))?;
    }
    Ok(format!("100 angles, direction gap <= {worst_gap:.1e} rad, Property (*) residual <= {worst_star:.1e}; right angle exact"))
}

fn c6_ellipse() -> Check {
    let e = Body::Ellipse(Ellipse2D::new(point(&[0.0, 0.0]), 12.0, 1.6, 0.0).unwrap());
    let o = point(&[-1.0, 1.4]);
    let n = 100_000;
    let samples = sweep(&e, &o, n, tol(), Execution::default()).map_err(|err| err.to_string())?;
    ensure(samples.len() == n, || format!("sweep returned {} samples", samples.len()))?;
    let recs = find_extrema_with_grid(&e, &o, n, tol(), Execution::default()).map_err(|err| err.to_string())?;
    // Oracle: sign changes of forward differences on an independent, denser grid.
    let scan = Scan::new(&e, &o, tol()).map_err(|err| err.to_string())?;
    let m = 400_000;
    let vals: Vec<f64> = (0..=m).map(|k| scan.length(k as f64 * PI / m as f64).unwrap()).collect();
    let (mut mins, mut maxs, mut prev) = (0, 0, 0.0f64);
    let diffs: Vec<f64> = vals.windows(2).map(|w| w[1] - w[0]).filter(|d| *d != 0.0).collect();
    for (k, d) in diffs.iter().chain(diffs.first()).enumerate() {
        if k > 0 && d.signum() != prev.signum() {
            if *d > 0.0 {
                mins += 1;
            } else {
                maxs += 1;
            }
        }
        prev = *d;
    }
    let got_min = recs.iter().filter(|r| r.kind == ExtremumKind::Min).count();
    let got_max = recs.len() - got_min;
    ensure(got_min == mins && got_max == maxs, || format!("found {got_min} min / {got_max} max, oracle {mins} / {maxs}"))?;
    ensure(mins >= 2 && maxs >= 2, || format!("oracle count {mins} min / {maxs} max"))?;
    let mut worst = 0.0f64;
    for r in &recs {
        let v = verify_extremum(&e, &o, r, tol()).map_err(|err| err.to_string())?;
        worst = worst.max(v.report.max_residual());
        ensure(v.passed() && v.report.max_residual() <= 1e-6, || format!("extremum fails CPP: {:?}", v.assertions))?;
    }
    Ok(format!("{mins} minima and {maxs} maxima (oracle agrees), CPP residual <= {worst:.1e}"))
}

fn hull(mut pts: Vec<(f64, f64)>) -> Vec<Point> {
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let half = |it: &mut dyn Iterator<Item = &(f64, f64)>| {
        let mut h: Vec<(f64, f64)> = Vec::new();
        for &p in it {
            while h.len() >= 2 && cross(h[h.len() - 2], h[h.len() - 1], p) <= 1e-9 {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
        h
    };
    let mut lower = half(&mut pts.iter());
    lower.extend(half(&mut pts.iter().rev()));
    lower.into_iter().map(|(x, y)| point(&[x, y])).collect()
}

fn c7_polygons() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut n_min, mut n_max, mut done) = (0, 0, 0);
    while done < 200 {
        let k = rng.random_range(5..=30);
        let pts: Vec<(f64, f64)> = (0..k)
            .map(|_| {
                let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let r: f64 = rng.random_range(0.6..1.0);
                (3.0 * r * a.cos(), 2.0 * r * a.sin())
            })
            .collect();
        let verts = hull(pts);
        if verts.len() < 5 {
            continue;
        }
        let Ok(poly) = Polygon2D::new(verts.clone()) else { continue };
        let p = Body::Polygon(poly);
        let o = loop {
            let o = point(&[rng.random_range(-1.5..1.5), rng.random_range(-1.0..1.0)]);
            if p.classify_point(&o, tol()) == Ok(Classification::Interior) {
                break o;
            }
        };
        done += 1;
        let near = |x: &Point| verts.iter().map(|v| (x - v).norm()).fold(f64::INFINITY, f64::min);
        for r in find_extrema(&p, &o, tol(), Execution::default()).map_err(|e| e.to_string())? {
            let v = verify_extremum(&p, &o, &r, tol()).map_err(|e| e.to_string())?;
            match r.kind {
                ExtremumKind::Min => {
                    n_min += 1;
                    ensure(v.report.smooth_a && v.report.smooth_b, || format!("polygon {done}: minimum ends at a vertex"))?;
                    ensure(near(&r.chord.a) > 1e-9 && near(&r.chord.b) > 1e-9, || format!("polygon {done}: minimum endpoint at a vertex"))?;
                    ensure(v.report.max_residual() <= 1e-6, || format!("polygon {done}: residual {:.3e}", v.report.max_residual()))?;
                }
                ExtremumKind::Max => {
                    n_max += 1;
                    let d = near(&r.chord.a).min(near(&r.chord.b));
                    ensure(d <= 1e-9, || format!("polygon {done}: maximum {d:.3e} from every vertex"))?;
                }
            }
        }
    }
    Ok(format!("200 polygons, {n_min} minima on edge interiors, {n_max} maxima through a vertex"))
}

fn exterior_derivative_min(a: &Angle2D, o: &Point, n: usize) -> Result<f64, String> {
    let chart = AngleChart::new(a, o, tol()).map_err(|e| e.to_string())?;
    ensure(chart.exterior, || "pivot is not exterior".into())?;
    let (lo, hi) = chart.domain();
    let mut least = f64::INFINITY;
    for k in 1..n {
        let phi = lo + (hi - lo) * k as f64 / n as f64;
        least = least.min(chords::chord_scan::angle_g(a, o, phi).map_err(|e| e.to_string())?.derivative);
    }
    Ok(least)
}

fn c8_exterior_monotone() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..50 {
        let (a, theta) = random_angle(&mut rng, FRAC_PI_2, PI - 0.1);
        let o = exterior_of(&a, &mut rng);
        let least = exterior_derivative_min(&a, &o, 5000)?;
        ensure(least > 0.0, || format!("instance {i} (theta {theta:.3}): derivative {least:.3e}"))?;
        let recs = find_extrema(&Body::Angle(a), &o, tol(), Execution::Sequential).map_err(|e| e.to_string())?;
        ensure(recs.is_empty(), || format!("instance {i}: {} critical directions", recs.len()))?;
    }
    Ok("50 obtuse angles, derivative positive at 5000 points each, no critical directions".into())
}

fn c9_l9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut harvested, mut least) = (0, f64::INFINITY);
    for i in 0..50 {
        let (a, theta) = random_angle(&mut rng, 0.1, FRAC_PI_2 - 0.01);
        let o = exterior_of(&a, &mut rng);
        for r in find_extrema(&Body::Angle(a.clone()), &o, tol(), Execution::Sequential).map_err(|e| e.to_string())? {
            let (l1, l2) = arm_lines(&a, &r.chord);
            let res = cpp_residual_2d(&l1, &l2, &r.chord, &o).map_err(|e| e.to_string())?.max_residual();
            ensure(res <= 1e-6, || format!("instance {i}: harvested record is not CPP-critical ({res:.3e})"))?;
            let (oa, ob) = r.chord.pivot_distances();
            let slack = l9_bound_check(oa.max(ob), r.chord.length(), theta).map_err(|e| e.to_string())?;
            least = least.min(slack);
            harvested += 1;
            ensure(slack >= -1e-9, || format!("instance {i}: slack {slack:.3e}"))?;
        }
    }
    ensure(harvested > 0, || "no critical configurations harvested".into())?;
    let (theta, psi) = (FRAC_PI_6, FRAC_PI_6);
    let eq = l9_bound_check((theta + psi).sin() * psi.cos(), theta.sin(), theta).map_err(|e| e.to_string())?;
    ensure(eq.abs() <= 1e-12, || format!("equality case slack {eq:.3e}"))?;
    Ok(format!("{harvested} critical configurations, least slack {least:.3e}; equality case {eq:.1e}"))
}

fn c10_far_field() -> Check {
    let mut hs = Vec::new();
    for (n, off) in [([1.0, 0.0], 1.0), ([-1.0, 0.0], 0.0), ([0.0, 1.0], 1.0), ([0.0, -1.0], 0.0)] {
        hs.push(Halfspace::new(point(&n), off).unwrap());
    }
    let square = Body::Polytope(PolytopeH::new(hs, 2).unwrap());
    let k = far_field_constants(&square).map_err(|e| e.to_string())?;
    ensure(k.c == 0.0 && k.multiplier == 1.0, || format!("square c = {}, M = {}", k.c, k.multiplier))?;
    let rep = far_field_audit(&square, AuditConfig::new(50, 10)).map_err(|e| e.to_string())?;
    ensure(rep.passed() && rep.samples_without_max.is_empty(), || format!("square audit:\n{}", rep.to_text()))?;
    let square_max = rep.lines.iter().filter(|l| l.record.kind == ExtremumKind::Max).count();

    let t = tetrahedron();
    ensure(!facet_angles(&t).map_err(|e| e.to_string())?.has_parallel_facets, || "tetrahedron reported parallel facets".into())?;
    let rep = far_field_audit(&t, AuditConfig::new(20, 10)).map_err(|e| e.to_string())?;
    ensure(rep.passed(), || format!("tetrahedron audit:\n{}", rep.to_text()))?;
    for l in &rep.lines {
        let meets = t.classify_point(&l.record.chord.midpoint(), tol()) == Ok(Classification::Interior);
        if l.record.kind == ExtremumKind::Min {
            ensure(!meets, || format!("sample {}: minimum chord meets the interior", l.sample))?;
        } else {
            let s = l.record.endpoint_features.0.d_c + l.record.endpoint_features.1.d_c;
            ensure(s <= 2, || format!("sample {}: dimension sum {s}", l.sample))?;
        }
    }
    Ok(format!("square c = 0, M = 1, {square_max} far maxima all through vertices; tetrahedron {} records all within bounds", rep.lines.len()))
}

fn c11_determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let body = dir.path().join("t.json");
    std::fs::write(&body, tetrahedron().to_json()).map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_chords"))
            .args(["analyze", "--body", body.to_str().unwrap(), "--pivot", "0.2,-0.1,0.05", "--seed", "42", "--multistart", "32"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), || format!("analyze exited {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, || "reports differ".into())?;
    Ok(format!("two runs, {} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(usize, &str, fn() -> Check, Duration); 11] = [
        (1, "tetrahedron example", c1_tetrahedron, Duration::from_secs(5)),
        (2, "triangle example", c2_triangle, Duration::from_secs(1)),
        (3, "angle analytics", c3_angle_analytics, Duration::MAX),
        (4, "CPP iff critical", c4_cpp_iff_critical, Duration::MAX),
        (5, "hyperbola-circle construction", c5_philo, Duration::MAX),
        (6, "ellipse extrema", c6_ellipse, Duration::from_secs(10)),
        (7, "polygon laws", c7_polygons, Duration::MAX),
        (8, "exterior monotonicity", c8_exterior_monotone, Duration::MAX),
        (9, "exterior critical bound", c9_l9, Duration::MAX),
        (10, "far-field audit", c10_far_field, Duration::from_secs(30)),
        (11, "determinism", c11_determinism, Duration::MAX),
    ];
    let mut unexpected = 0;
    for (id, name, f, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|m| {
            if elapsed <= budget {
                Ok(m)
            } else {
                Err(format!("took {:.2}s, budget {:.0}s", elapsed.as_secs_f64(), budget.as_secs_f64()))
            }
        });
        let known = KNOWN_RED.iter().find(|(k, _)| *k == id);
        let (verdict, detail) = match (&result, known) {
            (Ok(m), None) => ("PASS", m.clone()),
            (Ok(m), Some(_)) => {
                unexpected += 1;
                ("PASS", format!("{m} (listed as known red; update KNOWN_RED)"))
            }
            (Err(m), Some((_, why))) => ("FAIL", format!("{m} [known red: {why}]")),
            (Err(m), None) => {
                unexpected += 1;
                ("FAIL", m.clone())
            }
        };
        println!("criterion {id:>2} {verdict} ({:.2}s) {name}: {detail}", elapsed.as_secs_f64());
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected result(s)");
        std::process::exit(1);
    }
}
