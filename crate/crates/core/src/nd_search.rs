//! Chord-length extrema over line directions in any dimension.
//!
//! Each start runs a compass search on the unit sphere: poll `±` along an
//! orthonormal tangent frame, move on the first improvement, halve the step
//! after `4n` failed polls in a row. The frame is redrawn at random on every
//! poll (seeded per start); a fixed frame stalls on the ridges of the
//! piecewise-smooth length function of a polytope.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::body::{Body, ChordResult, PivotClass};
use crate::chord_scan::{ExtremumKind, ExtremumRecord};
use crate::cpp::{verify_extremum, Verification};
use crate::error::{check_dim, Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::geometry::{orthonormal_basis, Point, Tolerance, Vector};

pub const MIN_MULTISTART: usize = 8;
const INITIAL_STEP: f64 = 0.5;
const FINAL_STEP: f64 = 1e-10;
const MAX_POLLS: usize = 200_000;
/// Records closer than this times the diameter are merged.
const MERGE: f64 = 1e-6;
/// Chords shorter than this times the scale are tangent limits, not chords.
const TANGENT: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSample {
    pub dir: Vector,
    pub length: Option<f64>,
}

/// `|AB|` on the line through `o` along `dir`. For an exterior pivot the ray
/// from `o` along `dir` must reach the body.
pub fn chord_objective(body: &Body, o: &Point, dir: &Vector, tol: Tolerance) -> Option<f64> {
    if dir.len() != body.dim() || o.len() != body.dim() {
        return None;
    }
    let c = match body.chord_through(o, dir, tol) {
        ChordResult::Segment(c) => c,
        _ => return None,
    };
    if c.pivot_class == PivotClass::Exterior && c.t_b < 0.0 {
        return None;
    }
    Some(c.length())
}

pub fn sample(body: &Body, o: &Point, dir: &Vector, tol: Tolerance) -> DirectionSample {
    DirectionSample { dir: dir.clone(), length: chord_objective(body, o, dir, tol) }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub multistart: usize,
    pub seed: u64,
    pub tol: Tolerance,
    pub exec: Execution,
}

impl SearchConfig {
    pub fn new(multistart: usize, seed: u64) -> Self {
        SearchConfig { multistart, seed, tol: Tolerance::default(), exec: Execution::default() }
    }
}

fn rng_for(seed: u64, index: usize, salt: u64) -> ChaCha8Rng {
    let mix = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03);
    ChaCha8Rng::seed_from_u64(mix)
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)))
}

fn unit_gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    loop {
        let g = gaussian(rng, n);
        let r = g.norm();
        if r > 1e-6 {
            return g / r;
        }
    }
}

fn random_tangent_frame(rng: &mut ChaCha8Rng, d: &Vector) -> Vec<Vector> {
    let n = d.len();
    loop {
        let mut vs = vec![d.clone()];
        vs.extend((0..n - 1).map(|_| gaussian(rng, n)));
        let mut b = orthonormal_basis(&vs, 1e-12);
        if b.len() == n {
            b.remove(0);
            return b;
        }
    }
}

/// A random point of the body: uniform along a random chord through an
/// interior point.
fn random_body_point(body: &Body, rng: &mut ChaCha8Rng, tol: Tolerance) -> Point {
    let c = body.interior_point();
    let n = body.dim();
    let u = unit_gaussian(rng, n);
    match body.chord_through(&c, &u, tol) {
        ChordResult::Segment(ch) => {
            let s: f64 = rand::Rng::random(rng);
            &ch.b + (&ch.a - &ch.b) * s
        }
        _ => c,
    }
}

struct Start {
    dir: Vector,
    step: f64,
}

fn start_direction(body: &Body, o: &Point, class: PivotClass, index: usize, cfg: &SearchConfig) -> Start {
    let mut rng = rng_for(cfg.seed, index, 1);
    let n = body.dim();
    if class == PivotClass::Interior {
        return Start { dir: unit_gaussian(&mut rng, n), step: INITIAL_STEP };
    }
    let p = random_body_point(body, &mut rng, cfg.tol);
    let to = &p - o;
    let dist = to.norm();
    let spread = body.diameter().map(|d| d / dist.max(d)).unwrap_or(1.0);
    Start { dir: to / dist, step: (0.5 * spread).min(INITIAL_STEP) }
}

fn compass(body: &Body, o: &Point, start: Start, kind: ExtremumKind, index: usize, cfg: &SearchConfig) -> Option<(Vector, f64)> {
    let better = |new: f64, cur: f64| {
        let margin = 1e-15 * (1.0 + cur.abs());
        match kind {
            ExtremumKind::Min => new < cur - margin,
            ExtremumKind::Max => new > cur + margin,
        }
    };
    let mut rng = rng_for(cfg.seed, index, if kind == ExtremumKind::Min { 2 } else { 3 });
    let mut d = start.dir.clone();
    let mut f = chord_objective(body, o, &d, cfg.tol)?;
    let mut step = start.step;
    let mut polls = 0;
    let mut failures = 0;
    let patience = 4 * d.len();
    while step > FINAL_STEP && polls < MAX_POLLS {
        polls += 1;
        let frame = random_tangent_frame(&mut rng, &d);
        let (s, c) = step.sin_cos();
        let mut moved = false;
        'poll: for t in &frame {
            for sign in [1.0, -1.0] {
                let cand = (&d * c + t * (sign * s)).normalize();
                if let Some(fc) = chord_objective(body, o, &cand, cfg.tol) {
                    if better(fc, f) {
                        d = cand;
                        f = fc;
                        moved = true;
                        break 'poll;
                    }
                }
            }
        }
        if moved {
            failures = 0;
        } else {
            failures += 1;
            if failures >= patience {
                failures = 0;
                step *= 0.5;
            }
        }
    }
    Some((d, step))
}

fn record(body: &Body, o: &Point, d: &Vector, step: f64, kind: ExtremumKind, tol: Tolerance) -> Option<ExtremumRecord> {
    let chord = body.chord_through(o, d, tol).segment()?;
    if chord.length() <= TANGENT * body.scale() {
        return None;
    }
    let fa = body.boundary_feature(&chord.a, tol);
    let fb = body.boundary_feature(&chord.b, tol);
    let smooth = |f: &crate::body::BoundaryFeature| body.supporting_hyperplanes_at(f).map(|s| s.is_unique()).unwrap_or(false);
    let kink = !(smooth(&fa) && smooth(&fb));
    Some(ExtremumRecord { phi_star: None, kind, chord, endpoint_features: (fa, fb), refinement_width: step, kink })
}

/// Local minima and maxima of the chord length over directions, from
/// `multistart` seeded starting directions. Records are ordered by start
/// index (minima first, then maxima) and merged by endpoint proximity.
///
/// For an exterior pivot, starts aim at random points of the body, and
/// zero-length tangent limits are not reported.
pub fn find_local_extrema_nd(body: &Body, o: &Point, cfg: SearchConfig) -> Result<Vec<ExtremumRecord>> {
    check_dim(body.dim(), o.len())?;
    if cfg.multistart < MIN_MULTISTART {
        return Err(Error::InvalidArgument(format!("multistart must be at least {MIN_MULTISTART}")));
    }
    let class = match body.classify_point(o, cfg.tol)? {
        crate::body::Classification::Interior => PivotClass::Interior,
        crate::body::Classification::Exterior => PivotClass::Exterior,
        crate::body::Classification::Boundary(_) => return Err(Error::BoundaryPivot),
    };
    let kinds = [ExtremumKind::Min, ExtremumKind::Max];
    let runs = map_indexed(2 * cfg.multistart, cfg.exec, |job| {
        let (kind, i) = (kinds[job / cfg.multistart], job % cfg.multistart);
        let start = start_direction(body, o, class, i, &cfg);
        let (d, step) = compass(body, o, start, kind, i, &cfg)?;
        record(body, o, &d, step, kind, cfg.tol)
    });
    let merge = MERGE * body.diameter().unwrap_or_else(|| body.scale());
    let mut out: Vec<ExtremumRecord> = Vec::new();
    for r in runs.into_iter().flatten() {
        if !out.iter().any(|q| q.kind == r.kind && q.chord.endpoint_distance(&r.chord) <= merge) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Checks every record against the theorems for its kind and pivot position.
pub fn verify_nd_theorems(body: &Body, o: &Point, recs: &[ExtremumRecord], tol: Tolerance) -> Result<Vec<Verification>> {
    recs.iter().map(|r| verify_extremum(body, o, r, tol)).collect()
}
