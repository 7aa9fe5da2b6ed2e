//! Chord length as a function of the direction of a line through a pivot.
//!
//! Generic code uses the line angle `α` of the direction `cos α·e1 + sin α·e2`
//! in a plane through the pivot. For interior pivots of bounded bodies the
//! length is π-periodic in `α`; otherwise it is defined on an arc of angles,
//! found by bracketing the directions where a finite chord stops existing.
//! Angles use the closed forms of [`angle`], linked to `α` by `α = α_ŵ + σφ`.

pub mod angle;
mod linearize;

use std::f64::consts::PI;

pub use angle::{angle_f, angle_g, AngleChart, AngleF, AngleG};
pub use linearize::{linearized_f, Linearization};

use crate::body::{Body, BoundaryFeature, Chord, ChordResult, PivotClass, Quadric, Shape};
use crate::error::{check_dim, Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::geometry::{angle_distance_mod_pi, Point, Tolerance, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSample {
    pub phi: f64,
    pub length: Option<f64>,
    pub derivative: Option<f64>,
    pub in_domain: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremumRecord {
    /// Line angle of the critical chord (planar searches only).
    pub phi_star: Option<f64>,
    pub kind: ExtremumKind,
    pub chord: Chord,
    pub endpoint_features: (BoundaryFeature, BoundaryFeature),
    pub refinement_width: f64,
    /// The length is not differentiable at the critical direction.
    pub kink: bool,
}

/// Set of line angles with a finite chord.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    /// Every direction, π-periodic.
    Full,
    /// The open arc `(lo, hi)`, `lo ∈ [0, π)`, `hi - lo ≤ π`.
    Arc { lo: f64, hi: f64 },
    Empty,
}

pub const DEFAULT_MIN_GRID: usize = 1024;
const DOMAIN_PRESCAN: usize = 4096;
const FD_STEP: f64 = 1e-6;
const KINK_STEP: f64 = 1e-7;
const KINK_JUMP: f64 = 1e-3;
pub const REFINE_WIDTH: f64 = 1e-10;

/// Default grid for [`find_extrema`]: `max(1024, 8·#vertices)`.
pub fn default_grid(body: &Body) -> usize {
    DEFAULT_MIN_GRID.max(8 * body.vertices().len())
}

/// Chord-length function of one body and pivot, restricted to a plane.
#[derive(Clone, Debug)]
pub struct Scan<'a> {
    body: &'a Body,
    pivot: Point,
    e1: Vector,
    e2: Vector,
    tol: Tolerance,
    class: PivotClass,
    scale: f64,
    chart: Option<AngleChart>,
    domain: Domain,
}

impl<'a> Scan<'a> {
    /// Scan of a planar body.
    pub fn new(body: &'a Body, pivot: &Point, tol: Tolerance) -> Result<Self> {
        if body.dim() != 2 {
            return Err(Error::Unsupported(format!("planar scan of a {}-dimensional body", body.dim())));
        }
        check_dim(2, pivot.len())?;
        let e1 = Vector::from_vec(vec![1.0, 0.0]);
        let e2 = Vector::from_vec(vec![0.0, 1.0]);
        Self::in_plane(body, pivot, &e1, &e2, tol)
    }

    /// Scan of the lines through `pivot` in the plane spanned by `e1`, `e2`
    /// (orthonormalized here).
    pub fn in_plane(body: &'a Body, pivot: &Point, e1: &Vector, e2: &Vector, tol: Tolerance) -> Result<Self> {
        check_dim(body.dim(), pivot.len())?;
        check_dim(body.dim(), e1.len())?;
        check_dim(body.dim(), e2.len())?;
        let e1 = e1.normalize();
        let e2 = e2 - &e1 * e1.dot(e2);
        if e2.norm() < 1e-12 {
            return Err(Error::InvalidArgument("plane vectors are parallel".into()));
        }
        let e2 = e2.normalize();
        let class = match body.classify_point(pivot, tol)? {
            crate::body::Classification::Interior => PivotClass::Interior,
            crate::body::Classification::Exterior => PivotClass::Exterior,
            crate::body::Classification::Boundary(_) => return Err(Error::BoundaryPivot),
        };
        let chart = match body {
            Body::Angle(a) => Some(AngleChart::new(a, pivot, tol)?),
            _ => None,
        };
        let spread = (pivot - body.interior_point()).norm();
        let scale = body.scale().max(spread).max(1.0);
        let mut scan = Scan { body, pivot: pivot.clone(), e1, e2, tol, class, scale, chart, domain: Domain::Empty };
        scan.domain = scan.find_domain();
        Ok(scan)
    }

    pub fn pivot_class(&self) -> PivotClass {
        self.class
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn chart(&self) -> Option<&AngleChart> {
        self.chart.as_ref()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Unit direction of line angle `alpha`; exactly negated after a half turn.
    pub fn direction(&self, alpha: f64) -> Vector {
        direction(&self.e1, &self.e2, alpha)
    }

    pub fn plane(&self) -> (&Vector, &Vector) {
        (&self.e1, &self.e2)
    }

    pub fn pivot(&self) -> &Point {
        &self.pivot
    }

    pub fn body(&self) -> &Body {
        self.body
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Planar line angle of a direction vector.
    pub fn angle_of(&self, d: &Vector) -> f64 {
        d.dot(&self.e2).atan2(d.dot(&self.e1))
    }

    /// Nondegenerate finite chord at `alpha`.
    pub fn chord_at(&self, alpha: f64) -> Option<Chord> {
        match self.body.chord_through(&self.pivot, &self.direction(alpha), self.tol) {
            ChordResult::Segment(c) if !c.degenerate => Some(c),
            _ => None,
        }
    }

    pub fn length(&self, alpha: f64) -> Option<f64> {
        let d = self.direction(alpha);
        let (lo, hi) = self.body.interval(&self.pivot, &d, self.tol)?;
        if !(lo.is_finite() && hi.is_finite()) || hi - lo <= self.tol.at_scale(self.body.scale()) {
            return None;
        }
        Some(hi - lo)
    }

    fn defined(&self, alpha: f64) -> bool {
        self.length(alpha).is_some()
    }

    fn find_domain(&self) -> Domain {
        if self.class == PivotClass::Interior && self.body.is_bounded() {
            return Domain::Full;
        }
        if let Some(c) = &self.chart {
            let (lo, hi) = c.alpha_domain();
            return Domain::Arc { lo, hi };
        }
        if let Body::Strip(strip) = self.body {
            // Only the direction of the boundary lines misses a finite chord.
            let lo = self.angle_of(&strip.line1.dir).rem_euclid(PI);
            return Domain::Arc { lo, hi: lo + PI };
        }
        let g = DOMAIN_PRESCAN;
        let step = PI / g as f64;
        let flags: Vec<bool> = (0..g).map(|k| self.defined(k as f64 * step)).collect();
        if flags.iter().all(|&f| f) {
            return Domain::Full;
        }
        let (first, last) = if let Some((start, len)) = longest_cyclic_run(&flags) {
            let first = start as f64 * step;
            (first, first + (len - 1) as f64 * step)
        } else {
            let d = self.body.interior_point() - &self.pivot;
            let a = self.angle_of(&d);
            if !self.defined(a) {
                return Domain::Empty;
            }
            (a, a)
        };
        let hi = self.bisect_edge(last, last + step);
        let lo = self.bisect_edge(first, first - step);
        let shift = lo.div_euclid(PI) * PI;
        Domain::Arc { lo: lo - shift, hi: hi - shift }
    }

    /// Last defined angle between `inside` (defined) and `outside` (undefined).
    fn bisect_edge(&self, mut inside: f64, mut outside: f64) -> f64 {
        for _ in 0..64 {
            let m = 0.5 * (inside + outside);
            if m == inside || m == outside {
                break;
            }
            if self.defined(m) {
                inside = m;
            } else {
                outside = m;
            }
        }
        inside
    }

    /// Sample angles: `kπ/N` on the full circle of lines, cell midpoints on an arc.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match self.domain {
            Domain::Full => (0..n).map(|k| k as f64 * PI / n as f64).collect(),
            Domain::Arc { lo, hi } => (0..n).map(|k| lo + (k as f64 + 0.5) * (hi - lo) / n as f64).collect(),
            Domain::Empty => (0..n).map(|k| k as f64 * PI / n as f64).collect(),
        }
    }

    /// `dℓ/dα` from the closed forms (angles only).
    pub fn analytic_derivative(&self, alpha: f64) -> Option<f64> {
        let c = self.chart.as_ref()?;
        let phi = c.phi_of(alpha)?;
        let (_, d) = angle::eval_chart(c, phi).ok()?;
        Some(c.sigma * d)
    }

    fn central_difference(&self, alpha: f64) -> Option<f64> {
        let up = self.length(alpha + FD_STEP)?;
        let down = self.length(alpha - FD_STEP)?;
        Some((up - down) / (2.0 * FD_STEP))
    }

    pub fn sample(&self, alpha: f64) -> SweepSample {
        let length = self.length(alpha);
        let derivative = match length {
            None => None,
            Some(_) if self.chart.is_some() => self.analytic_derivative(alpha),
            Some(_) => self.central_difference(alpha),
        };
        SweepSample { phi: alpha, length, derivative, in_domain: length.is_some() }
    }

    pub fn sweep(&self, n: usize, exec: Execution) -> Vec<SweepSample> {
        let grid = self.grid(n);
        map_indexed(grid.len(), exec, |k| self.sample(grid[k]))
    }

    /// Exact one-sided derivatives `(left, right)` of the length at `alpha`,
    /// from the rates of the boundary constraints hit by the line.
    pub fn one_sided(&self, alpha: f64) -> Option<(f64, f64)> {
        let d = self.direction(alpha);
        let dp = self.direction(alpha + 0.5 * PI);
        let (lo, hi) = self.body.interval(&self.pivot, &d, self.tol)?;
        if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
            return None;
        }
        match self.body.shape() {
            Shape::Polyhedral(hs) => {
                let mut hi_rates = (f64::NEG_INFINITY, f64::INFINITY);
                let mut lo_rates = (f64::INFINITY, f64::NEG_INFINITY);
                let near = |t: f64, u: f64| (t - u).abs() <= 1e-12 * (1.0 + u.abs());
                for h in hs {
                    let nd = h.normal.dot(&d);
                    if nd.abs() < 1e-15 {
                        continue;
                    }
                    let t = h.slack(&self.pivot) / nd;
                    let rate = -t * h.normal.dot(&dp) / nd;
                    if nd > 0.0 && near(t, hi) {
                        // hi is a minimum: left derivative = max rate, right = min rate.
                        hi_rates = (hi_rates.0.max(rate), hi_rates.1.min(rate));
                    } else if nd < 0.0 && near(t, lo) {
                        lo_rates = (lo_rates.0.min(rate), lo_rates.1.max(rate));
                    }
                }
                if !hi_rates.0.is_finite() || !lo_rates.0.is_finite() {
                    return None;
                }
                Some((hi_rates.0 - lo_rates.0, hi_rates.1 - lo_rates.1))
            }
            Shape::Quadric(q) => {
                let rate = |t: f64| quadric_rate(q, &self.pivot, &d, &dp, t);
                let v = rate(hi) - rate(lo);
                Some((v, v))
            }
        }
    }

    fn right_derivative(&self, alpha: f64) -> Option<f64> {
        self.one_sided(alpha).map(|(_, r)| r)
    }

    /// Local extrema of the length, refined to [`REFINE_WIDTH`].
    pub fn find_extrema(&self, grid: usize, exec: Execution) -> Vec<ExtremumRecord> {
        let alphas = self.grid(grid);
        let derivs: Vec<Option<f64>> = map_indexed(alphas.len(), exec, |k| self.right_derivative(alphas[k]));
        let zero = 1e-9 * self.scale;
        let sign = |d: f64| if d > zero { 1 } else if d < -zero { -1 } else { 0 };

        // Runs of consecutive defined samples; the full circle wraps.
        let mut signed: Vec<(f64, i32)> = Vec::new();
        let mut brackets: Vec<(f64, f64, i32)> = Vec::new();
        let flush = |signed: &mut Vec<(f64, i32)>, brackets: &mut Vec<(f64, f64, i32)>, wrap: bool| {
            let mut seq = signed.clone();
            if wrap {
                if let Some(&first) = seq.first() {
                    seq.push((first.0 + PI, first.1));
                }
            }
            for w in seq.windows(2) {
                if w[0].1 != w[1].1 {
                    brackets.push((w[0].0, w[1].0, w[0].1));
                }
            }
            signed.clear();
        };
        for (k, d) in derivs.iter().enumerate() {
            match d {
                Some(v) => {
                    let s = sign(*v);
                    if s != 0 {
                        signed.push((alphas[k], s));
                    }
                }
                None => flush(&mut signed, &mut brackets, false),
            }
        }
        let wrap = self.domain == Domain::Full && derivs.iter().all(|d| d.is_some());
        flush(&mut signed, &mut brackets, wrap);

        let found: Vec<Option<ExtremumRecord>> = map_indexed(brackets.len(), exec, |i| {
            let (a, b, s) = brackets[i];
            self.refine(a, b, s)
        });
        let mut out: Vec<ExtremumRecord> = found.into_iter().flatten().collect();
        out.sort_by(|x, y| x.phi_star.unwrap_or(0.0).total_cmp(&y.phi_star.unwrap_or(0.0)));
        out
    }

    /// Bisection on the sign of the right derivative, then golden-section on
    /// the length if the critical direction is a kink.
    fn refine(&self, mut l: f64, mut r: f64, left_sign: i32) -> Option<ExtremumRecord> {
        let kind = if left_sign > 0 { ExtremumKind::Max } else { ExtremumKind::Min };
        let zero = 1e-12 * self.scale;
        let mut exact = None;
        while r - l > REFINE_WIDTH {
            let m = 0.5 * (l + r);
            let d = self.right_derivative(m)?;
            if d.abs() <= zero {
                exact = Some(m);
                break;
            }
            if (d > 0.0) == (left_sign > 0) {
                l = m;
            } else {
                r = m;
            }
        }
        let mut alpha = exact.unwrap_or(0.5 * (l + r));
        let mut width = if exact.is_some() { 0.0 } else { r - l };

        let len = |a: f64| self.length(a);
        let kink = match (len(alpha - KINK_STEP), len(alpha), len(alpha + KINK_STEP)) {
            (Some(lm), Some(l0), Some(lp)) => {
                let left = (l0 - lm) / KINK_STEP;
                let right = (lp - l0) / KINK_STEP;
                (left - right).abs() > KINK_JUMP * self.scale
            }
            _ => false,
        };
        if kink {
            let (a, w) = self.golden(alpha - 10.0 * KINK_STEP, alpha + 10.0 * KINK_STEP, kind)?;
            alpha = a;
            width = w;
            if let Some(snapped) = self.snap_to_vertex(alpha) {
                alpha = snapped;
            }
        }

        // Local comparison confirms the kind.
        let here = len(alpha)?;
        let delta = 1e-5;
        let kind = match (len(alpha - delta), len(alpha + delta)) {
            (Some(a), Some(b)) if here >= a && here >= b => ExtremumKind::Max,
            (Some(a), Some(b)) if here <= a && here <= b => ExtremumKind::Min,
            _ => kind,
        };
        let chord = self.chord_at(alpha)?;
        let fa = self.body.boundary_feature(&chord.a, self.tol);
        let fb = self.body.boundary_feature(&chord.b, self.tol);
        Some(ExtremumRecord {
            phi_star: Some(alpha),
            kind,
            chord,
            endpoint_features: (fa, fb),
            refinement_width: width,
            kink,
        })
    }

    fn golden(&self, mut l: f64, mut r: f64, kind: ExtremumKind) -> Option<(f64, f64)> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let score = |a: f64| -> Option<f64> {
            let v = self.length(a)?;
            Some(if kind == ExtremumKind::Max { -v } else { v })
        };
        let mut x1 = r - g * (r - l);
        let mut x2 = l + g * (r - l);
        let mut f1 = score(x1)?;
        let mut f2 = score(x2)?;
        while r - l > REFINE_WIDTH {
            if f1 <= f2 {
                r = x2;
                x2 = x1;
                f2 = f1;
                x1 = r - g * (r - l);
                f1 = score(x1)?;
            } else {
                l = x1;
                x1 = x2;
                f1 = f2;
                x2 = l + g * (r - l);
                f2 = score(x2)?;
            }
        }
        Some((0.5 * (l + r), r - l))
    }

    /// Exact direction of the nearest body vertex, when within the kink window.
    fn snap_to_vertex(&self, alpha: f64) -> Option<f64> {
        let mut best: Option<(f64, f64)> = None;
        for v in self.body.vertices() {
            let d = &v - &self.pivot;
            // Only vertices in the scan plane.
            let inplane = &self.e1 * d.dot(&self.e1) + &self.e2 * d.dot(&self.e2);
            if (&d - inplane).norm() > 1e-9 * self.scale || d.norm() < 1e-12 {
                continue;
            }
            let a = self.angle_of(&d);
            let dist = angle_distance_mod_pi(a, alpha);
            if dist < 1e-7 && best.is_none_or(|(bd, _)| dist < bd) {
                // Same branch (mod π) as alpha.
                let shifted = a + ((alpha - a) / PI).round() * PI;
                best = Some((dist, shifted));
            }
        }
        best.map(|(_, a)| a)
    }
}

pub(crate) fn direction(e1: &Vector, e2: &Vector, alpha: f64) -> Vector {
    let turns = alpha.div_euclid(PI);
    let r = alpha - turns * PI;
    let s = if (turns as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (e1 * r.cos() + e2 * r.sin()) * s
}

fn quadric_rate(q: &Quadric, pivot: &Point, d: &Vector, dp: &Vector, t: f64) -> f64 {
    let p = pivot + d * t;
    let n = q.normal_at(&p);
    -t * n.dot(dp) / n.dot(d)
}

/// Start index and length of the longest cyclic run of `true` flags.
fn longest_cyclic_run(flags: &[bool]) -> Option<(usize, usize)> {
    let n = flags.len();
    let start = (0..n).find(|&k| !flags[k])?;
    let mut best: Option<(usize, usize)> = None;
    let mut k = 0;
    while k < n {
        let i = (start + k) % n;
        if flags[i] {
            let mut len = 0;
            while len < n && flags[(i + len) % n] {
                len += 1;
            }
            if best.is_none_or(|(_, bl)| len > bl) {
                best = Some((i, len));
            }
            k += len;
        } else {
            k += 1;
        }
    }
    best
}

/// Uniform sweep of a planar body's chord length through `pivot`.
pub fn sweep(body: &Body, pivot: &Point, grid_size: usize, tol: Tolerance, exec: Execution) -> Result<Vec<SweepSample>> {
    if grid_size < 16 {
        return Err(Error::InvalidArgument(format!("grid size {grid_size} is below 16")));
    }
    let scan = Scan::new(body, pivot, tol)?;
    Ok(scan.sweep(grid_size, exec))
}

/// All local extrema of the chord length through a planar pivot.
pub fn find_extrema(body: &Body, pivot: &Point, tol: Tolerance, exec: Execution) -> Result<Vec<ExtremumRecord>> {
    let scan = Scan::new(body, pivot, tol)?;
    Ok(scan.find_extrema(default_grid(body), exec))
}

/// [`find_extrema`] with an explicit grid size.
pub fn find_extrema_with_grid(body: &Body, pivot: &Point, grid: usize, tol: Tolerance, exec: Execution) -> Result<Vec<ExtremumRecord>> {
    let scan = Scan::new(body, pivot, tol)?;
    Ok(scan.find_extrema(grid.max(4 * body.vertices().len()), exec))
}
