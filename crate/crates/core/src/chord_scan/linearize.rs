use std::f64::consts::FRAC_PI_2;

use super::{direction, Scan};
use crate::body::{Body, Support};
use crate::error::{Error, Result};
use crate::geometry::{Point, Tolerance, Vector};

/// Chord length cut by `l(α)` from the two tangent lines at the endpoints of
/// the chord at `α₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct Linearization {
    pub alpha0: f64,
    pivot: Point,
    e1: Vector,
    e2: Vector,
    touch_a: Point,
    normal_a: Vector,
    touch_b: Point,
    normal_b: Vector,
}

impl Linearization {
    fn params(&self, d: &Vector) -> Option<(f64, f64)> {
        let da = self.normal_a.dot(d);
        let db = self.normal_b.dot(d);
        if da.abs() < 1e-12 || db.abs() < 1e-12 {
            return None;
        }
        let ta = self.normal_a.dot(&(&self.touch_a - &self.pivot)) / da;
        let tb = self.normal_b.dot(&(&self.touch_b - &self.pivot)) / db;
        Some((ta, tb))
    }

    /// Length at line angle `alpha`; `None` when `l(α)` is parallel to a tangent.
    pub fn eval(&self, alpha: f64) -> Option<f64> {
        let (ta, tb) = self.params(&direction(&self.e1, &self.e2, alpha))?;
        Some((ta - tb).abs())
    }

    pub fn derivative(&self, alpha: f64) -> Option<f64> {
        let d = direction(&self.e1, &self.e2, alpha);
        let dp = direction(&self.e1, &self.e2, alpha + FRAC_PI_2);
        let (ta, tb) = self.params(&d)?;
        let ra = -ta * self.normal_a.dot(&dp) / self.normal_a.dot(&d);
        let rb = -tb * self.normal_b.dot(&dp) / self.normal_b.dot(&d);
        Some((ta - tb).signum() * (ra - rb))
    }
}

/// Tangent-line linearization of the chord length at `alpha0`.
pub fn linearized_f(body: &Body, pivot: &Point, alpha0: f64, tol: Tolerance) -> Result<Linearization> {
    let scan = Scan::new(body, pivot, tol)?;
    let chord = scan.chord_at(alpha0).ok_or_else(|| Error::InvalidArgument(format!("no chord at angle {alpha0}")))?;
    let unique = |p: &Point| -> Result<Vector> {
        let f = body.boundary_feature(p, tol);
        match body.supporting_hyperplanes_at(&f)? {
            Support::Unique(h) => Ok(h.normal),
            Support::Cone(_) => Err(Error::Unsupported("endpoint has no unique tangent".into())),
        }
    };
    let normal_a = unique(&chord.a)?;
    let normal_b = unique(&chord.b)?;
    let (e1, e2) = scan.plane();
    Ok(Linearization {
        alpha0,
        pivot: pivot.clone(),
        e1: e1.clone(),
        e2: e2.clone(),
        touch_a: chord.a.clone(),
        normal_a,
        touch_b: chord.b.clone(),
        normal_b,
    })
}
