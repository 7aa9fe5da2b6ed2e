//! Closed-form chord lengths for an angle, in the projection-anchored
//! parametrization.
//!
//! The arm carrying the far endpoint `A` is the *A-arm*; `O'` is the foot of
//! the perpendicular from `O` to it and `h_A = |OO'|`. A line through `O` is
//! labeled by `φ`, the signed angle from `OO'` to `OA`: the direction from `O`
//! towards `A` is `cos φ·ŵ + sin φ·u_A` with `ŵ = (O' - O)/h_A`. In the plane,
//! the line angle is `α = α_ŵ + σφ` where `σ = sign(ŵ × u_A)`.
//!
//! Interior pivot (A on the first arm):
//! `f(φ) = h_A/cos φ + h_B/cos(θ - φ)` on `(θ - π/2, π/2)`.
//!
//! Exterior pivot (B between O and A):
//! `g(φ) = h_A/cos φ - h_B/cos(φ - θ)` on `(atan(-s'/h_A), π/2)` where `s'`
//! is the arm coordinate of `O'`.

use std::f64::consts::FRAC_PI_2;

use crate::body::Angle2D;
use crate::error::{check_dim, Error, Result};
use crate::geometry::{cross2, Point, Tolerance, Vector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleF {
    pub length: f64,
    pub derivative: f64,
    pub second_derivative: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleG {
    pub length: f64,
    pub derivative: f64,
}

/// Pivot position relative to an angle, with the parametrization it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleChart {
    pub exterior: bool,
    /// 0 when `A` lies on the arm along `u1`, 1 for `u2`.
    pub a_arm: usize,
    pub theta: f64,
    pub h_a: f64,
    pub h_b: f64,
    /// Arm coordinate of `O'` on the A-arm.
    pub s_foot: f64,
    pub vertex: Point,
    pub pivot: Point,
    pub u_a: Vector,
    pub u_b: Vector,
    pub w_hat: Vector,
    pub alpha_w: f64,
    pub sigma: f64,
}

impl AngleChart {
    pub fn new(body: &Angle2D, o: &Point, tol: Tolerance) -> Result<Self> {
        check_dim(2, o.len())?;
        let (x, y) = body.oblique_coords(o);
        let d = o - &body.vertex;
        let dist1 = cross2(&body.u1, &d).abs();
        let dist2 = cross2(&body.u2, &d).abs();
        let t = tol.at_scale(d.norm());
        if dist1 <= t || dist2 <= t {
            return Err(if x >= 0.0 && y >= 0.0 {
                Error::BoundaryPivot
            } else {
                Error::Unsupported("pivot on the line of an arm".into())
            });
        }
        let (exterior, a_arm) = if x > 0.0 && y > 0.0 {
            (false, 0)
        } else if x < 0.0 && y > 0.0 {
            (true, 0)
        } else if x > 0.0 && y < 0.0 {
            (true, 1)
        } else {
            return Err(Error::Unsupported("pivot inside the opposite angle".into()));
        };
        let (u_a, u_b) = if a_arm == 0 { (body.u1.clone(), body.u2.clone()) } else { (body.u2.clone(), body.u1.clone()) };
        let h_a = cross2(&u_a, &d).abs();
        let h_b = cross2(&u_b, &d).abs();
        let s_foot = u_a.dot(&d);
        let foot = &body.vertex + &u_a * s_foot;
        let w_hat = (foot - o) / h_a;
        let alpha_w = w_hat[1].atan2(w_hat[0]);
        let sigma = cross2(&w_hat, &u_a).signum();
        Ok(AngleChart {
            exterior,
            a_arm,
            theta: body.theta,
            h_a,
            h_b,
            s_foot,
            vertex: body.vertex.clone(),
            pivot: o.clone(),
            u_a,
            u_b,
            w_hat,
            alpha_w,
            sigma,
        })
    }

    /// Open domain of `φ`.
    pub fn domain(&self) -> (f64, f64) {
        if self.exterior {
            ((-self.s_foot / self.h_a).atan(), FRAC_PI_2)
        } else {
            (self.theta - FRAC_PI_2, FRAC_PI_2)
        }
    }

    pub fn contains(&self, phi: f64) -> bool {
        let (lo, hi) = self.domain();
        phi > lo && phi < hi
    }

    /// Unit direction from `O` towards `A`.
    pub fn direction(&self, phi: f64) -> Vector {
        &self.w_hat * phi.cos() + &self.u_a * phi.sin()
    }

    /// Unwrapped line angle `α_ŵ + σφ`.
    pub fn alpha_of(&self, phi: f64) -> f64 {
        self.alpha_w + self.sigma * phi
    }

    /// The `φ` in the domain whose line has angle `α` (mod π), if any.
    pub fn phi_of(&self, alpha: f64) -> Option<f64> {
        let (lo, hi) = self.domain();
        let raw = self.sigma * (alpha - self.alpha_w);
        let pi = std::f64::consts::PI;
        let k = ((raw - lo) / pi).floor();
        let phi = raw - k * pi;
        (phi > lo && phi < hi).then_some(phi)
    }

    /// Line-angle interval of the domain, with `lo ∈ [0, π)`.
    pub fn alpha_domain(&self) -> (f64, f64) {
        let (plo, phi) = self.domain();
        let (a, b) = if self.sigma > 0.0 { (self.alpha_of(plo), self.alpha_of(phi)) } else { (self.alpha_of(phi), self.alpha_of(plo)) };
        let shift = a.div_euclid(std::f64::consts::PI) * std::f64::consts::PI;
        (a - shift, b - shift)
    }

    fn check(&self, phi: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if phi > lo && phi < hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain { phi, lo, hi })
        }
    }

    /// Chord endpoints `(A, B)` at `φ`.
    pub fn endpoints(&self, phi: f64) -> Result<(Point, Point)> {
        self.check(phi)?;
        let dir = self.direction(phi);
        let oa = self.h_a / phi.cos();
        let ob = if self.exterior { self.h_b / (phi - self.theta).cos() } else { -self.h_b / (self.theta - phi).cos() };
        Ok((&self.pivot + &dir * oa, &self.pivot + &dir * ob))
    }
}

/// `f(φ)`, `f'(φ)` and `f''(φ)` for a pivot interior to the angle.
pub fn angle_f(body: &Angle2D, o: &Point, phi: f64) -> Result<AngleF> {
    let chart = AngleChart::new(body, o, Tolerance::default())?;
    if chart.exterior {
        return Err(Error::InvalidArgument("pivot is outside the angle".into()));
    }
    eval_f(&chart, phi)
}

pub(crate) fn eval_f(c: &AngleChart, phi: f64) -> Result<AngleF> {
    c.check(phi)?;
    let psi = c.theta - phi;
    let oa = c.h_a / phi.cos();
    let ob = c.h_b / psi.cos();
    let (ta, tb) = (phi.tan(), psi.tan());
    let (sa, sb) = (1.0 / phi.cos().powi(2), 1.0 / psi.cos().powi(2));
    Ok(AngleF {
        length: oa + ob,
        derivative: oa * ta - ob * tb,
        second_derivative: oa * (ta * ta + sa) + ob * (tb * tb + sb),
    })
}

/// `g(φ) = |OA| - |OB|` and `g'(φ)` for a pivot outside the angle and its
/// opposite angle.
pub fn angle_g(body: &Angle2D, o: &Point, phi: f64) -> Result<AngleG> {
    let chart = AngleChart::new(body, o, Tolerance::default())?;
    if !chart.exterior {
        return Err(Error::InvalidArgument("pivot is inside the angle".into()));
    }
    eval_g(&chart, phi)
}

pub(crate) fn eval_g(c: &AngleChart, phi: f64) -> Result<AngleG> {
    c.check(phi)?;
    let psi = phi - c.theta;
    let oa = c.h_a / phi.cos();
    let ob = c.h_b / psi.cos();
    Ok(AngleG { length: oa - ob, derivative: oa * phi.tan() - ob * psi.tan() })
}

/// Length and `dℓ/dφ` for either pivot position.
pub(crate) fn eval_chart(c: &AngleChart, phi: f64) -> Result<(f64, f64)> {
    if c.exterior {
        eval_g(c, phi).map(|g| (g.length, g.derivative))
    } else {
        eval_f(c, phi).map(|f| (f.length, f.derivative))
    }
}
