use nalgebra::DMatrix;

use crate::geometry::{Point, Vector};

/// Ellipsoidal body `{x : |inv·(x - center)| <= 1}`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Quadric {
    pub center: Point,
    pub inv: DMatrix<f64>,
    pub min_axis: f64,
    pub max_axis: f64,
}

impl Quadric {
    pub fn radial(&self, x: &Point) -> f64 {
        (&self.inv * (x - &self.center)).norm()
    }

    /// Parameter interval of `{base + t·dir}` inside the body; near-tangent
    /// lines collapse to a single parameter.
    pub fn interval(&self, base: &Point, dir: &Vector, t_tol: f64) -> Option<(f64, f64)> {
        let y0 = &self.inv * (base - &self.center);
        let v = &self.inv * dir;
        let a = v.norm_squared();
        let b = y0.dot(&v);
        let c = y0.norm_squared() - 1.0;
        let disc = b * b - a * c;
        if disc < 0.0 {
            // Half-chord length is sqrt(disc)/a; allow tangency slop.
            let t = -b / a;
            let miss = self.radial(&(base + dir * t)) - 1.0;
            if miss * self.min_axis <= t_tol {
                return Some((t, t));
            }
            return None;
        }
        let sq = disc.sqrt();
        // Stable pair of roots.
        let q = -(b + b.signum() * sq);
        let (r1, r2) = if q != 0.0 { (q / a, c / q) } else { (-sq / a, sq / a) };
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        Some((lo, hi))
    }

    /// Unit outward normal at the radial projection of `x` onto the boundary.
    pub fn normal_at(&self, x: &Point) -> Vector {
        let g = self.inv.transpose() * (&self.inv * (x - &self.center));
        let n = g.norm();
        if n > 0.0 {
            g / n
        } else {
            let mut e = Vector::zeros(x.len());
            e[0] = 1.0;
            e
        }
    }
}
