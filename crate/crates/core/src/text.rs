//! Number formatting shared by reports: 17 significant digits, so values
//! round-trip and reports diff cleanly.

use crate::geometry::Vector;

/// Negative zero prints as zero.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

pub fn vector(v: &Vector) -> String {
    v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(",")
}
