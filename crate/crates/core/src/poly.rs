//! Roots of small real polynomials.
//!
//! Coefficients are stored lowest degree first: `c[0] + c[1] x + c[2] x² + …`.

use num_complex::Complex64;

/// Horner evaluation.
pub fn eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn eval_c(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

/// Drops leading coefficients that are negligible relative to the largest.
pub fn trim(coeffs: &[f64]) -> Vec<f64> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut v = coeffs.to_vec();
    while v.len() > 1 && v.last().is_some_and(|c| c.abs() <= 1e-14 * scale) {
        v.pop();
    }
    v
}

/// Synthetic division by `(x - root)`, discarding the remainder.
pub fn deflate(coeffs: &[f64], root: f64) -> Vec<f64> {
    let n = coeffs.len();
    if n <= 1 {
        return vec![];
    }
    let mut out = vec![0.0; n - 1];
    let mut carry = coeffs[n - 1];
    out[n - 2] = carry;
    for i in (1..n - 1).rev() {
        carry = coeffs[i] + carry * root;
        out[i - 1] = carry;
    }
    out
}

/// All complex roots by the Aberth–Ehrlich iteration.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let c = trim(coeffs);
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return vec![];
    }
    let lead = c[deg];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    if deg == 1 {
        return vec![Complex64::new(-monic[0], 0.0)];
    }
    let dmonic = derivative(&monic);
    // Cauchy bound for the initial circle.
    let radius = 1.0 + monic[..deg].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.4;
            Complex64::from_polar(0.5 * radius, ang)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0_f64;
        for i in 0..deg {
            let p = eval_c(&monic, z[i]);
            let dp = eval_c(&dmonic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        if max_step < 1e-16 {
            break;
        }
    }
    z
}

/// Real roots: complex roots whose imaginary part is at most `imag_tol`
/// relative to `1 + |root|`, polished by Newton steps and sorted ascending.
pub fn real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let c = trim(coeffs);
    let dc = derivative(&c);
    let mut roots: Vec<f64> = complex_roots(&c)
        .into_iter()
        .filter(|z| z.im.abs() <= imag_tol * (1.0 + z.re.abs()))
        .map(|z| {
            let mut x = z.re;
            for _ in 0..4 {
                let d = eval(&dc, x);
                if d == 0.0 {
                    break;
                }
                let nx = x - eval(&c, x) / d;
                if (eval(&c, nx)).abs() < (eval(&c, x)).abs() {
                    x = nx;
                } else {
                    break;
                }
            }
            x
        })
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    roots
}

/// Product of two polynomials.
pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sum of two polynomials.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0)).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}
