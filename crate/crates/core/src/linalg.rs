//! Fixed-size 2×2 matrix helpers; every model in this crate has two
//! parameters.

use crate::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

pub fn det(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inverse(m: &Mat2) -> Result<Mat2> {
    let d = det(m);
    let scale = m.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if !d.is_finite() || d.abs() <= 1e-14 * scale * scale {
        return Err(Error::Singular(format!("determinant {d:e}")));
    }
    Ok([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

pub fn mul_vec(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn is_positive_definite(m: &Mat2) -> bool {
    m[0][0] > 0.0 && det(m) > 0.0
}

pub fn scale(m: &Mat2, s: f64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}
