//! Second-order (Cox–Snell) bias of the complete-data MLE.

use super::complete::fisher_info;
use crate::linalg::{self, Mat2};
use crate::specfun::tetragamma_raw;
use crate::{IwlParams, Result};

/// `K`, `A = [A⁽¹⁾ | A⁽²⁾]` and the bias vector `K⁻¹ A vec(K⁻¹)` for a
/// sample of size `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasMatrices {
    /// Expected information (positive definite).
    pub k: Mat2,
    /// Row `i` is `[a⁽¹⁾ᵢ₁, a⁽¹⁾ᵢ₂, a⁽²⁾ᵢ₁, a⁽²⁾ᵢ₂]`.
    pub a: [[f64; 4]; 2],
    pub bias: [f64; 2],
}

impl BiasMatrices {
    pub fn a_block(&self, l: usize) -> Mat2 {
        let o = 2 * l;
        [
            [self.a[0][o], self.a[0][o + 1]],
            [self.a[1][o], self.a[1][o + 1]],
        ]
    }
}

/// Builds the Cox–Snell matrices at `theta`.
///
/// With `c = 1/(λ+φ)³` the third-order cumulants give
///
/// ```text
/// A⁽¹⁾/n = [ −c − ψ″(φ)/2    −c            ]
///          [ −c              −c − 1/(2λ²)  ]
/// A⁽²⁾/n = [ −c              −c − 1/(2λ²)  ]
///          [ −c − 1/(2λ²)    −c + (φ+1)/λ³ ]
/// ```
///
/// where `a⁽ˡ⁾ᵢⱼ = κᵢⱼ⁽ˡ⁾ − κᵢⱼₗ/2`.
pub fn bias_matrices(theta: &IwlParams, n: usize) -> Result<BiasMatrices> {
    let k = fisher_info(theta, n)?;
    let (phi, lambda) = (theta.phi(), theta.lambda());
    let nf = n as f64;
    let c = (lambda + phi).powi(-3);
    let h = 0.5 / (lambda * lambda);
    let a = [
        [-c - 0.5 * tetragamma_raw(phi), -c, -c, -c - h],
        [-c, -c - h, -c - h, -c + (phi + 1.0) / lambda.powi(3)],
    ]
    .map(|row| row.map(|v| v * nf));
    let kinv = linalg::inverse(&k)?;
    let vec_kinv = [kinv[0][0], kinv[1][0], kinv[0][1], kinv[1][1]];
    let av = [0, 1].map(|i| (0..4).map(|j| a[i][j] * vec_kinv[j]).sum::<f64>());
    let bias = linalg::mul_vec(&kinv, av);
    Ok(BiasMatrices { k, a, bias })
}
