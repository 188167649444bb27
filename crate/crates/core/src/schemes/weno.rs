//! Fifth-order WENO reconstruction for a positive advection speed.
//!
//! The interface value `h_{i+1/2}` is reconstructed from `u_{i-2} .. u_{i+2}`
//! as a convex combination of three third-order candidates; the derivative
//! is the flux difference `(h_{i+1/2} - h_{i-1/2}) / dx`.

use crate::grid::wrap;
use crate::{Error, Result};

/// Optimal (linear) weights `d_k`.
pub const OPTIMAL_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Candidate reconstructions as coefficients on `u_{i-2} .. u_{i+2}`.
const CANDIDATES: [[f64; 5]; 3] = [
    [2.0 / 6.0, -7.0 / 6.0, 11.0 / 6.0, 0.0, 0.0],
    [0.0, -1.0 / 6.0, 5.0 / 6.0, 2.0 / 6.0, 0.0],
    [0.0, 0.0, 2.0 / 6.0, 5.0 / 6.0, -1.0 / 6.0],
];

pub const MIN_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WenoVariant {
    /// Jiang-Shu weights.
    Js,
    /// Henrick-Aslam-Powers mapped weights.
    M,
}

/// Jiang-Shu smoothness indicators of the three candidate stencils.
pub fn smoothness_indicators(w: &[f64; 5]) -> [f64; 3] {
    let [a, b, c, d, e] = *w;
    [
        13.0 / 12.0 * (a - 2.0 * b + c).powi(2) + 0.25 * (a - 4.0 * b + 3.0 * c).powi(2),
        13.0 / 12.0 * (b - 2.0 * c + d).powi(2) + 0.25 * (b - d).powi(2),
        13.0 / 12.0 * (c - 2.0 * d + e).powi(2) + 0.25 * (3.0 * c - 4.0 * d + e).powi(2),
    ]
}

/// Henrick mapping `g_k(w) = w (d + d^2 - 3 d w + w^2) / (d^2 + w (1 - 2 d))`.
/// Fixes `0`, `d_k` and `1`.
pub fn henrick_map(w: f64, d: f64) -> f64 {
    w * (d + d * d - 3.0 * d * w + w * w) / (d * d + w * (1.0 - 2.0 * d))
}

/// Nonlinear weights for one interface window `u_{i-2} .. u_{i+2}`.
pub fn interface_weights(w: &[f64; 5], variant: WenoVariant, epsilon: f64) -> [f64; 3] {
    let beta = smoothness_indicators(w);
    let mut alpha = [0.0; 3];
    for k in 0..3 {
        alpha[k] = OPTIMAL_WEIGHTS[k] / (epsilon + beta[k]).powi(2);
    }
    let mut omega = normalize(alpha);
    if variant == WenoVariant::M {
        for k in 0..3 {
            omega[k] = henrick_map(omega[k], OPTIMAL_WEIGHTS[k]);
        }
        omega = normalize(omega);
    }
    omega
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let s = a[0] + a[1] + a[2];
    [a[0] / s, a[1] / s, a[2] / s]
}

/// Reconstruction coefficients on `u_{i-2} .. u_{i+2}` for given weights.
pub fn reconstruction_coefficients(omega: &[f64; 3]) -> [f64; 5] {
    let mut r = [0.0; 5];
    for (k, row) in CANDIDATES.iter().enumerate() {
        for m in 0..5 {
            r[m] += omega[k] * row[m];
        }
    }
    r
}

/// `h_{i+1/2}` from one window.
pub fn reconstruct_interface(w: &[f64; 5], variant: WenoVariant, epsilon: f64) -> f64 {
    let omega = interface_weights(w, variant, epsilon);
    let mut h = 0.0;
    for (k, row) in CANDIDATES.iter().enumerate() {
        let q: f64 = row.iter().zip(w).map(|(c, u)| c * u).sum();
        h += omega[k] * q;
    }
    h
}

pub(crate) fn window(field: &[f64], i: usize) -> [f64; 5] {
    let n = field.len();
    let i = i as isize;
    [
        field[wrap(i - 2, n)],
        field[wrap(i - 1, n)],
        field[i as usize],
        field[wrap(i + 1, n)],
        field[wrap(i + 2, n)],
    ]
}

pub(crate) fn check_field(field: &[f64], c: f64, dx: f64) -> Result<()> {
    if field.len() < MIN_POINTS {
        return Err(Error::invalid(format!(
            "WENO5 needs at least {MIN_POINTS} points, got {}",
            field.len()
        )));
    }
    if !(c > 0.0) {
        return Err(Error::invalid(format!(
            "only positive advection speeds are supported, got c = {c}"
        )));
    }
    if !(dx > 0.0) {
        return Err(Error::invalid(format!("dx must be positive, got {dx}")));
    }
    Ok(())
}

/// Weights at every interface `i + 1/2`, `i = 0 .. N-1`.
pub fn weno_weights(field: &[f64], variant: WenoVariant, epsilon: f64) -> Vec<[f64; 3]> {
    (0..field.len())
        .map(|i| interface_weights(&window(field, i), variant, epsilon))
        .collect()
}

pub(crate) fn weno_derivative(
    field: &[f64],
    variant: WenoVariant,
    epsilon: f64,
    c: f64,
    dx: f64,
) -> Result<Vec<f64>> {
    check_field(field, c, dx)?;
    let n = field.len();
    let flux: Vec<f64> = (0..n)
        .map(|i| reconstruct_interface(&window(field, i), variant, epsilon))
        .collect();
    let inv_dx = 1.0 / dx;
    Ok((0..n)
        .map(|i| (flux[i] - flux[wrap(i as isize - 1, n)]) * inv_dx)
        .collect())
}
