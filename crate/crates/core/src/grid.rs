//! Uniform periodic grids.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform periodic grid on `[x_lo, x_hi)` with `n` points; `x_hi` is the
/// periodic image of `x_lo` and is not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x_lo: f64, x_hi: f64, n: usize) -> Result<Self> {
        if !(x_hi > x_lo) || !x_lo.is_finite() || !x_hi.is_finite() {
            return Err(Error::invalid(format!(
                "domain [{x_lo}, {x_hi}] must satisfy lo < hi"
            )));
        }
        if n < 2 {
            return Err(Error::invalid(format!("grid needs at least 2 points, got {n}")));
        }
        Ok(Self { x_lo, x_hi, n })
    }

    /// Grid on `[0, 2*pi)`; mode `n` then has reduced wavenumber `2*pi*n/N`.
    pub fn unit_circle(n: usize) -> Result<Self> {
        Self::new(0.0, 2.0 * std::f64::consts::PI, n)
    }

    pub fn length(&self) -> f64 {
        self.x_hi - self.x_lo
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_lo + self.dx() * j as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|j| f(self.x(j))).collect()
    }

    /// Physical wavenumber of DFT mode `m` (`m` may exceed `n/2`; it is not folded).
    pub fn wavenumber(&self, m: usize) -> f64 {
        2.0 * std::f64::consts::PI * m as f64 / self.length()
    }

    /// Reduced wavenumber `k * dx` of mode `m`.
    pub fn kappa(&self, m: usize) -> f64 {
        reduced_wavenumber(m, self.n)
    }
}

/// `kappa_m = 2*pi*m/N`.
pub fn reduced_wavenumber(m: usize, n: usize) -> f64 {
    2.0 * std::f64::consts::PI * m as f64 / n as f64
}

/// Wraps a signed offset onto `0..n`.
#[inline]
pub(crate) fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}
