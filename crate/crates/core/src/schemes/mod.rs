//! Spatial derivative operators on periodic grids.
//!
//! All operators are upwind-biased for a positive advection speed and act on
//! point values; the returned field approximates `u_x`. The velocity is
//! applied by the caller.

mod linear;
pub mod weno;

use std::fmt;
use std::str::FromStr;

pub use linear::{apply_linear, modified_wavenumber_linear, upw5_stencil, LinearStencil};
pub use weno::WenoVariant;

use crate::grid::wrap;
use crate::{Error, Result};

/// Jiang-Shu regularization.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum SchemeKind {
    Upw5,
    Weno5Js,
    Weno5M,
    Linear(LinearStencil),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    /// Regularization in the WENO weights; ignored by linear kinds.
    pub epsilon: f64,
}

impl SchemeSpec {
    pub fn new(kind: SchemeKind) -> Self {
        Self {
            kind,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn upw5() -> Self {
        Self::new(SchemeKind::Upw5)
    }

    pub fn weno5_js() -> Self {
        Self::new(SchemeKind::Weno5Js)
    }

    pub fn weno5_m() -> Self {
        Self::new(SchemeKind::Weno5M)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SchemeKind::Upw5 => "upw5",
            SchemeKind::Weno5Js => "weno5js",
            SchemeKind::Weno5M => "weno5m",
            SchemeKind::Linear(_) => "linear",
        }
    }

    pub fn is_linear(&self) -> bool {
        self.stencil().is_some()
    }

    /// The fixed stencil of a linear kind.
    pub fn stencil(&self) -> Option<LinearStencil> {
        match &self.kind {
            SchemeKind::Upw5 => Some(upw5_stencil()),
            SchemeKind::Linear(s) => Some(s.clone()),
            _ => None,
        }
    }

    fn weno_variant(&self) -> Option<WenoVariant> {
        match self.kind {
            SchemeKind::Weno5Js => Some(WenoVariant::Js),
            SchemeKind::Weno5M => Some(WenoVariant::M),
            _ => None,
        }
    }

    /// Smallest grid the operator accepts.
    pub fn min_points(&self) -> usize {
        match self.stencil() {
            Some(s) => s.coefficients().len(),
            None => weno::MIN_POINTS,
        }
    }

    /// `u_x` for a positive advection speed.
    pub fn derivative(&self, field: &[f64], dx: f64) -> Result<Vec<f64>> {
        match (self.stencil(), self.weno_variant()) {
            (Some(s), _) => apply_linear(field, &s, dx),
            (None, Some(v)) => weno::weno_derivative(field, v, self.epsilon, 1.0, dx),
            (None, None) => unreachable!("every scheme kind is linear or WENO"),
        }
    }
}

impl fmt::Display for SchemeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upw5" => Ok(Self::upw5()),
            "weno5js" | "weno5-js" | "weno5_js" => Ok(Self::weno5_js()),
            "weno5m" | "weno5-m" | "weno5_m" => Ok(Self::weno5_m()),
            other => Err(Error::invalid(format!(
                "unknown scheme '{other}' (expected upw5, weno5js or weno5m)"
            ))),
        }
    }
}

pub fn weno5_js_derivative(field: &[f64], c: f64, dx: f64) -> Result<Vec<f64>> {
    weno::weno_derivative(field, WenoVariant::Js, DEFAULT_EPSILON, c, dx)
}

pub fn weno5_m_derivative(field: &[f64], c: f64, dx: f64) -> Result<Vec<f64>> {
    weno::weno_derivative(field, WenoVariant::M, DEFAULT_EPSILON, c, dx)
}

/// Per-point linear stencil `b_{j+l}` equivalent to a (possibly nonlinear)
/// operator evaluated on one particular field.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenStencilField {
    offset_lo: i32,
    coefficients: Vec<Vec<f64>>,
}

impl FrozenStencilField {
    pub fn offset_lo(&self) -> i32 {
        self.offset_lo
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Coefficients at point `j`, for offsets `offset_lo ..`.
    pub fn at(&self, j: usize) -> &[f64] {
        &self.coefficients[j]
    }

    /// `(1/dx) * sum_l b_{j,l} v_{j+l}` at every point.
    pub fn apply(&self, field: &[f64], dx: f64) -> Result<Vec<f64>> {
        let n = self.coefficients.len();
        if field.len() != n {
            return Err(Error::invalid(format!(
                "frozen stencil built for {n} points applied to {}",
                field.len()
            )));
        }
        let inv_dx = 1.0 / dx;
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .map(|(j, b)| {
                b.iter()
                    .enumerate()
                    .map(|(l, bl)| {
                        bl * field[wrap(j as isize + self.offset_lo as isize + l as isize, n)]
                    })
                    .sum::<f64>()
                    * inv_dx
            })
            .collect())
    }
}

/// Freezes the scheme's weights on `field`.
///
/// For WENO kinds `b_j` over offsets `-3..=2` combines the reconstruction at
/// `j + 1/2` with minus the one at `j - 1/2`.
pub fn frozen_coefficients(spec: &SchemeSpec, field: &[f64]) -> Result<FrozenStencilField> {
    let n = field.len();
    if n < spec.min_points() {
        return Err(Error::invalid(format!(
            "{} needs at least {} points, got {n}",
            spec.name(),
            spec.min_points()
        )));
    }
    if let Some(s) = spec.stencil() {
        return Ok(FrozenStencilField {
            offset_lo: s.offset_lo(),
            coefficients: vec![s.coefficients().to_vec(); n],
        });
    }
    let variant = spec.weno_variant().expect("non-linear kinds are WENO");
    let recon: Vec<[f64; 5]> = weno::weno_weights(field, variant, spec.epsilon)
        .iter()
        .map(weno::reconstruction_coefficients)
        .collect();
    let coefficients = (0..n)
        .map(|j| {
            let right = &recon[j];
            let left = &recon[wrap(j as isize - 1, n)];
            let mut b = vec![0.0; 6];
            for m in 0..5 {
                b[m + 1] += right[m];
                b[m] -= left[m];
            }
            b
        })
        .collect();
    Ok(FrozenStencilField {
        offset_lo: -3,
        coefficients,
    })
}
