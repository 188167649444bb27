use num_complex::Complex64;

use crate::grid::wrap;
use crate::{Error, Result};

const CONSISTENCY_TOL: f64 = 1e-12;

/// Linear derivative stencil `u_x(x_i) ~ (1/dx) * sum_j a_j u_{i+j}` over
/// offsets `offset_lo ..= offset_lo + len - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearStencil {
    offset_lo: i32,
    coefficients: Vec<f64>,
}

impl LinearStencil {
    /// Builds a stencil, checking `sum a_j = 0` and `sum j a_j = 1`.
    pub fn new(offset_lo: i32, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("stencil has no coefficients"));
        }
        let stencil = Self {
            offset_lo,
            coefficients,
        };
        let zeroth: f64 = stencil.coefficients.iter().sum();
        let first: f64 = stencil.terms().map(|(j, a)| j as f64 * a).sum();
        if zeroth.abs() > CONSISTENCY_TOL || (first - 1.0).abs() > CONSISTENCY_TOL {
            return Err(Error::invalid(format!(
                "stencil is not a consistent first derivative: sum a = {zeroth:e}, sum j*a = {first}"
            )));
        }
        Ok(stencil)
    }

    pub fn offset_lo(&self) -> i32 {
        self.offset_lo
    }

    pub fn offset_hi(&self) -> i32 {
        self.offset_lo + self.coefficients.len() as i32 - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `(offset, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(k, &a)| (self.offset_lo + k as i32, a))
    }

    /// `kappa'(kappa) = -i * sum_j a_j exp(i j kappa)`.
    pub fn modified_wavenumber(&self, kappa: f64) -> Complex64 {
        let s: Complex64 = self
            .terms()
            .map(|(j, a)| Complex64::from_polar(a, j as f64 * kappa))
            .sum();
        -Complex64::i() * s
    }

    /// `d kappa'/d kappa = sum_j j a_j exp(i j kappa)`.
    pub fn modified_wavenumber_derivative(&self, kappa: f64) -> Complex64 {
        self.terms()
            .map(|(j, a)| Complex64::from_polar(j as f64 * a, j as f64 * kappa))
            .sum()
    }
}

/// Fifth-order upwind-biased stencil on offsets -3..=2.
pub fn upw5_stencil() -> LinearStencil {
    LinearStencil::new(
        -3,
        vec![-1.0 / 30.0, 0.25, -1.0, 1.0 / 3.0, 0.5, -1.0 / 20.0],
    )
    .expect("UPW5 coefficients are consistent")
}

/// Evaluates `kappa'` of a linear stencil; see [`LinearStencil::modified_wavenumber`].
pub fn modified_wavenumber_linear(stencil: &LinearStencil, kappa: f64) -> Complex64 {
    stencil.modified_wavenumber(kappa)
}

/// Periodic application of a linear stencil.
pub fn apply_linear(field: &[f64], stencil: &LinearStencil, dx: f64) -> Result<Vec<f64>> {
    let n = field.len();
    let width = stencil.coefficients.len();
    if n < width {
        return Err(Error::invalid(format!(
            "grid of {n} points is shorter than the {width}-point stencil"
        )));
    }
    if !(dx > 0.0) {
        return Err(Error::invalid(format!("dx must be positive, got {dx}")));
    }
    let inv_dx = 1.0 / dx;
    Ok((0..n)
        .map(|i| {
            stencil
                .terms()
                .map(|(j, a)| a * field[wrap(i as isize + j as isize, n)])
                .sum::<f64>()
                * inv_dx
        })
        .collect())
}
