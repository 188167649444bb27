//! Discrete Fourier transform with the `1/N` factor on the forward transform,
//!
//! ```text
//! c_n = (1/N) * sum_j v_j * exp(-i * j * kappa_n),   kappa_n = 2*pi*n/N,
//! ```
//!
//! so the inverse carries no factor. Sums are evaluated directly; twiddle
//! factors are indexed by `(j*n) mod N` so every phase is computed from an
//! exact integer angle.

use num_complex::Complex64;

use crate::{Error, Result};

/// Fourier coefficients `c_0 .. c_{N-1}` of a periodic field.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub coefficients: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coefficients[n]
    }
}

/// Table of `exp(-2*pi*i*m/N)` for `m = 0..N`.
#[derive(Debug, Clone)]
pub struct Twiddles {
    table: Vec<Complex64>,
}

impl Twiddles {
    pub fn new(n: usize) -> Self {
        let table = (0..n)
            .map(|m| {
                let theta = -2.0 * std::f64::consts::PI * m as f64 / n as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        Self { table }
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// `exp(-i * j * kappa_n)`.
    #[inline]
    pub fn forward(&self, j: usize, n: usize) -> Complex64 {
        self.table[(j * n) % self.table.len()]
    }

    /// Single coefficient `c_n` of a complex field.
    pub fn coefficient(&self, values: &[Complex64], n: usize) -> Complex64 {
        debug_assert_eq!(values.len(), self.len());
        let sum: Complex64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| v * self.forward(j, n))
            .sum();
        sum / values.len() as f64
    }

    /// Single coefficient `c_n` of a real field.
    pub fn coefficient_real(&self, values: &[f64], n: usize) -> Complex64 {
        debug_assert_eq!(values.len(), self.len());
        let sum: Complex64 = values
            .iter()
            .enumerate()
            .map(|(j, &v)| self.forward(j, n) * v)
            .sum();
        sum / values.len() as f64
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "transform needs at least 2 samples, got {n}"
        )));
    }
    Ok(())
}

pub fn dft(values: &[Complex64]) -> Result<Spectrum> {
    check_len(values.len())?;
    let tw = Twiddles::new(values.len());
    let coefficients = (0..values.len()).map(|n| tw.coefficient(values, n)).collect();
    Ok(Spectrum { coefficients })
}

pub fn dft_real(values: &[f64]) -> Result<Spectrum> {
    check_len(values.len())?;
    let tw = Twiddles::new(values.len());
    let coefficients = (0..values.len())
        .map(|n| tw.coefficient_real(values, n))
        .collect();
    Ok(Spectrum { coefficients })
}

/// Single coefficient `c_n` without building the full spectrum.
pub fn mode_coefficient(values: &[f64], n: usize) -> Result<Complex64> {
    check_len(values.len())?;
    Ok(Twiddles::new(values.len()).coefficient_real(values, n % values.len()))
}

pub fn idft(spectrum: &Spectrum) -> Result<Vec<Complex64>> {
    let n = spectrum.len();
    check_len(n)?;
    let tw = Twiddles::new(n);
    Ok((0..n)
        .map(|j| {
            spectrum
                .coefficients
                .iter()
                .enumerate()
                .map(|(m, c)| c * tw.forward(j, m).conj())
                .sum()
        })
        .collect())
}

/// Analytic signal: modes `1..N/2` doubled, mode 0 and the Nyquist mode
/// kept with weight 1, negative frequencies removed.
pub fn analytic_signal(values: &[f64]) -> Result<Vec<Complex64>> {
    let n = values.len();
    if !n.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "analytic signal needs an even sample count, got {n}"
        )));
    }
    let mut spectrum = dft_real(values)?;
    let half = n / 2;
    for (m, c) in spectrum.coefficients.iter_mut().enumerate() {
        match m {
            0 => {}
            m if m < half => *c *= 2.0,
            m if m == half => {}
            _ => *c = Complex64::new(0.0, 0.0),
        }
    }
    idft(&spectrum)
}

/// `|analytic signal|`, the instantaneous amplitude of a real field.
pub fn hilbert_envelope(values: &[f64]) -> Result<Vec<f64>> {
    Ok(analytic_signal(values)?.iter().map(|z| z.norm()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_field_is_mode_zero() {
        let s = dft(&[c(1.0, 0.0); 8]).unwrap();
        assert!((s.coefficient(0) - c(1.0, 0.0)).norm() < 1e-15);
        for n in 1..8 {
            assert!(s.coefficient(n).norm() < 1e-15);
        }
    }

    #[test]
    fn cosine_splits_into_two_halves() {
        let n = 16;
        let v: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect();
        let s = dft_real(&v).unwrap();
        for m in 0..n {
            let expect = if m == 1 || m == n - 1 { 0.5 } else { 0.0 };
            assert!((s.coefficient(m) - c(expect, 0.0)).norm() < 1e-12, "mode {m}");
        }
    }

    #[test]
    fn complex_exponential_single_mode() {
        let n = 32;
        let v: Vec<Complex64> = (0..n)
            .map(|j| Complex64::from_polar(1.0, 3.0 * 2.0 * PI * j as f64 / n as f64))
            .collect();
        let s = dft(&v).unwrap();
        for m in 0..n {
            let expect = if m == 3 { 1.0 } else { 0.0 };
            assert!((s.coefficient(m) - c(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_and_single_sample_rejected() {
        assert!(dft(&[]).is_err());
        assert!(dft(&[c(1.0, 0.0)]).is_err());
        assert!(idft(&Spectrum { coefficients: vec![] }).is_err());
    }

    #[test]
    fn idft_of_single_coefficients() {
        let n = 10;
        let mut coefficients = vec![c(0.0, 0.0); n];
        coefficients[0] = c(2.5, -1.0);
        let f = idft(&Spectrum { coefficients }).unwrap();
        assert!(f.iter().all(|z| (z - c(2.5, -1.0)).norm() < 1e-14));

        let mut coefficients = vec![c(0.0, 0.0); n];
        coefficients[1] = c(0.5, 0.0);
        coefficients[n - 1] = c(0.5, 0.0);
        let f = idft(&Spectrum { coefficients }).unwrap();
        for (j, z) in f.iter().enumerate() {
            let expect = (2.0 * PI * j as f64 / n as f64).cos();
            assert!((z - c(expect, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn round_trip_n100() {
        let v: Vec<Complex64> = (0..100)
            .map(|j| c((j as f64 * 0.731).sin() + 0.2, (j as f64 * 1.37).cos()))
            .collect();
        let back = idft(&dft(&v).unwrap()).unwrap();
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn pure_tone_envelope() {
        let n = 128;
        let v: Vec<f64> = (0..n)
            .map(|j| 2.0 * (4.0 * 2.0 * PI * j as f64 / n as f64 - 0.7).cos())
            .collect();
        let e = hilbert_envelope(&v).unwrap();
        assert!(e.iter().all(|x| (x - 2.0).abs() < 1e-10));
    }

    #[test]
    fn zero_field_envelope() {
        let e = hilbert_envelope(&[0.0; 12]).unwrap();
        assert!(e.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn odd_length_envelope_rejected() {
        assert!(matches!(hilbert_envelope(&[1.0; 9]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn combination_wave_envelope_tracks_beat() {
        // 2 cos(7x) cos(x) on [-3pi, 3pi); analytic envelope |2 cos x|.
        let n = 120;
        let dx = 6.0 * PI / n as f64;
        let x: Vec<f64> = (0..n).map(|j| -3.0 * PI + dx * j as f64).collect();
        let u: Vec<f64> = x.iter().map(|&x| 2.0 * (7.0 * x).cos() * x.cos()).collect();
        let e = hilbert_envelope(&u).unwrap();
        for (xi, ei) in x.iter().zip(&e) {
            // distance to the nearest zero of cos(x)
            let d = ((xi - PI / 2.0).rem_euclid(PI) - PI / 2.0).abs();
            let d = PI / 2.0 - d;
            if d >= 0.2 {
                let exact = (2.0 * xi.cos()).abs();
                assert!((ei - exact).abs() <= 0.02 * exact, "x={xi} env={ei} exact={exact}");
            }
        }
    }

    #[test]
    fn mode_coefficient_matches_full_transform() {
        let v: Vec<f64> = (0..37).map(|j| ((j * j) as f64 * 0.1).sin()).collect();
        let s = dft_real(&v).unwrap();
        for m in [0, 1, 5, 18, 36] {
            assert!((mode_coefficient(&v, m).unwrap() - s.coefficient(m)).norm() < 1e-15);
        }
    }
}
