//! Numerical group velocity from modified wavenumbers.
//!
//! With `D = d kappa'/d kappa`, `z = sigma * kappa'` and `theta = omega dt`,
//! the ratio `v_g / c` is `Re(P(z) * exp(i theta) * D)` where `P` is the
//! derivative (with respect to `-i z`) of the integrator's stability
//! polynomial:
//!
//! | integrator | `P(z)`                              |
//! |------------|-------------------------------------|
//! | Euler      | `1`                                 |
//! | RK3        | `1 - i z - z^2/2`                   |
//! | RK4        | `1 - i z - z^2/2 + i z^3/6`         |
//!
//! None of the formulas has a denominator, so they are finite everywhere.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adr::{
    adr_modified_wavenumber, adr_nt_modified_wavenumber, analytic_table, AdrConfig, KprimeSource,
    ModifiedWavenumberTable, ProbeConfig,
};
use crate::io::fmt17;
use crate::schemes::{LinearStencil, SchemeSpec};
use crate::timeint::{TimeKind, TimeSpec};
use crate::{Error, Result};

pub const GVP_LOW: f64 = 0.95;
pub const GVP_HIGH: f64 = 1.05;

/// Upper corner of the default near-origin window, in both `kappa` and `omega dt`.
pub const NEAR_ORIGIN: f64 = PI / 4.0;

pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupVelocityPoint {
    pub kappa: f64,
    pub omega_dt: f64,
    pub kprime: Complex64,
    pub dkprime_dkappa: Complex64,
    pub sigma: f64,
}

fn rotated(pt: &GroupVelocityPoint, p: Complex64) -> f64 {
    (p * Complex64::from_polar(1.0, pt.omega_dt) * pt.dkprime_dkappa).re
}

pub fn group_velocity_euler(pt: &GroupVelocityPoint) -> f64 {
    rotated(pt, Complex64::new(1.0, 0.0))
}

pub fn group_velocity_rk3(pt: &GroupVelocityPoint) -> f64 {
    let z = pt.sigma * pt.kprime;
    let i = Complex64::i();
    rotated(pt, 1.0 - i * z - z * z / 2.0)
}

pub fn group_velocity_rk4(pt: &GroupVelocityPoint) -> f64 {
    let z = pt.sigma * pt.kprime;
    let i = Complex64::i();
    rotated(pt, 1.0 - i * z - z * z / 2.0 + i * z * z * z / 6.0)
}

pub fn group_velocity(kind: TimeKind, pt: &GroupVelocityPoint) -> f64 {
    match kind {
        TimeKind::Euler => group_velocity_euler(pt),
        TimeKind::Rk3 => group_velocity_rk3(pt),
        TimeKind::Rk4 => group_velocity_rk4(pt),
    }
}

/// `d kappa'/d kappa` on the table's modes: central differences inside,
/// second-order one-sided at the ends. Entries next to a missing value are
/// `None`.
pub fn dkappa_dk_numeric(table: &ModifiedWavenumberTable) -> Result<Vec<Option<Complex64>>> {
    let n = table.len();
    if n < 3 {
        return Err(Error::invalid(format!(
            "numeric derivative needs at least 3 table points, got {n}"
        )));
    }
    if table.modes.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::invalid("numeric derivative needs consecutive modes"));
    }
    let h = table.kappa_step();
    let f = &table.kprime;
    let combine = |terms: &[(usize, f64)], denom: f64| -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(i, w) in terms {
            acc += f[i]? * w;
        }
        Some(acc / denom)
    };
    Ok((0..n)
        .map(|i| match i {
            0 => combine(&[(0, -3.0), (1, 4.0), (2, -1.0)], 2.0 * h),
            i if i == n - 1 => combine(&[(i, 3.0), (i - 1, -4.0), (i - 2, 1.0)], 2.0 * h),
            i => combine(&[(i + 1, 1.0), (i - 1, -1.0)], 2.0 * h),
        })
        .collect())
}

/// How `d kappa'/d kappa` is obtained for a [`SpectralCurve`].
#[derive(Debug, Clone)]
pub enum DerivativeRule {
    /// Central differences of the tabulated values.
    Numeric,
    /// Closed form of a linear stencil (cross-validation only).
    Analytic(LinearStencil),
}

/// `kappa'` and its derivative, linearly interpolated between table nodes.
#[derive(Debug, Clone)]
pub struct SpectralCurve {
    kappas: Vec<f64>,
    kprime: Vec<Complex64>,
    dkprime: Vec<Complex64>,
    pub source: KprimeSource,
}

impl SpectralCurve {
    pub fn from_table(table: &ModifiedWavenumberTable, rule: DerivativeRule) -> Result<Self> {
        let derivative: Vec<Option<Complex64>> = match &rule {
            DerivativeRule::Numeric => dkappa_dk_numeric(table)?,
            DerivativeRule::Analytic(s) => table
                .kappas
                .iter()
                .map(|&k| Some(s.modified_wavenumber_derivative(k)))
                .collect(),
        };
        let mut curve = Self {
            kappas: vec![],
            kprime: vec![],
            dkprime: vec![],
            source: table.source,
        };
        for ((k, v), d) in table.kappas.iter().zip(&table.kprime).zip(derivative) {
            if let (Some(v), Some(d)) = (v, d) {
                curve.kappas.push(*k);
                curve.kprime.push(*v);
                curve.dkprime.push(d);
            }
        }
        if curve.kappas.len() < 2 {
            return Err(Error::invalid("table has fewer than 2 usable points"));
        }
        Ok(curve)
    }

    pub fn kappa_range(&self) -> (f64, f64) {
        (self.kappas[0], *self.kappas.last().unwrap())
    }

    /// `(kappa', d kappa'/d kappa)` at `kappa`.
    pub fn eval(&self, kappa: f64) -> Result<(Complex64, Complex64)> {
        let (lo, hi) = self.kappa_range();
        let slack = 1e-12 * hi.abs().max(1.0);
        if !(kappa >= lo - slack && kappa <= hi + slack) {
            return Err(Error::invalid(format!(
                "kappa = {kappa} outside the table range [{lo}, {hi}]"
            )));
        }
        let i = match self.kappas.partition_point(|&k| k <= kappa) {
            0 => 0,
            i => (i - 1).min(self.kappas.len() - 2),
        };
        let t = ((kappa - self.kappas[i]) / (self.kappas[i + 1] - self.kappas[i])).clamp(0.0, 1.0);
        let lerp = |v: &[Complex64]| v[i] * (1.0 - t) + v[i + 1] * t;
        Ok((lerp(&self.kprime), lerp(&self.dkprime)))
    }

    pub fn point(&self, kappa: f64, omega_dt: f64, sigma: f64) -> Result<GroupVelocityPoint> {
        let (kprime, dkprime_dkappa) = self.eval(kappa)?;
        Ok(GroupVelocityPoint {
            kappa,
            omega_dt,
            kprime,
            dkprime_dkappa,
            sigma,
        })
    }
}

/// Settings for producing the `kappa'` table behind a map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KprimeRequest {
    pub source: KprimeSource,
    pub probe: ProbeConfig,
    /// ADR integrator and step; ignored by the other sources.
    pub adr_time: TimeSpec,
    pub tau: f64,
}

impl KprimeRequest {
    pub fn new(source: KprimeSource) -> Self {
        Self {
            source,
            probe: ProbeConfig::default(),
            adr_time: TimeSpec {
                kind: TimeKind::Euler,
                dt: crate::adr::DEFAULT_TAU,
            },
            tau: crate::adr::DEFAULT_TAU,
        }
    }

    pub fn table(&self, scheme: &SchemeSpec) -> Result<ModifiedWavenumberTable> {
        match self.source {
            KprimeSource::Analytic => {
                let stencil = scheme.stencil().ok_or_else(|| {
                    Error::invalid(format!(
                        "analytic kappa' is only defined for linear schemes, not {scheme}"
                    ))
                })?;
                let mut t = analytic_table(&stencil, self.probe.nx)?;
                t.meta.scheme = scheme.name().into();
                Ok(t)
            }
            KprimeSource::Adr => adr_modified_wavenumber(
                scheme,
                self.adr_time,
                &AdrConfig {
                    probe: self.probe,
                    tau: self.tau,
                },
            ),
            KprimeSource::AdrNt => adr_nt_modified_wavenumber(scheme, &self.probe),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Low,
    Gvp,
    High,
}

pub fn band(v: f64) -> Band {
    if v < GVP_LOW {
        Band::Low
    } else if v <= GVP_HIGH {
        Band::Gvp
    } else {
        Band::High
    }
}

/// Rectangle `[kappa_lo, kappa_hi] x [omega_lo, omega_hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub kappa: (f64, f64),
    pub omega_dt: (f64, f64),
}

impl Window {
    pub fn near_origin() -> Self {
        Self {
            kappa: (0.0, NEAR_ORIGIN),
            omega_dt: (0.0, NEAR_ORIGIN),
        }
    }

    fn contains(&self, kappa: f64, omega_dt: f64) -> bool {
        (self.kappa.0..=self.kappa.1).contains(&kappa)
            && (self.omega_dt.0..=self.omega_dt.1).contains(&omega_dt)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GvpMapMeta {
    pub scheme: String,
    pub time: TimeKind,
    pub sigma: f64,
    pub source: KprimeSource,
    pub table_nx: usize,
}

/// `v_g / c` over a `kappa x omega dt` grid, stored row-major by `omega dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct GvpMap {
    pub kappa_axis: Vec<f64>,
    pub omega_dt_axis: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: GvpMapMeta,
}

impl GvpMap {
    pub fn value(&self, i_omega: usize, i_kappa: usize) -> f64 {
        self.values[i_omega * self.kappa_axis.len() + i_kappa]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.kappa_axis.len())
    }

    /// Axis row of `kappa` values, then one row per `omega dt` led by its value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let head: Vec<String> = self.kappa_axis.iter().map(|&k| fmt17(k)).collect();
        writeln!(w, "omega_dt\\kappa,{}", head.join(","))?;
        for (om, row) in self.omega_dt_axis.iter().zip(self.rows()) {
            let cells: Vec<String> = row.iter().map(|&v| fmt17(v)).collect();
            writeln!(w, "{},{}", fmt17(*om), cells.join(","))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `pi * i / resolution` for `i = 1..=resolution`.
pub fn default_axis(resolution: usize) -> Vec<f64> {
    (1..=resolution).map(|i| PI * i as f64 / resolution as f64).collect()
}

/// Evaluates the group-velocity formula of `time` at every grid point.
/// `omega dt` is an independent axis; `sigma` enters only through `z`.
pub fn gvp_map(
    curve: &SpectralCurve,
    time: TimeKind,
    sigma: f64,
    kappa_axis: &[f64],
    omega_dt_axis: &[f64],
    meta: GvpMapMeta,
) -> Result<GvpMap> {
    if kappa_axis.is_empty() || omega_dt_axis.is_empty() {
        return Err(Error::invalid("map axes must be nonempty"));
    }
    let columns: Vec<(Complex64, Complex64)> = kappa_axis
        .iter()
        .map(|&k| curve.eval(k))
        .collect::<Result<_>>()?;
    let values: Vec<f64> = omega_dt_axis
        .par_iter()
        .flat_map_iter(|&om| {
            columns.iter().zip(kappa_axis).map(move |(&(kp, dk), &kappa)| {
                group_velocity(
                    time,
                    &GroupVelocityPoint {
                        kappa,
                        omega_dt: om,
                        kprime: kp,
                        dkprime_dkappa: dk,
                        sigma,
                    },
                )
            })
        })
        .collect();
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("non-finite group velocity {bad} in map")));
    }
    Ok(GvpMap {
        kappa_axis: kappa_axis.to_vec(),
        omega_dt_axis: omega_dt_axis.to_vec(),
        values,
        meta,
    })
}

/// Fraction of grid cells in the GVP band, optionally inside a window.
pub fn gvp_area(map: &GvpMap, window: Option<Window>) -> f64 {
    let mut total = 0usize;
    let mut inside = 0usize;
    for (i, &om) in map.omega_dt_axis.iter().enumerate() {
        for (j, &k) in map.kappa_axis.iter().enumerate() {
            if window.is_some_and(|w| !w.contains(k, om)) {
                continue;
            }
            total += 1;
            if band(map.value(i, j)) == Band::Gvp {
                inside += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        inside as f64 / total as f64
    }
}
