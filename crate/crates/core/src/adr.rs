//! Modified wavenumbers of arbitrary (including nonlinear) schemes.
//!
//! Two extraction routes are provided, both probing one Fourier mode at a
//! time on a periodic grid with `dx = 2*pi/N` and unit advection speed:
//!
//! - [`adr_modified_wavenumber`] evolves `v_j(0) = A exp(i(j kappa_n + phi))`
//!   under `v' = -D v` for a short time `tau` and reads
//!   `kappa' = (i dx / tau) ln(v_hat(tau) / v_hat(0))`.
//! - [`adr_nt_modified_wavenumber`] freezes the nonlinear coefficients on the
//!   initial data and reads `kappa' = -i * DFT(D v(0)) / v_hat(0)`, which is
//!   free of time-discretization error.
//!
//! Complex probes are split into real and imaginary parts, each evolved with
//! its own nonlinear weights, and recombined before the transform.

use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dft::Twiddles;
use crate::grid::reduced_wavenumber;
use crate::io::fmt17;
use crate::schemes::{frozen_coefficients, LinearStencil, SchemeSpec};
use crate::timeint::{step, TimeKind, TimeSpec};
use crate::{Error, Result};

/// Relative magnitude below which a probed mode counts as annihilated.
pub const ANNIHILATION_TOL: f64 = 1e-14;

/// Prime-doubled default grid, `2 * 211`.
pub const DEFAULT_NX: usize = 422;

pub const DEFAULT_TAU: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KprimeSource {
    Analytic,
    Adr,
    AdrNt,
}

impl fmt::Display for KprimeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KprimeSource::Analytic => "analytic",
            KprimeSource::Adr => "adr",
            KprimeSource::AdrNt => "adr-nt",
        })
    }
}

impl FromStr for KprimeSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "analytic" => Ok(KprimeSource::Analytic),
            "adr" => Ok(KprimeSource::Adr),
            "adr-nt" | "adrnt" | "adr_nt" => Ok(KprimeSource::AdrNt),
            other => Err(Error::invalid(format!(
                "unknown kprime method '{other}' (expected analytic, adr or adr-nt)"
            ))),
        }
    }
}

/// Shape of the initial probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Probe {
    /// `A exp(i(j kappa + phi))`, evolved as two real fields.
    Complex,
    /// `A cos(j kappa + phi)`, a single real field picked up at mode `n`.
    Cosine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub nx: usize,
    pub scheme: String,
    pub tau: Option<f64>,
    pub dt: Option<f64>,
    pub time: Option<TimeKind>,
    pub phases: usize,
    pub seed: u64,
}

/// `kappa'` sampled on consecutive DFT modes. Entries are `None` where the
/// probed mode was annihilated.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedWavenumberTable {
    pub modes: Vec<usize>,
    pub kappas: Vec<f64>,
    pub kprime: Vec<Option<Complex64>>,
    pub source: KprimeSource,
    pub meta: TableMeta,
}

impl ModifiedWavenumberTable {
    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }

    pub fn nx(&self) -> usize {
        self.meta.nx
    }

    /// Mode spacing `2*pi/N`.
    pub fn kappa_step(&self) -> f64 {
        2.0 * PI / self.meta.nx as f64
    }

    pub fn at_mode(&self, mode: usize) -> Option<Complex64> {
        self.modes
            .iter()
            .position(|&m| m == mode)
            .and_then(|i| self.kprime[i])
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "kappa,re_kprime,im_kprime")?;
        for (k, v) in self.kappas.iter().zip(&self.kprime) {
            let (re, im) = v.map_or((f64::NAN, f64::NAN), |z| (z.re, z.im));
            writeln!(w, "{},{},{}", fmt17(*k), fmt17(re), fmt17(im))?;
        }
        Ok(())
    }

    /// Reads the `kappa,re_kprime,im_kprime` layout; mode indices are recovered
    /// from `kappa` and the given grid size.
    pub fn read_csv<R: BufRead>(r: R, source: KprimeSource, meta: TableMeta) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))??;
        if header.trim() != "kappa,re_kprime,im_kprime" {
            return Err(Error::Parse(format!("unexpected header '{header}'")));
        }
        let step = 2.0 * PI / meta.nx as f64;
        let mut table = Self {
            modes: vec![],
            kappas: vec![],
            kprime: vec![],
            source,
            meta,
        };
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{c}': {e}"))))
                .collect::<Result<_>>()?;
            if cols.len() != 3 {
                return Err(Error::Parse(format!("expected 3 columns in '{line}'")));
            }
            table.modes.push((cols[0] / step).round() as usize);
            table.kappas.push(cols[0]);
            table.kprime.push(if cols[1].is_nan() || cols[2].is_nan() {
                None
            } else {
                Some(Complex64::new(cols[1], cols[2]))
            });
        }
        Ok(table)
    }
}

/// Probe settings shared by both extraction routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub nx: usize,
    /// Number of initial phases averaged; the first run always has phase 0.
    pub phase_average_count: usize,
    pub amplitude: f64,
    pub probe: Probe,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            nx: DEFAULT_NX,
            phase_average_count: 1,
            amplitude: 1.0,
            probe: Probe::Complex,
            seed: 0,
        }
    }
}

impl ProbeConfig {
    pub fn with_nx(nx: usize) -> Self {
        Self {
            nx,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nx < 8 {
            return Err(Error::invalid(format!("probe grid needs N_x >= 8, got {}", self.nx)));
        }
        if self.phase_average_count == 0 {
            return Err(Error::invalid("phase_average_count must be at least 1"));
        }
        if !(self.amplitude > 0.0) {
            return Err(Error::invalid(format!(
                "probe amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        Ok(())
    }

    /// Initial phases: 0 followed by seeded uniform draws on `[0, 2*pi)`.
    pub fn phases(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        std::iter::once(0.0)
            .chain((1..self.phase_average_count).map(|_| rng.gen_range(0.0..2.0 * PI)))
            .collect()
    }

    fn all_modes(&self) -> Vec<usize> {
        (0..=self.nx / 2).collect()
    }

    fn meta(&self, scheme: &SchemeSpec) -> TableMeta {
        TableMeta {
            nx: self.nx,
            scheme: scheme.name().to_string(),
            tau: None,
            dt: None,
            time: None,
            phases: self.phase_average_count,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdrConfig {
    pub probe: ProbeConfig,
    /// Total evolution time; must be a whole number of time steps.
    pub tau: f64,
}

impl AdrConfig {
    pub fn new(nx: usize, tau: f64) -> Self {
        Self {
            probe: ProbeConfig::with_nx(nx),
            tau,
        }
    }

    fn steps(&self, dt: f64) -> Result<usize> {
        if !(dt > 0.0 && dt <= self.tau * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!(
                "need 0 < dt <= tau, got dt = {dt}, tau = {}",
                self.tau
            )));
        }
        let steps = (self.tau / dt).round();
        if ((steps * dt - self.tau) / self.tau).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "tau = {} is not a whole number of steps dt = {dt}",
                self.tau
            )));
        }
        Ok(steps as usize)
    }
}

/// Table of the analytic `kappa'` of a linear stencil on modes `0..=N/2`.
pub fn analytic_table(stencil: &LinearStencil, nx: usize) -> Result<ModifiedWavenumberTable> {
    if nx < 8 {
        return Err(Error::invalid(format!("table grid needs N_x >= 8, got {nx}")));
    }
    let modes: Vec<usize> = (0..=nx / 2).collect();
    let kappas: Vec<f64> = modes.iter().map(|&m| reduced_wavenumber(m, nx)).collect();
    let kprime = kappas.iter().map(|&k| Some(stencil.modified_wavenumber(k))).collect();
    Ok(ModifiedWavenumberTable {
        modes,
        kappas,
        kprime,
        source: KprimeSource::Analytic,
        meta: TableMeta {
            nx,
            scheme: "linear".into(),
            tau: None,
            dt: None,
            time: None,
            phases: 1,
            seed: 0,
        },
    })
}

struct ProbeField {
    re: Vec<f64>,
    im: Option<Vec<f64>>,
}

impl ProbeField {
    fn new(cfg: &ProbeConfig, mode: usize, phase: f64) -> Self {
        let n = cfg.nx;
        let theta = |j: usize| 2.0 * PI * ((j * mode) % n) as f64 / n as f64 + phase;
        let re = (0..n).map(|j| cfg.amplitude * theta(j).cos()).collect();
        let im = match cfg.probe {
            Probe::Complex => Some((0..n).map(|j| cfg.amplitude * theta(j).sin()).collect()),
            Probe::Cosine => None,
        };
        Self { re, im }
    }

    fn coefficient(&self, tw: &Twiddles, mode: usize) -> Complex64 {
        let re = tw.coefficient_real(&self.re, mode);
        match &self.im {
            Some(im) => re + Complex64::i() * tw.coefficient_real(im, mode),
            None => re,
        }
    }
}

fn check_initial(v0: Complex64, cfg: &ProbeConfig, mode: usize) -> Result<()> {
    if v0.norm() <= 1e-12 * cfg.amplitude {
        return Err(Error::invalid(format!(
            "probed mode {mode} is absent from the initial field"
        )));
    }
    Ok(())
}

/// `kappa'` at one mode and phase by time evolution.
pub fn adr_mode(
    scheme: &SchemeSpec,
    time: TimeSpec,
    cfg: &AdrConfig,
    mode: usize,
    phase: f64,
) -> Result<Option<Complex64>> {
    let p = &cfg.probe;
    p.validate()?;
    let n = p.nx;
    let dx = 2.0 * PI / n as f64;
    let steps = cfg.steps(time.dt)?;
    let kappa = reduced_wavenumber(mode, n);
    let rotation = cfg.tau * kappa / dx;
    if rotation.abs() >= PI {
        return Err(Error::BranchViolation { kappa, rotation });
    }

    let tw = Twiddles::new(n);
    let probe = ProbeField::new(p, mode, phase);
    let v0 = probe.coefficient(&tw, mode);
    check_initial(v0, p, mode)?;

    // Each real component advects independently with its own weights.
    let rhs = |u: &[f64]| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(u.len());
        for part in u.chunks(n) {
            out.extend(scheme.derivative(part, dx)?.into_iter().map(|d| -d));
        }
        Ok(out)
    };
    let mut state = probe.re.clone();
    if let Some(im) = &probe.im {
        state.extend_from_slice(im);
    }
    for _ in 0..steps {
        state = step(&state, &rhs, time)?;
    }
    let evolved = ProbeField {
        re: state[..n].to_vec(),
        im: probe.im.as_ref().map(|_| state[n..].to_vec()),
    };
    let ratio = evolved.coefficient(&tw, mode) / v0;
    if ratio.norm() < ANNIHILATION_TOL {
        return Ok(None);
    }
    Ok(Some(Complex64::i() * dx / cfg.tau * ratio.ln()))
}

/// `kappa'` at one mode and phase from coefficients frozen at `t = 0`.
pub fn adr_nt_mode(scheme: &SchemeSpec, cfg: &ProbeConfig, mode: usize, phase: f64) -> Result<Complex64> {
    cfg.validate()?;
    let probe = ProbeField::new(cfg, mode, phase);
    adr_nt_from_field(scheme, &probe.re, probe.im.as_deref(), mode)
}

/// `kappa'` at `mode` for arbitrary initial data split into real and
/// imaginary parts (`im = None` for real data).
pub fn adr_nt_from_field(
    scheme: &SchemeSpec,
    re: &[f64],
    im: Option<&[f64]>,
    mode: usize,
) -> Result<Complex64> {
    let n = re.len();
    if let Some(im) = im {
        if im.len() != n {
            return Err(Error::invalid("real and imaginary parts differ in length"));
        }
    }
    let tw = Twiddles::new(n);
    let frozen = |part: &[f64]| -> Result<Vec<f64>> { frozen_coefficients(scheme, part)?.apply(part, 1.0) };
    let field = ProbeField {
        re: re.to_vec(),
        im: im.map(<[f64]>::to_vec),
    };
    let v0 = field.coefficient(&tw, mode);
    let scale = re
        .iter()
        .chain(im.unwrap_or(&[]))
        .fold(0.0f64, |a, x| a.max(x.abs()));
    if v0.norm() <= 1e-12 * scale || scale == 0.0 {
        return Err(Error::invalid(format!(
            "probed mode {mode} is absent from the initial field"
        )));
    }
    let applied = ProbeField {
        re: frozen(re)?,
        im: im.map(frozen).transpose()?,
    };
    Ok(-Complex64::i() * applied.coefficient(&tw, mode) / v0)
}

fn average(values: &[Option<Complex64>]) -> Option<Complex64> {
    let present: Vec<Complex64> = values.iter().flatten().copied().collect();
    if present.is_empty() {
        None
    } else {
        Some(present.iter().sum::<Complex64>() / present.len() as f64)
    }
}

/// Averages tables sampled at the same modes (one per initial phase).
pub fn dealias_table(tables: &[ModifiedWavenumberTable]) -> Result<ModifiedWavenumberTable> {
    let first = tables
        .first()
        .ok_or_else(|| Error::invalid("no tables to average"))?;
    if tables.iter().any(|t| t.modes != first.modes) {
        return Err(Error::invalid("tables sample different modes"));
    }
    let kprime = (0..first.len())
        .map(|i| average(&tables.iter().map(|t| t.kprime[i]).collect::<Vec<_>>()))
        .collect();
    let mut out = first.clone();
    out.kprime = kprime;
    out.meta.phases = tables.len();
    Ok(out)
}

fn check_modes(modes: &[usize], nx: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::invalid("no modes requested"));
    }
    if modes.windows(2).any(|w| w[1] <= w[0]) || *modes.last().unwrap() > nx / 2 {
        return Err(Error::invalid(format!(
            "modes must be strictly increasing within 0..={}",
            nx / 2
        )));
    }
    Ok(())
}

/// ADR table over the given modes, phase-averaged per `cfg`.
pub fn adr_table_modes(
    scheme: &SchemeSpec,
    time: TimeSpec,
    cfg: &AdrConfig,
    modes: &[usize],
) -> Result<ModifiedWavenumberTable> {
    cfg.probe.validate()?;
    check_modes(modes, cfg.probe.nx)?;
    cfg.steps(time.dt)?;
    let per_phase = cfg
        .probe
        .phases()
        .iter()
        .map(|&phase| {
            let kprime = modes
                .par_iter()
                .map(|&m| adr_mode(scheme, time, cfg, m, phase))
                .collect::<Result<Vec<_>>>()?;
            let mut meta = cfg.probe.meta(scheme);
            meta.tau = Some(cfg.tau);
            meta.dt = Some(time.dt);
            meta.time = Some(time.kind);
            Ok(ModifiedWavenumberTable {
                modes: modes.to_vec(),
                kappas: modes.iter().map(|&m| reduced_wavenumber(m, cfg.probe.nx)).collect(),
                kprime,
                source: KprimeSource::Adr,
                meta,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    dealias_table(&per_phase)
}

/// ADR table over all modes `0..=N/2`.
pub fn adr_modified_wavenumber(
    scheme: &SchemeSpec,
    time: TimeSpec,
    cfg: &AdrConfig,
) -> Result<ModifiedWavenumberTable> {
    adr_table_modes(scheme, time, cfg, &cfg.probe.all_modes())
}

/// ADR-NT table over the given modes.
pub fn adr_nt_table_modes(
    scheme: &SchemeSpec,
    cfg: &ProbeConfig,
    modes: &[usize],
) -> Result<ModifiedWavenumberTable> {
    cfg.validate()?;
    check_modes(modes, cfg.nx)?;
    let per_phase = cfg
        .phases()
        .iter()
        .map(|&phase| {
            let kprime = modes
                .par_iter()
                .map(|&m| adr_nt_mode(scheme, cfg, m, phase).map(Some))
                .collect::<Result<Vec<_>>>()?;
            Ok(ModifiedWavenumberTable {
                modes: modes.to_vec(),
                kappas: modes.iter().map(|&m| reduced_wavenumber(m, cfg.nx)).collect(),
                kprime,
                source: KprimeSource::AdrNt,
                meta: cfg.meta(scheme),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    dealias_table(&per_phase)
}

/// ADR-NT table over all modes `0..=N/2`.
pub fn adr_nt_modified_wavenumber(
    scheme: &SchemeSpec,
    cfg: &ProbeConfig,
) -> Result<ModifiedWavenumberTable> {
    adr_nt_table_modes(scheme, cfg, &cfg.all_modes())
}

/// Largest `|second difference|` over the median `|second difference|` of
/// the real and imaginary parts, restricted to `kappa >= kappa_from`. Isolated
/// jump points show up as ratios far above the smooth-trend level.
pub fn max_jump_ratio(table: &ModifiedWavenumberTable, kappa_from: f64) -> f64 {
    let pts: Vec<Complex64> = table
        .kappas
        .iter()
        .zip(&table.kprime)
        .filter(|(k, _)| **k >= kappa_from)
        .filter_map(|(_, v)| *v)
        .collect();
    if pts.len() < 5 {
        return 0.0;
    }
    let ratio = |part: &dyn Fn(Complex64) -> f64| {
        let mut d2: Vec<f64> = pts
            .windows(3)
            .map(|w| (part(w[2]) - 2.0 * part(w[1]) + part(w[0])).abs())
            .collect();
        let max = d2.iter().cloned().fold(0.0, f64::max);
        d2.sort_by(|a, b| a.total_cmp(b));
        let median = d2[d2.len() / 2];
        if median > 0.0 {
            max / median
        } else {
            0.0
        }
    };
    ratio(&|z: Complex64| z.re).max(ratio(&|z: Complex64| z.im))
}
