use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::adr::{adr_table_modes, AdrConfig};
use crate::dft::{dft_real, hilbert_envelope, mode_coefficient};
use crate::grid::{reduced_wavenumber, Grid};
use crate::schemes::SchemeSpec;
use crate::timeint::{TimeKind, TimeSpec};
use crate::{Error, Result};

use super::{solve_advection, AdvectionProblem};

fn undefined(msg: impl Into<String>) -> Error {
    Error::MeasurementUndefined(msg.into())
}

/// Signed offset of `v` from the origin on a ring of length `n`, in `[-n/2, n/2)`.
fn wrap_offset(v: f64, n: f64) -> f64 {
    (v + n / 2.0).rem_euclid(n) - n / 2.0
}

/// Vertex offset of the parabola through three samples, in `[-1/2, 1/2]`.
fn quadratic_vertex(ym: f64, y0: f64, yp: f64) -> f64 {
    let curv = ym - 2.0 * y0 + yp;
    if curv < 0.0 {
        (0.5 * (ym - yp) / curv).clamp(-0.5, 0.5)
    } else {
        0.0
    }
}

/// Local maximum of a periodic sequence nearest `guess` (in index units),
/// refined to sub-grid precision and unwrapped to lie within `n/2` of `guess`.
fn peak_near(values: &[f64], guess: f64) -> f64 {
    let n = values.len();
    let at = |i: isize| values[i.rem_euclid(n as isize) as usize];
    let nf = n as f64;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..n as isize {
        let (ym, y0, yp) = (at(i - 1), at(i), at(i + 1));
        if y0 >= ym && y0 >= yp {
            let pos = i as f64 + quadratic_vertex(ym, y0, yp);
            let dist = wrap_offset(pos - guess, nf);
            if best.is_none_or(|(d, _)| dist.abs() < d.abs()) {
                best = Some((dist, pos));
            }
        }
    }
    // A periodic sequence always has a maximum, so `best` is set.
    guess + best.map_or(0.0, |(d, _)| d)
}

/// `cc[s] = sum_j a[j] b[j + s]` with periodic indexing.
fn circular_xcorr(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    (0..n)
        .map(|s| (0..n).map(|j| a[j] * b[(j + s) % n]).sum())
        .collect()
}

fn find_time(snapshots: &[(f64, &[f64])], t: f64) -> Result<usize> {
    snapshots
        .iter()
        .position(|(s, _)| (s - t).abs() <= 1e-9 * t.abs().max(1.0))
        .ok_or_else(|| Error::invalid(format!("no stored snapshot at t = {t}")))
}

fn interval<'a>(
    snapshots: &'a [(f64, &'a [f64])],
    t_a: f64,
    t_b: f64,
) -> Result<&'a [(f64, &'a [f64])]> {
    if !(t_a < t_b) {
        return Err(Error::invalid(format!("need t_a < t_b, got {t_a} and {t_b}")));
    }
    let (ia, ib) = (find_time(snapshots, t_a)?, find_time(snapshots, t_b)?);
    if ib <= ia {
        return Err(Error::invalid("snapshots must be stored in time order"));
    }
    let n = snapshots[ia].1.len();
    if snapshots[ia..=ib].iter().any(|(_, u)| u.len() != n) {
        return Err(Error::invalid("snapshots differ in length"));
    }
    Ok(&snapshots[ia..=ib])
}

/// Envelope speed from the Hilbert envelope.
///
/// Every stored snapshot in `[t_a, t_b]` is cross-correlated against the
/// `t_a` envelope, and the correlation peak nearest the previous shift is
/// followed. This unwraps shifts longer than the envelope period, provided
/// snapshots are dense enough that the envelope moves less than half a
/// period between them.
pub fn measure_group_velocity_envelope(
    dx: f64,
    snapshots: &[(f64, &[f64])],
    t_a: f64,
    t_b: f64,
) -> Result<f64> {
    let span = interval(snapshots, t_a, t_b)?;
    let e0 = hilbert_envelope(span[0].1)?;
    let (lo, hi) = e0
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !(hi > 0.0) || (hi - lo) <= 1e-8 * hi {
        return Err(undefined(format!(
            "envelope at t = {t_a} is flat (min {lo:.3e}, max {hi:.3e})"
        )));
    }
    let mut shift = 0.0;
    for (_, u) in &span[1..] {
        let e = hilbert_envelope(u)?;
        shift = peak_near(&circular_xcorr(&e0, &e), shift);
    }
    Ok(shift * dx / (t_b - t_a))
}

fn dominant_mode(u: &[f64]) -> Result<(usize, f64)> {
    let spec = dft_real(u)?;
    let mut mags: Vec<(usize, f64)> = (1..=u.len() / 2).map(|m| (m, spec.coefficient(m).norm())).collect();
    mags.sort_by(|a, b| b.1.total_cmp(&a.1));
    let second = mags.get(1).map_or(0.0, |m| m.1);
    Ok((mags[0].0, second / mags[0].1.max(f64::MIN_POSITIVE)))
}

/// Crest speed: the highest crest at `t_a` is followed through all stored
/// snapshots up to `t_b`.
///
/// `mode_hint` names the dominant DFT mode and fixes the crest spacing. Without
/// it the field must have one clearly dominant mode.
pub fn measure_phase_velocity_peak(
    dx: f64,
    snapshots: &[(f64, &[f64])],
    t_a: f64,
    t_b: f64,
    mode_hint: Option<usize>,
) -> Result<f64> {
    let span = interval(snapshots, t_a, t_b)?;
    let u0 = span[0].1;
    let n = u0.len();
    let mode = match mode_hint {
        Some(m) if m >= 1 && m <= n / 2 => m,
        Some(m) => return Err(Error::invalid(format!("mode hint {m} outside 1..={}", n / 2))),
        None => {
            let (m, rel) = dominant_mode(u0)?;
            if rel > 0.5 {
                return Err(undefined(format!(
                    "no dominant mode (runner-up at {:.0}% of mode {m}); pass a mode hint",
                    100.0 * rel
                )));
            }
            m
        }
    };
    let spacing = n as f64 / mode as f64;
    let start = u0
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i as f64)
        .unwrap_or(0.0);
    let mut pos = peak_near(u0, start);
    let first = pos;
    for (t, u) in &span[1..] {
        let next = peak_near(u, pos);
        if (next - pos).abs() > spacing / 4.0 {
            return Err(undefined(format!(
                "crest moved {:.2} points by t = {t}, over a quarter of the crest spacing; store more snapshots",
                next - pos
            )));
        }
        pos = next;
    }
    Ok((pos - first) * dx / (t_b - t_a))
}

/// Angular frequency of DFT mode `mode` from its unwrapped phase history,
/// with the convention `u ~ exp(i(k x - omega t))`.
pub fn modal_frequency(snapshots: &[(f64, &[f64])], mode: usize) -> Result<f64> {
    if snapshots.len() < 2 {
        return Err(Error::invalid("need at least two snapshots"));
    }
    let coeffs: Vec<Complex64> = snapshots
        .iter()
        .map(|(_, u)| mode_coefficient(u, mode))
        .collect::<Result<_>>()?;
    let scale = coeffs[0].norm();
    if coeffs.iter().any(|c| c.norm() <= 1e-12 * scale) || scale == 0.0 {
        return Err(undefined(format!("mode {mode} vanishes in the stored history")));
    }
    let mut total = 0.0;
    for (w, ts) in coeffs.windows(2).zip(snapshots.windows(2)) {
        let step = (w[1] / w[0]).arg();
        if step.abs() > PI / 2.0 {
            return Err(undefined(format!(
                "phase of mode {mode} turned {step:.2} rad between t = {} and {}; store more snapshots",
                ts[0].0, ts[1].0
            )));
        }
        total += step;
    }
    let elapsed = snapshots.last().unwrap().0 - snapshots[0].0;
    Ok(-total / elapsed)
}

/// A monochromatic advection run probed on neighbouring wavenumbers.
///
/// The domain is replicated `replicas` times so that the neighbours of the
/// central wavenumber are close to it while `dx`, `dt` and `c` stay fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModalSetup {
    pub c: f64,
    pub x_lo: f64,
    pub x_hi: f64,
    pub nx: usize,
    pub dt: f64,
    pub t_final: f64,
    /// Wavelengths of the central wave per original domain.
    pub waves: usize,
    pub replicas: usize,
    pub snapshots: usize,
}

impl ModalSetup {
    /// `sin(8 pi x)` on `[-1, 1]` with `c = 1/8`, `dt = 1e-3`, `T = 2`.
    pub fn sin8pi(nx: usize) -> Self {
        Self {
            c: 0.125,
            x_lo: -1.0,
            x_hi: 1.0,
            nx,
            dt: 1e-3,
            t_final: 2.0,
            waves: 8,
            replicas: 5,
            snapshots: super::DEFAULT_SNAPSHOTS,
        }
    }

    fn grid(&self) -> Result<Grid> {
        let m = self.replicas as f64;
        let mid = 0.5 * (self.x_lo + self.x_hi);
        let half = 0.5 * (self.x_hi - self.x_lo) * m;
        Grid::new(mid - half, mid + half, self.nx * self.replicas)
    }

    pub fn kappa(&self) -> f64 {
        reduced_wavenumber(self.waves, self.nx)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModalMeasurement {
    pub modes: (usize, usize),
    pub wavenumbers: (f64, f64),
    pub omegas: (f64, f64),
    pub group_velocity: f64,
    /// Measured over exact group velocity `c`.
    pub ratio: f64,
}

/// Group velocity of a simulation as `d omega / d k` between the two
/// neighbours of the central wavenumber.
pub fn measure_group_velocity_modal(
    scheme: &SchemeSpec,
    time: TimeKind,
    setup: &ModalSetup,
) -> Result<ModalMeasurement> {
    if setup.replicas == 0 || setup.waves == 0 {
        return Err(Error::invalid("waves and replicas must be at least 1"));
    }
    let grid = setup.grid()?;
    let centre = setup.waves * setup.replicas;
    let modes = (centre - 1, centre + 1);
    if modes.1 >= grid.n / 2 {
        return Err(Error::invalid(format!(
            "mode {} is not resolved on {} points",
            modes.1, grid.n
        )));
    }
    let run = |mode: usize| -> Result<(f64, f64)> {
        let k = grid.wavenumber(mode);
        let mut prob = AdvectionProblem::new(setup.c, grid, setup.dt, setup.t_final, |x| (k * x).sin())?;
        prob.snapshots = setup.snapshots;
        let sol = solve_advection(&prob, scheme, time)?;
        Ok((k, modal_frequency(&sol.u_snapshots(), mode)?))
    };
    let (a, b) = rayon::join(|| run(modes.0), || run(modes.1));
    let ((k1, w1), (k2, w2)) = (a?, b?);
    let vg = (w2 - w1) / (k2 - k1);
    Ok(ModalMeasurement {
        modes,
        wavenumbers: (k1, k2),
        omegas: (w1, w2),
        group_velocity: vg,
        ratio: vg / setup.c,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DftMeasurement {
    pub target_kappa: f64,
    pub modes: (usize, usize),
    pub kappas: (f64, f64),
    pub velocity: f64,
}

/// `Re(kappa'_2 - kappa'_1) / (kappa_2 - kappa_1)` from ADR runs on the
/// modes `n0 -/+ offset`, where `n0` is the mode nearest `target_kappa`.
pub fn measure_group_velocity_dft(
    scheme: &SchemeSpec,
    time: TimeSpec,
    cfg: &AdrConfig,
    target_kappa: f64,
    offset: usize,
) -> Result<DftMeasurement> {
    let nx = cfg.probe.nx;
    if offset == 0 {
        return Err(Error::invalid("mode offset must be at least 1"));
    }
    let n0 = (target_kappa * nx as f64 / (2.0 * PI)).round() as usize;
    if n0 < offset || n0 + offset > nx / 2 {
        return Err(Error::invalid(format!(
            "kappa = {target_kappa} -/+ {offset} modes is not representable on N_x = {nx}"
        )));
    }
    let modes = (n0 - offset, n0 + offset);
    let table = adr_table_modes(scheme, time, cfg, &[modes.0, modes.1])?;
    let (k1, k2) = (table.kappas[0], table.kappas[1]);
    match (table.kprime[0], table.kprime[1]) {
        (Some(a), Some(b)) => Ok(DftMeasurement {
            target_kappa,
            modes,
            kappas: (k1, k2),
            velocity: (b.re - a.re) / (k2 - k1),
        }),
        _ => Err(undefined(format!(
            "a probed mode was annihilated at modes {modes:?}"
        ))),
    }
}
