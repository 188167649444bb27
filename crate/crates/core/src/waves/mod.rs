//! Direct simulations of linear advection and of the coupled `(u, p)`
//! system, plus velocity measurements on their output.

mod combination;
mod measure;

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::grid::Grid;
use crate::io::{create, write_columns};
use crate::schemes::SchemeSpec;
use crate::timeint::{advance, stride_for, History, TimeKind, TimeSpec};
use crate::{Error, Result};

pub use combination::CombinationWaveSpec;
pub use measure::{
    measure_group_velocity_dft, measure_group_velocity_envelope, measure_group_velocity_modal,
    measure_phase_velocity_peak, modal_frequency, DftMeasurement, ModalMeasurement, ModalSetup,
};

/// Stored states per run, in addition to `t = 0`.
pub const DEFAULT_SNAPSHOTS: usize = 50;

/// CFL number above which runs still proceed but carry a warning.
pub const CFL_WARN: f64 = 0.5;
pub const CFL_LIMIT: f64 = 1.0;

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

fn steps_for(dt: f64, t_final: f64) -> Result<usize> {
    check_positive("dt", dt)?;
    check_positive("T", t_final)?;
    let steps = (t_final / dt).round();
    if steps < 1.0 || ((steps * dt - t_final) / t_final).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "T = {t_final} is not a whole number of steps dt = {dt}"
        )));
    }
    Ok(steps as usize)
}

fn cfl_warnings(sigma: f64) -> Result<Vec<String>> {
    if sigma > CFL_LIMIT {
        return Err(Error::Stability {
            sigma,
            limit: CFL_LIMIT,
        });
    }
    Ok(if sigma > CFL_WARN {
        vec![format!("CFL number {sigma:.4} exceeds {CFL_WARN}; explicit runs may be unstable")]
    } else {
        vec![]
    })
}

/// `u_t + c u_x = 0` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvectionProblem {
    pub c: f64,
    pub grid: Grid,
    pub dt: f64,
    pub t_final: f64,
    pub u0: Vec<f64>,
    pub snapshots: usize,
}

impl AdvectionProblem {
    pub fn new(c: f64, grid: Grid, dt: f64, t_final: f64, u0: impl Fn(f64) -> f64) -> Result<Self> {
        check_positive("c", c)?;
        steps_for(dt, t_final)?;
        Ok(Self {
            c,
            grid,
            dt,
            t_final,
            u0: grid.sample(u0),
            snapshots: DEFAULT_SNAPSHOTS,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.c * self.dt / self.grid.dx()
    }
}

/// `u_t + u_x = p`, `p_t + a p_x = 0` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledProblem {
    pub a: f64,
    pub grid: Grid,
    pub dt: f64,
    pub t_final: f64,
    pub u0: Vec<f64>,
    pub p0: Vec<f64>,
    pub snapshots: usize,
}

impl CoupledProblem {
    pub fn new(
        a: f64,
        grid: Grid,
        dt: f64,
        t_final: f64,
        u0: impl Fn(f64) -> f64,
        p0: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        check_positive("a", a)?;
        steps_for(dt, t_final)?;
        Ok(Self {
            a,
            grid,
            dt,
            t_final,
            u0: grid.sample(u0),
            p0: grid.sample(p0),
            snapshots: DEFAULT_SNAPSHOTS,
        })
    }

    /// Combination-wave initial data with `a = omega2 / k2`.
    pub fn combination(spec: &CombinationWaveSpec, grid: Grid, dt: f64, t_final: f64) -> Result<Self> {
        Self::new(
            spec.a(),
            grid,
            dt,
            t_final,
            |x| spec.exact_u(x, 0.0),
            |x| spec.exact_p(x, 0.0),
        )
    }

    pub fn sigma(&self) -> f64 {
        self.a.max(1.0) * self.dt / self.grid.dx()
    }
}

/// A finished run. Coupled states are stored as `[u, p]` concatenated.
#[derive(Debug, Clone)]
pub struct Solution {
    pub grid: Grid,
    pub sigma: f64,
    pub coupled: bool,
    pub history: History,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SnapshotFile {
    pub time: f64,
    pub path: PathBuf,
}

impl Solution {
    pub fn times(&self) -> &[f64] {
        &self.history.times
    }

    pub fn u(&self, i: usize) -> &[f64] {
        &self.history.states[i][..self.grid.n]
    }

    pub fn p(&self, i: usize) -> Option<&[f64]> {
        self.coupled.then(|| &self.history.states[i][self.grid.n..])
    }

    /// `(t, u)` pairs in storage order.
    pub fn u_snapshots(&self) -> Vec<(f64, &[f64])> {
        (0..self.history.len()).map(|i| (self.history.times[i], self.u(i))).collect()
    }

    /// One CSV per snapshot, `x,u` or `x,u,p`, named by the time.
    pub fn write_snapshots(&self, dir: &Path) -> Result<Vec<SnapshotFile>> {
        let x = self.grid.points();
        let mut files = Vec::with_capacity(self.history.len());
        for (i, &t) in self.history.times.iter().enumerate() {
            let path = dir.join(format!("snapshot_t{t:.6}.csv"));
            let w = create(&path)?;
            match self.p(i) {
                Some(p) => write_columns(w, &["x", "u", "p"], &[&x, self.u(i), p])?,
                None => write_columns(w, &["x", "u"], &[&x, self.u(i)])?,
            }
            files.push(SnapshotFile { time: t, path });
        }
        Ok(files)
    }
}

pub fn solve_advection(prob: &AdvectionProblem, scheme: &SchemeSpec, time: TimeKind) -> Result<Solution> {
    let n = prob.grid.n;
    if n < scheme.min_points() || prob.u0.len() != n {
        return Err(Error::invalid(format!(
            "grid of {n} points (u0 has {}) is unusable for {scheme}",
            prob.u0.len()
        )));
    }
    let sigma = prob.sigma();
    let warnings = cfl_warnings(sigma)?;
    let steps = steps_for(prob.dt, prob.t_final)?;
    let dx = prob.grid.dx();
    let c = prob.c;
    let rhs = |u: &[f64]| -> Result<Vec<f64>> {
        Ok(scheme.derivative(u, dx)?.into_iter().map(|d| -c * d).collect())
    };
    let history = advance(
        &prob.u0,
        &rhs,
        TimeSpec::new(time, prob.dt)?,
        steps,
        stride_for(steps, prob.snapshots),
    )?;
    Ok(Solution {
        grid: prob.grid,
        sigma,
        coupled: false,
        history,
        warnings,
    })
}

pub fn solve_coupled(prob: &CoupledProblem, scheme: &SchemeSpec, time: TimeKind) -> Result<Solution> {
    let n = prob.grid.n;
    if n < scheme.min_points() || prob.u0.len() != n || prob.p0.len() != n {
        return Err(Error::invalid(format!("grid of {n} points is unusable for {scheme}")));
    }
    let sigma = prob.sigma();
    let warnings = cfl_warnings(sigma)?;
    let steps = steps_for(prob.dt, prob.t_final)?;
    let dx = prob.grid.dx();
    let a = prob.a;
    let rhs = |state: &[f64]| -> Result<Vec<f64>> {
        let (u, p) = state.split_at(n);
        let du = scheme.derivative(u, dx)?;
        let dp = scheme.derivative(p, dx)?;
        let mut out = Vec::with_capacity(2 * n);
        out.extend(du.iter().zip(p).map(|(d, p)| -d + p));
        out.extend(dp.iter().map(|d| -a * d));
        Ok(out)
    };
    let mut state = prob.u0.clone();
    state.extend_from_slice(&prob.p0);
    let history = advance(
        &state,
        &rhs,
        TimeSpec::new(time, prob.dt)?,
        steps,
        stride_for(steps, prob.snapshots),
    )?;
    Ok(Solution {
        grid: prob.grid,
        sigma,
        coupled: true,
        history,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sec51(n: usize) -> AdvectionProblem {
        AdvectionProblem::new(0.125, Grid::new(-1.0, 1.0, n).unwrap(), 1e-3, 2.0, |x| {
            (8.0 * PI * x).sin()
        })
        .unwrap()
    }

    #[test]
    fn cfl_refusal_and_warning() {
        let mut p = sec51(48);
        p.dt = 0.5;
        p.t_final = 1.0;
        match solve_advection(&p, &SchemeSpec::upw5(), TimeKind::Rk4) {
            Err(Error::Stability { sigma, .. }) => assert!((sigma - 1.5).abs() < 1e-12),
            other => panic!("expected refusal, got {other:?}"),
        }
        assert!(cfl_warnings(0.7).unwrap().len() == 1);
        assert!(cfl_warnings(0.3).unwrap().is_empty());
    }

    #[test]
    fn sigma_values_of_sec51_cases() {
        for (n, s) in [(48, 3e-3), (64, 4e-3), (96, 6e-3)] {
            assert!((sec51(n).sigma() - s).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_fractional_step_count() {
        let g = Grid::new(-1.0, 1.0, 32).unwrap();
        assert!(AdvectionProblem::new(1.0, g, 0.3, 1.0, |x| x).is_err());
        assert!(AdvectionProblem::new(-1.0, g, 0.1, 1.0, |x| x).is_err());
    }

    #[test]
    fn history_has_about_fifty_snapshots() {
        let sol = solve_advection(&sec51(48), &SchemeSpec::upw5(), TimeKind::Rk4).unwrap();
        assert_eq!(sol.history.len(), 51);
        assert_eq!(sol.times()[0], 0.0);
        assert!((sol.times()[50] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn well_resolved_advection_tracks_exact() {
        let g = Grid::new(-1.0, 1.0, 256).unwrap();
        let p = AdvectionProblem::new(0.125, g, 1e-3, 0.5, |x| (2.0 * PI * x).sin()).unwrap();
        let sol = solve_advection(&p, &SchemeSpec::weno5_js(), TimeKind::Rk4).unwrap();
        let (t, u) = sol.history.last().unwrap();
        let err = g
            .points()
            .iter()
            .zip(&u[..g.n])
            .map(|(x, u)| (u - (2.0 * PI * (x - 0.125 * t)).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn snapshot_files_named_by_time() {
        let dir = tempfile::tempdir().unwrap();
        let g = Grid::new(0.0, 1.0, 16).unwrap();
        let spec = CombinationWaveSpec::new(1.0, 1.0, 2.0, 2.0).unwrap();
        let p = CoupledProblem::combination(&spec, g, 0.01, 0.02).unwrap();
        let sol = solve_coupled(&p, &SchemeSpec::upw5(), TimeKind::Euler).unwrap();
        let files = sol.write_snapshots(dir.path()).unwrap();
        let names: Vec<String> = files
            .iter()
            .map(|f| f.path.file_name().unwrap().to_string_lossy().into_owned())
            .collect();
        assert_eq!(
            names,
            ["snapshot_t0.000000.csv", "snapshot_t0.010000.csv", "snapshot_t0.020000.csv"]
        );
        let head = std::fs::read_to_string(&files[0].path).unwrap();
        assert!(head.starts_with("x,u,p\n"));
    }
}
