//! Explicit one-step integrators for autonomous systems `u' = f(u)`.
//!
//! States are flat real vectors; complex or multi-field systems pack their
//! components and unpack them inside the right-hand side.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeKind {
    Euler,
    Rk3,
    Rk4,
}

impl TimeKind {
    pub const ALL: [TimeKind; 3] = [TimeKind::Euler, TimeKind::Rk3, TimeKind::Rk4];

    pub fn name(self) -> &'static str {
        match self {
            TimeKind::Euler => "euler",
            TimeKind::Rk3 => "rk3",
            TimeKind::Rk4 => "rk4",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            TimeKind::Euler => 1,
            TimeKind::Rk3 => 3,
            TimeKind::Rk4 => 4,
        }
    }

    /// Stability polynomial `R(z)` of one step applied to `u' = lambda u`, `z = lambda dt`.
    pub fn amplification(self, z: Complex64) -> Complex64 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for m in 1..=self.order() {
            term = term * z / m as f64;
            sum += term;
        }
        sum
    }
}

impl fmt::Display for TimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TimeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euler" => Ok(TimeKind::Euler),
            "rk3" => Ok(TimeKind::Rk3),
            "rk4" => Ok(TimeKind::Rk4),
            other => Err(Error::invalid(format!(
                "unknown time integrator '{other}' (expected euler, rk3 or rk4)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSpec {
    pub kind: TimeKind,
    pub dt: f64,
}

impl TimeSpec {
    pub fn new(kind: TimeKind, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::invalid(format!("time step must be positive, got {dt}")));
        }
        Ok(Self { kind, dt })
    }
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(y, x)| y + a * x).collect()
}

/// One step of the selected method.
///
/// RK3 is the Shu-Osher convex-combination form:
/// ```text
/// u1 = u + dt f(u)
/// u2 = 3/4 u + 1/4 u1 + 1/4 dt f(u1)
/// u' = 1/3 u + 2/3 u2 + 2/3 dt f(u2)
/// ```
pub fn step<F>(state: &[f64], rhs: &F, spec: TimeSpec) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let dt = spec.dt;
    match spec.kind {
        TimeKind::Euler => Ok(axpy(state, dt, &rhs(state)?)),
        TimeKind::Rk3 => {
            let u1 = axpy(state, dt, &rhs(state)?);
            let f1 = rhs(&u1)?;
            let u2: Vec<f64> = (0..state.len())
                .map(|i| 0.75 * state[i] + 0.25 * u1[i] + 0.25 * dt * f1[i])
                .collect();
            let f2 = rhs(&u2)?;
            Ok((0..state.len())
                .map(|i| state[i] / 3.0 + 2.0 / 3.0 * u2[i] + 2.0 / 3.0 * dt * f2[i])
                .collect())
        }
        TimeKind::Rk4 => {
            let k1 = rhs(state)?;
            let k2 = rhs(&axpy(state, 0.5 * dt, &k1))?;
            let k3 = rhs(&axpy(state, 0.5 * dt, &k2))?;
            let k4 = rhs(&axpy(state, dt, &k3))?;
            Ok((0..state.len())
                .map(|i| state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect())
        }
    }
}

/// Stored states and their times.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl History {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &[f64])> {
        self.times
            .last()
            .map(|&t| (t, self.states.last().unwrap().as_slice()))
    }
}

/// Advances `n_steps` steps, storing every `stride`-th state. The initial
/// and final states are always stored.
pub fn advance<F>(
    state: &[f64],
    rhs: &F,
    spec: TimeSpec,
    n_steps: usize,
    stride: usize,
) -> Result<History>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if n_steps == 0 {
        return Err(Error::invalid("advance needs at least one step"));
    }
    let stride = stride.max(1);
    let mut history = History {
        times: vec![0.0],
        states: vec![state.to_vec()],
    };
    let mut u = state.to_vec();
    for s in 1..=n_steps {
        u = step(&u, rhs, spec)?;
        if s % stride == 0 || s == n_steps {
            history.times.push(s as f64 * spec.dt);
            history.states.push(u.clone());
        }
    }
    Ok(history)
}

/// Stride that keeps about `snapshots` stored states for `n_steps` steps.
pub fn stride_for(n_steps: usize, snapshots: usize) -> usize {
    (n_steps / snapshots.max(1)).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmul(lambda: Complex64) -> impl Fn(&[f64]) -> Result<Vec<f64>> {
        move |u: &[f64]| {
            let z = lambda * Complex64::new(u[0], u[1]);
            Ok(vec![z.re, z.im])
        }
    }

    fn one_step_factor(kind: TimeKind, z: Complex64) -> Complex64 {
        let out = step(&[1.0, 0.0], &cmul(z), TimeSpec::new(kind, 1.0).unwrap()).unwrap();
        Complex64::new(out[0], out[1])
    }

    #[test]
    fn zero_rhs_keeps_state() {
        let rhs = |u: &[f64]| Ok(vec![0.0; u.len()]);
        for kind in TimeKind::ALL {
            let out = step(&[1.0, -2.0, 3.5], &rhs, TimeSpec::new(kind, 0.1).unwrap()).unwrap();
            assert_eq!(out, vec![1.0, -2.0, 3.5]);
        }
    }

    #[test]
    fn rk3_amplification_is_cubic_taylor() {
        let z = Complex64::new(-0.3, 0.7);
        let expect = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
        assert!((one_step_factor(TimeKind::Rk3, z) - expect).norm() < 1e-14);
    }

    #[test]
    fn rk4_amplification_is_quartic_taylor() {
        let z = Complex64::new(0.2, -0.9);
        let expect = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
        assert!((one_step_factor(TimeKind::Rk4, z) - expect).norm() < 1e-14);
    }

    #[test]
    fn amplification_polynomial_matches_step() {
        for kind in TimeKind::ALL {
            let z = Complex64::new(-0.1, 0.4);
            assert!((one_step_factor(kind, z) - kind.amplification(z)).norm() < 1e-15);
        }
    }

    #[test]
    fn advance_single_step_equals_step() {
        let rhs = |u: &[f64]| Ok(u.iter().map(|x| -x * x).collect());
        let spec = TimeSpec::new(TimeKind::Rk3, 0.05).unwrap();
        let h = advance(&[0.5, 1.0], &rhs, spec, 1, 1).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.states[1], step(&[0.5, 1.0], &rhs, spec).unwrap());
    }

    #[test]
    fn advance_keeps_final_state_with_stride() {
        let rhs = |u: &[f64]| Ok(u.iter().map(|x| -x).collect());
        let spec = TimeSpec::new(TimeKind::Euler, 0.1).unwrap();
        let h = advance(&[1.0], &rhs, spec, 7, 3).unwrap();
        assert_eq!(h.times.len(), 4);
        assert!((h.times[3] - 0.7).abs() < 1e-15);
        assert!(advance(&[1.0], &rhs, spec, 0, 1).is_err());
    }

    #[test]
    fn parse_kinds() {
        assert_eq!("RK4".parse::<TimeKind>().unwrap(), TimeKind::Rk4);
        assert!("rk2".parse::<TimeKind>().is_err());
        assert!(TimeSpec::new(TimeKind::Rk4, 0.0).is_err());
    }
}
