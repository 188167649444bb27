use serde::{Deserialize, Serialize};

use crate::grid::Grid;
use crate::{Error, Result};

/// Two superposed monochromatic waves with `k1 = omega1`.
///
/// The `u` component is `cos(k1 x - w1 t) + cos(k2 x - w2 t)`. It solves the
/// coupled system with `a = w2 / k2` when `p = (w2 - k2) sin(k2 x - w2 t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombinationWaveSpec {
    pub k1: f64,
    pub omega1: f64,
    pub k2: f64,
    pub omega2: f64,
}

impl CombinationWaveSpec {
    pub fn new(k1: f64, omega1: f64, k2: f64, omega2: f64) -> Result<Self> {
        if [k1, omega1, k2, omega2].iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("combination wave parameters must be finite"));
        }
        if (k1 - omega1).abs() > 1e-12 * k1.abs().max(1.0) {
            return Err(Error::invalid(format!("need k1 = omega1, got {k1} and {omega1}")));
        }
        if k1 == k2 {
            return Err(Error::invalid("k2 must differ from k1"));
        }
        if !(omega2 / k2 > 0.0) {
            return Err(Error::invalid(format!(
                "need omega2 / k2 > 0 for a rightward p, got {}",
                omega2 / k2
            )));
        }
        Ok(Self { k1, omega1, k2, omega2 })
    }

    pub fn group_velocity(&self) -> f64 {
        (self.omega2 - self.omega1) / (self.k2 - self.k1)
    }

    pub fn phase_velocity(&self) -> f64 {
        (self.omega2 + self.omega1) / (self.k2 + self.k1)
    }

    pub fn a(&self) -> f64 {
        self.omega2 / self.k2
    }

    pub fn exact_u(&self, x: f64, t: f64) -> f64 {
        let mean = 0.5 * ((self.k1 + self.k2) * x - (self.omega1 + self.omega2) * t);
        let half = 0.5 * ((self.k2 - self.k1) * x - (self.omega2 - self.omega1) * t);
        2.0 * mean.cos() * half.cos()
    }

    pub fn exact_p(&self, x: f64, t: f64) -> f64 {
        (self.omega2 - self.k2) * (self.k2 * x - self.omega2 * t).sin()
    }

    /// `(u_t + u_x - p, p_t + a p_x)` from the closed-form derivatives.
    pub fn residual(&self, x: f64, t: f64) -> (f64, f64) {
        let (k1, w1, k2, w2) = (self.k1, self.omega1, self.k2, self.omega2);
        let s1 = (k1 * x - w1 * t).sin();
        let s2 = (k2 * x - w2 * t).sin();
        let c2 = (k2 * x - w2 * t).cos();
        let u_t = w1 * s1 + w2 * s2;
        let u_x = -k1 * s1 - k2 * s2;
        let amp = w2 - k2;
        let p_t = -amp * w2 * c2;
        let p_x = amp * k2 * c2;
        (u_t + u_x - self.exact_p(x, t), p_t + self.a() * p_x)
    }

    /// `(u0, p0)` sampled on `grid`.
    pub fn init(&self, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
        (
            grid.sample(|x| self.exact_u(x, 0.0)),
            grid.sample(|x| self.exact_p(x, 0.0)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn standard_case_velocities() {
        let s = CombinationWaveSpec::new(6.0, 6.0, 8.0, 12.0).unwrap();
        assert_eq!(s.group_velocity(), 3.0);
        assert!((s.phase_velocity() - 9.0 / 7.0).abs() < 1e-15);
        assert_eq!(s.a(), 1.5);
    }

    #[test]
    fn invalid_specs() {
        assert!(CombinationWaveSpec::new(6.0, 5.0, 8.0, 12.0).is_err());
        assert!(CombinationWaveSpec::new(6.0, 6.0, 6.0, 12.0).is_err());
        assert!(CombinationWaveSpec::new(6.0, 6.0, 8.0, -1.0).is_err());
    }

    #[test]
    fn matched_pair_has_no_p() {
        let s = CombinationWaveSpec::new(3.0, 3.0, 5.0, 5.0).unwrap();
        let (_, p) = s.init(&Grid::new(0.0, 6.0, 32).unwrap());
        assert!(p.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn product_form_equals_sum_form() {
        let s = CombinationWaveSpec::new(6.0, 6.0, 8.0, 12.0).unwrap();
        for &(x, t) in &[(0.3f64, 0.0f64), (-2.0, 0.7), (5.1, 1.0)] {
            let sum = (6.0 * x - 6.0 * t).cos() + (8.0 * x - 12.0 * t).cos();
            assert!((s.exact_u(x, t) - sum).abs() < 1e-13);
        }
    }

    #[test]
    fn exact_solution_residual_vanishes() {
        let s = CombinationWaveSpec::new(6.0, 6.0, 8.0, 12.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = rng.gen_range(-10.0..10.0);
            let t = rng.gen_range(0.0..2.0);
            let (r1, r2) = s.residual(x, t);
            assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12, "{r1} {r2}");
        }
    }
}
