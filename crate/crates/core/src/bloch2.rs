//! Rotating-frame pseudospin of a driven two-level atom.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::integrator::{integrate, IntegratorConfig};
use crate::pulses::PulseSpec;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudospinState {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl PseudospinState {
    pub const GROUND: PseudospinState = PseudospinState { u: 0.0, v: 0.0, w: -1.0 };

    pub fn new(u: f64, v: f64, w: f64) -> Self {
        PseudospinState { u, v, w }
    }

    pub fn norm(&self) -> f64 {
        (self.u * self.u + self.v * self.v + self.w * self.w).sqrt()
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u, self.v, self.w]
    }

    pub fn max_abs_diff(&self, other: &PseudospinState) -> f64 {
        let (a, b) = (self.as_array(), other.as_array());
        (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max)
    }
}

/// Drive `Ω(t)` and detuning `Δ = ω₀ − ω`; the torque vector is `(−Ω, 0, Δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorqueSpec {
    pub pulse: PulseSpec,
    pub detuning: f64,
}

/// `u̇ = −Δv`, `v̇ = Δu + Ωw`, `ẇ = −Ωv`.
pub fn pseudospin_rhs(ts: &TorqueSpec, t: f64, s: &PseudospinState) -> PseudospinState {
    let om = ts.pulse.eval(t);
    let d = ts.detuning;
    PseudospinState { u: -d * s.v, v: d * s.u + om * s.w, w: -om * s.v }
}

/// Resonant solution for accumulated area `theta`.
pub fn rotation_solution(theta: f64, s0: &PseudospinState) -> PseudospinState {
    let (sn, cs) = theta.sin_cos();
    PseudospinState { u: s0.u, v: s0.w * sn + s0.v * cs, w: -s0.v * sn + s0.w * cs }
}

pub fn simulate_two_level(ts: &TorqueSpec, window: (f64, f64), s0: &PseudospinState, cfg: &IntegratorConfig) -> Result<PseudospinState> {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let d = pseudospin_rhs(ts, t, &PseudospinState::new(y[0], y[1], y[2]));
        dy.copy_from_slice(&d.as_array());
    };
    let tr = integrate(rhs, window.0, window.1, &s0.as_array(), cfg, None)?;
    let y = tr.final_state();
    Ok(PseudospinState::new(y[0], y[1], y[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn torque(pulse: PulseSpec, detuning: f64) -> TorqueSpec {
        TorqueSpec { pulse, detuning }
    }

    #[test]
    fn rhs_examples() {
        let z = pseudospin_rhs(&torque(PulseSpec::constant(0.0), 0.0), 0.0, &PseudospinState::new(0.3, 0.4, 0.5));
        assert_eq!(z, PseudospinState::new(0.0, 0.0, 0.0));
        let d = pseudospin_rhs(&torque(PulseSpec::constant(1.0), 0.0), 0.0, &PseudospinState::GROUND);
        assert_eq!(d, PseudospinState::new(0.0, -1.0, 0.0));
    }

    #[test]
    fn rotation_examples() {
        let g = PseudospinState::GROUND;
        assert!(rotation_solution(PI, &g).max_abs_diff(&PseudospinState::new(0.0, 0.0, 1.0)) < 1e-15);
        assert_eq!(rotation_solution(0.0, &g), g);
        assert!(rotation_solution(FRAC_PI_2, &g).max_abs_diff(&PseudospinState::new(0.0, -1.0, 0.0)) < 1e-15);
    }

    #[test]
    fn constant_pi_pulse_inverts() {
        let s =
            simulate_two_level(&torque(PulseSpec::constant(1.0), 0.0), (0.0, PI), &PseudospinState::GROUND, &IntegratorConfig::default())
                .unwrap();
        assert!((s.w - 1.0).abs() < 1e-7);
    }

    #[test]
    fn gaussian_two_pi_pulse_returns_to_ground() {
        let amp = 2.0 * PI / (2.0 * PI).sqrt();
        let ts = torque(PulseSpec::gaussian(amp, 1.0, 0.0), 0.0);
        let s = simulate_two_level(&ts, (-10.0, 10.0), &PseudospinState::GROUND, &IntegratorConfig::default()).unwrap();
        assert!((s.w + 1.0).abs() < 1e-6);
    }

    #[test]
    fn free_precession_period() {
        let ts = torque(PulseSpec::constant(0.0), 1.0);
        let s0 = PseudospinState::new(1.0, 0.0, 0.0);
        let s = simulate_two_level(&ts, (0.0, 2.0 * PI), &s0, &IntegratorConfig::default()).unwrap();
        assert!(s.max_abs_diff(&s0) < 1e-7);
    }
}
