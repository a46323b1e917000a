//! Four-level Λ atom in a single-mode cavity: eight real density-matrix equations
//! for the `|a,0⟩ → |b,1⟩ → |b,0⟩` transfer, with spontaneous (Γ) and cavity (κ) decay.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{integrate_observed, IntegratorConfig};
use crate::pulses::{edge_warnings, window_plan, PulseSpec, WindowPlan};
use crate::transfer::{label_map, log10_failure, run_windowed, Sample, TransferResult};

/// State order. The last three entries are real-encoded coherences.
pub const LABELS: [&str; 8] = ["a0a0", "b0b0", "b1b1", "c0c0", "e0e0", "a0e0", "a0b1", "b1e0"];
pub const AA: usize = 0;
pub const B0B0: usize = 1;
pub const B1B1: usize = 2;
pub const C0C0: usize = 3;
pub const EE: usize = 4;
pub const AE: usize = 5;
pub const AB1: usize = 6;
pub const B1E: usize = 7;

pub type Cavity4State = [f64; 8];

pub fn trace(rho: &[f64]) -> f64 {
    rho[AA] + rho[B0B0] + rho[B1B1] + rho[C0C0] + rho[EE]
}

pub fn initial_state() -> Cavity4State {
    let mut s = [0.0; 8];
    s[AA] = 1.0;
    s
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetConvention {
    /// Success is any population in the target Zeeman level: `ρ_b0b0 + ρ_b1b1`.
    #[default]
    AnyG0,
    /// Success only while the photon is still in the cavity: `ρ_b1b1`.
    CavityPhoton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Counterintuitive: `g` leads at t = 0, `Ω` delayed.
    Adiabatic,
    /// Intuitive: `Ω` leads at t = 0, `g` delayed.
    Pi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cavity4Config {
    pub pulse_omega: PulseSpec,
    pub pulse_g: PulseSpec,
    pub gamma: f64,
    pub kappa: f64,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
    #[serde(default)]
    pub target: TargetConvention,
}

impl Cavity4Config {
    /// Places the leading pulse of `protocol` at t = 0 and the other at `delay`.
    pub fn for_protocol(protocol: Protocol, omega: PulseSpec, g: PulseSpec, delay: f64, gamma: f64, kappa: f64) -> Self {
        let (pulse_omega, pulse_g) = match protocol {
            Protocol::Adiabatic => (omega.at(delay), g.at(0.0)),
            Protocol::Pi => (omega.at(0.0), g.at(delay)),
        };
        Cavity4Config { pulse_omega, pulse_g, gamma, kappa, window: None, target: TargetConvention::AnyG0 }
    }

    fn validate(&self) -> Result<()> {
        self.pulse_omega.validate()?;
        self.pulse_g.validate()?;
        if !(self.gamma >= 0.0 && self.kappa >= 0.0) {
            return Err(Error::Config("gamma and kappa must be >= 0".into()));
        }
        Ok(())
    }
}

fn rhs_raw(om: f64, g: f64, gamma: f64, kappa: f64, r: &[f64], d: &mut [f64]) {
    let leak = gamma / 3.0 * r[EE];
    d[AA] = -2.0 * om * r[AE] + leak;
    d[B0B0] = leak + kappa * r[B1B1];
    d[B1B1] = -kappa * r[B1B1] - 2.0 * g * r[B1E];
    d[C0C0] = leak;
    d[EE] = -gamma * r[EE] + 2.0 * om * r[AE] + 2.0 * g * r[B1E];
    d[AE] = -0.5 * gamma * r[AE] - om * (r[EE] - r[AA]) + g * r[AB1];
    d[AB1] = -0.5 * kappa * r[AB1] - om * r[B1E] - g * r[AE];
    d[B1E] = -0.5 * (gamma + kappa) * r[B1E] + om * r[AB1] - g * (r[EE] - r[B1B1]);
}

pub fn cavity4_rhs(cfg: &Cavity4Config, t: f64, rho: &Cavity4State) -> Cavity4State {
    let mut d = [0.0; 8];
    rhs_raw(cfg.pulse_omega.eval(t), cfg.pulse_g.eval(t), cfg.gamma, cfg.kappa, rho, &mut d);
    d
}

/// Normalized dark-state coefficients on `(|g₁,n⟩, |g₂,n+1⟩)`:
/// `(2g√(n+1), Ω)/√(Ω² + 4g²(n+1))`.
pub fn dark_state_family(om: f64, g: f64, n: u32) -> Result<[f64; 2]> {
    let a = 2.0 * g * ((n + 1) as f64).sqrt();
    let norm = a.hypot(om);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::Degenerate("dark state needs a nonzero coupling".into()));
    }
    Ok([a / norm, om / norm])
}

/// Pure state `(g|a,0⟩ − Ω|b,1⟩)/√(g² + Ω²)` in the eight-variable encoding;
/// it is annihilated by the coherent part of [`cavity4_rhs`].
pub fn decoupled_state(om: f64, g: f64) -> Result<Cavity4State> {
    let norm = om.hypot(g);
    if norm == 0.0 {
        return Err(Error::Degenerate("dark state needs a nonzero coupling".into()));
    }
    let (ca, cb) = (g / norm, -om / norm);
    let mut s = [0.0; 8];
    s[AA] = ca * ca;
    s[B1B1] = cb * cb;
    s[AB1] = ca * cb;
    Ok(s)
}

pub fn adiabatic_transfer(cfg: &Cavity4Config, icfg: &IntegratorConfig) -> Result<TransferResult> {
    if cfg.pulse_omega.center < cfg.pulse_g.center {
        return Err(Error::Config("adiabatic passage needs the Omega pulse delayed behind g".into()));
    }
    transfer(cfg, icfg, None)
}

pub fn pi_pulse_transfer(cfg: &Cavity4Config, icfg: &IntegratorConfig) -> Result<TransferResult> {
    if cfg.pulse_g.center < cfg.pulse_omega.center {
        return Err(Error::Config("the pi-pulse sequence needs the g pulse delayed behind Omega".into()));
    }
    transfer(cfg, icfg, None)
}

/// Integrates from `ρ_a0a0 = 1` without checking the pulse ordering.
pub fn transfer(cfg: &Cavity4Config, icfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<TransferResult> {
    cfg.validate()?;
    let plan = match cfg.window {
        Some((a, b)) => WindowPlan::Fixed(a, b),
        None => window_plan(&[cfg.pulse_omega, cfg.pulse_g])?,
    };
    run_windowed(plan, |w| run_once(cfg, w, icfg, sample_every))
}

fn run_once(cfg: &Cavity4Config, window: (f64, f64), icfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<TransferResult> {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        rhs_raw(cfg.pulse_omega.eval(t), cfg.pulse_g.eval(t), cfg.gamma, cfg.kappa, y, dy);
    };
    let y0 = initial_state();
    let (mut peak_e, mut min_pop) = (0.0f64, 0.0f64);
    let tr = integrate_observed(rhs, window.0, window.1, &y0, icfg, sample_every, |_, y| {
        peak_e = peak_e.max(y[EE]);
        min_pop = min_pop.min(y[..5].iter().copied().fold(f64::INFINITY, f64::min));
    })?;
    let fin = tr.final_state();
    let success = match cfg.target {
        TargetConvention::AnyG0 => fin[B0B0] + fin[B1B1],
        TargetConvention::CavityPhoton => fin[B1B1],
    };
    let p = 1.0 - success;
    let mut diagnostics = BTreeMap::new();
    diagnostics.insert("peak_e_population".to_string(), peak_e);
    diagnostics.insert("min_population".to_string(), min_pop);
    let samples = if sample_every.is_some() {
        tr.times.iter().zip(&tr.states).map(|(&t, v)| Sample { t, values: v.clone() }).collect()
    } else {
        Vec::new()
    };
    Ok(TransferResult {
        system: "cavity4".into(),
        p,
        log10_p: log10_failure(p),
        populations: label_map(&LABELS, fin.iter().copied()),
        trace_drift: trace(fin) - trace(&y0),
        diagnostics,
        window: [window.0, window.1],
        accepted_steps: tr.accepted_steps,
        rejected_steps: tr.rejected_steps,
        warnings: edge_warnings(&[("omega", cfg.pulse_omega), ("g", cfg.pulse_g)], window),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_fields_no_decay_is_static() {
        let cfg = Cavity4Config::for_protocol(Protocol::Pi, PulseSpec::constant(0.0), PulseSpec::constant(0.0), 0.0, 0.0, 0.0);
        let rho = [0.2, 0.1, 0.3, 0.1, 0.3, 0.05, -0.02, 0.01];
        assert_eq!(cavity4_rhs(&cfg, 0.0, &rho), [0.0; 8]);
    }

    #[test]
    fn spontaneous_emission_branches_in_thirds() {
        let cfg = Cavity4Config::for_protocol(Protocol::Pi, PulseSpec::constant(0.0), PulseSpec::constant(0.0), 0.0, 0.3, 0.0);
        let mut rho = [0.0; 8];
        rho[EE] = 1.0;
        let d = cavity4_rhs(&cfg, 0.0, &rho);
        assert!((d[EE] + 0.3).abs() < 1e-15);
        for i in [AA, B0B0, C0C0] {
            assert!((d[i] - 0.1).abs() < 1e-15);
        }
        assert_eq!(d[B1B1], 0.0);
    }

    #[test]
    fn dark_family_examples() {
        assert_eq!(dark_state_family(0.0, 1.0, 0).unwrap(), [1.0, 0.0]);
        let v = dark_state_family(1.0, 1e-12, 0).unwrap();
        assert!((v[1] - 1.0).abs() < 1e-15 && v[0] < 1e-11);
        let v = dark_state_family(2.0, 1.0, 0).unwrap();
        assert!((v[0] - 0.5f64.sqrt()).abs() < 1e-15 && (v[1] - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(dark_state_family(0.0, 0.0, 3).is_err());
    }

    #[test]
    fn decoupled_state_is_stationary_without_decay() {
        let s = decoupled_state(1.3, 0.7).unwrap();
        let cfg = Cavity4Config::for_protocol(Protocol::Pi, PulseSpec::constant(1.3), PulseSpec::constant(0.7), 0.0, 0.0, 0.0);
        for v in cavity4_rhs(&cfg, 0.0, &s) {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn adiabatic_gaussian_dip() {
        let cfg = Cavity4Config::for_protocol(
            Protocol::Adiabatic,
            PulseSpec::gaussian(2.0, 1.0, 0.0),
            PulseSpec::gaussian(2.0, 1.0, 0.0),
            1.31,
            0.0,
            0.0,
        );
        let r = adiabatic_transfer(&cfg, &IntegratorConfig::default()).unwrap();
        assert!((r.log10_p + 4.88).abs() < 0.3, "log10 p = {}", r.log10_p);
        assert!(r.trace_drift.abs() < 1e-8);
    }

    #[test]
    fn no_pump_leaves_atom_in_a() {
        let cfg = Cavity4Config::for_protocol(
            Protocol::Adiabatic,
            PulseSpec::gaussian(0.0, 1.0, 0.0),
            PulseSpec::gaussian(2.0, 1.0, 0.0),
            1.0,
            0.0,
            0.0,
        );
        let r = adiabatic_transfer(&cfg, &IntegratorConfig::default()).unwrap();
        assert_eq!(r.p, 1.0);
        assert_eq!(r.log10_p, 0.0);
    }

    #[test]
    fn ordering_is_enforced() {
        let cfg = Cavity4Config::for_protocol(
            Protocol::Pi,
            PulseSpec::gaussian(2.0, 0.3, 0.0),
            PulseSpec::gaussian(1.0, 0.6, 0.0),
            1.0,
            0.0,
            0.0,
        );
        assert!(adiabatic_transfer(&cfg, &IntegratorConfig::default()).is_err());
        assert!(pi_pulse_transfer(&cfg, &IntegratorConfig::default()).is_ok());
    }
}
