//! Three-level Λ system driven by a pump `Ω₁` (a–c) and a Stokes field `Ω₂` (b–c).

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrator::{integrate_observed, IntegratorConfig};
use crate::pulses::{edge_warnings, mixing_angle, mixing_rate, window_plan, PulseSpec, WindowPlan};
use crate::transfer::{label_map, log10_failure, run_windowed, Sample, TransferResult};

pub const LABELS: [&str; 3] = ["a", "b", "c"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lambda3State {
    pub ca: Complex64,
    pub cb: Complex64,
    pub cc: Complex64,
}

impl Lambda3State {
    pub fn real(a: f64, b: f64, c: f64) -> Self {
        Lambda3State { ca: a.into(), cb: b.into(), cc: c.into() }
    }

    /// Order `[Re Ca, Im Ca, Re Cb, Im Cb, Re Cc, Im Cc]`.
    pub fn to_vec(&self) -> [f64; 6] {
        [self.ca.re, self.ca.im, self.cb.re, self.cb.im, self.cc.re, self.cc.im]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Lambda3State { ca: Complex64::new(y[0], y[1]), cb: Complex64::new(y[2], y[3]), cc: Complex64::new(y[4], y[5]) }
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.ca.norm_sqr(), self.cb.norm_sqr(), self.cc.norm_sqr()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.populations().iter().sum()
    }

    /// The instantaneous dark state `W⁰` of the given pulses at `t`.
    pub fn dark(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<Self> {
        let phi = mixing_angle(p1, p2, t)?;
        Ok(Lambda3State::real(phi.cos(), -phi.sin(), 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    A,
    B,
    C,
}

impl Level {
    fn index(self) -> usize {
        self as usize
    }
}

/// `iĊ = HC`, `H = [[Δ₁, 0, Ω₁/2], [0, Δ₁+Δ₂, Ω₂/2], [Ω₁/2, Ω₂/2, 0]]`.
pub fn lambda3_rhs(p1: &PulseSpec, p2: &PulseSpec, d1: f64, d2: f64, t: f64, c: &Lambda3State) -> Lambda3State {
    let (h1, h2) = (0.5 * p1.eval(t), 0.5 * p2.eval(t));
    let mi = Complex64::new(0.0, -1.0);
    Lambda3State { ca: mi * (c.ca * d1 + c.cc * h1), cb: mi * (c.cb * (d1 + d2) + c.cc * h2), cc: mi * (c.ca * h1 + c.cb * h2) }
}

/// Resonant interaction matrix for fixed Rabi frequencies.
pub fn resonant_hamiltonian(o1: f64, o2: f64) -> [[f64; 3]; 3] {
    [[0.0, 0.0, 0.5 * o1], [0.0, 0.0, 0.5 * o2], [0.5 * o1, 0.5 * o2, 0.0]]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DressedBasis {
    pub w_plus: [f64; 3],
    pub w_zero: [f64; 3],
    pub w_minus: [f64; 3],
    pub omega_plus: f64,
    pub omega_zero: f64,
    pub omega_minus: f64,
    pub mixing_angle: f64,
}

pub fn dressed_states(o1: f64, o2: f64) -> Result<DressedBasis> {
    if o1 == 0.0 && o2 == 0.0 {
        return Err(Error::Degenerate("dressed states need a nonzero Rabi frequency".into()));
    }
    let phi = o1.atan2(o2);
    let (s, c) = phi.sin_cos();
    let r = FRAC_1_SQRT_2;
    let w = 0.5 * o1.hypot(o2);
    Ok(DressedBasis {
        w_plus: [s * r, c * r, r],
        w_zero: [c, -s, 0.0],
        w_minus: [s * r, c * r, -r],
        omega_plus: w,
        omega_zero: 0.0,
        omega_minus: -w,
        mixing_angle: phi,
    })
}

/// `|Φ̇| / Ω_eff` with `Ω_eff = ½√(Ω₁² + Ω₂²)`.
pub fn adiabaticity_margin(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<f64> {
    let eff = 0.5 * p1.eval(t).hypot(p2.eval(t));
    if eff == 0.0 {
        return Err(Error::UndefinedMargin { t });
    }
    Ok(mixing_rate(p1, p2, t)?.value.abs() / eff)
}

/// Counterintuitive transfer a → b from `C = (1, 0, 0)`; `p = 1 − |C_b(t1)|²`.
/// `window` of `None` uses the pulse-shape window rules.
pub fn stirap_transfer(
    p1: &PulseSpec,
    p2: &PulseSpec,
    d1: f64,
    d2: f64,
    window: Option<(f64, f64)>,
    cfg: &IntegratorConfig,
) -> Result<TransferResult> {
    transfer_from(p1, p2, d1, d2, window, Lambda3State::real(1.0, 0.0, 0.0), Level::B, cfg, None)
}

/// General form of [`stirap_transfer`]: any initial state, any target level,
/// optional trajectory sampling.
#[allow(clippy::too_many_arguments)]
pub fn transfer_from(
    p1: &PulseSpec,
    p2: &PulseSpec,
    d1: f64,
    d2: f64,
    window: Option<(f64, f64)>,
    initial: Lambda3State,
    target: Level,
    cfg: &IntegratorConfig,
    sample_every: Option<f64>,
) -> Result<TransferResult> {
    p1.validate()?;
    p2.validate()?;
    let plan = match window {
        Some((a, b)) => WindowPlan::Fixed(a, b),
        None => window_plan(&[*p1, *p2])?,
    };
    run_windowed(plan, |w| run_once(p1, p2, d1, d2, w, initial, target, cfg, sample_every))
}

#[allow(clippy::too_many_arguments)]
fn run_once(
    p1: &PulseSpec,
    p2: &PulseSpec,
    d1: f64,
    d2: f64,
    window: (f64, f64),
    initial: Lambda3State,
    target: Level,
    cfg: &IntegratorConfig,
    sample_every: Option<f64>,
) -> Result<TransferResult> {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let d = lambda3_rhs(p1, p2, d1, d2, t, &Lambda3State::from_slice(y));
        dy.copy_from_slice(&d.to_vec());
    };
    let mut peak_c: f64 = 0.0;
    let tr = integrate_observed(rhs, window.0, window.1, &initial.to_vec(), cfg, sample_every, |_, y| {
        peak_c = peak_c.max(y[4] * y[4] + y[5] * y[5]);
    })?;
    let fin = Lambda3State::from_slice(tr.final_state());
    let pops = fin.populations();
    let p = 1.0 - pops[target.index()];
    let mut diagnostics = std::collections::BTreeMap::new();
    diagnostics.insert("peak_c_population".to_string(), peak_c);
    let samples = if sample_every.is_some() {
        tr.times.iter().zip(&tr.states).map(|(&t, v)| Sample { t, values: v.clone() }).collect()
    } else {
        Vec::new()
    };
    Ok(TransferResult {
        system: "lambda3".into(),
        p,
        log10_p: log10_failure(p),
        populations: label_map(&LABELS, pops),
        trace_drift: fin.norm_sqr() - initial.norm_sqr(),
        diagnostics,
        window: [window.0, window.1],
        accepted_steps: tr.accepted_steps,
        rejected_steps: tr.rejected_steps,
        warnings: edge_warnings(&[("pulse1", *p1), ("pulse2", *p2)], window),
        samples,
    })
}
