//! Two atoms sharing one cavity mode: transfer of the ground-state coherence
//! `|ab0⟩ → |ba0⟩` through `|bb1⟩`. Five real amplitudes, the 25-element
//! density matrix, and the symmetric/antisymmetric split for equal drives.
//!
//! Basis order is `ab, cb, bb, bc, ba` (atom 1 state, atom 2 state); `cb` and
//! `bc` carry one excited atom and are stored in the tilde convention `C̃ = iC`,
//! so every dynamical variable is real.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{integrate_observed, IntegratorConfig};
use crate::pulses::{edge_warnings, window_plan, PulseSpec, WindowPlan};
use crate::transfer::{label_map, log10_failure, run_windowed, Sample, TransferResult};

pub const AMP_LABELS: [&str; 5] = ["ab", "cb", "bb", "bc", "ba"];
pub const AB: usize = 0;
pub const CB: usize = 1;
pub const BB: usize = 2;
pub const BC: usize = 3;
pub const BA: usize = 4;

pub type Amp5State = [f64; 5];
/// Row-major `ρ_pr` over the amplitude basis; entries mixing one excited and
/// one ground label are the tilde variables.
pub type Rho25State = [f64; 25];

pub fn rho_index(p: usize, r: usize) -> usize {
    5 * p + r
}

pub fn rho_labels() -> Vec<String> {
    let mut out = Vec::with_capacity(25);
    for p in AMP_LABELS {
        for r in AMP_LABELS {
            out.push(format!("{p}{r}"));
        }
    }
    out
}

fn is_excited(i: usize) -> bool {
    i == CB || i == BC
}

/// Generator of the amplitude equations, `ẋ = M x`.
pub fn amp5_matrix(o1: f64, o2: f64, g: f64, gamma: f64) -> [[f64; 5]; 5] {
    let mut m = [[0.0; 5]; 5];
    m[AB][CB] = -0.5 * o1;
    m[CB][AB] = 0.5 * o1;
    m[CB][CB] = -0.5 * gamma;
    m[CB][BB] = 0.5 * g;
    m[BB][CB] = -0.5 * g;
    m[BB][BC] = -0.5 * g;
    m[BC][BB] = 0.5 * g;
    m[BC][BC] = -0.5 * gamma;
    m[BC][BA] = 0.5 * o2;
    m[BA][BC] = -0.5 * o2;
    m
}

fn amp5_raw(o1: f64, o2: f64, g: f64, gamma: f64, c: &[f64], d: &mut [f64]) {
    let (h1, h2, hg, hl) = (0.5 * o1, 0.5 * o2, 0.5 * g, 0.5 * gamma);
    d[AB] = -h1 * c[CB];
    d[CB] = -hl * c[CB] + h1 * c[AB] + hg * c[BB];
    d[BB] = -hg * (c[CB] + c[BC]);
    d[BC] = -hl * c[BC] + hg * c[BB] + h2 * c[BA];
    d[BA] = -h2 * c[BC];
}

pub fn amp5_rhs(p1: &PulseSpec, p2: &PulseSpec, g: f64, gamma: f64, t: f64, c: &Amp5State) -> Amp5State {
    let mut d = [0.0; 5];
    amp5_raw(p1.eval(t), p2.eval(t), g, gamma, c, &mut d);
    d
}

fn rho25_raw(o1: f64, o2: f64, g: f64, gamma: f64, y: &[f64], d: &mut [f64]) {
    let r = |p: usize, q: usize| y[5 * p + q];
    let (a, b, h, l) = (0.5 * o1, 0.5 * o2, 0.5 * g, gamma);
    let feed = l / 3.0;
    let mut set = |p: usize, q: usize, v: f64| d[5 * p + q] = v;

    set(AB, AB, a * (r(AB, CB) - r(CB, AB)) + feed * r(CB, CB));
    set(AB, CB, a * (r(CB, CB) - r(AB, AB)) - h * r(AB, BB) - 0.5 * l * r(AB, CB));
    set(AB, BB, -a * r(CB, BB) + h * (r(AB, CB) + r(AB, BC)));
    set(AB, BC, a * r(CB, BC) - b * r(AB, BA) - h * r(AB, BB) - 0.5 * l * r(AB, BC));
    set(AB, BA, -a * r(CB, BA) + b * r(AB, BC));

    set(CB, AB, a * (r(AB, AB) - r(CB, CB)) + h * r(BB, AB) - 0.5 * l * r(CB, AB));
    set(CB, CB, a * (r(CB, AB) - r(AB, CB)) + h * (r(CB, BB) - r(BB, CB)) - l * r(CB, CB));
    set(CB, BB, a * r(AB, BB) + h * (r(BB, BB) - r(CB, CB) - r(CB, BC)) - 0.5 * l * r(CB, BB));
    set(CB, BC, -a * r(AB, BC) + b * r(CB, BA) + h * (r(CB, BB) - r(BB, BC)) - l * r(CB, BC));
    set(CB, BA, a * r(AB, BA) - b * r(CB, BC) + h * r(BB, BA) - 0.5 * l * r(CB, BA));

    set(BB, AB, a * r(BB, CB) - h * (r(CB, AB) + r(BC, AB)));
    set(BB, CB, -a * r(BB, AB) + h * (r(CB, CB) + r(BC, CB) - r(BB, BB)) - 0.5 * l * r(BB, CB));
    set(BB, BB, h * (r(BB, CB) + r(BB, BC) - r(CB, BB) - r(BC, BB)) + feed * (r(CB, CB) + r(BC, BC)));
    set(BB, BC, -b * r(BB, BA) + h * (r(CB, BC) + r(BC, BC) - r(BB, BB)) - 0.5 * l * r(BB, BC));
    set(BB, BA, b * r(BB, BC) - h * (r(CB, BA) + r(BC, BA)));

    set(BC, AB, -a * r(BC, CB) + b * r(BA, AB) + h * r(BB, AB) - 0.5 * l * r(BC, AB));
    set(BC, CB, a * r(BC, AB) - b * r(BA, CB) + h * (r(BC, BB) - r(BB, CB)) - l * r(BC, CB));
    set(BC, BB, b * r(BA, BB) + h * (r(BB, BB) - r(BC, CB) - r(BC, BC)) - 0.5 * l * r(BC, BB));
    set(BC, BC, b * (r(BC, BA) - r(BA, BC)) + h * (r(BC, BB) - r(BB, BC)) - l * r(BC, BC));
    set(BC, BA, b * (r(BA, BA) - r(BC, BC)) + h * r(BB, BA) - 0.5 * l * r(BC, BA));

    set(BA, AB, a * r(BA, CB) - b * r(BC, AB));
    set(BA, CB, -a * r(BA, AB) + b * r(BC, CB) - h * r(BA, BB) - 0.5 * l * r(BA, CB));
    set(BA, BB, -b * r(BC, BB) + h * (r(BA, CB) + r(BA, BC)));
    set(BA, BC, b * (r(BC, BC) - r(BA, BA)) - h * r(BA, BB) - 0.5 * l * r(BA, BC));
    set(BA, BA, b * (r(BA, BC) - r(BC, BA)) + feed * r(BC, BC));
}

pub fn rho25_rhs(p1: &PulseSpec, p2: &PulseSpec, g: f64, gamma: f64, t: f64, rho: &Rho25State) -> Rho25State {
    let mut d = [0.0; 25];
    rho25_raw(p1.eval(t), p2.eval(t), g, gamma, rho, &mut d);
    d
}

/// Sign linking a stored variable to the real-frame matrix element `x_p x_r`:
/// tilde variables with a ground row and excited column carry a minus sign.
pub fn tilde_sign(p: usize, r: usize) -> f64 {
    if !is_excited(p) && is_excited(r) {
        -1.0
    } else {
        1.0
    }
}

/// Density variables of the pure state with amplitudes `c`.
pub fn rho_from_amplitudes(c: &Amp5State) -> Rho25State {
    let mut out = [0.0; 25];
    for p in 0..5 {
        for r in 0..5 {
            out[rho_index(p, r)] = tilde_sign(p, r) * c[p] * c[r];
        }
    }
    out
}

pub fn rho_trace(rho: &[f64]) -> f64 {
    (0..5).map(|i| rho[rho_index(i, i)]).sum()
}

/// Normalized dark state on `(|ab0⟩, |bb1⟩, |ba0⟩)`.
pub fn dark_state(o1: f64, o2: f64, g: f64) -> Result<[f64; 3]> {
    let v = [o2 * g, -o1 * o2, o1 * g];
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(Error::Degenerate("two-atom dark state needs a nonzero denominator".into()));
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

pub fn embed_dark(d: &[f64; 3]) -> Amp5State {
    [d[0], 0.0, d[1], 0.0, d[2]]
}

/// `Ḃ₁ = −(Ω/2)B₂`, `Ḃ₂ = (Ω/2)B₁ − (Γ/2)B₂ + (g/√2)B₃`, `Ḃ₃ = −(g/√2)B₂`.
pub fn symmetric_rhs(p: &PulseSpec, g: f64, gamma: f64, t: f64, b: &[f64; 3]) -> [f64; 3] {
    let h = 0.5 * p.eval(t);
    let k = g / SQRT_2;
    [-h * b[1], h * b[0] - 0.5 * gamma * b[1] + k * b[2], -k * b[1]]
}

/// `Ȧ₁ = −(Ω/2)A₂`, `Ȧ₂ = (Ω/2)A₁ − (Γ/2)A₂`.
pub fn antisymmetric_rhs(p: &PulseSpec, gamma: f64, t: f64, a: &[f64; 2]) -> [f64; 2] {
    let h = 0.5 * p.eval(t);
    [-h * a[1], h * a[0] - 0.5 * gamma * a[1]]
}

/// Dark state `(−√2g, 0, Ω)/√(2g² + Ω²)` of the symmetric subsystem.
pub fn symmetric_dark_state(om: f64, g: f64) -> Result<[f64; 3]> {
    let n = (2.0 * g * g + om * om).sqrt();
    if n == 0.0 {
        return Err(Error::Degenerate("symmetric dark state needs a nonzero coupling".into()));
    }
    Ok([-SQRT_2 * g / n, 0.0, om / n])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymAntiState {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

pub fn decompose(c: &Amp5State) -> SymAntiState {
    let r = FRAC_1_SQRT_2;
    SymAntiState { b: [(c[AB] + c[BA]) * r, (c[CB] + c[BC]) * r, c[BB]], a: [(c[AB] - c[BA]) * r, (c[CB] - c[BC]) * r] }
}

pub fn reconstruct(s: &SymAntiState) -> Amp5State {
    let r = FRAC_1_SQRT_2;
    [(s.b[0] + s.a[0]) * r, (s.b[1] + s.a[1]) * r, s.b[2], (s.b[1] - s.a[1]) * r, (s.b[0] - s.a[0]) * r]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    #[serde(alias = "amp")]
    Amplitudes,
    Density,
    /// Symmetric and antisymmetric subsystems, valid for identical drives.
    SymAnti,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoAtomConfig {
    pub model: Model,
    pub pulse1: PulseSpec,
    pub pulse2: PulseSpec,
    pub g: f64,
    pub gamma: f64,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

impl TwoAtomConfig {
    /// Counterintuitive placement: `Ω₂` at t = 0, `Ω₁` at `delay`.
    pub fn counterintuitive(model: Model, pulse1: PulseSpec, pulse2: PulseSpec, delay: f64, g: f64, gamma: f64) -> Self {
        TwoAtomConfig { model, pulse1: pulse1.at(delay), pulse2: pulse2.at(0.0), g, gamma, window: None }
    }
}

/// Transfer from `|ab0⟩`; `p = 1 − ρ_baba(t1)` or `1 − C_ba(t1)²`.
pub fn coherence_transfer(cfg: &TwoAtomConfig, icfg: &IntegratorConfig) -> Result<TransferResult> {
    coherence_transfer_sampled(cfg, icfg, None)
}

pub fn coherence_transfer_sampled(cfg: &TwoAtomConfig, icfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<TransferResult> {
    cfg.pulse1.validate()?;
    cfg.pulse2.validate()?;
    if !(cfg.gamma >= 0.0) || !cfg.g.is_finite() {
        return Err(Error::Config("gamma must be >= 0 and g finite".into()));
    }
    if cfg.pulse1.center < cfg.pulse2.center {
        return Err(Error::Config("coherence transfer needs the atom-2 pulse to lead".into()));
    }
    if cfg.model == Model::SymAnti && cfg.pulse1 != cfg.pulse2 {
        return Err(Error::Config("the sym-anti model needs identical pulses on both atoms".into()));
    }
    let plan = match cfg.window {
        Some((a, b)) => WindowPlan::Fixed(a, b),
        None => window_plan(&[cfg.pulse1, cfg.pulse2])?,
    };
    run_windowed(plan, |w| match cfg.model {
        Model::Amplitudes => run_amplitudes(cfg, w, icfg, sample_every),
        Model::Density => run_density(cfg, w, icfg, sample_every),
        Model::SymAnti => run_sym_anti(cfg, w, icfg, sample_every),
    })
}

fn collect_samples(sample_every: Option<f64>, times: &[f64], states: &[Vec<f64>]) -> Vec<Sample> {
    if sample_every.is_none() {
        return Vec::new();
    }
    times.iter().zip(states).map(|(&t, v)| Sample { t, values: v.clone() }).collect()
}

#[allow(clippy::too_many_arguments)]
fn finish(
    cfg: &TwoAtomConfig,
    window: (f64, f64),
    p: f64,
    populations: BTreeMap<String, f64>,
    trace_drift: f64,
    diagnostics: BTreeMap<String, f64>,
    steps: (usize, usize),
    samples: Vec<Sample>,
) -> TransferResult {
    TransferResult {
        system: "twoatom".into(),
        p,
        log10_p: log10_failure(p),
        populations,
        trace_drift,
        diagnostics,
        window: [window.0, window.1],
        accepted_steps: steps.0,
        rejected_steps: steps.1,
        warnings: edge_warnings(&[("pulse1", cfg.pulse1), ("pulse2", cfg.pulse2)], window),
        samples,
    }
}

fn run_amplitudes(cfg: &TwoAtomConfig, w: (f64, f64), icfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<TransferResult> {
    let (p1, p2) = (cfg.pulse1, cfg.pulse2);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| amp5_raw(p1.eval(t), p2.eval(t), cfg.g, cfg.gamma, y, dy);
    let y0 = [1.0, 0.0, 0.0, 0.0, 0.0];
    let (mut peak_bb, mut peak_exc) = (0.0f64, 0.0f64);
    let tr = integrate_observed(rhs, w.0, w.1, &y0, icfg, sample_every, |_, y| {
        peak_bb = peak_bb.max(y[BB] * y[BB]);
        peak_exc = peak_exc.max(y[CB] * y[CB] + y[BC] * y[BC]);
    })?;
    let fin = tr.final_state();
    let pops: Vec<f64> = fin.iter().map(|v| v * v).collect();
    let mut diag = BTreeMap::new();
    diag.insert("peak_bbbb_population".to_string(), peak_bb);
    diag.insert("peak_excited_population".to_string(), peak_exc);
    let drift = pops.iter().sum::<f64>() - 1.0;
    Ok(finish(
        cfg,
        w,
        1.0 - pops[BA],
        label_map(&AMP_LABELS, pops),
        drift,
        diag,
        (tr.accepted_steps, tr.rejected_steps),
        collect_samples(sample_every, &tr.times, &tr.states),
    ))
}

fn run_density(cfg: &TwoAtomConfig, w: (f64, f64), icfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<TransferResult> {
    let (p1, p2) = (cfg.pulse1, cfg.pulse2);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| rho25_raw(p1.eval(t), p2.eval(t), cfg.g, cfg.gamma, y, dy);
    let y0 = rho_from_amplitudes(&[1.0, 0.0, 0.0, 0.0, 0.0]);
    let (mut peak_bb, mut peak_exc) = (0.0f64, 0.0f64);
    let tr = integrate_observed(rhs, w.0, w.1, &y0, icfg, sample_every, |_, y| {
        peak_bb = peak_bb.max(y[rho_index(BB, BB)]);
        peak_exc = peak_exc.max(y[rho_index(CB, CB)] + y[rho_index(BC, BC)]);
    })?;
    let fin = tr.final_state();
    let pops: Vec<f64> = (0..5).map(|i| fin[rho_index(i, i)]).collect();
    let mut diag = BTreeMap::new();
    diag.insert("peak_bbbb_population".to_string(), peak_bb);
    diag.insert("peak_excited_population".to_string(), peak_exc);
    let drift = rho_trace(fin) - rho_trace(&y0);
    Ok(finish(
        cfg,
        w,
        1.0 - pops[BA],
        label_map(&AMP_LABELS, pops),
        drift,
        diag,
        (tr.accepted_steps, tr.rejected_steps),
        collect_samples(sample_every, &tr.times, &tr.states),
    ))
}

/// Integrates both subsystems side by side as one 5-vector `(B₁, B₂, B₃, A₁, A₂)`.
fn run_sym_anti(cfg: &TwoAtomConfig, w: (f64, f64), icfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<TransferResult> {
    let p = cfg.pulse1;
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let b = symmetric_rhs(&p, cfg.g, cfg.gamma, t, &[y[0], y[1], y[2]]);
        let a = antisymmetric_rhs(&p, cfg.gamma, t, &[y[3], y[4]]);
        dy[..3].copy_from_slice(&b);
        dy[3..].copy_from_slice(&a);
    };
    let s0 = decompose(&[1.0, 0.0, 0.0, 0.0, 0.0]);
    let y0 = [s0.b[0], s0.b[1], s0.b[2], s0.a[0], s0.a[1]];
    let (mut peak_bb, mut peak_exc) = (0.0f64, 0.0f64);
    let tr = integrate_observed(rhs, w.0, w.1, &y0, icfg, sample_every, |_, y| {
        let c = reconstruct(&SymAntiState { b: [y[0], y[1], y[2]], a: [y[3], y[4]] });
        peak_bb = peak_bb.max(c[BB] * c[BB]);
        peak_exc = peak_exc.max(c[CB] * c[CB] + c[BC] * c[BC]);
    })?;
    let y = tr.final_state();
    let c = reconstruct(&SymAntiState { b: [y[0], y[1], y[2]], a: [y[3], y[4]] });
    let pops: Vec<f64> = c.iter().map(|v| v * v).collect();
    let mut diag = BTreeMap::new();
    diag.insert("peak_bbbb_population".to_string(), peak_bb);
    diag.insert("peak_excited_population".to_string(), peak_exc);
    for (k, v) in ["b1", "b2", "b3", "a1", "a2"].iter().zip(y) {
        diag.insert(format!("final_{k}"), *v);
    }
    let drift = pops.iter().sum::<f64>() - 1.0;
    Ok(finish(
        cfg,
        w,
        1.0 - pops[BA],
        label_map(&AMP_LABELS, pops),
        drift,
        diag,
        (tr.accepted_steps, tr.rejected_steps),
        collect_samples(sample_every, &tr.times, &tr.states),
    ))
}
