//! Linearized model of nonadiabatic failure for resonant three-level passage.
//!
//! With real amplitudes `C = (sinθ cosφ, sinθ sinφ, cosθ)` the adiabatic path is
//! `θ = π/2, φ = −Φ(t)`. Small deviations `(δθ, δφ)` obey a unit-frequency forced
//! oscillator in the rescaled time `τ = ∫Ω/2 dt`, driven by `Φ̇`. The window
//! edges stand in for ±∞.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pulses::{
    doubled, mixing_angle, mixing_rate, window_plan, PulseSpec, Shape, WindowPlan, MAX_WINDOW_DOUBLINGS, WINDOW_SETTLE_LOG10,
};
use crate::quadrature::{adaptive_simpson, adaptive_simpson_panels};
use crate::transfer::log10_failure;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleState {
    pub theta: f64,
    pub phi: f64,
}

/// `θ ∈ [0, π]`, `φ ∈ (−π, π]`.
pub fn to_spherical(c: [f64; 3]) -> Result<AngleState> {
    let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::Degenerate(format!("amplitude vector has norm {n}, expected 1")));
    }
    let s = c[0].hypot(c[1]);
    let theta = s.atan2(c[2]);
    if s <= 1e-15 {
        return Err(Error::AzimuthUndefined);
    }
    let mut phi = c[1].atan2(c[0]);
    if phi == -PI {
        phi = PI;
    }
    Ok(AngleState { theta, phi })
}

pub fn from_spherical(a: &AngleState) -> [f64; 3] {
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Exact angle equations; returns `(θ̇, φ̇)` packed as an [`AngleState`].
pub fn angle_rhs(om: f64, mix: f64, a: &AngleState) -> Result<AngleState> {
    let st = a.theta.sin();
    if st.abs() < 1e-300 {
        return Err(Error::SingularAngle { theta: a.theta });
    }
    let psi = a.phi + mix;
    let tan_shift = -a.theta.cos() / st;
    Ok(AngleState { theta: -0.5 * om * psi.sin(), phi: 0.5 * tan_shift * om * psi.cos() })
}

/// Quadrature tolerances: absolute on the inner phase and on the outer integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureTolerance {
    pub inner: f64,
    pub outer: f64,
}

impl Default for QuadratureTolerance {
    fn default() -> Self {
        QuadratureTolerance { inner: 1e-10, outer: 1e-9 }
    }
}

fn total_rabi(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> f64 {
    p1.eval(t).hypot(p2.eval(t))
}

/// `τ(t) = ∫_{t0}^{t} Ω/2 dt'` with `Ω = √(Ω₁² + Ω₂²)`.
pub fn rescaled_time(p1: &PulseSpec, p2: &PulseSpec, t0: f64, t: f64) -> Result<f64> {
    if t == t0 {
        return Ok(0.0);
    }
    adaptive_simpson(|s| 0.5 * total_rabi(p1, p2, s), t0, t, QuadratureTolerance::default().inner)
}

/// `τ(t)` on a fixed window, from stored checkpoints plus one short quadrature.
struct PhaseClock<'a> {
    p1: &'a PulseSpec,
    p2: &'a PulseSpec,
    t0: f64,
    dt: f64,
    tau: Vec<f64>,
    tol: f64,
}

impl<'a> PhaseClock<'a> {
    const CHECKPOINTS: usize = 256;

    fn new(p1: &'a PulseSpec, p2: &'a PulseSpec, window: (f64, f64), tol: f64) -> Result<Self> {
        let n = Self::CHECKPOINTS;
        let dt = (window.1 - window.0) / n as f64;
        let mut tau = Vec::with_capacity(n + 1);
        tau.push(0.0);
        let mut acc = 0.0;
        for k in 0..n {
            let a = window.0 + k as f64 * dt;
            acc += adaptive_simpson(|s| 0.5 * total_rabi(p1, p2, s), a, a + dt, tol / n as f64)?;
            tau.push(acc);
        }
        Ok(PhaseClock { p1, p2, t0: window.0, dt, tau, tol })
    }

    fn at(&self, t: f64) -> Result<f64> {
        let k = (((t - self.t0) / self.dt).floor().max(0.0) as usize).min(Self::CHECKPOINTS - 1);
        let a = self.t0 + k as f64 * self.dt;
        if t == a {
            return Ok(self.tau[k]);
        }
        let (p1, p2) = (self.p1, self.p2);
        Ok(self.tau[k] + adaptive_simpson(|s| 0.5 * total_rabi(p1, p2, s), a, t, self.tol)?)
    }

    fn end(&self) -> f64 {
        self.tau[Self::CHECKPOINTS]
    }
}

fn outer_panels(tau_total: f64) -> usize {
    (8.0 * (tau_total / PI).ceil()).clamp(64.0, 1e5) as usize
}

fn resolve_window(p1: &PulseSpec, p2: &PulseSpec, window: Option<(f64, f64)>) -> Result<(f64, f64)> {
    match window {
        Some(w) => Ok(w),
        None => Ok(window_plan(&[*p1, *p2])?.initial()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DeviationPair {
    pub dtheta: f64,
    pub dphi: f64,
    /// Set when either deviation exceeds 0.3 rad, outside the small-angle regime.
    pub large: bool,
}

impl DeviationPair {
    pub fn new(dtheta: f64, dphi: f64) -> Self {
        DeviationPair { dtheta, dphi, large: dtheta.abs() > 0.3 || dphi.abs() > 0.3 }
    }

    pub fn magnitude_sqr(&self) -> f64 {
        self.dtheta * self.dtheta + self.dphi * self.dphi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinearizedDeviations {
    /// Free oscillation seeded by the initial offset `Φ(t0)`.
    pub coherent: DeviationPair,
    /// Response to the `Φ̇` forcing.
    pub correction: DeviationPair,
    pub total: DeviationPair,
    pub phi_start: f64,
    pub tau_end: f64,
}

/// Both terms of the linearized solution at the window end, with initial data
/// `δθ(t0) = 0`, `δφ(t0) = Φ(t0)`.
pub fn linearized_deviations(
    p1: &PulseSpec,
    p2: &PulseSpec,
    window: Option<(f64, f64)>,
    tol: QuadratureTolerance,
) -> Result<LinearizedDeviations> {
    let w = resolve_window(p1, p2, window)?;
    let clock = PhaseClock::new(p1, p2, w, tol.inner)?;
    let tau_end = clock.end();
    let phi0 = mixing_angle(p1, p2, w.0)?;
    let panels = outer_panels(tau_end);
    let mut failure = None;
    let mut kernel = |t: f64, use_cos: bool| -> f64 {
        let step = clock.at(t).and_then(|tau| Ok((tau, mixing_rate(p1, p2, t)?.value)));
        match step {
            Ok((tau, rate)) => {
                let arg = tau_end - tau;
                rate * if use_cos { arg.cos() } else { arg.sin() }
            }
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let ic = adaptive_simpson_panels(|t| kernel(t, true), w.0, w.1, panels, tol.outer)?;
    let is = adaptive_simpson_panels(|t| kernel(t, false), w.0, w.1, panels, tol.outer)?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (s, c) = tau_end.sin_cos();
    let coherent = DeviationPair::new(-phi0 * s, phi0 * c);
    let correction = DeviationPair::new(-is, ic);
    let total = DeviationPair::new(coherent.dtheta + correction.dtheta, coherent.dphi + correction.dphi);
    Ok(LinearizedDeviations { coherent, correction, total, phi_start: phi0, tau_end })
}

/// Right-hand side of the linearized equations for `y = (δφ, δθ)`:
/// `δφ̇ = Φ̇ + (Ω/2)δθ`, `δθ̇ = −(Ω/2)δφ`.
pub fn linear_system_rhs(p1: &PulseSpec, p2: &PulseSpec, t: f64, y: &[f64; 2]) -> Result<[f64; 2]> {
    let h = 0.5 * total_rabi(p1, p2, t);
    let rate = mixing_rate(p1, p2, t)?.value;
    Ok([rate + h * y[1], -h * y[0]])
}

/// `|∫ exp(−iτ(t)) Φ̇(t) dt|²` over `window`; the phase reference at the window
/// end only contributes a unit-modulus factor.
pub fn failure_integral_on(p1: &PulseSpec, p2: &PulseSpec, window: (f64, f64), tol: QuadratureTolerance) -> Result<f64> {
    let clock = PhaseClock::new(p1, p2, window, tol.inner)?;
    let panels = outer_panels(clock.end());
    let mut failure = None;
    let k = adaptive_simpson_panels(
        |t| match clock.at(t).and_then(|tau| Ok((tau, mixing_rate(p1, p2, t)?.value))) {
            Ok((tau, rate)) => Complex64::from_polar(rate, -tau),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        window.0,
        window.1,
        panels,
        tol.outer,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(k.norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FailureReport {
    pub p: f64,
    pub window: [f64; 2],
    /// `|p(2W) − p(W)|` for the reported window `W`; absent for the finite sin/cos pair.
    pub window_doubled_delta: Option<f64>,
}

/// Failure integral on the default (or given) window with a window-doubling check.
pub fn failure_integral(p1: &PulseSpec, p2: &PulseSpec, window: Option<(f64, f64)>) -> Result<FailureReport> {
    let tol = QuadratureTolerance::default();
    let finite_support = |p: &PulseSpec| matches!(p.shape, Shape::SinWindow | Shape::CosWindow);
    let plan = match window {
        Some((a, b)) => WindowPlan::Fixed(a, b),
        None => window_plan(&[*p1, *p2])?,
    };
    let mut w = plan.initial();
    let mut p = failure_integral_on(p1, p2, w, tol)?;
    if finite_support(p1) || finite_support(p2) {
        return Ok(FailureReport { p, window: [w.0, w.1], window_doubled_delta: None });
    }
    let rounds = if matches!(plan, WindowPlan::Doubling(..)) { MAX_WINDOW_DOUBLINGS } else { 1 };
    for round in 0..rounds {
        let w2 = doubled(w);
        let p2v = failure_integral_on(p1, p2, w2, tol)?;
        let delta = (p2v - p).abs();
        let settled = (log10_failure(p2v) - log10_failure(p)).abs() < WINDOW_SETTLE_LOG10;
        if rounds == 1 {
            return Ok(FailureReport { p, window: [w.0, w.1], window_doubled_delta: Some(delta) });
        }
        if settled || round + 1 == rounds {
            return Ok(FailureReport { p: p2v, window: [w2.0, w2.1], window_doubled_delta: Some(delta) });
        }
        w = w2;
        p = p2v;
    }
    unreachable!("loop returns on its last round")
}

/// Closed form of the failure integral for the sin/cos pair: `16 sin²(πx/4)/x²`, `x = Ω₀T`.
pub fn analytic_example_p(x: f64) -> f64 {
    let s = (PI * x / 4.0).sin();
    16.0 * s * s / (x * x)
}

/// The sin/cos pair with `Ω₀T = x`, `T = 1`, and its natural window `[−π/2, π/2]`.
pub fn sincos_pair(x: f64) -> (PulseSpec, PulseSpec, (f64, f64)) {
    let p1 = PulseSpec { shape: Shape::SinWindow, amplitude: x, width: 1.0, center: 0.0 };
    let p2 = PulseSpec { shape: Shape::CosWindow, amplitude: x, width: 1.0, center: 0.0 };
    (p1, p2, (-FRAC_PI_2, FRAC_PI_2))
}

/// Exact `1 − C_b²` for the sin/cos pair when the atom starts in the dark state.
/// In the frame rotating with the mixing angle the generator is constant, so the
/// dark-state amplitude after the pulse is `(x²/4 + cos(πλ))/λ²`, `λ = √(1 + x²/4)`.
pub fn sincos_exact_dark_start_p(x: f64) -> f64 {
    let l2 = 1.0 + 0.25 * x * x;
    let d = (0.25 * x * x + (PI * l2.sqrt()).cos()) / l2;
    1.0 - d * d
}

/// Retarded Green's function of `m ẍ + b ẋ + k x = F` (underdamped branch only).
pub fn green_function(m: f64, b: f64, k: f64, t: f64, tp: f64) -> Result<f64> {
    if !(m > 0.0 && k > 0.0 && b >= 0.0) {
        return Err(Error::Config("oscillator needs m > 0, k > 0, b >= 0".into()));
    }
    let gamma = b / (2.0 * m);
    let w2 = k / m - gamma * gamma;
    if w2 <= 0.0 {
        return Err(Error::Config("only the underdamped oscillator is supported".into()));
    }
    if t < tp {
        return Ok(0.0);
    }
    let w1 = w2.sqrt();
    let s = t - tp;
    Ok((-gamma * s).exp() * (w1 * s).sin() / (m * w1))
}

/// `x(t) = ∫_{t0}^{t} G(t, t′) F(t′) dt′`, the response from rest at `t0`.
pub fn driven_response<F>(m: f64, b: f64, k: f64, forcing: F, t0: f64, t: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    green_function(m, b, k, t, t0)?;
    let panels = (((t - t0) * (k / m).sqrt() / PI).ceil() as usize * 8).max(16);
    adaptive_simpson_panels(|s| green_function(m, b, k, t, s).unwrap_or(0.0) * forcing(s), t0, t, panels, tol)
}

/// Convolution terms of the linearized solution written directly in rescaled
/// time: `δφ = ∫ cos(τ−τ′) Φ′(τ′) dτ′`, `δθ = −∫ sin(τ−τ′) Φ′(τ′) dτ′`.
pub fn convolution_terms<F>(dphi_dtau: F, tau0: f64, tau: f64, tol: f64) -> Result<DeviationPair>
where
    F: Fn(f64) -> f64,
{
    let panels = (((tau - tau0) / PI).ceil() as usize * 8).max(16);
    let c = adaptive_simpson_panels(|s| (tau - s).cos() * dphi_dtau(s), tau0, tau, panels, tol)?;
    let s = adaptive_simpson_panels(|s| (tau - s).sin() * dphi_dtau(s), tau0, tau, panels, tol)?;
    Ok(DeviationPair::new(-s, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spherical_examples() {
        let a = to_spherical([1.0, 0.0, 0.0]).unwrap();
        assert_eq!((a.theta, a.phi), (FRAC_PI_2, 0.0));
        let a = to_spherical([0.0, -1.0, 0.0]).unwrap();
        assert_eq!((a.theta, a.phi), (FRAC_PI_2, -FRAC_PI_2));
        assert!(matches!(to_spherical([0.0, 0.0, 1.0]), Err(Error::AzimuthUndefined)));
        let c = [0.48, -0.6, 0.64];
        let back = from_spherical(&to_spherical(c).unwrap());
        for i in 0..3 {
            assert!((back[i] - c[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn angle_rhs_examples() {
        let d = angle_rhs(3.0, 0.4, &AngleState { theta: FRAC_PI_2, phi: -0.4 }).unwrap();
        assert!(d.theta.abs() < 1e-15 && d.phi.abs() < 1e-15);
        let d = angle_rhs(2.0, 0.5, &AngleState { theta: FRAC_PI_2, phi: FRAC_PI_2 - 0.5 }).unwrap();
        assert!((d.theta + 1.0).abs() < 1e-15 && d.phi.abs() < 1e-15);
        assert!(angle_rhs(1.0, 0.0, &AngleState { theta: 0.0, phi: 0.0 }).is_err());
    }

    #[test]
    fn rescaled_time_examples() {
        let c = PulseSpec::constant(3.0);
        let z = PulseSpec::constant(0.0);
        assert_eq!(rescaled_time(&c, &z, 1.0, 1.0).unwrap(), 0.0);
        assert!((rescaled_time(&c, &z, 0.0, 2.0).unwrap() - 3.0).abs() < 1e-12);
        for n in 1..4 {
            let (p1, p2, w) = sincos_pair(4.0 * n as f64);
            let tau = rescaled_time(&p1, &p2, w.0, w.1).unwrap();
            assert!((tau - 2.0 * PI * n as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(analytic_example_p(4.0) < 1e-30);
        assert!(analytic_example_p(8.0) < 1e-30);
        assert!((analytic_example_p(6.0) - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn proportional_pulses_never_fail() {
        let p1 = PulseSpec::gaussian(2.0, 1.0, 0.0);
        let p2 = PulseSpec::gaussian(5.0, 1.0, 0.0);
        let d = linearized_deviations(&p1, &p2, Some((-8.0, 8.0)), QuadratureTolerance::default()).unwrap();
        assert_eq!(d.correction.magnitude_sqr(), 0.0);
        assert_eq!(failure_integral_on(&p1, &p2, (-8.0, 8.0), QuadratureTolerance::default()).unwrap(), 0.0);
    }

    #[test]
    fn sincos_failure_integral_matches_closed_form() {
        for x in [0.5, 3.0, 6.0, 13.5] {
            let (p1, p2, w) = sincos_pair(x);
            let r = failure_integral(&p1, &p2, Some(w)).unwrap();
            let exact = analytic_example_p(x);
            assert!((r.p - exact).abs() <= 1e-8 * exact, "x = {x}: {} vs {exact}", r.p);
        }
    }

    #[test]
    fn sincos_correction_vanishes_at_zeros() {
        let (p1, p2, w) = sincos_pair(4.0);
        let d = linearized_deviations(&p1, &p2, Some(w), QuadratureTolerance::default()).unwrap();
        assert!(d.correction.magnitude_sqr() < 1e-6);
        assert!((d.phi_start + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn green_function_undamped_is_sine() {
        assert!((green_function(1.0, 0.0, 1.0, 2.0, 0.5).unwrap() - 1.5f64.sin()).abs() < 1e-15);
        assert_eq!(green_function(1.0, 0.0, 1.0, 0.0, 0.5).unwrap(), 0.0);
        assert!(green_function(1.0, 3.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn dark_start_exact_values() {
        assert!((sincos_exact_dark_start_p(4.0) - 0.1023).abs() < 1e-3);
    }
}
