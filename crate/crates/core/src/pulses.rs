//! Pulse envelopes and the pulse-pair quantities built from them: ratio,
//! asymptotic limits, mixing angle, nonadiabatic coupling and area.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Gaussian,
    Sech,
    Lorentzian,
    Constant,
    /// `Ω₀ sin((t − t_c)/T)`; the pump of the exactly solvable sin/cos pair.
    #[serde(rename = "sin")]
    SinWindow,
    /// `Ω₀ cos((t − t_c)/T)` on `|t − t_c| ≤ Tπ/2`, zero outside.
    #[serde(rename = "cos")]
    CosWindow,
}

/// Shapes that may be paired in the closed-form pair operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Gaussian,
    Sech,
    Lorentzian,
    Constant,
    SinCos,
}

impl Shape {
    pub fn family(self) -> Family {
        match self {
            Shape::Gaussian => Family::Gaussian,
            Shape::Sech => Family::Sech,
            Shape::Lorentzian => Family::Lorentzian,
            Shape::Constant => Family::Constant,
            Shape::SinWindow | Shape::CosWindow => Family::SinCos,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Shape::Gaussian => "gaussian",
            Shape::Sech => "sech",
            Shape::Lorentzian => "lorentzian",
            Shape::Constant => "constant",
            Shape::SinWindow => "sin",
            Shape::CosWindow => "cos",
        }
    }

    /// Envelopes that are strictly positive everywhere and have a closed-form log.
    fn is_log_smooth(self) -> bool {
        matches!(self, Shape::Gaussian | Shape::Sech | Shape::Lorentzian)
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "gauss" => Ok(Shape::Gaussian),
            "sech" => Ok(Shape::Sech),
            "lorentzian" | "lorentz" => Ok(Shape::Lorentzian),
            "constant" | "const" => Ok(Shape::Constant),
            "sin" | "sinwindow" | "sin-window" => Ok(Shape::SinWindow),
            "cos" | "coswindow" | "cos-window" => Ok(Shape::CosWindow),
            other => Err(Error::Parse(format!("unknown pulse shape '{other}'"))),
        }
    }
}

/// A Rabi-frequency envelope. For the sin/cos shapes `width` is the time scale `T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PulseSpec {
    pub shape: Shape,
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
}

impl PulseSpec {
    pub fn new(shape: Shape, amplitude: f64, width: f64, center: f64) -> Result<Self> {
        let p = PulseSpec { shape, amplitude, width, center };
        p.validate()?;
        Ok(p)
    }

    pub fn gaussian(amplitude: f64, width: f64, center: f64) -> Self {
        PulseSpec { shape: Shape::Gaussian, amplitude, width, center }
    }

    pub fn sech(amplitude: f64, width: f64, center: f64) -> Self {
        PulseSpec { shape: Shape::Sech, amplitude, width, center }
    }

    pub fn lorentzian(amplitude: f64, width: f64, center: f64) -> Self {
        PulseSpec { shape: Shape::Lorentzian, amplitude, width, center }
    }

    pub fn constant(amplitude: f64) -> Self {
        PulseSpec { shape: Shape::Constant, amplitude, width: 1.0, center: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(Error::Config(format!("pulse amplitude must be >= 0, got {}", self.amplitude)));
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::Config(format!("pulse width must be > 0, got {}", self.width)));
        }
        if !self.center.is_finite() {
            return Err(Error::Config("pulse center must be finite".into()));
        }
        Ok(())
    }

    /// Same pulse with a different center.
    pub fn at(self, center: f64) -> Self {
        PulseSpec { center, ..self }
    }

    pub fn scaled(self, factor: f64) -> Self {
        PulseSpec { amplitude: self.amplitude * factor, ..self }
    }

    fn x(&self, t: f64) -> f64 {
        (t - self.center) / self.width
    }

    pub fn eval(&self, t: f64) -> f64 {
        let a = self.amplitude;
        let x = self.x(t);
        match self.shape {
            Shape::Gaussian => a * (-0.5 * x * x).exp(),
            Shape::Sech => a / x.cosh(),
            Shape::Lorentzian => a / (1.0 + x * x),
            Shape::Constant => a,
            Shape::SinWindow => a * x.sin(),
            Shape::CosWindow => {
                if x.abs() <= FRAC_PI_2 {
                    a * x.cos()
                } else {
                    0.0
                }
            }
        }
    }

    /// Time derivative of the envelope.
    pub fn derivative(&self, t: f64) -> f64 {
        let a = self.amplitude;
        let s = self.width;
        let x = self.x(t);
        match self.shape {
            Shape::Gaussian => -a * x / s * (-0.5 * x * x).exp(),
            Shape::Sech => -a * x.tanh() / (s * x.cosh()),
            Shape::Lorentzian => {
                let d = 1.0 + x * x;
                -2.0 * a * x / (s * d * d)
            }
            Shape::Constant => 0.0,
            Shape::SinWindow => a * x.cos() / s,
            Shape::CosWindow => {
                if x.abs() <= FRAC_PI_2 {
                    -a * x.sin() / s
                } else {
                    0.0
                }
            }
        }
    }

    /// Natural log of the unit-amplitude envelope, finite far into the tails
    /// where `eval` underflows. Only used for Gaussian, Sech and Lorentzian shapes.
    fn log_shape(&self, t: f64) -> f64 {
        let x = self.x(t);
        match self.shape {
            Shape::Gaussian => -0.5 * x * x,
            Shape::Sech => {
                let ax = x.abs();
                LN_2 - ax - (-2.0 * ax).exp().ln_1p()
            }
            Shape::Lorentzian => -(x * x).ln_1p(),
            _ => (self.eval(t) / self.amplitude).ln(),
        }
    }

    /// d/dt of the log envelope.
    fn log_derivative(&self, t: f64) -> f64 {
        let s = self.width;
        let x = self.x(t);
        match self.shape {
            Shape::Gaussian => -x / s,
            Shape::Sech => -x.tanh() / s,
            Shape::Lorentzian => -2.0 * x / (s * (1.0 + x * x)),
            _ => self.derivative(t) / self.eval(t),
        }
    }

    fn antiderivative(&self, t: f64) -> f64 {
        let a = self.amplitude;
        let s = self.width;
        let x = self.x(t);
        match self.shape {
            Shape::Gaussian => a * s * (PI / 2.0).sqrt() * libm::erf(x / 2f64.sqrt()),
            Shape::Sech => a * s * 2.0 * (0.5 * x).tanh().atan(),
            Shape::Lorentzian => a * s * x.atan(),
            Shape::Constant => a * t,
            Shape::SinWindow => -a * s * x.cos(),
            Shape::CosWindow => a * s * x.clamp(-FRAC_PI_2, FRAC_PI_2).sin(),
        }
    }
}

impl fmt::Display for PulseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:amp={},width={},center={}", self.shape.name(), self.amplitude, self.width, self.center)
    }
}

impl FromStr for PulseSpec {
    type Err = Error;

    /// Parses `shape:amp=<f>,width=<f>,center=<f>`; `center` defaults to 0 and
    /// `width` may be omitted for constant pulses.
    fn from_str(s: &str) -> Result<Self> {
        let (shape, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("pulse '{s}' is missing 'shape:'")))?;
        let shape: Shape = shape.parse()?;
        let (mut amp, mut width, mut center) = (None, None, 0.0);
        for field in rest.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field.split_once('=').ok_or_else(|| Error::Parse(format!("pulse field '{field}' is not key=value")))?;
            let value: f64 = value.trim().parse().map_err(|_| Error::Parse(format!("pulse field '{field}' has a non-numeric value")))?;
            match key.trim().to_ascii_lowercase().as_str() {
                "amp" | "amplitude" => amp = Some(value),
                "width" | "sigma" => width = Some(value),
                "center" | "centre" => center = value,
                other => return Err(Error::Parse(format!("unknown pulse field '{other}'"))),
            }
        }
        let amplitude = amp.ok_or_else(|| Error::Parse(format!("pulse '{s}' has no amp")))?;
        let width = match (width, shape) {
            (Some(w), _) => w,
            (None, Shape::Constant) => 1.0,
            (None, _) => return Err(Error::Parse(format!("pulse '{s}' has no width"))),
        };
        PulseSpec::new(shape, amplitude, width, center)
    }
}

impl TryFrom<String> for PulseSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PulseSpec> for String {
    fn from(p: PulseSpec) -> String {
        p.to_string()
    }
}

/// Limit of `Ω₁/Ω₂` as t → ±∞.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Limit {
    Zero,
    FiniteConstant(f64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticClass {
    pub limit_neg: Limit,
    pub limit_pos: Limit,
}

fn same_family(p1: &PulseSpec, p2: &PulseSpec) -> Result<Family> {
    let (f1, f2) = (p1.shape.family(), p2.shape.family());
    if f1 != f2 {
        return Err(Error::UnsupportedPair(format!("{f1:?} paired with {f2:?}")));
    }
    Ok(f1)
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

fn limit_of(value: f64) -> Limit {
    if value == 0.0 {
        Limit::Zero
    } else if value.is_infinite() {
        Limit::Infinite
    } else {
        Limit::FiniteConstant(value)
    }
}

/// `Ω₁(t)/Ω₂(t)`. Smooth shapes are divided in log space so the ratio stays
/// defined after both envelopes underflow.
pub fn pulse_ratio(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<f64> {
    if p1.shape.is_log_smooth() && p2.shape.is_log_smooth() && p2.amplitude > 0.0 {
        if p1.amplitude == 0.0 {
            return Ok(0.0);
        }
        return Ok(p1.amplitude / p2.amplitude * (p1.log_shape(t) - p2.log_shape(t)).exp());
    }
    let den = p2.eval(t);
    if den == 0.0 {
        return Err(Error::DivisionByZero { t });
    }
    Ok(p1.eval(t) / den)
}

pub fn classify_asymptotics(p1: &PulseSpec, p2: &PulseSpec) -> Result<AsymptoticClass> {
    let family = same_family(p1, p2)?;
    let (a1, a2) = (p1.amplitude, p2.amplitude);
    let both = |l: Limit| AsymptoticClass { limit_neg: l, limit_pos: l };
    if a1 == 0.0 && a2 == 0.0 {
        return Err(Error::Degenerate("both pulse amplitudes are zero".into()));
    }
    if a1 == 0.0 {
        return Ok(both(Limit::Zero));
    }
    if a2 == 0.0 {
        return Ok(both(Limit::Infinite));
    }
    let (s1, s2) = (p1.width, p2.width);
    let dt = p1.center - p2.center;
    let class = match family {
        Family::Gaussian | Family::Sech if !nearly_equal(s1, s2) => both(if s1 > s2 { Limit::Infinite } else { Limit::Zero }),
        Family::Gaussian => {
            if dt > 0.0 {
                AsymptoticClass { limit_neg: Limit::Zero, limit_pos: Limit::Infinite }
            } else if dt < 0.0 {
                AsymptoticClass { limit_neg: Limit::Infinite, limit_pos: Limit::Zero }
            } else {
                both(limit_of(a1 / a2))
            }
        }
        Family::Sech => AsymptoticClass { limit_neg: limit_of(a1 / a2 * (-dt / s1).exp()), limit_pos: limit_of(a1 / a2 * (dt / s1).exp()) },
        Family::Lorentzian => both(limit_of(a1 * s1 * s1 / (a2 * s2 * s2))),
        Family::Constant => both(limit_of(a1 / a2)),
        Family::SinCos => return Err(Error::UnsupportedPair("sin/cos windows have no asymptotic regime".into())),
    };
    Ok(class)
}

/// `Φ = atan2(Ω₁, Ω₂)`.
pub fn mixing_angle(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<f64> {
    let (e1, e2) = (p1.eval(t), p2.eval(t));
    if e1 == 0.0 && e2 == 0.0 {
        if p1.shape.is_log_smooth() && p2.shape.is_log_smooth() && p1.amplitude > 0.0 && p2.amplitude > 0.0 {
            return Ok(pulse_ratio(p1, p2, t)?.atan());
        }
        return Err(Error::UndefinedAngle { t });
    }
    Ok(e1.atan2(e2))
}

/// `Φ̇ = (Ω̇₁Ω₂ − Ω₁Ω̇₂)/(Ω₁² + Ω₂²)` from the analytic envelope derivatives.
/// Mixed shape families are rejected; see [`mixing_rate`] for the fallback.
pub fn nonadiabatic_coupling(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<f64> {
    same_family(p1, p2)?;
    if p1.shape.is_log_smooth() && p1.amplitude > 0.0 && p2.amplitude > 0.0 {
        // (ℓ₁' − ℓ₂')·r/(1 + r²) with r = Ω₁/Ω₂; survives envelope underflow.
        let r = pulse_ratio(p1, p2, t)?;
        let w = if r.is_infinite() { 0.0 } else { r / (1.0 + r * r) };
        return Ok((p1.log_derivative(t) - p2.log_derivative(t)) * w);
    }
    let (e1, e2) = (p1.eval(t), p2.eval(t));
    let den = e1 * e1 + e2 * e2;
    if den == 0.0 {
        return Err(Error::UndefinedAngle { t });
    }
    Ok((p1.derivative(t) * e2 - e1 * p2.derivative(t)) / den)
}

/// Central finite difference of the mixing angle.
pub fn nonadiabatic_coupling_numeric(p1: &PulseSpec, p2: &PulseSpec, t: f64, h: f64) -> Result<f64> {
    Ok((mixing_angle(p1, p2, t + h)? - mixing_angle(p1, p2, t - h)?) / (2.0 * h))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixingRate {
    pub value: f64,
    /// Set when the pair had no closed form and the value is a finite difference.
    pub numeric: bool,
}

pub fn mixing_rate(p1: &PulseSpec, p2: &PulseSpec, t: f64) -> Result<MixingRate> {
    match nonadiabatic_coupling(p1, p2, t) {
        Ok(value) => Ok(MixingRate { value, numeric: false }),
        Err(Error::UnsupportedPair(_)) => {
            let h = 1e-6 * p1.width.min(p2.width);
            Ok(MixingRate { value: nonadiabatic_coupling_numeric(p1, p2, t, h)?, numeric: true })
        }
        Err(e) => Err(e),
    }
}

/// `∫ Ω dt` over `[t0, t1]`; infinite bounds are accepted.
pub fn pulse_area(p: &PulseSpec, t0: f64, t1: f64) -> f64 {
    p.antiderivative(t1) - p.antiderivative(t0)
}

/// Pulse area by adaptive Simpson quadrature on a finite interval.
pub fn pulse_area_quadrature(p: &PulseSpec, t0: f64, t1: f64, tol: f64) -> Result<f64> {
    adaptive_simpson(|t| p.eval(t), t0, t1, tol)
}

/// Window half-widths, in units of the widest pulse, beyond the extreme centers.
pub const GAUSSIAN_WINDOW_WIDTHS: f64 = 10.0;
pub const SECH_WINDOW_WIDTHS: f64 = 25.0;
/// Lorentzian windows start at `max(40σ, 20Δt)` and double until `log₁₀ p` settles.
pub const LORENTZIAN_BASE_WIDTHS: f64 = 40.0;
pub const LORENTZIAN_BASE_DELAYS: f64 = 20.0;
pub const WINDOW_SETTLE_LOG10: f64 = 0.01;
pub const MAX_WINDOW_DOUBLINGS: usize = 16;

/// How the integration window for a set of pulses is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowPlan {
    Fixed(f64, f64),
    /// Start at this window and double its half-width about the midpoint until converged.
    Doubling(f64, f64),
}

impl WindowPlan {
    pub fn initial(&self) -> (f64, f64) {
        match *self {
            WindowPlan::Fixed(a, b) | WindowPlan::Doubling(a, b) => (a, b),
        }
    }
}

pub fn doubled(window: (f64, f64)) -> (f64, f64) {
    let mid = 0.5 * (window.0 + window.1);
    let half = window.1 - window.0;
    (mid - half, mid + half)
}

/// Default window covering every pulse in `pulses` (zero-amplitude pulses still count).
pub fn window_plan(pulses: &[PulseSpec]) -> Result<WindowPlan> {
    if pulses.is_empty() {
        return Err(Error::Config("no pulses to size a window from".into()));
    }
    let lo_c = pulses.iter().map(|p| p.center).fold(f64::INFINITY, f64::min);
    let hi_c = pulses.iter().map(|p| p.center).fold(f64::NEG_INFINITY, f64::max);
    let max_w = pulses.iter().map(|p| p.width).fold(0.0, f64::max);
    let has = |s: Shape| pulses.iter().any(|p| p.shape == s);
    if has(Shape::Constant) {
        return Err(Error::Config("constant pulses need an explicit window".into()));
    }
    if has(Shape::SinWindow) || has(Shape::CosWindow) {
        let half = FRAC_PI_2 * max_w;
        return Ok(WindowPlan::Fixed(lo_c - half, hi_c + half));
    }
    if has(Shape::Lorentzian) {
        let half = (LORENTZIAN_BASE_WIDTHS * max_w).max(LORENTZIAN_BASE_DELAYS * (hi_c - lo_c));
        return Ok(WindowPlan::Doubling(lo_c - half, hi_c + half));
    }
    let k = if has(Shape::Sech) { SECH_WINDOW_WIDTHS } else { GAUSSIAN_WINDOW_WIDTHS };
    Ok(WindowPlan::Fixed(lo_c - k * max_w, hi_c + k * max_w))
}

/// Pulses whose envelope at either window edge exceeds `1e-6·amplitude`.
pub fn edge_warnings(pulses: &[(&str, PulseSpec)], window: (f64, f64)) -> Vec<String> {
    let mut out = Vec::new();
    for (name, p) in pulses {
        if matches!(p.shape, Shape::Constant | Shape::SinWindow) || p.amplitude == 0.0 {
            continue;
        }
        let edge = p.eval(window.0).abs().max(p.eval(window.1).abs());
        if edge > 1e-6 * p.amplitude {
            out.push(format!("pulse {name} is {:.2e} of its peak at the window edge", edge / p.amplitude));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_and_half_values() {
        assert_eq!(PulseSpec::gaussian(2.0, 1.0, 0.0).eval(0.0), 2.0);
        assert_eq!(PulseSpec::lorentzian(1.0, 1.0, 0.0).eval(1.0), 0.5);
        assert_eq!(PulseSpec::sech(1.0, 2.0, 3.0).eval(3.0), 1.0);
    }

    #[test]
    fn cos_window_is_zero_outside() {
        let p = PulseSpec::new(Shape::CosWindow, 1.0, 1.0, 0.0).unwrap();
        assert_eq!(p.eval(2.0), 0.0);
        assert!((p.eval(1.0) - 1f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn mixing_angle_cases() {
        let p = PulseSpec::gaussian(1.0, 1.0, 0.0);
        assert!((mixing_angle(&p, &p, 0.3).unwrap() - PI / 4.0).abs() < 1e-15);
        let zero = PulseSpec::gaussian(0.0, 1.0, 0.0);
        assert_eq!(mixing_angle(&zero, &p, 0.0).unwrap(), 0.0);
        assert!(matches!(mixing_angle(&zero, &zero, 0.0), Err(Error::UndefinedAngle { .. })));
        let delayed = PulseSpec::gaussian(1.0, 1.0, 1.0);
        let far = mixing_angle(&delayed, &p, 200.0).unwrap();
        assert!((far - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn coupling_of_equal_gaussians_at_midpoint() {
        let p1 = PulseSpec::gaussian(1.0, 1.0, 1.0);
        let p2 = PulseSpec::gaussian(1.0, 1.0, 0.0);
        let v = nonadiabatic_coupling(&p1, &p2, 0.5).unwrap();
        let fd = nonadiabatic_coupling_numeric(&p1, &p2, 0.5, 1e-6).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        assert!((v - fd).abs() < 1e-8);
    }

    #[test]
    fn coupling_of_sech_pair_matches_finite_difference() {
        let p1 = PulseSpec::sech(1.0, 1.0, 2.0);
        let p2 = PulseSpec::sech(1.0, 1.0, 0.0);
        let v = nonadiabatic_coupling(&p1, &p2, 1.0).unwrap();
        let fd = nonadiabatic_coupling_numeric(&p1, &p2, 1.0, 1e-6).unwrap();
        assert!((v - fd).abs() < 1e-8, "{v} vs {fd}");
    }

    #[test]
    fn coupling_vanishes_for_identical_pulses() {
        let p = PulseSpec::lorentzian(2.0, 0.7, 0.4);
        for t in [-3.0, 0.0, 0.4, 5.0] {
            assert_eq!(nonadiabatic_coupling(&p, &p, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn mixed_families_fall_back_to_finite_difference() {
        let p1 = PulseSpec::gaussian(1.0, 1.0, 1.0);
        let p2 = PulseSpec::sech(1.0, 1.0, 0.0);
        assert!(matches!(nonadiabatic_coupling(&p1, &p2, 0.2), Err(Error::UnsupportedPair(_))));
        let r = mixing_rate(&p1, &p2, 0.2).unwrap();
        assert!(r.numeric);
        assert!(r.value.is_finite());
    }

    #[test]
    fn ratio_cases() {
        let p = PulseSpec::sech(1.3, 0.8, 0.0);
        assert!((pulse_ratio(&p, &p, 0.7).unwrap() - 1.0).abs() < 1e-15);
        let g1 = PulseSpec::gaussian(1.0, 1.0, 2.0);
        let g2 = PulseSpec::gaussian(1.0, 1.0, 0.0);
        assert!((pulse_ratio(&g1, &g2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let l1 = PulseSpec::lorentzian(3.0, 1.0, 5.0);
        let l2 = PulseSpec::lorentzian(1.5, 1.0, 0.0);
        assert!((pulse_ratio(&l1, &l2, 1e7).unwrap() - 2.0).abs() < 1e-5);
        let c = PulseSpec::new(Shape::CosWindow, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(pulse_ratio(&p, &c, 5.0), Err(Error::DivisionByZero { .. })));
    }

    #[test]
    fn asymptotic_examples() {
        let c = classify_asymptotics(&PulseSpec::gaussian(1.0, 1.0, 1.0), &PulseSpec::gaussian(1.0, 1.0, 0.0)).unwrap();
        assert_eq!(c, AsymptoticClass { limit_neg: Limit::Zero, limit_pos: Limit::Infinite });

        let c = classify_asymptotics(&PulseSpec::sech(1.0, 1.0, 1.0), &PulseSpec::sech(1.0, 1.0, 0.0)).unwrap();
        match (c.limit_neg, c.limit_pos) {
            (Limit::FiniteConstant(a), Limit::FiniteConstant(b)) => {
                assert!((a - (-1f64).exp()).abs() < 1e-15);
                assert!((b - 1f64.exp()).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }

        let c = classify_asymptotics(&PulseSpec::lorentzian(1.0, 1.0, 4.0), &PulseSpec::lorentzian(1.0, 1.0, 0.0)).unwrap();
        assert_eq!(c.limit_neg, Limit::FiniteConstant(1.0));
        assert_eq!(c.limit_pos, Limit::FiniteConstant(1.0));

        assert!(classify_asymptotics(&PulseSpec::gaussian(1.0, 1.0, 0.0), &PulseSpec::sech(1.0, 1.0, 0.0)).is_err());
    }

    #[test]
    fn areas() {
        assert!((pulse_area(&PulseSpec::sech(1.0, 1.0, 0.0), f64::NEG_INFINITY, f64::INFINITY) - PI).abs() < 1e-14);
        let g = pulse_area(&PulseSpec::gaussian(1.0, 1.0, 0.0), f64::NEG_INFINITY, f64::INFINITY);
        assert!((g - (2.0 * PI).sqrt()).abs() < 1e-14);
        assert_eq!(pulse_area(&PulseSpec::constant(1.0), 0.0, PI), PI);
        let l = pulse_area(&PulseSpec::lorentzian(2.0, 0.5, 1.0), f64::NEG_INFINITY, f64::INFINITY);
        assert!((l - PI).abs() < 1e-14);
    }

    #[test]
    fn parse_round_trip() {
        let p: PulseSpec = "Gaussian:amp=2.0,width=1.0,center=0.5".parse().unwrap();
        assert_eq!(p, PulseSpec::gaussian(2.0, 1.0, 0.5));
        let q: PulseSpec = p.to_string().parse().unwrap();
        assert_eq!(p, q);
        let s: PulseSpec = "SECH:AMP=1,WIDTH=2".parse().unwrap();
        assert_eq!(s.center, 0.0);
        let c: PulseSpec = "constant:amp=3".parse().unwrap();
        assert_eq!(c.eval(100.0), 3.0);
        assert!("gaussian:amp=1".parse::<PulseSpec>().is_err());
        assert!("gaussian:amp=-1,width=1".parse::<PulseSpec>().is_err());
        assert!("triangle:amp=1,width=1".parse::<PulseSpec>().is_err());
        assert!("gaussian:amp=x,width=1".parse::<PulseSpec>().is_err());
    }

    #[test]
    fn windows() {
        let plan = window_plan(&[PulseSpec::gaussian(1.0, 2.0, 3.0), PulseSpec::gaussian(1.0, 1.0, 0.0)]).unwrap();
        assert_eq!(plan, WindowPlan::Fixed(-20.0, 23.0));
        let plan = window_plan(&[PulseSpec::lorentzian(1.0, 0.5, 2.0), PulseSpec::lorentzian(1.0, 0.1, 0.0)]).unwrap();
        assert_eq!(plan, WindowPlan::Doubling(-40.0, 42.0));
        assert_eq!(doubled((-1.0, 3.0)), (-3.0, 5.0));
        assert!(window_plan(&[PulseSpec::constant(1.0)]).is_err());
    }
}
