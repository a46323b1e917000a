//! Test-side oracles: a fixed-step RK4 integrator, closed forms derived by
//! hand, and seeded random configuration generators.
#![allow(dead_code)]

use std::f64::consts::PI;

use qtransfer_core::pulses::{PulseSpec, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Classical fourth-order Runge-Kutta with a fixed step; the last step is shortened to land on `t1`.
pub fn rk4<F>(mut rhs: F, t0: f64, t1: f64, y0: &[f64], h: f64) -> Vec<f64>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let steps = ((t1 - t0) / h).ceil() as usize;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let dt = h.min(t1 - t);
        rhs(t, &y, &mut k1);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * dt * k1[j];
        }
        rhs(t + 0.5 * dt, &tmp, &mut k2);
        for j in 0..n {
            tmp[j] = y[j] + 0.5 * dt * k2[j];
        }
        rhs(t + 0.5 * dt, &tmp, &mut k3);
        for j in 0..n {
            tmp[j] = y[j] + dt * k3[j];
        }
        rhs(t + dt, &tmp, &mut k4);
        for j in 0..n {
            y[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `|∫_0^π exp(−i x s/2) ds|²` worked out by hand.
pub fn sincos_failure_closed_form(x: f64) -> f64 {
    let s = (PI * x / 4.0).sin();
    16.0 * s * s / (x * x)
}

/// Three-level amplitudes `[Re a, Im a, Re b, Im b, Re c, Im c]` under
/// `iĊa = Ω₁/2 Cc`, `iĊb = Ω₂/2 Cc`, `iĊc = Ω₁/2 Ca + Ω₂/2 Cb`.
pub fn resonant_lambda_rhs(o1: f64, o2: f64, y: &[f64], dy: &mut [f64]) {
    let (h1, h2) = (0.5 * o1, 0.5 * o2);
    // −i·z maps (re, im) to (im, −re)
    let (cr, ci) = (y[4], y[5]);
    dy[0] = h1 * ci;
    dy[1] = -h1 * cr;
    dy[2] = h2 * ci;
    dy[3] = -h2 * cr;
    let (sr, si) = (h1 * y[0] + h2 * y[2], h1 * y[1] + h2 * y[3]);
    dy[4] = si;
    dy[5] = -sr;
}

/// `1 − |C_b|²` after the sin/cos pair (`Ω₀T = x`, `T = 1`) from the given start, by RK4.
pub fn sincos_lambda_p(x: f64, start: [f64; 3], h: f64) -> f64 {
    let y0 = [start[0], 0.0, start[1], 0.0, start[2], 0.0];
    let y = rk4(|t, y, dy| resonant_lambda_rhs(x * t.sin(), x * t.cos(), y, dy), -PI / 2.0, PI / 2.0, &y0, h);
    1.0 - (y[2] * y[2] + y[3] * y[3])
}

pub fn gaussian(a: f64, s: f64, c: f64) -> PulseSpec {
    PulseSpec { shape: Shape::Gaussian, amplitude: a, width: s, center: c }
}

pub fn random_shape(r: &mut ChaCha8Rng) -> Shape {
    [Shape::Gaussian, Shape::Sech, Shape::Lorentzian][r.gen_range(0..3)]
}

/// Pump at `delay`, Stokes at 0, same random smooth shape.
pub fn random_pair(r: &mut ChaCha8Rng, amp: (f64, f64), width: (f64, f64), delay: (f64, f64)) -> (PulseSpec, PulseSpec) {
    let shape = random_shape(r);
    let d = r.gen_range(delay.0..delay.1);
    let p1 = PulseSpec { shape, amplitude: r.gen_range(amp.0..amp.1), width: r.gen_range(width.0..width.1), center: d };
    let p2 = PulseSpec { shape, amplitude: r.gen_range(amp.0..amp.1), width: r.gen_range(width.0..width.1), center: 0.0 };
    (p1, p2)
}

/// Short window covering both pulses, for the fixed-step comparisons.
pub fn short_window(p1: &PulseSpec, p2: &PulseSpec) -> (f64, f64) {
    let w = p1.width.max(p2.width) * 5.0;
    (p1.center.min(p2.center) - w, p1.center.max(p2.center) + w)
}
