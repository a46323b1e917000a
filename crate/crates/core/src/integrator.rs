//! Dormand–Prince 5(4) embedded Runge–Kutta with elementary step-size control.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub h0: f64,
    pub h_min: f64,
    /// `None` means a tenth of the integration span.
    pub h_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { rtol: 1e-8, atol: 1e-10, h0: 1e-3, h_min: 1e-12, h_max: None, max_steps: 5_000_000 }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        IntegratorConfig { rtol, atol, ..Default::default() }
    }

    /// Checks the invariants and returns the effective `h_max` for a span.
    pub fn resolve(&self, span: f64) -> Result<f64> {
        let h_max = self.h_max.unwrap_or(span / 10.0);
        let bad = |m: &str| Err(Error::Config(format!("integrator: {m}")));
        if !(self.rtol > 0.0 && self.rtol <= 1e-2) {
            return bad("rtol must lie in (0, 1e-2]");
        }
        if !(self.atol > 0.0) {
            return bad("atol must be > 0");
        }
        if !(self.h_min > 0.0 && self.h_min <= h_max) {
            return bad("need 0 < h_min <= h_max");
        }
        if !(self.h0 > 0.0) {
            return bad("h0 must be > 0");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be > 0");
        }
        Ok(h_max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory holds at least t0")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t0")
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B5: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
// Fifth-order minus fourth-order weights.
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// Stage storage for one system size. `k[0]` holds the derivative at the
/// current point; after a step `k[6]` holds it at the new point (FSAL).
struct Stepper {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_next: Vec<f64>,
}

impl Stepper {
    fn new(n: usize) -> Self {
        Stepper { k: std::array::from_fn(|_| vec![0.0; n]), tmp: vec![0.0; n], y_next: vec![0.0; n] }
    }

    fn eval<F>(rhs: &mut F, t: f64, y: &[f64], out: &mut [f64]) -> Result<()>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        rhs(t, y, out);
        if out.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::NumericalBlowup { t })
        }
    }

    /// Advances from `(t, y)` with `k[0]` already filled; returns the error norm.
    #[allow(clippy::needless_range_loop)]
    fn step<F>(&mut self, rhs: &mut F, t: f64, y: &[f64], h: f64, rtol: f64, atol: f64) -> Result<f64>
    where
        F: FnMut(f64, &[f64], &mut [f64]),
    {
        let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
        for (s, row) in rows.iter().enumerate() {
            let stage = s + 1;
            for i in 0..y.len() {
                let mut acc = 0.0;
                for (j, a) in row.iter().enumerate() {
                    acc += a * self.k[j][i];
                }
                self.tmp[i] = y[i] + h * acc;
            }
            Self::eval(rhs, t + C[stage] * h, &self.tmp, &mut self.k[stage])?;
        }
        for i in 0..y.len() {
            let mut acc = 0.0;
            for (j, b) in B5.iter().enumerate() {
                acc += b * self.k[j][i];
            }
            self.y_next[i] = y[i] + h * acc;
        }
        if !self.y_next.iter().all(|v| v.is_finite()) {
            return Err(Error::NumericalBlowup { t: t + h });
        }
        Self::eval(rhs, t + h, &self.y_next, &mut self.k[6])?;
        let mut sum = 0.0;
        for i in 0..y.len() {
            let mut e = 0.0;
            for (j, w) in E.iter().enumerate() {
                e += w * self.k[j][i];
            }
            let scale = atol + rtol * y[i].abs().max(self.y_next[i].abs());
            let r = h * e / scale;
            sum += r * r;
        }
        Ok(if y.is_empty() { 0.0 } else { (sum / y.len() as f64).sqrt() })
    }
}

/// One Dormand–Prince step of size `h`: the fifth-order solution and the
/// weighted RMS norm of the embedded error estimate.
pub fn step_embedded<F>(mut rhs: F, t: f64, y: &[f64], h: f64, cfg: &IntegratorConfig) -> Result<(Vec<f64>, f64)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let mut st = Stepper::new(y.len());
    Stepper::eval(&mut rhs, t, y, &mut st.k[0])?;
    let err = st.step(&mut rhs, t, y, h, cfg.rtol, cfg.atol)?;
    Ok((st.y_next, err))
}

pub fn integrate<F>(rhs: F, t0: f64, t1: f64, y0: &[f64], cfg: &IntegratorConfig, sample_every: Option<f64>) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    integrate_observed(rhs, t0, t1, y0, cfg, sample_every, |_, _| {})
}

/// As [`integrate`], also calling `observer` at `t0` and after every accepted step.
pub fn integrate_observed<F, O>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: &[f64],
    cfg: &IntegratorConfig,
    sample_every: Option<f64>,
    mut observer: O,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    if !(t0 < t1) || !t0.is_finite() || !t1.is_finite() {
        return Err(Error::Config(format!("integration window [{t0}, {t1}] is empty or unbounded")));
    }
    let h_max = cfg.resolve(t1 - t0)?;
    if let Some(s) = sample_every {
        if !(s > 0.0) {
            return Err(Error::Config("sample cadence must be > 0".into()));
        }
    }
    let mut traj = Trajectory { times: vec![t0], states: vec![y0.to_vec()], accepted_steps: 0, rejected_steps: 0 };
    let mut st = Stepper::new(y0.len());
    let mut y = y0.to_vec();
    let mut t = t0;
    Stepper::eval(&mut rhs, t, &y, &mut st.k[0])?;
    observer(t, &y);

    let mut sample_idx = 1usize;
    let next_sample = |idx: usize| match sample_every {
        Some(s) => t0 + idx as f64 * s,
        None => f64::INFINITY,
    };
    // Samples closer to t1 than this are merged into the final point.
    let merge = 1e-12 * (t1 - t0);
    let mut h = cfg.h0.clamp(cfg.h_min, h_max);
    let mut attempts = 0usize;

    while t < t1 {
        let mut target = next_sample(sample_idx);
        let is_sample = target < t1 - merge;
        if !is_sample {
            target = t1;
        }
        let hit = t + h >= target;
        let h_try = if hit { target - t } else { h };
        if attempts >= cfg.max_steps {
            return Err(Error::StepBudget { max_steps: cfg.max_steps, t });
        }
        attempts += 1;
        let err = st.step(&mut rhs, t, &y, h_try, cfg.rtol, cfg.atol)?;
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        if err <= 1.0 {
            t = if hit { target } else { t + h_try };
            std::mem::swap(&mut y, &mut st.y_next);
            st.k.swap(0, 6);
            traj.accepted_steps += 1;
            observer(t, &y);
            if hit {
                traj.times.push(t);
                traj.states.push(y.clone());
                if is_sample {
                    sample_idx += 1;
                }
            }
            h = (h.max(h_try) * factor).clamp(cfg.h_min, h_max);
        } else {
            traj.rejected_steps += 1;
            if h_try <= cfg.h_min {
                return Err(Error::Stiffness { t, h_min: cfg.h_min, err_norm: err });
            }
            h = (h_try * factor).clamp(cfg.h_min, h_max);
        }
    }
    Ok(traj)
}
