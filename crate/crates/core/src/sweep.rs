//! Grid sweeps of `log10 p` over one or two scenario parameters.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::scenario::Scenario;

pub const MAX_AXIS_STEPS: f64 = 4000.0;
pub const REFINE_PASSES: usize = 3;
const REFINE_HALF_CELLS: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl SweepAxis {
    pub fn new(name: &str, min: f64, max: f64, step: f64) -> Result<Self> {
        let a = SweepAxis { name: name.to_string(), min, max, step };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::Config(format!("axis {}: need finite min < max", self.name)));
        }
        if !(self.step > 0.0) || (self.max - self.min) / self.step > MAX_AXIS_STEPS {
            return Err(Error::Config(format!("axis {}: need step > 0 and at most {MAX_AXIS_STEPS} steps", self.name)));
        }
        Ok(())
    }

    /// Grid points `min, min + step, …` up to `max` (inclusive within rounding).
    pub fn cells(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }
}

/// `name=min:max:step`.
impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("axis `{s}`: expected name=min:max:step"));
        let (name, range) = s.split_once('=').ok_or_else(bad)?;
        let nums: Vec<f64> = range.split(':').map(|x| x.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let [min, max, step] = nums[..] else { return Err(bad()) };
        SweepAxis::new(name.trim(), min, max, step)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Argmin {
    pub index: Vec<usize>,
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub index: Vec<usize>,
    pub params: Vec<f64>,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMetadata {
    pub system: String,
    pub base_config: serde_json::Value,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSurface {
    pub axes: Vec<SweepAxis>,
    /// Row-major, last axis fastest; `None` marks a failed cell.
    pub values: Vec<Option<f64>>,
    pub argmin: Option<Argmin>,
    pub failures: Vec<CellFailure>,
    pub metadata: SurfaceMetadata,
}

impl SweepSurface {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(SweepAxis::cells).collect()
    }

    pub fn cell_index(&self, flat: usize) -> Vec<usize> {
        unravel(&self.shape(), flat)
    }

    pub fn cell_params(&self, index: &[usize]) -> Vec<f64> {
        self.axes.iter().zip(index).map(|(a, &i)| a.value(i)).collect()
    }

    /// Row-major scan with strict `<`, so ties go to the smallest index.
    pub fn compute_argmin(&self) -> Option<Argmin> {
        let mut best: Option<(usize, f64)> = None;
        for (k, v) in self.values.iter().enumerate() {
            if let Some(v) = *v {
                if best.map_or(true, |(_, b)| v < b) {
                    best = Some((k, v));
                }
            }
        }
        best.map(|(k, value)| {
            let index = self.cell_index(k);
            Argmin { params: self.cell_params(&index), index, value }
        })
    }
}

fn unravel(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for d in (0..shape.len()).rev() {
        idx[d] = flat % shape[d];
        flat /= shape[d];
    }
    idx
}

fn validate_axes(scenario: &Scenario, axes: &[SweepAxis]) -> Result<()> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::Config("a sweep needs one or two axes".into()));
    }
    if axes.len() == 2 && axes[0].name == axes[1].name {
        return Err(Error::Config("sweep axes must name different parameters".into()));
    }
    for a in axes {
        a.validate()?;
        scenario.check_param(&a.name)?;
    }
    Ok(())
}

/// `log10 p` of one cell, computed exactly as a direct run of the adjusted scenario.
pub fn evaluate_cell(scenario: &Scenario, names: &[&str], params: &[f64], icfg: &IntegratorConfig) -> Result<f64> {
    let mut s = *scenario;
    for (n, &v) in names.iter().zip(params) {
        s.set_param(n, v)?;
    }
    let r = s.run(icfg)?;
    if r.log10_p.is_finite() {
        Ok(r.log10_p)
    } else {
        Err(Error::NumericalBlowup { t: r.window[1] })
    }
}

/// Evaluates every cell on a pool of `threads` workers. Cells are independent
/// and merged by index, so the values do not depend on the thread count.
pub fn run_sweep(scenario: &Scenario, axes: &[SweepAxis], threads: usize, icfg: &IntegratorConfig) -> Result<SweepSurface> {
    validate_axes(scenario, axes)?;
    if threads == 0 {
        return Err(Error::Config("threads must be >= 1".into()));
    }
    let shape: Vec<usize> = axes.iter().map(SweepAxis::cells).collect();
    let total: usize = shape.iter().product();
    let names: Vec<&str> = axes.iter().map(|a| a.name.as_str()).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<f64>> = pool.install(|| {
        (0..total)
            .into_par_iter()
            .map(|k| {
                let idx = unravel(&shape, k);
                let params: Vec<f64> = axes.iter().zip(&idx).map(|(a, &i)| a.value(i)).collect();
                evaluate_cell(scenario, &names, &params, icfg)
            })
            .collect()
    });
    let mut values = Vec::with_capacity(total);
    let mut failures = Vec::new();
    for (k, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(Some(v)),
            Err(e) => {
                let index = unravel(&shape, k);
                let params = axes.iter().zip(&index).map(|(a, &i)| a.value(i)).collect();
                failures.push(CellFailure { index, params, error: e.to_string() });
                values.push(None);
            }
        }
    }
    let metadata = SurfaceMetadata {
        system: scenario.system().to_string(),
        base_config: serde_json::to_value(scenario)?,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let mut surface = SweepSurface { axes: axes.to_vec(), values, argmin: None, failures, metadata };
    surface.argmin = surface.compute_argmin();
    Ok(surface)
}

/// What a refinement pass needs to re-run cells.
#[derive(Clone, Copy, Debug)]
pub struct Refinement<'a> {
    pub scenario: &'a Scenario,
    pub icfg: &'a IntegratorConfig,
    pub threads: usize,
    pub passes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementPass {
    pub axes: Vec<SweepAxis>,
    pub params: Vec<f64>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestCell {
    /// Cell of the input surface.
    pub index: Vec<usize>,
    /// Best parameters found, after refinement if any.
    pub params: Vec<f64>,
    pub value: f64,
    pub passes: Vec<RefinementPass>,
}

/// Argmin of `surface`; with `refine`, nested sweeps at 10× finer steps over
/// ±2 parent cells, clamped to the original axis ranges. A pass that finds
/// nothing better keeps the parent's point.
pub fn find_minimum(surface: &SweepSurface, refine: Option<Refinement<'_>>) -> Result<BestCell> {
    let am = surface.compute_argmin().ok_or(Error::EmptySurface)?;
    let mut best = BestCell { index: am.index.clone(), params: am.params.clone(), value: am.value, passes: Vec::new() };
    let Some(rf) = refine else { return Ok(best) };
    let mut steps: Vec<f64> = surface.axes.iter().map(|a| a.step).collect();
    for _ in 0..rf.passes {
        let axes: Vec<SweepAxis> = surface
            .axes
            .iter()
            .zip(&best.params)
            .zip(&steps)
            .map(|((a, &c), &h)| SweepAxis {
                name: a.name.clone(),
                min: (c - REFINE_HALF_CELLS * h).max(a.min),
                max: (c + REFINE_HALF_CELLS * h).min(a.max),
                step: h / 10.0,
            })
            .collect();
        if axes.iter().any(|a| a.validate().is_err()) {
            break;
        }
        let sub = run_sweep(rf.scenario, &axes, rf.threads, rf.icfg)?;
        if let Some(m) = sub.argmin {
            if m.value < best.value {
                best.value = m.value;
                best.params = m.params;
            }
        }
        best.passes.push(RefinementPass { axes, params: best.params.clone(), value: best.value });
        steps.iter_mut().for_each(|h| *h /= 10.0);
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceFormat {
    Csv,
    Json,
}

impl FromStr for SurfaceFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(SurfaceFormat::Csv),
            "json" => Ok(SurfaceFormat::Json),
            _ => Err(Error::Parse(format!("unknown surface format `{s}`"))),
        }
    }
}

/// Shortest decimal form of `x` rounded to 9 significant digits.
pub fn format_sig9(x: f64) -> String {
    if !x.is_finite() {
        return "nan".into();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn surface_csv(surface: &SweepSurface) -> String {
    let mut out = String::new();
    for a in &surface.axes {
        out.push_str(&a.name);
        out.push(',');
    }
    out.push_str("log10_p\n");
    for (k, v) in surface.values.iter().enumerate() {
        let idx = surface.cell_index(k);
        for p in surface.cell_params(&idx) {
            let _ = write!(out, "{},", format_sig9(p));
        }
        out.push_str(&v.map_or_else(|| "nan".to_string(), format_sig9));
        out.push('\n');
    }
    out
}

pub fn write_surface(surface: &SweepSurface, format: SurfaceFormat, path: &Path) -> Result<()> {
    let text = match format {
        SurfaceFormat::Csv => surface_csv(surface),
        SurfaceFormat::Json => serde_json::to_string_pretty(surface)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}

pub fn read_surface_json(path: &Path) -> Result<SweepSurface> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}
