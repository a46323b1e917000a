use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use qtransfer_core::analytic::{analytic_example_p, failure_integral, sincos_pair};
use qtransfer_core::bloch2::{simulate_two_level, PseudospinState, TorqueSpec};
use qtransfer_core::cavity4::{self, Cavity4Config, Protocol};
use qtransfer_core::lambda3::{transfer_from, Lambda3State, Level};
use qtransfer_core::pulses::{pulse_area, window_plan, PulseSpec};
use qtransfer_core::scenario::{Cavity4Scenario, Lambda3Scenario, Scenario, TwoAtomScenario};
use qtransfer_core::sweep::{find_minimum, format_sig9, run_sweep, write_surface, Refinement, SurfaceFormat, SweepAxis, REFINE_PASSES};
use qtransfer_core::tables::{parse_rows, reproduce, Reading, TableKind};
use qtransfer_core::twoatom::{self, Model, TwoAtomConfig};
use qtransfer_core::{Error, IntegratorConfig, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;

pub fn run(cli: Cli) -> Result<()> {
    let file = cli.config.as_deref().map(read_config).transpose()?;
    let file = file.as_ref();
    match cli.command {
        Command::Simulate(a) => simulate(merge(a, file)?),
        Command::Sweep(a) => sweep(merge(a, file)?),
        Command::Tables { command: TablesCommand::Reproduce(a) } => tables(merge(a, file)?),
        Command::Analytic { command: AnalyticCommand::Example(a) } => example(merge(a, file)?),
        Command::Analytic { command: AnalyticCommand::Failure(a) } => failure(merge(a, file)?),
    }
}

fn read_config(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    if !v.is_object() {
        return Err(Error::Config(format!("{}: expected a JSON object", path.display())));
    }
    Ok(v)
}

/// Flags given on the command line replace the same keys from the config file.
fn merge<T: Serialize + DeserializeOwned>(cli: T, file: Option<&Value>) -> Result<T> {
    let Some(file) = file else { return Ok(cli) };
    let mut merged = file.as_object().cloned().unwrap_or_default();
    if let Value::Object(flags) = serde_json::to_value(&cli)? {
        merged.extend(flags);
    }
    serde_json::from_value(Value::Object(merged)).map_err(|e| Error::Config(format!("config file: {e}")))
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Config(format!("--{flag} is required")))
}

fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::Parse(format!("window `{s}`: expected t0:t1 with t0 < t1"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(bad());
    }
    Ok((a, b))
}

fn window_opt(s: &Option<String>) -> Result<Option<(f64, f64)>> {
    s.as_deref().map(parse_window).transpose()
}

fn integrator(t: &ToleranceArgs) -> IntegratorConfig {
    let mut c = IntegratorConfig::default();
    if let Some(r) = t.rtol {
        c.rtol = r;
    }
    if let Some(a) = t.atol {
        c.atol = a;
    }
    if let Some(m) = t.max_steps {
        c.max_steps = m;
    }
    c
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    emit(&(serde_json::to_string_pretty(v)? + "\n"))
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let icfg = integrator(&a.tol);
    let window = window_opt(&a.window)?;
    let p1 = required(a.pulse1, "pulse1")?;
    match required(a.system, "system")? {
        System::Bloch2 => {
            p1.validate()?;
            let w = match window {
                Some(w) => w,
                None => window_plan(&[p1])?.initial(),
            };
            let ts = TorqueSpec { pulse: p1, detuning: a.detuning.unwrap_or(0.0) };
            let s = simulate_two_level(&ts, w, &PseudospinState::GROUND, &icfg)?;
            print_json(&json!({ "final_u": s.u, "final_v": s.v, "final_w": s.w, "area": pulse_area(&p1, w.0, w.1) }))
        }
        System::Lambda3 => {
            let p2 = required(a.pulse2, "pulse2")?;
            // Stokes (pulse2) leads.
            let (p1, p2) = match a.delay {
                Some(d) => (p1.at(d), p2.at(0.0)),
                None => (p1, p2),
            };
            let (d1, d2) = (a.delta1.unwrap_or(0.0), a.delta2.unwrap_or(0.0));
            let r = transfer_from(&p1, &p2, d1, d2, window, Lambda3State::real(1.0, 0.0, 0.0), Level::B, &icfg, a.sample_every)?;
            print_json(&r)
        }
        System::Cavity4 => {
            let g = required(a.pulse2, "pulse2")?;
            let (gamma, kappa) = (a.gamma.unwrap_or(0.0), a.kappa.unwrap_or(0.0));
            let mut cfg = match a.delay {
                Some(d) => Cavity4Config::for_protocol(required(a.protocol, "protocol")?, p1, g, d, gamma, kappa),
                None => Cavity4Config { pulse_omega: p1, pulse_g: g, gamma, kappa, window: None, target: Default::default() },
            };
            cfg.window = window;
            cfg.target = a.target.unwrap_or_default();
            print_json(&cavity4::transfer(&cfg, &icfg, a.sample_every)?)
        }
        System::Twoatom => {
            let p2 = required(a.pulse2, "pulse2")?;
            let model = a.model.unwrap_or(Model::Amplitudes);
            let (g, gamma) = (a.g.unwrap_or(1.0), a.gamma.unwrap_or(0.0));
            let mut cfg = match a.delay {
                Some(d) => TwoAtomConfig::counterintuitive(model, p1, p2, d, g, gamma),
                None => TwoAtomConfig { model, pulse1: p1, pulse2: p2, g, gamma, window: None },
            };
            cfg.window = window;
            print_json(&twoatom::coherence_transfer_sampled(&cfg, &icfg, a.sample_every)?)
        }
    }
}

fn sweep_scenario(a: &SweepArgs) -> Result<Scenario> {
    let pulse = |p: Option<PulseSpec>| p.unwrap_or(PulseSpec::gaussian(1.0, 1.0, 0.0));
    let (pulse1, pulse2) = (pulse(a.pulse1), pulse(a.pulse2));
    let delay = a.delay.unwrap_or(0.0);
    let window = window_opt(&a.window)?;
    Ok(match required(a.system, "system")? {
        System::Lambda3 => Scenario::Lambda3(Lambda3Scenario {
            pulse1,
            pulse2,
            delay,
            detuning1: a.delta1.unwrap_or(0.0),
            detuning2: a.delta2.unwrap_or(0.0),
            window,
        }),
        System::Cavity4 => Scenario::Cavity4(Cavity4Scenario {
            protocol: a.protocol.unwrap_or(Protocol::Adiabatic),
            omega: pulse1,
            g: pulse2,
            delay,
            gamma: a.gamma.unwrap_or(0.0),
            kappa: a.kappa.unwrap_or(0.0),
            target: a.target.unwrap_or_default(),
            window,
        }),
        System::Twoatom => Scenario::TwoAtom(TwoAtomScenario {
            model: a.model.unwrap_or(Model::Amplitudes),
            pulse1,
            pulse2,
            delay,
            g: a.g.unwrap_or(1.0),
            gamma: a.gamma.unwrap_or(0.0),
            window,
        }),
        System::Bloch2 => return Err(Error::Config("sweep supports lambda3, cavity4 and twoatom".into())),
    })
}

/// `--threads`, then `QTRANSFER_THREADS`, then the hardware thread count.
fn thread_count(flag: Option<usize>) -> Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    if let Ok(v) = std::env::var("QTRANSFER_THREADS") {
        return v.trim().parse().map_err(|_| Error::Config(format!("QTRANSFER_THREADS=`{v}` is not a thread count")));
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn sweep(a: SweepArgs) -> Result<()> {
    let scenario = sweep_scenario(&a)?;
    let axes: Vec<SweepAxis> = a.axis.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let out = required(a.out.clone(), "out")?;
    let format = match a.format {
        Some(OutputFormat::Json) => SurfaceFormat::Json,
        Some(OutputFormat::Csv) => SurfaceFormat::Csv,
        None if out.extension().is_some_and(|e| e == "json") => SurfaceFormat::Json,
        None => SurfaceFormat::Csv,
    };
    let threads = thread_count(a.threads)?;
    if threads == 0 {
        return Err(Error::Config("thread count must be at least 1".into()));
    }
    let icfg = integrator(&a.tol);
    let surface = run_sweep(&scenario, &axes, threads, &icfg)?;
    write_surface(&surface, format, &out)?;
    let refine = a.refine.then_some(Refinement { scenario: &scenario, icfg: &icfg, threads, passes: REFINE_PASSES });
    let best = find_minimum(&surface, refine)?;
    print_json(&json!({
        "out": out,
        "cells": surface.values.len(),
        "failed_cells": surface.failures.len(),
        "threads": threads,
        "axes": axes.iter().map(|x| &x.name).collect::<Vec<_>>(),
        "argmin": surface.argmin,
        "best": best,
    }))
}

fn tables(a: TablesArgs) -> Result<()> {
    let kind: TableKind = required(a.table.as_deref(), "table")?.parse()?;
    let reading: Reading = a.reading.as_deref().map(str::parse).transpose()?.unwrap_or_default();
    let rows = a.rows.as_deref().map(parse_rows).transpose()?;
    let reports = reproduce(kind, rows.as_deref(), reading, &integrator(&a.tol))?;
    if a.json {
        return print_json(&reports);
    }
    let used = if kind == TableKind::Coherence { Reading::Verbatim } else { reading };
    let mut out = String::new();
    writeln!(out, "reading: {}", serde_json::to_value(used)?.as_str().unwrap_or_default()).ok();
    writeln!(
        out,
        "{:>4} {:>11} {:>10} {:>10} {:>8} {:>6} {:>5} {:>9}",
        "row", "shape", "published", "computed", "delta", "tol", "ok", "seconds"
    )
    .ok();
    for r in &reports {
        let shape = serde_json::to_value(r.shape)?;
        let num = |v: Option<f64>, prec: usize| v.map_or_else(|| "error".to_string(), |x| format!("{x:.prec$}"));
        writeln!(
            out,
            "{:>4} {:>11} {:>10.3} {:>10} {:>8} {:>6.2} {:>5} {:>9.4}",
            r.row,
            shape.as_str().unwrap_or_default(),
            r.published_log10_p,
            num(r.computed_log10_p, 3),
            num(r.delta, 3),
            r.tolerance,
            if r.pass { "PASS" } else { "FAIL" },
            r.seconds
        )
        .ok();
        if let Some(e) = &r.error {
            writeln!(out, "     {e}").ok();
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    writeln!(out, "{passed}/{} rows within tolerance", reports.len()).ok();
    emit(&out)
}

fn parse_range(s: &str) -> Result<Vec<f64>> {
    let axis: SweepAxis = format!("x={s}").parse().map_err(|_| Error::Parse(format!("range `{s}`: expected x0:x1:dx")))?;
    axis.validate()?;
    if axis.min <= 0.0 {
        return Err(Error::Config("range must start above 0".into()));
    }
    Ok((0..axis.cells()).map(|i| axis.value(i)).collect())
}

fn example(a: ExampleArgs) -> Result<()> {
    let xs = parse_range(&required(a.range, "range")?)?;
    let mut out = String::from("x,p_closed_form,p_quadrature\n");
    for x in xs {
        let (p1, p2, w) = sincos_pair(x);
        let quad = failure_integral(&p1, &p2, Some(w))?.p;
        writeln!(out, "{},{:e},{:e}", format_sig9(x), analytic_example_p(x), quad).ok();
    }
    emit(&out)
}

fn failure(a: FailureArgs) -> Result<()> {
    let p1 = required(a.pulse1, "pulse1")?;
    let p2 = required(a.pulse2, "pulse2")?;
    p1.validate()?;
    p2.validate()?;
    print_json(&failure_integral(&p1, &p2, window_opt(&a.window)?)?)
}
