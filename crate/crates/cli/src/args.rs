//! Command-line flags. Every subcommand's flags can also come from a JSON
//! `--config` file whose keys are the long flag names; flags win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtransfer_core::cavity4::{Protocol, TargetConvention};
use qtransfer_core::pulses::PulseSpec;
use qtransfer_core::twoatom::Model;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "qtransfer", version, about = "Population and coherence transfer simulations for atoms in cavities")]
pub struct Cli {
    /// JSON file with flag values; command-line flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one transfer and print the result as JSON.
    Simulate(SimulateArgs),
    /// Grid search over one or two parameters.
    Sweep(SweepArgs),
    /// Published optimum rows.
    Tables {
        #[command(subcommand)]
        command: TablesCommand,
    },
    /// Linearized model of the nonadiabatic failure probability.
    Analytic {
        #[command(subcommand)]
        command: AnalyticCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum TablesCommand {
    /// Re-run table rows and compare with the published values.
    Reproduce(TablesArgs),
}

#[derive(Subcommand, Debug)]
pub enum AnalyticCommand {
    /// Closed form against quadrature for the sin/cos pulse pair, as CSV.
    Example(ExampleArgs),
    /// Failure integral for a pulse pair, as JSON.
    Failure(FailureArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Bloch2,
    Lambda3,
    Cavity4,
    Twoatom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Parses core enums through their serde names, so flags and config files agree.
fn serde_name<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase())).map_err(|e| e.to_string())
}

fn skip_false(b: &bool) -> bool {
    !*b
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<System>,
    /// Pulse spec, e.g. `gaussian:amp=2,width=1,center=0`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse1: Option<PulseSpec>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse2: Option<PulseSpec>,
    /// Two-level detuning.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detuning: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta2: Option<f64>,
    /// `t0:t1`; default from the pulse shapes.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[arg(long, value_parser = serde_name::<Protocol>)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<Protocol>,
    /// Leading pulse at t = 0, the other at this delay. Without it the pulse centers are used.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delay: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Constant atom-cavity coupling (twoatom).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[arg(long, value_parser = serde_name::<Model>)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    /// `any-g0` or `cavity-photon` (cavity4).
    #[arg(long, value_parser = serde_name::<TargetConvention>)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetConvention>,
    /// Record the state every this many time units.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_every: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system: Option<System>,
    #[arg(long, value_parser = serde_name::<Protocol>)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub protocol: Option<Protocol>,
    #[arg(long, value_parser = serde_name::<Model>)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[arg(long, value_parser = serde_name::<TargetConvention>)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<TargetConvention>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse1: Option<PulseSpec>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse2: Option<PulseSpec>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delay: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    /// `name=min:max:step`, one or two times. Names: amp1 width1 amp2 width2 delay gamma kappa g.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axis: Vec<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// Three nested passes at 10x finer steps around the best cell.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "skip_false")]
    pub refine: bool,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TablesArgs {
    /// `pi`, `adiabatic` or `coherence`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<String>,
    /// Row selection such as `1,3-5`; all rows by default.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<String>,
    /// `verbatim` (default) or `rescaled` (cavity Rabi frequencies divided by sqrt 3).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reading: Option<String>,
    /// Print one JSON report per row instead of a text table.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "skip_false")]
    pub json: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub tol: ToleranceArgs,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ExampleArgs {
    /// `x0:x1:dx` with x0 > 0.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FailureArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse1: Option<PulseSpec>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse2: Option<PulseSpec>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ToleranceArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}
