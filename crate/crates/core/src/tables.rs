//! Published optimum rows for the π-pulse, adiabatic and coherence-transfer
//! protocols, and a driver that re-runs them.

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cavity4::{Protocol, TargetConvention};
use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::pulses::{PulseSpec, Shape};
use crate::scenario::{Cavity4Scenario, Scenario, TwoAtomScenario};
use crate::twoatom::Model;
use Shape::{Gaussian as G, Lorentzian as L, Sech as S};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Pi,
    Adiabatic,
    Coherence,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pi" => Ok(TableKind::Pi),
            "adiabatic" => Ok(TableKind::Adiabatic),
            "coherence" => Ok(TableKind::Coherence),
            _ => Err(Error::Parse(format!("unknown table `{s}`; expected pi, adiabatic or coherence"))),
        }
    }
}

/// How printed Rabi frequencies map onto the four-level equations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    /// Printed values enter the equations as they stand.
    #[default]
    Verbatim,
    /// Printed values are divided by √3 (Clebsch-Gordan factor outside the table).
    Rescaled,
}

impl FromStr for Reading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "verbatim" => Ok(Reading::Verbatim),
            "rescaled" => Ok(Reading::Rescaled),
            _ => Err(Error::Parse(format!("unknown reading `{s}`; expected verbatim or rescaled"))),
        }
    }
}

/// One atom in a cavity: `(Γ, Ω, σ, g, σ_g, Δt, log10 p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CavityRow {
    pub shape: Shape,
    pub gamma: f64,
    pub omega: f64,
    pub sigma: f64,
    pub g: f64,
    pub sigma_g: f64,
    pub delay: f64,
    pub log10_p: f64,
}

/// Two atoms: `(Γ, Ω₁₀, σ₁, Ω₂₀, σ₂, g, Δt, log10 p)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoherenceRow {
    pub shape: Shape,
    pub gamma: f64,
    pub omega1: f64,
    pub sigma1: f64,
    pub omega2: f64,
    pub sigma2: f64,
    pub g: f64,
    pub delay: f64,
    pub log10_p: f64,
}

const fn cr(shape: Shape, v: [f64; 7]) -> CavityRow {
    CavityRow { shape, gamma: v[0], omega: v[1], sigma: v[2], g: v[3], sigma_g: v[4], delay: v[5], log10_p: v[6] }
}

const fn hr(shape: Shape, v: [f64; 8]) -> CoherenceRow {
    CoherenceRow { shape, gamma: v[0], omega1: v[1], sigma1: v[2], omega2: v[3], sigma2: v[4], g: v[5], delay: v[6], log10_p: v[7] }
}

#[allow(clippy::approx_constant)]
pub const PI_TABLE: [CavityRow; 15] = [
    cr(G, [0.01, 2.14, 0.29, 1.0, 0.63, 1.26, -2.05]),
    cr(G, [0.02, 2.15, 0.29, 1.0, 0.63, 1.16, -1.78]),
    cr(G, [0.05, 2.03, 0.31, 1.0, 0.63, 1.01, -1.44]),
    cr(G, [0.10, 2.11, 0.30, 1.0, 0.63, 0.89, -1.19]),
    cr(G, [0.20, 2.18, 0.29, 1.0, 0.63, 0.75, -0.95]),
    cr(S, [0.01, 1.84, 0.26, 1.0, 0.5, 1.52, -1.94]),
    cr(S, [0.02, 2.01, 0.25, 1.0, 0.5, 1.35, -1.69]),
    cr(S, [0.05, 2.16, 0.23, 1.0, 0.5, 1.11, -1.37]),
    cr(S, [0.1, 2.26, 0.22, 1.0, 0.5, 0.94, -1.13]),
    cr(S, [0.2, 2.43, 0.21, 1.0, 0.5, 0.77, -0.91]),
    cr(L, [0.01, 5.71, 0.09, 1.0, 0.5, 2.28, -1.63]),
    cr(L, [0.02, 5.53, 0.09, 1.0, 0.5, 1.8, -1.43]),
    cr(L, [0.05, 5.56, 0.09, 1.0, 0.5, 1.32, -1.16]),
    cr(L, [0.1, 5.8, 0.09, 1.0, 0.5, 1.04, -0.96]),
    cr(L, [0.2, 6.28, 0.08, 1.0, 0.5, 0.82, -0.77]),
];

pub const ADIABATIC_TABLE: [CavityRow; 19] = [
    cr(G, [0.0, 2.0, 1.0, 2.0, 1.0, 1.31, -4.88]),
    cr(G, [0.0, 4.0, 1.0, 19.2, 1.0, 1.9, -4.53]),
    cr(G, [0.0, 6.0, 1.0, 5.7, 1.0, 1.5, -6.83]),
    cr(G, [0.0, 6.7, 1.5, 2.0, 1.0, 2.72, -5.67]),
    cr(G, [0.1, 3.39, 3.23, 1.0, 2.45, 5.85, -1.99]),
    cr(G, [0.1, 2.75, 3.09, 1.0, 2.48, 5.29, -2.00]),
    cr(G, [0.2, 3.3, 3.3, 1.0, 2.5, 5.9, -1.73]),
    cr(G, [0.2, 2.4, 3.3, 1.0, 3.0, 5.38, -1.8]),
    cr(G, [0.2, 2.3, 4.2, 1.0, 4.48, 6.62, -1.96]),
    cr(G, [0.2, 2.1, 4.6, 1.0, 5.0, 7.09, -2.01]),
    cr(S, [0.0, 2.0, 1.0, 2.0, 1.0, 0.8, -7.79]),
    cr(S, [0.1, 2.6, 1.4, 1.0, 1.2, 2.7, -1.71]),
    cr(S, [0.1, 5.0, 1.5, 1.0, 2.0, 3.8, -1.9]),
    cr(S, [0.1, 4.5, 1.7, 1.0, 2.4, 4.1, -1.89]),
    cr(S, [0.1, 4.2, 1.8, 1.0, 2.6, 4.3, -1.86]),
    cr(S, [0.1, 6.3, 3.4, 1.0, 4.01, 12.01, -2.0]),
    cr(S, [0.2, 14.7, 5.0, 1.0, 7.0, 21.4, -2.06]),
    cr(L, [0.0, 2.0, 1.0, 2.0, 1.0, 0.32, -4.46]),
    cr(L, [0.1, 9.2, 0.6, 1.0, 2.0, 2.29, -1.05]),
];

pub const COHERENCE_TABLE: [CoherenceRow; 15] = [
    hr(G, [0.0, 2.6, 10.0, 1.0, 1.0, 1.0, 6.5, -0.68]),
    hr(G, [0.0, 14.4, 10.1, 1.0, 4.0, 1.0, 25.29, -1.54]),
    hr(G, [0.0, 0.7, 7.0, 1.0, 2.0, 2.0, 3.48, -2.19]),
    hr(G, [0.01, 1.1, 4.5, 1.0, 1.0, 1.0, 0.0, -0.61]),
    hr(G, [0.01, 15.0, 10.2, 1.0, 4.0, 1.0, 25.7, -1.4]),
    hr(G, [0.01, 14.8, 13.6, 1.0, 7.0, 1.0, 36.1, -2.13]),
    hr(G, [0.1, 2.5, 7.3, 1.0, 4.0, 2.0, 11.69, -1.09]),
    hr(G, [0.1, 2.0, 6.8, 1.0, 4.0, 4.0, 9.8, -1.1]),
    hr(G, [0.1, 1.9, 6.7, 1.0, 4.0, 6.0, 9.4, -1.1]),
    hr(G, [0.1, 25.0, 30.0, 1.0, 30.0, 1.0, 80.5, -1.76]),
    hr(S, [0.0, 0.9, 2.3, 1.0, 2.0, 1.0, 0.0, -1.14]),
    hr(S, [0.0, 3.8, 4.4, 1.0, 5.0, 1.0, 11.51, -3.71]),
    hr(S, [0.01, 3.8, 4.4, 1.0, 5.0, 1.0, 11.48, -2.06]),
    hr(S, [0.02, 5.2, 4.1, 1.0, 5.0, 2.0, 11.0, -1.85]),
    hr(S, [0.02, 6.9, 4.1, 1.0, 5.0, 3.0, 11.8, -1.85]),
];

/// Rows at or below this are narrow resonance dips, compared to within one
/// order of magnitude in `p`.
pub const DEEP_ROW_LOG10: f64 = -4.0;

pub fn row_count(kind: TableKind) -> usize {
    match kind {
        TableKind::Pi => PI_TABLE.len(),
        TableKind::Adiabatic => ADIABATIC_TABLE.len(),
        TableKind::Coherence => COHERENCE_TABLE.len(),
    }
}

pub fn published_log10_p(kind: TableKind, row: usize) -> f64 {
    match kind {
        TableKind::Pi => PI_TABLE[row].log10_p,
        TableKind::Adiabatic => ADIABATIC_TABLE[row].log10_p,
        TableKind::Coherence => COHERENCE_TABLE[row].log10_p,
    }
}

pub fn row_shape(kind: TableKind, row: usize) -> Shape {
    match kind {
        TableKind::Pi => PI_TABLE[row].shape,
        TableKind::Adiabatic => ADIABATIC_TABLE[row].shape,
        TableKind::Coherence => COHERENCE_TABLE[row].shape,
    }
}

/// Allowed `|Δ log10 p|` for a row.
pub fn tolerance(kind: TableKind, row: usize) -> f64 {
    match kind {
        TableKind::Pi => 0.3,
        TableKind::Adiabatic if published_log10_p(kind, row) <= DEEP_ROW_LOG10 => 1.0,
        TableKind::Adiabatic => 0.3,
        TableKind::Coherence => 0.4,
    }
}

/// The scenario a row describes. `row` is 0-based.
pub fn row_scenario(kind: TableKind, row: usize, reading: Reading) -> Result<Scenario> {
    if row >= row_count(kind) {
        return Err(Error::Config(format!("table {kind:?} has {} rows", row_count(kind))));
    }
    let scale = match reading {
        Reading::Verbatim => 1.0,
        Reading::Rescaled => 1.0 / 3f64.sqrt(),
    };
    match kind {
        TableKind::Pi | TableKind::Adiabatic => {
            let r = if kind == TableKind::Pi { PI_TABLE[row] } else { ADIABATIC_TABLE[row] };
            let protocol = if kind == TableKind::Pi { Protocol::Pi } else { Protocol::Adiabatic };
            Ok(Scenario::Cavity4(Cavity4Scenario {
                protocol,
                omega: PulseSpec { shape: r.shape, amplitude: r.omega * scale, width: r.sigma, center: 0.0 },
                g: PulseSpec { shape: r.shape, amplitude: r.g * scale, width: r.sigma_g, center: 0.0 },
                delay: r.delay,
                gamma: r.gamma,
                kappa: 0.0,
                target: TargetConvention::AnyG0,
                window: None,
            }))
        }
        TableKind::Coherence => {
            let r = COHERENCE_TABLE[row];
            Ok(Scenario::TwoAtom(TwoAtomScenario {
                model: Model::Density,
                pulse1: PulseSpec { shape: r.shape, amplitude: r.omega1, width: r.sigma1, center: 0.0 },
                pulse2: PulseSpec { shape: r.shape, amplitude: r.omega2, width: r.sigma2, center: 0.0 },
                delay: r.delay,
                g: r.g,
                gamma: r.gamma,
                window: None,
            }))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowReport {
    pub table: TableKind,
    /// 1-based, in printed order.
    pub row: usize,
    pub shape: Shape,
    pub reading: Reading,
    pub published_log10_p: f64,
    pub computed_log10_p: Option<f64>,
    pub delta: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn reproduce_row(kind: TableKind, row: usize, reading: Reading, icfg: &IntegratorConfig) -> Result<RowReport> {
    let scenario = row_scenario(kind, row, reading)?;
    let start = Instant::now();
    let outcome = scenario.run(icfg);
    let seconds = start.elapsed().as_secs_f64();
    let published = published_log10_p(kind, row);
    let tol = tolerance(kind, row);
    let (computed, error) = match outcome {
        Ok(r) => (Some(r.log10_p), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let delta = computed.map(|c| c - published);
    Ok(RowReport {
        table: kind,
        row: row + 1,
        shape: row_shape(kind, row),
        reading: if kind == TableKind::Coherence { Reading::Verbatim } else { reading },
        published_log10_p: published,
        computed_log10_p: computed,
        delta,
        tolerance: tol,
        pass: delta.is_some_and(|d| d.abs() <= tol),
        seconds,
        error,
    })
}

/// Re-runs the selected rows (1-based; all when `rows` is `None`).
pub fn reproduce(kind: TableKind, rows: Option<&[usize]>, reading: Reading, icfg: &IntegratorConfig) -> Result<Vec<RowReport>> {
    let all: Vec<usize> = (1..=row_count(kind)).collect();
    let rows = rows.unwrap_or(&all);
    for &r in rows {
        if r == 0 || r > row_count(kind) {
            return Err(Error::Config(format!("row {r} out of range 1..={}", row_count(kind))));
        }
    }
    rows.iter().map(|&r| reproduce_row(kind, r - 1, reading, icfg)).collect()
}

/// Parses a row list such as `1,3-5`.
pub fn parse_rows(s: &str) -> Result<Vec<usize>> {
    let bad = |p: &str| Error::Parse(format!("bad row selector `{p}`"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(part))?;
                let b: usize = b.trim().parse().map_err(|_| bad(part))?;
                if a > b {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty row selector".into()));
    }
    Ok(out)
}
