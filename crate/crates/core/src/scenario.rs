//! A transfer protocol with its parameters in sweepable form: pulse shapes with
//! amplitudes and widths, plus the delay between the two pulses.

use serde::{Deserialize, Serialize};

use crate::cavity4::{self, Cavity4Config, Protocol, TargetConvention};
use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::lambda3;
use crate::pulses::PulseSpec;
use crate::transfer::TransferResult;
use crate::twoatom::{self, Model, TwoAtomConfig};

/// Parameter names accepted by [`Scenario::set_param`].
pub const PARAM_NAMES: [&str; 8] = ["amp1", "width1", "amp2", "width2", "delay", "gamma", "kappa", "g"];

fn default_pulse() -> PulseSpec {
    PulseSpec::gaussian(1.0, 1.0, 0.0)
}

/// Counterintuitive Λ passage: `pulse2` (Stokes) at t = 0, `pulse1` (pump) at `delay`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lambda3Scenario {
    #[serde(default = "default_pulse")]
    pub pulse1: PulseSpec,
    #[serde(default = "default_pulse")]
    pub pulse2: PulseSpec,
    #[serde(default)]
    pub delay: f64,
    #[serde(default)]
    pub detuning1: f64,
    #[serde(default)]
    pub detuning2: f64,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

/// Atom in a cavity; `omega` is the laser pulse, `g` the coupling pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cavity4Scenario {
    pub protocol: Protocol,
    #[serde(default = "default_pulse")]
    pub omega: PulseSpec,
    #[serde(default = "default_pulse")]
    pub g: PulseSpec,
    #[serde(default)]
    pub delay: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub target: TargetConvention,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

/// Two atoms in a cavity; `pulse2` drives atom 2 at t = 0, `pulse1` atom 1 at `delay`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoAtomScenario {
    pub model: Model,
    #[serde(default = "default_pulse")]
    pub pulse1: PulseSpec,
    #[serde(default = "default_pulse")]
    pub pulse2: PulseSpec,
    #[serde(default)]
    pub delay: f64,
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum Scenario {
    Lambda3(Lambda3Scenario),
    Cavity4(Cavity4Scenario),
    TwoAtom(TwoAtomScenario),
}

fn set_amp(p: &mut PulseSpec, v: f64) {
    p.amplitude = v;
}

fn set_width(p: &mut PulseSpec, v: f64) {
    p.width = v;
}

impl Scenario {
    pub fn system(&self) -> &'static str {
        match self {
            Scenario::Lambda3(_) => "lambda3",
            Scenario::Cavity4(_) => "cavity4",
            Scenario::TwoAtom(_) => "twoatom",
        }
    }

    /// Sets one named parameter. For cavity4, `g` is the coupling amplitude (same as `amp2`).
    pub fn set_param(&mut self, name: &str, value: f64) -> Result<()> {
        let system = self.system();
        let unknown = || Error::Config(format!("parameter `{name}` does not apply to {system}"));
        match self {
            Scenario::Lambda3(s) => match name {
                "amp1" => set_amp(&mut s.pulse1, value),
                "width1" => set_width(&mut s.pulse1, value),
                "amp2" => set_amp(&mut s.pulse2, value),
                "width2" => set_width(&mut s.pulse2, value),
                "delay" => s.delay = value,
                _ => return Err(unknown()),
            },
            Scenario::Cavity4(s) => match name {
                "amp1" => set_amp(&mut s.omega, value),
                "width1" => set_width(&mut s.omega, value),
                "amp2" | "g" => set_amp(&mut s.g, value),
                "width2" => set_width(&mut s.g, value),
                "delay" => s.delay = value,
                "gamma" => s.gamma = value,
                "kappa" => s.kappa = value,
                _ => return Err(unknown()),
            },
            Scenario::TwoAtom(s) => match name {
                "amp1" => set_amp(&mut s.pulse1, value),
                "width1" => set_width(&mut s.pulse1, value),
                "amp2" => set_amp(&mut s.pulse2, value),
                "width2" => set_width(&mut s.pulse2, value),
                "delay" => s.delay = value,
                "gamma" => s.gamma = value,
                "g" => s.g = value,
                _ => return Err(unknown()),
            },
        }
        Ok(())
    }

    /// Checks a parameter name without changing anything.
    pub fn check_param(&self, name: &str) -> Result<()> {
        if !PARAM_NAMES.contains(&name) {
            return Err(Error::Config(format!("unknown parameter `{name}`; expected one of {}", PARAM_NAMES.join(", "))));
        }
        let mut probe = *self;
        probe.set_param(name, 0.0)
    }

    pub fn run(&self, icfg: &IntegratorConfig) -> Result<TransferResult> {
        match self {
            Scenario::Lambda3(s) => {
                let p1 = s.pulse1.at(s.delay);
                let p2 = s.pulse2.at(0.0);
                lambda3::stirap_transfer(&p1, &p2, s.detuning1, s.detuning2, s.window, icfg)
            }
            Scenario::Cavity4(_) => cavity4::transfer(&self.cavity4_config().expect("cavity4 scenario"), icfg, None),
            Scenario::TwoAtom(_) => twoatom::coherence_transfer(&self.twoatom_config().expect("twoatom scenario"), icfg),
        }
    }

    pub fn cavity4_config(&self) -> Option<Cavity4Config> {
        match self {
            Scenario::Cavity4(s) => {
                let mut c = Cavity4Config::for_protocol(s.protocol, s.omega, s.g, s.delay, s.gamma, s.kappa);
                c.window = s.window;
                c.target = s.target;
                Some(c)
            }
            _ => None,
        }
    }

    pub fn twoatom_config(&self) -> Option<TwoAtomConfig> {
        match self {
            Scenario::TwoAtom(s) => {
                let mut c = TwoAtomConfig::counterintuitive(s.model, s.pulse1, s.pulse2, s.delay, s.g, s.gamma);
                c.window = s.window;
                Some(c)
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cavity() -> Scenario {
        Scenario::Cavity4(Cavity4Scenario {
            protocol: Protocol::Adiabatic,
            omega: PulseSpec::gaussian(2.0, 1.0, 0.0),
            g: PulseSpec::gaussian(2.0, 1.0, 0.0),
            delay: 1.31,
            gamma: 0.0,
            kappa: 0.0,
            target: TargetConvention::AnyG0,
            window: None,
        })
    }

    #[test]
    fn g_aliases_coupling_amplitude() {
        let mut s = cavity();
        s.set_param("g", 3.5).unwrap();
        let c = s.cavity4_config().unwrap();
        assert_eq!(c.pulse_g.amplitude, 3.5);
        assert_eq!(c.pulse_omega.center, 1.31);
    }

    #[test]
    fn rejects_foreign_parameters() {
        let s = Scenario::Lambda3(Lambda3Scenario {
            pulse1: default_pulse(),
            pulse2: default_pulse(),
            delay: 1.0,
            detuning1: 0.0,
            detuning2: 0.0,
            window: None,
        });
        assert!(s.check_param("kappa").is_err());
        assert!(s.check_param("delay").is_ok());
        assert!(cavity().check_param("sigma").is_err());
    }

    #[test]
    fn json_form() {
        let s: Scenario = serde_json::from_str(
            r#"{"system":"cavity4","protocol":"adiabatic","omega":"gaussian:amp=2,width=1","g":"gaussian:amp=2,width=1","delay":1.31}"#,
        )
        .unwrap();
        assert_eq!(s, cavity());
    }
}
