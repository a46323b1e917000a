use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mixing angle undefined at t = {t}: both pulses vanish")]
    UndefinedAngle { t: f64 },
    #[error("unsupported pulse pair: {0}")]
    UnsupportedPair(String),
    #[error("division by zero: denominator pulse vanishes at t = {t}")]
    DivisionByZero { t: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("adiabaticity margin undefined at t = {t}: effective Rabi frequency is zero")]
    UndefinedMargin { t: f64 },
    #[error("azimuth undefined at the pole (sin theta = 0)")]
    AzimuthUndefined,
    #[error("angle equations singular at theta = {theta}")]
    SingularAngle { theta: f64 },
    #[error("non-finite derivative at t = {t}")]
    NumericalBlowup { t: f64 },
    #[error("step budget of {max_steps} steps exhausted at t = {t}")]
    StepBudget { max_steps: usize, t: f64 },
    #[error("step size reached h_min = {h_min} with error norm {err_norm} at t = {t}")]
    Stiffness { t: f64, h_min: f64, err_norm: f64 },
    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureNonConvergence { a: f64, b: f64 },
    #[error("every sweep cell failed")]
    EmptySurface,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of numerical integration or quadrature, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalBlowup { .. }
                | Error::StepBudget { .. }
                | Error::Stiffness { .. }
                | Error::QuadratureNonConvergence { .. }
                | Error::EmptySurface
        )
    }
}
