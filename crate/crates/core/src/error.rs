use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("unknown design `{0}` (expected one of ID, MD1, MD2)")]
    UnknownDesign(String),

    #[error("geometry outside domain: {0}")]
    GeometryOutsideDomain(String),

    #[error("geometry under-resolved: {0}")]
    GeometryResolution(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate timestep: {0}")]
    DegenerateTimestep(String),

    #[error(
        "numerical blowup at step {step} (t = {time:.6} s, max |velocity| = {max_velocity:e} m/s)"
    )]
    NumericalBlowup {
        step: u64,
        time: f64,
        max_velocity: f64,
    },

    #[error("pressure solve did not converge after {iterations} iterations (relative residual {residual:e})")]
    PoissonDivergence { iterations: usize, residual: f64 },

    #[error("empty run: {0}")]
    EmptyRun(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("normalization error: {0}")]
    Normalization(String),

    #[error("division domain error: {0}")]
    DivisionDomain(String),

    #[error("extrapolation: {0}")]
    Extrapolation(String),

    #[error("campaign failed: {0}")]
    Campaign(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericalBlowup { .. }
                | Error::PoissonDivergence { .. }
                | Error::DegenerateTimestep(_)
        )
    }
}
