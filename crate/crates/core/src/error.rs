use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("packet does not fit on the grid: {0}")]
    PacketOutsideGrid(String),

    #[error("boundary tail mass {mass:.3e} exceeds {limit:.1e} at t = {t:.4}")]
    BoundaryMass { t: f64, mass: f64, limit: f64 },

    #[error("field has dimension {found}, operation needs {expected}")]
    Dimension { expected: usize, found: usize },

    #[error("lowest two states do not form an even/odd pair (parities {0:?})")]
    ParityMismatch([i8; 2]),

    #[error("antisymmetrized state has norm {0:.3e} before renormalization")]
    DegenerateAntisymmetrization(f64),

    #[error("channels are not decoupled at t = {t}: separation off its asymptote by {offset:.3e}")]
    NotDecoupled { t: f64, offset: f64 },

    #[error("unknown experiment `{name}`; valid recipes: {}", valid.join(", "))]
    UnknownRecipe { name: String, valid: Vec<String> },

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    InvalidConfig(Vec<String>),

    #[error("config parse error: {0}")]
    ConfigParse(#[from] toml::de::Error),

    #[error("config serialization error: {0}")]
    ConfigEmit(#[from] toml::ser::Error),

    #[error("csv output error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
