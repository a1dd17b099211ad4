use thiserror::Error;

/// Errors surfaced by state builders, the evaluation engine and the scene
/// layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("Fock index {0} exceeds the supported maximum of {1}")]
    FockTooLarge(u32, u32),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("state has (near-)zero norm; orbitals are linearly dependent")]
    ZeroNorm,

    #[error("state is not normalized: <psi|psi> = {0}")]
    NotNormalized(f64),

    #[error("plan does not match signature: {0}")]
    SignatureMismatch(String),

    #[error("no angle assigned to equal-angle group {0}")]
    MissingAngle(u8),

    #[error("position marginal vanishes on the whole grid; no opacity reference")]
    AllZeroMarginal,

    #[error("degenerate camera: {0}")]
    DegenerateCamera(String),

    #[error("dense basis dimension {0} exceeds the oracle limit of {1}")]
    DimensionOverflow(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("scene JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("PNG encoding: {0}")]
    Png(String),
}
