use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operand does not carry enough working precision for the request.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    /// Unsupported constant, parameter, or series name.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Expression syntax error with byte offset into the source text.
    #[error("syntax error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A series truncation could not certify its tail (observed term ratio >= 1).
    #[error("tail bound failure: {0}")]
    TailBound(String),

    /// The two independent alternating-series accelerators disagree.
    #[error("acceleration methods disagree at the requested precision: CVZ={cvz} Euler={euler}")]
    AccelerationDisagreement { cvz: String, euler: String },

    /// Quadrature failed to converge within the level budget.
    #[error("quadrature did not converge: achieved about {achieved_digits} digits after level {levels}")]
    QuadratureNonConvergence { achieved_digits: i64, levels: u32 },

    /// Registry file problem (parse error, duplicate id, bad parameter).
    #[error("registry error at line {line}: {msg}")]
    Registry { line: usize, msg: String },

    /// Lookup of an unknown registry id.
    #[error("unknown id: {0}")]
    UnknownId(String),
}

pub type Result<T> = std::result::Result<T, Error>;
