use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not a valid {group} element: {reason}")]
    InvalidGroupElement { group: String, reason: String },

    #[error("operation does not support the {0} group tag")]
    UnsupportedGroup(String),

    #[error("spectral parameter lies within {dist:.3e} of a Gamma pole")]
    PoleProximity { dist: f64 },

    #[error("integral converges only for Re(i*lambda) > 0; got {0:.3e}")]
    ConvergenceDomain(f64),

    #[error("multiplicity pair (m_alpha, m_2alpha) = ({0}, {1}) violates the parity constraints")]
    BadMultiplicities(u32, u32),

    #[error("boundary points too close: chord distance {0:.3e} < 1e-8")]
    CoincidentBoundary(f64),

    #[error("point lies outside the open unit disk: |z| = {0}")]
    OutsideDisk(f64),

    #[error("invalid quadrature grid: {0}")]
    InvalidGrid(String),

    #[error("finite-difference step too large: h = {0} (maximum 1e-2)")]
    StepTooLarge(f64),

    #[error("quadrature truncation insufficient: {0}")]
    InsufficientTruncation(String),

    #[error("coincident atoms across the two boundary factors at angle {0}")]
    CoincidentAtoms(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("magnitude {0:.3e} is below the residual floor")]
    BelowFloor(f64),

    #[error("node budget exceeded: {got} nodes > ceiling {limit}")]
    NodeBudget { got: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
