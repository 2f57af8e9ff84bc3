use thiserror::Error;

use crate::lattice::Carrier;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier mismatch: expected {expected}, found {found}")]
    CarrierMismatch { expected: Carrier, found: Carrier },

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    #[error("coordinate axis {axis} is out of range for {carrier}")]
    AxisOutOfRange { axis: String, carrier: Carrier },

    #[error("expected a positive vector: {0}")]
    NotPositive(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("family is not monotone")]
    NonMonotone,

    #[error("family does not order-converge to the given vector: {0}")]
    NotConvergent(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
