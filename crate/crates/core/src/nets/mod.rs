//! Sequences with closed-form tails: monotonicity, limits, and
//! order-convergence certificates.

mod convergence;
mod family;
mod profile;

pub use convergence::{
    dominating_family, eventually_in, eventually_in_with, monotonicity, monotonicity_with,
    order_converges, order_limit, running_sup_meet, CertificateCheck, ConvergenceCertificate,
    ConvergenceOutcome, Direction, Domination, EventualMembership, Monotonicity, DEFAULT_HORIZON,
};
pub use family::Family;

pub(crate) use convergence::coordinate_limit;
