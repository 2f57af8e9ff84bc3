//! Order topologies on rational vector lattices.

pub mod config;
pub mod error;
pub mod lattice;
pub mod nets;
pub mod rat;
pub mod sets;
pub mod theorems;
pub mod topology;

pub use config::SearchConfig;
pub use error::{Error, Result};
pub use lattice::{Axis, Carrier, Vector};
pub use rat::Rat;
pub use sets::{Interval, IntervalKind, IntervalSemantics, Relation, SetExpr};
