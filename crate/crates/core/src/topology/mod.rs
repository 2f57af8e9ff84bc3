//! The quasi-order topology and the interval topology: closedness and
//! openness verdicts, neighborhood catalogs, and interval fitting.

mod closure;
mod fit;
mod neighborhood;
mod probe;
mod verdict;

pub use closure::{check_order_closed, check_quasi_order_closed, is_order_open};
pub use fit::{box_samples, interval_fit, FitEvidence, IntervalFit};
pub use neighborhood::{
    neighborhood_catalog, tau_e_convergence_report, NeighborhoodCatalog, TauEReport,
};
pub use probe::{vector_topology_probe, ProbeEntry, Transform, VectorTopologyReport};
pub use verdict::{ClosureWitness, SearchReport, Verdict};
