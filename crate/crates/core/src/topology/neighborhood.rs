use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Carrier, Vector};
use crate::nets::{eventually_in_with, EventualMembership, Family};
use crate::rat::Rat;
use crate::sets::{Interval, IntervalSemantics, SetExpr};

/// Open intervals around a center. The first `chain_len` intervals shrink
/// strictly and are nested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CatalogDoc", into = "CatalogDoc")]
pub struct NeighborhoodCatalog {
    center: Vector,
    intervals: Vec<Interval>,
    chain_len: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDoc {
    center: Vector,
    intervals: Vec<Interval>,
    chain_len: usize,
}

impl TryFrom<CatalogDoc> for NeighborhoodCatalog {
    type Error = Error;

    fn try_from(d: CatalogDoc) -> Result<Self> {
        NeighborhoodCatalog::new(d.center, d.intervals, d.chain_len)
    }
}

impl From<NeighborhoodCatalog> for CatalogDoc {
    fn from(c: NeighborhoodCatalog) -> Self {
        CatalogDoc {
            center: c.center,
            intervals: c.intervals,
            chain_len: c.chain_len,
        }
    }
}

impl NeighborhoodCatalog {
    pub fn new(center: Vector, intervals: Vec<Interval>, chain_len: usize) -> Result<Self> {
        if chain_len > intervals.len() {
            return Err(Error::Precondition(format!(
                "chain length {chain_len} exceeds catalog size"
            )));
        }
        for i in &intervals {
            if !i.contains(&center)? {
                return Err(Error::Precondition(format!(
                    "{i} does not contain the center {center}"
                )));
            }
        }
        for w in intervals[..chain_len].windows(2) {
            let (outer, inner) = (&w[0], &w[1]);
            let wo = outer.hi().sub(outer.lo())?;
            let wi = inner.hi().sub(inner.lo())?;
            let nested = outer.lo().leq(inner.lo())? && inner.hi().leq(outer.hi())?;
            if !nested || !wi.lt(&wo)? {
                return Err(Error::Precondition(format!(
                    "{inner} does not strictly refine {outer}"
                )));
            }
        }
        Ok(NeighborhoodCatalog {
            center,
            intervals,
            chain_len,
        })
    }

    /// `(x - e/m, x + e/m)` for `m = 1..=depth`, with `e` the all-ones vector.
    pub fn symmetric_chain(x: &Vector, depth: usize, semantics: IntervalSemantics) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Precondition(
                "catalog depth must be at least 1".into(),
            ));
        }
        let e = Vector::ones(x.carrier());
        let intervals = (1..=depth)
            .map(|m| {
                let h = e.scale(&Rat::new(1, m as i64));
                Interval::open(x.sub(&h)?, x.add(&h)?, semantics)
            })
            .collect::<Result<Vec<_>>>()?;
        NeighborhoodCatalog::new(x.clone(), intervals, depth)
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn chain(&self) -> &[Interval] {
        &self.intervals[..self.chain_len]
    }

    /// The widths `hi_m - lo_m` of the chain as a family in `m`. Only chains
    /// whose widths are `w / (m + 1)` for a fixed `w` are accepted, since
    /// those are the ones whose widths provably decrease to zero.
    pub fn chain_widths(&self) -> Result<Family> {
        let chain = self.chain();
        let Some(first) = chain.first() else {
            return Err(Error::Precondition("the catalog has no chain".into()));
        };
        let w = first.hi().sub(first.lo())?;
        let y = Family::coord_decay(Vector::zero(w.carrier()), w, Rat::zero())?;
        for (m, i) in chain.iter().enumerate() {
            if i.hi().sub(i.lo())? != y.value(m)? {
                return Err(Error::Precondition(format!(
                    "chain width at position {m} is not {}",
                    y.value(m)?
                )));
            }
        }
        Ok(y)
    }
}

/// The symmetric chain, followed by `(x - d e_j, x + d e_j)` for
/// `j <= depth` and `d` in `{1, 1/2}`. Perturbations that are empty under
/// `semantics` are left out.
pub fn neighborhood_catalog(
    x: &Vector,
    depth: usize,
    semantics: IntervalSemantics,
) -> Result<NeighborhoodCatalog> {
    let chain = NeighborhoodCatalog::symmetric_chain(x, depth, semantics)?;
    let mut intervals = chain.intervals;
    let dims = match x.carrier() {
        Carrier::FinDim(n) => n.min(depth),
        Carrier::TailSeq => depth,
    };
    for j in 1..=dims {
        let e = Vector::unit(x.carrier(), j)?;
        for d in [Rat::one(), Rat::new(1, 2)] {
            let h = e.scale(&d);
            match Interval::open(x.sub(&h)?, x.add(&h)?, semantics) {
                Ok(i) => intervals.push(i),
                Err(Error::InvalidInterval(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    NeighborhoodCatalog::new(x.clone(), intervals, depth)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum TauEReport {
    /// The family leaves `interval` infinitely often, so it cannot converge
    /// in the interval topology.
    RefutedBy {
        position: usize,
        interval: Interval,
        outside_from: usize,
    },
    /// Every catalog interval eventually contains the family; this is
    /// evidence over the catalog only.
    Consistent {
        thresholds: Vec<usize>,
    },
    Unknown {
        position: usize,
        reason: String,
    },
}

pub fn tau_e_convergence_report(
    f: &Family,
    x: &Vector,
    cat: &NeighborhoodCatalog,
    horizon: usize,
) -> Result<TauEReport> {
    if cat.center() != x {
        return Err(Error::Precondition(format!(
            "catalog is centered at {}, not {x}",
            cat.center()
        )));
    }
    x.check_carrier(f.carrier()?)?;
    let mut thresholds = Vec::with_capacity(cat.intervals().len());
    for (position, i) in cat.intervals().iter().enumerate() {
        match eventually_in_with(f, &SetExpr::interval(i.clone()), horizon)? {
            EventualMembership::HoldsFrom { index } => thresholds.push(index),
            EventualMembership::FailsInfinitely { witness } => {
                return Ok(TauEReport::RefutedBy {
                    position,
                    interval: i.clone(),
                    outside_from: witness,
                })
            }
            EventualMembership::Unknown { reason } => {
                return Ok(TauEReport::Unknown { position, reason })
            }
        }
    }
    Ok(TauEReport::Consistent { thresholds })
}
