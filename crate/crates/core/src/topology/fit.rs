use serde::{Deserialize, Serialize};

use super::closure::is_order_open;
use super::verdict::Verdict;
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::lattice::{Carrier, Vector};
use crate::rat::Rat;
use crate::sets::{box_containment, member, Containment, Interval, IntervalSemantics, SetExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FitEvidence {
    /// The closed box `[a, b]` is contained in the set, decided exactly.
    Exact,
    /// Every one of `samples` interior grid points lies in the set.
    Sampled { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalFit {
    pub interval: Interval,
    /// The half-width is `2^-shrink` times the all-ones vector.
    pub shrink: u32,
    pub evidence: FitEvidence,
}

/// Finds `(c - e/2^t, c + e/2^t)` inside `set` for the least `t` within the
/// budget whose containment can be established.
pub fn interval_fit(
    c: &Vector,
    set: &SetExpr,
    semantics: IntervalSemantics,
    cfg: &SearchConfig,
) -> Result<Option<IntervalFit>> {
    let carrier = c.carrier();
    set.check_carrier(carrier)?;
    if !member(set, c)? {
        return Err(Error::Precondition(format!("{c} is not in the set")));
    }
    if let Verdict::Refuted { .. } = is_order_open(set, carrier, cfg)? {
        return Err(Error::Precondition(
            "the set is not open in the quasi-order topology".into(),
        ));
    }
    let e = Vector::ones(carrier);
    for t in 0..=cfg.fit_budget {
        let h = e.scale(&Rat::new(1, 1i64 << t));
        let (a, b) = (c.sub(&h)?, c.add(&h)?);
        let evidence = match box_containment(&a, &b, set)? {
            Containment::Exact(true) => Some(FitEvidence::Exact),
            Containment::Exact(false) => None,
            Containment::Unknown => sampled(&a, &b, set, cfg.fit_samples, set.max_prefix())?,
        };
        if let Some(evidence) = evidence {
            return Ok(Some(IntervalFit {
                interval: Interval::open(a, b, semantics)?,
                shrink: t,
                evidence,
            }));
        }
    }
    Ok(None)
}

/// Interior grid points of the box `[a, b]`: `g` evenly spaced values per
/// free coordinate with `g^dims >= samples`.
pub fn box_samples(a: &Vector, b: &Vector, samples: usize, width: usize) -> Vec<Vector> {
    let width = match a.carrier() {
        Carrier::FinDim(n) => n,
        Carrier::TailSeq => width.max(a.prefix_len()).max(b.prefix_len()),
    };
    let dims = width + usize::from(a.carrier() == Carrier::TailSeq);
    let mut g = 2usize;
    while g.checked_pow(dims as u32).is_some_and(|p| p < samples) {
        g += 1;
    }
    let (pa, pb) = (a.padded(width), b.padded(width));
    let mut axes: Vec<Vec<Rat>> = (0..width).map(|i| ticks(&pa[i], &pb[i], g)).collect();
    if let (Some(ta), Some(tb)) = (a.tail(), b.tail()) {
        axes.push(ticks(ta, tb, g));
    }
    let mut points: Vec<Vec<Rat>> = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    points
        .into_iter()
        .map(|mut p| match a.carrier() {
            Carrier::FinDim(_) => Vector::fin_dim(p),
            Carrier::TailSeq => {
                let tail = p.pop().expect("tail value");
                Vector::tail_seq(p, tail)
            }
        })
        .collect()
}

fn ticks(lo: &Rat, hi: &Rat, g: usize) -> Vec<Rat> {
    let span = hi - lo;
    (1..=g)
        .map(|i| lo + &(&span * &Rat::new(i as i64, g as i64 + 1)))
        .collect()
}

fn sampled(
    a: &Vector,
    b: &Vector,
    set: &SetExpr,
    samples: usize,
    width: usize,
) -> Result<Option<FitEvidence>> {
    let pts = box_samples(a, b, samples, width);
    for p in &pts {
        if !member(set, p)? {
            return Ok(None);
        }
    }
    Ok(Some(FitEvidence::Sampled { samples: pts.len() }))
}
