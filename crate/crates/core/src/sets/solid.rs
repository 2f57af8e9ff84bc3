use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{member, IntervalKind, SetExpr};
use crate::config::{dedup_in_order, SearchConfig};
use crate::error::Result;
use crate::lattice::{Carrier, Vector};
use crate::rat::Rat;

/// Outcome of a solidity check. A refutation carries `x` in the set and `y`
/// outside it with `|y| <= |x|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SolidityVerdict {
    Certified { rule_trace: Vec<String> },
    Refuted { x: Vector, y: Vector },
    Unknown { candidates_searched: usize },
}

impl SolidityVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, SolidityVerdict::Certified { .. })
    }

    /// Re-checks a refutation witness from scratch.
    pub fn replay(&self, set: &SetExpr) -> Result<bool> {
        match self {
            SolidityVerdict::Refuted { x, y } => {
                Ok(y.abs().leq(&x.abs())? && member(set, x)? && !member(set, y)?)
            }
            _ => Ok(true),
        }
    }
}

fn solid_rule(set: &SetExpr, trace: &mut Vec<String>) -> bool {
    let ok = match set {
        SetExpr::Ideal(_) => true,
        SetExpr::Band(_) => true,
        SetExpr::SolidHull(_) => true,
        SetExpr::TailZero => true,
        SetExpr::Interval(i) => i.kind() == IntervalKind::Closed && *i.lo() == i.hi().negate(),
        SetExpr::Union(v) | SetExpr::Intersection(v) => v.iter().all(|s| solid_rule(s, trace)),
        SetExpr::Dilate(s, _) => solid_rule(s, trace),
        _ => false,
    };
    if ok {
        trace.push(rule_name(set).into());
    }
    ok
}

fn rule_name(set: &SetExpr) -> &'static str {
    match set {
        SetExpr::Ideal(_) => "ideal",
        SetExpr::Band(_) => "band",
        SetExpr::SolidHull(_) => "solid-hull",
        SetExpr::TailZero => "tail-zero ideal",
        SetExpr::Interval(_) => "symmetric closed interval",
        SetExpr::Union(_) => "union of solid sets",
        SetExpr::Intersection(_) => "intersection of solid sets",
        SetExpr::Dilate(..) => "dilation of a solid set",
        _ => "",
    }
}

/// Candidates `y` with `|y| <= |x|`, in a fixed order.
fn dominated_by(x: &Vector) -> Vec<Vector> {
    let half = Rat::new(1, 2);
    let mut out = vec![
        x.negate(),
        x.pos(),
        x.neg(),
        x.pos().negate(),
        x.neg().negate(),
        Vector::zero(x.carrier()),
        x.scale(&half),
        x.scale(&-half),
    ];
    let n = x.prefix_len();
    for i in 0..n {
        let mut flipped = x.coords().to_vec();
        flipped[i] = -&flipped[i];
        let mut zeroed = x.coords().to_vec();
        zeroed[i] = Rat::zero();
        match x.tail() {
            None => {
                out.push(Vector::fin_dim(flipped));
                out.push(Vector::fin_dim(zeroed));
            }
            Some(t) => {
                out.push(Vector::tail_seq(flipped, t.clone()));
                out.push(Vector::tail_seq(zeroed, t.clone()));
            }
        }
    }
    if let Some(t) = x.tail() {
        out.push(Vector::tail_seq(x.coords().to_vec(), -t));
        out.push(Vector::tail_seq(x.coords().to_vec(), Rat::zero()));
    }
    out
}

pub fn check_solid(set: &SetExpr) -> Result<SolidityVerdict> {
    check_solid_with(
        set,
        set.carrier_hint().unwrap_or(Carrier::FinDim(1)),
        &SearchConfig::default(),
    )
}

/// Structural rules first, then a witness search over seed vectors of the
/// set followed by the configured grid.
pub fn check_solid_with(
    set: &SetExpr,
    carrier: Carrier,
    cfg: &SearchConfig,
) -> Result<SolidityVerdict> {
    set.check_carrier(carrier)?;
    let mut trace = Vec::new();
    if solid_rule(set, &mut trace) {
        return Ok(SolidityVerdict::Certified { rule_trace: trace });
    }
    let mut seeds = Vec::new();
    set.visit_vectors(&mut |v| seeds.push(v.clone()));
    seeds.push(Vector::ones(carrier));
    seeds.extend(cfg.grid_points(carrier));
    let seeds = dedup_in_order(seeds);
    let found = seeds
        .par_iter()
        .map(|x| -> Result<Option<(Vector, Vector)>> {
            if !member(set, x)? {
                return Ok(None);
            }
            for y in dominated_by(x) {
                if !member(set, &y)? {
                    return Ok(Some((x.clone(), y)));
                }
            }
            Ok(None)
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(Ok(Some((x, y)))) => Ok(SolidityVerdict::Refuted { x, y }),
        Some(Err(e)) => Err(e),
        _ => Ok(SolidityVerdict::Unknown {
            candidates_searched: seeds.len(),
        }),
    }
}
