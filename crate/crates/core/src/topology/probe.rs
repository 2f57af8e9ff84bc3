use serde::{Deserialize, Serialize};

use super::closure::is_order_open;
use super::verdict::Verdict;
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::lattice::{Carrier, Vector};
use crate::rat::Rat;
use crate::sets::SetExpr;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    Translate(Vector),
    Dilate(Rat),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeEntry {
    pub transform: Transform,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorTopologyReport {
    pub entries: Vec<ProbeEntry>,
    pub refuted: usize,
}

/// Openness of every translate `S + a` and dilate `t S` of an open set.
pub fn vector_topology_probe(
    set: &SetExpr,
    shifts: &[Vector],
    scalars: &[Rat],
    carrier: Carrier,
    cfg: &SearchConfig,
) -> Result<VectorTopologyReport> {
    if !is_order_open(set, carrier, cfg)?.is_certified() {
        return Err(Error::Precondition(
            "the set is not certified open in the quasi-order topology".into(),
        ));
    }
    let mut entries = Vec::new();
    for a in shifts {
        let verdict = is_order_open(&SetExpr::translate(set.clone(), a.clone()), carrier, cfg)?;
        entries.push(ProbeEntry {
            transform: Transform::Translate(a.clone()),
            verdict,
        });
    }
    for t in scalars {
        let verdict = is_order_open(&SetExpr::dilate(set.clone(), t.clone())?, carrier, cfg)?;
        entries.push(ProbeEntry {
            transform: Transform::Dilate(t.clone()),
            verdict,
        });
    }
    let refuted = entries.iter().filter(|e| e.verdict.is_refuted()).count();
    Ok(VectorTopologyReport { entries, refuted })
}
