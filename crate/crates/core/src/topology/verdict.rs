use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::Vector;
use crate::nets::{
    eventually_in_with, monotonicity_with, order_converges, CertificateCheck,
    ConvergenceCertificate, Direction, EventualMembership, Family, Monotonicity,
};
use crate::sets::{member, SetExpr};

/// A sequence that stays in a set from `in_set_from` on and converges to a
/// point outside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureWitness {
    pub family: Family,
    pub direction: Direction,
    pub limit: Vector,
    pub in_set_from: usize,
    pub limit_outside: bool,
    pub monotonicity: Monotonicity,
    /// Present when the family is not monotone and convergence needs its own
    /// evidence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ConvergenceCertificate>,
}

impl ClosureWitness {
    /// Re-checks every stored fact without searching.
    pub fn replay(&self, set: &SetExpr, horizon: usize) -> Result<bool> {
        let mono = monotonicity_with(&self.family, horizon)?;
        if mono.direction != self.direction || mono.direction == Direction::Constant {
            return Ok(false);
        }
        match &self.certificate {
            None => {
                if mono.direction == Direction::Neither {
                    return Ok(false);
                }
                if crate::nets::order_limit(&self.family)? != self.limit {
                    return Ok(false);
                }
            }
            Some(cert) => {
                if cert.family != self.family || cert.limit != self.limit {
                    return Ok(false);
                }
                if cert.revalidate(horizon)? != CertificateCheck::Valid {
                    return Ok(false);
                }
            }
        }
        if member(set, &self.limit)? || !self.limit_outside {
            return Ok(false);
        }
        for v in self
            .family
            .values(self.in_set_from..self.in_set_from + horizon + 1)?
        {
            if !member(set, &v)? {
                return Ok(false);
            }
        }
        Ok(matches!(
            eventually_in_with(&self.family, set, horizon)?,
            EventualMembership::HoldsFrom { index } if index <= self.in_set_from
        ))
    }

    pub(crate) fn with_certificate(mut self) -> Result<Self> {
        self.certificate = order_converges(&self.family, &self.limit)?
            .certificate()
            .cloned();
        Ok(self)
    }
}

/// What an inconclusive search covered.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchReport {
    pub candidates: usize,
    pub by_template: BTreeMap<String, usize>,
    pub limit_points: usize,
    pub grid_scale: u32,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Certified { rule_trace: Vec<String> },
    Refuted { witness: Box<ClosureWitness> },
    Unknown { search_report: SearchReport },
}

impl Verdict {
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Certified { .. } => "certified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Unknown { .. } => "unknown",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&ClosureWitness> {
        match self {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}
