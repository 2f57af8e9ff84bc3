use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::SearchConfig;
use crate::error::Result;
use crate::lattice::{Carrier, Vector};
use crate::nets::{
    eventually_in_with, monotonicity_with, order_converges, order_limit, running_sup_meet,
    CertificateCheck, ConvergenceCertificate, ConvergenceOutcome, Direction, EventualMembership,
    Family, Monotonicity,
};
use crate::rat::Rat;
use crate::sets::{member, IntervalSemantics, SetExpr};
use crate::topology::{
    check_order_closed, check_quasi_order_closed, interval_fit, is_order_open,
    tau_e_convergence_report, vector_topology_probe, IntervalFit, NeighborhoodCatalog, TauEReport,
    VectorTopologyReport, Verdict,
};

/// One library call recorded with its inputs. Search knobs come from the
/// report's `config`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Operation {
    MonotoneLimit {
        family: Family,
    },
    EventuallyIn {
        family: Family,
        set: SetExpr,
    },
    IsOrderOpen {
        set: SetExpr,
        carrier: Carrier,
    },
    QuasiOrderClosed {
        set: SetExpr,
        carrier: Carrier,
    },
    OrderClosed {
        set: SetExpr,
        carrier: Carrier,
    },
    TauEConvergence {
        family: Family,
        x: Vector,
        catalog: NeighborhoodCatalog,
    },
    OrderConverges {
        family: Family,
        x: Vector,
    },
    RevalidateCertificate {
        certificate: ConvergenceCertificate,
    },
    SupMeetProbe {
        base: Family,
        cap: Vector,
        set: SetExpr,
    },
    IntervalFits {
        set: SetExpr,
        points: Vec<Vector>,
        semantics: IntervalSemantics,
    },
    VectorTopology {
        set: SetExpr,
        shifts: Vec<Vector>,
        scalars: Vec<Rat>,
        carrier: Carrier,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Outcome {
    Monotone {
        monotonicity: Monotonicity,
        limit: Option<Vector>,
    },
    /// `outside` lists the indices up to the horizon whose value is not in
    /// the set, found by direct evaluation.
    Membership {
        membership: EventualMembership,
        horizon: usize,
        outside: Vec<usize>,
    },
    /// `witness_replays` is set for refutations.
    Closure {
        verdict: Verdict,
        witness_replays: Option<bool>,
    },
    TauE {
        report: TauEReport,
    },
    Convergence {
        outcome: ConvergenceOutcome,
        check: Option<CertificateCheck>,
    },
    Certificate {
        check: CertificateCheck,
    },
    SupMeet {
        family: Family,
        direction: Direction,
        membership: EventualMembership,
        limit: Option<Vector>,
        limit_in_set: bool,
    },
    Fits {
        fits: Vec<Option<IntervalFit>>,
    },
    VectorTopology {
        report: VectorTopologyReport,
    },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::MonotoneLimit { .. } => "monotone-limit",
            Operation::EventuallyIn { .. } => "eventually-in",
            Operation::IsOrderOpen { .. } => "is-order-open",
            Operation::QuasiOrderClosed { .. } => "quasi-order-closed",
            Operation::OrderClosed { .. } => "order-closed",
            Operation::TauEConvergence { .. } => "tau-e-convergence",
            Operation::OrderConverges { .. } => "order-converges",
            Operation::RevalidateCertificate { .. } => "revalidate-certificate",
            Operation::SupMeetProbe { .. } => "sup-meet-probe",
            Operation::IntervalFits { .. } => "interval-fits",
            Operation::VectorTopology { .. } => "vector-topology",
        }
    }

    pub fn execute(&self, cfg: &SearchConfig) -> Result<Outcome> {
        let horizon = cfg.horizon;
        Ok(match self {
            Operation::MonotoneLimit { family } => {
                let monotonicity = monotonicity_with(family, horizon)?;
                let limit = match monotonicity.direction {
                    Direction::Neither => None,
                    _ => Some(order_limit(family)?),
                };
                Outcome::Monotone {
                    monotonicity,
                    limit,
                }
            }
            Operation::EventuallyIn { family, set } => {
                let membership = eventually_in_with(family, set, horizon)?;
                let mut outside = Vec::new();
                for (k, v) in family.values(0..horizon + 1)?.iter().enumerate() {
                    if !member(set, v)? {
                        outside.push(k);
                    }
                }
                Outcome::Membership {
                    membership,
                    horizon,
                    outside,
                }
            }
            Operation::IsOrderOpen { set, carrier } => {
                let verdict = is_order_open(set, *carrier, cfg)?;
                closure(verdict, &SetExpr::complement(set.clone()), horizon)?
            }
            Operation::QuasiOrderClosed { set, carrier } => {
                closure(check_quasi_order_closed(set, *carrier, cfg)?, set, horizon)?
            }
            Operation::OrderClosed { set, carrier } => {
                closure(check_order_closed(set, *carrier, cfg)?, set, horizon)?
            }
            Operation::TauEConvergence { family, x, catalog } => Outcome::TauE {
                report: tau_e_convergence_report(family, x, catalog, horizon)?,
            },
            Operation::OrderConverges { family, x } => {
                let outcome = order_converges(family, x)?;
                let check = outcome
                    .certificate()
                    .map(|c| c.revalidate(horizon))
                    .transpose()?;
                Outcome::Convergence { outcome, check }
            }
            Operation::RevalidateCertificate { certificate } => Outcome::Certificate {
                check: certificate.revalidate(horizon)?,
            },
            Operation::SupMeetProbe { base, cap, set } => {
                let family = running_sup_meet(base, cap)?;
                let direction = monotonicity_with(&family, horizon)?.direction;
                let membership = eventually_in_with(&family, set, horizon)?;
                let limit = match direction {
                    Direction::Neither => None,
                    _ => Some(order_limit(&family)?),
                };
                let limit_in_set = match &limit {
                    Some(l) => member(set, l)?,
                    None => false,
                };
                Outcome::SupMeet {
                    family,
                    direction,
                    membership,
                    limit,
                    limit_in_set,
                }
            }
            Operation::IntervalFits {
                set,
                points,
                semantics,
            } => Outcome::Fits {
                fits: points
                    .iter()
                    .map(|c| interval_fit(c, set, *semantics, cfg))
                    .collect::<Result<_>>()?,
            },
            Operation::VectorTopology {
                set,
                shifts,
                scalars,
                carrier,
            } => Outcome::VectorTopology {
                report: vector_topology_probe(set, shifts, scalars, *carrier, cfg)?,
            },
        })
    }
}

fn closure(verdict: Verdict, closed_set: &SetExpr, horizon: usize) -> Result<Outcome> {
    let witness_replays = verdict
        .witness()
        .map(|w| w.replay(closed_set, horizon))
        .transpose()?;
    Ok(Outcome::Closure {
        verdict,
        witness_replays,
    })
}

impl Outcome {
    /// A one-line description for the text rendering.
    pub fn summary(&self) -> String {
        match self {
            Outcome::Monotone {
                monotonicity,
                limit,
            } => match limit {
                Some(l) => format!("{} with limit {l}", kebab(&monotonicity.direction)),
                None => "not monotone".into(),
            },
            Outcome::Membership { membership, .. } => membership_summary(membership),
            Outcome::Closure {
                verdict,
                witness_replays,
            } => match (verdict.witness(), witness_replays) {
                (Some(w), Some(r)) => format!(
                    "refuted by {} family {} tending to {}, witness {}",
                    kebab(&w.direction),
                    w.family,
                    w.limit,
                    if *r { "replays" } else { "does not replay" }
                ),
                _ => verdict.status().into(),
            },
            Outcome::TauE { report } => match report {
                TauEReport::RefutedBy {
                    interval,
                    outside_from,
                    ..
                } => {
                    format!("refuted by {interval}, outside from index {outside_from}")
                }
                TauEReport::Consistent { thresholds } => {
                    format!("consistent, thresholds {thresholds:?}")
                }
                TauEReport::Unknown { reason, .. } => format!("unknown: {reason}"),
            },
            Outcome::Convergence { outcome, check } => match (outcome, check) {
                (ConvergenceOutcome::Converges { certificate }, Some(c)) => {
                    format!(
                        "converges, dominated by {}, certificate {}",
                        certificate.dominating,
                        check_word(c)
                    )
                }
                (
                    ConvergenceOutcome::Refuted {
                        axis,
                        coordinate_limit,
                        target,
                    },
                    _,
                ) => {
                    format!("refuted: coordinate {axis} tends to {coordinate_limit}, not {target}")
                }
                (ConvergenceOutcome::Unknown { reason }, _) => format!("unknown: {reason}"),
                _ => "converges".into(),
            },
            Outcome::Certificate { check } => format!("certificate {}", check_word(check)),
            Outcome::SupMeet {
                family,
                membership,
                limit_in_set,
                ..
            } => format!(
                "{family}: {}, limit {}",
                membership_summary(membership),
                if *limit_in_set {
                    "in the set"
                } else {
                    "outside the set"
                }
            ),
            Outcome::Fits { fits } => {
                let found = fits.iter().filter(|f| f.is_some()).count();
                let worst = fits.iter().flatten().map(|f| f.shrink).max().unwrap_or(0);
                format!(
                    "{found} of {} points fitted, largest shrink {worst}",
                    fits.len()
                )
            }
            Outcome::VectorTopology { report } => {
                let certified = report
                    .entries
                    .iter()
                    .filter(|e| e.verdict.is_certified())
                    .count();
                format!(
                    "{certified} of {} images certified open, {} refuted",
                    report.entries.len(),
                    report.refuted
                )
            }
        }
    }
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

fn check_word(c: &CertificateCheck) -> String {
    match c {
        CertificateCheck::Valid => "valid".into(),
        CertificateCheck::Invalid { reason } => format!("invalid ({reason})"),
        CertificateCheck::Unknown { reason } => format!("unknown ({reason})"),
    }
}

fn membership_summary(m: &EventualMembership) -> String {
    match m {
        EventualMembership::HoldsFrom { index } => format!("in the set from index {index}"),
        EventualMembership::FailsInfinitely { witness } => {
            format!("outside the set from index {witness}")
        }
        EventualMembership::Unknown { reason } => format!("unknown: {reason}"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepStatus {
    /// The outcome is the one the statement predicts.
    Passed,
    /// The outcome is decided and differs from the prediction.
    Failed,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub operation: Operation,
    pub outcome: Outcome,
    pub status: StepStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    Confirmed,
    CounterexampleFound,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub statement: String,
    pub inputs: Value,
    pub config: SearchConfig,
    pub steps: Vec<Step>,
    pub conclusion: Conclusion,
    /// A decided outcome disagrees with the published statement.
    pub contradicts_claim: bool,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub(crate) fn new(
        theorem_id: &str,
        statement: &str,
        inputs: Value,
        cfg: &SearchConfig,
    ) -> Self {
        TheoremReport {
            theorem_id: theorem_id.into(),
            statement: statement.into(),
            inputs,
            config: cfg.clone(),
            steps: Vec::new(),
            conclusion: Conclusion::Inconclusive,
            contradicts_claim: false,
            notes: Vec::new(),
        }
    }

    /// Runs `op`, judges its outcome, records the step and returns the outcome.
    pub(crate) fn run(
        &mut self,
        op: Operation,
        judge: impl FnOnce(&Outcome) -> StepStatus,
    ) -> Result<Outcome> {
        let outcome = op.execute(&self.config)?;
        let status = judge(&outcome);
        self.steps.push(Step {
            operation: op,
            outcome: outcome.clone(),
            status,
        });
        Ok(outcome)
    }

    /// Confirmed when every step passed, a counterexample when one failed.
    pub(crate) fn conclude_from_steps(&mut self) {
        if self.steps.iter().any(|s| s.status == StepStatus::Failed) {
            self.conclusion = Conclusion::CounterexampleFound;
            self.contradicts_claim = true;
        } else if self.steps.iter().all(|s| s.status == StepStatus::Passed) {
            self.conclusion = Conclusion::Confirmed;
        } else {
            self.conclusion = Conclusion::Inconclusive;
        }
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Re-executes every stored operation and compares outcomes. A confirmed
    /// report must also have every step passed.
    pub fn revalidate(&self) -> Result<bool> {
        for step in &self.steps {
            if step.operation.execute(&self.config)? != step.outcome {
                return Ok(false);
            }
        }
        Ok(self.conclusion != Conclusion::Confirmed
            || self.steps.iter().all(|s| s.status == StepStatus::Passed))
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theorem {}", self.theorem_id);
        let _ = writeln!(out, "  {}", self.statement);
        for (i, s) in self.steps.iter().enumerate() {
            let _ = writeln!(
                out,
                "  step {} {} [{}]: {}",
                i + 1,
                s.operation.name(),
                kebab(&s.status),
                s.outcome.summary()
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        let _ = writeln!(out, "conclusion: {}", kebab(&self.conclusion));
        if self.contradicts_claim {
            let _ = writeln!(out, "CONTRADICTS THE PUBLISHED CLAIM");
        }
        out
    }
}
