use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::report::{Conclusion, Operation, Outcome, StepStatus, TheoremReport};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::lattice::{Carrier, Vector};
use crate::nets::{
    CertificateCheck, ConvergenceCertificate, ConvergenceOutcome, Direction, Domination,
    EventualMembership, Family,
};
use crate::rat::Rat;
use crate::sets::{member, Interval, IntervalSemantics, SetExpr};
use crate::topology::{
    neighborhood_catalog, tau_e_convergence_report, NeighborhoodCatalog, TauEReport, Verdict,
};

pub const EXAMPLE_E1: &str = "example-e1";
pub const THEOREM_T1: &str = "t1";
pub const BAND: &str = "band";
pub const TAU_SUBSET: &str = "tau-subset";
pub const VECTOR_TOPOLOGY: &str = "vector-topology";

fn passed_if(ok: bool) -> StepStatus {
    if ok {
        StepStatus::Passed
    } else {
        StepStatus::Failed
    }
}

fn closure_status(o: &Outcome, expect_refuted: bool) -> StepStatus {
    match o {
        Outcome::Closure {
            verdict: Verdict::Certified { .. },
            ..
        } => passed_if(!expect_refuted),
        Outcome::Closure {
            verdict: Verdict::Refuted { .. },
            witness_replays,
        } => passed_if(expect_refuted && *witness_replays == Some(true)),
        _ => StepStatus::Undecided,
    }
}

/// The shift sequence in tail sequences, checked against `(-e1, e1)`.
pub fn verify_example_e1() -> Result<TheoremReport> {
    verify_example_e1_with(IntervalSemantics::StrictPartial, &SearchConfig::default())
}

pub fn verify_example_e1_with(
    semantics: IntervalSemantics,
    cfg: &SearchConfig,
) -> Result<TheoremReport> {
    let mut r = TheoremReport::new(
        EXAMPLE_E1,
        "In tail sequences the shift sequence decreases in order to zero, yet no term lies in (-e1, e1); \
         that interval is open for the interval topology and not for the quasi-order topology.",
        json!({ "semantics": semantics }),
        cfg,
    );
    let shift = Family::shift();
    let zero = Vector::zero(Carrier::TailSeq);
    r.run(
        Operation::MonotoneLimit {
            family: shift.clone(),
        },
        |o| match o {
            Outcome::Monotone {
                monotonicity,
                limit,
            } => passed_if(
                monotonicity.direction == Direction::Decreasing && limit.as_ref() == Some(&zero),
            ),
            _ => StepStatus::Failed,
        },
    )?;

    let e1 = Vector::tail_ints(&[1], 0);
    let interval = match Interval::open(e1.negate(), e1.clone(), semantics) {
        Ok(i) => i,
        Err(Error::InvalidInterval(_)) => {
            r.note("interval empty under this semantics");
            r.conclusion = Conclusion::Inconclusive;
            return Ok(r);
        }
        Err(e) => return Err(e),
    };
    let open = SetExpr::interval(interval.clone());

    r.run(
        Operation::EventuallyIn {
            family: shift.clone(),
            set: SetExpr::complement(open.clone()),
        },
        |o| match o {
            Outcome::Membership {
                membership: EventualMembership::HoldsFrom { index },
                outside,
                ..
            } => passed_if(*index <= 1 && outside.iter().all(|&k| k < 1)),
            Outcome::Membership {
                membership: EventualMembership::FailsInfinitely { .. },
                ..
            } => StepStatus::Failed,
            _ => StepStatus::Undecided,
        },
    )?;

    r.run(
        Operation::IsOrderOpen {
            set: open,
            carrier: Carrier::TailSeq,
        },
        |o| closure_status(o, true),
    )?;

    let single = NeighborhoodCatalog::new(zero.clone(), vec![interval.clone()], 0)?;
    r.run(
        Operation::TauEConvergence {
            family: shift,
            x: zero,
            catalog: single,
        },
        |o| match o {
            Outcome::TauE {
                report: TauEReport::RefutedBy { interval: i, .. },
            } => passed_if(*i == interval),
            Outcome::TauE {
                report: TauEReport::Consistent { .. },
            } => StepStatus::Failed,
            _ => StepStatus::Undecided,
        },
    )?;
    r.conclude_from_steps();
    Ok(r)
}

/// Convergence over a shrinking chain of intervals, turned into an order
/// convergence certificate whose dominating family is the chain widths.
pub fn verify_theorem_t1(
    f: &Family,
    x: &Vector,
    chain: &NeighborhoodCatalog,
    cfg: &SearchConfig,
) -> Result<TheoremReport> {
    f.validate()?;
    x.check_carrier(f.carrier()?)?;
    let widths = chain.chain_widths()?;
    let mut r = TheoremReport::new(
        THEOREM_T1,
        "A family converging in the interval topology converges in order; the widths of the shrinking \
         intervals dominate its deviation from the limit.",
        json!({ "family": f, "x": x, "chain": chain }),
        cfg,
    );
    r.note(
        "the directed set of all intervals around x is replaced by the supplied countable chain",
    );
    let links = chain.chain().to_vec();
    let semantics = links[0].semantics();
    let len = links.len();
    let chain_only = NeighborhoodCatalog::new(x.clone(), links, len)?;
    let consistent = |o: &Outcome| match o {
        Outcome::TauE {
            report: TauEReport::Consistent { .. },
        } => StepStatus::Passed,
        _ => StepStatus::Undecided,
    };
    let thresholds = match r.run(
        Operation::TauEConvergence {
            family: f.clone(),
            x: x.clone(),
            catalog: chain_only,
        },
        consistent,
    )? {
        Outcome::TauE {
            report: TauEReport::Consistent { thresholds },
        } => thresholds,
        _ => {
            r.note("hypothesis unmet: the family does not stay in every chain interval");
            return Ok(r);
        }
    };
    // the verdict rests on the chain; perturbed intervals are only reported
    let full = neighborhood_catalog(x, len, semantics)?;
    if let TauEReport::RefutedBy { interval, .. } =
        tau_e_convergence_report(f, x, &full, cfg.horizon)?
    {
        r.note(format!(
            "outside the chain, {interval} is not eventually entered by the family"
        ));
    }
    let certificate = ConvergenceCertificate {
        family: f.clone(),
        limit: x.clone(),
        dominating: widths,
        domination: Domination::Thresholds(thresholds),
    };
    r.run(
        Operation::RevalidateCertificate { certificate },
        |o| match o {
            Outcome::Certificate {
                check: CertificateCheck::Valid,
            } => StepStatus::Passed,
            Outcome::Certificate {
                check: CertificateCheck::Invalid { .. },
            } => StepStatus::Failed,
            _ => StepStatus::Undecided,
        },
    )?;
    r.run(
        Operation::OrderConverges {
            family: f.clone(),
            x: x.clone(),
        },
        |o| match o {
            Outcome::Convergence {
                outcome: ConvergenceOutcome::Converges { .. },
                check: Some(CertificateCheck::Valid),
            } => StepStatus::Passed,
            Outcome::Convergence {
                outcome: ConvergenceOutcome::Refuted { .. },
                ..
            } => StepStatus::Failed,
            _ => StepStatus::Undecided,
        },
    )?;
    r.conclude_from_steps();
    if r.conclusion == Conclusion::CounterexampleFound {
        r.note("the catalog evidence for the hypothesis covers finitely many intervals only");
    }
    Ok(r)
}

/// Ideal-shaped sets: quasi-order closedness, order closedness, and the
/// running sup-meet construction on families inside the set.
pub fn verify_band_proposition(
    set: &SetExpr,
    carrier: Carrier,
    cfg: &SearchConfig,
) -> Result<TheoremReport> {
    let gens = match set {
        SetExpr::Ideal(g) | SetExpr::Band(g) => g.clone(),
        SetExpr::TailZero => Vec::new(),
        other => {
            return Err(Error::Precondition(format!(
                "{} is not an ideal-shaped set",
                kind_of(other)
            )))
        }
    };
    set.check_carrier(carrier)?;
    let mut r = TheoremReport::new(
        BAND,
        "An ideal that is quasi-order closed is a band.",
        json!({ "set": set, "carrier": carrier }),
        cfg,
    );
    r.note("quasi-order closedness and order closedness are checked and reported separately");
    let qoc = r.run(
        Operation::QuasiOrderClosed {
            set: set.clone(),
            carrier,
        },
        |o| match o {
            Outcome::Closure {
                verdict: Verdict::Certified { .. },
                ..
            } => StepStatus::Passed,
            Outcome::Closure {
                verdict: Verdict::Refuted { .. },
                witness_replays: Some(true),
            } => StepStatus::Passed,
            Outcome::Closure {
                verdict: Verdict::Refuted { .. },
                ..
            } => StepStatus::Failed,
            _ => StepStatus::Undecided,
        },
    )?;
    match qoc {
        Outcome::Closure {
            verdict: Verdict::Certified { .. },
            ..
        } => {}
        Outcome::Closure {
            verdict: Verdict::Refuted { witness },
            witness_replays: Some(true),
        } => {
            r.conclusion = Conclusion::CounterexampleFound;
            r.note(format!(
                "the ideal is not quasi-order closed ({} family {} tends to {} outside it), so it is not a band candidate",
                serde_json::to_value(witness.direction).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                witness.family,
                witness.limit
            ));
            return Ok(r);
        }
        _ => return Ok(r),
    }
    r.run(
        Operation::OrderClosed {
            set: set.clone(),
            carrier,
        },
        |o| closure_status(o, false),
    )?;
    for g in &gens {
        let cap = g.abs().scale(&Rat::from(2));
        let bases = [
            Family::coord_decay(g.clone(), g.clone(), Rat::zero())?,
            Family::scale(g.abs(), Rat::new(1, 2))?,
        ];
        for base in bases {
            r.run(
                Operation::SupMeetProbe {
                    base,
                    cap: cap.clone(),
                    set: set.clone(),
                },
                |o| match o {
                    Outcome::SupMeet {
                        membership: EventualMembership::HoldsFrom { index: 0 },
                        limit_in_set,
                        ..
                    } => passed_if(*limit_in_set),
                    Outcome::SupMeet {
                        membership: EventualMembership::Unknown { .. },
                        ..
                    } => StepStatus::Undecided,
                    _ => StepStatus::Failed,
                },
            )?;
        }
    }
    r.conclude_from_steps();
    Ok(r)
}

fn kind_of(s: &SetExpr) -> &'static str {
    match s {
        SetExpr::Interval(_) => "an interval",
        SetExpr::HalfSpace { .. } => "a half-space",
        SetExpr::SolidHull(_) => "a solid hull",
        SetExpr::Complement(_) => "a complement",
        SetExpr::Union(_) => "a union",
        SetExpr::Intersection(_) => "an intersection",
        SetExpr::Translate(..) => "a translate",
        SetExpr::Dilate(..) => "a dilate",
        _ => "this set",
    }
}

/// `count` members of `set`, drawn from rationals with denominators up to 8
/// and absolute value up to 4 by a seeded generator. Returns fewer points
/// when the set is too thin to hit within the attempt budget.
pub fn sample_members(
    set: &SetExpr,
    carrier: Carrier,
    count: usize,
    seed: u64,
) -> Result<Vec<Vector>> {
    set.check_carrier(carrier)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = match carrier {
        Carrier::FinDim(n) => n,
        Carrier::TailSeq => set.max_prefix().max(2),
    };
    let draw = |rng: &mut ChaCha8Rng| {
        let q = rng.gen_range(1..=8i64);
        Rat::new(rng.gen_range(-4 * q..=4 * q), q)
    };
    let mut out: Vec<Vector> = Vec::new();
    for _ in 0..count.saturating_mul(1000) {
        if out.len() == count {
            break;
        }
        let coords: Vec<Rat> = (0..width).map(|_| draw(&mut rng)).collect();
        let v = match carrier {
            Carrier::FinDim(_) => Vector::fin_dim(coords),
            Carrier::TailSeq => Vector::tail_seq(coords, draw(&mut rng)),
        };
        if member(set, &v)? && !out.contains(&v) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Every set of the catalog must be certified order-open; each sampled
/// point then needs an open interval around it inside the set.
pub fn tau_subset_probe(
    catalog: &[SetExpr],
    carrier: Carrier,
    samples_per_set: usize,
    semantics: IntervalSemantics,
    seed: u64,
    cfg: &SearchConfig,
) -> Result<TheoremReport> {
    let mut r = TheoremReport::new(
        TAU_SUBSET,
        "Every set open in the quasi-order topology is open in the interval topology.",
        json!({ "catalog": catalog, "carrier": carrier, "samples_per_set": samples_per_set, "semantics": semantics, "seed": seed }),
        cfg,
    );
    for (i, set) in catalog.iter().enumerate() {
        let open = r.run(
            Operation::IsOrderOpen {
                set: set.clone(),
                carrier,
            },
            |o| closure_status(o, false),
        )?;
        if !matches!(
            open,
            Outcome::Closure {
                verdict: Verdict::Certified { .. },
                ..
            }
        ) {
            return Err(Error::Precondition(format!(
                "catalog entry {i} is not certified order-open"
            )));
        }
        let points = sample_members(set, carrier, samples_per_set, seed.wrapping_add(i as u64))?;
        if points.len() < samples_per_set {
            r.note(format!(
                "catalog entry {i}: only {} points sampled",
                points.len()
            ));
        }
        r.run(
            Operation::IntervalFits {
                set: set.clone(),
                points,
                semantics,
            },
            |o| match o {
                Outcome::Fits { fits } if fits.iter().all(Option::is_some) => StepStatus::Passed,
                _ => StepStatus::Undecided,
            },
        )?;
    }
    r.conclude_from_steps();
    if r.notes.iter().any(|n| n.contains("only")) && r.conclusion == Conclusion::Confirmed {
        r.conclusion = Conclusion::Inconclusive;
    }
    Ok(r)
}

/// Translates and dilates of certified open sets stay open.
pub fn verify_vector_topology(
    catalog: &[SetExpr],
    shifts: &[Vector],
    scalars: &[Rat],
    carrier: Carrier,
    cfg: &SearchConfig,
) -> Result<TheoremReport> {
    let mut r = TheoremReport::new(
        VECTOR_TOPOLOGY,
        "Translation and multiplication by a nonzero scalar map order-open sets to order-open sets.",
        json!({ "catalog": catalog, "shifts": shifts, "scalars": scalars, "carrier": carrier }),
        cfg,
    );
    for set in catalog {
        let op = Operation::VectorTopology {
            set: set.clone(),
            shifts: shifts.to_vec(),
            scalars: scalars.to_vec(),
            carrier,
        };
        r.run(op, |o| match o {
            Outcome::VectorTopology { report } if report.refuted > 0 => StepStatus::Failed,
            Outcome::VectorTopology { report }
                if report.entries.iter().all(|e| e.verdict.is_certified()) =>
            {
                StepStatus::Passed
            }
            _ => StepStatus::Undecided,
        })?;
    }
    r.conclude_from_steps();
    if r.contradicts_claim {
        r.note("an image of an open set was refuted as open; this is a high-severity finding");
    }
    Ok(r)
}
