//! Quasi-order closedness, order openness and order closedness.

use std::collections::HashSet;

use rayon::prelude::*;

use super::verdict::{ClosureWitness, SearchReport, Verdict};
use crate::config::{dedup_in_order, SearchConfig};
use crate::error::Result;
use crate::lattice::{Axis, Carrier, Vector};
use crate::nets::{
    coordinate_limit, eventually_in_with, monotonicity_with, Direction, EventualMembership, Family,
};
use crate::rat::Rat;
use crate::sets::{member, IntervalKind, IntervalSemantics, SetExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Monotone sequences only.
    Quasi,
    /// Any order-convergent sequence.
    Order,
}

/// Whether `set` contains the limit of every monotone sequence in it.
pub fn check_quasi_order_closed(
    set: &SetExpr,
    carrier: Carrier,
    cfg: &SearchConfig,
) -> Result<Verdict> {
    decide(set, carrier, cfg, Mode::Quasi)
}

/// Open in the quasi-order topology: the complement is quasi-order closed.
pub fn is_order_open(set: &SetExpr, carrier: Carrier, cfg: &SearchConfig) -> Result<Verdict> {
    check_quasi_order_closed(&SetExpr::complement(set.clone()), carrier, cfg)
}

/// Whether `set` contains the limit of every order-convergent sequence in it.
pub fn check_order_closed(set: &SetExpr, carrier: Carrier, cfg: &SearchConfig) -> Result<Verdict> {
    decide(set, carrier, cfg, Mode::Order)
}

fn decide(set: &SetExpr, carrier: Carrier, cfg: &SearchConfig, mode: Mode) -> Result<Verdict> {
    set.check_carrier(carrier)?;
    let pushed = set.push_complements();
    let mut trace = Vec::new();
    if closed_rule(&pushed, carrier, &mut trace) {
        return Ok(Verdict::Certified { rule_trace: trace });
    }
    search(set, carrier, cfg, mode)
}

/// Structural rules; on success appends the derivation in pre-order.
fn closed_rule(set: &SetExpr, carrier: Carrier, trace: &mut Vec<String>) -> bool {
    let mut local = Vec::new();
    let line = match set {
        SetExpr::Interval(i) if i.kind() == IntervalKind::Closed => format!("closed interval {i}"),
        SetExpr::HalfSpace { .. } => format!("closed half-space {set}"),
        SetExpr::Band(_) => format!("band {set}"),
        SetExpr::Ideal(_) => format!("finitely generated ideal coincides with its band: {set}"),
        SetExpr::SolidHull(g) => format!("solid hull is a union of {} closed intervals", g.len()),
        SetExpr::Complement(inner) => match (&**inner, carrier) {
            (SetExpr::Interval(i), Carrier::FinDim(_))
                if i.kind() == IntervalKind::Open
                    && i.semantics() == IntervalSemantics::StrictUniform =>
            {
                format!("complement of the open box {i} is a finite union of closed half-spaces")
            }
            _ => return false,
        },
        SetExpr::Union(v) => {
            if !v.iter().all(|s| closed_rule(s, carrier, &mut local)) {
                return false;
            }
            if v.is_empty() {
                "empty set".into()
            } else {
                format!("finite union of {} certified sets", v.len())
            }
        }
        SetExpr::Intersection(v) => {
            if !v.iter().all(|s| closed_rule(s, carrier, &mut local)) {
                return false;
            }
            if v.is_empty() {
                "whole space".into()
            } else {
                format!("intersection of {} certified sets", v.len())
            }
        }
        SetExpr::Translate(s, a) => {
            if !closed_rule(s, carrier, &mut local) {
                return false;
            }
            format!("translate by {a} of a certified set")
        }
        SetExpr::Dilate(s, t) => {
            if !closed_rule(s, carrier, &mut local) {
                return false;
            }
            format!("dilation by {t} of a certified set")
        }
        _ => return false,
    };
    trace.push(line);
    trace.extend(local);
    true
}

/// Vectors the set is built from, mapped through its translations and
/// dilations, plus points on the boundary of each half-space.
fn seed_points(set: &SetExpr, carrier: Carrier, out: &mut Vec<Vector>) {
    match set {
        SetExpr::Interval(i) => {
            out.push(i.lo().clone());
            out.push(i.hi().clone());
        }
        SetExpr::Ideal(g) | SetExpr::Band(g) | SetExpr::SolidHull(g) => {
            out.extend(g.iter().cloned());
            out.extend(g.iter().map(|v| v.abs()));
        }
        SetExpr::HalfSpace { axis, bound, .. } => match axis {
            Axis::Tail => out.push(Vector::constant(carrier, bound.clone())),
            Axis::Coord(j) => {
                if let Ok(e) = Vector::unit(carrier, *j) {
                    out.push(e.scale(bound));
                    let other = Vector::ones(carrier).sub(&e).expect("same carrier");
                    out.push(e.scale(bound).add(&other).expect("same carrier"));
                }
            }
        },
        SetExpr::TailZero => {}
        SetExpr::Complement(s) => seed_points(s, carrier, out),
        SetExpr::Union(v) | SetExpr::Intersection(v) => {
            v.iter().for_each(|s| seed_points(s, carrier, out))
        }
        SetExpr::Translate(s, a) => {
            let mut inner = Vec::new();
            seed_points(s, carrier, &mut inner);
            out.extend(inner.iter().filter_map(|v| v.add(a).ok()));
            out.push(a.clone());
        }
        SetExpr::Dilate(s, t) => {
            let mut inner = Vec::new();
            seed_points(s, carrier, &mut inner);
            out.extend(inner.iter().map(|v| v.scale(t)));
        }
    }
}

fn directions(set: &SetExpr, carrier: Carrier, mode: Mode) -> Vec<Vector> {
    let width = match carrier {
        Carrier::FinDim(n) => n,
        Carrier::TailSeq => set.max_prefix() + 1,
    };
    let mut base = vec![Vector::ones(carrier)];
    for j in 1..=width {
        base.push(Vector::unit(carrier, j).expect("in range"));
    }
    if carrier == Carrier::TailSeq {
        base.push(Vector::tail_seq(vec![Rat::zero(); width], Rat::one()));
    }
    if mode == Mode::Order {
        let alt: Vec<Rat> = (0..width)
            .map(|i| if i % 2 == 0 { Rat::one() } else { -Rat::one() })
            .collect();
        base.push(match carrier {
            Carrier::FinDim(_) => Vector::fin_dim(alt),
            Carrier::TailSeq => Vector::tail_seq(
                alt,
                if width % 2 == 0 {
                    Rat::one()
                } else {
                    -Rat::one()
                },
            ),
        });
    }
    base.into_iter().flat_map(|d| [d.negate(), d]).collect()
}

/// Candidate families in canonical order, and the number of limit points.
fn candidates(
    set: &SetExpr,
    carrier: Carrier,
    cfg: &SearchConfig,
    mode: Mode,
) -> Result<(Vec<Family>, usize)> {
    let mut seeds = Vec::new();
    seed_points(set, carrier, &mut seeds);
    seeds.push(Vector::zero(carrier));
    let seeds = dedup_in_order(seeds);
    let mut centers = Vec::new();
    for c in seeds.iter().cloned().chain(cfg.grid_points(carrier)) {
        if !member(set, &c)? {
            centers.push(c);
        }
    }
    let centers = dedup_in_order(centers);
    let seed_set: HashSet<&Vector> = seeds.iter().collect();

    let mut out = Vec::new();
    if carrier == Carrier::TailSeq {
        out.push(Family::shift());
        out.push(Family::shift_up());
        let amplitudes: Vec<Rat> = cfg
            .grid_values()
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect();
        for c in &centers {
            let amps: Vec<Rat> = if seed_set.contains(c) {
                amplitudes.clone()
            } else {
                vec![Rat::one(), -Rat::one()]
            };
            for t in amps {
                out.push(Family::Shift {
                    head: Rat::zero(),
                    tail: t,
                    offset: Some(c.clone()),
                });
            }
        }
    }
    if !member(set, &Vector::zero(carrier))? {
        let mut vs = vec![Vector::ones(carrier)];
        for s in &seeds {
            for f in &cfg.scale_factors {
                vs.push(s.abs().scale(f));
            }
        }
        for v in dedup_in_order(vs) {
            if v.is_zero() {
                continue;
            }
            for l in &cfg.lambdas {
                out.push(Family::Scale {
                    v: v.clone(),
                    lambda: l.clone(),
                });
            }
        }
    }
    let dirs = directions(set, carrier, mode);
    for c in &centers {
        for d in &dirs {
            out.push(Family::CoordDecay {
                c: c.clone(),
                p: d.clone(),
                q: Rat::zero(),
            });
        }
    }
    let mut seen = HashSet::new();
    out.retain(|f| f.validate().is_ok() && seen.insert(f.clone()));
    Ok((out, centers.len()))
}

fn try_candidate(
    f: &Family,
    set: &SetExpr,
    cfg: &SearchConfig,
    mode: Mode,
) -> Result<Option<ClosureWitness>> {
    // cheapest test first; every condition below is required
    let limit = coordinate_limit(f)?;
    if member(set, &limit)? {
        return Ok(None);
    }
    let mono = monotonicity_with(f, cfg.horizon)?;
    let usable = match mono.direction {
        Direction::Increasing | Direction::Decreasing => true,
        Direction::Neither => mode == Mode::Order,
        Direction::Constant => false,
    };
    if !usable {
        return Ok(None);
    }
    let EventualMembership::HoldsFrom { index } = eventually_in_with(f, set, cfg.horizon)? else {
        return Ok(None);
    };
    let w = ClosureWitness {
        family: f.clone(),
        direction: mono.direction,
        limit,
        in_set_from: index,
        limit_outside: true,
        monotonicity: mono,
        certificate: None,
    };
    if w.direction == Direction::Neither {
        let w = w.with_certificate()?;
        return Ok(w.certificate.is_some().then_some(w));
    }
    Ok(Some(w))
}

fn search(set: &SetExpr, carrier: Carrier, cfg: &SearchConfig, mode: Mode) -> Result<Verdict> {
    let (cands, limit_points) = candidates(set, carrier, cfg, mode)?;
    let found = cands
        .par_iter()
        .map(|f| try_candidate(f, set, cfg, mode))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(Ok(Some(w))) => Ok(Verdict::Refuted {
            witness: Box::new(w),
        }),
        Some(Err(e)) => Err(e),
        _ => {
            let mut report = SearchReport {
                candidates: cands.len(),
                limit_points,
                grid_scale: cfg.grid_scale,
                horizon: cfg.horizon,
                ..Default::default()
            };
            for f in &cands {
                *report
                    .by_template
                    .entry(f.template_name().to_string())
                    .or_default() += 1;
            }
            Ok(Verdict::Unknown {
                search_report: report,
            })
        }
    }
}
