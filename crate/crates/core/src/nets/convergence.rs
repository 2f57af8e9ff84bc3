use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::family::Family;
use super::profile::{Profile, Rest, ScalarSeq};
use crate::error::{Error, Result};
use crate::lattice::{Axis, Vector};
use crate::rat::Rat;
use crate::sets::{member, Relation, SetExpr};

pub const DEFAULT_HORIZON: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Increasing,
    Decreasing,
    /// Both increasing and decreasing.
    Constant,
    Neither,
}

impl Direction {
    pub fn is_decreasing(self) -> bool {
        matches!(self, Direction::Decreasing | Direction::Constant)
    }

    pub fn is_increasing(self) -> bool {
        matches!(self, Direction::Increasing | Direction::Constant)
    }
}

/// Direction of a family together with the evidence behind it.
///
/// `not_decreasing_at` is the least `k` with `value(k+1) <= value(k)`
/// failing, `not_increasing_at` the least `k` with `value(k) <= value(k+1)`
/// failing. A family is `Neither` exactly when both exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monotonicity {
    pub direction: Direction,
    pub not_decreasing_at: Option<usize>,
    pub not_increasing_at: Option<usize>,
    /// Every coordinate is monotone from this index on.
    pub tail_rule_from: usize,
    /// Indices checked by direct comparison.
    pub horizon: usize,
}

pub fn monotonicity(f: &Family) -> Result<Monotonicity> {
    monotonicity_with(f, DEFAULT_HORIZON)
}

pub fn monotonicity_with(f: &Family, horizon: usize) -> Result<Monotonicity> {
    let p = f.profile()?;
    let mut up: Option<usize> = None;
    let mut down: Option<usize> = None;
    let mut tail_from = 0;
    for s in p.sequences() {
        tail_from = tail_from.max(s.tail_info().from);
        up = min_opt(up, s.first_move(true)?);
        down = min_opt(down, s.first_move(false)?);
    }
    for k in 0..horizon {
        let (a, b) = (p.value(k), p.value(k + 1));
        if !b.leq(&a)? {
            check_agrees("not decreasing", k, up)?;
            break;
        }
    }
    for k in 0..horizon {
        let (a, b) = (p.value(k), p.value(k + 1));
        if !a.leq(&b)? {
            check_agrees("not increasing", k, down)?;
            break;
        }
    }
    let direction = match (up, down) {
        (None, None) => Direction::Constant,
        (Some(_), None) => Direction::Increasing,
        (None, Some(_)) => Direction::Decreasing,
        (Some(_), Some(_)) => Direction::Neither,
    };
    Ok(Monotonicity {
        direction,
        not_decreasing_at: up,
        not_increasing_at: down,
        tail_rule_from: tail_from,
        horizon,
    })
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn check_agrees(what: &str, scanned: usize, rule: Option<usize>) -> Result<()> {
    if rule == Some(scanned) {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!(
            "{what}: direct scan finds index {scanned}, tail rule gives {rule:?}"
        )))
    }
}

/// Supremum or infimum of a monotone family.
pub fn order_limit(f: &Family) -> Result<Vector> {
    if monotonicity(f)?.direction == Direction::Neither {
        return Err(Error::NonMonotone);
    }
    Ok(f.profile()?.limit())
}

/// Coordinatewise limit; every template converges coordinatewise.
pub(crate) fn coordinate_limit(f: &Family) -> Result<Vector> {
    Ok(f.profile()?.limit())
}

/// How `|value(k) - limit| <= dominating(k)` is established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domination {
    /// For every index `k`.
    Termwise,
    /// `|value(k) - limit| <= dominating(m)` for all `k >= thresholds[m]`.
    Thresholds(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceCertificate {
    pub family: Family,
    pub limit: Vector,
    pub dominating: Family,
    pub domination: Domination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ConvergenceOutcome {
    Converges {
        certificate: ConvergenceCertificate,
    },
    /// The coordinate at `axis` tends to `coordinate_limit`, not `target`.
    Refuted {
        axis: Axis,
        coordinate_limit: Rat,
        target: Rat,
    },
    Unknown {
        reason: String,
    },
}

impl ConvergenceOutcome {
    pub fn certificate(&self) -> Option<&ConvergenceCertificate> {
        match self {
            ConvergenceOutcome::Converges { certificate } => Some(certificate),
            _ => None,
        }
    }
}

/// Decides whether `f` order-converges to `x` and builds the evidence.
pub fn order_converges(f: &Family, x: &Vector) -> Result<ConvergenceOutcome> {
    let c = f.carrier()?;
    x.check_carrier(c)?;
    let lim = coordinate_limit(f)?;
    if let Some((axis, got, want)) = first_mismatch(&lim, x) {
        return Ok(ConvergenceOutcome::Refuted {
            axis,
            coordinate_limit: got,
            target: want,
        });
    }
    match dominating_family(f, x) {
        Ok(dominating) => Ok(ConvergenceOutcome::Converges {
            certificate: ConvergenceCertificate {
                family: f.clone(),
                limit: x.clone(),
                dominating,
                domination: Domination::Termwise,
            },
        }),
        Err(Error::Unsupported(reason)) => Ok(ConvergenceOutcome::Unknown { reason }),
        Err(e) => Err(e),
    }
}

fn first_mismatch(a: &Vector, b: &Vector) -> Option<(Axis, Rat, Rat)> {
    let n = a.prefix_len().max(b.prefix_len());
    let pa = a.padded(n);
    let pb = b.padded(n);
    for i in 0..n {
        if pa[i] != pb[i] {
            return Some((Axis::Coord(i + 1), pa[i].clone(), pb[i].clone()));
        }
    }
    match (a.tail(), b.tail()) {
        (Some(s), Some(t)) if s != t => Some((Axis::Tail, s.clone(), t.clone())),
        _ => None,
    }
}

/// The decreasing family that dominates `|value(k) - x|` termwise, in the
/// simplest template that does so.
pub fn dominating_family(f: &Family, x: &Vector) -> Result<Family> {
    let c = f.carrier()?;
    x.check_carrier(c)?;
    let lim = coordinate_limit(f)?;
    if lim != *x {
        return Err(Error::NotConvergent(format!("{f} tends to {lim}, not {x}")));
    }
    let y = match f {
        Family::Shift { head, tail, .. } => Family::Shift {
            head: Rat::zero(),
            tail: (tail - head).abs(),
            offset: None,
        },
        Family::Scale { .. } => f.clone(),
        Family::CoordDecay { p, q, .. } => Family::CoordDecay {
            c: Vector::zero(c),
            p: p.abs(),
            q: q.clone(),
        },
        Family::Explicit { values } => {
            let mut devs: Vec<Vector> = values
                .iter()
                .map(|v| v.sub(x).map(|d| d.abs()))
                .collect::<Result<_>>()?;
            for i in (0..devs.len().saturating_sub(1)).rev() {
                devs[i] = devs[i].sup(&devs[i + 1])?;
            }
            Family::Explicit { values: devs }
        }
        _ => Family::deviation(f.clone(), x.clone())?,
    };
    if !monotonicity(&y)?.direction.is_decreasing() {
        return Err(Error::Unsupported(format!(
            "deviation of {f} from {x} is not decreasing"
        )));
    }
    Ok(y)
}

/// `k -> (sup_{j <= k} base(j)) inf cap`; always increasing.
pub fn running_sup_meet(base: &Family, cap: &Vector) -> Result<Family> {
    Family::running_sup_meet(base.clone(), cap.clone())
}

/// Outcome of a certificate re-check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CertificateCheck {
    Valid,
    Invalid { reason: String },
    Unknown { reason: String },
}

impl ConvergenceCertificate {
    /// Re-validates from scratch: the dominating family decreases to zero and
    /// dominates the deviation as claimed.
    pub fn revalidate(&self, horizon: usize) -> Result<CertificateCheck> {
        let c = self.family.carrier()?;
        self.limit.check_carrier(c)?;
        if self.dominating.carrier()? != c {
            return Ok(CertificateCheck::Invalid {
                reason: "dominating family lives in another carrier".into(),
            });
        }
        if !monotonicity_with(&self.dominating, horizon)?
            .direction
            .is_decreasing()
        {
            return Ok(CertificateCheck::Invalid {
                reason: "dominating family is not decreasing".into(),
            });
        }
        if order_limit(&self.dominating)? != Vector::zero(c) {
            return Ok(CertificateCheck::Invalid {
                reason: "dominating family does not decrease to zero".into(),
            });
        }
        match &self.domination {
            Domination::Termwise => {
                termwise_check(&self.family, &self.limit, &self.dominating, horizon)
            }
            Domination::Thresholds(t) => {
                for (m, &tm) in t.iter().enumerate() {
                    let y = self.dominating.value(m)?;
                    let lo = self.limit.sub(&y)?;
                    let hi = self.limit.add(&y)?;
                    let set = SetExpr::interval(crate::sets::Interval::closed(lo, hi)?);
                    match eventually_in_with(&self.family, &set, horizon)? {
                        EventualMembership::HoldsFrom { index } if index <= tm => {}
                        EventualMembership::Unknown { reason } => {
                            return Ok(CertificateCheck::Unknown { reason })
                        }
                        other => {
                            return Ok(CertificateCheck::Invalid {
                                reason: format!(
                                    "threshold {tm} for level {m} does not hold: {other:?}"
                                ),
                            })
                        }
                    }
                }
                Ok(CertificateCheck::Valid)
            }
        }
    }
}

fn termwise_check(f: &Family, x: &Vector, y: &Family, horizon: usize) -> Result<CertificateCheck> {
    for (k, (v, w)) in f
        .values(0..horizon + 1)?
        .into_iter()
        .zip(y.values(0..horizon + 1)?)
        .enumerate()
    {
        let d = v.sub(x)?.abs();
        if !d.leq(&w)? {
            return Ok(CertificateCheck::Invalid {
                reason: format!("domination fails at index {k}"),
            });
        }
    }
    let dev = Family::deviation(f.clone(), x.clone())?.profile()?;
    let dom = y.profile()?;
    let m = dev.coords.len().max(dom.coords.len());
    let (a, b) = (dev.expand_to(m), dom.expand_to(m));
    let mut pairs: Vec<(ScalarSeq, ScalarSeq)> = a.coords.into_iter().zip(b.coords).collect();
    match (a.rest, b.rest) {
        (Rest::Absent, Rest::Absent) => {}
        (ra, rb) if ra == rb => {}
        (Rest::Uniform(s), Rest::Uniform(t)) => pairs.push((s, t)),
        (ra, rb) => {
            let pa = Profile {
                coords: vec![],
                rest: ra,
            }
            .expand_to(m + 1)
            .coords
            .pop();
            let pb = Profile {
                coords: vec![],
                rest: rb,
            }
            .expand_to(m + 1)
            .coords
            .pop();
            // a front moves one coordinate per index, so comparing the first
            // coordinate past the prefix shape by shape covers the rest
            match (pa, pb) {
                (Some(s), Some(t)) => pairs.push((s, t)),
                _ => {
                    return Ok(CertificateCheck::Unknown {
                        reason: "unmatched tail shapes".into(),
                    })
                }
            }
        }
    }
    for (s, t) in pairs {
        if s == t {
            continue;
        }
        let (si, ti) = (s.tail_info(), t.tail_info());
        match (si.constant_from, ti.constant_from) {
            (Some(a), Some(b)) => {
                if (0..=a.max(b)).any(|k| s.eval(k) > t.eval(k)) {
                    return Ok(CertificateCheck::Invalid {
                        reason: "domination fails past the horizon".into(),
                    });
                }
            }
            _ => {
                return Ok(CertificateCheck::Unknown {
                    reason: "no tail rule compares these coordinate sequences".into(),
                })
            }
        }
    }
    Ok(CertificateCheck::Valid)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum EventualMembership {
    /// `value(k)` lies in the set for every `k >= index`, and `index` is least.
    HoldsFrom {
        index: usize,
    },
    /// `value(k)` lies outside the set for every `k >= witness`, and
    /// `witness` is least.
    FailsInfinitely {
        witness: usize,
    },
    Unknown {
        reason: String,
    },
}

pub fn eventually_in(f: &Family, set: &SetExpr) -> Result<EventualMembership> {
    eventually_in_with(f, set, DEFAULT_HORIZON)
}

/// Membership of `value(k)` is a function of how each coordinate compares
/// with the finitely many constants of the set. Each coordinate sequence
/// settles every such comparison at a computable index, so membership is
/// piecewise constant between finitely many change points.
pub fn eventually_in_with(f: &Family, set: &SetExpr, horizon: usize) -> Result<EventualMembership> {
    let c = f.carrier()?;
    set.check_carrier(c)?;
    let width = f.profile()?.coords.len().max(set.max_prefix());
    let p = f.profile()?.expand_to(width);
    let pool = set.constant_pool();
    let mut points = BTreeSet::from([0usize]);
    let mut seqs: Vec<&ScalarSeq> = p.coords.iter().collect();
    match &p.rest {
        Rest::Uniform(s) => seqs.push(s),
        Rest::Front { .. } => points.extend(0..=width + 1),
        Rest::Absent => {}
    }
    for s in seqs {
        let info = s.tail_info();
        points.extend(0..=info.from);
        for d in &pool {
            for rel in [Relation::Le, Relation::Ge] {
                match s.stabilize(rel, d) {
                    Ok((k, _)) => {
                        points.insert(k);
                    }
                    Err(Error::Unsupported(reason)) => {
                        return Ok(EventualMembership::Unknown { reason })
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let points: Vec<usize> = points.into_iter().collect();
    let inside: Vec<bool> = points
        .iter()
        .map(|&k| member(set, &p.value(k)))
        .collect::<Result<_>>()?;
    let verdict = match inside.iter().rposition(|b| !b) {
        None => EventualMembership::HoldsFrom { index: 0 },
        Some(i) if i + 1 == points.len() => EventualMembership::FailsInfinitely {
            witness: inside.iter().rposition(|b| *b).map_or(0, |j| points[j + 1]),
        },
        Some(i) => EventualMembership::HoldsFrom {
            index: points[i + 1],
        },
    };
    for k in 0..=horizon {
        let seg = points.partition_point(|&c| c <= k) - 1;
        if member(set, &p.value(k))? != inside[seg] {
            return Err(Error::Inconsistent(format!(
                "membership at index {k} disagrees with the tail rule"
            )));
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{Interval, IntervalSemantics};

    fn e1() -> Vector {
        Vector::tail_ints(&[1], 0)
    }

    #[test]
    fn shift_is_decreasing_to_zero() {
        let m = monotonicity(&Family::shift()).unwrap();
        assert_eq!(m.direction, Direction::Decreasing);
        assert_eq!(m.not_decreasing_at, None);
        assert_eq!(
            order_limit(&Family::shift()).unwrap(),
            Vector::tail_ints(&[], 0)
        );
    }

    #[test]
    fn explicit_neither() {
        let f = Family::explicit(vec![Vector::ints(&[0, 2]), Vector::ints(&[1, 0])]).unwrap();
        let m = monotonicity(&f).unwrap();
        assert_eq!(m.direction, Direction::Neither);
        assert_eq!(
            (m.not_decreasing_at, m.not_increasing_at),
            (Some(0), Some(0))
        );
        assert_eq!(order_limit(&f), Err(Error::NonMonotone));
    }

    #[test]
    fn running_sup_meet_of_shift_up() {
        let f = running_sup_meet(&Family::shift_up(), &Vector::tail_ints(&[], 1)).unwrap();
        assert_eq!(monotonicity(&f).unwrap().direction, Direction::Increasing);
        assert_eq!(order_limit(&f).unwrap(), Vector::tail_ints(&[], 1));
    }

    #[test]
    fn certificates() {
        let out =
            order_converges(&Family::shift(), &Vector::zero(crate::Carrier::TailSeq)).unwrap();
        let cert = out.certificate().unwrap();
        assert_eq!(cert.dominating, Family::shift());
        assert_eq!(cert.revalidate(100).unwrap(), CertificateCheck::Valid);

        let d =
            Family::coord_decay(Vector::ints(&[0, 0]), Vector::ints(&[1, 2]), Rat::zero()).unwrap();
        let out = order_converges(&d, &Vector::ints(&[0, 0])).unwrap();
        assert_eq!(out.certificate().unwrap().dominating, d);

        let s = Family::scale(Vector::ints(&[1, 1]), Rat::new(1, 2)).unwrap();
        let out = order_converges(&s, &Vector::ints(&[1, 0])).unwrap();
        assert_eq!(
            out,
            ConvergenceOutcome::Refuted {
                axis: Axis::Coord(1),
                coordinate_limit: Rat::zero(),
                target: Rat::one()
            }
        );
    }

    #[test]
    fn explicit_dominated_by_suffix_maxima() {
        let f = Family::explicit(vec![
            Vector::ints(&[1]),
            Vector::ints(&[3]),
            Vector::ints(&[2]),
        ])
        .unwrap();
        let y = dominating_family(&f, &Vector::ints(&[2])).unwrap();
        assert_eq!(
            y,
            Family::Explicit {
                values: vec![Vector::ints(&[1]), Vector::ints(&[1]), Vector::ints(&[0])]
            }
        );
    }

    #[test]
    fn eventual_membership_examples() {
        let open = Interval::open(e1().negate(), e1(), IntervalSemantics::StrictPartial).unwrap();
        let outside = SetExpr::complement(SetExpr::interval(open.clone()));
        assert_eq!(
            eventually_in(&Family::shift(), &outside).unwrap(),
            EventualMembership::HoldsFrom { index: 0 }
        );
        assert!(matches!(
            eventually_in(&Family::shift(), &SetExpr::interval(open)).unwrap(),
            EventualMembership::FailsInfinitely { .. }
        ));

        let v = Vector::ints(&[1, 1]);
        let s = Family::scale(v.clone(), Rat::new(1, 2)).unwrap();
        let boxed = SetExpr::interval(Interval::closed(v.negate(), v).unwrap());
        assert_eq!(
            eventually_in(&s, &boxed).unwrap(),
            EventualMembership::HoldsFrom { index: 0 }
        );

        let d =
            Family::coord_decay(Vector::ints(&[0, 0]), Vector::ints(&[1, 0]), Rat::zero()).unwrap();
        let hs = SetExpr::half_space(Axis::Coord(1), Relation::Le, Rat::new(1, 10));
        assert_eq!(
            eventually_in(&d, &hs).unwrap(),
            EventualMembership::HoldsFrom { index: 9 }
        );
    }
}
