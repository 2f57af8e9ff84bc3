//! Three-valued containment of closed boxes `[lo, hi]` in set expressions.

use serde::{Deserialize, Serialize};

use super::{member_unchecked, IntervalKind, IntervalSemantics, Relation, SetExpr};
use crate::error::Result;
use crate::lattice::{positions, Axis, Vector};
use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Containment {
    Exact(bool),
    Unknown,
}

/// Whether every `z` with `lo <= z <= hi` lies in `set`. Requires `lo <= hi`.
///
/// Exact for primitive sets and their complements; unions and intersections
/// are decided when a component settles the question, and otherwise a few
/// probe points of the box may still refute containment.
pub fn box_containment(lo: &Vector, hi: &Vector, set: &SetExpr) -> Result<Containment> {
    set.check_carrier(lo.carrier())?;
    lo.check_same_carrier(hi)?;
    if !lo.leq(hi)? {
        return Err(crate::error::Error::InvalidInterval(format!(
            "box [{lo}, {hi}] is empty"
        )));
    }
    let c = subset(lo, hi, set)?;
    if c != Containment::Unknown {
        return Ok(c);
    }
    for p in probes(lo, hi) {
        if !member_unchecked(set, &p)? {
            return Ok(Containment::Exact(false));
        }
    }
    Ok(Containment::Unknown)
}

fn probes(lo: &Vector, hi: &Vector) -> Vec<Vector> {
    let mid = lo.zip_with(hi, |a, b| a.midpoint(b)).expect("same carrier");
    vec![lo.clone(), hi.clone(), mid]
}

fn coord(v: &Vector, axis: Axis) -> Rat {
    v.coord(axis).expect("axis checked against carrier")
}

fn subset(lo: &Vector, hi: &Vector, set: &SetExpr) -> Result<Containment> {
    use Containment::*;
    Ok(match set {
        SetExpr::Interval(i) => {
            let (a, b) = (i.lo(), i.hi());
            Exact(match (i.kind(), i.semantics()) {
                (IntervalKind::Closed, _) => a.leq(lo)? && hi.leq(b)?,
                (IntervalKind::Open, IntervalSemantics::StrictPartial) => {
                    a.leq(lo)? && hi.leq(b)? && a != lo && b != hi
                }
                (IntervalKind::Open, IntervalSemantics::StrictUniform) => {
                    a.strictly_below_everywhere(lo)? && hi.strictly_below_everywhere(b)?
                }
            })
        }
        SetExpr::Ideal(g) | SetExpr::Band(g) => {
            Exact(dead_positions(g, lo, hi).all(|(l, h)| l.is_zero() && h.is_zero()))
        }
        SetExpr::SolidHull(g) => {
            for v in g {
                if hi.leq(&v.abs())? && v.abs().negate().leq(lo)? {
                    return Ok(Exact(true));
                }
            }
            Unknown
        }
        SetExpr::HalfSpace { axis, rel, bound } => Exact(match rel {
            Relation::Le => coord(hi, *axis) <= *bound,
            Relation::Ge => coord(lo, *axis) >= *bound,
        }),
        SetExpr::TailZero => {
            Exact(lo.tail().is_some_and(Rat::is_zero) && hi.tail().is_some_and(Rat::is_zero))
        }
        SetExpr::Complement(s) => disjoint(lo, hi, s)?,
        SetExpr::Union(v) => {
            for s in v {
                if subset(lo, hi, s)? == Exact(true) {
                    return Ok(Exact(true));
                }
            }
            if v.is_empty() {
                Exact(false)
            } else {
                Unknown
            }
        }
        SetExpr::Intersection(v) => {
            let mut all = true;
            for s in v {
                match subset(lo, hi, s)? {
                    Exact(false) => return Ok(Exact(false)),
                    Unknown => all = false,
                    Exact(true) => {}
                }
            }
            if all {
                Exact(true)
            } else {
                Unknown
            }
        }
        SetExpr::Translate(s, a) => subset(&lo.sub(a)?, &hi.sub(a)?, s)?,
        SetExpr::Dilate(s, t) => {
            let (l, h) = scaled_box(lo, hi, &t.recip());
            subset(&l, &h, s)?
        }
    })
}

/// `Exact(true)` when the box misses `set` entirely.
fn disjoint(lo: &Vector, hi: &Vector, set: &SetExpr) -> Result<Containment> {
    use Containment::*;
    Ok(match set {
        SetExpr::Interval(i) => {
            let (a, b) = (i.lo(), i.hi());
            let l = lo.sup(a)?;
            let h = hi.inf(b)?;
            let meets = match (i.kind(), i.semantics()) {
                (IntervalKind::Closed, _) => l.leq(&h)?,
                (IntervalKind::Open, IntervalSemantics::StrictPartial) => {
                    l.leq(&h)? && !(l == h && (&l == a || &l == b))
                }
                (IntervalKind::Open, IntervalSemantics::StrictUniform) => {
                    let all = [lo, hi, a, b];
                    positions(&all).into_iter().all(|p| {
                        let (lo, hi, a, b) = (lo.get(p), hi.get(p), a.get(p), b.get(p));
                        a < b && lo < b && a < hi
                    })
                }
            };
            Exact(!meets)
        }
        SetExpr::Ideal(g) | SetExpr::Band(g) => {
            Exact(!dead_positions(g, lo, hi).all(|(l, h)| !l.is_positive() && !h.is_negative()))
        }
        SetExpr::SolidHull(g) => {
            for v in g {
                let m = v.abs();
                if lo.leq(&m)? && m.negate().leq(hi)? {
                    return Ok(Exact(false));
                }
            }
            Exact(true)
        }
        SetExpr::HalfSpace { axis, rel, bound } => Exact(match rel {
            Relation::Le => coord(lo, *axis) > *bound,
            Relation::Ge => coord(hi, *axis) < *bound,
        }),
        SetExpr::TailZero => {
            let (l, h) = (
                lo.tail().expect("tail carrier"),
                hi.tail().expect("tail carrier"),
            );
            Exact(l.is_positive() || h.is_negative())
        }
        SetExpr::Complement(s) => subset(lo, hi, s)?,
        SetExpr::Union(v) => {
            let mut all = true;
            for s in v {
                match disjoint(lo, hi, s)? {
                    Exact(false) => return Ok(Exact(false)),
                    Unknown => all = false,
                    Exact(true) => {}
                }
            }
            if all {
                Exact(true)
            } else {
                Unknown
            }
        }
        SetExpr::Intersection(v) => {
            for s in v {
                if disjoint(lo, hi, s)? == Exact(true) {
                    return Ok(Exact(true));
                }
            }
            if v.is_empty() {
                Exact(false)
            } else {
                Unknown
            }
        }
        SetExpr::Translate(s, a) => disjoint(&lo.sub(a)?, &hi.sub(a)?, s)?,
        SetExpr::Dilate(s, t) => {
            let (l, h) = scaled_box(lo, hi, &t.recip());
            disjoint(&l, &h, s)?
        }
    })
}

/// Pairs `(lo_i, hi_i)` at positions where every generator vanishes.
fn dead_positions<'a>(
    g: &'a [Vector],
    lo: &'a Vector,
    hi: &'a Vector,
) -> impl Iterator<Item = (&'a Rat, &'a Rat)> + 'a {
    let mut all: Vec<&Vector> = g.iter().collect();
    all.push(lo);
    all.push(hi);
    positions(&all)
        .into_iter()
        .filter(move |p| g.iter().all(|v| v.get(*p).is_zero()))
        .map(move |p| (lo.get(p), hi.get(p)))
}

fn scaled_box(lo: &Vector, hi: &Vector, s: &Rat) -> (Vector, Vector) {
    let (a, b) = (lo.scale(s), hi.scale(s));
    if s.is_negative() {
        (b, a)
    } else {
        (a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::Interval;

    fn bx(lo: &[i64], hi: &[i64]) -> (Vector, Vector) {
        (Vector::ints(lo), Vector::ints(hi))
    }

    #[test]
    fn boxes_in_intervals() {
        let s = SetExpr::interval(
            Interval::closed(Vector::ints(&[-2, -2]), Vector::ints(&[2, 2])).unwrap(),
        );
        let (l, h) = bx(&[-1, -1], &[1, 1]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(true)
        );
        let (l, h) = bx(&[-1, -1], &[3, 1]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(false)
        );
    }

    #[test]
    fn open_interval_touching_its_endpoint() {
        let open = Interval::open(
            Vector::ints(&[-1, -1]),
            Vector::ints(&[1, 1]),
            IntervalSemantics::StrictPartial,
        )
        .unwrap();
        let s = SetExpr::interval(open);
        let (l, h) = bx(&[-1, -1], &[0, 0]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(false)
        );
        let c = SetExpr::complement(s);
        let (l, h) = bx(&[1, 1], &[2, 2]);
        assert_eq!(
            box_containment(&l, &h, &c).unwrap(),
            Containment::Exact(true)
        );
        let (l, h) = bx(&[0, 1], &[2, 2]);
        assert_eq!(
            box_containment(&l, &h, &c).unwrap(),
            Containment::Exact(false)
        );
    }

    #[test]
    fn complement_of_half_space() {
        let s = SetExpr::strict_above(Axis::Coord(1), Rat::zero());
        let (l, h) = bx(&[1, -5], &[2, 5]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(true)
        );
        let (l, h) = bx(&[0, -5], &[2, 5]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(false)
        );
    }

    #[test]
    fn band_and_tail_zero() {
        let band = SetExpr::Band(vec![Vector::tail_ints(&[1], 0)]);
        let lo = Vector::tail_ints(&[-3], 0);
        let hi = Vector::tail_ints(&[3], 0);
        assert_eq!(
            box_containment(&lo, &hi, &band).unwrap(),
            Containment::Exact(true)
        );
        let hi2 = Vector::tail_ints(&[3, 1], 0);
        assert_eq!(
            box_containment(&lo, &hi2, &band).unwrap(),
            Containment::Exact(false)
        );
        assert_eq!(
            box_containment(&lo, &hi, &SetExpr::TailZero).unwrap(),
            Containment::Exact(true)
        );
    }

    #[test]
    fn dilate_and_translate() {
        let base =
            SetExpr::interval(Interval::closed(Vector::ints(&[0]), Vector::ints(&[1])).unwrap());
        let s =
            SetExpr::dilate(SetExpr::translate(base, Vector::ints(&[1])), Rat::from(-2)).unwrap();
        // translate gives [1, 2]; dilating by -2 gives [-4, -2]
        let (l, h) = bx(&[-4], &[-2]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(true)
        );
        let (l, h) = bx(&[-5], &[-2]);
        assert_eq!(
            box_containment(&l, &h, &s).unwrap(),
            Containment::Exact(false)
        );
    }
}
