//! Order intervals, the closed set-expression grammar, and structural
//! procedures on subsets of a carrier.

mod contain;
mod solid;
mod structure;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Axis, Carrier, Vector};
use crate::rat::Rat;

pub use contain::{box_containment, Containment};
pub use solid::{check_solid, check_solid_with, SolidityVerdict};
pub use structure::{
    band_member, carrier_atoms, disjoint, ideal_member, is_atom, solid_hull_member, AtomSet,
};

/// How the strict order `a < z` is read for open intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalSemantics {
    /// `a <= z` and `a != z`.
    #[default]
    StrictPartial,
    /// `a_i < z_i` in every coordinate, tail included.
    StrictUniform,
}

impl IntervalSemantics {
    pub fn lt(self, a: &Vector, b: &Vector) -> Result<bool> {
        match self {
            IntervalSemantics::StrictPartial => a.lt(b),
            IntervalSemantics::StrictUniform => a.strictly_below_everywhere(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalKind {
    Open,
    Closed,
}

/// An order interval `[lo, hi]` or `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntervalDoc", into = "IntervalDoc")]
pub struct Interval {
    lo: Vector,
    hi: Vector,
    kind: IntervalKind,
    semantics: IntervalSemantics,
}

impl Interval {
    pub fn closed(lo: Vector, hi: Vector) -> Result<Self> {
        Interval::new(lo, hi, IntervalKind::Closed, IntervalSemantics::default())
    }

    pub fn open(lo: Vector, hi: Vector, semantics: IntervalSemantics) -> Result<Self> {
        Interval::new(lo, hi, IntervalKind::Open, semantics)
    }

    pub fn new(
        lo: Vector,
        hi: Vector,
        kind: IntervalKind,
        semantics: IntervalSemantics,
    ) -> Result<Self> {
        if !lo.leq(&hi)? {
            return Err(Error::InvalidInterval(format!("{lo} is not below {hi}")));
        }
        if kind == IntervalKind::Open && !semantics.lt(&lo, &hi)? {
            return Err(Error::InvalidInterval(format!(
                "open interval ({lo}, {hi}) is empty under {semantics:?} semantics"
            )));
        }
        Ok(Interval {
            lo,
            hi,
            kind,
            semantics,
        })
    }

    pub fn lo(&self) -> &Vector {
        &self.lo
    }

    pub fn hi(&self) -> &Vector {
        &self.hi
    }

    pub fn kind(&self) -> IntervalKind {
        self.kind
    }

    pub fn semantics(&self) -> IntervalSemantics {
        self.semantics
    }

    pub fn carrier(&self) -> Carrier {
        self.lo.carrier()
    }

    /// Same endpoints and kind, re-validated under another strictness reading.
    pub fn with_semantics(&self, semantics: IntervalSemantics) -> Result<Self> {
        Interval::new(self.lo.clone(), self.hi.clone(), self.kind, semantics)
    }

    pub fn contains(&self, z: &Vector) -> Result<bool> {
        match self.kind {
            IntervalKind::Closed => Ok(self.lo.leq(z)? && z.leq(&self.hi)?),
            IntervalKind::Open => {
                Ok(self.semantics.lt(&self.lo, z)? && self.semantics.lt(z, &self.hi)?)
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IntervalKind::Open => write!(f, "open({}, {})", self.lo, self.hi),
            IntervalKind::Closed => write!(f, "closed[{}, {}]", self.lo, self.hi),
        }
    }
}

/// Standalone form of an interval, carrying its own semantics.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalDoc {
    lo: Vector,
    hi: Vector,
    kind: IntervalKind,
    #[serde(default)]
    semantics: IntervalSemantics,
}

impl TryFrom<IntervalDoc> for Interval {
    type Error = Error;

    fn try_from(d: IntervalDoc) -> Result<Self> {
        d.lo.check_same_carrier(&d.hi)?;
        Interval::new(d.lo, d.hi, d.kind, d.semantics)
    }
}

impl From<Interval> for IntervalDoc {
    fn from(i: Interval) -> Self {
        IntervalDoc {
            lo: i.lo,
            hi: i.hi,
            kind: i.kind,
            semantics: i.semantics,
        }
    }
}

pub fn interval_contains(interval: &Interval, z: &Vector) -> Result<bool> {
    interval.contains(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Le,
    Ge,
}

impl Relation {
    pub fn holds(self, a: &Rat, b: &Rat) -> bool {
        match self {
            Relation::Le => a <= b,
            Relation::Ge => a >= b,
        }
    }
}

/// Subsets of a carrier built from a closed grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub enum SetExpr {
    Interval(Interval),
    Ideal(Vec<Vector>),
    Band(Vec<Vector>),
    SolidHull(Vec<Vector>),
    HalfSpace {
        axis: Axis,
        rel: Relation,
        bound: Rat,
    },
    /// Tail sequences whose constant tail is zero (finitely supported).
    TailZero,
    Complement(Box<SetExpr>),
    Union(Vec<SetExpr>),
    Intersection(Vec<SetExpr>),
    /// `{z : z - a in S}`.
    Translate(Box<SetExpr>, Vector),
    /// `{z : z / t in S}`, `t != 0`.
    Dilate(Box<SetExpr>, Rat),
}

impl SetExpr {
    pub fn full() -> Self {
        SetExpr::Intersection(Vec::new())
    }

    pub fn empty() -> Self {
        SetExpr::Union(Vec::new())
    }

    pub fn interval(i: Interval) -> Self {
        SetExpr::Interval(i)
    }

    pub fn complement(s: SetExpr) -> Self {
        SetExpr::Complement(Box::new(s))
    }

    pub fn translate(s: SetExpr, a: Vector) -> Self {
        SetExpr::Translate(Box::new(s), a)
    }

    pub fn dilate(s: SetExpr, t: Rat) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::Precondition(
                "dilation factor must be nonzero".into(),
            ));
        }
        Ok(SetExpr::Dilate(Box::new(s), t))
    }

    pub fn half_space(axis: Axis, rel: Relation, bound: Rat) -> Self {
        SetExpr::HalfSpace { axis, rel, bound }
    }

    /// `{z : z_axis > bound}` as the complement of a closed half-space.
    pub fn strict_above(axis: Axis, bound: Rat) -> Self {
        SetExpr::complement(SetExpr::half_space(axis, Relation::Le, bound))
    }

    /// `{z : z_j > 0 for j = 1..n}` in `Q^n`.
    pub fn positive_orthant(n: usize) -> Self {
        SetExpr::Intersection(
            (1..=n)
                .map(|j| SetExpr::strict_above(Axis::Coord(j), Rat::zero()))
                .collect(),
        )
    }

    /// The carrier implied by the embedded vectors, if any.
    pub fn carrier_hint(&self) -> Option<Carrier> {
        let mut found = None;
        self.visit_vectors(&mut |v| {
            found.get_or_insert(v.carrier());
        });
        if found.is_none() && self.mentions_tail() {
            return Some(Carrier::TailSeq);
        }
        found
    }

    fn mentions_tail(&self) -> bool {
        match self {
            SetExpr::TailZero => true,
            SetExpr::HalfSpace {
                axis: Axis::Tail, ..
            } => true,
            SetExpr::Complement(s) | SetExpr::Translate(s, _) | SetExpr::Dilate(s, _) => {
                s.mentions_tail()
            }
            SetExpr::Union(v) | SetExpr::Intersection(v) => v.iter().any(SetExpr::mentions_tail),
            _ => false,
        }
    }

    pub fn visit_vectors(&self, f: &mut impl FnMut(&Vector)) {
        match self {
            SetExpr::Interval(i) => {
                f(&i.lo);
                f(&i.hi);
            }
            SetExpr::Ideal(g) | SetExpr::Band(g) | SetExpr::SolidHull(g) => g.iter().for_each(f),
            SetExpr::HalfSpace { .. } | SetExpr::TailZero => {}
            SetExpr::Complement(s) | SetExpr::Dilate(s, _) => s.visit_vectors(f),
            SetExpr::Translate(s, a) => {
                s.visit_vectors(f);
                f(a);
            }
            SetExpr::Union(v) | SetExpr::Intersection(v) => {
                v.iter().for_each(|s| s.visit_vectors(f))
            }
        }
    }

    /// Every embedded vector and axis must live in `carrier`.
    pub fn check_carrier(&self, carrier: Carrier) -> Result<()> {
        match self {
            SetExpr::Interval(i) => {
                i.lo.check_carrier(carrier)?;
                i.hi.check_carrier(carrier)
            }
            SetExpr::Ideal(g) | SetExpr::Band(g) | SetExpr::SolidHull(g) => {
                if g.is_empty() {
                    return Err(Error::EmptyGenerators);
                }
                g.iter().try_for_each(|v| v.check_carrier(carrier))
            }
            SetExpr::HalfSpace { axis, .. } => match (axis, carrier) {
                (Axis::Coord(j), Carrier::FinDim(n)) if *j >= 1 && *j <= n => Ok(()),
                (Axis::Coord(j), Carrier::TailSeq) if *j >= 1 => Ok(()),
                (Axis::Tail, Carrier::TailSeq) => Ok(()),
                _ => Err(Error::AxisOutOfRange {
                    axis: axis.to_string(),
                    carrier,
                }),
            },
            SetExpr::TailZero => match carrier {
                Carrier::TailSeq => Ok(()),
                _ => Err(Error::CarrierMismatch {
                    expected: Carrier::TailSeq,
                    found: carrier,
                }),
            },
            SetExpr::Complement(s) => s.check_carrier(carrier),
            SetExpr::Dilate(s, t) => {
                if t.is_zero() {
                    return Err(Error::Precondition(
                        "dilation factor must be nonzero".into(),
                    ));
                }
                s.check_carrier(carrier)
            }
            SetExpr::Translate(s, a) => {
                a.check_carrier(carrier)?;
                s.check_carrier(carrier)
            }
            SetExpr::Union(v) | SetExpr::Intersection(v) => {
                v.iter().try_for_each(|s| s.check_carrier(carrier))
            }
        }
    }

    /// Rebuilds every interval under `semantics`.
    pub fn with_semantics(&self, semantics: IntervalSemantics) -> Result<SetExpr> {
        Ok(match self {
            SetExpr::Interval(i) => SetExpr::Interval(i.with_semantics(semantics)?),
            SetExpr::Complement(s) => SetExpr::complement(s.with_semantics(semantics)?),
            SetExpr::Translate(s, a) => SetExpr::translate(s.with_semantics(semantics)?, a.clone()),
            SetExpr::Dilate(s, t) => {
                SetExpr::Dilate(Box::new(s.with_semantics(semantics)?), t.clone())
            }
            SetExpr::Union(v) => SetExpr::Union(
                v.iter()
                    .map(|s| s.with_semantics(semantics))
                    .collect::<Result<_>>()?,
            ),
            SetExpr::Intersection(v) => SetExpr::Intersection(
                v.iter()
                    .map(|s| s.with_semantics(semantics))
                    .collect::<Result<_>>()?,
            ),
            other => other.clone(),
        })
    }

    /// Largest stored prefix length among embedded vectors, after accounting
    /// for translations; axes named explicitly count too.
    pub fn max_prefix(&self) -> usize {
        match self {
            SetExpr::HalfSpace {
                axis: Axis::Coord(j),
                ..
            } => *j,
            SetExpr::HalfSpace { .. } | SetExpr::TailZero => 0,
            SetExpr::Interval(i) => i.lo.prefix_len().max(i.hi.prefix_len()),
            SetExpr::Ideal(g) | SetExpr::Band(g) | SetExpr::SolidHull(g) => {
                g.iter().map(Vector::prefix_len).max().unwrap_or(0)
            }
            SetExpr::Complement(s) | SetExpr::Dilate(s, _) => s.max_prefix(),
            SetExpr::Translate(s, a) => s.max_prefix().max(a.prefix_len()),
            SetExpr::Union(v) | SetExpr::Intersection(v) => {
                v.iter().map(SetExpr::max_prefix).max().unwrap_or(0)
            }
        }
    }

    /// A finite set of scalars `d` such that membership of `z` is a boolean
    /// function of the comparisons `z_i <= d` and `z_i >= d` over this pool.
    pub(crate) fn constant_pool(&self) -> BTreeSet<Rat> {
        let mut pool = BTreeSet::new();
        match self {
            SetExpr::Interval(i) => {
                pool.extend(i.lo.values().cloned());
                pool.extend(i.hi.values().cloned());
            }
            SetExpr::Ideal(_) | SetExpr::Band(_) | SetExpr::TailZero => {
                pool.insert(Rat::zero());
            }
            SetExpr::SolidHull(g) => {
                for v in g {
                    for c in v.values() {
                        pool.insert(c.abs());
                        pool.insert(-c.abs());
                    }
                }
                pool.insert(Rat::zero());
            }
            SetExpr::HalfSpace { bound, .. } => {
                pool.insert(bound.clone());
            }
            SetExpr::Complement(s) => pool = s.constant_pool(),
            SetExpr::Union(v) | SetExpr::Intersection(v) => {
                for s in v {
                    pool.extend(s.constant_pool());
                }
            }
            SetExpr::Translate(s, a) => {
                let inner = s.constant_pool();
                for d in &inner {
                    for c in a.values() {
                        pool.insert(d + c);
                    }
                }
            }
            SetExpr::Dilate(s, t) => {
                pool = s.constant_pool().iter().map(|d| d * t).collect();
            }
        }
        pool
    }

    /// Pushes complements down to primitive sets (De Morgan, double
    /// negation, and commuting with translations and dilations).
    pub fn push_complements(&self) -> SetExpr {
        match self {
            SetExpr::Complement(inner) => inner.negated(),
            SetExpr::Union(v) => SetExpr::Union(v.iter().map(SetExpr::push_complements).collect()),
            SetExpr::Intersection(v) => {
                SetExpr::Intersection(v.iter().map(SetExpr::push_complements).collect())
            }
            SetExpr::Translate(s, a) => SetExpr::translate(s.push_complements(), a.clone()),
            SetExpr::Dilate(s, t) => SetExpr::Dilate(Box::new(s.push_complements()), t.clone()),
            other => other.clone(),
        }
    }

    /// The complement of `self`, with complements pushed to the leaves.
    pub fn negated(&self) -> SetExpr {
        match self {
            SetExpr::Complement(inner) => inner.push_complements(),
            SetExpr::Union(v) => SetExpr::Intersection(v.iter().map(SetExpr::negated).collect()),
            SetExpr::Intersection(v) => SetExpr::Union(v.iter().map(SetExpr::negated).collect()),
            SetExpr::Translate(s, a) => SetExpr::translate(s.negated(), a.clone()),
            SetExpr::Dilate(s, t) => SetExpr::Dilate(Box::new(s.negated()), t.clone()),
            leaf => SetExpr::complement(leaf.clone()),
        }
    }

    pub fn is_primitive(&self) -> bool {
        !matches!(
            self,
            SetExpr::Complement(_)
                | SetExpr::Union(_)
                | SetExpr::Intersection(_)
                | SetExpr::Translate(..)
                | SetExpr::Dilate(..)
        )
    }
}

/// Membership of `z` in `set`.
pub fn member(set: &SetExpr, z: &Vector) -> Result<bool> {
    set.check_carrier(z.carrier())?;
    member_unchecked(set, z)
}

pub(crate) fn member_unchecked(set: &SetExpr, z: &Vector) -> Result<bool> {
    Ok(match set {
        SetExpr::Interval(i) => i.contains(z)?,
        SetExpr::Ideal(g) => ideal_member(g, z)?.is_some(),
        SetExpr::Band(g) => band_member(g, z)?,
        SetExpr::SolidHull(g) => solid_hull_member(g, z)?,
        SetExpr::HalfSpace { axis, rel, bound } => rel.holds(&z.coord(*axis)?, bound),
        SetExpr::TailZero => z.tail().map(Rat::is_zero).unwrap_or(false),
        SetExpr::Complement(s) => !member_unchecked(s, z)?,
        SetExpr::Union(v) => {
            for s in v {
                if member_unchecked(s, z)? {
                    return Ok(true);
                }
            }
            false
        }
        SetExpr::Intersection(v) => {
            for s in v {
                if !member_unchecked(s, z)? {
                    return Ok(false);
                }
            }
            true
        }
        SetExpr::Translate(s, a) => member_unchecked(s, &z.sub(a)?)?,
        SetExpr::Dilate(s, t) => member_unchecked(s, &z.scale(&t.recip()))?,
    })
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[Vector]| {
            v.iter()
                .map(Vector::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        let sets = |v: &[SetExpr]| {
            v.iter()
                .map(SetExpr::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            SetExpr::Interval(i) => write!(f, "{i}"),
            SetExpr::Ideal(g) => write!(f, "ideal{{{}}}", list(g)),
            SetExpr::Band(g) => write!(f, "band{{{}}}", list(g)),
            SetExpr::SolidHull(g) => write!(f, "solid-hull{{{}}}", list(g)),
            SetExpr::HalfSpace { axis, rel, bound } => {
                let r = if *rel == Relation::Le { "<=" } else { ">=" };
                write!(f, "{{z : z[{axis}] {r} {bound}}}")
            }
            SetExpr::TailZero => f.write_str("tail-zero"),
            SetExpr::Complement(s) => write!(f, "complement({s})"),
            SetExpr::Union(v) if v.is_empty() => f.write_str("empty"),
            SetExpr::Intersection(v) if v.is_empty() => f.write_str("full"),
            SetExpr::Union(v) => write!(f, "union({})", sets(v)),
            SetExpr::Intersection(v) => write!(f, "intersection({})", sets(v)),
            SetExpr::Translate(s, a) => write!(f, "translate({s}, {a})"),
            SetExpr::Dilate(s, t) => write!(f, "dilate({s}, {t})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalRepr {
    lo: Vector,
    hi: Vector,
    kind: IntervalKind,
    #[serde(default, skip_serializing_if = "is_partial")]
    semantics: IntervalSemantics,
}

fn is_partial(s: &IntervalSemantics) -> bool {
    *s == IntervalSemantics::StrictPartial
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HalfSpaceRepr {
    axis: Axis,
    rel: Relation,
    bound: Rat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TranslateRepr {
    set: Box<SetRepr>,
    by: Vector,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DilateRepr {
    set: Box<SetRepr>,
    by: Rat,
}

/// JSON shape of [`SetExpr`]: one single-key object per constructor. The
/// interval semantics flag is carried by the enclosing document.
#[derive(Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
enum SetRepr {
    Interval(IntervalRepr),
    Ideal(Vec<Vector>),
    Band(Vec<Vector>),
    SolidHull(Vec<Vector>),
    HalfSpace(HalfSpaceRepr),
    TailZero,
    Complement(Box<SetRepr>),
    Union(Vec<SetRepr>),
    Intersection(Vec<SetRepr>),
    Translate(TranslateRepr),
    Dilate(DilateRepr),
}

impl TryFrom<SetRepr> for SetExpr {
    type Error = Error;

    fn try_from(r: SetRepr) -> Result<Self> {
        let gens = |g: Vec<Vector>| {
            if g.is_empty() {
                Err(Error::EmptyGenerators)
            } else {
                Ok(g)
            }
        };
        Ok(match r {
            SetRepr::Interval(i) => {
                SetExpr::Interval(Interval::new(i.lo, i.hi, i.kind, i.semantics)?)
            }
            SetRepr::Ideal(g) => SetExpr::Ideal(gens(g)?),
            SetRepr::Band(g) => SetExpr::Band(gens(g)?),
            SetRepr::SolidHull(g) => SetExpr::SolidHull(gens(g)?),
            SetRepr::HalfSpace(h) => SetExpr::HalfSpace {
                axis: h.axis,
                rel: h.rel,
                bound: h.bound,
            },
            SetRepr::TailZero => SetExpr::TailZero,
            SetRepr::Complement(s) => SetExpr::complement(SetExpr::try_from(*s)?),
            SetRepr::Union(v) => SetExpr::Union(
                v.into_iter()
                    .map(SetExpr::try_from)
                    .collect::<Result<_>>()?,
            ),
            SetRepr::Intersection(v) => SetExpr::Intersection(
                v.into_iter()
                    .map(SetExpr::try_from)
                    .collect::<Result<_>>()?,
            ),
            SetRepr::Translate(t) => SetExpr::translate(SetExpr::try_from(*t.set)?, t.by),
            SetRepr::Dilate(d) => SetExpr::dilate(SetExpr::try_from(*d.set)?, d.by)?,
        })
    }
}

impl From<SetExpr> for SetRepr {
    fn from(s: SetExpr) -> Self {
        match s {
            SetExpr::Interval(i) => SetRepr::Interval(IntervalRepr {
                lo: i.lo,
                hi: i.hi,
                kind: i.kind,
                semantics: i.semantics,
            }),
            SetExpr::Ideal(g) => SetRepr::Ideal(g),
            SetExpr::Band(g) => SetRepr::Band(g),
            SetExpr::SolidHull(g) => SetRepr::SolidHull(g),
            SetExpr::HalfSpace { axis, rel, bound } => {
                SetRepr::HalfSpace(HalfSpaceRepr { axis, rel, bound })
            }
            SetExpr::TailZero => SetRepr::TailZero,
            SetExpr::Complement(s) => SetRepr::Complement(Box::new((*s).into())),
            SetExpr::Union(v) => SetRepr::Union(v.into_iter().map(Into::into).collect()),
            SetExpr::Intersection(v) => {
                SetRepr::Intersection(v.into_iter().map(Into::into).collect())
            }
            SetExpr::Translate(s, a) => SetRepr::Translate(TranslateRepr {
                set: Box::new((*s).into()),
                by: a,
            }),
            SetExpr::Dilate(s, t) => SetRepr::Dilate(DilateRepr {
                set: Box::new((*s).into()),
                by: t,
            }),
        }
    }
}
