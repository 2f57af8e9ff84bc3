//! The two executable lattice carriers and their vector-lattice operations.
//!
//! * [`Carrier::FinDim`] is `Q^n` with the coordinatewise order.
//! * [`Carrier::TailSeq`] holds sequences `(p_1, ..., p_m, t, t, t, ...)`, a
//!   sublattice of `l^inf` that contains every eventually constant rational
//!   sequence.
//!
//! A [`Vector`] is always kept in canonical form: a tail sequence prefix never
//! ends with an entry equal to its tail. Binary operations on tail sequences
//! pad the shorter prefix with its own tail before working coordinatewise.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Which lattice a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Carrier {
    FinDim(usize),
    TailSeq,
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::FinDim(n) => write!(f, "Q^{n}"),
            Carrier::TailSeq => f.write_str("tail-seq"),
        }
    }
}

/// A coordinate position. `Coord(j)` is 1-based so that `Coord(j)` is the
/// support of the unit vector `e_j`; `Tail` addresses the constant tail of a
/// tail sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Coord(usize),
    Tail,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Coord(j) => write!(f, "{j}"),
            Axis::Tail => f.write_str("tail"),
        }
    }
}

impl Serialize for Axis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Axis::Coord(j) => serializer.serialize_u64(*j as u64),
            Axis::Tail => serializer.serialize_str("tail"),
        }
    }
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(u64),
            Name(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Index(0) => Err(serde::de::Error::custom("coordinate axes are 1-based")),
            Raw::Index(j) => Ok(Axis::Coord(j as usize)),
            Raw::Name(s) if s == "tail" => Ok(Axis::Tail),
            Raw::Name(s) => Err(serde::de::Error::custom(format!("unknown axis {s:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    FinDim(Vec<Rat>),
    TailSeq { prefix: Vec<Rat>, tail: Rat },
}

/// An element of one of the two carriers, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vector(Repr);

impl Vector {
    pub fn fin_dim(coords: Vec<Rat>) -> Self {
        Vector(Repr::FinDim(coords))
    }

    /// Builds `(prefix..., tail, tail, ...)`, normalizing the prefix.
    pub fn tail_seq(mut prefix: Vec<Rat>, tail: Rat) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Vector(Repr::TailSeq { prefix, tail })
    }

    /// Integer shorthand for `Q^n` vectors.
    pub fn ints(coords: &[i64]) -> Self {
        Vector::fin_dim(coords.iter().map(|&c| Rat::from(c)).collect())
    }

    /// Integer shorthand for tail sequences.
    pub fn tail_ints(prefix: &[i64], tail: i64) -> Self {
        Vector::tail_seq(
            prefix.iter().map(|&c| Rat::from(c)).collect(),
            Rat::from(tail),
        )
    }

    pub fn constant(carrier: Carrier, value: Rat) -> Self {
        match carrier {
            Carrier::FinDim(n) => Vector::fin_dim(vec![value; n]),
            Carrier::TailSeq => Vector::tail_seq(Vec::new(), value),
        }
    }

    pub fn zero(carrier: Carrier) -> Self {
        Vector::constant(carrier, Rat::zero())
    }

    /// The all-ones vector (constant-1 sequence in the tail carrier).
    pub fn ones(carrier: Carrier) -> Self {
        Vector::constant(carrier, Rat::one())
    }

    /// The unit vector `e_j` (1-based).
    pub fn unit(carrier: Carrier, j: usize) -> Result<Self> {
        if j == 0 || matches!(carrier, Carrier::FinDim(n) if j > n) {
            return Err(Error::AxisOutOfRange {
                axis: j.to_string(),
                carrier,
            });
        }
        let mut v = match carrier {
            Carrier::FinDim(n) => vec![Rat::zero(); n],
            Carrier::TailSeq => vec![Rat::zero(); j],
        };
        v[j - 1] = Rat::one();
        Ok(match carrier {
            Carrier::FinDim(_) => Vector::fin_dim(v),
            Carrier::TailSeq => Vector::tail_seq(v, Rat::zero()),
        })
    }

    pub fn carrier(&self) -> Carrier {
        match &self.0 {
            Repr::FinDim(c) => Carrier::FinDim(c.len()),
            Repr::TailSeq { .. } => Carrier::TailSeq,
        }
    }

    /// The explicitly stored coordinates: all of them in `Q^n`, the prefix
    /// for a tail sequence.
    pub fn coords(&self) -> &[Rat] {
        match &self.0 {
            Repr::FinDim(c) => c,
            Repr::TailSeq { prefix, .. } => prefix,
        }
    }

    pub fn tail(&self) -> Option<&Rat> {
        match &self.0 {
            Repr::FinDim(_) => None,
            Repr::TailSeq { tail, .. } => Some(tail),
        }
    }

    pub fn prefix_len(&self) -> usize {
        self.coords().len()
    }

    /// Coordinate at a 0-based position. Positions past a tail sequence's
    /// prefix read the tail; past the end of a `Q^n` vector they panic.
    pub(crate) fn at(&self, i: usize) -> &Rat {
        match &self.0 {
            Repr::FinDim(c) => &c[i],
            Repr::TailSeq { prefix, tail } => prefix.get(i).unwrap_or(tail),
        }
    }

    pub fn coord(&self, axis: Axis) -> Result<Rat> {
        match (axis, &self.0) {
            (Axis::Coord(j), Repr::FinDim(c)) if j >= 1 && j <= c.len() => Ok(c[j - 1].clone()),
            (Axis::Coord(j), Repr::TailSeq { .. }) if j >= 1 => Ok(self.at(j - 1).clone()),
            (Axis::Tail, Repr::TailSeq { tail, .. }) => Ok(tail.clone()),
            _ => Err(Error::AxisOutOfRange {
                axis: axis.to_string(),
                carrier: self.carrier(),
            }),
        }
    }

    /// Every distinct scalar that appears as a coordinate.
    pub fn values(&self) -> impl Iterator<Item = &Rat> {
        self.coords().iter().chain(self.tail())
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(Rat::is_zero)
    }

    /// Number of coordinates to visit when comparing `self` against `other`
    /// position by position (the tail, if any, is compared separately).
    fn aligned_len(&self, other: &Vector) -> usize {
        self.prefix_len().max(other.prefix_len())
    }

    pub fn check_same_carrier(&self, other: &Vector) -> Result<()> {
        let (a, b) = (self.carrier(), other.carrier());
        if a == b {
            Ok(())
        } else {
            Err(Error::CarrierMismatch {
                expected: a,
                found: b,
            })
        }
    }

    pub fn check_carrier(&self, carrier: Carrier) -> Result<()> {
        if self.carrier() == carrier {
            Ok(())
        } else {
            Err(Error::CarrierMismatch {
                expected: carrier,
                found: self.carrier(),
            })
        }
    }

    pub fn map(&self, mut f: impl FnMut(&Rat) -> Rat) -> Vector {
        match &self.0 {
            Repr::FinDim(c) => Vector::fin_dim(c.iter().map(f).collect()),
            Repr::TailSeq { prefix, tail } => {
                let p = prefix.iter().map(&mut f).collect();
                Vector::tail_seq(p, f(tail))
            }
        }
    }

    pub fn zip_with(&self, other: &Vector, mut f: impl FnMut(&Rat, &Rat) -> Rat) -> Result<Vector> {
        self.check_same_carrier(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::FinDim(a), Repr::FinDim(b)) => {
                Vector::fin_dim(a.iter().zip(b).map(|(x, y)| f(x, y)).collect())
            }
            (Repr::TailSeq { tail: ta, .. }, Repr::TailSeq { tail: tb, .. }) => {
                let n = self.aligned_len(other);
                let prefix = (0..n).map(|i| f(self.at(i), other.at(i))).collect();
                Vector::tail_seq(prefix, f(ta, tb))
            }
            _ => unreachable!("carriers checked"),
        })
    }

    /// True iff `pred` holds at every aligned coordinate, tail included.
    pub fn all_pairs(
        &self,
        other: &Vector,
        mut pred: impl FnMut(&Rat, &Rat) -> bool,
    ) -> Result<bool> {
        self.check_same_carrier(other)?;
        let n = match (&self.0, &other.0) {
            (Repr::FinDim(a), _) => a.len(),
            _ => self.aligned_len(other),
        };
        let body = (0..n).all(|i| pred(self.at(i), other.at(i)));
        Ok(body
            && match (self.tail(), other.tail()) {
                (Some(a), Some(b)) => pred(a, b),
                _ => true,
            })
    }

    pub fn leq(&self, other: &Vector) -> Result<bool> {
        self.all_pairs(other, |a, b| a <= b)
    }

    /// `self < other` in every coordinate, tail included.
    pub fn strictly_below_everywhere(&self, other: &Vector) -> Result<bool> {
        self.all_pairs(other, |a, b| a < b)
    }

    /// The strict lattice order: `self <= other` and `self != other`.
    pub fn lt(&self, other: &Vector) -> Result<bool> {
        Ok(self.leq(other)? && self != other)
    }

    pub fn sup(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a.clone().max(b.clone()))
    }

    pub fn inf(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a.clone().min(b.clone()))
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, t: &Rat) -> Vector {
        self.map(|a| a * t)
    }

    pub fn negate(&self) -> Vector {
        self.map(|a| -a)
    }

    /// `|x| = x v (-x)`.
    pub fn abs(&self) -> Vector {
        self.map(Rat::abs)
    }

    /// `x+ = x v 0`.
    pub fn pos(&self) -> Vector {
        self.map(|a| a.clone().max(Rat::zero()))
    }

    /// `x- = (-x) v 0`.
    pub fn neg(&self) -> Vector {
        self.map(|a| (-a).max(Rat::zero()))
    }

    pub(crate) fn get(&self, p: Pos) -> &Rat {
        match p {
            Pos::At(i) => self.at(i),
            Pos::Tail => self.tail().expect("tail position on a Q^n vector"),
        }
    }

    /// Re-establishes canonical form. Vectors are canonical on construction,
    /// so this is the identity on values; it exists for explicit round trips.
    pub fn normalize(&self) -> Vector {
        match &self.0 {
            Repr::FinDim(_) => self.clone(),
            Repr::TailSeq { prefix, tail } => Vector::tail_seq(prefix.clone(), tail.clone()),
        }
    }

    /// Padded prefix of length `n` (tail sequences only pad; `Q^n` returns
    /// all coordinates).
    pub(crate) fn padded(&self, n: usize) -> Vec<Rat> {
        match &self.0 {
            Repr::FinDim(c) => c.clone(),
            Repr::TailSeq { .. } => (0..n.max(self.prefix_len()))
                .map(|i| self.at(i).clone())
                .collect(),
        }
    }
}

/// A coordinate position used when walking several vectors in lockstep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pos {
    At(usize),
    Tail,
}

/// Positions that jointly determine every coordinate of the given vectors
/// (all of them share a carrier): each prefix slot, then the tail.
pub(crate) fn positions(vs: &[&Vector]) -> Vec<Pos> {
    let Some(first) = vs.first() else {
        return Vec::new();
    };
    match first.carrier() {
        Carrier::FinDim(n) => (0..n).map(Pos::At).collect(),
        Carrier::TailSeq => {
            let n = vs.iter().map(|v| v.prefix_len()).max().unwrap_or(0);
            (0..n)
                .map(Pos::At)
                .chain(std::iter::once(Pos::Tail))
                .collect()
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |c: &[Rat]| c.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ");
        match &self.0 {
            Repr::FinDim(c) => write!(f, "({})", join(c)),
            Repr::TailSeq { prefix, tail } if prefix.is_empty() => write!(f, "({tail}...)"),
            Repr::TailSeq { prefix, tail } => write!(f, "({}, {tail}...)", join(prefix)),
        }
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailSeqRepr {
    prefix: Vec<Rat>,
    tail: Rat,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorRepr {
    FinDim(Vec<Rat>),
    TailSeq(TailSeqRepr),
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::FinDim(c) => c.serialize(serializer),
            Repr::TailSeq { prefix, tail } => TailSeqRepr {
                prefix: prefix.clone(),
                tail: tail.clone(),
            }
            .serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match VectorRepr::deserialize(deserializer)? {
            VectorRepr::FinDim(c) if c.is_empty() => Err(serde::de::Error::custom(
                "a Q^n vector needs at least one coordinate",
            )),
            VectorRepr::FinDim(c) => Ok(Vector::fin_dim(c)),
            VectorRepr::TailSeq(t) => Ok(Vector::tail_seq(t.prefix, t.tail)),
        }
    }
}
