//! Ideals, bands, solid hulls, atoms and disjointness.
//!
//! In both carriers the ideal generated by finitely many vectors and the band
//! they generate are determined by supports: a coordinate where every
//! generator vanishes must vanish in every member. Ideal membership adds the
//! quantitative bound `|y| <= lambda * (|g_1| + ... + |g_m|)`, which is always
//! satisfiable once supports agree because every vector takes finitely many
//! distinct values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{positions, Carrier, Vector};
use crate::rat::Rat;

fn generator_sum(gens: &[Vector]) -> Result<Vector> {
    let (first, rest) = gens.split_first().ok_or(Error::EmptyGenerators)?;
    rest.iter()
        .try_fold(first.abs(), |acc, g| acc.add(&g.abs()))
}

/// Ideal membership with its quantitative witness.
///
/// Returns the least `lambda >= 0` with `|y| <= lambda * sum |g_i|` when `y`
/// lies in the ideal, `None` otherwise. The least value is attained unless
/// `y = 0`, where it is the infimum `0` and every positive `lambda` works.
pub fn ideal_member(gens: &[Vector], y: &Vector) -> Result<Option<Rat>> {
    let g = generator_sum(gens)?;
    g.check_same_carrier(y)?;
    let mut lambda = Rat::zero();
    for p in positions(&[&g, y]) {
        let (gi, yi) = (g.get(p), y.get(p).abs());
        if gi.is_zero() {
            if !yi.is_zero() {
                return Ok(None);
            }
        } else {
            lambda = lambda.max(&yi / gi);
        }
    }
    Ok(Some(lambda))
}

/// Membership in the band generated by `gens`: `y` must vanish wherever
/// every generator vanishes.
pub fn band_member(gens: &[Vector], y: &Vector) -> Result<bool> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for g in gens {
        g.check_same_carrier(y)?;
    }
    let mut all: Vec<&Vector> = gens.iter().collect();
    all.push(y);
    Ok(positions(&all)
        .into_iter()
        .all(|p| !gens.iter().all(|g| g.get(p).is_zero()) || y.get(p).is_zero()))
}

/// Membership in the solid hull of `gens`: `|y| <= |g_i|` for some `i`.
pub fn solid_hull_member(gens: &[Vector], y: &Vector) -> Result<bool> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for g in gens {
        if y.abs().leq(&g.abs())? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn disjoint(x: &Vector, y: &Vector) -> Result<bool> {
    Ok(x.abs().inf(&y.abs())?.is_zero())
}

/// A positive vector is an atom iff exactly one coordinate is nonzero. A
/// nonzero tail means infinitely many nonzero coordinates, so never an atom.
pub fn is_atom(x: &Vector) -> Result<bool> {
    if x.values().any(Rat::is_negative) {
        return Err(Error::NotPositive(format!("{x} has a negative coordinate")));
    }
    if x.is_zero() {
        return Err(Error::NotPositive(
            "the zero vector is never an atom".into(),
        ));
    }
    if x.tail().is_some_and(|t| !t.is_zero()) {
        return Ok(false);
    }
    Ok(x.coords().iter().filter(|c| !c.is_zero()).count() == 1)
}

/// The atoms of a carrier: positive multiples of the unit vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomSet {
    pub carrier: Carrier,
    /// Number of atom directions, `None` when there are infinitely many.
    pub directions: Option<usize>,
    pub atomic: bool,
    pub description: String,
}

impl AtomSet {
    /// The first `limit` atom directions `e_1, e_2, ...`.
    pub fn representatives(&self, limit: usize) -> Vec<Vector> {
        let n = self.directions.map_or(limit, |d| d.min(limit));
        (1..=n)
            .map(|j| Vector::unit(self.carrier, j).expect("index in range"))
            .collect()
    }
}

pub fn carrier_atoms(carrier: Carrier) -> AtomSet {
    match carrier {
        Carrier::FinDim(n) => AtomSet {
            carrier,
            directions: Some(n),
            atomic: true,
            description: format!("{{lambda * e_j : lambda > 0, 1 <= j <= {n}}}"),
        },
        Carrier::TailSeq => AtomSet {
            carrier,
            directions: None,
            atomic: true,
            description: "{lambda * e_j : lambda > 0, j >= 1}".into(),
        },
    }
}
