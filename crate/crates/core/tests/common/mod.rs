#![allow(dead_code)]

use proptest::prelude::*;

use ordtopo_core::nets::Family;
use ordtopo_core::{Axis, Carrier, Interval, IntervalSemantics, Rat, Relation, SetExpr, Vector};

/// Rationals with denominators up to 64 and absolute value up to 4.
pub fn rat() -> impl Strategy<Value = Rat> {
    (1i64..=64).prop_flat_map(|q| (-4 * q..=4 * q).prop_map(move |p| Rat::new(p, q)))
}

/// Small rationals: denominators up to 4, absolute value up to 2.
pub fn small_rat() -> impl Strategy<Value = Rat> {
    (1i64..=4).prop_flat_map(|q| (-2 * q..=2 * q).prop_map(move |p| Rat::new(p, q)))
}

pub fn nonneg_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_map(|r| r.abs())
}

pub fn carrier() -> impl Strategy<Value = Carrier> {
    prop_oneof![
        (1usize..=6).prop_map(Carrier::FinDim),
        Just(Carrier::TailSeq)
    ]
}

pub fn vector_in(c: Carrier, coord: BoxedStrategy<Rat>) -> BoxedStrategy<Vector> {
    match c {
        Carrier::FinDim(n) => prop::collection::vec(coord, n)
            .prop_map(Vector::fin_dim)
            .boxed(),
        Carrier::TailSeq => (prop::collection::vec(coord.clone(), 0..=8), coord)
            .prop_map(|(p, t)| Vector::tail_seq(p, t))
            .boxed(),
    }
}

pub fn triple() -> impl Strategy<Value = (Vector, Vector, Vector)> {
    carrier().prop_flat_map(|c| {
        let v = vector_in(c, rat().boxed());
        (v.clone(), v.clone(), v)
    })
}

/// A family in `c` from any template, with small parameters.
pub fn family_in(c: Carrier) -> BoxedStrategy<Family> {
    let v = vector_in(c, small_rat().boxed());
    let pos = vector_in(c, nonneg_rat().boxed());
    let lambda = prop::sample::select(vec![Rat::new(1, 2), Rat::new(1, 3), Rat::new(2, 3)]);
    let q = prop::sample::select(vec![Rat::zero(), Rat::new(1, 2), Rat::one()]);
    let explicit =
        prop::collection::vec(v.clone(), 1..=4).prop_map(|vs| Family::explicit(vs).unwrap());
    let scale = (pos.clone(), lambda).prop_map(|(v, l)| Family::scale(v, l).unwrap());
    let decay =
        (v.clone(), v.clone(), q).prop_map(|(c, p, q)| Family::coord_decay(c, p, q).unwrap());
    let base: BoxedStrategy<Family> = match c {
        Carrier::TailSeq => {
            let shift = (small_rat(), small_rat(), prop::option::of(v.clone()))
                .prop_map(|(head, tail, offset)| Family::Shift { head, tail, offset });
            prop_oneof![explicit, scale, decay, shift].boxed()
        }
        Carrier::FinDim(_) => prop_oneof![explicit, scale, decay].boxed(),
    };
    let wrapped = (base.clone(), v.clone(), prop::bool::ANY).prop_map(|(b, w, rsm)| {
        if rsm {
            Family::running_sup_meet(b, w).unwrap()
        } else {
            Family::deviation(b, w).unwrap()
        }
    });
    prop_oneof![3 => base, 1 => wrapped].boxed()
}

pub fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (1usize..=3).prop_map(Carrier::FinDim),
        Just(Carrier::TailSeq)
    ]
    .prop_flat_map(family_in)
}

fn axis_in(c: Carrier) -> BoxedStrategy<Axis> {
    match c {
        Carrier::FinDim(n) => (1..=n).prop_map(Axis::Coord).boxed(),
        Carrier::TailSeq => {
            prop_oneof![(1usize..=3).prop_map(Axis::Coord), Just(Axis::Tail)].boxed()
        }
    }
}

fn interval_in(c: Carrier) -> BoxedStrategy<SetExpr> {
    let v = vector_in(c, small_rat().boxed());
    let w = vector_in(c, nonneg_rat().boxed());
    let sem = prop::sample::select(vec![
        IntervalSemantics::StrictPartial,
        IntervalSemantics::StrictUniform,
    ]);
    (v, w, prop::bool::ANY, sem)
        .prop_filter_map("empty interval", |(lo, width, closed, sem)| {
            let hi = lo.add(&width).ok()?;
            let i = if closed {
                Interval::closed(lo, hi)
            } else {
                Interval::open(lo, hi, sem)
            };
            i.ok().map(SetExpr::interval)
        })
        .boxed()
}

/// Sets built from half-spaces and intervals with the boolean and affine
/// operations of the grammar.
pub fn set_in(c: Carrier) -> BoxedStrategy<SetExpr> {
    let rel = prop::sample::select(vec![Relation::Le, Relation::Ge]);
    let half = (axis_in(c), rel, small_rat()).prop_map(|(a, r, b)| SetExpr::half_space(a, r, b));
    let leaf = prop_oneof![half, interval_in(c)];
    let v = vector_in(c, small_rat().boxed());
    leaf.prop_recursive(2, 6, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(SetExpr::complement),
            prop::collection::vec(inner.clone(), 2).prop_map(SetExpr::Union),
            prop::collection::vec(inner.clone(), 2).prop_map(SetExpr::Intersection),
            (inner.clone(), v.clone()).prop_map(|(s, a)| SetExpr::translate(s, a)),
            (
                inner,
                prop::sample::select(vec![Rat::from(2), Rat::new(-1, 2)])
            )
                .prop_map(|(s, t)| SetExpr::dilate(s, t).unwrap()),
        ]
    })
    .boxed()
}
