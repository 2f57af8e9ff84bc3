//! Inputs shared by the benchmarks.

use ordtopo_core::nets::Family;
use ordtopo_core::{Carrier, Interval, IntervalSemantics, Rat, SetExpr, Vector};

/// `(-e1, e1)` in tail sequences.
pub fn e1_interval() -> SetExpr {
    let e1 = Vector::tail_ints(&[1], 0);
    SetExpr::interval(
        Interval::open(e1.negate(), e1, IntervalSemantics::StrictPartial).expect("nonempty"),
    )
}

/// A vector with `len` prefix entries `k / (k + 1)` and tail `1/2`.
pub fn long_sequence(len: usize) -> Vector {
    let prefix = (0..len as i64).map(|k| Rat::new(k, k + 1)).collect();
    Vector::tail_seq(prefix, Rat::new(1, 2))
}

/// Decaying families in `Q^n`, one per template that converges.
pub fn convergent_families(n: usize) -> Vec<(&'static str, Family, Vector)> {
    let c = Carrier::FinDim(n);
    let v = Vector::ones(c);
    vec![
        (
            "scale",
            Family::scale(v.clone(), Rat::new(1, 2)).expect("valid"),
            Vector::zero(c),
        ),
        (
            "coord-decay",
            Family::coord_decay(v.clone(), v.negate(), Rat::zero()).expect("valid"),
            v,
        ),
    ]
}
