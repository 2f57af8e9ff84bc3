//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordtopo_core::nets::{
    eventually_in, monotonicity, order_converges, order_limit, CertificateCheck, Direction,
    EventualMembership, Family,
};
use ordtopo_core::sets::{
    band_member, box_containment, ideal_member, is_atom, member, Containment,
};
use ordtopo_core::theorems::{
    tau_subset_probe, verify_band_proposition, verify_example_e1, verify_theorem_t1, Conclusion,
    Operation, Outcome, StepStatus, TheoremReport,
};
use ordtopo_core::topology::{
    box_samples, tau_e_convergence_report, NeighborhoodCatalog, TauEReport, Verdict,
};
use ordtopo_core::{
    Axis, Carrier, Interval, IntervalSemantics, Rat, Relation, SearchConfig, SetExpr, Vector,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("example e1 end to end", example_e1),
        ("lattice laws", lattice_laws),
        ("t1 certificates from symmetric chains", theorem_t1),
        ("band proposition table", band_table),
        ("order-open sets are interval-open", tau_subset),
        ("oracle equivalence", oracles),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({secs:.2}s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p / q` with `1 <= q <= max_den` and `|p / q| <= bound`.
fn draw_rat(rng: &mut ChaCha8Rng, max_den: i64, bound: i64) -> Rat {
    let q = rng.gen_range(1..=max_den);
    Rat::new(rng.gen_range(-bound * q..=bound * q), q)
}

fn draw_vector(rng: &mut ChaCha8Rng, c: Carrier, max_den: i64, bound: i64) -> Vector {
    match c {
        Carrier::FinDim(n) => {
            Vector::fin_dim((0..n).map(|_| draw_rat(rng, max_den, bound)).collect())
        }
        Carrier::TailSeq => {
            let len = rng.gen_range(0..=8);
            let prefix = (0..len).map(|_| draw_rat(rng, max_den, bound)).collect();
            Vector::tail_seq(prefix, draw_rat(rng, max_den, bound))
        }
    }
}

/// About 40% zeros, otherwise small rationals.
fn draw_sparse(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::fin_dim(
        (0..n)
            .map(|_| {
                if rng.gen_bool(0.4) {
                    Rat::zero()
                } else {
                    draw_rat(rng, 4, 2)
                }
            })
            .collect(),
    )
}

fn axes_of(vs: &[&Vector]) -> Vec<Axis> {
    let width = vs.iter().map(|v| v.prefix_len()).max().unwrap_or(0);
    let mut axes: Vec<Axis> = (1..=width).map(Axis::Coord).collect();
    if vs.first().is_some_and(|v| v.carrier() == Carrier::TailSeq) {
        axes.push(Axis::Tail);
    }
    axes
}

fn step<'a>(r: &'a TheoremReport, name: &str) -> Option<&'a ordtopo_core::theorems::Step> {
    r.steps.iter().find(|s| s.operation.name() == name)
}

fn example_e1() -> Check {
    let start = Instant::now();
    let r = verify_example_e1().map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    ensure!(
        r.conclusion == Conclusion::Confirmed,
        "conclusion {:?}",
        r.conclusion
    );
    let names: Vec<&str> = r.steps.iter().map(|s| s.operation.name()).collect();
    ensure!(
        names
            == [
                "monotone-limit",
                "eventually-in",
                "is-order-open",
                "tau-e-convergence"
            ],
        "steps {names:?}"
    );
    ensure!(
        r.steps.iter().all(|s| s.status == StepStatus::Passed),
        "a step did not pass"
    );
    ensure!(!r.contradicts_claim, "contradicts the claim");
    ensure!(
        r.revalidate().map_err(|e| e.to_string())?,
        "report does not re-execute to the same outcomes"
    );

    // independent of the report: the shift and the interval (-e1, e1)
    let shift = Family::shift();
    let zero = Vector::zero(Carrier::TailSeq);
    let m = monotonicity(&shift).map_err(|e| e.to_string())?;
    ensure!(
        m.direction == Direction::Decreasing,
        "shift is {:?}",
        m.direction
    );
    ensure!(
        order_limit(&shift).map_err(|e| e.to_string())? == zero,
        "limit is not zero"
    );
    let e1 = Vector::tail_ints(&[1], 0);
    let open = SetExpr::interval(
        Interval::open(e1.negate(), e1.clone(), IntervalSemantics::StrictPartial)
            .map_err(|e| e.to_string())?,
    );
    for k in 1..=100 {
        let v = shift.value(k).map_err(|e| e.to_string())?;
        ensure!(
            !member(&open, &v).map_err(|e| e.to_string())?,
            "term {k} = {v} lies in (-e1, e1)"
        );
    }
    let from = match eventually_in(&shift, &SetExpr::complement(open.clone()))
        .map_err(|e| e.to_string())?
    {
        EventualMembership::HoldsFrom { index } => index,
        other => return Err(format!("complement membership {other:?}")),
    };
    ensure!(from <= 1, "complement membership starts at {from}");
    let refuted = step(&r, "is-order-open").map(|s| &s.outcome);
    let Some(Outcome::Closure {
        verdict: Verdict::Refuted { witness },
        ..
    }) = refuted
    else {
        return Err("openness was not refuted".into());
    };
    ensure!(
        witness
            .replay(&SetExpr::complement(open), 200)
            .map_err(|e| e.to_string())?,
        "witness does not replay"
    );
    Ok(format!(
        "confirmed in {:.0} ms, 4 steps passed, terms 1..=100 outside, tail rule from index {from}",
        took.as_secs_f64() * 1e3
    ))
}

fn lattice_laws() -> Check {
    const TRIPLES: usize = 10_000;
    let carriers: Vec<Carrier> = (1..=6)
        .map(Carrier::FinDim)
        .chain([Carrier::TailSeq])
        .collect();
    let mut comparable = 0usize;
    for (ci, &c) in carriers.iter().enumerate() {
        let mut rng = rng(1000 + ci as u64);
        for i in 0..TRIPLES {
            let x = draw_vector(&mut rng, c, 64, 4);
            let mut y = draw_vector(&mut rng, c, 64, 4);
            let z = draw_vector(&mut rng, c, 64, 4);
            // every other triple gets y >= x so the implications are exercised
            if i % 2 == 1 {
                y = x.add(&y.abs()).unwrap();
            }
            let t = draw_rat(&mut rng, 64, 4).abs();
            let fail = |law: &str| format!("{law} fails in {c:?} for x={x} y={y} z={z} t={t}");
            let sup = |a: &Vector, b: &Vector| a.sup(b).unwrap();
            let inf = |a: &Vector, b: &Vector| a.inf(b).unwrap();

            for ax in axes_of(&[&x, &y]) {
                let (a, b) = (x.coord(ax).unwrap(), y.coord(ax).unwrap());
                ensure!(
                    sup(&x, &y).coord(ax).unwrap() == a.clone().max(b.clone()),
                    "{}",
                    fail("coordinate sup")
                );
                ensure!(
                    inf(&x, &y).coord(ax).unwrap() == a.min(b),
                    "{}",
                    fail("coordinate inf")
                );
            }
            ensure!(
                sup(&x, &y) == sup(&y, &x) && inf(&x, &y) == inf(&y, &x),
                "{}",
                fail("commutativity")
            );
            ensure!(
                sup(&sup(&x, &y), &z) == sup(&x, &sup(&y, &z)),
                "{}",
                fail("sup associativity")
            );
            ensure!(
                inf(&inf(&x, &y), &z) == inf(&x, &inf(&y, &z)),
                "{}",
                fail("inf associativity")
            );
            ensure!(
                sup(&x, &inf(&x, &y)) == x && inf(&x, &sup(&x, &y)) == x,
                "{}",
                fail("absorption")
            );
            ensure!(
                inf(&x, &sup(&y, &z)) == sup(&inf(&x, &y), &inf(&x, &z)),
                "{}",
                fail("distributivity")
            );
            ensure!(
                sup(&x, &inf(&y, &z)) == inf(&sup(&x, &y), &sup(&x, &z)),
                "{}",
                fail("dual distributivity")
            );
            ensure!(
                x.pos().sub(&x.neg()).unwrap() == x,
                "{}",
                fail("x = x+ - x-")
            );
            ensure!(
                x.pos().add(&x.neg()).unwrap() == x.abs(),
                "{}",
                fail("|x| = x+ + x-")
            );
            ensure!(
                inf(&x.pos(), &x.neg()).is_zero(),
                "{}",
                fail("x+ inf x- = 0")
            );
            if x.leq(&y).unwrap() {
                comparable += 1;
                ensure!(
                    x.add(&z).unwrap().leq(&y.add(&z).unwrap()).unwrap(),
                    "{}",
                    fail("x <= y => x+z <= y+z")
                );
                ensure!(
                    x.scale(&t).leq(&y.scale(&t)).unwrap(),
                    "{}",
                    fail("x <= y, t >= 0 => tx <= ty")
                );
            }
        }
    }
    Ok(format!(
        "{} triples over {} carriers, {comparable} ordered pairs exercised the compatibility implications",
        TRIPLES * carriers.len(),
        carriers.len()
    ))
}

fn theorem_t1() -> Check {
    const FAMILIES: usize = 100;
    let cfg = SearchConfig::default();
    let mut rng = rng(2024);
    let mut consistent = 0usize;
    for i in 0..FAMILIES {
        let c = if rng.gen_bool(0.5) {
            Carrier::TailSeq
        } else {
            Carrier::FinDim(rng.gen_range(1..=4))
        };
        let (f, x) = if i % 2 == 0 {
            let c0 = draw_vector(&mut rng, c, 8, 2);
            let p = draw_vector(&mut rng, c, 8, 2);
            let q = [Rat::zero(), Rat::new(1, 2), Rat::one(), Rat::from(3)][rng.gen_range(0..4)]
                .clone();
            (Family::coord_decay(c0.clone(), p, q).unwrap(), c0)
        } else {
            let v = draw_vector(&mut rng, c, 8, 2).abs();
            let lambda = [
                Rat::new(1, 2),
                Rat::new(1, 3),
                Rat::new(2, 3),
                Rat::new(3, 4),
            ][rng.gen_range(0..4)]
            .clone();
            (Family::scale(v, lambda).unwrap(), Vector::zero(c))
        };
        let ctx = |msg: String| format!("family {i} {f} toward {x}: {msg}");
        let chain =
            NeighborhoodCatalog::symmetric_chain(&x, 10, IntervalSemantics::StrictPartial).unwrap();
        let thresholds = match tau_e_convergence_report(&f, &x, &chain, cfg.horizon).unwrap() {
            TauEReport::Consistent { thresholds } => thresholds,
            other => return Err(ctx(format!("convergent family has tau_e report {other:?}"))),
        };
        consistent += 1;

        let r = verify_theorem_t1(&f, &x, &chain, &cfg).unwrap();
        ensure!(
            r.conclusion == Conclusion::Confirmed,
            "{}",
            ctx(format!("conclusion {:?}", r.conclusion))
        );
        let Some(Operation::RevalidateCertificate { certificate }) =
            step(&r, "revalidate-certificate").map(|s| &s.operation)
        else {
            return Err(ctx("no certificate step".into()));
        };
        // the dominating family is hi_m - lo_m of the chain
        for (m, link) in chain.chain().iter().enumerate() {
            let width = link.hi().sub(link.lo()).unwrap();
            ensure!(
                certificate.dominating.value(m).unwrap() == width,
                "{}",
                ctx(format!("y_{m} is not the width {width}"))
            );
            // direct evaluation past each threshold
            let lo = x.sub(&width).unwrap();
            let hi = x.add(&width).unwrap();
            for k in thresholds[m]..thresholds[m] + 50 {
                let v = f.value(k).unwrap();
                ensure!(
                    lo.leq(&v).unwrap() && v.leq(&hi).unwrap(),
                    "{}",
                    ctx(format!("term {k} escapes y_{m}"))
                );
            }
        }
        ensure!(
            certificate.revalidate(200).unwrap() == CertificateCheck::Valid,
            "{}",
            ctx("chain certificate does not re-validate".into())
        );
        let outcome = order_converges(&f, &x).unwrap();
        let Some(own) = outcome.certificate() else {
            return Err(ctx(format!("order_converges says {outcome:?}")));
        };
        ensure!(
            own.limit == x,
            "{}",
            ctx(format!("order_converges certifies {}", own.limit))
        );
        ensure!(
            own.revalidate(200).unwrap() == CertificateCheck::Valid,
            "{}",
            ctx("own certificate invalid".into())
        );
    }
    Ok(format!(
        "{consistent}/{FAMILIES} consistent reports, all certificates re-validated, 100% agreement"
    ))
}

fn band_table() -> Check {
    let cfg = SearchConfig::default();
    let rows: Vec<(&str, SetExpr, Carrier)> = vec![
        (
            "band Q^3, one generator",
            SetExpr::Band(vec![Vector::ints(&[1, 0, -2])]),
            Carrier::FinDim(3),
        ),
        (
            "band Q^3, two generators",
            SetExpr::Band(vec![Vector::ints(&[1, 0, 0]), Vector::ints(&[0, -1, 0])]),
            Carrier::FinDim(3),
        ),
        (
            "band Q^2, full support",
            SetExpr::Band(vec![Vector::ints(&[2, 1])]),
            Carrier::FinDim(2),
        ),
        (
            "band tail-seq, one generator",
            SetExpr::Band(vec![Vector::tail_ints(&[1, 0, 3], 0)]),
            Carrier::TailSeq,
        ),
        (
            "band tail-seq, two generators",
            SetExpr::Band(vec![
                Vector::tail_ints(&[0, 2], 0),
                Vector::tail_ints(&[0, 0, 0, -1], 0),
            ]),
            Carrier::TailSeq,
        ),
    ];
    let mut lines = Vec::new();
    for (name, set, c) in rows {
        let r = verify_band_proposition(&set, c, &cfg).unwrap();
        ensure!(
            r.conclusion == Conclusion::Confirmed,
            "{name}: conclusion {:?}",
            r.conclusion
        );
        let qoc = step(&r, "quasi-order-closed").map(|s| &s.outcome);
        ensure!(
            matches!(
                qoc,
                Some(Outcome::Closure {
                    verdict: Verdict::Certified { .. },
                    ..
                })
            ),
            "{name}: not certified quasi-order closed"
        );
        let oc = step(&r, "order-closed");
        ensure!(
            oc.is_some_and(|s| s.status == StepStatus::Passed),
            "{name}: order-closed probe did not pass"
        );
        let probes = r
            .steps
            .iter()
            .filter(|s| s.operation.name() == "sup-meet-probe")
            .count();
        ensure!(probes > 0, "{name}: no sup-meet probes");
        lines.push(format!("{name} confirmed"));
    }

    let r = verify_band_proposition(&SetExpr::TailZero, Carrier::TailSeq, &cfg).unwrap();
    ensure!(
        r.conclusion == Conclusion::CounterexampleFound,
        "tail-zero: conclusion {:?}",
        r.conclusion
    );
    let Some(Outcome::Closure {
        verdict: Verdict::Refuted { witness },
        ..
    }) = step(&r, "quasi-order-closed").map(|s| &s.outcome)
    else {
        return Err("tail-zero: quasi-order closedness not refuted".into());
    };
    ensure!(
        witness.direction == Direction::Increasing,
        "tail-zero witness is {:?}",
        witness.direction
    );
    ensure!(
        witness.replay(&SetExpr::TailZero, 200).unwrap(),
        "tail-zero witness does not replay"
    );
    // and by hand: terms stay finitely supported, the limit does not
    for k in 0..=50 {
        ensure!(
            member(&SetExpr::TailZero, &witness.family.value(k).unwrap()).unwrap(),
            "term {k} leaves tail-zero"
        );
    }
    ensure!(
        !member(&SetExpr::TailZero, &witness.limit).unwrap(),
        "limit {} is in tail-zero",
        witness.limit
    );
    lines.push(format!(
        "tail-zero refuted by increasing {}",
        witness.family
    ));
    Ok(lines.join("; "))
}

/// Whether the closed box `[lo, hi]` lies in a primitive open set, decided
/// coordinate by coordinate.
fn primitive_box_inside(set: &SetExpr, lo: &Vector, hi: &Vector) -> Option<bool> {
    let SetExpr::Complement(inner) = set else {
        return None;
    };
    match &**inner {
        SetExpr::HalfSpace {
            axis,
            rel: Relation::Le,
            bound,
        } => Some(lo.coord(*axis).unwrap() > *bound),
        SetExpr::HalfSpace {
            axis,
            rel: Relation::Ge,
            bound,
        } => Some(hi.coord(*axis).unwrap() < *bound),
        SetExpr::Interval(i) if i.kind() == ordtopo_core::IntervalKind::Closed => {
            let (a, b) = (i.lo(), i.hi());
            Some(axes_of(&[lo, hi, a, b]).into_iter().any(|ax| {
                hi.coord(ax).unwrap() < a.coord(ax).unwrap()
                    || lo.coord(ax).unwrap() > b.coord(ax).unwrap()
            }))
        }
        _ => None,
    }
}

fn tau_subset() -> Check {
    const SAMPLES: usize = 50;
    let cfg = SearchConfig {
        fit_budget: 16,
        fit_samples: 1000,
        ..SearchConfig::default()
    };
    let not = SetExpr::complement;
    let half = |axis, rel, b: i64| SetExpr::half_space(axis, rel, Rat::from(b));
    let closed = |lo: Vector, hi: Vector| SetExpr::interval(Interval::closed(lo, hi).unwrap());
    let plane = vec![
        not(half(Axis::Coord(1), Relation::Le, 0)),
        not(half(Axis::Coord(2), Relation::Ge, 1)),
        not(closed(Vector::ints(&[0, 0]), Vector::ints(&[1, 1]))),
        SetExpr::Intersection(vec![
            not(half(Axis::Coord(1), Relation::Le, 0)),
            not(half(Axis::Coord(2), Relation::Le, 0)),
        ]),
        SetExpr::Union(vec![
            not(half(Axis::Coord(1), Relation::Le, 0)),
            not(closed(Vector::ints(&[-1, -1]), Vector::ints(&[1, 1]))),
        ]),
        SetExpr::translate(
            not(closed(Vector::ints(&[0, 0]), Vector::ints(&[1, 1]))),
            Vector::ints(&[1, -1]),
        ),
        SetExpr::dilate(
            not(SetExpr::Band(vec![Vector::ints(&[1, 0])])),
            Rat::new(1, 2),
        )
        .unwrap(),
    ];
    let seqs = vec![
        not(half(Axis::Tail, Relation::Le, 0)),
        not(closed(
            Vector::tail_ints(&[-1], 0),
            Vector::tail_ints(&[1], 1),
        )),
        SetExpr::Intersection(vec![
            not(half(Axis::Coord(1), Relation::Le, 0)),
            not(half(Axis::Tail, Relation::Ge, 2)),
        ]),
    ];
    let (mut exact, mut sampled, mut points_total) = (0usize, 0usize, 0usize);
    let sets = plane.len() + seqs.len();
    for (c, catalog) in [(Carrier::FinDim(2), plane), (Carrier::TailSeq, seqs)] {
        let r = tau_subset_probe(
            &catalog,
            c,
            SAMPLES,
            IntervalSemantics::StrictPartial,
            11,
            &cfg,
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            r.conclusion == Conclusion::Confirmed,
            "{c:?} catalog: conclusion {:?} {:?}",
            r.conclusion,
            r.notes
        );
        for s in &r.steps {
            let (Operation::IntervalFits { set, points, .. }, Outcome::Fits { fits }) =
                (&s.operation, &s.outcome)
            else {
                continue;
            };
            ensure!(points.len() == SAMPLES, "{set}: {} samples", points.len());
            for (p, fit) in points.iter().zip(fits) {
                points_total += 1;
                let Some(fit) = fit else {
                    return Err(format!("{set}: no interval around {p}"));
                };
                ensure!(fit.shrink <= 16, "{set}: shrink {} around {p}", fit.shrink);
                let i = &fit.interval;
                ensure!(i.contains(p).unwrap(), "{set}: {i} misses its center {p}");
                match primitive_box_inside(set, i.lo(), i.hi()) {
                    Some(inside) => {
                        ensure!(inside, "{set}: {i} is not inside");
                        let lib = box_containment(i.lo(), i.hi(), set).unwrap();
                        ensure!(
                            lib == Containment::Exact(true),
                            "{set}: library containment {lib:?} around {p}"
                        );
                        exact += 1;
                    }
                    None => {
                        let grid = box_samples(i.lo(), i.hi(), 1000, set.max_prefix());
                        ensure!(
                            grid.len() >= 1000,
                            "{set}: only {} grid samples",
                            grid.len()
                        );
                        for z in &grid {
                            ensure!(member(set, z).unwrap(), "{set}: {z} in {i} is outside");
                        }
                        sampled += 1;
                    }
                }
            }
        }
    }
    ensure!(
        points_total == sets * SAMPLES,
        "{points_total} points fitted for {sets} sets"
    );
    Ok(format!("{sets} open sets, {points_total} points fitted: {exact} exact, {sampled} by >= 1000 grid samples"))
}

/// `|a| inf |b| = 0`, coordinatewise.
fn disjoint_oracle(a: &Vector, b: &Vector) -> bool {
    a.coords()
        .iter()
        .zip(b.coords())
        .all(|(s, t)| s.is_zero() || t.is_zero())
}

fn grid(n: usize, vals: &[Rat]) -> Vec<Vec<Rat>> {
    (0..vals.len().pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let v = vals[code % vals.len()].clone();
                    code /= vals.len();
                    v
                })
                .collect()
        })
        .collect()
}

/// Band generated by `gens` as the double disjoint complement; the first
/// complement is spanned by its members on `{-1, 0, 1}^n`.
fn band_oracle(gens: &[Vector], y: &Vector) -> bool {
    let n = y.coords().len();
    let pts: Vec<Vector> = grid(n, &[Rat::from(-1), Rat::zero(), Rat::one()])
        .into_iter()
        .map(Vector::fin_dim)
        .collect();
    pts.iter()
        .filter(|z| gens.iter().all(|g| disjoint_oracle(g, z)))
        .all(|z| disjoint_oracle(y, z))
}

/// No two disjoint nonzero `u, v` in `[0, x]`, with `u_i, v_i` ranging over
/// `x_i * j / 3`.
fn atom_oracle(x: &Vector) -> bool {
    let n = x.coords().len();
    let fracs: Vec<Rat> = (0..=3).map(|j| Rat::new(j, 3)).collect();
    let below: Vec<Vector> = grid(n, &fracs)
        .into_iter()
        .map(|f| Vector::fin_dim(f.iter().zip(x.coords()).map(|(a, b)| a * b).collect()))
        .filter(|u| !u.is_zero())
        .collect();
    !below
        .iter()
        .any(|u| below.iter().any(|v| disjoint_oracle(u, v)))
}

/// Least grid `lambda` with `|y| <= lambda * sum |g|`, by bisection.
fn ideal_oracle(gens: &[Vector], y: &Vector) -> Option<Rat> {
    let s = gens
        .iter()
        .skip(1)
        .fold(gens[0].abs(), |acc, g| acc.add(&g.abs()).unwrap());
    let fits = |l: &Rat| y.abs().leq(&s.scale(l)).unwrap();
    let mut cands = vec![Rat::zero()];
    for (yi, si) in y.coords().iter().zip(s.coords()) {
        if !si.is_zero() {
            cands.push(yi.abs() / si.clone());
        }
    }
    cands.sort();
    cands.dedup();
    if !fits(cands.last().unwrap()) {
        return None;
    }
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if fits(&cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(cands[lo].clone())
}

fn oracles() -> Check {
    const N: usize = 1000;
    let mut rng = rng(77);
    let (mut in_band, mut atoms, mut in_ideal) = (0, 0, 0);
    for _ in 0..N {
        let gens: Vec<Vector> = (0..rng.gen_range(1..=3))
            .map(|_| draw_sparse(&mut rng, 4))
            .collect();
        let y = draw_sparse(&mut rng, 4);
        let got = band_member(&gens, &y).unwrap();
        ensure!(
            got == band_oracle(&gens, &y),
            "band_member({gens:?}, {y}) = {got}"
        );
        in_band += usize::from(got);

        let lam = ideal_member(&gens, &y).unwrap();
        let want = ideal_oracle(&gens, &y);
        ensure!(
            lam == want,
            "ideal_member({gens:?}, {y}) = {lam:?}, bisection gives {want:?}"
        );
        in_ideal += usize::from(lam.is_some());

        let x = draw_sparse(&mut rng, 3).abs();
        if !x.is_zero() {
            let got = is_atom(&x).unwrap();
            ensure!(got == atom_oracle(&x), "is_atom({x}) = {got}");
            atoms += usize::from(got);
        }
    }
    Ok(format!("{N} instances each; {in_band} band members, {in_ideal} ideal members, {atoms} atoms, all matching"))
}

fn documents() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("documents");
    let mut docs: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    docs.sort();
    docs
}

fn command_for(doc: &Path) -> &'static str {
    let text = std::fs::read_to_string(doc).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    ["check-set", "convergence", "fit", "theorem"]
        .into_iter()
        .find(|k| v.get(*k).is_some())
        .map(|k| if k == "theorem" { "theorems" } else { k })
        .unwrap()
}

fn run_doc(doc: &Path, threads: Option<&str>) -> (Vec<u8>, Vec<u8>) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ordtopo"));
    cmd.arg(command_for(doc)).arg(doc).arg("--output").arg(&out);
    if let Some(t) = threads {
        cmd.args(["--threads", t]);
    }
    let o = cmd.output().unwrap();
    assert!(
        matches!(o.status.code(), Some(0 | 3)),
        "{}: {}",
        doc.display(),
        String::from_utf8_lossy(&o.stderr)
    );
    (std::fs::read(&out).unwrap(), o.stdout)
}

fn determinism() -> Check {
    let docs = documents();
    ensure!(!docs.is_empty(), "no documents");
    for doc in &docs {
        let first = run_doc(doc, None);
        for threads in [None, Some("1"), Some("4")] {
            let again = run_doc(doc, threads);
            ensure!(
                again.0 == first.0,
                "{}: JSON differs at threads {threads:?}",
                doc.display()
            );
            ensure!(
                again.1 == first.1,
                "{}: stdout differs at threads {threads:?}",
                doc.display()
            );
        }
    }
    Ok(format!(
        "{} documents, 4 runs each (default twice, 1 and 4 threads), byte-identical",
        docs.len()
    ))
}
