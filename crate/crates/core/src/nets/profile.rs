//! Tail rules: every family compiles to per-coordinate scalar sequences
//! that are monotone from a known index on and whose limits are exact.

use crate::error::{Error, Result};
use crate::lattice::Vector;
use crate::rat::Rat;
use crate::sets::Relation;

/// Searches past this index give up and report the question as open.
const SEARCH_LIMIT: usize = 1 << 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dir {
    Inc,
    Dec,
    Const,
}

/// What a sequence does from `from` on: it moves monotonically in `dir`
/// towards `limit`, and equals `limit` from `constant_from` on if that ever
/// happens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct TailInfo {
    pub from: usize,
    pub dir: Dir,
    pub limit: Rat,
    pub constant_from: Option<usize>,
}

impl TailInfo {
    fn normalized(mut self) -> TailInfo {
        if self.constant_from.is_some_and(|c| c <= self.from) {
            self.dir = Dir::Const;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ScalarSeq {
    Const(Rat),
    /// `before` for `k < at`, `after` from `at` on.
    Step {
        at: usize,
        before: Rat,
        after: Rat,
    },
    /// `coeff * ratio^k` with `0 < ratio < 1`.
    Geometric {
        coeff: Rat,
        ratio: Rat,
    },
    /// `center + numer / (k + 1 + offset)` with `offset >= 0`.
    Harmonic {
        center: Rat,
        numer: Rat,
        offset: Rat,
    },
    /// `values[min(k, len - 1)]`.
    Listed(Vec<Rat>),
    /// `min(max_{j <= k} base(j), cap)`.
    RunMaxMeet {
        base: Box<ScalarSeq>,
        cap: Rat,
        info: Box<TailInfo>,
    },
    /// `|base(k) - center|`.
    AbsDev {
        base: Box<ScalarSeq>,
        center: Rat,
        info: Box<TailInfo>,
    },
}

impl ScalarSeq {
    pub fn step(at: usize, before: Rat, after: Rat) -> ScalarSeq {
        if at == 0 || before == after {
            ScalarSeq::Const(after)
        } else {
            ScalarSeq::Step { at, before, after }
        }
    }

    pub fn geometric(coeff: Rat, ratio: Rat) -> ScalarSeq {
        if coeff.is_zero() {
            ScalarSeq::Const(coeff)
        } else {
            ScalarSeq::Geometric { coeff, ratio }
        }
    }

    pub fn harmonic(center: Rat, numer: Rat, offset: Rat) -> ScalarSeq {
        if numer.is_zero() {
            ScalarSeq::Const(center)
        } else {
            ScalarSeq::Harmonic {
                center,
                numer,
                offset,
            }
        }
    }

    pub fn listed(mut values: Vec<Rat>) -> ScalarSeq {
        while values.len() > 1 && values[values.len() - 1] == values[values.len() - 2] {
            values.pop();
        }
        match values.len() {
            1 => ScalarSeq::Const(values.pop().expect("one value")),
            _ => ScalarSeq::Listed(values),
        }
    }

    pub fn run_max_meet(base: ScalarSeq, cap: Rat) -> Result<ScalarSeq> {
        Ok(match base {
            ScalarSeq::Const(b) => ScalarSeq::Const(b.min(cap)),
            ScalarSeq::Step { at, before, after } => {
                let top = before.clone().max(after);
                ScalarSeq::step(at, before.min(cap.clone()), top.min(cap))
            }
            ScalarSeq::Listed(v) => {
                let mut run = v[0].clone();
                let out = v
                    .into_iter()
                    .map(|x| {
                        run = run.clone().max(x);
                        run.clone().min(cap.clone())
                    })
                    .collect();
                ScalarSeq::listed(out)
            }
            base => {
                let info = run_max_meet_info(&base, &cap)?;
                if info.dir == Dir::Const {
                    ScalarSeq::Const(info.limit)
                } else {
                    ScalarSeq::RunMaxMeet {
                        base: Box::new(base),
                        cap,
                        info: Box::new(info),
                    }
                }
            }
        })
    }

    pub fn abs_dev(base: ScalarSeq, center: Rat) -> Result<ScalarSeq> {
        Ok(match base {
            ScalarSeq::Const(b) => ScalarSeq::Const((&b - &center).abs()),
            ScalarSeq::Step { at, before, after } => {
                ScalarSeq::step(at, (&before - &center).abs(), (&after - &center).abs())
            }
            ScalarSeq::Listed(v) => {
                ScalarSeq::listed(v.iter().map(|x| (x - &center).abs()).collect())
            }
            ScalarSeq::Geometric { coeff, ratio } if center.is_zero() => {
                ScalarSeq::geometric(coeff.abs(), ratio)
            }
            ScalarSeq::Harmonic {
                center: c,
                numer,
                offset,
            } if c == center => ScalarSeq::harmonic(Rat::zero(), numer.abs(), offset),
            base => {
                let info = abs_dev_info(&base, &center)?;
                ScalarSeq::AbsDev {
                    base: Box::new(base),
                    center,
                    info: Box::new(info),
                }
            }
        })
    }

    pub fn eval(&self, k: usize) -> Rat {
        match self {
            ScalarSeq::Const(c) => c.clone(),
            ScalarSeq::Step { at, before, after } => {
                if k < *at {
                    before.clone()
                } else {
                    after.clone()
                }
            }
            ScalarSeq::Geometric { coeff, ratio } => {
                coeff * &ratio.pow(u32::try_from(k).expect("index fits in u32"))
            }
            ScalarSeq::Harmonic {
                center,
                numer,
                offset,
            } => center + &(numer / &(Rat::from(k + 1) + offset)),
            ScalarSeq::Listed(v) => v[k.min(v.len() - 1)].clone(),
            ScalarSeq::RunMaxMeet { base, cap, .. } => {
                let bi = base.tail_info();
                let mut m = base.eval(0);
                for j in 1..=k.min(bi.from) {
                    m = m.max(base.eval(j));
                }
                if k > bi.from && bi.dir == Dir::Inc {
                    m = m.max(base.eval(k));
                }
                m.min(cap.clone())
            }
            ScalarSeq::AbsDev { base, center, .. } => (&base.eval(k) - center).abs(),
        }
    }

    pub fn tail_info(&self) -> TailInfo {
        match self {
            ScalarSeq::Const(c) => TailInfo {
                from: 0,
                dir: Dir::Const,
                limit: c.clone(),
                constant_from: Some(0),
            },
            ScalarSeq::Step { at, after, .. } => TailInfo {
                from: *at,
                dir: Dir::Const,
                limit: after.clone(),
                constant_from: Some(*at),
            },
            ScalarSeq::Geometric { coeff, .. } => TailInfo {
                from: 0,
                dir: if coeff.is_positive() {
                    Dir::Dec
                } else {
                    Dir::Inc
                },
                limit: Rat::zero(),
                constant_from: None,
            },
            ScalarSeq::Harmonic { center, numer, .. } => TailInfo {
                from: 0,
                dir: if numer.is_positive() {
                    Dir::Dec
                } else {
                    Dir::Inc
                },
                limit: center.clone(),
                constant_from: None,
            },
            ScalarSeq::Listed(v) => TailInfo {
                from: v.len() - 1,
                dir: Dir::Const,
                limit: v[v.len() - 1].clone(),
                constant_from: Some(v.len() - 1),
            },
            ScalarSeq::RunMaxMeet { info, .. } | ScalarSeq::AbsDev { info, .. } => (**info).clone(),
        }
    }

    /// Least `k >= from` such that `self(k') rel d` has its eventual truth
    /// value for every `k' >= k`, together with that value.
    pub fn stabilize(&self, rel: Relation, d: &Rat) -> Result<(usize, bool)> {
        let info = self.tail_info();
        let eventual = match info.limit.cmp(d) {
            std::cmp::Ordering::Less => rel == Relation::Le,
            std::cmp::Ordering::Greater => rel == Relation::Ge,
            std::cmp::Ordering::Equal => {
                info.constant_from.is_some()
                    || info.dir == Dir::Const
                    || (rel == Relation::Le && info.dir == Dir::Inc)
                    || (rel == Relation::Ge && info.dir == Dir::Dec)
            }
        };
        let k = first_from(info.from, |k| rel.holds(&self.eval(k), d) == eventual)?;
        Ok((k, eventual))
    }

    /// Least `k` with `self(k+1) > self(k)` (`up`) or `self(k+1) < self(k)`.
    pub fn first_move(&self, up: bool) -> Result<Option<usize>> {
        let info = self.tail_info();
        let moves = |k: usize| {
            let (a, b) = (self.eval(k), self.eval(k + 1));
            if up {
                b > a
            } else {
                b < a
            }
        };
        if let Some(k) = (0..info.from).find(|&k| moves(k)) {
            return Ok(Some(k));
        }
        let tail_moves_this_way = match info.dir {
            Dir::Const => false,
            Dir::Inc => up,
            Dir::Dec => !up,
        };
        if !tail_moves_this_way {
            return Ok(None);
        }
        let start = self.eval(info.from);
        let m = first_from(info.from + 1, |k| self.eval(k) != start)?;
        Ok(Some(m - 1))
    }
}

/// Least `k >= from` with `pred(k)`, for predicates that stay true once
/// they become true on `[from, inf)` and are eventually true.
fn first_from(from: usize, pred: impl Fn(usize) -> bool) -> Result<usize> {
    if pred(from) {
        return Ok(from);
    }
    let mut lo = from;
    let mut step = 1usize;
    let mut hi = from + 1;
    while !pred(hi) {
        lo = hi;
        step *= 2;
        if step > SEARCH_LIMIT {
            return Err(Error::Unsupported(format!(
                "no stabilization index below {}",
                from + step
            )));
        }
        hi = from + step;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn run_max_meet_info(base: &ScalarSeq, cap: &Rat) -> Result<TailInfo> {
    let bi = base.tail_info();
    let pre_max = (0..=bi.from)
        .map(|j| base.eval(j))
        .max()
        .expect("nonempty range");
    let (sup, attained) = if bi.dir == Dir::Inc {
        let attained = pre_max >= bi.limit || bi.constant_from.is_some();
        (pre_max.max(bi.limit.clone()), attained)
    } else {
        (pre_max, true)
    };
    let limit = sup.clone().min(cap.clone());
    let constant_from = if attained || limit < sup {
        match (0..=bi.from).find(|&j| base.eval(j) >= limit) {
            Some(j) => Some(j),
            None => Some(base.stabilize(Relation::Ge, &limit)?.0),
        }
    } else {
        None
    };
    Ok(TailInfo {
        from: 0,
        dir: Dir::Inc,
        limit,
        constant_from,
    }
    .normalized())
}

fn abs_dev_info(base: &ScalarSeq, center: &Rat) -> Result<TailInfo> {
    let bi = base.tail_info();
    let info = if bi.limit == *center {
        TailInfo {
            from: bi.from,
            dir: if bi.dir == Dir::Const {
                Dir::Const
            } else {
                Dir::Dec
            },
            limit: Rat::zero(),
            constant_from: bi.constant_from,
        }
    } else {
        let above = bi.limit > *center;
        let rel = if above { Relation::Le } else { Relation::Ge };
        let (from, _) = base.stabilize(rel, center)?;
        let dir = match (bi.dir, above) {
            (Dir::Const, _) => Dir::Const,
            (d, true) => d,
            (Dir::Inc, false) => Dir::Dec,
            (Dir::Dec, false) => Dir::Inc,
        };
        TailInfo {
            from: from.max(bi.from),
            dir,
            limit: (&bi.limit - center).abs(),
            constant_from: bi.constant_from,
        }
    };
    Ok(info.normalized())
}

/// Coordinates past the explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Rest {
    /// `Q^n`: nothing past the prefix.
    Absent,
    /// Every remaining coordinate, tail included, follows one sequence.
    Uniform(ScalarSeq),
    /// Coordinate `i` (0-based) is `behind` once `k > i` and `ahead` before.
    Front { behind: Rat, ahead: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Profile {
    pub coords: Vec<ScalarSeq>,
    pub rest: Rest,
}

impl Profile {
    /// Makes the first `m` coordinates explicit (no-op on `Q^n`).
    pub fn expand_to(&self, m: usize) -> Profile {
        let mut coords = self.coords.clone();
        for i in coords.len()..m {
            match &self.rest {
                Rest::Absent => break,
                Rest::Uniform(s) => coords.push(s.clone()),
                Rest::Front { behind, ahead } => {
                    coords.push(ScalarSeq::step(i + 1, ahead.clone(), behind.clone()))
                }
            }
        }
        Profile {
            coords,
            rest: self.rest.clone(),
        }
    }

    pub fn value(&self, k: usize) -> Vector {
        let mut prefix: Vec<Rat> = self.coords.iter().map(|s| s.eval(k)).collect();
        match &self.rest {
            Rest::Absent => Vector::fin_dim(prefix),
            Rest::Uniform(s) => Vector::tail_seq(prefix, s.eval(k)),
            Rest::Front { behind, ahead } => {
                while prefix.len() < k {
                    prefix.push(behind.clone());
                }
                Vector::tail_seq(prefix, ahead.clone())
            }
        }
    }

    /// Coordinatewise limit.
    pub fn limit(&self) -> Vector {
        let prefix: Vec<Rat> = self.coords.iter().map(|s| s.tail_info().limit).collect();
        match &self.rest {
            Rest::Absent => Vector::fin_dim(prefix),
            Rest::Uniform(s) => Vector::tail_seq(prefix, s.tail_info().limit),
            Rest::Front { behind, .. } => Vector::tail_seq(prefix, behind.clone()),
        }
    }

    /// Applies a scalar transform to every coordinate sequence. `front` maps
    /// the pair `(behind, ahead)` and must agree with `seq` on step shapes.
    pub fn map(
        &self,
        width: usize,
        pad: &Vector,
        seq: impl Fn(ScalarSeq, Rat) -> Result<ScalarSeq>,
        front: impl Fn(&Rat, &Rat, &Rat) -> (Rat, Rat),
    ) -> Result<Profile> {
        let e = self.expand_to(width.max(pad.prefix_len()));
        let at = |i: usize| -> Rat {
            pad.coords()
                .get(i)
                .cloned()
                .or_else(|| pad.tail().cloned())
                .expect("in range")
        };
        let coords = e
            .coords
            .into_iter()
            .enumerate()
            .map(|(i, s)| seq(s, at(i)))
            .collect::<Result<Vec<_>>>()?;
        let rest = match e.rest {
            Rest::Absent => Rest::Absent,
            Rest::Uniform(s) => Rest::Uniform(seq(s, pad.tail().expect("tail carrier").clone())?),
            Rest::Front { behind, ahead } => {
                let (b, a) = front(&behind, &ahead, pad.tail().expect("tail carrier"));
                if a == b {
                    Rest::Uniform(ScalarSeq::Const(a))
                } else {
                    Rest::Front {
                        behind: b,
                        ahead: a,
                    }
                }
            }
        };
        Ok(Profile { coords, rest })
    }

    /// Every distinct sequence shape a coordinate can follow.
    pub fn sequences(&self) -> Vec<ScalarSeq> {
        let mut out = self.coords.clone();
        match &self.rest {
            Rest::Absent => {}
            Rest::Uniform(s) => out.push(s.clone()),
            Rest::Front { behind, ahead } => {
                let i = self.coords.len();
                out.push(ScalarSeq::step(i + 1, ahead.clone(), behind.clone()));
            }
        }
        out
    }
}
