use std::fmt;

use serde::{Deserialize, Serialize};

use super::profile::{Profile, Rest, ScalarSeq};
use crate::error::{Error, Result};
use crate::lattice::{Carrier, Vector};
use crate::rat::Rat;

/// A sequence `k -> value(k)` in one of the carriers, given by a template
/// whose tail behaviour is known in closed form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "template", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// The listed vectors, then the last one forever.
    Explicit { values: Vec<Vector> },
    /// Tail sequences: coordinates before `k` are `head`, the rest `tail`,
    /// plus an optional constant offset. Defaults give `x_k` with `k`
    /// leading zeros followed by ones.
    Shift {
        #[serde(default = "Rat::zero")]
        head: Rat,
        #[serde(default = "Rat::one")]
        tail: Rat,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vector>,
    },
    /// `lambda^k * v` with `v >= 0` and `0 < lambda < 1`.
    Scale { v: Vector, lambda: Rat },
    /// `c_i + p_i / (k + 1 + q)` coordinatewise, `q >= 0`.
    CoordDecay { c: Vector, p: Vector, q: Rat },
    /// `(sup_{j <= k} base(j)) inf cap`.
    RunningSupMeet { base: Box<Family>, cap: Vector },
    /// `|base(k) - center|`.
    Deviation { base: Box<Family>, center: Vector },
}

impl Family {
    /// `x_k`: `k` zeros, then ones.
    pub fn shift() -> Family {
        Family::Shift {
            head: Rat::zero(),
            tail: Rat::one(),
            offset: None,
        }
    }

    /// `k` ones, then zeros.
    pub fn shift_up() -> Family {
        Family::Shift {
            head: Rat::one(),
            tail: Rat::zero(),
            offset: None,
        }
    }

    pub fn explicit(values: Vec<Vector>) -> Result<Family> {
        let f = Family::Explicit { values };
        f.validate()?;
        Ok(f)
    }

    pub fn scale(v: Vector, lambda: Rat) -> Result<Family> {
        let f = Family::Scale { v, lambda };
        f.validate()?;
        Ok(f)
    }

    pub fn coord_decay(c: Vector, p: Vector, q: Rat) -> Result<Family> {
        let f = Family::CoordDecay { c, p, q };
        f.validate()?;
        Ok(f)
    }

    pub fn running_sup_meet(base: Family, cap: Vector) -> Result<Family> {
        let f = Family::RunningSupMeet {
            base: Box::new(base),
            cap,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn deviation(base: Family, center: Vector) -> Result<Family> {
        let f = Family::Deviation {
            base: Box::new(base),
            center,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn template_name(&self) -> &'static str {
        match self {
            Family::Explicit { .. } => "explicit",
            Family::Shift { .. } => "shift",
            Family::Scale { .. } => "scale",
            Family::CoordDecay { .. } => "coord-decay",
            Family::RunningSupMeet { .. } => "running-sup-meet",
            Family::Deviation { .. } => "deviation",
        }
    }

    pub fn carrier(&self) -> Result<Carrier> {
        match self {
            Family::Explicit { values } => {
                let first = values
                    .first()
                    .ok_or_else(|| Error::InvalidFamily("explicit family has no values".into()))?;
                for v in values {
                    v.check_carrier(first.carrier())?;
                }
                Ok(first.carrier())
            }
            Family::Shift { offset, .. } => {
                if let Some(o) = offset {
                    o.check_carrier(Carrier::TailSeq)?;
                }
                Ok(Carrier::TailSeq)
            }
            Family::Scale { v, .. } => Ok(v.carrier()),
            Family::CoordDecay { c, p, .. } => {
                c.check_same_carrier(p)?;
                Ok(c.carrier())
            }
            Family::RunningSupMeet { base, cap } => {
                let c = base.carrier()?;
                cap.check_carrier(c)?;
                Ok(c)
            }
            Family::Deviation { base, center } => {
                let c = base.carrier()?;
                center.check_carrier(c)?;
                Ok(c)
            }
        }
    }

    /// Checks template parameters; every operation calls this first.
    pub fn validate(&self) -> Result<()> {
        self.carrier()?;
        match self {
            Family::Scale { v, lambda } => {
                if v.values().any(Rat::is_negative) {
                    return Err(Error::InvalidFamily(format!(
                        "scale vector {v} must be positive"
                    )));
                }
                if !lambda.is_positive() || *lambda >= Rat::one() {
                    return Err(Error::InvalidFamily(format!(
                        "scale ratio {lambda} must lie in (0, 1)"
                    )));
                }
            }
            Family::CoordDecay { q, .. } if q.is_negative() => {
                return Err(Error::InvalidFamily(format!(
                    "decay offset {q} must be nonnegative"
                )));
            }
            Family::RunningSupMeet { base, .. } | Family::Deviation { base, .. } => {
                base.validate()?
            }
            _ => {}
        }
        Ok(())
    }

    pub(crate) fn profile(&self) -> Result<Profile> {
        self.validate()?;
        Ok(match self {
            Family::Explicit { values } => {
                let first = &values[0];
                let n = values.iter().map(Vector::prefix_len).max().unwrap_or(0);
                let columns: Vec<Vec<Rat>> = values.iter().map(|v| v.padded(n)).collect();
                let coords = (0..n)
                    .map(|i| ScalarSeq::listed(columns.iter().map(|c| c[i].clone()).collect()))
                    .collect();
                let rest = match first.carrier() {
                    Carrier::FinDim(_) => Rest::Absent,
                    Carrier::TailSeq => Rest::Uniform(ScalarSeq::listed(
                        values
                            .iter()
                            .map(|v| v.tail().expect("tail").clone())
                            .collect(),
                    )),
                };
                Profile { coords, rest }
            }
            Family::Shift { head, tail, offset } => {
                let off = offset
                    .clone()
                    .unwrap_or_else(|| Vector::zero(Carrier::TailSeq));
                let coords = off
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(i, o)| ScalarSeq::step(i + 1, tail + o, head + o))
                    .collect();
                let t = off.tail().expect("tail carrier");
                let (behind, ahead) = (head + t, tail + t);
                let rest = if behind == ahead {
                    Rest::Uniform(ScalarSeq::Const(behind))
                } else {
                    Rest::Front { behind, ahead }
                };
                Profile { coords, rest }
            }
            Family::Scale { v, lambda } => {
                let g = |c: &Rat| ScalarSeq::geometric(c.clone(), lambda.clone());
                Profile {
                    coords: v.coords().iter().map(g).collect(),
                    rest: v.tail().map_or(Rest::Absent, |t| Rest::Uniform(g(t))),
                }
            }
            Family::CoordDecay { c, p, q } => {
                let n = c.prefix_len().max(p.prefix_len());
                let (cs, ps) = (c.padded(n), p.padded(n));
                let h = |a: &Rat, b: &Rat| ScalarSeq::harmonic(a.clone(), b.clone(), q.clone());
                Profile {
                    coords: cs.iter().zip(&ps).map(|(a, b)| h(a, b)).collect(),
                    rest: match (c.tail(), p.tail()) {
                        (Some(a), Some(b)) => Rest::Uniform(h(a, b)),
                        _ => Rest::Absent,
                    },
                }
            }
            Family::RunningSupMeet { base, cap } => {
                let b = base.profile()?;
                b.map(
                    b.coords.len(),
                    cap,
                    ScalarSeq::run_max_meet,
                    |behind, ahead, ct| {
                        (
                            behind.clone().max(ahead.clone()).min(ct.clone()),
                            ahead.clone().min(ct.clone()),
                        )
                    },
                )?
            }
            Family::Deviation { base, center } => {
                let b = base.profile()?;
                b.map(
                    b.coords.len(),
                    center,
                    ScalarSeq::abs_dev,
                    |behind, ahead, ct| ((behind - ct).abs(), (ahead - ct).abs()),
                )?
            }
        })
    }

    /// `value(k)`, exactly.
    pub fn value(&self, k: usize) -> Result<Vector> {
        Ok(self.profile()?.value(k))
    }

    /// `value(k)` for every `k` in `range`, sharing one tail analysis.
    pub fn values(&self, range: std::ops::Range<usize>) -> Result<Vec<Vector>> {
        let p = self.profile()?;
        Ok(range.map(|k| p.value(k)).collect())
    }

    /// `t * F` for `t > 0`, kept in the same template.
    pub fn scaled(&self, t: &Rat) -> Result<Family> {
        if !t.is_positive() {
            return Err(Error::Precondition(format!(
                "scaling factor {t} must be positive"
            )));
        }
        Ok(match self {
            Family::Explicit { values } => Family::Explicit {
                values: values.iter().map(|v| v.scale(t)).collect(),
            },
            Family::Shift { head, tail, offset } => Family::Shift {
                head: head * t,
                tail: tail * t,
                offset: offset.as_ref().map(|o| o.scale(t)),
            },
            Family::Scale { v, lambda } => Family::Scale {
                v: v.scale(t),
                lambda: lambda.clone(),
            },
            Family::CoordDecay { c, p, q } => Family::CoordDecay {
                c: c.scale(t),
                p: p.scale(t),
                q: q.clone(),
            },
            Family::RunningSupMeet { base, cap } => Family::RunningSupMeet {
                base: Box::new(base.scaled(t)?),
                cap: cap.scale(t),
            },
            Family::Deviation { base, center } => Family::Deviation {
                base: Box::new(base.scaled(t)?),
                center: center.scale(t),
            },
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Explicit { values } => {
                let v: Vec<String> = values.iter().map(Vector::to_string).collect();
                write!(f, "explicit[{}]", v.join(", "))
            }
            Family::Shift { head, tail, offset } => {
                write!(f, "shift(head {head}, tail {tail}")?;
                if let Some(o) = offset {
                    write!(f, ", offset {o}")?;
                }
                f.write_str(")")
            }
            Family::Scale { v, lambda } => write!(f, "scale({v}, {lambda})"),
            Family::CoordDecay { c, p, q } => write!(f, "coord-decay({c}, {p}, {q})"),
            Family::RunningSupMeet { base, cap } => write!(f, "running-sup-meet({base}, {cap})"),
            Family::Deviation { base, center } => write!(f, "|{base} - {center}|"),
        }
    }
}
