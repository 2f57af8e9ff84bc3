use serde::{Deserialize, Serialize};

use crate::lattice::{Carrier, Vector};
use crate::rat::Rat;

/// Knobs for every bounded search in the crate: witness grids, scan
/// horizons, and interval fitting budgets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct SearchConfig {
    /// Grid values are `0` and `+-2^j` for `|j| <= grid_scale`.
    pub grid_scale: u32,
    /// Ratios tried for geometric witness families.
    pub lambdas: Vec<Rat>,
    /// Multipliers applied to seed vectors before use as parameters.
    pub scale_factors: Vec<Rat>,
    /// `Q^n` grids are enumerated in full only up to this dimension.
    pub max_grid_dim: usize,
    /// Prefix length of enumerated tail-sequence grid points.
    pub tail_grid_prefix: usize,
    /// Indices checked by direct evaluation on top of every tail rule.
    pub horizon: usize,
    /// Dyadic shrink steps tried by interval fitting.
    pub fit_budget: u32,
    /// Sample count for containment checks that cannot be decided exactly.
    pub fit_samples: usize,
    /// Depth of generated neighborhood catalogs.
    pub neighborhood_depth: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_scale: 1,
            lambdas: vec![Rat::new(1, 2), Rat::new(1, 3)],
            scale_factors: vec![Rat::new(1, 2), Rat::one(), Rat::from(2)],
            max_grid_dim: 3,
            tail_grid_prefix: 2,
            horizon: 100,
            fit_budget: 16,
            fit_samples: 1000,
            neighborhood_depth: 5,
        }
    }
}

impl SearchConfig {
    /// Sorted grid values; `{-2, -1, -1/2, 0, 1/2, 1, 2}` at the default scale.
    pub fn grid_values(&self) -> Vec<Rat> {
        let s = self.grid_scale as i64;
        let mut v = vec![Rat::zero()];
        for j in -s..=s {
            let p = if j >= 0 {
                Rat::from(1i64 << j)
            } else {
                Rat::new(1, 1i64 << -j)
            };
            v.push(-&p);
            v.push(p);
        }
        v.sort();
        v
    }

    /// Grid points of a carrier in a fixed enumeration order.
    ///
    /// `Q^n` with `n <= max_grid_dim` gets the full product grid; larger
    /// dimensions fall back to constant vectors and single-coordinate
    /// perturbations. Tail sequences use prefixes of length `tail_grid_prefix`.
    pub fn grid_points(&self, carrier: Carrier) -> Vec<Vector> {
        let vals = self.grid_values();
        match carrier {
            Carrier::FinDim(n) if n <= self.max_grid_dim => {
                product(&vals, n).into_iter().map(Vector::fin_dim).collect()
            }
            Carrier::FinDim(n) => {
                let mut out: Vec<Vector> = vals
                    .iter()
                    .map(|v| Vector::constant(carrier, v.clone()))
                    .collect();
                for j in 0..n {
                    for v in &vals {
                        let mut c = vec![Rat::zero(); n];
                        c[j] = v.clone();
                        out.push(Vector::fin_dim(c));
                    }
                }
                dedup_in_order(out)
            }
            Carrier::TailSeq => {
                let mut out = Vec::new();
                for p in product(&vals, self.tail_grid_prefix + 1) {
                    let (tail, prefix) = p.split_last().expect("non-empty");
                    out.push(Vector::tail_seq(prefix.to_vec(), tail.clone()));
                }
                dedup_in_order(out)
            }
        }
    }
}

fn product(vals: &[Rat], n: usize) -> Vec<Vec<Rat>> {
    let mut acc: Vec<Vec<Rat>> = vec![Vec::new()];
    for _ in 0..n {
        acc = acc
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    acc
}

pub(crate) fn dedup_in_order(v: Vec<Vector>) -> Vec<Vector> {
    let mut seen = std::collections::HashSet::new();
    v.into_iter().filter(|x| seen.insert(x.clone())).collect()
}
