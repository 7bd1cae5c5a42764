use std::collections::VecDeque;

use num_traits::One;

use crate::model::{MaxMinInstance, Role, VertexId};
use crate::rational::{self, Rational};

/// Upper bound on the utility of any feasible solution of `S`:
/// `(d_k/d_i) * (d_k - 1 + d_k d_i s - d_i s) / (d_k - 1 + d_k s)`.
pub fn utility_upper_bound(d_i: usize, d_k: usize, s: usize) -> Rational {
    let (di, dk, s) = (d_i as i64, d_k as i64, s as i64);
    rational::ratio(dk, di) * rational::ratio(dk - 1 + dk * di * s - di * s, dk - 1 + dk * s)
}

/// `1 + 2^j / ((2^j - 1)(2s + 1))`: growth of `S` beyond radius `j(4s + 2)`
/// when the skeleton is locally a tree.
pub fn growth_bound(j: u32, s: usize) -> Rational {
    let two_j = rational::pow(&rational::int(2), j);
    let denom = (&two_j - Rational::one()) * rational::int(2 * s as i64 + 1);
    Rational::one() + two_j / denom
}

/// Largest `|V ∩ B(v, r+2)| / |V ∩ B(v, r)|` over agents `v` and radii
/// `big_r <= r <= ecc(v)`; `1` when no radius qualifies.
pub fn relative_growth(inst: &MaxMinInstance, big_r: usize) -> Rational {
    relative_growth_witness(inst, big_r).map_or_else(Rational::one, |w| w.ratio)
}

/// Where [`relative_growth`] attains its maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthWitness {
    pub agent: VertexId,
    pub radius: usize,
    pub ratio: Rational,
}

pub fn relative_growth_witness(inst: &MaxMinInstance, big_r: usize) -> Option<GrowthWitness> {
    let n = inst.num_vertices();
    let mut dist = vec![usize::MAX; n];
    let mut best: Option<GrowthWitness> = None;
    for v in inst.agents() {
        dist.fill(usize::MAX);
        dist[v.0] = 0;
        let mut per_distance = vec![1usize];
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for nb in inst.neighbors(x) {
                let y = nb.vertex;
                if dist[y.0] == usize::MAX {
                    let d = dist[x.0] + 1;
                    dist[y.0] = d;
                    if per_distance.len() <= d {
                        per_distance.resize(d + 1, 0);
                    }
                    if inst.role(y) == Some(Role::Agent) {
                        per_distance[d] += 1;
                    }
                    queue.push_back(y);
                }
            }
        }
        let ecc = per_distance.len() - 1;
        let mut within = Vec::with_capacity(ecc + 3);
        let mut total = 0usize;
        for d in 0..=ecc + 2 {
            total += per_distance.get(d).copied().unwrap_or(0);
            within.push(total);
        }
        for r in big_r..=ecc {
            let ratio = rational::ratio(within[r + 2] as i64, within[r] as i64);
            if best.as_ref().is_none_or(|b| ratio > b.ratio) {
                best = Some(GrowthWitness { agent: v, radius: r, ratio });
            }
        }
    }
    best
}
