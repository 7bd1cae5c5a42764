#![allow(dead_code)]

use maxmin_core::model::InstanceBuilder;
use maxmin_core::rational::ratio;
use maxmin_core::{IdMode, MaxMinInstance, Rational, Role};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random bipartite instance: every agent has exactly one constraint and
/// one objective. Degrees respect `(delta_i, delta_k)`, which are declared.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub instance: MaxMinInstance,
    pub delta_i: usize,
    pub delta_k: usize,
}

/// Rational in `[lo, 4]` with a denominator between 1 and 6.
fn coefficient(rng: &mut ChaCha8Rng, positive: bool) -> Rational {
    let den = rng.gen_range(1..=6);
    let lo = if positive { 1 } else { 0 };
    ratio(rng.gen_range(lo..=4 * den), den)
}

/// Splits `items` into consecutive groups of size `1..=max`.
fn groups<T: Copy>(items: &[T], max: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut rest = items;
    while !rest.is_empty() {
        let take = rng.gen_range(1..=max.min(rest.len()));
        out.push(rest[..take].to_vec());
        rest = &rest[take..];
    }
    out
}

/// Seeded random bipartite instance with `1..=max_agents` agents.
///
/// Constraint coefficients are positive so every local subproblem is
/// bounded; objective coefficients may be zero.
pub fn random_bipartite(seed: u64, max_agents: usize) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta_i = rng.gen_range(2..=4);
    let delta_k = rng.gen_range(2..=4);
    random_with_degrees(&mut rng, max_agents, delta_i, delta_k)
}

/// As [`random_bipartite`] with fixed degree bounds.
pub fn random_with_degrees(rng: &mut ChaCha8Rng, max_agents: usize, delta_i: usize, delta_k: usize) -> RandomInstance {
    let n = rng.gen_range(1..=max_agents);
    let mut b = InstanceBuilder::new();
    let agents = b.add_vertices(Role::Agent, n);

    let mut order = agents.clone();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for group in groups(&order, delta_i, rng) {
        let i = b.add_vertex(Role::Constraint);
        for v in group {
            edges.push((v, i, coefficient(rng, true)));
        }
    }
    order.shuffle(rng);
    for group in groups(&order, delta_k, rng) {
        let k = b.add_vertex(Role::Objective);
        for v in group {
            edges.push((v, k, coefficient(rng, false)));
        }
    }
    // Edge order decides the ports.
    edges.shuffle(rng);
    for (v, h, coef) in edges {
        if rng.gen_bool(0.5) {
            b.connect(v, h, coef);
        } else {
            b.connect(h, v, coef);
        }
    }
    let mode = if rng.gen_bool(0.5) {
        IdMode::PortNumbering
    } else {
        IdMode::UniqueIds
    };
    RandomInstance {
        instance: b.build(mode).with_degree_bounds(Some(delta_i), Some(delta_k)),
        delta_i,
        delta_k,
    }
}

/// Seeded random tree-shaped instance (not necessarily bipartite in the
/// one-constraint-one-objective sense) with `vertices` vertices.
pub fn random_tree(seed: u64, vertices: usize) -> MaxMinInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = InstanceBuilder::new();
    let mut agents = vec![b.add_vertex(Role::Agent)];
    let mut hubs = Vec::new();
    while b.num_vertices() < vertices {
        if hubs.is_empty() || rng.gen_bool(0.5) {
            let role = if rng.gen_bool(0.5) { Role::Constraint } else { Role::Objective };
            let h = b.add_vertex(role);
            let v = *agents.choose(&mut rng).unwrap();
            b.connect(v, h, coefficient(&mut rng, true));
            hubs.push(h);
        } else {
            let v = b.add_vertex(Role::Agent);
            let h = *hubs.choose(&mut rng).unwrap();
            b.connect(h, v, coefficient(&mut rng, true));
            agents.push(v);
        }
    }
    b.build(IdMode::PortNumbering)
}
