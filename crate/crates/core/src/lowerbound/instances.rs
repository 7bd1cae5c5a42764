use std::collections::VecDeque;

use num_traits::{One, Zero};

use super::graph::BipartiteGraph;
use super::LowerBoundError;
use crate::model::{Assignment, Edge, IdMode, InstanceBuilder, MaxMinInstance, Role, VertexId};
use crate::rational::{self, Rational};

/// Shape of the adversarial instances: skeleton degrees `d_i`, `d_k`, path
/// segments `s`, and the horizon `r` being defeated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LowerBoundParams {
    pub d_i: usize,
    pub d_k: usize,
    pub s: usize,
    pub r: usize,
}

impl LowerBoundParams {
    pub fn new(d_i: usize, d_k: usize, s: usize, r: usize) -> Result<Self, LowerBoundError> {
        if d_i < 2 || d_k < 2 {
            return Err(LowerBoundError::InvalidParams(format!("degrees must be at least 2, got ({d_i}, {d_k})")));
        }
        if r == 0 || !r.is_multiple_of(4) {
            return Err(LowerBoundError::InvalidParams(format!("r must be a positive multiple of 4, got {r}")));
        }
        Ok(LowerBoundParams { d_i, d_k, s, r })
    }

    /// Each skeleton edge becomes a path of this length.
    pub fn path_length(&self) -> usize {
        4 * self.s + 2
    }

    /// Radius of the ball around an objective that forms `S_k`.
    pub fn ball_radius(&self) -> usize {
        4 * self.s + 2 + self.r
    }

    /// `g = 2(4s + 2 + r) + 1`: the skeleton must have no shorter cycle.
    pub fn required_girth(&self) -> usize {
        2 * self.ball_radius() + 1
    }
}

/// The instance `S` built on a skeleton graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundInstance {
    pub instance: MaxMinInstance,
    /// Skeleton constraints, indexed by left vertex of the skeleton.
    pub constraints: Vec<VertexId>,
    /// Skeleton objectives, indexed by right vertex of the skeleton.
    pub objectives: Vec<VertexId>,
    /// `layers[j]`: agents at distance `2j + 1` from the nearest skeleton constraint.
    pub layers: Vec<Vec<VertexId>>,
    pub params: LowerBoundParams,
}

/// Replaces every skeleton edge `{i, k}` by the path
/// `i - v - (k' - v - i' - v)^s - k` with `a = 1` everywhere, `c = 1` at
/// skeleton objectives and `c = d_k - 1` at path objectives.
///
/// Ports follow the order in which edges are laid down: skeleton edges in
/// order, each path from its constraint end. Vertex ids double as unique
/// identifiers.
pub fn build_s(q: &BipartiteGraph, p: &LowerBoundParams) -> Result<LowerBoundInstance, LowerBoundError> {
    match q.biregular_degrees() {
        Some((a, b)) if a == p.d_i && b == p.d_k => {}
        other => {
            return Err(LowerBoundError::NotBiregular {
                expected: (p.d_i, p.d_k),
                found: other,
            })
        }
    }
    let one = rational::one();
    let path_c = rational::int(p.d_k as i64 - 1);
    let mut b = InstanceBuilder::new();
    let constraints = b.add_vertices(Role::Constraint, q.left_count());
    let objectives = b.add_vertices(Role::Objective, q.right_count());
    let mut layers = vec![Vec::with_capacity(q.edges().len()); 2 * p.s + 1];
    for &(i, k) in q.edges() {
        let mut hub = constraints[i];
        for t in 0..p.s {
            let first = b.add_vertex(Role::Agent);
            let mid_k = b.add_vertex(Role::Objective);
            let second = b.add_vertex(Role::Agent);
            let mid_i = b.add_vertex(Role::Constraint);
            b.connect(hub, first, one.clone());
            b.connect(first, mid_k, path_c.clone());
            b.connect(mid_k, second, path_c.clone());
            b.connect(second, mid_i, one.clone());
            layers[2 * t].push(first);
            layers[2 * t + 1].push(second);
            hub = mid_i;
        }
        let last = b.add_vertex(Role::Agent);
        b.connect(hub, last, one.clone());
        b.connect(last, objectives[k], one.clone());
        layers[2 * p.s].push(last);
    }
    let instance = b.build(IdMode::UniqueIds).with_degree_bounds(Some(p.d_i), Some(p.d_k));
    Ok(LowerBoundInstance {
        instance,
        constraints,
        objectives,
        layers,
        params: *p,
    })
}

/// The ball `S_k` around a skeleton objective, as its own instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallInstance {
    pub instance: MaxMinInstance,
    /// Vertex of `S` behind each vertex of the ball.
    pub origin: Vec<VertexId>,
    /// The objective the ball is centred on (vertex `0`).
    pub root: VertexId,
    pub radius: usize,
}

impl BallInstance {
    /// Vertex of the ball standing for `v` of `S`.
    pub fn local(&self, v: VertexId) -> Option<VertexId> {
        self.origin.iter().position(|&o| o == v).map(VertexId)
    }
}

/// Induced subinstance on the ball of radius `4s + 2 + r` around `k`, numbered
/// breadth-first from `k`. Coefficients, ports and identifiers are those of
/// `S`, except that the boundary constraints, which keep a single edge, see it
/// on port 1.
pub fn build_sk(s: &LowerBoundInstance, k: VertexId) -> Result<BallInstance, LowerBoundError> {
    if !s.objectives.contains(&k) {
        return Err(LowerBoundError::NotASkeletonObjective(k));
    }
    let inst = &s.instance;
    let radius = s.params.ball_radius();
    let mut local = vec![usize::MAX; inst.num_vertices()];
    let mut origin = vec![k];
    let mut dist = vec![0usize];
    local[k.0] = 0;
    let mut queue = VecDeque::from([k]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[local[x.0]];
        if dx == radius {
            continue;
        }
        for n in inst.neighbors(x) {
            if local[n.vertex.0] == usize::MAX {
                local[n.vertex.0] = origin.len();
                origin.push(n.vertex);
                dist.push(dx + 1);
                queue.push_back(n.vertex);
            }
        }
    }

    let mut edges: Vec<Edge> = inst
        .edges()
        .iter()
        .filter(|e| local[e.u.0] != usize::MAX && local[e.v.0] != usize::MAX)
        .map(|e| Edge {
            u: VertexId(local[e.u.0]),
            v: VertexId(local[e.v.0]),
            ..e.clone()
        })
        .collect();
    if edges.len() + 1 != origin.len() {
        return Err(LowerBoundError::CycleInBall { objective: k, radius });
    }
    let mut ports: Vec<Vec<u32>> = vec![Vec::new(); origin.len()];
    for e in &edges {
        ports[e.u.0].push(e.port_u);
        ports[e.v.0].push(e.port_v);
    }
    for list in ports.iter_mut() {
        list.sort_unstable();
    }
    let compact = |v: VertexId, port: u32| ports[v.0].binary_search(&port).expect("port recorded") as u32 + 1;
    for e in edges.iter_mut() {
        e.port_u = compact(e.u, e.port_u);
        e.port_v = compact(e.v, e.port_v);
    }

    let roles = origin.iter().map(|&v| inst.role(v).expect("ball vertices exist")).collect::<Vec<_>>();
    for (v, role) in roles.iter().enumerate() {
        if dist[v] == radius && *role != Role::Constraint {
            return Err(LowerBoundError::LeafNotConstraint(origin[v]));
        }
    }
    let ids = origin.iter().map(|&v| inst.node_id(v)).collect();
    let instance = MaxMinInstance::new(roles, edges, IdMode::UniqueIds)
        .with_degree_bounds(inst.delta_i(), inst.delta_k())
        .with_node_ids(Some(ids));
    Ok(BallInstance {
        instance,
        origin,
        root: VertexId(0),
        radius,
    })
}

/// Agents at distance `4j + 1` from the root get `1 - 1/D^(2j+1)`, agents at
/// distance `4j + 3` get `1/D^(2j+2)`, with `D = max(d_i, d_k + 1)`.
pub fn appendix_solution(ball: &BallInstance, p: &LowerBoundParams) -> Assignment {
    let d = rational::int(p.d_i.max(p.d_k + 1) as i64);
    let inst = &ball.instance;
    let mut dist = vec![usize::MAX; inst.num_vertices()];
    dist[ball.root.0] = 0;
    let mut queue = VecDeque::from([ball.root]);
    while let Some(x) = queue.pop_front() {
        for n in inst.neighbors(x) {
            if dist[n.vertex.0] == usize::MAX {
                dist[n.vertex.0] = dist[x.0] + 1;
                queue.push_back(n.vertex);
            }
        }
    }
    Assignment::from_values(inst.agents().map(|v| {
        let t = dist[v.0];
        let j = (t / 4) as u32;
        let value = match t % 4 {
            1 => Rational::one() - rational::pow(&d, 2 * j + 1).recip(),
            3 => rational::pow(&d, 2 * j + 2).recip(),
            _ => Rational::zero(),
        };
        (v, value)
    }))
}

/// Skeleton objective nearest to `h`, ties broken by smallest vertex id.
pub fn nearest_skeleton_objective(s: &LowerBoundInstance, h: VertexId) -> Option<VertexId> {
    let inst = &s.instance;
    let mut dist = vec![usize::MAX; inst.num_vertices()];
    dist[h.0] = 0;
    let mut frontier = vec![h];
    while !frontier.is_empty() {
        let mut hits: Vec<VertexId> = frontier.iter().copied().filter(|v| s.objectives.contains(v)).collect();
        if !hits.is_empty() {
            hits.sort();
            return hits.first().copied();
        }
        let mut next = Vec::new();
        for &x in &frontier {
            for n in inst.neighbors(x) {
                if dist[n.vertex.0] == usize::MAX {
                    dist[n.vertex.0] = dist[x.0] + 1;
                    next.push(n.vertex);
                }
            }
        }
        frontier = next;
    }
    None
}
