//! The averaging local algorithm for bipartite max-min LPs.
//!
//! Each agent `u` looks at its radius-`8L+3` view, pads it into a regular tree
//! (every constraint gets `delta_i` agents, every objective `delta_k`), and for
//! every objective `k` within distance `4L+1` solves the subproblem on the
//! radius-`4L+2` ball around `k`. The output is `q` times the sum of `u`'s
//! values in those subproblems.
//!
//! Every agent that sees `k` assembles the same subproblem vertex by vertex
//! (breadth-first from `k`, neighbours by port), and the LP solver is
//! deterministic, so all of them agree on the subproblem solution.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::format::encode_instance;
use crate::lp::{solve_max_min, LpError};
use crate::model::{validate_instance, Assignment, Edge, IdMode, MaxMinInstance, Role, VertexId};
use crate::rational::{self, Rational};
use crate::unfold::{labelled_view, EdgeLabel, LocalView, ViewNode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("degree bounds must be at least 2 (got delta_i = {delta_i}, delta_k = {delta_k})")]
    InvalidParams { delta_i: usize, delta_k: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("not a bipartite max-min LP: agent {0} needs exactly one constraint and one objective")]
    NotBipartite(VertexId),
    #[error("{role:?} of degree {degree} exceeds the bound {bound}")]
    DegreeExceeded { role: Role, degree: usize, bound: usize },
    #[error("view node {node} is not an objective within distance {limit} of the root")]
    OutsideGatherRegion { node: usize, limit: usize },
    #[error("subproblem around an objective seen by agent {agent} is unbounded")]
    UnboundedSubproblem { agent: VertexId },
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Protocol constants shared by every agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgoParams {
    pub delta_i: usize,
    pub delta_k: usize,
    pub l: usize,
}

impl AlgoParams {
    pub fn new(delta_i: usize, delta_k: usize, l: usize) -> Result<Self, LocalError> {
        if delta_i < 2 || delta_k < 2 {
            return Err(LocalError::InvalidParams { delta_i, delta_k });
        }
        Ok(AlgoParams { delta_i, delta_k, l })
    }

    /// Local horizon `8L + 3`.
    pub fn horizon(&self) -> usize {
        8 * self.l + 3
    }

    /// Objectives within this distance of an agent get a subproblem: `4L + 1`.
    pub fn gather_radius(&self) -> usize {
        4 * self.l + 1
    }

    /// Radius of each subproblem around its objective: `4L + 2`.
    pub fn subproblem_radius(&self) -> usize {
        4 * self.l + 2
    }

    fn bound(&self, role: Role) -> Option<usize> {
        match role {
            Role::Constraint => Some(self.delta_i),
            Role::Objective => Some(self.delta_k),
            Role::Agent => None,
        }
    }
}

/// `n(l) = sum_{j<l} ((delta_i - 1)(delta_k - 1))^j`.
pub fn n_of(l: usize, p: &AlgoParams) -> BigInt {
    let base = BigInt::from((p.delta_i - 1) * (p.delta_k - 1));
    let mut term = BigInt::one();
    let mut total = BigInt::zero();
    for _ in 0..l {
        total += &term;
        term *= &base;
    }
    total
}

/// Closed-form region counts in the regularised tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSizes {
    /// `|K(v, l)|`: objectives within `4l + 1` of an agent.
    pub around_agent: BigInt,
    /// `|K(i, l)|`: objectives within `4l - 2` of a constraint.
    pub around_constraint: BigInt,
    /// `|K(v, l) \ K(i, l)|` for adjacent `v`, `i`.
    pub boundary: BigInt,
}

pub fn region_sizes(l: usize, p: &AlgoParams) -> RegionSizes {
    let n = n_of(l, p);
    let (di, dk) = (BigInt::from(p.delta_i), BigInt::from(p.delta_k));
    RegionSizes {
        around_agent: BigInt::one() + (&di - 1) * &dk * &n,
        around_constraint: &di * &n,
        boundary: BigInt::one() + (&di * &dk - &di - &dk) * &n,
    }
}

/// `q = 1 / (delta_i + delta_i (delta_i - 1)(delta_k - 1) n(L))`.
pub fn averaging_factor(p: &AlgoParams) -> Rational {
    let di = BigInt::from(p.delta_i);
    let denom = &di + &di * BigInt::from((p.delta_i - 1) * (p.delta_k - 1)) * n_of(p.l, p);
    Rational::new(BigInt::one(), denom)
}

/// Guaranteed approximation ratio `1 / (q |K(v, L)|)`.
pub fn approx_ratio(p: &AlgoParams) -> Rational {
    let q = averaging_factor(p);
    let count = Rational::from_integer(region_sizes(p.l, p).around_agent);
    Rational::one() / (q * count)
}

/// `delta_i (1 - 1/delta_k)`: the infimum of [`approx_ratio`] over `L`, and
/// the ratio no local algorithm attains.
pub fn ratio_limit(delta_i: usize, delta_k: usize) -> Rational {
    rational::int(delta_i as i64) * (rational::one() - rational::ratio(1, delta_k as i64))
}

fn virtual_node(role: Role, depth: usize, parent: usize, port_at_parent: u32, port_at_child: u32, coef: Rational) -> ViewNode {
    ViewNode {
        role,
        depth,
        parent: Some(parent),
        edge: Some(EdgeLabel {
            port_at_parent,
            port_at_child,
            coef,
        }),
        children: Vec::new(),
        id: None,
        is_virtual: true,
    }
}

/// Pads `view` into a regular tree down to its own radius.
///
/// A constraint with `d < delta_i` agents gains agents on ports `d+1..delta_i`
/// with `a = 0`, each hanging a fresh objective with `c = 1`; an objective
/// with `d < delta_k` agents gains agents with `c = 0`, each hanging a fresh
/// constraint with `a = 1`. Fresh nodes are padded in turn.
pub fn regularize_view(view: &LocalView, p: &AlgoParams) -> Result<LocalView, LocalError> {
    let mut nodes = view.nodes.clone();
    let radius = view.radius;
    let mut idx = 0;
    while idx < nodes.len() {
        let depth = nodes[idx].depth;
        if depth >= radius {
            idx += 1;
            continue;
        }
        let role = nodes[idx].role;
        match (role, nodes[idx].is_virtual) {
            (Role::Agent, true) => {
                if nodes[idx].children.is_empty() {
                    let parent_role = nodes[nodes[idx].parent.expect("virtual agents have a parent")].role;
                    let child_role = match parent_role {
                        Role::Constraint => Role::Objective,
                        _ => Role::Constraint,
                    };
                    let child = nodes.len();
                    nodes.push(virtual_node(child_role, depth + 1, idx, 2, 1, rational::one()));
                    nodes[idx].children.push(child);
                }
            }
            (Role::Agent, false) => {}
            (hub, _) => {
                let bound = p.bound(hub).expect("hubs have a bound");
                let degree = nodes[idx].children.len() + usize::from(nodes[idx].parent.is_some());
                if degree > bound {
                    return Err(LocalError::DegreeExceeded { role: hub, degree, bound });
                }
                for port in degree + 1..=bound {
                    let child = nodes.len();
                    nodes.push(virtual_node(Role::Agent, depth + 1, idx, port as u32, 1, Rational::zero()));
                    nodes[idx].children.push(child);
                }
            }
        }
        idx += 1;
    }
    Ok(LocalView { nodes, radius })
}

/// View nodes of the objectives within `4L + 1` of the root: the set `K(u, L)`.
pub fn gathered_objectives(view: &LocalView, p: &AlgoParams) -> Vec<usize> {
    view.nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| n.role == Role::Objective && n.depth <= p.gather_radius())
        .map(|(i, _)| i)
        .collect()
}

/// The radius-`4L+2` tree around an objective, as a standalone instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subproblem {
    /// Vertex `0` is the objective; vertices are numbered breadth-first with
    /// neighbours in port order.
    pub instance: MaxMinInstance,
    /// View node behind each subproblem vertex.
    pub view_nodes: Vec<usize>,
}

impl Subproblem {
    pub fn root(&self) -> VertexId {
        VertexId(0)
    }

    /// Subproblem vertex standing for view node `node`, if it is inside the ball.
    pub fn vertex_of(&self, node: usize) -> Option<VertexId> {
        self.view_nodes.iter().position(|&n| n == node).map(VertexId)
    }

    pub fn leaves(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.instance.num_vertices())
            .map(VertexId)
            .filter(|&v| v.0 != 0 && self.instance.degree(v) == 1)
    }
}

/// Extracts the subproblem around objective node `k` of a regularised view
/// rooted at an agent.
pub fn build_subproblem(view: &LocalView, k: usize, p: &AlgoParams) -> Result<Subproblem, LocalError> {
    let limit = p.gather_radius();
    let node = view.nodes.get(k).ok_or(LocalError::OutsideGatherRegion { node: k, limit })?;
    if node.role != Role::Objective || node.depth > limit {
        return Err(LocalError::OutsideGatherRegion { node: k, limit });
    }
    let radius = p.subproblem_radius();

    let mut index = HashMap::from([(k, 0usize)]);
    let mut view_nodes = vec![k];
    let mut dist = vec![0usize];
    // (a, b, port at a, port at b, coef)
    let mut raw_edges: Vec<(usize, usize, u32, u32, Rational)> = Vec::new();
    let mut queue = VecDeque::from([k]);
    while let Some(x) = queue.pop_front() {
        let xi = index[&x];
        if dist[xi] == radius {
            continue;
        }
        for nb in view.neighbors(x) {
            if index.contains_key(&nb.node) {
                continue;
            }
            let yi = view_nodes.len();
            index.insert(nb.node, yi);
            view_nodes.push(nb.node);
            dist.push(dist[xi] + 1);
            raw_edges.push((xi, yi, nb.port_here, nb.port_there, nb.coef.clone()));
            queue.push_back(nb.node);
        }
    }

    // Only the leaves lose edges; renumber every vertex's ports to 1..deg in
    // their original order.
    let mut ports: Vec<Vec<u32>> = vec![Vec::new(); view_nodes.len()];
    for (a, b, pa, pb, _) in &raw_edges {
        ports[*a].push(*pa);
        ports[*b].push(*pb);
    }
    for list in ports.iter_mut() {
        list.sort_unstable();
    }
    let compact = |v: usize, port: u32| ports[v].binary_search(&port).expect("port recorded") as u32 + 1;
    let edges = raw_edges
        .iter()
        .map(|(a, b, pa, pb, coef)| Edge {
            u: VertexId(*a),
            v: VertexId(*b),
            port_u: compact(*a, *pa),
            port_v: compact(*b, *pb),
            coef: coef.clone(),
        })
        .collect();
    let roles = view_nodes.iter().map(|&n| view.nodes[n].role).collect();
    let instance = MaxMinInstance::new(roles, edges, IdMode::PortNumbering)
        .with_degree_bounds(Some(p.delta_i), Some(p.delta_k));
    Ok(Subproblem { instance, view_nodes })
}

fn check_input(inst: &MaxMinInstance, p: &AlgoParams) -> Result<(), LocalError> {
    let report = validate_instance(inst);
    if !report.ok() {
        return Err(LocalError::InvalidInstance(report.to_string()));
    }
    if let Some(v) = inst.agents().find(|&v| !is_bipartite_agent(inst, v)) {
        return Err(LocalError::NotBipartite(v));
    }
    for role in [Role::Constraint, Role::Objective] {
        let degree = inst.max_degree(role);
        let bound = p.bound(role).expect("hub role");
        if degree > bound {
            return Err(LocalError::DegreeExceeded { role, degree, bound });
        }
    }
    Ok(())
}

fn is_bipartite_agent(inst: &MaxMinInstance, v: VertexId) -> bool {
    inst.degree(v) == 2
        && inst.neighbors_with_role(v, Role::Constraint).count() == 1
        && inst.neighbors_with_role(v, Role::Objective).count() == 1
}

/// Output of [`run_local_detailed`].
#[derive(Debug, Clone)]
pub struct LocalRun {
    pub x: Assignment,
    /// Every distinct subproblem solved, keyed by its instance document, with
    /// its optimal utility.
    pub subproblems: BTreeMap<Vec<u8>, Rational>,
    /// Total number of (agent, objective) subproblem evaluations.
    pub evaluations: usize,
}

/// Runs the algorithm for every agent of a bipartite instance.
pub fn run_local(inst: &MaxMinInstance, p: &AlgoParams) -> Result<Assignment, LocalError> {
    run_local_detailed(inst, p).map(|run| run.x)
}

pub fn run_local_detailed(inst: &MaxMinInstance, p: &AlgoParams) -> Result<LocalRun, LocalError> {
    check_input(inst, p)?;
    let q = averaging_factor(p);
    // Identical subproblems have identical canonical solutions, so they are solved once.
    let mut solved: HashMap<Vec<u8>, (Rational, Vec<Rational>)> = HashMap::new();
    let mut values = Vec::new();
    let mut evaluations = 0;
    for u in inst.agents() {
        let (view, _) = labelled_view(inst, u, p.horizon(), false);
        let view = regularize_view(&view, p)?;
        let mut total = Rational::zero();
        for k in gathered_objectives(&view, p) {
            let sub = build_subproblem(&view, k, p)?;
            let key = encode_instance(&sub.instance);
            if !solved.contains_key(&key) {
                let sol = match solve_max_min(&sub.instance) {
                    Ok(sol) => sol,
                    Err(LpError::Unbounded) => return Err(LocalError::UnboundedSubproblem { agent: u }),
                    Err(e) => return Err(e.into()),
                };
                let x: Vec<Rational> = (0..sub.instance.num_vertices())
                    .map(|v| sol.x.get(VertexId(v)).cloned().unwrap_or_default())
                    .collect();
                solved.insert(key.clone(), (sol.omega, x));
            }
            let me = sub.vertex_of(LocalView::ROOT).expect("the root agent lies in every gathered ball");
            total += &solved[&key].1[me.0];
            evaluations += 1;
        }
        values.push((u, &q * total));
    }
    Ok(LocalRun {
        x: Assignment::from_values(values),
        subproblems: solved.into_iter().map(|(k, (omega, _))| (k, omega)).collect(),
        evaluations,
    })
}

/// Baseline: `x_v = min_i 1 / (|V_i| a_iv)` over constraints with `a_iv > 0`.
/// An agent with no such constraint affects no constraint; it gets
/// `max_k 1 / c_kv` over its objectives with `c_kv > 0`, or `0`.
pub fn safe_baseline(inst: &MaxMinInstance) -> Assignment {
    let values = inst.agents().map(|v| {
        let capped = inst
            .neighbors_with_role(v, Role::Constraint)
            .filter(|n| n.coef.is_positive())
            .map(|n| Rational::one() / (Rational::from_integer(BigInt::from(inst.degree(n.vertex))) * n.coef))
            .min();
        let value = capped.unwrap_or_else(|| {
            inst.neighbors_with_role(v, Role::Objective)
                .filter(|n| n.coef.is_positive())
                .map(|n| Rational::one() / n.coef)
                .max()
                .unwrap_or_default()
        });
        (v, value)
    });
    Assignment::from_values(values)
}
