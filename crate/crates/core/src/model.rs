//! Max-min LP instances: a graph over agents, constraints and objectives with
//! nonnegative rational coefficients on agent edges and a port numbering at
//! every vertex.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

/// Dense vertex index, `0..num_vertices`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Agent,
    Constraint,
    Objective,
}

impl Role {
    pub fn tag(self) -> char {
        match self {
            Role::Agent => 'V',
            Role::Constraint => 'I',
            Role::Objective => 'K',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdMode {
    PortNumbering,
    UniqueIds,
}

/// An undirected edge with the port number it occupies at each endpoint.
///
/// `coef` is `a_iv` when the edge joins an agent and a constraint and `c_kv`
/// when it joins an agent and an objective.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub port_u: u32,
    pub port_v: u32,
    pub coef: Rational,
}

impl Edge {
    pub fn other(&self, from: VertexId) -> VertexId {
        if self.u == from {
            self.v
        } else {
            self.u
        }
    }

    /// Port at `from` followed by the port at the opposite endpoint.
    pub fn ports_from(&self, from: VertexId) -> (u32, u32) {
        if self.u == from {
            (self.port_u, self.port_v)
        } else {
            (self.port_v, self.port_u)
        }
    }
}

/// One incident edge seen from a vertex.
#[derive(Debug, Clone, Copy)]
pub struct Neighbor<'a> {
    pub vertex: VertexId,
    pub port_here: u32,
    pub port_there: u32,
    pub coef: &'a Rational,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxMinInstance {
    roles: Vec<Role>,
    edges: Vec<Edge>,
    id_mode: IdMode,
    node_ids: Option<Vec<u64>>,
    delta_i: Option<usize>,
    delta_k: Option<usize>,
    incident: Vec<Vec<usize>>,
}

impl MaxMinInstance {
    pub fn new(roles: Vec<Role>, edges: Vec<Edge>, id_mode: IdMode) -> Self {
        let mut incident = vec![Vec::new(); roles.len()];
        for (idx, e) in edges.iter().enumerate() {
            if e.u.0 < roles.len() {
                incident[e.u.0].push(idx);
            }
            if e.v != e.u && e.v.0 < roles.len() {
                incident[e.v.0].push(idx);
            }
        }
        for (vertex, list) in incident.iter_mut().enumerate() {
            let here = VertexId(vertex);
            list.sort_by_key(|&idx| (edges[idx].ports_from(here).0, idx));
        }
        MaxMinInstance {
            roles,
            edges,
            id_mode,
            node_ids: None,
            delta_i: None,
            delta_k: None,
            incident,
        }
    }

    pub fn with_degree_bounds(mut self, delta_i: Option<usize>, delta_k: Option<usize>) -> Self {
        self.delta_i = delta_i;
        self.delta_k = delta_k;
        self
    }

    /// Attaches explicit unique identifiers (one per vertex, in `VertexId` order).
    pub fn with_node_ids(mut self, ids: Option<Vec<u64>>) -> Self {
        self.node_ids = ids;
        self
    }

    pub fn with_id_mode(&self, mode: IdMode) -> Self {
        let mut copy = self.clone();
        copy.id_mode = mode;
        copy
    }

    pub fn num_vertices(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, v: VertexId) -> Option<Role> {
        self.roles.get(v.0).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn id_mode(&self) -> IdMode {
        self.id_mode
    }

    pub fn delta_i(&self) -> Option<usize> {
        self.delta_i
    }

    pub fn delta_k(&self) -> Option<usize> {
        self.delta_k
    }

    pub fn explicit_node_ids(&self) -> Option<&[u64]> {
        self.node_ids.as_deref()
    }

    /// The identifier a vertex carries in `UniqueIds` mode.
    pub fn node_id(&self, v: VertexId) -> u64 {
        match &self.node_ids {
            Some(ids) => ids[v.0],
            None => v.0 as u64,
        }
    }

    pub fn vertices_with_role(&self, role: Role) -> impl Iterator<Item = VertexId> + '_ {
        self.roles
            .iter()
            .enumerate()
            .filter(move |(_, r)| **r == role)
            .map(|(i, _)| VertexId(i))
    }

    pub fn agents(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices_with_role(Role::Agent)
    }

    pub fn constraints(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices_with_role(Role::Constraint)
    }

    pub fn objectives(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices_with_role(Role::Objective)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident[v.0].len()
    }

    /// Incident edges of `v` in increasing order of their port at `v`.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = Neighbor<'_>> + '_ {
        self.incident[v.0].iter().map(move |&idx| {
            let e = &self.edges[idx];
            let (port_here, port_there) = e.ports_from(v);
            Neighbor {
                vertex: e.other(v),
                port_here,
                port_there,
                coef: &e.coef,
                edge: idx,
            }
        })
    }

    /// Neighbours of `v` that have the given role.
    pub fn neighbors_with_role(&self, v: VertexId, role: Role) -> impl Iterator<Item = Neighbor<'_>> + '_ {
        self.neighbors(v).filter(move |n| self.roles[n.vertex.0] == role)
    }

    /// Coefficient on the edge between `j` and agent `v`, if they are adjacent.
    pub fn coefficient(&self, j: VertexId, v: VertexId) -> Option<&Rational> {
        self.neighbors(j).find(|n| n.vertex == v).map(|n| n.coef)
    }

    pub fn max_degree(&self, role: Role) -> usize {
        self.vertices_with_role(role).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Every agent touches exactly one constraint and exactly one objective.
    pub fn is_bipartite(&self) -> bool {
        self.agents().all(|v| {
            self.neighbors_with_role(v, Role::Constraint).count() == 1
                && self.neighbors_with_role(v, Role::Objective).count() == 1
                && self.degree(v) == 2
        })
    }

    /// All coefficients on existing edges equal one.
    pub fn is_zero_one(&self) -> bool {
        let one = rational::one();
        self.edges.iter().all(|e| e.coef == one)
    }
}

/// Adds vertices and edges, handing out the next free port at each endpoint.
#[derive(Debug, Default, Clone)]
pub struct InstanceBuilder {
    roles: Vec<Role>,
    edges: Vec<Edge>,
    next_port: Vec<u32>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, role: Role) -> VertexId {
        self.roles.push(role);
        self.next_port.push(1);
        VertexId(self.roles.len() - 1)
    }

    pub fn add_vertices(&mut self, role: Role, count: usize) -> Vec<VertexId> {
        (0..count).map(|_| self.add_vertex(role)).collect()
    }

    pub fn connect(&mut self, u: VertexId, v: VertexId, coef: Rational) -> usize {
        let port_u = self.next_port[u.0];
        self.next_port[u.0] += 1;
        let port_v = self.next_port[v.0];
        self.next_port[v.0] += 1;
        self.edges.push(Edge { u, v, port_u, port_v, coef });
        self.edges.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.roles.len()
    }

    pub fn build(self, id_mode: IdMode) -> MaxMinInstance {
        MaxMinInstance::new(self.roles, self.edges, id_mode)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UnknownEndpoint,
    SelfLoop,
    EdgeWithinAgents,
    EdgeWithoutAgent,
    ParallelEdge,
    DuplicatePort,
    PortGap,
    NegativeCoefficient,
    DegreeBound,
    NodeIds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "index")]
pub enum Location {
    Vertex(usize),
    Edge(usize),
    Instance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: Location,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, location: Location, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            location,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        for (n, v) in self.violations.iter().enumerate() {
            if n > 0 {
                writeln!(f)?;
            }
            write!(f, "{:?} at {:?}: {}", v.kind, v.location, v.message)?;
        }
        Ok(())
    }
}

/// Reports every violated structural invariant of `inst`. Never fails.
pub fn validate_instance(inst: &MaxMinInstance) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = inst.num_vertices();
    let mut pairs = HashSet::new();

    for (idx, e) in inst.edges.iter().enumerate() {
        let here = Location::Edge(idx);
        if e.u.0 >= n || e.v.0 >= n {
            report.push(ViolationKind::UnknownEndpoint, here, format!("edge {}-{} names a missing vertex", e.u, e.v));
            continue;
        }
        if e.u == e.v {
            report.push(ViolationKind::SelfLoop, here, format!("self loop at {}", e.u));
            continue;
        }
        let (ru, rv) = (inst.roles[e.u.0], inst.roles[e.v.0]);
        match (ru == Role::Agent, rv == Role::Agent) {
            (true, true) => report.push(ViolationKind::EdgeWithinAgents, here, format!("edge within V: {}-{}", e.u, e.v)),
            (false, false) => report.push(
                ViolationKind::EdgeWithoutAgent,
                here,
                format!("edge within I and K: {}-{}", e.u, e.v),
            ),
            _ => {}
        }
        let key = (e.u.min(e.v), e.u.max(e.v));
        if !pairs.insert(key) {
            report.push(ViolationKind::ParallelEdge, here, format!("parallel edge {}-{}", key.0, key.1));
        }
        if e.coef.is_negative() {
            report.push(
                ViolationKind::NegativeCoefficient,
                here,
                format!("coefficient {} < 0", rational::format(&e.coef)),
            );
        }
    }

    for v in 0..n {
        let here = VertexId(v);
        let mut ports: Vec<u32> = inst.incident[v].iter().map(|&idx| inst.edges[idx].ports_from(here).0).collect();
        ports.sort_unstable();
        let deg = ports.len() as u32;
        let distinct: BTreeSet<u32> = ports.iter().copied().collect();
        if distinct.len() != ports.len() {
            report.push(ViolationKind::DuplicatePort, Location::Vertex(v), format!("repeated port at {}", here));
        }
        if distinct.iter().any(|&p| p == 0 || p > deg) {
            report.push(
                ViolationKind::PortGap,
                Location::Vertex(v),
                format!("port gap at {}: ports {:?} are not 1..{}", here, ports, deg),
            );
        }
        let bound = match inst.roles[v] {
            Role::Constraint => inst.delta_i,
            Role::Objective => inst.delta_k,
            Role::Agent => None,
        };
        if let Some(bound) = bound {
            if deg as usize > bound {
                report.push(
                    ViolationKind::DegreeBound,
                    Location::Vertex(v),
                    format!("degree {} exceeds declared bound {}", deg, bound),
                );
            }
        }
    }

    if let Some(ids) = &inst.node_ids {
        let distinct: HashSet<u64> = ids.iter().copied().collect();
        if ids.len() != n || distinct.len() != ids.len() {
            report.push(ViolationKind::NodeIds, Location::Instance, "node ids must be unique, one per vertex");
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {vertex} is a {found:?}, expected {expected:?}")]
    WrongRole { vertex: VertexId, expected: Role, found: Role },
    #[error("no value for agent {0}")]
    MissingValue(VertexId),
    #[error("negative value for agent {0}")]
    NegativeValue(VertexId),
    #[error("value given for non-agent {0}")]
    NotAnAgent(VertexId),
    #[error("instance has no objectives")]
    NoObjectives,
}

/// Values `x_v` for the agents of an instance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: BTreeMap<VertexId, Rational>,
}

impl Assignment {
    /// Unchecked construction; see [`Assignment::for_instance`] for the checked form.
    pub fn from_values(values: impl IntoIterator<Item = (VertexId, Rational)>) -> Self {
        Assignment {
            values: values.into_iter().collect(),
        }
    }

    /// Checks that the domain is exactly the agent set and all values are nonnegative.
    pub fn for_instance(
        inst: &MaxMinInstance,
        values: impl IntoIterator<Item = (VertexId, Rational)>,
    ) -> Result<Self, ModelError> {
        let x = Self::from_values(values);
        for (&v, value) in &x.values {
            match inst.role(v) {
                None => return Err(ModelError::UnknownVertex(v)),
                Some(Role::Agent) => {}
                Some(_) => return Err(ModelError::NotAnAgent(v)),
            }
            if value.is_negative() {
                return Err(ModelError::NegativeValue(v));
            }
        }
        if let Some(v) = inst.agents().find(|v| !x.values.contains_key(v)) {
            return Err(ModelError::MissingValue(v));
        }
        Ok(x)
    }

    pub fn uniform(inst: &MaxMinInstance, value: Rational) -> Self {
        Self::from_values(inst.agents().map(|v| (v, value.clone())))
    }

    pub fn get(&self, v: VertexId) -> Option<&Rational> {
        self.values.get(&v)
    }

    pub fn set(&mut self, v: VertexId, value: Rational) {
        self.values.insert(v, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, &Rational)> {
        self.values.iter().map(|(v, x)| (*v, x))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::from_values(self.values.iter().map(|(v, x)| (*v, x * factor)))
    }

    /// Keeps only the given vertices.
    pub fn restricted(&self, keep: impl IntoIterator<Item = VertexId>) -> Self {
        Self::from_values(keep.into_iter().filter_map(|v| self.values.get(&v).map(|x| (v, x.clone()))))
    }
}

fn expect_role(inst: &MaxMinInstance, v: VertexId, expected: Role) -> Result<(), ModelError> {
    match inst.role(v) {
        None => Err(ModelError::UnknownVertex(v)),
        Some(found) if found != expected => Err(ModelError::WrongRole {
            vertex: v,
            expected,
            found,
        }),
        Some(_) => Ok(()),
    }
}

fn weighted_sum(inst: &MaxMinInstance, x: &Assignment, j: VertexId) -> Result<Rational, ModelError> {
    let mut total = Rational::zero();
    for n in inst.neighbors_with_role(j, Role::Agent) {
        let value = x.get(n.vertex).ok_or(ModelError::MissingValue(n.vertex))?;
        total += n.coef * value;
    }
    Ok(total)
}

/// `sum_{v in V_k} c_kv x_v`.
pub fn objective_utility(inst: &MaxMinInstance, x: &Assignment, k: VertexId) -> Result<Rational, ModelError> {
    expect_role(inst, k, Role::Objective)?;
    weighted_sum(inst, x, k)
}

/// `sum_{v in V_i} a_iv x_v`.
pub fn constraint_load(inst: &MaxMinInstance, x: &Assignment, i: VertexId) -> Result<Rational, ModelError> {
    expect_role(inst, i, Role::Constraint)?;
    weighted_sum(inst, x, i)
}

/// Minimum utility over all objectives.
pub fn min_utility(inst: &MaxMinInstance, x: &Assignment) -> Result<Rational, ModelError> {
    let mut best: Option<Rational> = None;
    for k in inst.objectives() {
        let u = objective_utility(inst, x, k)?;
        best = Some(match best {
            Some(b) if b <= u => b,
            _ => u,
        });
    }
    best.ok_or(ModelError::NoObjectives)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum Infeasibility {
    ConstraintExceeded { constraint: VertexId, load: String },
    NegativeValue { agent: VertexId },
    MissingValue { agent: VertexId },
}

/// Exact feasibility check; an empty result means `x` is feasible.
pub fn check_feasible(inst: &MaxMinInstance, x: &Assignment) -> Vec<Infeasibility> {
    let mut out = Vec::new();
    for v in inst.agents() {
        match x.get(v) {
            None => out.push(Infeasibility::MissingValue { agent: v }),
            Some(value) if value.is_negative() => out.push(Infeasibility::NegativeValue { agent: v }),
            Some(_) => {}
        }
    }
    let one = rational::one();
    for i in inst.constraints() {
        let load: Rational = inst
            .neighbors_with_role(i, Role::Agent)
            .filter_map(|n| x.get(n.vertex).map(|value| n.coef * value))
            .sum();
        if load > one {
            out.push(Infeasibility::ConstraintExceeded {
                constraint: i,
                load: rational::format(&load),
            });
        }
    }
    out
}
