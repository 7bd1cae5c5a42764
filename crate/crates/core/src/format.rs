//! JSON instance documents.
//!
//! ```json
//! {
//!   "agents": [2], "constraints": [0], "objectives": [1],
//!   "edges": [{"u": 2, "v": 0, "port_u": 1, "port_v": 1},
//!             {"u": 2, "v": 1, "port_u": 2, "port_v": 1}],
//!   "a": [{"constraint": 0, "agent": 2, "value": "1"}],
//!   "c": [{"objective": 1, "agent": 2, "value": "2/3"}],
//!   "id_mode": "port_numbering",
//!   "delta_i": 2, "delta_k": 2
//! }
//! ```
//!
//! Vertex ids must cover `0..n` exactly once across the three role arrays.
//! `node_ids` is optional and only meaningful with `"id_mode": "unique_ids"`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Edge, IdMode, MaxMinInstance, Role, VertexId};
use crate::rational;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid document at {path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: usize,
    v: usize,
    port_u: u32,
    port_v: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ADoc {
    constraint: usize,
    agent: usize,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CDoc {
    objective: usize,
    agent: usize,
    value: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    agents: Vec<usize>,
    constraints: Vec<usize>,
    objectives: Vec<usize>,
    edges: Vec<EdgeDoc>,
    a: Vec<ADoc>,
    c: Vec<CDoc>,
    id_mode: IdMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta_i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    node_ids: Option<Vec<u64>>,
}

pub fn encode_instance(inst: &MaxMinInstance) -> Vec<u8> {
    let mut a = Vec::new();
    let mut c = Vec::new();
    for e in inst.edges() {
        let (ru, rv) = (inst.role(e.u), inst.role(e.v));
        let (agent, other, role) = match (ru, rv) {
            (Some(Role::Agent), Some(r)) if r != Role::Agent => (e.u, e.v, r),
            (Some(r), Some(Role::Agent)) if r != Role::Agent => (e.v, e.u, r),
            _ => continue,
        };
        let value = rational::format(&e.coef);
        match role {
            Role::Constraint => a.push(ADoc {
                constraint: other.0,
                agent: agent.0,
                value,
            }),
            _ => c.push(CDoc {
                objective: other.0,
                agent: agent.0,
                value,
            }),
        }
    }
    let ids = |role| inst.vertices_with_role(role).map(|v| v.0).collect();
    let doc = InstanceDoc {
        agents: ids(Role::Agent),
        constraints: ids(Role::Constraint),
        objectives: ids(Role::Objective),
        edges: inst
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                u: e.u.0,
                v: e.v.0,
                port_u: e.port_u,
                port_v: e.port_v,
            })
            .collect(),
        a,
        c,
        id_mode: inst.id_mode(),
        delta_i: inst.delta_i(),
        delta_k: inst.delta_k(),
        node_ids: inst.explicit_node_ids().map(|ids| ids.to_vec()),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("instance documents always serialize");
    out.push(b'\n');
    out
}

pub fn decode_instance(bytes: &[u8]) -> Result<MaxMinInstance, FormatError> {
    let doc: InstanceDoc = serde_json::from_slice(bytes).map_err(|e| FormatError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let n = doc.agents.len() + doc.constraints.len() + doc.objectives.len();
    let mut roles: Vec<Option<Role>> = vec![None; n];
    for (field, list, role) in [
        ("agents", &doc.agents, Role::Agent),
        ("constraints", &doc.constraints, Role::Constraint),
        ("objectives", &doc.objectives, Role::Objective),
    ] {
        for (pos, &id) in list.iter().enumerate() {
            let path = format!("{field}[{pos}]");
            let slot = roles
                .get_mut(id)
                .ok_or_else(|| invalid(&path, format!("vertex id {id} outside 0..{n}")))?;
            if slot.is_some() {
                return Err(invalid(path, format!("vertex id {id} listed twice")));
            }
            *slot = Some(role);
        }
    }
    let roles: Vec<Role> = roles.into_iter().map(|r| r.expect("ids cover 0..n")).collect();

    let mut seen_ports: HashMap<(usize, u32), usize> = HashMap::new();
    let mut edge_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (pos, e) in doc.edges.iter().enumerate() {
        let path = format!("edges[{pos}]");
        for end in [e.u, e.v] {
            if end >= n {
                return Err(invalid(&path, format!("unknown vertex {end}")));
            }
        }
        for (end, port) in [(e.u, e.port_u), (e.v, e.port_v)] {
            if let Some(prev) = seen_ports.insert((end, port), pos) {
                return Err(invalid(
                    &path,
                    format!("duplicate port {port} at vertex {end} (also used by edges[{prev}])"),
                ));
            }
        }
        edge_index.entry((e.u.min(e.v), e.u.max(e.v))).or_insert(pos);
    }

    let mut coefs: Vec<Option<rational::Rational>> = vec![None; doc.edges.len()];
    let entries = doc
        .a
        .iter()
        .enumerate()
        .map(|(pos, d)| (format!("a[{pos}]"), d.constraint, Role::Constraint, d.agent, &d.value))
        .chain(
            doc.c
                .iter()
                .enumerate()
                .map(|(pos, d)| (format!("c[{pos}]"), d.objective, Role::Objective, d.agent, &d.value)),
        );
    for (path, j, role, agent, text) in entries {
        if roles.get(j) != Some(&role) {
            return Err(invalid(&path, format!("vertex {j} is not a {role:?}")));
        }
        if roles.get(agent) != Some(&Role::Agent) {
            return Err(invalid(&path, format!("vertex {agent} is not an agent")));
        }
        let value = rational::parse(text).map_err(|e| invalid(&path, e.to_string()))?;
        if value.is_negative() {
            return Err(invalid(&path, format!("negative coefficient {text}")));
        }
        let edge = *edge_index
            .get(&(j.min(agent), j.max(agent)))
            .ok_or_else(|| invalid(&path, format!("no edge between {j} and {agent}")))?;
        if coefs[edge].replace(value).is_some() {
            return Err(invalid(&path, format!("second coefficient for edge {j}-{agent}")));
        }
    }

    let mut edges = Vec::with_capacity(doc.edges.len());
    for (pos, (e, coef)) in doc.edges.iter().zip(coefs).enumerate() {
        let carries_coef = (roles[e.u] == Role::Agent) != (roles[e.v] == Role::Agent);
        let coef = match coef {
            Some(c) => c,
            None if carries_coef => {
                return Err(invalid(format!("edges[{pos}]"), "edge has no coefficient in `a` or `c`"))
            }
            None => rational::Rational::zero(),
        };
        edges.push(Edge {
            u: VertexId(e.u),
            v: VertexId(e.v),
            port_u: e.port_u,
            port_v: e.port_v,
            coef,
        });
    }

    if let Some(ids) = &doc.node_ids {
        let distinct: BTreeSet<u64> = ids.iter().copied().collect();
        if ids.len() != n || distinct.len() != n {
            return Err(invalid("node_ids", "need exactly one distinct id per vertex"));
        }
    }

    Ok(MaxMinInstance::new(roles, edges, doc.id_mode)
        .with_degree_bounds(doc.delta_i, doc.delta_k)
        .with_node_ids(doc.node_ids))
}
