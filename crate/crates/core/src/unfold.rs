//! Local views: the radius-`r` truncation of the unfolding (universal cover)
//! of an instance, rooted at one vertex.
//!
//! A view is grown by walking every incident edge except the one just
//! arrived on, so a vertex reached again through a cycle becomes a fresh tree
//! node. Node labels are exactly what a port-numbering node can learn: roles,
//! port numbers on both ends of every edge, and coefficients. Identifiers are
//! included only for instances in `UniqueIds` mode.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::model::{Assignment, IdMode, MaxMinInstance, Role, VertexId};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeLabel {
    pub port_at_parent: u32,
    pub port_at_child: u32,
    pub coef: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewNode {
    pub role: Role,
    pub depth: usize,
    pub parent: Option<usize>,
    /// Label of the edge to the parent; `None` only at the root.
    pub edge: Option<EdgeLabel>,
    /// Children in increasing order of `port_at_parent`.
    pub children: Vec<usize>,
    pub id: Option<u64>,
    pub is_virtual: bool,
}

/// A rooted tree of [`ViewNode`]s; the root is node `0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalView {
    pub(crate) nodes: Vec<ViewNode>,
    pub(crate) radius: usize,
}

/// A neighbour of a view node, seen from that node.
#[derive(Debug, Clone, Copy)]
pub struct ViewNeighbor<'a> {
    pub node: usize,
    pub port_here: u32,
    pub port_there: u32,
    pub coef: &'a Rational,
}

impl LocalView {
    pub const ROOT: usize = 0;

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ViewNode] {
        &self.nodes
    }

    pub fn node(&self, idx: usize) -> &ViewNode {
        &self.nodes[idx]
    }

    pub fn root(&self) -> &ViewNode {
        &self.nodes[Self::ROOT]
    }

    /// Every tree neighbour of `idx` (parent and children), in increasing order
    /// of the port at `idx`.
    pub fn neighbors(&self, idx: usize) -> Vec<ViewNeighbor<'_>> {
        let node = &self.nodes[idx];
        let mut out: Vec<ViewNeighbor<'_>> = Vec::with_capacity(node.children.len() + 1);
        if let (Some(p), Some(label)) = (node.parent, &node.edge) {
            out.push(ViewNeighbor {
                node: p,
                port_here: label.port_at_child,
                port_there: label.port_at_parent,
                coef: &label.coef,
            });
        }
        for &c in &node.children {
            let label = self.nodes[c].edge.as_ref().expect("children carry an edge label");
            out.push(ViewNeighbor {
                node: c,
                port_here: label.port_at_parent,
                port_there: label.port_at_child,
                coef: &label.coef,
            });
        }
        out.sort_by_key(|n| n.port_here);
        out
    }

    /// Tree distances from `from` to every node.
    pub fn distances_from(&self, from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.nodes.len()];
        dist[from] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for nb in self.neighbors(u) {
                if dist[nb.node] == usize::MAX {
                    dist[nb.node] = dist[u] + 1;
                    queue.push_back(nb.node);
                }
            }
        }
        dist
    }

    /// The same view cut down to depth `r` (no-op when `r >= radius`).
    pub fn truncated(&self, r: usize) -> LocalView {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (idx, node) in self.nodes.iter().enumerate() {
            if node.depth > r {
                continue;
            }
            remap[idx] = nodes.len();
            nodes.push(node.clone());
        }
        for node in nodes.iter_mut() {
            node.parent = node.parent.map(|p| remap[p]);
            node.children = node
                .children
                .iter()
                .filter(|&&c| remap[c] != usize::MAX)
                .map(|&c| remap[c])
                .collect();
        }
        LocalView {
            nodes,
            radius: r.min(self.radius),
        }
    }

    /// Indented text rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![Self::ROOT];
        while let Some(idx) = stack.pop() {
            let node = &self.nodes[idx];
            let indent = "  ".repeat(node.depth);
            let _ = write!(out, "{indent}{}", node.role.tag());
            if node.is_virtual {
                out.push('*');
            }
            if let Some(id) = node.id {
                let _ = write!(out, " #{id}");
            }
            if let Some(label) = &node.edge {
                let _ = write!(
                    out,
                    "  ports {}->{} coef {}",
                    label.port_at_parent,
                    label.port_at_child,
                    rational::format(&label.coef)
                );
            }
            out.push('\n');
            stack.extend(node.children.iter().rev());
        }
        out
    }
}

/// The view of `v` at radius `r` together with the covering map: the host
/// vertex each view node stands for. The map is for inspection only; the view
/// itself carries host identifiers only when `include_ids` is set.
pub fn labelled_view(inst: &MaxMinInstance, v: VertexId, r: usize, include_ids: bool) -> (LocalView, Vec<VertexId>) {
    let id_of = |w: VertexId| include_ids.then(|| inst.node_id(w));
    let mut nodes = vec![ViewNode {
        role: inst.role(v).expect("root exists"),
        depth: 0,
        parent: None,
        edge: None,
        children: Vec::new(),
        id: id_of(v),
        is_virtual: false,
    }];
    let mut host = vec![v];
    let mut arrived_by: Vec<Option<usize>> = vec![None];
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        if nodes[idx].depth >= r {
            continue;
        }
        let here = host[idx];
        for nb in inst.neighbors(here) {
            if Some(nb.edge) == arrived_by[idx] {
                continue;
            }
            let child = nodes.len();
            nodes.push(ViewNode {
                role: inst.role(nb.vertex).expect("validated endpoint"),
                depth: nodes[idx].depth + 1,
                parent: Some(idx),
                edge: Some(EdgeLabel {
                    port_at_parent: nb.port_here,
                    port_at_child: nb.port_there,
                    coef: nb.coef.clone(),
                }),
                children: Vec::new(),
                id: id_of(nb.vertex),
                is_virtual: false,
            });
            nodes[idx].children.push(child);
            host.push(nb.vertex);
            arrived_by.push(Some(nb.edge));
            queue.push_back(child);
        }
    }
    (LocalView { nodes, radius: r }, host)
}

/// Radius-`r` view of `v`; identifiers appear iff the instance is in `UniqueIds` mode.
pub fn local_view(inst: &MaxMinInstance, v: VertexId, r: usize) -> LocalView {
    labelled_view(inst, v, r, inst.id_mode() == IdMode::UniqueIds).0
}

/// Canonical serialisation of a view. Equal codes iff the views are
/// isomorphic as rooted trees preserving roles, ports, coefficients, virtual
/// flags and (when present) identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ViewCode(pub Vec<u8>);

impl ViewCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

pub fn canonical_code(view: &LocalView) -> ViewCode {
    let mut out = String::new();
    write_code(view, LocalView::ROOT, &mut out);
    ViewCode(out.into_bytes())
}

fn write_code(view: &LocalView, idx: usize, out: &mut String) {
    let node = &view.nodes[idx];
    out.push(node.role.tag());
    if node.is_virtual {
        out.push('*');
    }
    if let Some(id) = node.id {
        let _ = write!(out, "#{id}");
    }
    out.push('[');
    for &c in &node.children {
        let label = view.nodes[c].edge.as_ref().expect("children carry an edge label");
        let _ = write!(
            out,
            "{},{},{}:",
            label.port_at_parent,
            label.port_at_child,
            rational::format(&label.coef)
        );
        write_code(view, c, out);
    }
    out.push(']');
}

/// Agent pairs whose radius-`r` views have equal codes but whose values
/// differ. An empty result means the assignment is consistent with being the
/// output of some deterministic `r`-local algorithm.
pub fn consistency_check(inst: &MaxMinInstance, output: &Assignment, r: usize) -> Vec<(VertexId, VertexId)> {
    let mut classes: BTreeMap<ViewCode, Vec<VertexId>> = BTreeMap::new();
    for v in inst.agents() {
        classes.entry(canonical_code(&local_view(inst, v, r))).or_default().push(v);
    }
    let mut pairs = Vec::new();
    for members in classes.values() {
        for (pos, &u) in members.iter().enumerate() {
            for &w in &members[pos + 1..] {
                if output.get(u) != output.get(w) {
                    pairs.push((u.min(w), u.max(w)));
                }
            }
        }
    }
    pairs.sort();
    pairs
}
