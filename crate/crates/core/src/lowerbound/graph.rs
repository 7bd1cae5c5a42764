use std::collections::VecDeque;

use super::LowerBoundError;

/// Bipartite graph with `left` vertices `0..left` and `right` vertices
/// `0..right`. Edges are `(left index, right index)`.
///
/// Graph algorithms address vertices globally: left `j` is `j`, right `j` is
/// `left + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: Vec<(usize, usize)>) -> Result<Self, LowerBoundError> {
        let mut adj = vec![Vec::new(); left + right];
        for (idx, &(v, u)) in edges.iter().enumerate() {
            if v >= left || u >= right {
                return Err(LowerBoundError::InvalidGraph(format!("edge {idx} = ({v}, {u}) is out of range")));
            }
            if adj[v].iter().any(|&(w, _)| w == left + u) {
                return Err(LowerBoundError::InvalidGraph(format!("parallel edge ({v}, {u})")));
            }
            adj[v].push((left + u, idx));
            adj[left + u].push((v, idx));
        }
        Ok(BipartiteGraph { left, right, edges, adj })
    }

    /// `K_{left,right}`; every left vertex has degree `right` and vice versa.
    pub fn complete(left: usize, right: usize) -> Self {
        let edges = (0..left).flat_map(|v| (0..right).map(move |u| (v, u))).collect();
        Self::new(left, right, edges).expect("complete graphs are simple")
    }

    pub fn left_count(&self) -> usize {
        self.left
    }

    pub fn right_count(&self) -> usize {
        self.right
    }

    pub fn num_vertices(&self) -> usize {
        self.left + self.right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `(global neighbour, edge index)` pairs.
    pub fn neighbors(&self, global: usize) -> &[(usize, usize)] {
        &self.adj[global]
    }

    /// `(left degree, right degree)` if both sides are uniform.
    pub fn biregular_degrees(&self) -> Option<(usize, usize)> {
        let uniform = |range: std::ops::Range<usize>| {
            let mut degrees = range.map(|v| self.adj[v].len());
            let first = degrees.next()?;
            degrees.all(|d| d == first).then_some(first)
        };
        Some((uniform(0..self.left)?, uniform(self.left..self.left + self.right)?))
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.num_vertices();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut via = vec![usize::MAX; n];
        for root in 0..n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                if best.is_some_and(|b| 2 * dist[x] + 1 >= b) {
                    break;
                }
                for &(y, e) in &self.adj[x] {
                    if e == via[x] && x != root {
                        continue;
                    }
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        via[y] = e;
                        queue.push_back(y);
                    } else {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Every cycle of length exactly `len`, each as its sorted edge indices.
    pub fn cycles_of_length(&self, len: usize) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut out = Vec::new();
        let mut dist = vec![usize::MAX; n];
        let mut on_path = vec![false; n];
        for start in 0..n {
            // Only cycles whose smallest vertex is `start`; distances restricted
            // to vertices >= start prune hopeless branches.
            dist.fill(usize::MAX);
            dist[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                if 2 * dist[x] >= len {
                    continue;
                }
                for &(y, _) in &self.adj[x] {
                    if y > start && dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            let mut path_vertices = vec![start];
            let mut path_edges = Vec::new();
            on_path[start] = true;
            self.extend_cycle(start, len, &dist, &mut on_path, &mut path_vertices, &mut path_edges, &mut out);
            on_path[start] = false;
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_cycle(
        &self,
        start: usize,
        len: usize,
        dist: &[usize],
        on_path: &mut [bool],
        vertices: &mut Vec<usize>,
        edges: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let x = *vertices.last().expect("path starts at start");
        let remaining = len - edges.len();
        for &(y, e) in &self.adj[x] {
            if remaining == 1 {
                // Each cycle is walked in both directions; keep the one whose
                // second vertex is smaller than its last.
                if y == start && edges.len() >= 2 && vertices[1] < x {
                    let mut cycle = edges.clone();
                    cycle.push(e);
                    cycle.sort_unstable();
                    out.push(cycle);
                }
                continue;
            }
            if y <= start || on_path[y] || dist[y] > remaining - 1 {
                continue;
            }
            on_path[y] = true;
            vertices.push(y);
            edges.push(e);
            self.extend_cycle(start, len, dist, on_path, vertices, edges, out);
            edges.pop();
            vertices.pop();
            on_path[y] = false;
        }
    }

    /// Girth together with all shortest cycles.
    pub fn shortest_cycles(&self) -> Option<(usize, Vec<Vec<usize>>)> {
        let g = self.girth()?;
        Some((g, self.cycles_of_length(g)))
    }

    /// The 2-lift: vertex `(c, v)` becomes `c * count + v` on its side. Edges
    /// with `in_s[e]` stay within a copy, all others cross between copies.
    pub fn lift(&self, in_s: &[bool]) -> BipartiteGraph {
        assert_eq!(in_s.len(), self.edges.len(), "one flag per edge");
        let (l, r) = (self.left, self.right);
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for (&(v, u), &keep) in self.edges.iter().zip(in_s) {
            if keep {
                edges.push((v, u));
                edges.push((l + v, r + u));
            } else {
                edges.push((v, r + u));
                edges.push((l + v, u));
            }
        }
        BipartiteGraph::new(2 * l, 2 * r, edges).expect("lifts of simple graphs are simple")
    }
}
