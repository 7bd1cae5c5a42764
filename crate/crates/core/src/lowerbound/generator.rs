use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::BipartiteGraph;
use super::LowerBoundError;

/// Limits for [`high_girth_biregular`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GirthBudget {
    /// Never build a graph with more vertices than this.
    pub max_vertices: usize,
    /// Random edge subsets tried per lift before giving up.
    pub attempts_per_lift: usize,
}

impl Default for GirthBudget {
    fn default() -> Self {
        GirthBudget {
            max_vertices: 1 << 13,
            attempts_per_lift: 64,
        }
    }
}

/// Statistics of a successful generator run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirthReport {
    pub target: usize,
    pub girth: Option<usize>,
    pub lifts: usize,
    pub attempts: usize,
}

/// An `(a, b)`-biregular bipartite graph (left degree `a`, right degree `b`)
/// with girth at least `g`, grown from `K_{b,a}` by 2-lifts.
///
/// A shortest cycle survives a lift (as two copies) exactly when it meets the
/// lift set `S` in an even number of edges. Each attempt takes the parity
/// equations "cycle meets `S` oddly" in a random order, keeps a maximal
/// consistent subset, and draws `S` uniformly from its solutions; single-edge
/// flips then lower the even count further. The best attempt is kept if it
/// strictly lowers the number of shortest cycles. All randomness comes from a
/// ChaCha stream seeded by `seed`.
pub fn high_girth_biregular(
    a: usize,
    b: usize,
    g: usize,
    seed: u64,
    budget: &GirthBudget,
) -> Result<(BipartiteGraph, GirthReport), LowerBoundError> {
    if a < 2 || b < 2 {
        return Err(LowerBoundError::InvalidParams(format!("degrees must be at least 2, got ({a}, {b})")));
    }
    // Bipartite girth is even.
    let target = (g + g % 2).max(4);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = BipartiteGraph::complete(b, a);
    let mut report = GirthReport {
        target,
        girth: graph.girth(),
        lifts: 0,
        attempts: 0,
    };
    loop {
        let Some((girth, cycles)) = graph.shortest_cycles() else {
            report.girth = None;
            return Ok((graph, report));
        };
        report.girth = Some(girth);
        if girth >= target {
            return Ok((graph, report));
        }
        let exceeded = || LowerBoundError::BudgetExceeded {
            target,
            best_girth: Some(girth),
            vertices: graph.num_vertices(),
        };
        if 2 * graph.num_vertices() > budget.max_vertices {
            return Err(exceeded());
        }
        let mut best: Option<(usize, Vec<bool>)> = None;
        for _ in 0..budget.attempts_per_lift {
            report.attempts += 1;
            let mut in_s = sample_odd_subset(graph.edges().len(), &cycles, &mut rng);
            let even = reduce_even_cycles(&mut in_s, &cycles);
            if best.as_ref().is_none_or(|(e, _)| even < *e) {
                best = Some((even, in_s));
            }
            if even == 0 {
                break;
            }
        }
        match best {
            Some((even, in_s)) if 2 * even < cycles.len() => {
                graph = graph.lift(&in_s);
                report.lifts += 1;
            }
            _ => return Err(exceeded()),
        }
    }
}

/// Random edge subset meeting as many `cycles` oddly as a greedy pass over the
/// parity equations in random order can guarantee.
fn sample_odd_subset(num_edges: usize, cycles: &[Vec<usize>], rng: &mut ChaCha8Rng) -> Vec<bool> {
    let words = num_edges.div_ceil(64);
    let mut order: Vec<usize> = (0..cycles.len()).collect();
    order.shuffle(rng);
    // Echelon rows (bits, rhs, pivot); each row is reduced by all earlier ones.
    let mut rows: Vec<(Vec<u64>, bool, usize)> = Vec::new();
    for c in order {
        let mut bits = vec![0u64; words];
        for &e in &cycles[c] {
            bits[e / 64] ^= 1 << (e % 64);
        }
        let mut rhs = true;
        for (row, row_rhs, pivot) in &rows {
            if bits[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (w, r) in bits.iter_mut().zip(row) {
                    *w ^= r;
                }
                rhs ^= row_rhs;
            }
        }
        let Some(word) = bits.iter().position(|&w| w != 0) else {
            continue;
        };
        let pivot = word * 64 + bits[word].trailing_zeros() as usize;
        rows.push((bits, rhs, pivot));
    }
    let mut in_s: Vec<bool> = (0..num_edges).map(|_| rng.gen_bool(0.5)).collect();
    for (bits, rhs, pivot) in rows.iter().rev() {
        let mut value = *rhs;
        for e in 0..num_edges {
            if e != *pivot && bits[e / 64] >> (e % 64) & 1 == 1 {
                value ^= in_s[e];
            }
        }
        in_s[*pivot] = value;
    }
    in_s
}

/// Greedily flips edges of `in_s` while that lowers the number of `cycles`
/// with an even number of edges in `in_s`; returns the final even count.
///
/// Each even cycle becomes two cycles of the same length in the lift, each
/// odd one a single cycle of twice the length.
pub fn reduce_even_cycles(in_s: &mut [bool], cycles: &[Vec<usize>]) -> usize {
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); in_s.len()];
    for (c, cycle) in cycles.iter().enumerate() {
        for &e in cycle {
            through[e].push(c);
        }
    }
    let mut odd: Vec<bool> = cycles
        .iter()
        .map(|cycle| cycle.iter().filter(|&&e| in_s[e]).count() % 2 == 1)
        .collect();
    loop {
        let gain = |e: usize| -> isize { through[e].iter().map(|&c| if odd[c] { -1 } else { 1 }).sum() };
        let best = (0..in_s.len()).map(|e| (gain(e), e)).filter(|&(gain, _)| gain > 0).max_by_key(|&(gain, e)| (gain, std::cmp::Reverse(e)));
        let Some((_, e)) = best else { break };
        in_s[e] = !in_s[e];
        for &c in &through[e] {
            odd[c] = !odd[c];
        }
    }
    odd.iter().filter(|&&o| !o).count()
}
