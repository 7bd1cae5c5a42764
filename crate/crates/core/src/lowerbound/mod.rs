//! Adversarial instances on which no local algorithm beats
//! `delta_i (1 - 1/delta_k)`, and the tools to build and check them.
//!
//! A biregular skeleton `Q` of large girth is grown by random 2-lifts; `S`
//! replaces each skeleton edge by a path; `S_k` is the tree-shaped ball of `S`
//! around a skeleton objective.

mod generator;
mod graph;
mod growth;
mod instances;

use thiserror::Error;

use crate::model::VertexId;

pub use generator::{high_girth_biregular, reduce_even_cycles, GirthBudget, GirthReport};
pub use graph::BipartiteGraph;
pub use growth::{growth_bound, relative_growth, relative_growth_witness, utility_upper_bound, GrowthWitness};
pub use instances::{
    appendix_solution, build_s, build_sk, nearest_skeleton_objective, BallInstance, LowerBoundInstance,
    LowerBoundParams,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowerBoundError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("skeleton must be {expected:?}-biregular, found degrees {found:?}")]
    NotBiregular {
        expected: (usize, usize),
        found: Option<(usize, usize)>,
    },
    #[error("budget exceeded before reaching girth {target}: best girth {best_girth:?} at {vertices} vertices")]
    BudgetExceeded {
        target: usize,
        best_girth: Option<usize>,
        vertices: usize,
    },
    #[error("vertex {0} is not a skeleton objective")]
    NotASkeletonObjective(VertexId),
    #[error("ball of radius {radius} around {objective} contains a cycle")]
    CycleInBall { objective: VertexId, radius: usize },
    #[error("boundary vertex {0} of the ball is not a constraint")]
    LeafNotConstraint(VertexId),
}
