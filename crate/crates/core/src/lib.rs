//! Local approximation of bipartite max-min linear programs.
//!
//! The crate is organised around the objects a port-numbering local algorithm
//! manipulates:
//!
//! * [`model`] and [`format`]: instances, assignments, feasibility and utility,
//!   and the JSON instance document.
//! * [`unfold`]: radius-`r` local views (truncated universal covers), their
//!   canonical codes, and the consistency harness for local outputs.
//! * [`lp`]: an exact rational simplex and the canonical max-min solver.
//! * [`local`]: the averaging algorithm over regularised views, the closed-form
//!   counts and ratios it relies on, and a safe baseline.
//! * [`lowerbound`]: high-girth biregular skeletons, the layered instances built
//!   on them, and the bound calculators.

pub mod format;
pub mod local;
pub mod lowerbound;
pub mod lp;
pub mod model;
pub mod rational;
pub mod unfold;

pub use model::{Assignment, IdMode, MaxMinInstance, Role, VertexId};
pub use rational::Rational;
