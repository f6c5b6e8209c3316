//! Exact construction of joint distributions over binary variables from
//! pairwise marginals laid out on a tree.
//!
//! A [`MarginalModel`] assigns a 2x2 distribution to every edge of a
//! [`TreeGraph`]. When the model is consistent, [`canonical_joint`] gives the
//! joint under which the tree is a Markov network, and the routines in
//! [`schedule`] enumerate every compatible joint by gluing one edge at a
//! time, each step exposing a box of free parameters. The [`oracle`] module
//! solves the same problem as an exact linear feasibility system, for
//! cross-checking.

pub mod canonical;
pub mod dist;
pub mod error;
pub mod gluing;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod rational;
pub mod sample;
pub mod schedule;

pub use canonical::{canonical_joint, canonical_params};
pub use dist::{make_joint, JointDist, ProbReport, Violation, MAX_VARS};
pub use error::{Error, Result};
pub use gluing::{glue_pair, AffineEntry, GlueFamily, Interval, Policy};
pub use graph::{build_tree, MarginalModel, TreeGraph};
pub use oracle::{assemble_system, feasible, verify_joint, Feasibility, LinearSystem};
pub use rational::{format_rational, int, parse_rational, ratio, Rational};
pub use schedule::{
    chain_schedule, general_schedule, schedule_with, star_schedule, tree_schedule, Choices, GlueSchedule, GlueStep,
    ScheduleKind, ScheduleShape, StepChoice, StepInput,
};
