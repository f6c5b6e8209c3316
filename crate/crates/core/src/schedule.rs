//! Whole-tree constructions as sequences of glue steps.
//!
//! Vertices are inserted one at a time in an order where each new vertex `w`
//! hangs off an already-inserted vertex `v`. Given the current joint `K` over
//! the inserted set `W`, the joint over `W ∪ {w}` is obtained by gluing `K`
//! with a joint over `(W \ {x}) ∪ {w}`, where `x` is a leaf of `W` other than
//! `v`. That second joint comes from the same construction applied to the
//! marginal of `K` on `W \ {x}`, bottoming out at the edge `(v, w)`.
//!
//! On a path inserted end to end this glues the joint on `A1..An` with the
//! joint on `A2..An+1`. On a star inserted center first it glues the joint
//! without the last leaf with the joint without the first leaf. Every joint
//! reproducing the edge marginals is reachable by some choice of parameters.
//!
//! Boxes of later steps depend on the parameters chosen at earlier steps.

use std::collections::{BTreeMap, HashSet};

use crate::dist::JointDist;
use crate::error::{Error, Result};
use crate::gluing::{glue_pair, GlueFamily, Policy};
use crate::graph::MarginalModel;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepChoice {
    Policy(Policy),
    Explicit(Vec<Rational>),
}

/// Parameter selection for every step of a schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Choices {
    Policy(Policy),
    /// Choices keyed by step index; unlisted steps use `fallback`.
    PerStep {
        steps: BTreeMap<usize, StepChoice>,
        fallback: Policy,
    },
    /// Follow a known solution: each step takes the coordinates of this joint.
    Matching(JointDist),
}

impl Default for Choices {
    fn default() -> Self {
        Choices::Policy(Policy::Canonical)
    }
}

impl From<Policy> for Choices {
    fn from(p: Policy) -> Self {
        Choices::Policy(p)
    }
}

impl Choices {
    /// Explicit parameter lists for steps `0, 1, ...`.
    pub fn explicit(steps: Vec<Vec<Rational>>) -> Self {
        Choices::PerStep {
            steps: steps
                .into_iter()
                .enumerate()
                .map(|(i, p)| (i, StepChoice::Explicit(p)))
                .collect(),
            fallback: Policy::Canonical,
        }
    }

    fn pick(&self, step: usize, family: &GlueFamily) -> Result<Vec<Rational>> {
        let params = match self {
            Choices::Policy(p) => family.params_for(*p),
            Choices::PerStep { steps, fallback } => match steps.get(&step) {
                Some(StepChoice::Policy(p)) => family.params_for(*p),
                Some(StepChoice::Explicit(v)) => v.clone(),
                None => family.params_for(*fallback),
            },
            Choices::Matching(target) => target
                .marginalize(family.vars())
                .ok()
                .and_then(|m| family.coordinates_of(&m))
                .ok_or(Error::NotInFamily)?,
        };
        family.check_params(&params)?;
        Ok(params)
    }
}

/// Where a glue input comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepInput {
    Edge(String, String),
    Step(usize),
    /// Marginal of an earlier step's output.
    Marginal {
        step: usize,
        vars: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueStep {
    pub left: StepInput,
    pub right: StepInput,
    pub family: GlueFamily,
    pub params: Vec<Rational>,
    pub output: JointDist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Chain,
    Star,
    Tree,
}

impl ScheduleKind {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleKind::Chain => "chain",
            ScheduleKind::Star => "star",
            ScheduleKind::Tree => "tree",
        }
    }
}

/// Which construction to run; `Auto` picks chain or star when the graph has
/// that shape and the general tree construction otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScheduleShape {
    Chain,
    Star,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueSchedule {
    pub kind: ScheduleKind,
    /// Vertex insertion order.
    pub order: Vec<String>,
    pub steps: Vec<GlueStep>,
    /// Full joint in the model's vertex order.
    pub joint: JointDist,
}

impl GlueSchedule {
    /// `Y<m>` for the last step, `X<m>` otherwise, where `m` is the 1-based
    /// entry number of the parameter in the step's variable order.
    pub fn param_label(&self, step: usize, param: usize) -> String {
        let prefix = if step + 1 == self.steps.len() { 'Y' } else { 'X' };
        format!("{prefix}{}", self.steps[step].family.param_coords()[param] + 1)
    }

    pub fn num_params(&self) -> usize {
        self.steps.iter().map(|s| s.family.num_params()).sum()
    }
}

struct Builder<'a> {
    model: &'a MarginalModel,
    choices: &'a Choices,
    rank: BTreeMap<String, usize>,
    center: Option<String>,
    steps: Vec<GlueStep>,
}

impl Builder<'_> {
    fn is_leaf_within(&self, x: &str, set: &HashSet<&str>) -> bool {
        let g = self.model.graph();
        g.neighbors(x).iter().filter(|n| set.contains(n.as_str())).count() == 1
    }

    /// Joint over `k.vars() ∪ {w}` where `w` attaches at `v`.
    fn extend(&mut self, k: JointDist, source: StepInput, w: &str, v: &str) -> Result<(JointDist, StepInput)> {
        let set: HashSet<&str> = k.vars().iter().map(String::as_str).collect();
        let x = k
            .vars()
            .iter()
            .filter(|c| c.as_str() != v && self.is_leaf_within(c, &set))
            .min_by_key(|c| self.rank[c.as_str()])
            .expect("a tree on two or more vertices has two leaves")
            .clone();
        let rest: Vec<String> = k.vars().iter().filter(|c| **c != x).cloned().collect();
        let (right, right_source) = if rest.len() == 1 {
            // rest is {v}
            (
                self.model.edge_dist(v, w)?,
                StepInput::Edge(v.to_string(), w.to_string()),
            )
        } else {
            let reduced = k.marginalize(&rest)?;
            let reduced_source = match &source {
                _ if rest.len() == 2 => StepInput::Edge(rest[0].clone(), rest[1].clone()),
                StepInput::Step(step) | StepInput::Marginal { step, .. } => StepInput::Marginal {
                    step: *step,
                    vars: rest.clone(),
                },
                StepInput::Edge(..) => unreachable!("edges have two variables"),
            };
            self.extend(reduced, reduced_source, w, v)?
        };

        let mut family = glue_pair(&k, &right, &rest)?;
        if let Some(c) = &self.center {
            if rest.len() >= 2 {
                let mut order = vec![c.clone(), x.clone()];
                order.extend(rest.iter().filter(|r| *r != c).cloned());
                order.push(w.to_string());
                family = family.permuted(&order)?;
            }
        }
        debug_assert!(family.is_nonempty());
        let index = self.steps.len();
        let params = self.choices.pick(index, &family)?;
        let output = family.reconstruct(&params)?;
        self.steps.push(GlueStep {
            left: source,
            right: right_source,
            family,
            params,
            output: output.clone(),
        });
        Ok((output, StepInput::Step(index)))
    }
}

fn run(
    model: &MarginalModel,
    choices: &Choices,
    kind: ScheduleKind,
    order: Vec<String>,
    center: Option<String>,
) -> Result<GlueSchedule> {
    if !model.is_consistent() {
        return Err(Error::InconsistentModel);
    }
    let g = model.graph();
    let mut b = Builder {
        model,
        choices,
        rank: order.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect(),
        center,
        steps: Vec::new(),
    };
    let mut joint = model.edge_dist(&order[0], &order[1])?;
    let mut source = StepInput::Edge(order[0].clone(), order[1].clone());
    for (i, w) in order.iter().enumerate().skip(2) {
        let v = g
            .neighbors(w)
            .iter()
            .find(|n| b.rank[n.as_str()] < i)
            .expect("insertion order is connected")
            .clone();
        (joint, source) = b.extend(joint, source, w, &v)?;
    }
    let joint = joint.permute(model.vertices())?;
    Ok(GlueSchedule {
        kind,
        order,
        steps: b.steps,
        joint,
    })
}

/// Chain construction; the graph must be a path.
pub fn chain_schedule(m: &MarginalModel, choices: &Choices) -> Result<GlueSchedule> {
    let path = m.graph().as_path().ok_or(Error::NotAPath)?;
    run(m, choices, ScheduleKind::Chain, path, None)
}

/// Star construction; every edge must touch one center vertex.
pub fn star_schedule(m: &MarginalModel, choices: &Choices) -> Result<GlueSchedule> {
    let (center, leaves) = m.graph().as_star().ok_or(Error::NotAStar)?;
    let mut order = vec![center.clone()];
    order.extend(leaves);
    run(m, choices, ScheduleKind::Star, order, Some(center))
}

/// General construction, rooted at the first vertex.
pub fn general_schedule(m: &MarginalModel, choices: &Choices) -> Result<GlueSchedule> {
    let g = m.graph();
    let order = g.bfs_order(&g.vertices()[0]);
    run(m, choices, ScheduleKind::Tree, order, None)
}

pub fn schedule_with(m: &MarginalModel, shape: ScheduleShape, choices: &Choices) -> Result<GlueSchedule> {
    match shape {
        ScheduleShape::Chain => chain_schedule(m, choices),
        ScheduleShape::Star => star_schedule(m, choices),
        ScheduleShape::Auto => {
            let g = m.graph();
            if g.as_path().is_some() {
                chain_schedule(m, choices)
            } else if g.as_star().is_some() {
                star_schedule(m, choices)
            } else {
                general_schedule(m, choices)
            }
        }
    }
}

/// Builds a full joint reproducing every edge of `m`.
pub fn tree_schedule(m: &MarginalModel, choices: &Choices) -> Result<(GlueSchedule, JointDist)> {
    let schedule = schedule_with(m, ScheduleShape::Auto, choices)?;
    let joint = schedule.joint.clone();
    Ok((schedule, joint))
}
