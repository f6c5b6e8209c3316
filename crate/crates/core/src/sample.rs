//! Random instances: trees, rational joints, and the consistent models they
//! induce.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::dist::JointDist;
use crate::error::Result;
use crate::graph::{MarginalModel, TreeGraph};
use crate::rational::Rational;

/// A random labelled tree on `n >= 2` vertices named `v0, v1, ...`, built by
/// attaching each vertex to a uniformly chosen earlier one and then
/// shuffling the vertex list.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TreeGraph {
    assert!(n >= 2, "a tree needs at least two vertices");
    let mut labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(String, String)> = (1..n)
        .map(|i| (labels[rng.gen_range(0..i)].clone(), labels[i].clone()))
        .collect();
    labels.shuffle(rng);
    TreeGraph::new(&labels, &edges).expect("random attachment yields a tree")
}

/// A random joint with small integer weights (zeros included) normalized to 1.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, vars: &[String], max_weight: u32) -> JointDist {
    loop {
        let weights: Vec<u32> = (0..1usize << vars.len())
            .map(|_| rng.gen_range(0..=max_weight))
            .collect();
        let total: u64 = weights.iter().map(|&w| w as u64).sum();
        if total == 0 {
            continue;
        }
        let probs = weights.iter().map(|&w| Rational::new(w.into(), total.into())).collect();
        return JointDist::new(vars.to_vec(), probs).expect("weights normalize");
    }
}

/// The model whose edge distributions are the marginals of `joint`.
pub fn model_from_joint(graph: TreeGraph, joint: &JointDist) -> Result<MarginalModel> {
    let dists = graph
        .edges()
        .iter()
        .map(|(u, v)| joint.marginalize(&[u, v]))
        .collect::<Result<Vec<_>>>()?;
    MarginalModel::new(graph, dists)
}

/// A consistent model on a random tree with `n` vertices, together with the
/// joint it was marginalized from.
pub fn random_consistent_model<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (MarginalModel, JointDist) {
    let graph = random_tree(rng, n);
    let joint = random_joint(rng, graph.vertices(), 6);
    let model = model_from_joint(graph, &joint).expect("marginals of a joint fit its tree");
    (model, joint)
}

/// A copy of `m` whose edge `(v, w)` is replaced by a random distribution that
/// changes the marginal of `v`, where `v` has degree at least two. Returns
/// `None` when no vertex has degree two or more.
pub fn perturb_at_vertex<R: Rng + ?Sized>(rng: &mut R, m: &MarginalModel) -> Option<MarginalModel> {
    let g = m.graph();
    let hubs: Vec<&String> = g.vertices().iter().filter(|v| g.degree(v) >= 2).collect();
    let v = (*hubs.choose(rng)?).clone();
    let w = g.neighbors(&v).choose(rng)?.clone();
    let current = m.vertex_marginal(&v).ok()?;
    let vars = [v.clone(), w.clone()];
    let replacement = loop {
        let d = random_joint(rng, &vars, 6);
        if d.marginalize(&[&v]).ok()? != current {
            break d;
        }
    };
    let dists = m
        .edges()
        .map(|(a, b, d)| {
            if (a == v && b == w) || (a == w && b == v) {
                replacement.clone()
            } else {
                d.clone()
            }
        })
        .collect();
    MarginalModel::new(g.clone(), dists).ok()
}
