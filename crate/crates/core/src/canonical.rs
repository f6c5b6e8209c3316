//! The closed-form joint of a tree model: the product of all edge
//! distributions divided by each vertex marginal raised to `degree - 1`.
//!
//! When a vertex with degree at least two has probability zero at some
//! outcome, every incident edge is zero there too, and the entry is taken
//! to be zero.

use num_traits::{One, Zero};

use crate::dist::{outcome_bit, JointDist};
use crate::error::{Error, Result};
use crate::gluing::GlueFamily;
use crate::graph::MarginalModel;
use crate::rational::Rational;

/// Joint over `m.vertices()` in vertex order.
pub fn canonical_joint(m: &MarginalModel) -> Result<JointDist> {
    if !m.is_consistent() {
        return Err(Error::InconsistentModel);
    }
    let vars = m.vertices();
    let k = vars.len();
    let pos = |label: &str| vars.iter().position(|v| v == label).expect("edge endpoint is a vertex");

    let edges: Vec<(usize, usize, &JointDist)> = m.edges().map(|(u, v, d)| (pos(u), pos(v), d)).collect();
    let mut denominators = Vec::new();
    for (i, v) in vars.iter().enumerate() {
        let d = m.graph().degree(v);
        if d >= 2 {
            let marginal = m.vertex_marginal(v)?;
            let powers: Vec<Rational> = marginal.probs().iter().map(|p| p.pow((d - 1) as i32)).collect();
            denominators.push((i, powers));
        }
    }

    let probs = (0..1usize << k)
        .map(|index| {
            let mut den = Rational::one();
            for (i, powers) in &denominators {
                let p = &powers[outcome_bit(index, *i, k)];
                if p.is_zero() {
                    return Rational::zero();
                }
                den *= p;
            }
            let mut num = Rational::one();
            for (iu, iv, d) in &edges {
                num *= d.get(&[outcome_bit(index, *iu, k), outcome_bit(index, *iv, k)]);
                if num.is_zero() {
                    return num;
                }
            }
            num / den
        })
        .collect();
    JointDist::new(vars.to_vec(), probs)
}

/// Coordinates of [`canonical_joint`] in `family`'s parameters.
///
/// Fails with [`Error::NotCanonicalFamily`] when the family's inputs are not
/// themselves marginals of the canonical joint.
pub fn canonical_params(m: &MarginalModel, family: &GlueFamily) -> Result<Vec<Rational>> {
    let joint = canonical_joint(m)?;
    let restricted = joint.marginalize(family.vars())?;
    family.coordinates_of(&restricted).ok_or(Error::NotCanonicalFamily)
}
