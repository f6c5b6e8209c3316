//! Gluing two joint distributions that agree on a shared set of variables.
//!
//! Let `X` be a joint over `S ∪ {x}` and `Y` a joint over `S ∪ {y}`. Every
//! joint `Z` over `(x, S, y)` reproducing both splits, for each outcome `o` of
//! `S`, into a 2×2 table with row sums `X(·, o)` and column sums `Y(o, ·)`.
//! Such a table has one degree of freedom, taken to be `t = Z(x=0, o, y=0)`:
//!
//! ```text
//! Z(0, o, 0) = t
//! Z(0, o, 1) = X(0, o) - t
//! Z(1, o, 0) = Y(o, 0) - t
//! Z(1, o, 1) = X(1, o) - Y(o, 0) + t
//! ```
//!
//! and nonnegativity of the four cells is exactly
//! `max(0, X(0,o) - Y(o,1), Y(o,0) - X(1,o)) <= t <= min(X(0,o), Y(o,0))`.
//! The tables are independent, so the admissible parameters form a box.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::dist::{reorder_map, JointDist};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

/// Closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, value: &Rational) -> bool {
        &self.lo <= value && value <= &self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}

/// Entry value `constant + coeff * params[param]`, with `coeff` in {-1, 0, 1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineEntry {
    pub constant: Rational,
    pub param: usize,
    pub coeff: i8,
}

impl AffineEntry {
    fn eval(&self, params: &[Rational]) -> Rational {
        match self.coeff {
            0 => self.constant.clone(),
            1 => &self.constant + &params[self.param],
            _ => &self.constant - &params[self.param],
        }
    }
}

/// How to pick a point of a family's parameter box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Policy {
    /// The point where `x` and `y` are independent given the overlap.
    Canonical,
    Midpoint,
    Lower,
    Upper,
}

impl Policy {
    pub const ALL: [Policy; 4] = [Policy::Canonical, Policy::Midpoint, Policy::Lower, Policy::Upper];

    pub fn name(self) -> &'static str {
        match self {
            Policy::Canonical => "canonical",
            Policy::Midpoint => "midpoint",
            Policy::Lower => "lower",
            Policy::Upper => "upper",
        }
    }

    pub fn from_name(name: &str) -> Option<Policy> {
        Policy::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// All joints reproducing two overlapping inputs, as an affine image of a box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueFamily {
    vars: Vec<String>,
    param_coords: Vec<usize>,
    bounds: Vec<Interval>,
    entries: Vec<AffineEntry>,
    left: JointDist,
    right: JointDist,
    overlap: Vec<String>,
    /// Per parameter: the overlap outcome's conditional-independence value.
    independent: Vec<Rational>,
}

/// Builds the family of joints over `(x, S, y)` whose marginals on `S ∪ {x}`
/// and `S ∪ {y}` are `left` and `right`. `S` is taken in `left`'s order.
pub fn glue_pair<S: AsRef<str>>(left: &JointDist, right: &JointDist, overlap: &[S]) -> Result<GlueFamily> {
    let collision = |msg: String| Err(Error::VariableCollision(msg));
    let shared: Vec<&str> = overlap.iter().map(|s| s.as_ref()).collect();
    for (i, s) in shared.iter().enumerate() {
        if shared[..i].contains(s) {
            return Err(Error::DuplicateLabel(s.to_string()));
        }
        if !left.contains(s) || !right.contains(s) {
            return collision(format!("overlap variable {s:?} missing from an input"));
        }
    }
    let extra = |d: &JointDist| -> Vec<String> {
        d.vars()
            .iter()
            .filter(|v| !shared.contains(&v.as_str()))
            .cloned()
            .collect()
    };
    let (lx, ry) = (extra(left), extra(right));
    if lx.len() != 1 || ry.len() != 1 {
        return collision(format!(
            "each input needs exactly one variable outside the overlap (left has {lx:?}, right has {ry:?})"
        ));
    }
    let (x, y) = (&lx[0], &ry[0]);
    if x == y {
        return collision(format!("both inputs extend the overlap by {x:?}"));
    }

    let s_order: Vec<String> = left.vars().iter().filter(|v| *v != x).cloned().collect();
    if !s_order.is_empty() && left.marginalize(&s_order)? != right.marginalize(&s_order)? {
        return Err(Error::OverlapMismatch);
    }

    let mut x_first = vec![x.clone()];
    x_first.extend(s_order.iter().cloned());
    let mut y_last = s_order.clone();
    y_last.push(y.clone());
    let xs = left.permute(&x_first)?;
    let ys = right.permute(&y_last)?;
    let (xs, ys) = (xs.probs(), ys.probs());

    let s = s_order.len();
    let blocks = 1usize << s;
    let idx = |a: usize, o: usize, b: usize| (a << (s + 1)) | (o << 1) | b;
    let zero = Rational::zero();

    let mut entries = vec![
        AffineEntry {
            constant: zero.clone(),
            param: 0,
            coeff: 0
        };
        blocks * 4
    ];
    let mut param_coords = Vec::with_capacity(blocks);
    let mut bounds = Vec::with_capacity(blocks);
    let mut independent = Vec::with_capacity(blocks);
    for o in 0..blocks {
        let (x0, x1) = (&xs[o], &xs[blocks | o]);
        let (y0, y1) = (&ys[o << 1], &ys[(o << 1) | 1]);
        let at = |constant: Rational, coeff: i8| AffineEntry {
            constant,
            param: o,
            coeff,
        };
        entries[idx(0, o, 0)] = at(zero.clone(), 1);
        entries[idx(0, o, 1)] = at(x0.clone(), -1);
        entries[idx(1, o, 0)] = at(y0.clone(), -1);
        entries[idx(1, o, 1)] = at(x1 - y0, 1);
        param_coords.push(idx(0, o, 0));

        let lo = [zero.clone(), x0 - y1, y0 - x1].into_iter().max().unwrap();
        let hi = x0.min(y0).clone();
        bounds.push(Interval::new(lo, hi));

        let mass = x0 + x1;
        independent.push(if mass.is_zero() { zero.clone() } else { x0 * y0 / mass });
    }

    let mut vars = x_first;
    vars.push(y.clone());
    Ok(GlueFamily {
        vars,
        param_coords,
        bounds,
        entries,
        left: left.clone(),
        right: right.clone(),
        overlap: s_order,
        independent,
    })
}

impl GlueFamily {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Entry index (in `vars` order) of each free parameter, one per overlap
    /// outcome in the overlap's own index order.
    pub fn param_coords(&self) -> &[usize] {
        &self.param_coords
    }

    pub fn bounds(&self) -> &[Interval] {
        &self.bounds
    }

    pub fn entries(&self) -> &[AffineEntry] {
        &self.entries
    }

    pub fn left(&self) -> &JointDist {
        &self.left
    }

    pub fn right(&self) -> &JointDist {
        &self.right
    }

    pub fn overlap(&self) -> &[String] {
        &self.overlap
    }

    pub fn num_params(&self) -> usize {
        self.param_coords.len()
    }

    pub fn is_nonempty(&self) -> bool {
        self.bounds.iter().all(|b| !b.is_empty())
    }

    /// Applies the affine map without any box or sign check.
    pub fn evaluate(&self, params: &[Rational]) -> Result<Vec<Rational>> {
        if params.len() != self.num_params() {
            return Err(Error::ParamCount {
                expected: self.num_params(),
                actual: params.len(),
            });
        }
        Ok(self.entries.iter().map(|e| e.eval(params)).collect())
    }

    pub fn contains(&self, params: &[Rational]) -> bool {
        params.len() == self.num_params() && self.bounds.iter().zip(params).all(|(b, p)| b.contains(p))
    }

    pub fn check_params(&self, params: &[Rational]) -> Result<()> {
        if params.len() != self.num_params() {
            return Err(Error::ParamCount {
                expected: self.num_params(),
                actual: params.len(),
            });
        }
        for (index, (b, value)) in self.bounds.iter().zip(params).enumerate() {
            if !b.contains(value) {
                return Err(Error::ParamOutOfBox {
                    index,
                    value: value.clone(),
                    allowed: Box::new(b.clone()),
                });
            }
        }
        Ok(())
    }

    pub fn reconstruct(&self, params: &[Rational]) -> Result<JointDist> {
        self.check_params(params)?;
        let probs = self.evaluate(params)?;
        debug_assert!(probs.iter().all(|p| !p.is_negative()));
        JointDist::new(self.vars.clone(), probs)
    }

    pub fn lower(&self) -> Vec<Rational> {
        self.bounds.iter().map(|b| b.lo.clone()).collect()
    }

    pub fn upper(&self) -> Vec<Rational> {
        self.bounds.iter().map(|b| b.hi.clone()).collect()
    }

    pub fn midpoint(&self) -> Vec<Rational> {
        self.bounds.iter().map(Interval::midpoint).collect()
    }

    /// Parameters making `x` and `y` independent given the overlap.
    pub fn independent_params(&self) -> Vec<Rational> {
        self.independent.clone()
    }

    pub fn params_for(&self, policy: Policy) -> Vec<Rational> {
        match policy {
            Policy::Canonical => self.independent_params(),
            Policy::Midpoint => self.midpoint(),
            Policy::Lower => self.lower(),
            Policy::Upper => self.upper(),
        }
    }

    /// Parameters of `joint` if it belongs to the family. `joint` may list the
    /// family's variables in any order.
    pub fn coordinates_of(&self, joint: &JointDist) -> Option<Vec<Rational>> {
        let joint = joint.permute(&self.vars).ok()?;
        if joint.marginalize(self.left.vars()).ok()? != self.left
            || joint.marginalize(self.right.vars()).ok()? != self.right
        {
            return None;
        }
        let params: Vec<Rational> = self.param_coords.iter().map(|&c| joint.probs()[c].clone()).collect();
        debug_assert_eq!(self.evaluate(&params).ok()?, joint.probs());
        Some(params)
    }

    /// The same family with entries listed against `new_order`.
    pub fn permuted<S: AsRef<str>>(&self, new_order: &[S]) -> Result<GlueFamily> {
        let names: Vec<String> = new_order.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() != self.vars.len() {
            return Err(Error::NotAPermutation(names));
        }
        let pos = names
            .iter()
            .map(|n| self.vars.iter().position(|v| v == n))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::NotAPermutation(names.clone()))?;
        let map = reorder_map(&pos);
        let mut inverse = vec![usize::MAX; map.len()];
        for (new, &old) in map.iter().enumerate() {
            inverse[old] = new;
        }
        if inverse.contains(&usize::MAX) {
            return Err(Error::NotAPermutation(names));
        }
        Ok(GlueFamily {
            entries: map.iter().map(|&old| self.entries[old].clone()).collect(),
            param_coords: self.param_coords.iter().map(|&c| inverse[c]).collect(),
            vars: names,
            ..self.clone()
        })
    }
}
