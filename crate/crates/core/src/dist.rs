//! Probability vectors over ordered binary variables.
//!
//! An outcome of `k` variables is encoded as a 0-based index whose binary
//! representation is read most-significant-bit first against `vars`: the bit
//! for `vars[0]` is bit `k - 1`, the bit for `vars[k - 1]` is bit 0. A
//! 1-based entry number `m`, as used in hand-written tables, is index `m - 1`.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// Largest number of variables a dense vector may carry.
pub const MAX_VARS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JointDist {
    vars: Vec<String>,
    probs: Vec<Rational>,
}

/// Bit of variable `pos` (0 = most significant) in outcome `index` of a
/// `k`-variable vector.
#[inline]
pub fn outcome_bit(index: usize, pos: usize, k: usize) -> usize {
    (index >> (k - 1 - pos)) & 1
}

pub fn make_joint<S: AsRef<str>>(vars: &[S], probs: Vec<Rational>) -> Result<JointDist> {
    JointDist::new(vars.iter().map(|s| s.as_ref().to_string()).collect(), probs)
}

fn check_labels(vars: &[String]) -> Result<()> {
    if vars.is_empty() {
        return Err(Error::EmptyVariables);
    }
    if vars.len() > MAX_VARS {
        return Err(Error::TooLarge {
            vars: vars.len(),
            cap: MAX_VARS,
        });
    }
    let mut seen = HashSet::new();
    for v in vars {
        if !seen.insert(v.as_str()) {
            return Err(Error::DuplicateLabel(v.clone()));
        }
    }
    Ok(())
}

impl JointDist {
    pub fn new(vars: Vec<String>, probs: Vec<Rational>) -> Result<Self> {
        check_labels(&vars)?;
        let expected = 1usize << vars.len();
        if probs.len() != expected {
            return Err(Error::LengthMismatch {
                vars: vars.len(),
                expected,
                actual: probs.len(),
            });
        }
        if let Some((index, value)) = probs.iter().enumerate().find(|(_, p)| p.is_negative()) {
            return Err(Error::NegativeEntry {
                index,
                value: value.clone(),
            });
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotNormalized { sum });
        }
        Ok(JointDist { vars, probs })
    }

    /// Caller guarantees every invariant.
    pub(crate) fn from_parts(vars: Vec<String>, probs: Vec<Rational>) -> Self {
        debug_assert!(JointDist::new(vars.clone(), probs.clone()).is_ok());
        JointDist { vars, probs }
    }

    pub fn uniform<S: AsRef<str>>(vars: &[S]) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        check_labels(&vars)?;
        let n = 1usize << vars.len();
        let p = Rational::new(1.into(), (n as u64).into());
        Ok(JointDist {
            vars,
            probs: vec![p; n],
        })
    }

    pub fn point_mass<S: AsRef<str>>(vars: &[S], index: usize) -> Result<Self> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        check_labels(&vars)?;
        let n = 1usize << vars.len();
        let mut probs = vec![Rational::zero(); n];
        *probs.get_mut(index).ok_or(Error::LengthMismatch {
            vars: vars.len(),
            expected: n,
            actual: index + 1,
        })? = Rational::one();
        Ok(JointDist { vars, probs })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.probs
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    /// Index of the outcome that assigns `bits[i]` to `vars[i]`.
    pub fn index_of(bits: &[usize]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1))
    }

    pub fn get(&self, bits: &[usize]) -> &Rational {
        &self.probs[Self::index_of(bits)]
    }

    pub(crate) fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut seen = HashSet::new();
        labels
            .iter()
            .map(|l| {
                let l = l.as_ref();
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel(l.to_string()));
                }
                self.position(l).ok_or_else(|| Error::UnknownLabel(l.to_string()))
            })
            .collect()
    }

    /// Sums out every variable not in `keep`. The result is ordered as `keep`.
    pub fn marginalize<S: AsRef<str>>(&self, keep: &[S]) -> Result<JointDist> {
        if keep.is_empty() {
            return Err(Error::EmptyVariables);
        }
        let pos = self.positions(keep)?;
        let k = self.arity();
        let mut out = vec![Rational::zero(); 1 << pos.len()];
        for (index, p) in self.probs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let target = pos.iter().fold(0, |acc, &q| (acc << 1) | outcome_bit(index, q, k));
            out[target] += p;
        }
        Ok(JointDist::from_parts(
            keep.iter().map(|s| s.as_ref().to_string()).collect(),
            out,
        ))
    }

    /// Re-indexes the vector against `new_order`, a permutation of `vars`.
    pub fn permute<S: AsRef<str>>(&self, new_order: &[S]) -> Result<JointDist> {
        let not_perm = || Error::NotAPermutation(new_order.iter().map(|s| s.as_ref().to_string()).collect());
        if new_order.len() != self.arity() {
            return Err(not_perm());
        }
        let pos = self.positions(new_order).map_err(|_| not_perm())?;
        let probs = reorder_map(&pos)
            .into_iter()
            .map(|old| self.probs[old].clone())
            .collect();
        Ok(JointDist::from_parts(
            new_order.iter().map(|s| s.as_ref().to_string()).collect(),
            probs,
        ))
    }
}

/// `pos[i]` is the old position of the variable now at position `i`. Returns,
/// for every new outcome index, the old index of the same outcome.
pub(crate) fn reorder_map(pos: &[usize]) -> Vec<usize> {
    let k = pos.len();
    (0..1usize << k)
        .map(|j| (0..k).fold(0, |acc, i| acc | (outcome_bit(j, i, k) << (k - 1 - pos[i]))))
        .collect()
}

impl fmt::Display for JointDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({}) = ", self.vars.join(","))?;
        write_vector(f, &self.probs)
    }
}

pub(crate) fn write_vector(f: &mut impl fmt::Write, items: &[Rational]) -> fmt::Result {
    write!(f, "(")?;
    for (i, p) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{}", format_rational(p))?;
    }
    write!(f, ")")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub constraint: String,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of a check: empty `violations` means the check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbReport {
    pub violations: Vec<Violation>,
}

impl ProbReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, constraint: impl Into<String>, lhs: Rational, rhs: Rational) {
        self.violations.push(Violation {
            constraint: constraint.into(),
            lhs,
            rhs,
        });
    }

    /// Records a violation when `lhs != rhs`.
    pub(crate) fn require_eq(&mut self, constraint: impl FnOnce() -> String, lhs: &Rational, rhs: &Rational) {
        if lhs != rhs {
            self.push(constraint(), lhs.clone(), rhs.clone());
        }
    }
}
