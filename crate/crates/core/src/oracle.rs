//! Independent checks for everything the constructive side produces.
//!
//! The feasibility oracle writes the marginal problem as `A z = b, z >= 0`
//! over the full joint vector and solves it with an exact phase-one simplex
//! (Bland's rule, rational pivots). It shares no code with the gluing
//! machinery.

use num_traits::{One, Signed, Zero};

use crate::dist::{outcome_bit, JointDist, ProbReport};
use crate::error::{Error, Result};
use crate::gluing::{GlueFamily, Interval, Policy};
use crate::graph::MarginalModel;
use crate::rational::Rational;

pub const DEFAULT_VERTEX_CAP: usize = 12;

/// Equality system over nonnegative unknowns. Rows are sparse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    pub vars: Vec<String>,
    pub num_unknowns: usize,
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

pub fn assemble_system(m: &MarginalModel) -> Result<LinearSystem> {
    assemble_system_capped(m, DEFAULT_VERTEX_CAP)
}

/// One unknown per full outcome (vertex order, most significant bit first),
/// one row per edge outcome, and the normalization row last.
pub fn assemble_system_capped(m: &MarginalModel, cap: usize) -> Result<LinearSystem> {
    let vars = m.vertices().to_vec();
    let k = vars.len();
    if k > cap {
        return Err(Error::TooLarge { vars: k, cap });
    }
    let n = 1usize << k;
    let pos = |l: &str| vars.iter().position(|v| v == l).expect("edge endpoint is a vertex");
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut labels = Vec::new();
    for (u, v, d) in m.edges() {
        let (pu, pv) = (pos(u), pos(v));
        for a in 0..2 {
            for b in 0..2 {
                let row = (0..n)
                    .filter(|&z| outcome_bit(z, pu, k) == a && outcome_bit(z, pv, k) == b)
                    .map(|z| (z, Rational::one()))
                    .collect();
                rows.push(row);
                rhs.push(d.probs()[(a << 1) | b].clone());
                labels.push(format!("p({u}={a}, {v}={b})"));
            }
        }
    }
    rows.push((0..n).map(|z| (z, Rational::one())).collect());
    rhs.push(Rational::one());
    labels.push("sum = 1".to_string());
    Ok(LinearSystem {
        vars,
        num_unknowns: n,
        rows,
        rhs,
        labels,
    })
}

impl LinearSystem {
    pub fn num_equations(&self) -> usize {
        self.rows.len()
    }

    fn dense(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .map(|row| {
                let mut dense = vec![Rational::zero(); self.num_unknowns];
                for (j, c) in row {
                    dense[*j] += c;
                }
                dense
            })
            .collect()
    }

    /// Exact substitution check: nonnegative and every row holds with equality.
    pub fn is_solution(&self, z: &[Rational]) -> bool {
        z.len() == self.num_unknowns
            && z.iter().all(|x| !x.is_negative())
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| {
                let lhs: Rational = row.iter().map(|(j, c)| c * &z[*j]).sum();
                &lhs == b
            })
    }

    pub fn rank(&self) -> usize {
        let mut a = self.dense();
        let cols = self.num_unknowns;
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, pivot);
            let src = a[rank].clone();
            for (r, line) in a.iter_mut().enumerate() {
                if r == rank || line[col].is_zero() {
                    continue;
                }
                let f = &line[col] / &src[col];
                for (d, s) in line.iter_mut().zip(&src).skip(col) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
            rank += 1;
            if rank == a.len() {
                break;
            }
        }
        rank
    }

    /// Dimension of the affine hull of solutions (ignoring signs).
    pub fn solution_dimension(&self) -> usize {
        self.num_unknowns - self.rank()
    }
}

/// Decides `A z = b, z >= 0` exactly.
pub fn feasible(sys: &LinearSystem) -> Result<Feasibility> {
    let n = sys.num_unknowns;
    let m = sys.rows.len();
    let width = n + m + 1;
    let rhs_col = n + m;

    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (i, (row, b)) in sys.dense().into_iter().zip(&sys.rhs).enumerate() {
        let mut line = row;
        line.resize(width, Rational::zero());
        line[n + i] = Rational::one();
        line[rhs_col] = b.clone();
        if b.is_negative() {
            for (j, x) in line.iter_mut().enumerate() {
                if j != n + i {
                    *x = -x.clone();
                }
            }
        }
        t.push(line);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of minimizing the sum of artificials
    let mut obj = vec![Rational::zero(); width];
    for line in &t {
        for j in (0..n).chain(std::iter::once(rhs_col)) {
            if !line[j].is_zero() {
                obj[j] -= &line[j];
            }
        }
    }

    // artificial columns never re-enter once they leave
    while let Some(enter) = (0..n).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, line) in t.iter().enumerate() {
            if !line[enter].is_positive() {
                continue;
            }
            let ratio = &line[rhs_col] / &line[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (row, _) = leave.expect("phase-one objective is bounded below");
        pivot(&mut t, &mut obj, row, enter);
        basis[row] = enter;
    }

    if !obj[rhs_col].is_zero() {
        return Ok(Feasibility::Infeasible);
    }
    let mut z = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            z[b] = t[i][rhs_col].clone();
        }
    }
    if !sys.is_solution(&z) {
        return Err(Error::WitnessRejected);
    }
    Ok(Feasibility::Feasible(z))
}

fn pivot(t: &mut [Vec<Rational>], obj: &mut [Rational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for x in t[row].iter_mut() {
        if !x.is_zero() {
            *x /= &p;
        }
    }
    let pivot_row = std::mem::take(&mut t[row]);
    let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    let eliminate = |line: &mut [Rational]| {
        let f = line[col].clone();
        if f.is_zero() {
            return;
        }
        for &j in &nonzero {
            line[j] -= &f * &pivot_row[j];
        }
    };
    for (i, line) in t.iter_mut().enumerate() {
        if i != row {
            eliminate(line);
        }
    }
    eliminate(obj);
    t[row] = pivot_row;
}

/// Scans parameter `coord` over `{i / resolution : i = 0..=resolution}` with
/// every other parameter fixed by `fixed`, and returns the smallest and largest
/// grid values whose reconstruction is a valid joint reproducing both inputs.
pub fn scan_interval(family: &GlueFamily, coord: usize, resolution: u32, fixed: Policy) -> Result<Option<Interval>> {
    if resolution == 0 {
        return Err(Error::ResolutionZero);
    }
    if coord >= family.num_params() {
        return Err(Error::NoSuchParam {
            coord,
            count: family.num_params(),
        });
    }
    let mut params = family.params_for(fixed);
    let (mut lo, mut hi) = (None, None);
    for i in 0..=resolution {
        params[coord] = Rational::new(i.into(), resolution.into());
        if admissible(family, &params)? {
            lo.get_or_insert_with(|| params[coord].clone());
            hi = Some(params[coord].clone());
        }
    }
    Ok(lo.zip(hi).map(|(lo, hi)| Interval::new(lo, hi)))
}

/// Whether `params` map to a nonnegative, normalized vector whose marginals
/// equal the family's two inputs.
pub fn admissible(family: &GlueFamily, params: &[Rational]) -> Result<bool> {
    let probs = family.evaluate(params)?;
    if probs.iter().any(|p| p.is_negative()) {
        return Ok(false);
    }
    let Ok(z) = JointDist::new(family.vars().to_vec(), probs) else {
        return Ok(false);
    };
    Ok(z.marginalize(family.left().vars())? == *family.left()
        && z.marginalize(family.right().vars())? == *family.right())
}

/// Checks that `j` is a distribution reproducing every edge of `m`.
pub fn verify_joint(j: &JointDist, m: &MarginalModel) -> ProbReport {
    verify_probs(j.vars(), j.probs(), m)
}

/// Like [`verify_joint`] for a raw vector that may not be a distribution.
pub fn verify_probs(vars: &[String], probs: &[Rational], m: &MarginalModel) -> ProbReport {
    let mut report = ProbReport::default();
    let k = vars.len();
    if probs.len() != 1usize << k {
        report.push(
            format!("vector length = 2^{k}"),
            Rational::from_integer(probs.len().into()),
            Rational::from_integer((1usize << k.min(63)).into()),
        );
        return report;
    }
    for (i, p) in probs.iter().enumerate() {
        if p.is_negative() {
            report.push(format!("entry {i} >= 0"), p.clone(), Rational::zero());
        }
    }
    let total: Rational = probs.iter().sum();
    report.require_eq(|| "sum = 1".to_string(), &total, &Rational::one());

    let pos = |l: &str| vars.iter().position(|v| v == l);
    for v in m.vertices() {
        if pos(v).is_none() {
            report.push(format!("vertex {v} present"), Rational::zero(), Rational::one());
        }
    }
    for (u, v, d) in m.edges() {
        let (Some(pu), Some(pv)) = (pos(u), pos(v)) else {
            continue;
        };
        let mut sums = vec![Rational::zero(); 4];
        for (z, p) in probs.iter().enumerate() {
            sums[(outcome_bit(z, pu, k) << 1) | outcome_bit(z, pv, k)] += p;
        }
        for (idx, (got, want)) in sums.iter().zip(d.probs()).enumerate() {
            report.require_eq(|| format!("p({u}={}, {v}={})", idx >> 1, idx & 1), got, want);
        }
    }
    report
}
