//! Cycle-free graphs of binary variables carrying one pairwise distribution
//! per edge.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::dist::{JointDist, ProbReport};
use crate::error::{Error, Result};

/// A connected acyclic graph. Edges are stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeGraph {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    neighbors: HashMap<String, Vec<String>>,
}

fn oriented(u: &str, v: &str) -> (String, String) {
    if u <= v {
        (u.to_string(), v.to_string())
    } else {
        (v.to_string(), u.to_string())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

pub fn build_tree<S: AsRef<str>, T: AsRef<str>>(vertices: &[S], edges: &[(T, T)]) -> Result<TreeGraph> {
    TreeGraph::new(vertices, edges)
}

impl TreeGraph {
    pub fn new<S: AsRef<str>, T: AsRef<str>>(vertices: &[S], edges: &[(T, T)]) -> Result<Self> {
        let vertices: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(v.clone()));
            }
        }
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let mut uf = UnionFind((0..vertices.len()).collect());
        let mut seen = HashSet::new();
        let mut stored = Vec::with_capacity(edges.len());
        let mut neighbors: HashMap<String, Vec<String>> = vertices.iter().map(|v| (v.clone(), Vec::new())).collect();
        for (u, v) in edges {
            let (u, v) = (u.as_ref(), v.as_ref());
            let iu = *index.get(u).ok_or_else(|| Error::UnknownLabel(u.to_string()))?;
            let iv = *index.get(v).ok_or_else(|| Error::UnknownLabel(v.to_string()))?;
            if u == v {
                return Err(Error::SelfLoop(u.to_string()));
            }
            let e = oriented(u, v);
            if !seen.insert(e.clone()) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            if !uf.union(iu, iv) {
                return Err(Error::CycleDetected(u.to_string(), v.to_string()));
            }
            neighbors.get_mut(u).unwrap().push(v.to_string());
            neighbors.get_mut(v).unwrap().push(u.to_string());
            stored.push(e);
        }
        let components = (0..vertices.len()).map(|i| uf.find(i)).collect::<HashSet<_>>().len();
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
        // neighbor lists follow vertex order
        for list in neighbors.values_mut() {
            list.sort_by_key(|n| index[n]);
        }
        stored.sort();
        Ok(TreeGraph {
            vertices,
            edges: stored,
            neighbors,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(String, String)] {
        &self.edges
    }

    pub fn contains(&self, v: &str) -> bool {
        self.neighbors.contains_key(v)
    }

    pub fn neighbors(&self, v: &str) -> &[String] {
        self.neighbors.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: &str) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        self.neighbors(u).iter().any(|n| n == v)
    }

    /// Vertex sequence of the path, starting from whichever end comes first
    /// in vertex order.
    pub fn as_path(&self) -> Option<Vec<String>> {
        if self.vertices.iter().any(|v| self.degree(v) > 2) {
            return None;
        }
        let start = self.vertices.iter().find(|v| self.degree(v) == 1)?;
        let mut path = vec![start.clone()];
        let mut prev: Option<&str> = None;
        let mut cur = start.as_str();
        while let Some(next) = self.neighbors(cur).iter().find(|n| Some(n.as_str()) != prev) {
            path.push(next.clone());
            prev = Some(cur);
            cur = next;
        }
        Some(path)
    }

    /// `(center, leaves)` when every edge touches one center. A single edge
    /// is a star centered on its first vertex.
    pub fn as_star(&self) -> Option<(String, Vec<String>)> {
        let n = self.vertices.len();
        let center = self.vertices.iter().find(|v| self.degree(v) == n - 1)?;
        let leaves = self.vertices.iter().filter(|v| *v != center).cloned().collect();
        Some((center.clone(), leaves))
    }

    /// Breadth-first order from `root`; neighbors visited in vertex order.
    pub fn bfs_order(&self, root: &str) -> Vec<String> {
        let mut order = vec![root.to_string()];
        let mut seen: HashSet<&str> = HashSet::from([root]);
        let mut i = 0;
        while i < order.len() {
            let cur = order[i].clone();
            for n in self.neighbors(&cur) {
                if seen.insert(n) {
                    order.push(n.clone());
                }
            }
            i += 1;
        }
        order
    }
}

/// A tree with one pairwise distribution per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalModel {
    graph: TreeGraph,
    edge_dists: BTreeMap<(String, String), JointDist>,
}

impl MarginalModel {
    /// Each distribution's two variables name the edge it belongs to.
    pub fn new(graph: TreeGraph, dists: Vec<JointDist>) -> Result<Self> {
        let mut edge_dists = BTreeMap::new();
        for d in dists {
            if d.arity() != 2 {
                return Err(Error::EdgeMismatch(format!(
                    "distribution over {:?} is not pairwise",
                    d.vars()
                )));
            }
            let key = oriented(&d.vars()[0], &d.vars()[1]);
            if !graph.has_edge(&key.0, &key.1) {
                return Err(Error::EdgeMismatch(format!(
                    "({}, {}) is not an edge of the graph",
                    key.0, key.1
                )));
            }
            let d = d.permute(&[&key.0, &key.1])?;
            if edge_dists.insert(key.clone(), d).is_some() {
                return Err(Error::EdgeMismatch(format!(
                    "({}, {}) has two distributions",
                    key.0, key.1
                )));
            }
        }
        if let Some((u, v)) = graph.edges().iter().find(|e| !edge_dists.contains_key(*e)) {
            return Err(Error::EdgeMismatch(format!("({u}, {v}) has no distribution")));
        }
        Ok(MarginalModel { graph, edge_dists })
    }

    pub fn graph(&self) -> &TreeGraph {
        &self.graph
    }

    pub fn vertices(&self) -> &[String] {
        self.graph.vertices()
    }

    /// Edge distribution presented in the order `(u, v)`.
    pub fn edge_dist(&self, u: &str, v: &str) -> Result<JointDist> {
        let key = oriented(u, v);
        let d = self
            .edge_dists
            .get(&key)
            .ok_or_else(|| Error::EdgeMismatch(format!("({u}, {v}) is not an edge")))?;
        if u <= v {
            Ok(d.clone())
        } else {
            d.permute(&[u, v])
        }
    }

    /// Stored `(u, v, dist)` triples with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, &JointDist)> {
        self.edge_dists.iter().map(|((u, v), d)| (u.as_str(), v.as_str(), d))
    }

    pub fn check_consistency(&self) -> ProbReport {
        let mut report = ProbReport::default();
        for v in self.graph.vertices() {
            let mut incident = self.graph.neighbors(v).iter();
            let Some(first) = incident.next() else { continue };
            let reference = self.edge_dist(v, first).and_then(|d| d.marginalize(&[v]));
            let reference = reference.expect("stored edge contains its endpoints");
            for other in incident {
                let m = self.edge_dist(v, other).and_then(|d| d.marginalize(&[v]));
                let m = m.expect("stored edge contains its endpoints");
                for bit in 0..2 {
                    report.require_eq(
                        || format!("p({v}={bit}) via edge ({v}, {first}) = p({v}={bit}) via edge ({v}, {other})"),
                        &reference.probs()[bit],
                        &m.probs()[bit],
                    );
                }
            }
        }
        report
    }

    pub fn is_consistent(&self) -> bool {
        self.check_consistency().ok()
    }

    /// The single-variable distribution of `v`, agreed on by all incident edges.
    pub fn vertex_marginal(&self, v: &str) -> Result<JointDist> {
        if !self.graph.contains(v) {
            return Err(Error::UnknownLabel(v.to_string()));
        }
        let mut result: Option<JointDist> = None;
        for n in self.graph.neighbors(v) {
            let m = self.edge_dist(v, n)?.marginalize(&[v])?;
            match &result {
                Some(r) if *r != m => return Err(Error::InconsistentAtVertex(v.to_string())),
                Some(_) => {}
                None => result = Some(m),
            }
        }
        result.ok_or(Error::NoEdges)
    }
}
