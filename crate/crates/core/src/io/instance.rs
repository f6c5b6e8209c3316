use std::fmt::Write;

use serde::Deserialize;
use toml::Spanned;

use super::{quoted, RawLabel, Source, FORMAT_VERSION};
use crate::dist::JointDist;
use crate::error::{Error, Result};
use crate::graph::{MarginalModel, TreeGraph};
use crate::rational::format_rational;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    version: Spanned<i64>,
    variables: Vec<Spanned<RawLabel>>,
    #[serde(default, rename = "edge")]
    edges: Vec<Spanned<RawEdge>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    u: Spanned<RawLabel>,
    v: Spanned<RawLabel>,
    dist: Spanned<Vec<Spanned<String>>>,
}

/// Parses an instance file into a validated model. The graph must be a tree
/// and every edge distribution must be a normalized joint over `(u, v)`.
/// Marginal consistency is not required.
pub fn parse_instance(text: &str) -> Result<MarginalModel> {
    let (src, raw) = Source::parse::<RawInstance>(text)?;
    src.version(&raw.version)?;
    let vars = src.labels("variables", raw.variables)?;
    let mut pairs = Vec::with_capacity(raw.edges.len());
    let mut dists = Vec::with_capacity(raw.edges.len());
    for (i, edge) in raw.edges.into_iter().enumerate() {
        let loc = src.locate(format_args!("edge[{i}]"), &edge);
        let edge = edge.into_inner();
        let mut ends = Vec::with_capacity(2);
        for (name, end) in [("u", edge.u), ("v", edge.v)] {
            let at = src.locate(format_args!("edge[{i}].{name}"), &end);
            let label = end.into_inner().into_string();
            if !vars.contains(&label) {
                return Err(Error::UnknownLabel(label).at(at));
            }
            ends.push(label);
        }
        let dist_loc = src.locate(format_args!("edge[{i}].dist"), &edge.dist);
        let entries = edge.dist.get_ref();
        if entries.len() != 4 {
            return Err(Error::LengthMismatch {
                vars: 2,
                expected: 4,
                actual: entries.len(),
            }
            .at(dist_loc));
        }
        let probs = src.rationals(&format!("edge[{i}].dist"), entries)?;
        if ends[0] == ends[1] {
            return Err(Error::SelfLoop(ends[0].clone()).at(loc));
        }
        dists.push(JointDist::new(ends.clone(), probs).map_err(|e| e.at(dist_loc))?);
        pairs.push((ends[0].clone(), ends[1].clone()));
    }
    let graph = TreeGraph::new(&vars, &pairs).map_err(|e| e.at("edge"))?;
    MarginalModel::new(graph, dists).map_err(|e| e.at("edge"))
}

/// Writes `m` in the instance format; `parse_instance` inverts it.
pub fn format_instance(m: &MarginalModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "version = {FORMAT_VERSION}");
    let _ = writeln!(out, "variables = {}", quoted(m.vertices().iter().cloned()));
    for (u, v, d) in m.edges() {
        let _ = write!(
            out,
            "\n[[edge]]\nu = \"{u}\"\nv = \"{v}\"\ndist = {}\n",
            quoted(d.probs().iter().map(format_rational))
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    const TWO: &str = "version = 1\nvariables = [\"a\", \"b\"]\n\n[[edge]]\nu = \"a\"\nv = \"b\"\ndist = [\"1\", \"0\", \"0\", \"0\"]\n";

    fn location_of(e: Error) -> String {
        match e {
            Error::Semantic { location, .. } => location,
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn deterministic_pair() {
        let m = parse_instance(TWO).unwrap();
        assert!(m.is_consistent());
        assert_eq!(m.edge_dist("a", "b").unwrap().probs()[0], ratio(1, 1));
        assert_eq!(format_instance(&m), TWO);
    }

    #[test]
    fn integer_labels() {
        let text =
            "version = 1\nvariables = [0, 1]\n[[edge]]\nu = 1\nv = 0\ndist = [\"1/4\", \"1/4\", \"1/4\", \"1/4\"]\n";
        let m = parse_instance(text).unwrap();
        assert_eq!(m.vertices(), ["0", "1"]);
        assert_eq!(parse_instance(&format_instance(&m)).unwrap(), m);
    }

    #[test]
    fn unnormalized() {
        let text = TWO.replace("\"1\", \"0\"", "\"1\", \"1/20\"");
        let err = parse_instance(&text).unwrap_err();
        assert!(location_of(err.clone()).starts_with("edge[0].dist (line 7"));
        let Error::Semantic { reason, .. } = err else {
            unreachable!()
        };
        assert!(matches!(*reason, Error::NotNormalized { .. }));
    }

    #[test]
    fn bad_rational_points_at_entry() {
        let text = TWO.replace("\"0\", \"0\", \"0\"]", "\"0\", \"x\", \"0\"]");
        assert!(location_of(parse_instance(&text).unwrap_err()).starts_with("edge[0].dist[2] (line 7"));
    }

    #[test]
    fn syntax_has_position() {
        let err = parse_instance("version = 1\nvariables = [\"a\"\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err:?}");
        let err = parse_instance("version = 1\nvariables = []\nextra = 3\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn structural_errors() {
        let cycle = "version = 1\nvariables = [\"a\", \"b\", \"c\"]\n\
            [[edge]]\nu = \"a\"\nv = \"b\"\ndist = [\"1\", \"0\", \"0\", \"0\"]\n\
            [[edge]]\nu = \"b\"\nv = \"c\"\ndist = [\"1\", \"0\", \"0\", \"0\"]\n\
            [[edge]]\nu = \"c\"\nv = \"a\"\ndist = [\"1\", \"0\", \"0\", \"0\"]\n";
        let Error::Semantic { reason, .. } = parse_instance(cycle).unwrap_err() else {
            panic!()
        };
        assert!(matches!(*reason, Error::CycleDetected(..)));

        let dup = TWO.to_string() + "[[edge]]\nu = \"b\"\nv = \"a\"\ndist = [\"1\", \"0\", \"0\", \"0\"]\n";
        let Error::Semantic { reason, .. } = parse_instance(&dup).unwrap_err() else {
            panic!()
        };
        assert!(matches!(*reason, Error::DuplicateEdge(..)));

        let unknown = TWO.replace("v = \"b\"", "v = \"z\"");
        assert!(location_of(parse_instance(&unknown).unwrap_err()).starts_with("edge[0].v"));

        let version = TWO.replace("version = 1", "version = 2");
        assert!(location_of(parse_instance(&version).unwrap_err()).starts_with("version"));

        let label = TWO.replace("\"a\", \"b\"]", "\"a b\", \"b\"]");
        assert!(location_of(parse_instance(&label).unwrap_err()).starts_with("variables[0]"));
    }
}
