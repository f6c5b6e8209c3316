use serde::Deserialize;
use toml::Spanned;

use super::{quoted, RawLabel, Source, FORMAT_VERSION};
use crate::dist::JointDist;
use crate::error::Result;
use crate::rational::format_rational;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    version: Spanned<i64>,
    variables: Vec<Spanned<RawLabel>>,
    probs: Spanned<Vec<Spanned<String>>>,
}

/// Parses a joint file: `variables` in bit order (first is most significant)
/// and `probs` with one rational per outcome.
pub fn parse_joint(text: &str) -> Result<JointDist> {
    let (src, raw) = Source::parse::<RawJoint>(text)?;
    src.version(&raw.version)?;
    let vars = src.labels("variables", raw.variables)?;
    let loc = src.locate("probs", &raw.probs);
    let probs = src.rationals("probs", raw.probs.get_ref())?;
    JointDist::new(vars, probs).map_err(|e| e.at(loc))
}

pub fn format_joint(j: &JointDist) -> String {
    format!(
        "version = {FORMAT_VERSION}\nvariables = {}\nprobs = {}\n",
        quoted(j.vars().iter().cloned()),
        quoted(j.probs().iter().map(format_rational))
    )
}
