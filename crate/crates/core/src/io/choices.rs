use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Deserialize;
use toml::Spanned;

use super::{quoted, Source, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::gluing::Policy;
use crate::rational::format_rational;
use crate::schedule::{Choices, StepChoice};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChoices {
    version: Spanned<i64>,
    default: Option<Spanned<String>>,
    #[serde(default)]
    steps: BTreeMap<String, Spanned<RawStep>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawStep {
    Policy(String),
    Params(Vec<String>),
}

fn policy(src: &Source, path: &str, name: &Spanned<String>) -> Result<Policy> {
    Policy::from_name(name.get_ref())
        .ok_or_else(|| Error::Format(format!("unknown policy {:?}", name.get_ref())).at(src.locate(path, name)))
}

/// Parses a choices file. Step keys are decimal step indices; each value is
/// a list of rationals or a policy name. Parameter values are checked
/// against each step's box when the schedule runs.
pub fn parse_choices(text: &str) -> Result<Choices> {
    let (src, raw) = Source::parse::<RawChoices>(text)?;
    src.version(&raw.version)?;
    let fallback = match &raw.default {
        Some(name) => policy(&src, "default", name)?,
        None => Policy::Canonical,
    };
    let mut steps = BTreeMap::new();
    for (key, value) in &raw.steps {
        let path = format!("steps.{key}");
        let index = key
            .parse::<usize>()
            .ok()
            .filter(|_| key.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::Format(format!("step key {key:?} is not an index")).at(src.locate(&path, value)))?;
        let choice = match value.get_ref() {
            RawStep::Policy(name) => {
                let spanned = Spanned::new(value.span(), name.clone());
                StepChoice::Policy(policy(&src, &path, &spanned)?)
            }
            RawStep::Params(items) => StepChoice::Explicit(
                crate::rational::parse_rationals(items).map_err(|e| e.at(src.locate(&path, value)))?,
            ),
        };
        if steps.insert(index, choice).is_some() {
            return Err(Error::Format(format!("step {index} listed twice")).at(src.locate(&path, value)));
        }
    }
    Ok(Choices::PerStep { steps, fallback })
}

/// Writes per-step or policy choices; `Matching` choices have no file form.
pub fn format_choices(choices: &Choices) -> Result<String> {
    let (steps, fallback) = match choices {
        Choices::Policy(p) => (BTreeMap::new(), *p),
        Choices::PerStep { steps, fallback } => (steps.clone(), *fallback),
        Choices::Matching(_) => return Err(Error::Format("matching choices cannot be written".into())),
    };
    let mut out = format!("version = {FORMAT_VERSION}\ndefault = \"{}\"\n", fallback.name());
    if !steps.is_empty() {
        out.push_str("\n[steps]\n");
    }
    for (i, choice) in steps {
        let value = match choice {
            StepChoice::Policy(p) => format!("\"{}\"", p.name()),
            StepChoice::Explicit(v) => quoted(v.iter().map(format_rational)),
        };
        let _ = writeln!(out, "{i} = {value}");
    }
    Ok(out)
}
