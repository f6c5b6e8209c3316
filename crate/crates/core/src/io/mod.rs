//! File formats: instances, choices, joints, and command results.
//!
//! Instance, choices and joint files are TOML documents. Every rational is
//! a string `"p/q"` or `"n"`, never a float. Results are plain text sections
//! with a JSON mirror. The grammars are documented in `docs/formats.md`.

mod choices;
mod instance;
mod joint;
mod result;

pub use choices::{format_choices, parse_choices};
pub use instance::{format_instance, parse_instance};
pub use joint::{format_joint, parse_joint};
pub use result::{ResultFile, Section, Value};

use serde::Deserialize;
use toml::Spanned;

use crate::error::{Error, Result};

pub const FORMAT_VERSION: i64 = 1;

/// Whether `label` uses only `[A-Za-z0-9_.-]` and is nonempty.
pub fn is_valid_label(label: &str) -> bool {
    !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

/// A variable label as written in a file: a string or a bare integer.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Text(String),
    Int(i64),
}

impl RawLabel {
    fn into_string(self) -> String {
        match self {
            RawLabel::Text(s) => s,
            RawLabel::Int(i) => i.to_string(),
        }
    }
}

/// 1-based line and column of byte `offset` in `text`.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, before[start..].chars().count() + 1)
}

/// Context for attaching positions to semantic errors.
struct Source<'a> {
    text: &'a str,
}

impl<'a> Source<'a> {
    fn parse<T: serde::de::DeserializeOwned>(text: &'a str) -> Result<(Self, T)> {
        let raw = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            Error::Syntax {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        Ok((Source { text }, raw))
    }

    fn locate<T>(&self, path: impl std::fmt::Display, item: &Spanned<T>) -> String {
        let (line, column) = line_col(self.text, item.span().start);
        format!("{path} (line {line}, column {column})")
    }

    fn version(&self, v: &Spanned<i64>) -> Result<()> {
        if *v.get_ref() == FORMAT_VERSION {
            Ok(())
        } else {
            Err(Error::Format(format!("unsupported version {}", v.get_ref())).at(self.locate("version", v)))
        }
    }

    fn labels(&self, field: &str, raw: Vec<Spanned<RawLabel>>) -> Result<Vec<String>> {
        let mut out: Vec<String> = Vec::with_capacity(raw.len());
        for (i, item) in raw.into_iter().enumerate() {
            let loc = self.locate(format_args!("{field}[{i}]"), &item);
            let label = item.into_inner().into_string();
            if !is_valid_label(&label) {
                return Err(Error::Format(format!("invalid label {label:?}")).at(loc));
            }
            if out.contains(&label) {
                return Err(Error::DuplicateLabel(label).at(loc));
            }
            out.push(label);
        }
        Ok(out)
    }

    fn rationals(&self, field: &str, raw: &[Spanned<String>]) -> Result<Vec<crate::Rational>> {
        raw.iter()
            .enumerate()
            .map(|(i, s)| {
                crate::parse_rational(s.get_ref()).map_err(|e| e.at(self.locate(format_args!("{field}[{i}]"), s)))
            })
            .collect()
    }
}

fn quoted(items: impl IntoIterator<Item = String>) -> String {
    let parts: Vec<String> = items.into_iter().map(|s| format!("\"{s}\"")).collect();
    format!("[{}]", parts.join(", "))
}
