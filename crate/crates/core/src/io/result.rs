//! Command output: an echoed command line followed by named sections of
//! `key: value` lines.
//!
//! ```text
//! command: ["treejoint", "canonical", "star.toml"]
//!
//! [canonical]
//! vars: {0, 1, 2, 3}
//! joint: (4/225, 4/75, ...)
//! ```
//!
//! A value is a JSON string, a rational, a vector `(a, b, ...)`, an interval
//! `[lo, hi]`, a label set `{a, b, ...}`, or `true`/`false`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::Interval;
use crate::io::is_valid_label;
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Text(String),
    Rational(Rational),
    Vector(Vec<Rational>),
    Interval(Interval),
    Labels(Vec<String>),
    Bool(bool),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, Value)>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.entries.push((key.into(), value));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultFile {
    pub command: Vec<String>,
    pub sections: Vec<Section>,
}

fn is_valid_key(key: &str) -> bool {
    !key.is_empty()
        && key
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'-'))
}

fn is_valid_section(name: &str) -> bool {
    !name.is_empty() && name.trim() == name && name.chars().all(|c| !c.is_control() && c != '[' && c != ']')
}

fn join(items: &[Rational]) -> String {
    items.iter().map(format_rational).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Text(s) => write!(f, "{}", serde_json::to_string(s).map_err(|_| fmt::Error)?),
            Value::Rational(r) => write!(f, "{r}"),
            Value::Vector(v) => write!(f, "({})", join(v)),
            Value::Interval(i) => write!(f, "[{}, {}]", i.lo, i.hi),
            Value::Labels(l) => write!(f, "{{{}}}", l.join(", ")),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl ResultFile {
    pub fn new<S: AsRef<str>>(command: &[S]) -> Self {
        ResultFile {
            command: command.iter().map(|s| s.as_ref().to_string()).collect(),
            sections: Vec::new(),
        }
    }

    pub fn section(&mut self, name: impl Into<String>) -> &mut Section {
        self.sections.push(Section::new(name));
        self.sections.last_mut().expect("just pushed")
    }

    pub fn find(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// Checks that section names, keys and labels are in their charsets.
    pub fn validate(&self) -> Result<()> {
        for s in &self.sections {
            if !is_valid_section(&s.name) {
                return Err(Error::Format(format!("invalid section name {:?}", s.name)));
            }
            for (k, v) in &s.entries {
                if !is_valid_key(k) {
                    return Err(Error::Format(format!("invalid key {k:?}")));
                }
                if let Value::Labels(ls) = v {
                    if let Some(bad) = ls.iter().find(|l| !is_valid_label(l)) {
                        return Err(Error::Format(format!("invalid label {bad:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Every rational in the file, in order of appearance.
    pub fn rationals(&self) -> Vec<&Rational> {
        let mut out = Vec::new();
        for (_, v) in self.sections.iter().flat_map(|s| &s.entries) {
            match v {
                Value::Rational(r) => out.push(r),
                Value::Vector(xs) => out.extend(xs),
                Value::Interval(i) => out.extend([&i.lo, &i.hi]),
                _ => {}
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse_text(text: &str) -> Result<ResultFile> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let syntax = |line: usize, column: usize, message: &str| Error::Syntax {
            line,
            column,
            message: message.to_string(),
        };
        let command = match lines.next() {
            Some((n, l)) => {
                let rest = l
                    .strip_prefix("command: ")
                    .ok_or_else(|| syntax(n, 1, "expected `command: [...]`"))?;
                serde_json::from_str::<Vec<String>>(rest)
                    .map_err(|e| syntax(n, 10 + e.column().saturating_sub(1), &e.to_string()))?
            }
            None => return Err(syntax(1, 1, "empty result")),
        };
        let mut out = ResultFile {
            command,
            sections: Vec::new(),
        };
        for (n, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
                if !is_valid_section(name) {
                    return Err(syntax(n, 2, "invalid section name"));
                }
                out.sections.push(Section::new(name));
                continue;
            }
            let section = out
                .sections
                .last_mut()
                .ok_or_else(|| syntax(n, 1, "entry before any section"))?;
            let (key, raw) = line
                .split_once(": ")
                .ok_or_else(|| syntax(n, 1, "expected `key: value`"))?;
            if !is_valid_key(key) {
                return Err(syntax(n, 1, "invalid key"));
            }
            let column = key.chars().count() + 3;
            let value = parse_value(raw).map_err(|m| syntax(n, column, &m))?;
            section.entries.push((key.to_string(), value));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonDoc {
            command: self.command.clone(),
            sections: self
                .sections
                .iter()
                .map(|s| JsonSection {
                    name: s.name.clone(),
                    entries: s.entries.iter().map(|(k, v)| (k.clone(), JsonValue::from(v))).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn parse_json(text: &str) -> Result<ResultFile> {
        let doc: JsonDoc = serde_json::from_str(text).map_err(|e| Error::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut out = ResultFile::new(&doc.command);
        for s in doc.sections {
            let section = out.section(s.name);
            for (k, v) in s.entries {
                section.push(k, v.into_value()?);
            }
        }
        out.validate()?;
        Ok(out)
    }
}

impl fmt::Display for ResultFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let command = serde_json::to_string(&self.command).map_err(|_| fmt::Error)?;
        writeln!(f, "command: {command}")?;
        for s in &self.sections {
            writeln!(f, "\n[{}]", s.name)?;
            for (k, v) in &s.entries {
                writeln!(f, "{k}: {v}")?;
            }
        }
        Ok(())
    }
}

fn parse_list(inner: &str) -> Vec<&str> {
    if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(", ").collect()
    }
}

fn rationals_of(inner: &str) -> std::result::Result<Vec<Rational>, String> {
    parse_list(inner)
        .into_iter()
        .map(|s| parse_rational(s).map_err(|e| e.to_string()))
        .collect()
}

fn parse_value(raw: &str) -> std::result::Result<Value, String> {
    let inside = |open: char, close: char| raw.strip_prefix(open).and_then(|r| r.strip_suffix(close));
    if raw.starts_with('"') {
        return serde_json::from_str::<String>(raw)
            .map(Value::Text)
            .map_err(|e| e.to_string());
    }
    if let Some(inner) = inside('(', ')') {
        return rationals_of(inner).map(Value::Vector);
    }
    if let Some(inner) = inside('[', ']') {
        return match rationals_of(inner)?.as_slice() {
            [lo, hi] => Ok(Value::Interval(Interval::new(lo.clone(), hi.clone()))),
            _ => Err("an interval has two endpoints".into()),
        };
    }
    if let Some(inner) = inside('{', '}') {
        let labels = parse_list(inner);
        if let Some(bad) = labels.iter().find(|l| !is_valid_label(l)) {
            return Err(format!("invalid label {bad:?}"));
        }
        return Ok(Value::Labels(labels.into_iter().map(String::from).collect()));
    }
    match raw {
        "true" => Ok(Value::Bool(true)),
        "false" => Ok(Value::Bool(false)),
        _ => parse_rational(raw).map(Value::Rational).map_err(|e| e.to_string()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDoc {
    command: Vec<String>,
    sections: Vec<JsonSection>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSection {
    name: String,
    entries: Vec<(String, JsonValue)>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
enum JsonValue {
    Text(String),
    Rational(String),
    Vector(Vec<String>),
    Interval([String; 2]),
    Labels(Vec<String>),
    Bool(bool),
}

impl From<&Value> for JsonValue {
    fn from(v: &Value) -> Self {
        let strings = |xs: &[Rational]| xs.iter().map(format_rational).collect();
        match v {
            Value::Text(s) => JsonValue::Text(s.clone()),
            Value::Rational(r) => JsonValue::Rational(format_rational(r)),
            Value::Vector(xs) => JsonValue::Vector(strings(xs)),
            Value::Interval(i) => JsonValue::Interval([format_rational(&i.lo), format_rational(&i.hi)]),
            Value::Labels(l) => JsonValue::Labels(l.clone()),
            Value::Bool(b) => JsonValue::Bool(*b),
        }
    }
}

impl JsonValue {
    fn into_value(self) -> Result<Value> {
        let parse_all = |xs: &[String]| xs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        Ok(match self {
            JsonValue::Text(s) => Value::Text(s),
            JsonValue::Rational(r) => Value::Rational(parse_rational(&r)?),
            JsonValue::Vector(xs) => Value::Vector(parse_all(&xs)?),
            JsonValue::Interval([lo, hi]) => Value::Interval(Interval::new(parse_rational(&lo)?, parse_rational(&hi)?)),
            JsonValue::Labels(l) => Value::Labels(l),
            JsonValue::Bool(b) => Value::Bool(b),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn sample() -> ResultFile {
        let mut r = ResultFile::new(&["treejoint", "bounds", "a file.toml"]);
        r.section("step 0")
            .push("vars", Value::Labels(vec!["1".into(), "0".into(), "2".into()]))
            .push("X2", Value::Interval(Interval::new(ratio(0, 1), ratio(1, 5))))
            .push("note", Value::Text("quote \" and: colon".into()));
        r.section("joint")
            .push("probs", Value::Vector(vec![ratio(1, 20), ratio(-3, 7)]))
            .push("empty", Value::Vector(vec![]))
            .push("mass", Value::Rational(ratio(1, 1)))
            .push("ok", Value::Bool(false))
            .push("none", Value::Labels(vec![]));
        r
    }

    #[test]
    fn text_round_trip() {
        let r = sample();
        r.validate().unwrap();
        let text = r.to_text();
        assert!(text.contains("X2: [0, 1/5]\n"));
        assert!(text.contains("probs: (1/20, -3/7)\n"));
        assert_eq!(ResultFile::parse_text(&text).unwrap(), r);
    }

    #[test]
    fn json_round_trip_matches_text() {
        let r = sample();
        let back = ResultFile::parse_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(
            back.rationals(),
            ResultFile::parse_text(&r.to_text()).unwrap().rationals()
        );
    }

    #[test]
    fn text_errors_have_positions() {
        let err = ResultFile::parse_text("command: []\n\n[s]\nk: (1, x)\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, column: 4, .. }), "{err:?}");
        assert!(ResultFile::parse_text("command: []\nk: 1\n").is_err());
        assert!(ResultFile::parse_text("nothing").is_err());
        assert!(ResultFile::parse_text("command: []\n[s]\nk: [1]\n").is_err());
    }
}
