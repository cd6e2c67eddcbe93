//! JSON configuration files mirroring the command-line flags.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// A scalar given either as a JSON number or as text (`"1/6"`, `"-A^2"`, `"[1, 2]"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarValue {
    Int(i64),
    Text(String),
}

impl ScalarValue {
    pub fn text(&self) -> String {
        match self {
            ScalarValue::Int(i) => i.to_string(),
            ScalarValue::Text(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentitiesConfig {
    pub genus: Option<u32>,
    pub closed: Option<bool>,
    pub suite: Option<String>,
    pub mutate: Option<bool>,
}

/// The representation file: `{p, genus, closed, x: {edge: scalar}, y: {...}, boundary}` plus checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepConfig {
    pub p: Option<u32>,
    pub genus: Option<u32>,
    pub closed: Option<bool>,
    #[serde(default)]
    pub x: BTreeMap<String, ScalarValue>,
    #[serde(default)]
    pub y: BTreeMap<String, ScalarValue>,
    pub boundary: Option<ScalarValue>,
    pub checks: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaConfig {
    pub genus: Option<u32>,
    pub closed: Option<bool>,
    pub expr: Option<String>,
}

pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
}

/// Splits `a0=2,a1=1/6,c1=[1, 2]` at top-level commas into `(edge, value)` pairs.
pub fn parse_assignments(text: &str) -> Result<BTreeMap<String, ScalarValue>, String> {
    let mut out = BTreeMap::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut items = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(&text[start..]);
    for item in items.into_iter().map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected `edge=value`, got `{item}`"))?;
        out.insert(k.trim().to_string(), ScalarValue::Text(v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments() {
        let m = parse_assignments("a0=2, a1=1/6,c1=[1, 2]").unwrap();
        assert_eq!(m["a1"].text(), "1/6");
        assert_eq!(m["c1"].text(), "[1, 2]");
        assert!(parse_assignments("a0").is_err());
    }

    #[test]
    fn rep_spec_json() {
        let c: RepConfig = serde_json::from_str(r#"{"p": 3, "genus": 2, "closed": true, "x": {"a0": 2, "a1": "5"}, "boundary": "1"}"#).unwrap();
        assert_eq!(c.x["a0"], ScalarValue::Int(2));
        assert_eq!(c.boundary.unwrap().text(), "1");
        assert!(serde_json::from_str::<RepConfig>(r#"{"q": 3}"#).is_err());
    }
}
