//! Quiver description files.
//!
//! ```json
//! {
//!   "vertices": ["1", "2", "3"],
//!   "arrows": [{"name": "h1", "from": "1", "to": "2"}, {"name": "h3", "from": "3", "to": "2"}],
//!   "aut_vertices": {"1": "3", "2": "2", "3": "1"},
//!   "aut_arrows": {"h1": "h3", "h3": "h1"},
//!   "p": 2,
//!   "e": 1
//! }
//! ```
//!
//! Missing automorphism entries map to themselves.

use std::collections::BTreeMap;

use hallq::quiver::Arrow;
use hallq::{DimVector, QuiverWithAut};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpecFile {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub aut_vertices: BTreeMap<String, String>,
    #[serde(default)]
    pub aut_arrows: BTreeMap<String, String>,
    pub p: u32,
    pub e: u32,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

/// 1-based line of the first occurrence of `"needle"`, or 1.
fn line_of(text: &str, needle: &str) -> usize {
    let quoted = format!("\"{needle}\"");
    text.find(&quoted).map_or(1, |pos| text[..pos].matches('\n').count() + 1)
}

/// A parsed quiver in canonical (name-sorted) order, remembering how the
/// declaration order maps onto it.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub spec: QuiverSpecFile,
    pub quiver: QuiverWithAut,
    /// `canonical_index[k]` is the canonical position of the `k`-th declared vertex.
    pub canonical_index: Vec<usize>,
}

impl QuiverSpecFile {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        serde_json::from_str(text).map_err(|e| SpecError { line: e.line().max(1), message: e.to_string() })
    }

    /// Vertices and arrows sorted by name, automorphisms as sorted maps.
    pub fn canonical(&self) -> QuiverSpecFile {
        let mut vertices = self.vertices.clone();
        vertices.sort();
        let mut arrows = self.arrows.clone();
        arrows.sort_by(|a, b| a.name.cmp(&b.name));
        let fill = |names: Vec<&String>, map: &BTreeMap<String, String>| -> BTreeMap<String, String> {
            names.into_iter().map(|n| (n.clone(), map.get(n).unwrap_or(n).clone())).collect()
        };
        QuiverSpecFile {
            aut_vertices: fill(vertices.iter().collect(), &self.aut_vertices),
            aut_arrows: fill(arrows.iter().map(|a| &a.name).collect(), &self.aut_arrows),
            vertices,
            arrows,
            p: self.p,
            e: self.e,
        }
    }

    pub fn ingest(&self, text: &str) -> Result<Ingested, SpecError> {
        let err = |needle: &str, message: String| SpecError { line: line_of(text, needle), message };
        let canon = self.canonical();
        let vindex: BTreeMap<&str, usize> = canon.vertices.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        if vindex.len() != canon.vertices.len() {
            return Err(err("vertices", "duplicate vertex name".into()));
        }
        let hindex: BTreeMap<&str, usize> =
            canon.arrows.iter().enumerate().map(|(k, a)| (a.name.as_str(), k)).collect();
        if hindex.len() != canon.arrows.len() {
            return Err(err("arrows", "duplicate arrow name".into()));
        }
        let vertex = |name: &str| vindex.get(name).copied().ok_or_else(|| err(name, format!("unknown vertex {name:?}")));
        let arrow = |name: &str| hindex.get(name).copied().ok_or_else(|| err(name, format!("unknown arrow {name:?}")));

        for key in self.aut_vertices.keys() {
            vertex(key)?;
        }
        for key in self.aut_arrows.keys() {
            arrow(key)?;
        }
        let mut arrows = Vec::new();
        for a in &canon.arrows {
            arrows.push(Arrow { name: a.name.clone(), source: vertex(&a.from)?, target: vertex(&a.to)? });
        }
        let mut aut_v = Vec::new();
        for v in &canon.vertices {
            aut_v.push(vertex(&canon.aut_vertices[v])?);
        }
        let mut aut_h = Vec::new();
        for a in &canon.arrows {
            aut_h.push(arrow(&canon.aut_arrows[&a.name])?);
        }
        let quiver = QuiverWithAut::new(canon.vertices.clone(), arrows, aut_v, aut_h)
            .map_err(|e| err("aut_vertices", e.to_string()))?;
        quiver.validate().map_err(|e| err("arrows", e.to_string()))?;
        let canonical_index = self.vertices.iter().map(|v| vindex[v.as_str()]).collect();
        Ok(Ingested { spec: self.clone(), quiver, canonical_index })
    }
}

impl Ingested {
    pub fn from_text(text: &str) -> Result<Self, SpecError> {
        QuiverSpecFile::parse(text)?.ingest(text)
    }

    /// Declared-order entries to canonical order.
    pub fn to_canonical(&self, declared: &[u32]) -> Option<Vec<u32>> {
        if declared.len() != self.canonical_index.len() {
            return None;
        }
        let mut out = vec![0; declared.len()];
        for (k, &c) in self.canonical_index.iter().enumerate() {
            out[c] = declared[k];
        }
        Some(out)
    }

    /// Canonical dimension vector rendered in declaration order.
    pub fn declared(&self, d: &DimVector) -> String {
        let e = d.entries();
        let parts: Vec<String> = self.canonical_index.iter().map(|&c| e[c].to_string()).collect();
        format!("({})", parts.join(","))
    }

    /// Stable text used for cache keys.
    pub fn canonical_text(&self) -> String {
        serde_json::to_string(&self.spec.canonical()).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FOLD: &str = r#"{
  "vertices": ["1", "2", "3"],
  "arrows": [{"name": "h1", "from": "1", "to": "2"}, {"name": "h3", "from": "3", "to": "2"}],
  "aut_vertices": {"1": "3", "3": "1"},
  "aut_arrows": {"h1": "h3", "h3": "h1"},
  "p": 2,
  "e": 1
}"#;

    #[test]
    fn parses_and_validates() {
        let ing = Ingested::from_text(FOLD).unwrap();
        assert_eq!(ing.quiver.order(), 2);
        assert_eq!(ing.to_canonical(&[1, 2, 1]), Some(vec![1, 2, 1]));
    }

    #[test]
    fn reordering_keeps_canonical_text() {
        let reordered = FOLD.replace(
            r#"[{"name": "h1", "from": "1", "to": "2"}, {"name": "h3", "from": "3", "to": "2"}]"#,
            r#"[{"name": "h3", "from": "3", "to": "2"}, {"name": "h1", "from": "1", "to": "2"}]"#,
        );
        assert_ne!(reordered, FOLD);
        assert_eq!(Ingested::from_text(&reordered).unwrap().canonical_text(), Ingested::from_text(FOLD).unwrap().canonical_text());
    }

    #[test]
    fn errors_carry_lines() {
        let bad = FOLD.replace(r#""to": "2"}]"#, r#""to": "9"}]"#);
        let e = Ingested::from_text(&bad).unwrap_err();
        assert_eq!(e.line, 3);
        let e = QuiverSpecFile::parse("{\n  \"vertices\": [1]\n}").unwrap_err();
        assert_eq!(e.line, 2);
        let loopy = FOLD.replace(r#""from": "1", "to": "2""#, r#""from": "2", "to": "2""#);
        assert!(Ingested::from_text(&loopy).is_err());
    }
}
