//! Kripke models as JSON.
//!
//! ```text
//! {
//!   "worlds": ["w0","w1"],
//!   "order": [["w0","w1"]],
//!   "transitive_close": false,
//!   "domain": ["e0"],
//!   "consts": {"c":"e0"},
//!   "funcs": {"f":[["e0","e0"]]},
//!   "rels": {
//!     "w0": {"P":[[]]},
//!     "w1": {"P":[[]],"S":[["e0"]]}
//!   }
//! }
//! ```
//!
//! Function rows are `[args..., value]`. With `transitive_close` set the
//! order is closed on load, otherwise a non-transitive order is rejected.
//! [`write_model`] emits the layout above, and loading then writing a file
//! in that layout reproduces it byte for byte.

use std::collections::{BTreeMap, BTreeSet};

use bql_core::semantics::{validate_model, Elem, FuncTable, Violation};
use bql_core::KripkeModel;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("malformed model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("world `{0}` is listed twice")]
    DuplicateWorld(String),
    #[error("element `{0}` is listed twice")]
    DuplicateElement(String),
    #[error("function `{0}` needs rows of equal length of at least two")]
    FuncRows(String),
    #[error("invalid model: {}", join(.0))]
    Invalid(Vec<Violation>),
}

fn join(vs: &[Violation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

type Tuples = Vec<Vec<String>>;

/// The on-disk shape, with names in place of indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub worlds: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    #[serde(default)]
    pub transitive_close: bool,
    pub domain: Vec<String>,
    #[serde(default)]
    pub consts: BTreeMap<String, String>,
    #[serde(default)]
    pub funcs: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub rels: BTreeMap<String, BTreeMap<String, Tuples>>,
}

impl ModelDoc {
    pub fn from_model(m: &KripkeModel) -> ModelDoc {
        let names = |t: &[Elem]| m.element_names(t);
        ModelDoc {
            worlds: m.worlds.clone(),
            order: m.order.iter().map(|&(a, b)| (m.worlds[a].clone(), m.worlds[b].clone())).collect(),
            transitive_close: false,
            domain: m.domain.clone(),
            consts: m.consts.iter().map(|(c, &e)| (c.clone(), m.domain[e].clone())).collect(),
            funcs: m
                .funcs
                .iter()
                .map(|(f, table)| {
                    let rows = table
                        .rows
                        .iter()
                        .map(|(args, &v)| {
                            let mut row = names(args);
                            row.push(m.domain[v].clone());
                            row
                        })
                        .collect();
                    (f.clone(), rows)
                })
                .collect(),
            rels: m
                .worlds
                .iter()
                .zip(&m.rels)
                .map(|(w, rs)| {
                    (w.clone(), rs.iter().map(|(r, ts)| (r.clone(), ts.iter().map(|t| names(t)).collect())).collect())
                })
                .collect(),
        }
    }

    pub fn to_model(&self) -> Result<KripkeModel, ModelFileError> {
        let mut seen = BTreeSet::new();
        if let Some(w) = self.worlds.iter().find(|w| !seen.insert(w.as_str())) {
            return Err(ModelFileError::DuplicateWorld(w.clone()));
        }
        let mut seen = BTreeSet::new();
        if let Some(e) = self.domain.iter().find(|e| !seen.insert(e.as_str())) {
            return Err(ModelFileError::DuplicateElement(e.clone()));
        }
        let mut m = KripkeModel::new(self.worlds.clone(), self.domain.clone());
        let world = |id: &str| m.world_index(id).ok_or_else(|| ModelFileError::UnknownWorld(id.to_string()));
        let elem = |name: &str| m.element_index(name).ok_or_else(|| ModelFileError::UnknownElement(name.to_string()));
        let elems = |names: &[String]| names.iter().map(|n| elem(n)).collect::<Result<Vec<Elem>, _>>();

        let mut order = BTreeSet::new();
        for (a, b) in &self.order {
            order.insert((world(a)?, world(b)?));
        }
        let mut consts = BTreeMap::new();
        for (c, e) in &self.consts {
            consts.insert(c.clone(), elem(e)?);
        }
        let mut funcs = BTreeMap::new();
        for (f, rows) in &self.funcs {
            let width = rows.first().map_or(0, Vec::len);
            if width < 2 || rows.iter().any(|r| r.len() != width) {
                return Err(ModelFileError::FuncRows(f.clone()));
            }
            let mut table = FuncTable { arity: width - 1, rows: BTreeMap::new() };
            for row in rows {
                let vals = elems(row)?;
                table.rows.insert(vals[..width - 1].to_vec(), vals[width - 1]);
            }
            funcs.insert(f.clone(), table);
        }
        let mut rels = vec![BTreeMap::new(); self.worlds.len()];
        for (w, rs) in &self.rels {
            let w = world(w)?;
            for (r, tuples) in rs {
                let set: &mut BTreeSet<Vec<Elem>> = rels[w].entry(r.clone()).or_default();
                for t in tuples {
                    set.insert(elems(t)?);
                }
            }
        }
        m.order = order;
        m.consts = consts;
        m.funcs = funcs;
        m.rels = rels;
        if self.transitive_close {
            m.close_transitively();
        }
        let violations = validate_model(&m);
        if !violations.is_empty() {
            return Err(ModelFileError::Invalid(violations));
        }
        Ok(m)
    }

    /// One top-level field per line, one world per line under `rels`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"worlds\": {},\n", j(&self.worlds)));
        out.push_str(&format!("  \"order\": {},\n", j(&self.order)));
        out.push_str(&format!("  \"transitive_close\": {},\n", self.transitive_close));
        out.push_str(&format!("  \"domain\": {},\n", j(&self.domain)));
        out.push_str(&format!("  \"consts\": {},\n", j(&self.consts)));
        out.push_str(&format!("  \"funcs\": {},\n", j(&self.funcs)));
        if self.rels.is_empty() {
            out.push_str("  \"rels\": {}\n");
        } else {
            out.push_str("  \"rels\": {\n");
            let n = self.rels.len();
            for (i, (w, rs)) in self.rels.iter().enumerate() {
                let sep = if i + 1 < n { "," } else { "" };
                out.push_str(&format!("    {}: {}{sep}\n", j(w), j(rs)));
            }
            out.push_str("  }\n");
        }
        out.push_str("}\n");
        out
    }
}

fn j<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn read_model(text: &str) -> Result<KripkeModel, ModelFileError> {
    serde_json::from_str::<ModelDoc>(text)?.to_model()
}

pub fn write_model(m: &KripkeModel) -> String {
    ModelDoc::from_model(m).to_text()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "worlds": ["w0","w1"],
  "order": [["w0","w1"]],
  "transitive_close": false,
  "domain": ["e0","e1"],
  "consts": {"c":"e1"},
  "funcs": {"f":[["e0","e1"],["e1","e0"]]},
  "rels": {
    "w0": {"P":[[]]},
    "w1": {"P":[[]],"S":[["e0"],["e1"]]}
  }
}
"#;

    #[test]
    fn sample_round_trips_bit_exactly() {
        let m = read_model(SAMPLE).unwrap();
        assert_eq!(m.consts["c"], 1);
        assert_eq!(m.funcs["f"].rows[&vec![1]], 0);
        assert!(m.holds(1, "S", &[0]));
        assert_eq!(write_model(&m), SAMPLE);
        assert_eq!(read_model(&write_model(&m)).unwrap(), m);
    }

    #[test]
    fn closure_flag() {
        let chain = r#"{"worlds":["a","b","c"],"order":[["a","b"],["b","c"]],"domain":["e"]}"#;
        assert!(matches!(read_model(chain), Err(ModelFileError::Invalid(_))));
        let closed = chain.replace("\"domain\"", "\"transitive_close\":true,\"domain\"");
        let m = read_model(&closed).unwrap();
        assert!(m.sees(0, 2));
    }

    #[test]
    fn rejects_bad_references() {
        let base = r#"{"worlds":["a"],"domain":["e"],"rels":{"b":{}}}"#;
        assert!(matches!(read_model(base), Err(ModelFileError::UnknownWorld(w)) if w == "b"));
        let base = r#"{"worlds":["a"],"domain":["e"],"consts":{"c":"x"}}"#;
        assert!(matches!(read_model(base), Err(ModelFileError::UnknownElement(_))));
        let base = r#"{"worlds":["a","a"],"domain":["e"]}"#;
        assert!(matches!(read_model(base), Err(ModelFileError::DuplicateWorld(_))));
        let base = r#"{"worlds":["a"],"domain":["e"],"extra":1}"#;
        assert!(matches!(read_model(base), Err(ModelFileError::Json(_))));
    }

    #[test]
    fn monotonicity_is_enforced() {
        let text = r#"{"worlds":["a","b"],"order":[["a","b"]],"domain":["e"],"rels":{"a":{"P":[[]]}}}"#;
        assert!(matches!(read_model(text), Err(ModelFileError::Invalid(v)) if !v.is_empty()));
    }
}
