//! JSON instances: a bound quiver algebra, a bimodule and a field.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{opposite, Algebra};
use crate::error::{Error, Result};
use crate::linalg::check_modulus;
use crate::module::{regular_module, FdModule, ModuleSpec};
use crate::quiver::{build_path_algebra, Quiver, DEFAULT_LENGTH_BOUND};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BimoduleSpec {
    Named(String),
    Explicit(ModuleSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldSpec,
    pub quiver: QuiverSpec,
    /// Monomial relations, arrow names in traversal order.
    #[serde(default)]
    pub relations: Vec<Vec<String>>,
    pub bimodule: BimoduleSpec,
    /// Use the opposite of the path algebra (representations of the
    /// opposite quiver).
    #[serde(default)]
    pub opposite: bool,
}

/// A loaded instance.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub bimodule: FdModule,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance> {
        serde_json::from_str(text).map_err(|e| {
            Error::Instance(format!("line {}, column {}: {e}", e.line(), e.column()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| "instance".into())
    }

    /// Builds the algebra and bimodule, with `p` overriding the field.
    pub fn load(&self, p: Option<u64>) -> Result<Loaded> {
        let p = check_modulus(p.unwrap_or(self.field.p))?;
        let arrows: Vec<(String, String, String)> = self
            .quiver
            .arrows
            .iter()
            .map(|a| (a.name.clone(), a.from.clone(), a.to.clone()))
            .collect();
        let q = Quiver::from_labels(self.quiver.vertices.clone(), &arrows)?;
        let relations = self
            .relations
            .iter()
            .map(|w| q.word(&w.iter().map(String::as_str).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        let name = self.display_name();
        let base = build_path_algebra(&name, p, &q, &relations, DEFAULT_LENGTH_BOUND)?;
        let algebra = if self.opposite { opposite(&base) } else { base };
        let bimodule = match &self.bimodule {
            BimoduleSpec::Named(s) if s == "regular" => regular_module(&algebra),
            BimoduleSpec::Named(s) => {
                return Err(Error::Instance(format!(
                    "unknown bimodule `{s}` (expected \"regular\" or a module spec)"
                )))
            }
            BimoduleSpec::Explicit(spec) => spec.build(&algebra)?,
        };
        Ok(Loaded {
            name,
            algebra,
            bimodule,
        })
    }
}

fn fixture_instance(
    name: &str,
    vertices: &[&str],
    arrows: &[(&str, &str, &str)],
    relations: &[&[&str]],
    opposite: bool,
) -> Instance {
    Instance {
        name: Some(name.into()),
        field: FieldSpec { p: 101 },
        quiver: QuiverSpec {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|&(n, f, t)| ArrowSpec {
                    name: n.into(),
                    from: f.into(),
                    to: t.into(),
                })
                .collect(),
        },
        relations: relations
            .iter()
            .map(|w| w.iter().map(|s| s.to_string()).collect())
            .collect(),
        bimodule: BimoduleSpec::Named("regular".into()),
        opposite,
    }
}

const DELTA: [(&str, &str, &str); 3] = [("alpha", "1", "2"), ("beta", "2", "1"), ("gamma", "2", "3")];

pub const FIXTURES: [&str; 5] = ["paper-ex-1", "paper-ex-2", "semisimple", "a3", "nakayama"];

/// Built-in instances.
pub fn fixture(name: &str) -> Option<Instance> {
    let v3 = ["1", "2", "3"];
    Some(match name {
        "paper-ex-1" => fixture_instance(name, &v3, &DELTA, &[&["alpha", "beta", "alpha"]], true),
        "paper-ex-2" => fixture_instance(
            name,
            &v3,
            &DELTA,
            &[&["alpha", "gamma"], &["alpha", "beta"]],
            true,
        ),
        "semisimple" => fixture_instance(name, &v3, &[], &[], false),
        "a3" => fixture_instance(name, &v3, &[("a", "1", "2"), ("b", "2", "3")], &[], false),
        "nakayama" => fixture_instance(
            name,
            &v3,
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
            &[&["a", "b", "c"], &["b", "c", "a"], &["c", "a", "b"]],
            false,
        ),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let dims: Vec<usize> = FIXTURES
            .iter()
            .map(|n| fixture(n).unwrap().load(None).unwrap().algebra.dim())
            .collect();
        assert_eq!(dims, vec![11, 7, 3, 6, 9]);
    }

    #[test]
    fn json_round_trip() {
        let inst = fixture("paper-ex-1").unwrap();
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }

    #[test]
    fn bad_endpoint_names_the_arrow() {
        let text = r#"{"field":{"p":7},"quiver":{"vertices":["1"],"arrows":[{"name":"x","from":"1","to":"9"}]},"bimodule":"regular"}"#;
        let err = Instance::from_json(text).unwrap().load(None).unwrap_err();
        assert!(err.to_string().contains("`x`"), "{err}");
    }

    #[test]
    fn explicit_bimodule() {
        let inst = fixture("a3").unwrap();
        let a = inst.load(None).unwrap().algebra;
        let spec = regular_module(&a).to_spec();
        let explicit = Instance {
            bimodule: BimoduleSpec::Explicit(spec),
            ..inst
        };
        let text = explicit.to_json();
        let loaded = Instance::from_json(&text).unwrap().load(None).unwrap();
        assert!(loaded.bimodule.same_action(&regular_module(&loaded.algebra)));
    }
}
