//! Homotopy-theoretic input that is taken as data rather than computed.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FACTS_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FactsError {
    #[error("reading facts file: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing facts file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported facts version {0} (expected {FACTS_VERSION})")]
    Version(u32),
    #[error("fact {id}: missing or malformed parameter `{param}`")]
    Param { id: String, param: String },
    #[error("no fact of kind {0}")]
    Missing(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactKind {
    /// The Hurewicz map vanishes on the given stable stem.
    HurewiczTrivialStem,
    /// Dimensions `m` with a Hopf invariant one class detected by `Sq^m`.
    HopfInvariantOneDims,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExternalFact {
    pub id: String,
    pub kind: FactKind,
    pub params: BTreeMap<String, serde_json::Value>,
    pub source: String,
}

impl ExternalFact {
    fn param_u32(&self, key: &str) -> Result<u32, FactsError> {
        self.params
            .get(key)
            .and_then(|v| v.as_u64())
            .and_then(|v| u32::try_from(v).ok())
            .ok_or_else(|| FactsError::Param { id: self.id.clone(), param: key.into() })
    }

    fn param_u32_list(&self, key: &str) -> Result<Vec<u32>, FactsError> {
        let err = || FactsError::Param { id: self.id.clone(), param: key.into() };
        let arr = self.params.get(key).and_then(|v| v.as_array()).ok_or_else(err)?;
        arr.iter()
            .map(|v| v.as_u64().and_then(|x| u32::try_from(x).ok()).ok_or_else(err))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactsFile {
    pub version: u32,
    pub facts: Vec<ExternalFact>,
}

impl FactsFile {
    pub fn from_json(text: &str) -> Result<FactsFile, FactsError> {
        let f: FactsFile = serde_json::from_str(text)?;
        if f.version != FACTS_VERSION {
            return Err(FactsError::Version(f.version));
        }
        // Surface malformed parameters at load time.
        f.hopf_dims()?;
        f.trivial_stems()?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<FactsFile, FactsError> {
        FactsFile::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("facts serialise")
    }

    pub fn hopf_dims(&self) -> Result<Vec<u32>, FactsError> {
        let mut dims = Vec::new();
        let mut found = false;
        for f in self.facts.iter().filter(|f| f.kind == FactKind::HopfInvariantOneDims) {
            found = true;
            dims.extend(f.param_u32_list("dims")?);
        }
        if !found {
            return Err(FactsError::Missing("hopf-invariant-one-dims"));
        }
        dims.sort_unstable();
        dims.dedup();
        Ok(dims)
    }

    pub fn hopf_fact_id(&self) -> Option<&str> {
        self.facts
            .iter()
            .find(|f| f.kind == FactKind::HopfInvariantOneDims)
            .map(|f| f.id.as_str())
    }

    /// `(stem, fact id)` for every trivial-Hurewicz fact.
    pub fn trivial_stems(&self) -> Result<Vec<(u32, String)>, FactsError> {
        self.facts
            .iter()
            .filter(|f| f.kind == FactKind::HurewiczTrivialStem)
            .map(|f| Ok((f.param_u32("stem")?, f.id.clone())))
            .collect()
    }
}

impl Default for FactsFile {
    fn default() -> FactsFile {
        let stem = |id: &str, stem: u32, source: &str| ExternalFact {
            id: id.into(),
            kind: FactKind::HurewiczTrivialStem,
            params: BTreeMap::from([("stem".to_string(), serde_json::json!(stem))]),
            source: source.into(),
        };
        FactsFile {
            version: FACTS_VERSION,
            facts: vec![
                stem(
                    "stem-17",
                    17,
                    "2-primary 17-stem is generated by eta eta^* and nu kappa, both with trivial Hurewicz image",
                ),
                stem(
                    "stem-64",
                    64,
                    "Hurewicz image trivial on the 2-primary 64-stem (taken on trust; flagged uncertain)",
                ),
                ExternalFact {
                    id: "hopf-invariant-one".into(),
                    kind: FactKind::HopfInvariantOneDims,
                    params: BTreeMap::from([("dims".to_string(), serde_json::json!([1, 2, 4, 8]))]),
                    source: "Adams: Sq^m is decomposable unless m in {1, 2, 4, 8} for detection purposes".into(),
                },
            ],
        }
    }
}
