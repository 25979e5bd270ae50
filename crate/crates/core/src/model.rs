//! Finite models: entities, predicate extensions, named constants, and the
//! length of assignment tuples.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub entities: Vec<String>,
    #[serde(default = "one")]
    pub asgn_len: usize,
    #[serde(default)]
    pub pred1: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub pred2: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub constants: BTreeMap<String, String>,
}

fn one() -> usize {
    1
}

/// A validated model. Entities are referred to by their position. Cloning
/// is cheap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    inner: Arc<Inner>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Inner {
    entities: Vec<String>,
    asgn_len: usize,
    pred1: BTreeMap<String, BTreeSet<u32>>,
    /// Pairs are stored as (subject, object).
    pred2: BTreeMap<String, BTreeSet<(u32, u32)>>,
    constants: BTreeMap<String, u32>,
}

impl Model {
    pub fn from_file(file: ModelFile) -> Result<Model> {
        if file.entities.is_empty() {
            return Err(Error::Model("at least one entity is required".into()));
        }
        if file.asgn_len < 1 {
            return Err(Error::Model("asgn_len must be at least 1".into()));
        }
        let mut index = BTreeMap::new();
        for (i, e) in file.entities.iter().enumerate() {
            if index.insert(e.clone(), i as u32).is_some() {
                return Err(Error::Model(format!("duplicate entity '{e}'")));
            }
        }
        let lookup = |name: &str, ctx: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Model(format!("'{name}' in {ctx} is not an entity")))
        };
        let mut pred1 = BTreeMap::new();
        for (p, members) in &file.pred1 {
            let set = members
                .iter()
                .map(|m| lookup(m, &format!("pred1 '{p}'")))
                .collect::<Result<BTreeSet<_>>>()?;
            pred1.insert(p.clone(), set);
        }
        let mut pred2 = BTreeMap::new();
        for (p, pairs) in &file.pred2 {
            let ctx = format!("pred2 '{p}'");
            let set = pairs
                .iter()
                .map(|(a, b)| Ok((lookup(a, &ctx)?, lookup(b, &ctx)?)))
                .collect::<Result<BTreeSet<_>>>()?;
            pred2.insert(p.clone(), set);
        }
        for name in file.pred1.keys() {
            if file.pred2.contains_key(name) {
                return Err(Error::Model(format!(
                    "'{name}' is both a pred1 and a pred2"
                )));
            }
        }
        let mut constants = BTreeMap::new();
        for (c, e) in &file.constants {
            constants.insert(c.clone(), lookup(e, &format!("constant '{c}'"))?);
        }
        Ok(Model {
            inner: Arc::new(Inner {
                entities: file.entities,
                asgn_len: file.asgn_len,
                pred1,
                pred2,
                constants,
            }),
        })
    }

    pub fn from_json(text: &str) -> Result<Model> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        Model::from_file(file)
    }

    pub fn to_file(&self) -> ModelFile {
        let name = |i: &u32| self.inner.entities[*i as usize].clone();
        ModelFile {
            entities: self.inner.entities.clone(),
            asgn_len: self.inner.asgn_len,
            pred1: self
                .inner
                .pred1
                .iter()
                .map(|(k, v)| (k.clone(), v.iter().map(name).collect()))
                .collect(),
            pred2: self
                .inner
                .pred2
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        v.iter().map(|(a, b)| (name(a), name(b))).collect(),
                    )
                })
                .collect(),
            constants: self
                .inner
                .constants
                .iter()
                .map(|(k, v)| (k.clone(), name(v)))
                .collect(),
        }
    }

    /// A model with `n` entities named `e0`, `e1`, ... and no predicates.
    pub fn bare(n: usize, asgn_len: usize) -> Model {
        Model::from_file(ModelFile {
            entities: (0..n).map(|i| format!("e{i}")).collect(),
            asgn_len,
            ..Default::default()
        })
        .expect("bare model is valid")
    }

    pub fn n_entities(&self) -> u32 {
        self.inner.entities.len() as u32
    }

    pub fn asgn_len(&self) -> usize {
        self.inner.asgn_len
    }

    pub fn entity_name(&self, i: u32) -> &str {
        &self.inner.entities[i as usize]
    }

    pub fn entities(&self) -> &[String] {
        &self.inner.entities
    }

    pub fn entity_index(&self, name: &str) -> Option<u32> {
        self.inner
            .entities
            .iter()
            .position(|e| e == name)
            .map(|i| i as u32)
    }

    /// Resolves a constant first, then a bare entity id.
    pub fn resolve(&self, name: &str) -> Option<u32> {
        self.inner
            .constants
            .get(name)
            .copied()
            .or_else(|| self.entity_index(name))
    }

    pub fn pred1(&self, name: &str) -> Option<&BTreeSet<u32>> {
        self.inner.pred1.get(name)
    }

    pub fn pred2(&self, name: &str) -> Option<&BTreeSet<(u32, u32)>> {
        self.inner.pred2.get(name)
    }

    pub fn pred1_names(&self) -> impl Iterator<Item = &str> {
        self.inner.pred1.keys().map(String::as_str)
    }

    pub fn pred2_names(&self) -> impl Iterator<Item = &str> {
        self.inner.pred2.keys().map(String::as_str)
    }

    pub fn set_pred1(&mut self, name: &str, members: BTreeSet<u32>) {
        Arc::make_mut(&mut self.inner)
            .pred1
            .insert(name.to_string(), members);
    }

    pub fn set_pred2(&mut self, name: &str, pairs: BTreeSet<(u32, u32)>) {
        Arc::make_mut(&mut self.inner)
            .pred2
            .insert(name.to_string(), pairs);
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
    Model::from_json(&text)
}
