//! Request handling shared by the command line and the HTTP service. Both
//! front ends build the same request values and serialize the same response
//! values, so their JSON agrees byte for byte.

use std::collections::BTreeMap;
use std::sync::Arc;

use effects_core::interp::{synsem, DEFAULT_MAX_DERIVATIONS};
use effects_core::laws::{default_effects, default_under, LawReport};
use effects_core::model::ModelFile;
use effects_core::ty::parse_eff;
use effects_core::value::to_json;
use effects_core::{
    denote, fragments, parse_tree, parse_type, values_equal, Checker, CombineConfig, CombineResult,
    Combiner, Error, Fragment, Lexicon, Model, Sem, Value,
};
use serde::{Deserialize, Serialize};

/// Largest model the law endpoint will build.
pub const MAX_LAW_ENTITIES: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: u16,
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

impl ApiError {
    pub fn bad_request(error: impl Into<String>) -> Self {
        ApiError {
            status: 400,
            error: error.into(),
            position: None,
        }
    }

    fn from_core(field: &str, e: Error) -> Self {
        let status = match e {
            Error::TooManyDerivations { .. } => 413,
            _ => 400,
        };
        let position = e.position();
        let error = if field.is_empty() {
            e.to_string()
        } else {
            format!("{field}: {e}")
        };
        ApiError {
            status,
            error,
            position,
        }
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.error)
    }
}

impl std::error::Error for ApiError {}

pub type ApiResult<T> = std::result::Result<T, ApiError>;

/// A preset name, or explicit rule flags with defaults for the rest.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ConfigChoice {
    Preset(String),
    Flags(CombineConfig),
}

impl ConfigChoice {
    pub fn resolve(choice: &Option<ConfigChoice>) -> ApiResult<CombineConfig> {
        match choice {
            None => Ok(CombineConfig::default()),
            Some(ConfigChoice::Flags(c)) => Ok(c.clone()),
            Some(ConfigChoice::Preset(p)) => {
                CombineConfig::preset(p).map_err(|e| ApiError::from_core("config", e))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombineRequest {
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub config: Option<ConfigChoice>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CombineResponse {
    pub results: Vec<CombineResult>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dedup {
    Semantic,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterpretRequest {
    pub tree: String,
    pub fragment: String,
    #[serde(default)]
    pub config: Option<ConfigChoice>,
    #[serde(default)]
    pub denote: bool,
    /// Replaces the fragment's own model.
    #[serde(default)]
    pub model: Option<ModelFile>,
    #[serde(default)]
    pub dedup: Option<Dedup>,
    /// Accept a truncated derivation list instead of an error.
    #[serde(default)]
    pub truncate: bool,
    #[serde(default, rename = "maxDerivations")]
    pub max_derivations: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum ModeTree {
    Word {
        word: String,
        sense: usize,
        #[serde(rename = "type")]
        ty: String,
    },
    Node {
        mode: String,
        #[serde(rename = "type")]
        ty: String,
        left: Box<ModeTree>,
        right: Box<ModeTree>,
    },
}

impl ModeTree {
    pub fn of(sem: &Sem) -> ModeTree {
        match sem {
            Sem::Lex { ty, word, sense } => ModeTree::Word {
                word: word.clone(),
                sense: *sense,
                ty: ty.to_string(),
            },
            Sem::Comb {
                ty,
                mode,
                left,
                right,
            } => ModeTree::Node {
                mode: mode.to_string(),
                ty: ty.to_string(),
                left: Box::new(ModeTree::of(left)),
                right: Box::new(ModeTree::of(right)),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    #[serde(rename = "type")]
    pub ty: String,
    #[serde(rename = "modeTree")]
    pub mode_tree: ModeTree,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denotation: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpretResponse {
    pub derivations: Vec<Derivation>,
    pub truncated: bool,
}

/// Derivations together with their values, before serialization.
pub struct Interpretation {
    pub model: Model,
    pub denote: bool,
    pub items: Vec<(Arc<Sem>, Option<effects_core::Result<Value>>)>,
    pub truncated: bool,
}

impl Interpretation {
    pub fn response(&self) -> InterpretResponse {
        let derivations = self
            .items
            .iter()
            .map(|(sem, val)| Derivation {
                ty: sem.ty().to_string(),
                mode_tree: ModeTree::of(sem),
                denotation: match (self.denote, val) {
                    (true, Some(Ok(v))) => Some(to_json(v, &self.model)),
                    (true, Some(Err(e))) => Some(serde_json::json!({ "error": e.to_string() })),
                    _ => None,
                },
            })
            .collect();
        InterpretResponse {
            derivations,
            truncated: self.truncated,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FragmentInfo<'a> {
    pub name: &'a str,
    pub words: &'a Lexicon,
    pub model: ModelFile,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawsQuery {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub effect: Option<String>,
    #[serde(default)]
    pub entities: Option<usize>,
}

/// Immutable state: the shipped fragments and the default derivation cap.
#[derive(Clone, Debug)]
pub struct Service {
    fragments: BTreeMap<String, Fragment>,
    max_derivations: usize,
}

impl Service {
    pub fn new(max_derivations: usize) -> effects_core::Result<Self> {
        let fragments = fragments()?
            .into_iter()
            .map(|f| (f.name.clone(), f))
            .collect();
        Ok(Service {
            fragments,
            max_derivations,
        })
    }

    pub fn max_derivations(&self) -> usize {
        self.max_derivations
    }

    pub fn combine(&self, req: &CombineRequest) -> ApiResult<CombineResponse> {
        let cfg = ConfigChoice::resolve(&req.config)?;
        let left = parse_type(&req.left).map_err(|e| ApiError::from_core("left", e.into()))?;
        let right = parse_type(&req.right).map_err(|e| ApiError::from_core("right", e.into()))?;
        Ok(CombineResponse {
            results: Combiner::new(cfg).combine(&left, &right).to_vec(),
        })
    }

    pub fn interpretation(&self, req: &InterpretRequest) -> ApiResult<Interpretation> {
        let cfg = ConfigChoice::resolve(&req.config)?;
        let frag = self.fragments.get(&req.fragment).ok_or_else(|| {
            ApiError::from_core("fragment", Error::UnknownFragment(req.fragment.clone()))
        })?;
        let syn = parse_tree(&req.tree).map_err(|e| ApiError::from_core("tree", e.into()))?;
        for w in syn.leaves() {
            if frag.lexicon.senses(w).is_empty() {
                return Err(ApiError::from_core(
                    "tree",
                    Error::UnknownWord(w.to_string()),
                ));
            }
        }
        let model = match &req.model {
            Some(file) => {
                let m = Model::from_file(file.clone())
                    .and_then(|m| frag.lexicon.check_against(&m).map(|_| m));
                m.map_err(|e| ApiError::from_core("model", e))?
            }
            None => frag.model.clone(),
        };
        let limit = req.max_derivations.unwrap_or(self.max_derivations);
        if limit == 0 {
            return Err(ApiError::bad_request("maxDerivations must be positive"));
        }
        let d = synsem(&frag.lexicon, &syn, &Combiner::new(cfg), limit);
        if d.truncated && !req.truncate {
            return Err(ApiError::from_core("", Error::TooManyDerivations { limit }));
        }
        let evaluate = req.denote || req.dedup.is_some();
        let mut items: Vec<(Arc<Sem>, Option<effects_core::Result<Value>>)> = d
            .sems
            .into_iter()
            .map(|s| {
                let v = evaluate.then(|| denote(&s, &frag.lexicon, &model));
                (s, v)
            })
            .collect();
        if req.dedup == Some(Dedup::Semantic) {
            items = dedup(items);
        }
        Ok(Interpretation {
            model,
            denote: req.denote,
            items,
            truncated: d.truncated,
        })
    }

    pub fn interpret(&self, req: &InterpretRequest) -> ApiResult<InterpretResponse> {
        Ok(self.interpretation(req)?.response())
    }

    pub fn fragments(&self) -> Vec<FragmentInfo<'_>> {
        self.fragments
            .values()
            .map(|f| FragmentInfo {
                name: &f.name,
                words: &f.lexicon,
                model: f.model.to_file(),
            })
            .collect()
    }

    pub fn laws(&self, q: &LawsQuery) -> ApiResult<Vec<LawReport>> {
        match q.preset.as_deref() {
            None | Some("default") => {}
            Some(other) => {
                return Err(ApiError::bad_request(format!(
                    "unknown law preset '{other}'"
                )))
            }
        }
        let n = q.entities.unwrap_or(2);
        if !(1..=MAX_LAW_ENTITIES).contains(&n) {
            return Err(ApiError::bad_request(format!(
                "entities must be between 1 and {MAX_LAW_ENTITIES}"
            )));
        }
        let checker = Checker::new(Model::bare(n, 1));
        let under = default_under();
        Ok(match &q.effect {
            None => checker.suite(&default_effects(), &under),
            Some(text) => {
                let eff = parse_eff(text).map_err(|e| ApiError::from_core("effect", e.into()))?;
                let mut out = checker.functor_laws(&eff, &under);
                out.extend(checker.applicative_laws(&eff, &under));
                out.extend(checker.monad_laws(&eff, &under));
                out.extend(checker.coherence(&eff, &under));
                out
            }
        })
    }
}

impl Default for Service {
    fn default() -> Self {
        Service::new(DEFAULT_MAX_DERIVATIONS).expect("shipped fragments load")
    }
}

/// Keeps the first of each group of derivations with equal type and value.
/// Derivations without a comparable value are always kept.
fn dedup(
    items: Vec<(Arc<Sem>, Option<effects_core::Result<Value>>)>,
) -> Vec<(Arc<Sem>, Option<effects_core::Result<Value>>)> {
    let mut out: Vec<(Arc<Sem>, Option<effects_core::Result<Value>>)> = Vec::new();
    for (sem, v) in items {
        let dup = match &v {
            Some(Ok(v)) => out.iter().any(|(s, w)| {
                s.ty() == sem.ty()
                    && matches!(w, Some(Ok(w)) if values_equal(w, v).unwrap_or(false))
            }),
            _ => false,
        };
        if !dup {
            out.push((sem, v));
        }
    }
    out
}

/// Compact JSON, the wire format of both front ends.
pub fn to_wire<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("response values serialize")
}
