//! The type-driven interpreter: every derivation of a tree, and denotations
//! of those derivations over a model.

use std::fmt;
use std::sync::Arc;

use crate::combine::Combiner;
use crate::error::{Error, Result};
use crate::lexicon::{instantiate, Lexicon};
use crate::mode::Mode;
use crate::model::Model;
use crate::semantics::apply_mode;
use crate::syntax::Syn;
use crate::ty::{Eff, Ty};
use crate::value::{values_equal, Value};

pub const DEFAULT_MAX_DERIVATIONS: usize = 10_000;

/// A type- and mode-annotated tree. `sense` picks among a word's entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sem {
    Lex {
        ty: Ty,
        word: String,
        sense: usize,
    },
    Comb {
        ty: Ty,
        mode: Mode,
        left: Arc<Sem>,
        right: Arc<Sem>,
    },
}

impl Sem {
    pub fn ty(&self) -> &Ty {
        match self {
            Sem::Lex { ty, .. } | Sem::Comb { ty, .. } => ty,
        }
    }

    pub fn mode(&self) -> Option<&Mode> {
        match self {
            Sem::Comb { mode, .. } => Some(mode),
            Sem::Lex { .. } => None,
        }
    }

    pub fn modes(&self) -> Vec<&Mode> {
        let mut out = Vec::new();
        self.walk(&mut |s| out.extend(s.mode()));
        out
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Sem)) {
        f(self);
        if let Sem::Comb { left, right, .. } = self {
            left.walk(f);
            right.walk(f);
        }
    }
}

/// `BA(jupiter, FA(followed, FA(the, moon)))`
impl fmt::Display for Sem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sem::Lex { word, .. } => write!(f, "{word}"),
            Sem::Comb {
                mode, left, right, ..
            } => write!(f, "{mode}({left}, {right})"),
        }
    }
}

/// False for anything that still holds an unlowered quantifier.
pub fn evaluated(ty: &Ty) -> bool {
    match ty {
        Ty::Comp(Eff::C(_), _) => false,
        Ty::Comp(_, a) => evaluated(a),
        Ty::Arrow(_, b) => evaluated(b),
        Ty::Base(_) => true,
    }
}

#[derive(Clone, Debug, Default)]
pub struct Derivations {
    pub sems: Vec<Arc<Sem>>,
    /// Set when some node produced more than the derivation limit.
    pub truncated: bool,
}

/// All derivations of `syn`, keeping at most `limit` per node.
pub fn synsem(lexicon: &Lexicon, syn: &Syn, combiner: &Combiner, limit: usize) -> Derivations {
    match syn {
        Syn::Leaf(w) => {
            let mut sems: Vec<Arc<Sem>> = lexicon
                .senses(w)
                .iter()
                .enumerate()
                .map(|(sense, e)| {
                    Arc::new(Sem::Lex {
                        ty: e.ty.clone(),
                        word: w.clone(),
                        sense,
                    })
                })
                .collect();
            let truncated = sems.len() > limit;
            sems.truncate(limit);
            Derivations { sems, truncated }
        }
        Syn::Branch(l, r) | Syn::Island(l, r) => {
            let (ls, rs) = rayon::join(
                || synsem(lexicon, l, combiner, limit),
                || synsem(lexicon, r, combiner, limit),
            );
            let island = matches!(syn, Syn::Island(..));
            let mut out = Derivations {
                sems: Vec::new(),
                truncated: ls.truncated || rs.truncated,
            };
            'outer: for lsem in &ls.sems {
                for rsem in &rs.sems {
                    for res in combiner.combine(lsem.ty(), rsem.ty()).iter() {
                        if island && !evaluated(&res.result) {
                            continue;
                        }
                        if out.sems.len() == limit {
                            out.truncated = true;
                            break 'outer;
                        }
                        out.sems.push(Arc::new(Sem::Comb {
                            ty: res.result.clone(),
                            mode: res.mode.clone(),
                            left: lsem.clone(),
                            right: rsem.clone(),
                        }));
                    }
                }
            }
            out
        }
    }
}

/// Why a tree has no derivations: the smallest subtree that fails although
/// its daughters do not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocked {
    pub subtree: String,
    pub reason: String,
}

pub fn diagnose(lexicon: &Lexicon, syn: &Syn, combiner: &Combiner) -> Option<Blocked> {
    match syn {
        Syn::Leaf(w) if lexicon.senses(w).is_empty() => Some(Blocked {
            subtree: w.clone(),
            reason: format!("'{w}' is not in the lexicon"),
        }),
        Syn::Leaf(_) => None,
        Syn::Branch(l, r) | Syn::Island(l, r) => {
            if let Some(b) =
                diagnose(lexicon, l, combiner).or_else(|| diagnose(lexicon, r, combiner))
            {
                return Some(b);
            }
            let derived = synsem(lexicon, syn, combiner, DEFAULT_MAX_DERIVATIONS);
            if !derived.sems.is_empty() {
                return None;
            }
            let types = |s: &Syn| {
                let mut tys: Vec<String> = Vec::new();
                for d in synsem(lexicon, s, combiner, DEFAULT_MAX_DERIVATIONS).sems {
                    let t = d.ty().to_string();
                    if !tys.contains(&t) {
                        tys.push(t);
                    }
                }
                tys.join(", ")
            };
            let what = if matches!(syn, Syn::Island(..)) {
                "island admits"
            } else {
                "no mode combines"
            };
            Some(Blocked {
                subtree: syn.to_string(),
                reason: format!(
                    "{what} no result for left [{}] and right [{}]",
                    types(l),
                    types(r)
                ),
            })
        }
    }
}

/// The value of a derivation over `model`.
pub fn denote(sem: &Sem, lexicon: &Lexicon, model: &Model) -> Result<Value> {
    match sem {
        Sem::Lex { ty, word, sense } => {
            let entry = lexicon
                .senses(word)
                .get(*sense)
                .ok_or_else(|| Error::UnknownWord(word.clone()))?;
            instantiate(&entry.den, ty, model)
        }
        Sem::Comb {
            mode, left, right, ..
        } => {
            let lv = denote(left, lexicon, model)?;
            let rv = denote(right, lexicon, model)?;
            apply_mode(model, mode, &lv, &rv, left.ty(), right.ty())
        }
    }
}

/// Drops derivations whose type and value repeat an earlier one. Values that
/// cannot be compared are kept.
pub fn dedup_semantic(items: Vec<(Arc<Sem>, Value)>) -> Vec<(Arc<Sem>, Value)> {
    let mut out: Vec<(Arc<Sem>, Value)> = Vec::new();
    for (sem, v) in items {
        let dup = out
            .iter()
            .any(|(s, w)| s.ty() == sem.ty() && values_equal(w, &v).unwrap_or(false));
        if !dup {
            out.push((sem, v));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragment::fragment;
    use crate::mode::CombineConfig;
    use crate::syntax::parse_tree;

    fn derive(frag: &str, tree: &str, cfg: CombineConfig) -> Derivations {
        let f = fragment(frag).unwrap();
        synsem(
            &f.lexicon,
            &parse_tree(tree).unwrap(),
            &Combiner::new(cfg),
            DEFAULT_MAX_DERIVATIONS,
        )
    }

    #[test]
    fn extensional_sentence_has_one_derivation() {
        let d = derive(
            "ch1-extensional",
            "[jupiter [followed [the moon]]]",
            CombineConfig::default(),
        );
        assert_eq!(d.sems.len(), 1);
        assert_eq!(d.sems[0].ty(), &Ty::T);
        assert_eq!(
            d.sems[0].to_string(),
            "BA(jupiter, FA(followed, FA(the, moon)))"
        );
        let f = fragment("ch1-extensional").unwrap();
        let v = denote(&d.sems[0], &f.lexicon, &f.model).unwrap();
        let followed = f.model.pred2("followed").unwrap();
        let (j, io) = (
            f.model.resolve("jupiter").unwrap(),
            f.model.resolve("io").unwrap(),
        );
        assert_eq!(v, Value::Bool(followed.contains(&(j, io))));
    }

    #[test]
    fn partial_subject_maps_over_predicate() {
        let d = derive(
            "ch2-functor",
            "[[the planet] is_bright]",
            CombineConfig::ch2(),
        );
        let found: Vec<String> = d
            .sems
            .iter()
            .map(|s| format!("{} {}", s.mode().unwrap(), s.ty()))
            .collect();
        assert!(found.contains(&"ML(BA) M t".to_string()), "{found:?}");
    }

    #[test]
    fn evaluated_rejects_unlowered_quantifiers() {
        let t = |s: &str| s.parse::<Ty>().unwrap();
        assert!(!evaluated(&t("C[t] t")));
        assert!(evaluated(&t("S t")));
        assert!(!evaluated(&t("e -> C[t] t")));
        assert!(!evaluated(&t("S (C[t] t)")));
        assert!(evaluated(&t("C[t] t -> t")));
    }

    #[test]
    fn islands_trap_quantifiers() {
        let island = derive(
            "ch5-adjunction",
            "[[if {everyone passed}] [nobody cheered]]",
            CombineConfig::default(),
        );
        let plain = derive(
            "ch5-adjunction",
            "[[if [everyone passed]] [nobody cheered]]",
            CombineConfig::default(),
        );
        assert!(!island.sems.is_empty());
        assert!(plain.sems.len() > island.sems.len());
        for s in &island.sems {
            let Sem::Comb { left, .. } = &**s else {
                panic!()
            };
            let Sem::Comb { right: isl, .. } = &**left else {
                panic!()
            };
            assert!(evaluated(isl.ty()), "{}", isl.ty());
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let f = fragment("ch5-adjunction").unwrap();
        let syn = parse_tree("[[if [everyone passed]] [nobody cheered]]").unwrap();
        let d = synsem(
            &f.lexicon,
            &syn,
            &Combiner::new(CombineConfig::default()),
            3,
        );
        assert_eq!(d.sems.len(), 3);
        assert!(d.truncated);
    }

    #[test]
    fn diagnosis_points_at_the_failing_node() {
        let f = fragment("ch1-extensional").unwrap();
        let c = Combiner::new(CombineConfig::default());
        let b = diagnose(
            &f.lexicon,
            &parse_tree("[jupiter [followed unicorn]]").unwrap(),
            &c,
        )
        .unwrap();
        assert_eq!(b.subtree, "unicorn");
        let b = diagnose(
            &f.lexicon,
            &parse_tree("[[jupiter saturn] moon]").unwrap(),
            &c,
        )
        .unwrap();
        assert_eq!(b.subtree, "[jupiter saturn]");
        assert!(diagnose(&f.lexicon, &parse_tree("[jupiter is_bright]").unwrap(), &c).is_none());
    }

    #[test]
    fn semantic_dedup_keeps_first_of_equal_values() {
        let f = fragment("ch4-monad").unwrap();
        let d = derive("ch4-monad", "[[a cat] [saw [a box]]]", CombineConfig::ch4());
        let denoted: Vec<_> = d
            .sems
            .iter()
            .map(|s| (s.clone(), denote(s, &f.lexicon, &f.model).unwrap()))
            .collect();
        let n = denoted.len();
        let kept = dedup_semantic(denoted);
        assert!(kept.len() < n);
        assert_eq!(kept[0].0, d.sems[0]);
    }
}
