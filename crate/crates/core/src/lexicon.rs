//! Lexicons: words mapped to typed denotation schemas, and the fixed schema
//! library that turns those schemas into values over a model.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;
use crate::ty::{Eff, Ty};
use crate::value::{Shape, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Arg {
    Nat(u64),
    Name(String),
    Spec(DenSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenSpec {
    pub schema: String,
    #[serde(default)]
    pub args: Vec<Arg>,
}

impl DenSpec {
    pub fn new(schema: &str, args: Vec<Arg>) -> Self {
        DenSpec {
            schema: schema.to_string(),
            args,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    #[serde(rename = "type")]
    pub ty: Ty,
    pub den: DenSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<Entry>>,
}

impl Lexicon {
    pub fn from_json(text: &str) -> Result<Lexicon> {
        let raw: BTreeMap<String, Vec<serde_json::Value>> =
            serde_json::from_str(text).map_err(|e| Error::Lexicon(e.to_string()))?;
        let mut lex = Lexicon::default();
        for (word, entries) in raw {
            for (i, e) in entries.into_iter().enumerate() {
                let entry: Entry = serde_json::from_value(e)
                    .map_err(|e| Error::Lexicon(format!("'{word}' entry {i}: {e}")))?;
                lex.insert(&word, entry)?;
            }
        }
        Ok(lex)
    }

    /// Adds a sense to `word` after checking its schema against its type.
    pub fn insert(&mut self, word: &str, entry: Entry) -> Result<()> {
        check_entry(&entry).map_err(|e| Error::Lexicon(format!("'{word}': {e}")))?;
        self.entries
            .entry(word.to_string())
            .or_default()
            .push(entry);
        Ok(())
    }

    pub fn senses(&self, word: &str) -> &[Entry] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Entry)> {
        self.entries
            .iter()
            .flat_map(|(w, es)| es.iter().map(move |e| (w.as_str(), e)))
    }

    /// Instantiates every entry against `model`.
    pub fn check_against(&self, model: &Model) -> Result<()> {
        for (w, e) in self.entries() {
            instantiate(&e.den, &e.ty, model)
                .map_err(|err| Error::Lexicon(format!("'{w}': {err}")))?;
        }
        Ok(())
    }
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Lexicon(format!("{}: {e}", path.display())))?;
    Lexicon::from_json(&text)
}

// ---------------------------------------------------------------------------
// schema library

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Det {
    Every,
    Some,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Den {
    Entity(String),
    Pred1(String),
    Pred2(String),
    ProVf,
    Pro(usize),
    Wh(Option<String>),
    Indef(Option<String>),
    Def(Option<String>),
    Quant(Det, Option<String>),
    Focus(String),
    Topic(String),
    IndefDyn(Option<String>),
    ProDyn(usize),
    Push,
    PushDyn,
    Exclo,
    Mo,
    Only,
    Accom,
    Lower,
    Abs(usize),
    AndDyn,
    IfDyn,
    IfStatic,
    Not,
    Implies,
    Another(usize, Option<String>),
}

pub const SCHEMAS: [&str; 27] = [
    "entity",
    "pred1",
    "pred2",
    "pro_vf",
    "pro",
    "wh",
    "indef",
    "def",
    "quant",
    "focus",
    "topic",
    "indef_dyn",
    "pro_dyn",
    "push",
    "push_dyn",
    "exclo",
    "mo",
    "only",
    "accom",
    "lower",
    "abs",
    "and_dyn",
    "if_dyn",
    "if_static",
    "not",
    "implies",
    "another",
];

fn parse_den(spec: &DenSpec) -> Result<Den> {
    let s = spec.schema.as_str();
    if !SCHEMAS.contains(&s) {
        return Err(Error::Lexicon(format!("unknown schema '{s}'")));
    }
    let args = &spec.args;
    let arity = |lo: usize, hi: usize| -> Result<()> {
        if args.len() < lo || args.len() > hi {
            let want = if lo == hi {
                lo.to_string()
            } else {
                format!("{lo} or {hi}")
            };
            return Err(Error::Lexicon(format!(
                "schema '{s}' takes {want} arguments, got {}",
                args.len()
            )));
        }
        Ok(())
    };
    let name = |i: usize| -> Result<String> {
        match &args[i] {
            Arg::Name(n) => Ok(n.clone()),
            other => Err(Error::Lexicon(format!(
                "schema '{s}' argument {i} must be a name, got {other:?}"
            ))),
        }
    };
    let nat = |i: usize| -> Result<usize> {
        match &args[i] {
            Arg::Nat(n) => Ok(*n as usize),
            other => Err(Error::Lexicon(format!(
                "schema '{s}' argument {i} must be a natural, got {other:?}"
            ))),
        }
    };
    let opt_name = |i: usize| -> Result<Option<String>> {
        if args.len() > i {
            name(i).map(Some)
        } else {
            Ok(None)
        }
    };
    let den = match s {
        "entity" | "pred1" | "pred2" | "focus" | "topic" => {
            arity(1, 1)?;
            let n = name(0)?;
            match s {
                "entity" => Den::Entity(n),
                "pred1" => Den::Pred1(n),
                "pred2" => Den::Pred2(n),
                "focus" => Den::Focus(n),
                _ => Den::Topic(n),
            }
        }
        "pro" | "pro_dyn" | "abs" => {
            arity(1, 1)?;
            let n = nat(0)?;
            match s {
                "pro" => Den::Pro(n),
                "pro_dyn" => Den::ProDyn(n),
                _ => Den::Abs(n),
            }
        }
        "wh" | "indef" | "def" | "indef_dyn" => {
            arity(0, 1)?;
            let p = opt_name(0)?;
            match s {
                "wh" => Den::Wh(p),
                "indef" => Den::Indef(p),
                "def" => Den::Def(p),
                _ => Den::IndefDyn(p),
            }
        }
        "quant" => {
            arity(1, 2)?;
            let det = match name(0)?.as_str() {
                "every" => Det::Every,
                "some" => Det::Some,
                "no" => Det::No,
                d => {
                    return Err(Error::Lexicon(format!(
                        "unknown determiner '{d}' (every, some, no)"
                    )))
                }
            };
            Den::Quant(det, opt_name(1)?)
        }
        "another" => {
            arity(1, 2)?;
            Den::Another(nat(0)?, opt_name(1)?)
        }
        _ => {
            arity(0, 0)?;
            match s {
                "pro_vf" => Den::ProVf,
                "push" => Den::Push,
                "push_dyn" => Den::PushDyn,
                "exclo" => Den::Exclo,
                "mo" => Den::Mo,
                "only" => Den::Only,
                "accom" => Den::Accom,
                "lower" => Den::Lower,
                "and_dyn" => Den::AndDyn,
                "if_dyn" => Den::IfDyn,
                "if_static" => Den::IfStatic,
                "not" => Den::Not,
                "implies" => Den::Implies,
                _ => unreachable!("schema list and parser disagree on '{s}'"),
            }
        }
    };
    Ok(den)
}

fn t(s: &str) -> Ty {
    s.parse().expect("schema type")
}

/// Restrictor-taking schemas denote `base` when the restrictor is given and
/// `(e -> t) -> base` otherwise.
fn restricted_ty(p: &Option<String>, base: Ty) -> Ty {
    match p {
        Some(_) => base,
        None => Ty::arrow(t("e -> t"), base),
    }
}

fn accepts(den: &Den, ty: &Ty) -> bool {
    let expect = |s: &str| *ty == t(s);
    match den {
        Den::Entity(_) => expect("e"),
        Den::Pred1(_) => expect("e -> t"),
        Den::Pred2(_) => expect("e -> e -> t"),
        Den::ProVf => expect("R[e] e"),
        Den::Pro(_) => expect("R[g] e"),
        Den::Wh(p) | Den::Indef(p) => *ty == restricted_ty(p, t("S e")),
        Den::Def(p) => *ty == restricted_ty(p, t("M e")) || *ty == restricted_ty(p, Ty::E),
        Den::Quant(_, p) => *ty == restricted_ty(p, t("C[t] e")),
        Den::Focus(_) => expect("F e"),
        Den::Topic(_) => expect("T[g] e"),
        Den::IndefDyn(p) => *ty == restricted_ty(p, t("D[g] e")),
        Den::ProDyn(_) => expect("D[g] e"),
        Den::Push => expect("e -> W[e] e"),
        Den::PushDyn => expect("e -> D[g] e"),
        Den::Exclo | Den::Mo => expect("S t -> t"),
        Den::Only => expect("F t -> t"),
        Den::Accom => expect("M t -> t"),
        Den::Lower => expect("C[t] t -> t"),
        Den::AndDyn | Den::IfDyn => expect("D[g] t -> D[g] t -> D[g] t"),
        Den::IfStatic => expect("S t -> S t -> t"),
        Den::Not => expect("t -> t"),
        Den::Implies => expect("t -> t -> t"),
        Den::Abs(_) => abs_body(ty).is_some(),
        Den::Another(_, p) => *ty == restricted_ty(p, t("R[g] (S e)")),
    }
}

/// For `R[g] b -> R[g] (e -> b)`, returns `b`.
fn abs_body(ty: &Ty) -> Option<&Ty> {
    let g = Eff::r(Ty::G);
    match ty {
        Ty::Arrow(dom, cod) => match (&**dom, &**cod) {
            (Ty::Comp(f1, b), Ty::Comp(f2, eb)) if *f1 == g && *f2 == g => match &**eb {
                Ty::Arrow(e, b2) if **e == Ty::E && b2 == b => Some(b),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn check_entry(entry: &Entry) -> Result<()> {
    let den = parse_den(&entry.den)?;
    if !accepts(&den, &entry.ty) {
        return Err(Error::Lexicon(format!(
            "schema '{}' cannot have type {}",
            entry.den.schema, entry.ty
        )));
    }
    Ok(())
}

fn pred_members(model: &Model, p: &str) -> Result<Vec<u32>> {
    model
        .pred1(p)
        .map(|s| s.iter().copied().collect())
        .ok_or_else(|| Error::Lexicon(format!("model has no pred1 '{p}'")))
}

fn entity(model: &Model, c: &str) -> Result<u32> {
    model
        .resolve(c)
        .ok_or_else(|| Error::Lexicon(format!("model has no entity or constant '{c}'")))
}

fn index(model: &Model, n: usize) -> Result<usize> {
    if n >= model.asgn_len() {
        return Err(Error::Lexicon(format!(
            "index {n} is out of range for assignments of length {}",
            model.asgn_len()
        )));
    }
    Ok(n)
}

/// `x # s`: prepend, then truncate to the assignment length.
fn push_front(x: u32, s: &Value) -> Result<Value> {
    let s = s.as_asgn()?;
    let mut out = Vec::with_capacity(s.len());
    out.push(x);
    out.extend_from_slice(&s[..s.len().saturating_sub(1)]);
    Ok(Value::Asgn(out.into()))
}

fn coord(s: &Value, n: usize) -> Result<u32> {
    Ok(s.as_asgn()?[n])
}

fn restricted(
    model: &Model,
    p: &Option<String>,
    body: impl Fn(Vec<u32>) -> Result<Value> + Send + Sync + 'static,
) -> Result<Value> {
    match p {
        Some(p) => body(pred_members(model, p)?),
        None => {
            let n = model.n_entities();
            Ok(Value::func(Shape::of(&t("e -> t"), model), move |pv| {
                let mut members = Vec::new();
                for x in 0..n {
                    if pv.apply(&Value::Ent(x))?.as_bool()? {
                        members.push(x);
                    }
                }
                body(members)
            }))
        }
    }
}

fn ents(xs: impl IntoIterator<Item = u32>) -> Result<Value> {
    Value::set(xs.into_iter().map(Value::Ent))
}

/// Builds the value of `den` at type `ty` over `model`.
pub fn instantiate(den: &DenSpec, ty: &Ty, model: &Model) -> Result<Value> {
    let d = parse_den(den)?;
    if !accepts(&d, ty) {
        return Err(Error::Lexicon(format!(
            "schema '{}' cannot have type {ty}",
            den.schema
        )));
    }
    let e_sh = Shape::of(&Ty::E, model);
    let g_sh = Shape::of(&Ty::G, model);
    let n = model.n_entities();
    let v = match d {
        Den::Entity(c) => Value::Ent(entity(model, &c)?),
        Den::Pred1(p) => {
            let ext = model
                .pred1(&p)
                .ok_or_else(|| Error::Lexicon(format!("model has no pred1 '{p}'")))?
                .clone();
            Value::func(e_sh, move |x| Ok(Value::Bool(ext.contains(&x.as_ent()?))))
        }
        Den::Pred2(p) => {
            // object first, then subject
            let ext = model
                .pred2(&p)
                .ok_or_else(|| Error::Lexicon(format!("model has no pred2 '{p}'")))?
                .clone();
            let ext = Arc::new(ext);
            let inner = e_sh.clone();
            Value::func(e_sh, move |y| {
                let (y, ext) = (y.as_ent()?, ext.clone());
                Ok(Value::func(inner.clone(), move |x| {
                    Ok(Value::Bool(ext.contains(&(x.as_ent()?, y))))
                }))
            })
        }
        Den::ProVf => Value::func(e_sh, |x| Ok(x.clone())),
        Den::Pro(i) => {
            let i = index(model, i)?;
            Value::func(g_sh, move |g| Ok(Value::Ent(coord(g, i)?)))
        }
        Den::Wh(p) | Den::Indef(p) => restricted(model, &p, ents)?,
        Den::Def(p) => {
            let partial = matches!(ty, Ty::Comp(..))
                || matches!(ty, Ty::Arrow(_, b) if matches!(**b, Ty::Comp(..)));
            restricted(model, &p, move |m| match (m.as_slice(), partial) {
                ([x], true) => Ok(Value::just(Value::Ent(*x))),
                (_, true) => Ok(Value::failure()),
                ([x], false) => Ok(Value::Ent(*x)),
                (_, false) => Err(Error::eval(format!(
                    "definite description has {} referents",
                    m.len()
                ))),
            })?
        }
        Den::Quant(det, p) => {
            let pred_sh = Shape::of(&t("e -> t"), model);
            restricted(model, &p, move |m| {
                Ok(Value::func(pred_sh.clone(), move |q| {
                    let mut hits = m.iter().map(|x| q.apply(&Value::Ent(*x))?.as_bool());
                    let b = match det {
                        Det::Every => hits.try_fold(true, |acc, h| Ok::<_, Error>(acc && h?))?,
                        Det::Some => hits.try_fold(false, |acc, h| Ok::<_, Error>(acc || h?))?,
                        Det::No => !hits.try_fold(false, |acc, h| Ok::<_, Error>(acc || h?))?,
                    };
                    Ok(Value::Bool(b))
                }))
            })?
        }
        Den::Focus(c) => Value::pair(Value::Ent(entity(model, &c)?), ents(0..n)?),
        Den::Topic(c) => {
            let x = entity(model, &c)?;
            Value::func(g_sh, move |s| {
                Ok(Value::pair(Value::Ent(x), push_front(x, s)?))
            })
        }
        Den::IndefDyn(p) => {
            let g_sh = g_sh.clone();
            restricted(model, &p, move |m| {
                Ok(Value::func(g_sh.clone(), move |s| {
                    Value::set(
                        m.iter()
                            .map(|x| Ok(Value::pair(Value::Ent(*x), push_front(*x, s)?)))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }))
            })?
        }
        Den::ProDyn(i) => {
            let i = index(model, i)?;
            Value::func(g_sh, move |s| {
                Value::set([Value::pair(Value::Ent(coord(s, i)?), s.clone())])
            })
        }
        Den::Push => Value::func(e_sh, |x| Ok(Value::pair(x.clone(), x.clone()))),
        Den::PushDyn => Value::func(e_sh, move |x| {
            let x = x.as_ent()?;
            Ok(Value::func(g_sh.clone(), move |s| {
                Value::set([Value::pair(Value::Ent(x), push_front(x, s)?)])
            }))
        }),
        Den::Exclo => Value::func(Shape::of(&t("S t"), model), |m| {
            Ok(Value::Bool(m.as_set()?.contains(&Value::Bool(true))))
        }),
        Den::Mo => Value::func(Shape::of(&t("S t"), model), |m| {
            Ok(Value::Bool(!m.as_set()?.contains(&Value::Bool(false))))
        }),
        Den::Only => Value::func(Shape::of(&t("F t"), model), |m| {
            let (q, alts) = m.as_pair()?;
            let q = q.as_bool()?;
            let true_alts: Vec<bool> = alts
                .as_set()?
                .iter()
                .map(Value::as_bool)
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|p| *p)
                .collect();
            Ok(Value::Bool(true_alts == [q]))
        }),
        Den::Accom => Value::func(Shape::of(&t("M t"), model), |m| match m.as_maybe()? {
            None => Ok(Value::Bool(false)),
            Some(p) => Ok(p.clone()),
        }),
        Den::Lower => {
            let id = crate::effects::identity(&Ty::T, model);
            Value::func(Shape::of(&t("C[t] t"), model), move |m| m.apply(&id))
        }
        Den::AndDyn => {
            let d_sh = Shape::of(&t("D[g] t"), model);
            Value::func(d_sh.clone(), move |r| {
                let (r, d_sh, g_sh) = (r.clone(), d_sh.clone(), g_sh.clone());
                Ok(Value::func(d_sh, move |l| {
                    let (r, l) = (r.clone(), l.clone());
                    Ok(Value::func(g_sh.clone(), move |i| {
                        let mut out = Vec::new();
                        for pj in l.apply(i)?.as_set()? {
                            let (p, j) = pj.as_pair()?;
                            for qk in r.apply(j)?.as_set()? {
                                let (q, k) = qk.as_pair()?;
                                out.push(Value::pair(
                                    Value::Bool(p.as_bool()? && q.as_bool()?),
                                    k.clone(),
                                ));
                            }
                        }
                        Value::set(out)
                    }))
                }))
            })
        }
        Den::IfDyn => {
            let d_sh = Shape::of(&t("D[g] t"), model);
            Value::func(d_sh.clone(), move |m| {
                let (m, d_sh, g_sh) = (m.clone(), d_sh.clone(), g_sh.clone());
                Ok(Value::func(d_sh, move |nv| {
                    let (m, nv) = (m.clone(), nv.clone());
                    Ok(Value::func(g_sh.clone(), move |i| {
                        let mut r = true;
                        for pj in m.apply(i)?.as_set()? {
                            let (p, j) = pj.as_pair()?;
                            if p.as_bool()? {
                                let ok = nv.apply(j)?.as_set()?.iter().any(|qk| {
                                    qk.as_pair().and_then(|(q, _)| q.as_bool()).unwrap_or(false)
                                });
                                r &= ok;
                            }
                        }
                        Value::set([Value::pair(Value::Bool(r), i.clone())])
                    }))
                }))
            })
        }
        Den::IfStatic => {
            let st = Shape::of(&t("S t"), model);
            Value::func(st.clone(), move |m| {
                let m = m.clone();
                Ok(Value::func(st.clone(), move |nv| {
                    let some_n = nv.as_set()?.contains(&Value::Bool(true));
                    let mut all = true;
                    for p in m.as_set()? {
                        all &= !p.as_bool()? || some_n;
                    }
                    Ok(Value::Bool(all))
                }))
            })
        }
        Den::Not => Value::func(Shape::of(&Ty::T, model), |p| Ok(Value::Bool(!p.as_bool()?))),
        Den::Implies => {
            let b = Shape::of(&Ty::T, model);
            Value::func(b.clone(), move |p| {
                let p = p.as_bool()?;
                Ok(Value::func(b.clone(), move |q| {
                    Ok(Value::Bool(!p || q.as_bool()?))
                }))
            })
        }
        Den::Abs(i) => {
            let i = index(model, i)?;
            let b_ty = abs_body(ty).expect("checked").clone();
            Value::func(Shape::of(&Ty::comp(Eff::r(Ty::G), b_ty), model), move |b| {
                let (b, e_sh) = (b.clone(), e_sh.clone());
                Ok(Value::func(g_sh.clone(), move |g| {
                    let (b, g) = (b.clone(), g.clone());
                    Ok(Value::func(e_sh.clone(), move |x| {
                        let mut gx = g.as_asgn()?.to_vec();
                        gx[i] = x.as_ent()?;
                        b.apply(&Value::Asgn(gx.into()))
                    }))
                }))
            })
        }
        Den::Another(i, p) => {
            let i = index(model, i)?;
            restricted(model, &p, move |m| {
                Ok(Value::func(g_sh.clone(), move |s| {
                    let gi = coord(s, i)?;
                    ents(m.iter().copied().filter(|x| *x != gi))
                }))
            })?
        }
    };
    Ok(v)
}
