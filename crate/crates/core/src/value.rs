//! Extensional values over a finite model.
//!
//! Every type is interpreted by a [`Shape`], a structural carrier that knows
//! how to count, enumerate and index its inhabitants. Functions are either
//! finite tables indexed by the rank of their argument, or closures that are
//! tabulated on demand (needed when a value is placed in a set or compared).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::ty::{Base, Eff, Ty};

/// Largest number of entries a single function table, or an enumerated
/// domain, may have.
pub const TABLE_CAP: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// One inhabitant. Not reachable from [`Ty`]; used for placeholder arguments.
    Unit,
    Bool,
    Ent(u32),
    Asgn {
        len: u32,
        n: u32,
    },
    Fun(Arc<Shape>, Arc<Shape>),
    Set(Arc<Shape>),
    Maybe(Arc<Shape>),
    Pair(Arc<Shape>, Arc<Shape>),
    /// Events: no extensional interpretation.
    Opaque,
}

impl Shape {
    pub fn of(ty: &Ty, model: &Model) -> Arc<Shape> {
        Arc::new(Self::build(ty, model))
    }

    fn build(ty: &Ty, model: &Model) -> Shape {
        let n = model.n_entities();
        let sh = |t: &Ty| Arc::new(Self::build(t, model));
        match ty {
            Ty::Base(Base::E) => Shape::Ent(n),
            Ty::Base(Base::T) => Shape::Bool,
            Ty::Base(Base::G) => Shape::Asgn {
                len: model.asgn_len() as u32,
                n,
            },
            Ty::Base(Base::V) => Shape::Opaque,
            Ty::Arrow(a, b) => Shape::Fun(sh(a), sh(b)),
            Ty::Comp(eff, a) => {
                let a = sh(a);
                match eff {
                    Eff::S => Shape::Set(a),
                    Eff::F => Shape::Pair(a.clone(), Arc::new(Shape::Set(a))),
                    Eff::M => Shape::Maybe(a),
                    Eff::R(p) => Shape::Fun(sh(p), a),
                    Eff::W(p) => Shape::Pair(a, sh(p)),
                    Eff::T(s) => {
                        let s = sh(s);
                        Shape::Fun(s.clone(), Arc::new(Shape::Pair(a, s)))
                    }
                    Eff::D(s) => {
                        let s = sh(s);
                        Shape::Fun(s.clone(), Arc::new(Shape::Set(Arc::new(Shape::Pair(a, s)))))
                    }
                    Eff::C(r) => {
                        let r = sh(r);
                        Shape::Fun(Arc::new(Shape::Fun(a, r.clone())), r)
                    }
                }
            }
        }
    }

    /// Number of inhabitants, or `None` when it does not fit in 128 bits or
    /// the shape is not enumerable.
    pub fn size(&self) -> Option<u128> {
        match self {
            Shape::Unit => Some(1),
            Shape::Bool => Some(2),
            Shape::Ent(n) => Some(*n as u128),
            Shape::Asgn { len, n } => (*n as u128).checked_pow(*len),
            Shape::Fun(d, c) => {
                let d = d.size()?;
                let c = c.size()?;
                match (d, c) {
                    (0, _) => Some(1),
                    (_, 0) | (_, 1) => Some(c),
                    _ => c.checked_pow(u32::try_from(d).ok()?),
                }
            }
            Shape::Set(a) => {
                let a = a.size()?;
                if a >= 127 {
                    None
                } else {
                    Some(1u128 << a)
                }
            }
            Shape::Maybe(a) => a.size()?.checked_add(1),
            Shape::Pair(a, b) => a.size()?.checked_mul(b.size()?),
            Shape::Opaque => None,
        }
    }

    fn size_err(&self) -> Result<u128> {
        self.size()
            .ok_or_else(|| Error::DomainTooLarge(format!("{self}")))
    }

    fn table_len(&self) -> Result<usize> {
        let n = self.size_err()?;
        if n > TABLE_CAP {
            return Err(Error::DomainTooLarge(format!("{self} has {n} elements")));
        }
        Ok(n as usize)
    }

    /// The `idx`-th inhabitant in the canonical enumeration order.
    pub fn nth(self: &Arc<Self>, idx: u128) -> Result<Value> {
        Ok(match &**self {
            Shape::Unit => Value::Unit,
            Shape::Bool => Value::Bool(idx == 1),
            Shape::Ent(_) => Value::Ent(idx as u32),
            Shape::Asgn { len, n } => {
                let mut digits = vec![0u32; *len as usize];
                let mut rest = idx;
                for d in digits.iter_mut().rev() {
                    *d = (rest % *n as u128) as u32;
                    rest /= *n as u128;
                }
                Value::Asgn(digits.into())
            }
            Shape::Fun(d, c) => {
                let len = d.table_len()?;
                let base = c.size_err()?;
                let mut entries = vec![Value::Unit; len];
                let mut rest = idx;
                for e in entries.iter_mut().rev() {
                    *e = c.nth(rest % base)?;
                    rest /= base;
                }
                Value::Func(Func {
                    dom: d.clone(),
                    body: Body::Table(entries.into()),
                })
            }
            Shape::Set(a) => {
                let mut out = BTreeSet::new();
                let mut bits = idx;
                let mut i = 0u128;
                while bits != 0 {
                    if bits & 1 == 1 {
                        out.insert(a.nth(i)?);
                    }
                    bits >>= 1;
                    i += 1;
                }
                Value::Set(Arc::new(out))
            }
            Shape::Maybe(a) => {
                if idx == 0 {
                    Value::Maybe(None)
                } else {
                    Value::just(a.nth(idx - 1)?)
                }
            }
            Shape::Pair(a, b) => {
                let nb = b.size_err()?;
                Value::pair(a.nth(idx / nb)?, b.nth(idx % nb)?)
            }
            Shape::Opaque => return Err(Error::DomainTooLarge("type v is not enumerable".into())),
        })
    }

    /// Position of `v` in the canonical enumeration; inverse of [`Shape::nth`].
    pub fn rank(&self, v: &Value) -> Result<u128> {
        let mismatch = || Error::eval(format!("value {v:?} does not inhabit {self}"));
        match (self, v) {
            (Shape::Unit, Value::Unit) => Ok(0),
            (Shape::Bool, Value::Bool(b)) => Ok(*b as u128),
            (Shape::Ent(n), Value::Ent(i)) if i < n => Ok(*i as u128),
            (Shape::Asgn { len, n }, Value::Asgn(xs)) if xs.len() == *len as usize => {
                let mut r = 0u128;
                for x in xs.iter() {
                    if x >= n {
                        return Err(mismatch());
                    }
                    r = r * *n as u128 + *x as u128;
                }
                Ok(r)
            }
            (Shape::Fun(d, c), Value::Func(f)) => {
                let len = d.table_len()?;
                let base = c.size_err()?;
                let mut r = 0u128;
                for i in 0..len {
                    let out = f.apply(&d.nth(i as u128)?)?;
                    r = r
                        .checked_mul(base)
                        .and_then(|r| r.checked_add(c.rank(&out).ok()?))
                        .ok_or_else(|| Error::DomainTooLarge(format!("{self}")))?;
                }
                Ok(r)
            }
            (Shape::Set(a), Value::Set(xs)) => {
                let mut r = 0u128;
                for x in xs.iter() {
                    let i = a.rank(x)?;
                    if i >= 127 {
                        return Err(Error::DomainTooLarge(format!("{self}")));
                    }
                    r |= 1 << i;
                }
                Ok(r)
            }
            (Shape::Maybe(_), Value::Maybe(None)) => Ok(0),
            (Shape::Maybe(a), Value::Maybe(Some(x))) => Ok(1 + a.rank(x)?),
            (Shape::Pair(a, b), Value::Pair(p)) => {
                let nb = b.size_err()?;
                Ok(a.rank(&p.0)? * nb + b.rank(&p.1)?)
            }
            _ => Err(mismatch()),
        }
    }

    /// Whether `v` inhabits this shape. Closures are checked pointwise.
    pub fn contains(&self, v: &Value) -> Result<bool> {
        Ok(match (self, v) {
            (Shape::Unit, Value::Unit) | (Shape::Bool, Value::Bool(_)) => true,
            (Shape::Ent(n), Value::Ent(i)) => i < n,
            (Shape::Asgn { len, n }, Value::Asgn(xs)) => {
                xs.len() == *len as usize && xs.iter().all(|x| x < n)
            }
            (Shape::Fun(d, c), Value::Func(f)) => {
                if *f.dom != **d {
                    return Ok(false);
                }
                let len = d.table_len()?;
                for i in 0..len {
                    if !c.contains(&f.apply(&d.nth(i as u128)?)?)? {
                        return Ok(false);
                    }
                }
                true
            }
            (Shape::Set(a), Value::Set(xs)) => {
                for x in xs.iter() {
                    if !a.contains(x)? {
                        return Ok(false);
                    }
                }
                true
            }
            (Shape::Maybe(_), Value::Maybe(None)) => true,
            (Shape::Maybe(a), Value::Maybe(Some(x))) => a.contains(x)?,
            (Shape::Pair(a, b), Value::Pair(p)) => a.contains(&p.0)? && b.contains(&p.1)?,
            _ => false,
        })
    }

    pub fn enumerate(self: &Arc<Self>) -> Result<Vec<Value>> {
        let n = self.table_len()?;
        (0..n as u128).map(|i| self.nth(i)).collect()
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Unit => f.write_str("()"),
            Shape::Bool => f.write_str("bool"),
            Shape::Ent(n) => write!(f, "ent[{n}]"),
            Shape::Asgn { len, n } => write!(f, "ent[{n}]^{len}"),
            Shape::Fun(a, b) => write!(f, "({a} => {b})"),
            Shape::Set(a) => write!(f, "set({a})"),
            Shape::Maybe(a) => write!(f, "maybe({a})"),
            Shape::Pair(a, b) => write!(f, "({a}, {b})"),
            Shape::Opaque => f.write_str("opaque"),
        }
    }
}

pub fn enumerate_domain(ty: &Ty, model: &Model) -> Result<Vec<Value>> {
    Shape::of(ty, model).enumerate()
}

// ---------------------------------------------------------------------------
// values

type Closure = dyn Fn(&Value) -> Result<Value> + Send + Sync;

#[derive(Clone)]
enum Body {
    Table(Arc<[Value]>),
    Lazy(Arc<Closure>),
}

#[derive(Clone)]
pub struct Func {
    dom: Arc<Shape>,
    body: Body,
}

impl Func {
    pub fn lazy(
        dom: Arc<Shape>,
        f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> Func {
        Func {
            dom,
            body: Body::Lazy(Arc::new(f)),
        }
    }

    /// Builds a table by evaluating `f` at every point of the domain.
    pub fn tabulate_with(dom: Arc<Shape>, f: impl Fn(&Value) -> Result<Value>) -> Result<Func> {
        let len = dom.table_len()?;
        let entries = (0..len as u128)
            .map(|i| f(&dom.nth(i)?)?.normalize())
            .collect::<Result<Vec<_>>>()?;
        Ok(Func {
            dom,
            body: Body::Table(entries.into()),
        })
    }

    pub fn dom(&self) -> &Arc<Shape> {
        &self.dom
    }

    pub fn is_table(&self) -> bool {
        matches!(self.body, Body::Table(_))
    }

    pub fn apply(&self, x: &Value) -> Result<Value> {
        match &self.body {
            Body::Table(t) => {
                let i = self.dom.rank(x)?;
                Ok(t[i as usize].clone())
            }
            Body::Lazy(f) => f(x),
        }
    }

    pub fn tabulate(&self) -> Result<Func> {
        match &self.body {
            Body::Table(t) if t.iter().all(Value::is_normal) => Ok(self.clone()),
            _ => Func::tabulate_with(self.dom.clone(), |x| self.apply(x)),
        }
    }
}

/// An extensional semantic value.
#[derive(Clone)]
pub enum Value {
    Unit,
    Bool(bool),
    Ent(u32),
    Asgn(Arc<[u32]>),
    Pair(Arc<(Value, Value)>),
    Maybe(Option<Arc<Value>>),
    Set(Arc<BTreeSet<Value>>),
    Func(Func),
}

impl Value {
    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Arc::new((a, b)))
    }

    pub fn just(a: Value) -> Value {
        Value::Maybe(Some(Arc::new(a)))
    }

    pub fn failure() -> Value {
        Value::Maybe(None)
    }

    /// A set of values. Members are tabulated so that they can be ordered.
    pub fn set(items: impl IntoIterator<Item = Value>) -> Result<Value> {
        let mut out = BTreeSet::new();
        for v in items {
            out.insert(v.normalize()?);
        }
        Ok(Value::Set(Arc::new(out)))
    }

    pub fn func(
        dom: Arc<Shape>,
        f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> Value {
        Value::Func(Func::lazy(dom, f))
    }

    pub fn apply(&self, x: &Value) -> Result<Value> {
        self.as_func()?.apply(x)
    }

    pub fn apply2(&self, x: &Value, y: &Value) -> Result<Value> {
        self.apply(x)?.apply(y)
    }

    pub fn as_bool(&self) -> Result<bool> {
        match self {
            Value::Bool(b) => Ok(*b),
            other => Err(Error::eval(format!(
                "expected a truth value, got {other:?}"
            ))),
        }
    }

    pub fn as_ent(&self) -> Result<u32> {
        match self {
            Value::Ent(i) => Ok(*i),
            other => Err(Error::eval(format!("expected an entity, got {other:?}"))),
        }
    }

    pub fn as_asgn(&self) -> Result<&Arc<[u32]>> {
        match self {
            Value::Asgn(a) => Ok(a),
            other => Err(Error::eval(format!(
                "expected an assignment, got {other:?}"
            ))),
        }
    }

    pub fn as_pair(&self) -> Result<(&Value, &Value)> {
        match self {
            Value::Pair(p) => Ok((&p.0, &p.1)),
            other => Err(Error::eval(format!("expected a pair, got {other:?}"))),
        }
    }

    pub fn as_set(&self) -> Result<&BTreeSet<Value>> {
        match self {
            Value::Set(s) => Ok(s),
            other => Err(Error::eval(format!("expected a set, got {other:?}"))),
        }
    }

    pub fn as_maybe(&self) -> Result<Option<&Value>> {
        match self {
            Value::Maybe(m) => Ok(m.as_deref()),
            other => Err(Error::eval(format!(
                "expected a possibly failing value, got {other:?}"
            ))),
        }
    }

    pub fn as_func(&self) -> Result<&Func> {
        match self {
            Value::Func(f) => Ok(f),
            other => Err(Error::eval(format!("expected a function, got {other:?}"))),
        }
    }

    fn is_normal(&self) -> bool {
        match self {
            Value::Func(f) => match &f.body {
                Body::Table(t) => t.iter().all(Value::is_normal),
                Body::Lazy(_) => false,
            },
            Value::Pair(p) => p.0.is_normal() && p.1.is_normal(),
            Value::Maybe(Some(x)) => x.is_normal(),
            _ => true,
        }
    }

    /// The same value with every closure replaced by its table.
    pub fn normalize(&self) -> Result<Value> {
        if self.is_normal() {
            return Ok(self.clone());
        }
        Ok(match self {
            Value::Func(f) => Value::Func(f.tabulate()?),
            Value::Pair(p) => Value::pair(p.0.normalize()?, p.1.normalize()?),
            Value::Maybe(Some(x)) => Value::just(x.normalize()?),
            other => other.clone(),
        })
    }
}

/// Extensional comparison. Functions are compared pointwise over their
/// domain in enumeration order.
pub fn compare_values(a: &Value, b: &Value) -> Result<Ordering> {
    fn tag(v: &Value) -> u8 {
        match v {
            Value::Unit => 0,
            Value::Bool(_) => 1,
            Value::Ent(_) => 2,
            Value::Asgn(_) => 3,
            Value::Pair(_) => 4,
            Value::Maybe(_) => 5,
            Value::Set(_) => 6,
            Value::Func(_) => 7,
        }
    }
    Ok(match (a, b) {
        (Value::Unit, Value::Unit) => Ordering::Equal,
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Ent(x), Value::Ent(y)) => x.cmp(y),
        (Value::Asgn(x), Value::Asgn(y)) => x.cmp(y),
        (Value::Pair(x), Value::Pair(y)) => match compare_values(&x.0, &y.0)? {
            Ordering::Equal => compare_values(&x.1, &y.1)?,
            o => o,
        },
        (Value::Maybe(x), Value::Maybe(y)) => match (x, y) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => compare_values(x, y)?,
        },
        (Value::Set(x), Value::Set(y)) => x.iter().cmp(y.iter()),
        (Value::Func(f), Value::Func(g)) => {
            match f.dom.cmp(&g.dom) {
                Ordering::Equal => {}
                o => return Ok(o),
            }
            if let (Body::Table(x), Body::Table(y)) = (&f.body, &g.body) {
                for (p, q) in x.iter().zip(y.iter()) {
                    match compare_values(p, q)? {
                        Ordering::Equal => {}
                        o => return Ok(o),
                    }
                }
                return Ok(Ordering::Equal);
            }
            let len = f.dom.table_len()?;
            for i in 0..len as u128 {
                let x = f.dom.nth(i)?;
                match compare_values(&f.apply(&x)?, &g.apply(&x)?)? {
                    Ordering::Equal => {}
                    o => return Ok(o),
                }
            }
            Ordering::Equal
        }
        _ => tag(a).cmp(&tag(b)),
    })
}

/// Extensional equality.
pub fn values_equal(a: &Value, b: &Value) -> Result<bool> {
    Ok(compare_values(a, b)? == Ordering::Equal)
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    /// Panics if a closure cannot be evaluated over its domain; values built
    /// by this crate are always total.
    fn cmp(&self, other: &Self) -> Ordering {
        compare_values(self, other).expect("extensional comparison failed")
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Ent(i) => write!(f, "#{i}"),
            Value::Asgn(xs) => write!(f, "g{xs:?}"),
            Value::Pair(p) => write!(f, "<{:?}, {:?}>", p.0, p.1),
            Value::Maybe(None) => f.write_str("Failure"),
            Value::Maybe(Some(x)) => write!(f, "Just({x:?})"),
            Value::Set(s) => f.debug_set().entries(s.iter()).finish(),
            Value::Func(func) => match &func.body {
                Body::Table(t) => write!(f, "fn{:?}", &t[..]),
                Body::Lazy(_) => write!(f, "fn<{}>", func.dom),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// rendering

/// Functions over domains larger than this are shown opaquely.
const RENDER_LIMIT: u128 = 4096;

/// Human-readable rendering using entity names from the model.
pub fn render(v: &Value, model: &Model) -> String {
    match v {
        Value::Unit => "()".into(),
        Value::Bool(b) => b.to_string(),
        Value::Ent(i) => model.entity_name(*i).to_string(),
        Value::Asgn(xs) => {
            let names: Vec<&str> = xs.iter().map(|x| model.entity_name(*x)).collect();
            format!("[{}]", names.join(", "))
        }
        Value::Pair(p) => format!("⟨{}, {}⟩", render(&p.0, model), render(&p.1, model)),
        Value::Maybe(None) => "#".into(),
        Value::Maybe(Some(x)) => render(x, model),
        Value::Set(s) => {
            let items: Vec<String> = s.iter().map(|x| render(x, model)).collect();
            format!("{{{}}}", items.join(", "))
        }
        Value::Func(f) => match function_graph(f) {
            Some(graph) => {
                let items: Vec<String> = graph
                    .iter()
                    .map(|(a, b)| format!("{} ↦ {}", render(a, model), render(b, model)))
                    .collect();
                format!("[{}]", items.join(", "))
            }
            None => format!("<function on {}>", f.dom),
        },
    }
}

fn function_graph(f: &Func) -> Option<Vec<(Value, Value)>> {
    let n = f.dom.size()?;
    if n > RENDER_LIMIT {
        return None;
    }
    (0..n)
        .map(|i| {
            let x = f.dom.nth(i).ok()?;
            let y = f.apply(&x).ok()?;
            Some((x, y))
        })
        .collect()
}

/// JSON rendering: entities as names, truth values as booleans, sets as
/// `{"set": [...]}`, pairs as `{"pair": [a, b]}`, failure as `"#"`, and
/// functions as `{"fn": [[arg, value], ...]}`.
pub fn to_json(v: &Value, model: &Model) -> serde_json::Value {
    use serde_json::{json, Value as J};
    match v {
        Value::Unit => J::Null,
        Value::Bool(b) => J::Bool(*b),
        Value::Ent(i) => J::String(model.entity_name(*i).to_string()),
        Value::Asgn(xs) => {
            json!({ "asgn": xs.iter().map(|x| model.entity_name(*x)).collect::<Vec<_>>() })
        }
        Value::Pair(p) => json!({ "pair": [to_json(&p.0, model), to_json(&p.1, model)] }),
        Value::Maybe(None) => J::String("#".into()),
        Value::Maybe(Some(x)) => json!({ "just": to_json(x, model) }),
        Value::Set(s) => json!({ "set": s.iter().map(|x| to_json(x, model)).collect::<Vec<_>>() }),
        Value::Func(f) => match function_graph(f) {
            Some(graph) => json!({
                "fn": graph
                    .iter()
                    .map(|(a, b)| json!([to_json(a, model), to_json(b, model)]))
                    .collect::<Vec<_>>()
            }),
            None => json!({ "fn": null, "domain": f.dom.to_string() }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ty::parse_type;

    fn model(n: usize, g: usize) -> Model {
        Model::bare(n, g)
    }

    fn count(ty: &str, m: &Model) -> usize {
        enumerate_domain(&parse_type(ty).unwrap(), m).unwrap().len()
    }

    #[test]
    fn domain_sizes() {
        let m3 = model(3, 2);
        assert_eq!(
            enumerate_domain(&Ty::T, &m3).unwrap(),
            vec![Value::Bool(false), Value::Bool(true)]
        );
        assert_eq!(count("e -> t", &m3), 8);
        // 2^(2^3): one truth value per property of entities
        assert_eq!(count("C[t] e", &m3), 256);
        assert_eq!(count("g", &m3), 9);
        assert_eq!(count("M e", &m3), 4);
        assert_eq!(count("S e", &m3), 8);
        assert_eq!(count("W[t] e", &m3), 6);
        assert_eq!(count("F e", &m3), 24);
        let m2 = model(2, 1);
        // states 2, pairs 4, subsets 16, one subset per state
        assert_eq!(count("D[g] e", &m2), 256);
        assert_eq!(count("T[g] e", &m2), 16);
    }

    #[test]
    fn maybe_enumerates_failure_first() {
        let m = model(2, 1);
        let vs = enumerate_domain(&parse_type("M e").unwrap(), &m).unwrap();
        assert_eq!(vs[0], Value::failure());
        assert_eq!(vs[1], Value::just(Value::Ent(0)));
    }

    #[test]
    fn rank_inverts_nth() {
        let m = model(2, 1);
        for ty in [
            "e",
            "t",
            "g",
            "e -> t",
            "S e",
            "M (e -> t)",
            "W[t] e",
            "C[t] e",
            "D[g] t",
            "F t",
            "e -> e -> t",
        ] {
            let sh = Shape::of(&parse_type(ty).unwrap(), &m);
            for (i, v) in sh.enumerate().unwrap().iter().enumerate() {
                assert_eq!(sh.rank(v).unwrap(), i as u128, "{ty}");
                assert!(sh.contains(v).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let m = model(2, 1);
        for ty in ["S (e -> t)", "D[g] e", "C[t] t"] {
            let vs = enumerate_domain(&parse_type(ty).unwrap(), &m).unwrap();
            let set: BTreeSet<Value> = vs.iter().cloned().collect();
            assert_eq!(set.len(), vs.len(), "{ty}");
        }
    }

    #[test]
    fn domain_cap() {
        let m = model(3, 1);
        let err = enumerate_domain(&parse_type("(e -> t) -> e -> t").unwrap(), &m).unwrap_err();
        assert!(matches!(err, Error::DomainTooLarge(_)));
        assert!(enumerate_domain(&Ty::V, &m).is_err());
    }

    #[test]
    fn lazy_and_table_functions_compare_extensionally() {
        let m = model(3, 1);
        let dom = Shape::of(&Ty::E, &m);
        let lazy = Value::func(dom.clone(), |x| Ok(Value::Bool(x.as_ent()? == 1)));
        let table = Value::Func(
            Func::tabulate_with(dom.clone(), |x| Ok(Value::Bool(x.as_ent()? == 1))).unwrap(),
        );
        assert!(values_equal(&lazy, &table).unwrap());
        let other = Value::func(dom, |x| Ok(Value::Bool(x.as_ent()? == 2)));
        assert!(!values_equal(&lazy, &other).unwrap());
    }

    #[test]
    fn set_equality_is_order_free() {
        let a = Value::set([Value::Ent(0), Value::Ent(1)]).unwrap();
        let b = Value::set([Value::Ent(1), Value::Ent(0)]).unwrap();
        assert!(values_equal(&a, &b).unwrap());
        let p = Value::pair(Value::Ent(0), Value::Bool(true));
        let q = Value::pair(Value::Ent(0), Value::Bool(false));
        assert!(!values_equal(&p, &q).unwrap());
    }

    #[test]
    fn tables_differing_at_one_point() {
        let m = model(2, 1);
        let vs = enumerate_domain(&parse_type("e -> t").unwrap(), &m).unwrap();
        assert!(!values_equal(&vs[0], &vs[1]).unwrap());
    }

    #[test]
    fn sets_tabulate_lazy_members() {
        let m = model(2, 1);
        let dom = Shape::of(&Ty::E, &m);
        let f = Value::func(dom.clone(), |_| Ok(Value::Bool(true)));
        let s = Value::set([f.clone(), f]).unwrap();
        let members = s.as_set().unwrap();
        assert_eq!(members.len(), 1);
        assert!(members.iter().next().unwrap().as_func().unwrap().is_table());
    }

    #[test]
    fn renders_with_entity_names() {
        let m = Model::from_json(r#"{"entities":["j","m"]}"#).unwrap();
        let v = Value::set([Value::pair(Value::Ent(0), Value::Bool(true))]).unwrap();
        assert_eq!(render(&v, &m), "{⟨j, true⟩}");
        assert_eq!(to_json(&Value::failure(), &m), serde_json::json!("#"));
        let f = Value::func(Shape::of(&Ty::E, &m), |x| Ok(Value::Bool(x.as_ent()? == 0)));
        assert_eq!(render(&f, &m), "[j ↦ true, m ↦ false]");
    }
}
