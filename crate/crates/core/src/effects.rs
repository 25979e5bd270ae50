//! Functor, applicative and monad operations for every effect, and the
//! adjunction between writing and reading.
//!
//! Operations take the underlying types explicitly so that any closures they
//! build know their domains.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::ty::{applicative, monad, monoid, Eff, Ty};
use crate::value::{Shape, Value};

fn pure_fn(dom: Arc<Shape>, f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static) -> Value {
    Value::func(dom, f)
}

fn union(sets: impl IntoIterator<Item = Result<Value>>) -> Result<Value> {
    let mut out: BTreeSet<Value> = BTreeSet::new();
    for s in sets {
        out.extend(s?.as_set()?.iter().cloned());
    }
    Ok(Value::Set(Arc::new(out)))
}

fn require_applicative(eff: &Eff) -> Result<()> {
    if applicative(eff) {
        Ok(())
    } else {
        Err(Error::eval(format!(
            "{eff} is not applicative: its parameter is not a monoid"
        )))
    }
}

fn require_monad(eff: &Eff) -> Result<()> {
    if monad(eff) {
        Ok(())
    } else {
        Err(Error::eval(format!("{eff} is not a monad")))
    }
}

/// The writer's monoid: conjunction on truth values.
fn mappend(o: &Ty, x: &Value, y: &Value) -> Result<Value> {
    if !monoid(o) {
        return Err(Error::eval(format!("{o} is not a monoid")));
    }
    Ok(Value::Bool(x.as_bool()? && y.as_bool()?))
}

fn mempty(o: &Ty) -> Result<Value> {
    if !monoid(o) {
        return Err(Error::eval(format!("{o} is not a monoid")));
    }
    Ok(Value::Bool(true))
}

/// The identity function on values of type `ty`.
pub fn identity(ty: &Ty, model: &Model) -> Value {
    pure_fn(Shape::of(ty, model), |x| Ok(x.clone()))
}

/// `k • m`
pub fn fmap(model: &Model, eff: &Eff, a: &Ty, b: &Ty, k: &Value, m: &Value) -> Result<Value> {
    let k = k.clone();
    let m = m.clone();
    match eff {
        Eff::S => Value::set(
            m.as_set()?
                .iter()
                .map(|x| k.apply(x))
                .collect::<Result<Vec<_>>>()?,
        ),
        Eff::F => {
            let (x, alts) = m.as_pair()?;
            let alts = alts
                .as_set()?
                .iter()
                .map(|y| k.apply(y))
                .collect::<Result<Vec<_>>>()?;
            Ok(Value::pair(k.apply(x)?, Value::set(alts)?))
        }
        Eff::M => Ok(match m.as_maybe()? {
            Some(x) => Value::just(k.apply(x)?),
            None => Value::failure(),
        }),
        Eff::R(p) => Ok(pure_fn(Shape::of(p, model), move |i| k.apply(&m.apply(i)?))),
        Eff::W(_) => {
            let (x, o) = m.as_pair()?;
            Ok(Value::pair(k.apply(x)?, o.clone()))
        }
        Eff::T(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            let out = m.apply(s)?;
            let (x, t) = out.as_pair()?;
            Ok(Value::pair(k.apply(x)?, t.clone()))
        })),
        Eff::D(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            let outs = m.apply(s)?;
            Value::set(
                outs.as_set()?
                    .iter()
                    .map(|p| {
                        let (x, t) = p.as_pair()?;
                        Ok(Value::pair(k.apply(x)?, t.clone()))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )
        })),
        Eff::C(r) => {
            let cont = Shape::of(&Ty::arrow(b.clone(), (**r).clone()), model);
            let a_sh = Shape::of(a, model);
            Ok(pure_fn(cont, move |c| {
                let (c, k) = (c.clone(), k.clone());
                m.apply(&pure_fn(a_sh.clone(), move |x| c.apply(&k.apply(x)?)))
            }))
        }
    }
}

/// `η x`
pub fn pure(model: &Model, eff: &Eff, a: &Ty, x: &Value) -> Result<Value> {
    require_applicative(eff)?;
    let x = x.clone();
    match eff {
        Eff::S => Value::set([x]),
        Eff::F => Ok(Value::pair(x.clone(), Value::set([x])?)),
        Eff::M => Ok(Value::just(x)),
        Eff::R(p) => Ok(pure_fn(Shape::of(p, model), move |_| Ok(x.clone()))),
        Eff::W(o) => Ok(Value::pair(x, mempty(o)?)),
        Eff::T(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            Ok(Value::pair(x.clone(), s.clone()))
        })),
        Eff::D(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            Value::set([Value::pair(x.clone(), s.clone())])
        })),
        Eff::C(r) => {
            let cont = Shape::of(&Ty::arrow(a.clone(), (**r).clone()), model);
            Ok(pure_fn(cont, move |c| c.apply(&x)))
        }
    }
}

/// `ff ⊛ xx`, where `ff : Σ(a → b)` and `xx : Σa`. Effects are sequenced
/// left to right.
pub fn ap(model: &Model, eff: &Eff, a: &Ty, b: &Ty, ff: &Value, xx: &Value) -> Result<Value> {
    require_applicative(eff)?;
    let ff = ff.clone();
    let xx = xx.clone();
    match eff {
        Eff::S => {
            let mut out = Vec::new();
            for f in ff.as_set()? {
                for x in xx.as_set()? {
                    out.push(f.apply(x)?);
                }
            }
            Value::set(out)
        }
        Eff::F => {
            let (f0, fs) = ff.as_pair()?;
            let (x0, xs) = xx.as_pair()?;
            let mut alts = Vec::new();
            for f in fs.as_set()? {
                for x in xs.as_set()? {
                    alts.push(f.apply(x)?);
                }
            }
            Ok(Value::pair(f0.apply(x0)?, Value::set(alts)?))
        }
        Eff::M => Ok(match (ff.as_maybe()?, xx.as_maybe()?) {
            (Some(f), Some(x)) => Value::just(f.apply(x)?),
            _ => Value::failure(),
        }),
        Eff::R(p) => Ok(pure_fn(Shape::of(p, model), move |i| {
            ff.apply(i)?.apply(&xx.apply(i)?)
        })),
        Eff::W(o) => {
            let (f, o1) = ff.as_pair()?;
            let (x, o2) = xx.as_pair()?;
            Ok(Value::pair(f.apply(x)?, mappend(o, o1, o2)?))
        }
        Eff::T(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            let r1 = ff.apply(s)?;
            let (f, t) = r1.as_pair()?;
            let r2 = xx.apply(t)?;
            let (x, u) = r2.as_pair()?;
            Ok(Value::pair(f.apply(x)?, u.clone()))
        })),
        Eff::D(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            let mut out = Vec::new();
            for p in ff.apply(s)?.as_set()? {
                let (f, t) = p.as_pair()?;
                for q in xx.apply(t)?.as_set()? {
                    let (x, u) = q.as_pair()?;
                    out.push(Value::pair(f.apply(x)?, u.clone()));
                }
            }
            Value::set(out)
        })),
        Eff::C(r) => {
            let cont = Shape::of(&Ty::arrow(b.clone(), (**r).clone()), model);
            let f_sh = Shape::of(&Ty::arrow(a.clone(), b.clone()), model);
            let a_sh = Shape::of(a, model);
            Ok(pure_fn(cont, move |c| {
                let (c, xx, a_sh) = (c.clone(), xx.clone(), a_sh.clone());
                ff.apply(&pure_fn(f_sh.clone(), move |f| {
                    let (c, f) = (c.clone(), f.clone());
                    xx.apply(&pure_fn(a_sh.clone(), move |x| c.apply(&f.apply(x)?)))
                }))
            }))
        }
    }
}

/// `m ≫= k`, where `m : Σa` and `k : a → Σb`.
pub fn bind(model: &Model, eff: &Eff, a: &Ty, b: &Ty, m: &Value, k: &Value) -> Result<Value> {
    require_monad(eff)?;
    let m = m.clone();
    let k = k.clone();
    match eff {
        Eff::S => union(m.as_set()?.iter().map(|x| k.apply(x))),
        Eff::F => {
            let (x0, xs) = m.as_pair()?;
            let first = k.apply(x0)?;
            let alts = union(
                xs.as_set()?
                    .iter()
                    .map(|x| Ok(k.apply(x)?.as_pair()?.1.clone())),
            )?;
            Ok(Value::pair(first.as_pair()?.0.clone(), alts))
        }
        Eff::M => match m.as_maybe()? {
            Some(x) => k.apply(x),
            None => Ok(Value::failure()),
        },
        Eff::R(p) => Ok(pure_fn(Shape::of(p, model), move |i| {
            k.apply(&m.apply(i)?)?.apply(i)
        })),
        Eff::W(o) => {
            let (x, o1) = m.as_pair()?;
            let n = k.apply(x)?;
            let (y, o2) = n.as_pair()?;
            Ok(Value::pair(y.clone(), mappend(o, o1, o2)?))
        }
        Eff::T(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            let r = m.apply(s)?;
            let (x, t) = r.as_pair()?;
            k.apply(x)?.apply(t)
        })),
        Eff::D(s) => Ok(pure_fn(Shape::of(s, model), move |s| {
            let outs = m.apply(s)?;
            union(outs.as_set()?.iter().map(|p| {
                let (x, t) = p.as_pair()?;
                k.apply(x)?.apply(t)
            }))
        })),
        Eff::C(r) => {
            let cont = Shape::of(&Ty::arrow(b.clone(), (**r).clone()), model);
            let a_sh = Shape::of(a, model);
            Ok(pure_fn(cont, move |c| {
                let (c, k) = (c.clone(), k.clone());
                m.apply(&pure_fn(a_sh.clone(), move |x| k.apply(x)?.apply(&c)))
            }))
        }
    }
}

/// `μ mm = mm ≫= id`
pub fn join(model: &Model, eff: &Eff, a: &Ty, mm: &Value) -> Result<Value> {
    let inner = Ty::comp(eff.clone(), a.clone());
    bind(model, eff, &inner, a, mm, &identity(&inner, model))
}

/// A set of effect operations. The standard instance follows the textbook
/// definitions; law checks accept any instance so that deliberately broken
/// ones can be shown to fail.
pub trait Instance: Send + Sync {
    fn name(&self) -> String {
        "standard".into()
    }

    fn fmap(
        &self,
        model: &Model,
        eff: &Eff,
        a: &Ty,
        b: &Ty,
        k: &Value,
        m: &Value,
    ) -> Result<Value> {
        fmap(model, eff, a, b, k, m)
    }

    fn pure(&self, model: &Model, eff: &Eff, a: &Ty, x: &Value) -> Result<Value> {
        pure(model, eff, a, x)
    }

    fn ap(
        &self,
        model: &Model,
        eff: &Eff,
        a: &Ty,
        b: &Ty,
        ff: &Value,
        xx: &Value,
    ) -> Result<Value> {
        ap(model, eff, a, b, ff, xx)
    }

    fn bind(
        &self,
        model: &Model,
        eff: &Eff,
        a: &Ty,
        b: &Ty,
        m: &Value,
        k: &Value,
    ) -> Result<Value> {
        bind(model, eff, a, b, m, k)
    }

    fn join(&self, model: &Model, eff: &Eff, a: &Ty, mm: &Value) -> Result<Value> {
        let inner = Ty::comp(eff.clone(), a.clone());
        self.bind(model, eff, &inner, a, mm, &identity(&inner, model))
    }

    fn phi(&self, model: &Model, i: &Ty, a: &Ty, c: &Value) -> Value {
        phi(model, i, a, c)
    }

    fn psi(&self, model: &Model, i: &Ty, a: &Ty, k: &Value) -> Value {
        psi(model, i, a, k)
    }

    fn counit(&self, w_of_r: &Value) -> Result<Value> {
        counit(w_of_r)
    }

    fn eject(&self, model: &Model, i: &Ty, a: &Ty, k: &Value) -> Value {
        eject(model, i, a, k)
    }

    fn eject_inv(&self, model: &Model, i: &Ty, a: &Ty, b: &Ty, m: &Value) -> Result<Value> {
        eject_inv(model, i, a, b, m)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Standard;

impl Instance for Standard {}

// ---------------------------------------------------------------------------
// the writer/reader adjunction, parameterized by the stored type `i`

fn w(i: &Ty, a: &Ty) -> Ty {
    Ty::comp(Eff::w(i.clone()), a.clone())
}

/// `Φ c = λa λx. c ⟨a, x⟩`, turning `c : W[i]a → b` into `a → R[i]b`.
pub fn phi(model: &Model, i: &Ty, a: &Ty, c: &Value) -> Value {
    let c = c.clone();
    let i_sh = Shape::of(i, model);
    pure_fn(Shape::of(a, model), move |x| {
        let (c, x) = (c.clone(), x.clone());
        Ok(pure_fn(i_sh.clone(), move |j| {
            c.apply(&Value::pair(x.clone(), j.clone()))
        }))
    })
}

/// `Ψ k = λ⟨a, x⟩. k a x`, turning `k : a → R[i]b` into `W[i]a → b`.
pub fn psi(model: &Model, i: &Ty, a: &Ty, k: &Value) -> Value {
    let k = k.clone();
    pure_fn(Shape::of(&w(i, a), model), move |p| {
        let (x, j) = p.as_pair()?;
        k.apply(x)?.apply(j)
    })
}

/// `η = Φ id : a → R[i](W[i]a)`
pub fn unit(model: &Model, i: &Ty, a: &Ty) -> Value {
    phi(model, i, a, &identity(&w(i, a), model))
}

/// `ε ⟨f, x⟩ = f x`
pub fn counit(w_of_r: &Value) -> Result<Value> {
    let (f, x) = w_of_r.as_pair()?;
    f.apply(x)
}

/// `ε = Ψ id : W[i](R[i]a) → a`
pub fn counit_fn(model: &Model, i: &Ty, a: &Ty) -> Value {
    let r = Ty::comp(Eff::r(i.clone()), a.clone());
    psi(model, i, &r, &identity(&r, model))
}

/// `Υ k = λi λa. k a i`, turning `k : a → R[i]b` into `R[i](a → b)`.
pub fn eject(model: &Model, i: &Ty, a: &Ty, k: &Value) -> Value {
    let k = k.clone();
    let a_sh = Shape::of(a, model);
    pure_fn(Shape::of(i, model), move |j| {
        let (k, j) = (k.clone(), j.clone());
        Ok(pure_fn(a_sh.clone(), move |x| k.apply(x)?.apply(&j)))
    })
}

/// `Υ⁻¹ m = λa. (λf. f a) • m`
pub fn eject_inv(model: &Model, i: &Ty, a: &Ty, b: &Ty, m: &Value) -> Result<Value> {
    let m = m.clone();
    let (i, b) = (i.clone(), b.clone());
    let fn_ty = Ty::arrow(a.clone(), b.clone());
    let f_sh = Shape::of(&fn_ty, model);
    let model2 = model.clone();
    Ok(pure_fn(Shape::of(a, model), move |x| {
        let x = x.clone();
        let at = pure_fn(f_sh.clone(), move |f| f.apply(&x));
        fmap(&model2, &Eff::R(Box::new(i.clone())), &fn_ty, &b, &at, &m)
    }))
}

/// Eject expressed through the adjunction alone:
/// `Υ k = Φ (λω λa. Ψ (λ_. k a) ω) ()`.
pub fn eject_via_adjunction(model: &Model, i: &Ty, a: &Ty, k: &Value) -> Result<Value> {
    let unit_sh = Arc::new(Shape::Unit);
    let k = k.clone();
    let a_sh = Shape::of(a, model);
    let wu_sh = Arc::new(Shape::Pair(unit_sh.clone(), Shape::of(i, model)));
    // Ψ specialized to a unit-typed argument
    let psi_unit = move |g: Value| {
        pure_fn(wu_sh.clone(), move |p| {
            let (x, j) = p.as_pair()?;
            g.apply(x)?.apply(j)
        })
    };
    let c = {
        let a_sh = a_sh.clone();
        let unit_sh = unit_sh.clone();
        move |omega: &Value| -> Result<Value> {
            let (omega, k, psi_unit, unit_sh) =
                (omega.clone(), k.clone(), psi_unit.clone(), unit_sh.clone());
            Ok(pure_fn(a_sh.clone(), move |x| {
                let kx = k.apply(x)?;
                let g = pure_fn(unit_sh.clone(), move |_| Ok(kx.clone()));
                psi_unit(g).apply(&omega)
            }))
        }
    };
    let i_sh = Shape::of(i, model);
    // Φ c () = λx. c ⟨(), x⟩
    Ok(pure_fn(i_sh, move |j| {
        c(&Value::pair(Value::Unit, j.clone()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ty::parse_type;
    use crate::value::{enumerate_domain, values_equal};

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    fn m3() -> Model {
        Model::from_json(r#"{"entities":["j","m","s"],"asgn_len":1}"#).unwrap()
    }

    fn is_j(model: &Model) -> Value {
        Value::func(Shape::of(&Ty::E, model), |x| {
            Ok(Value::Bool(x.as_ent()? == 0))
        })
    }

    #[test]
    fn fmap_over_sets() {
        let model = m3();
        let m = Value::set([Value::Ent(0), Value::Ent(1), Value::Ent(2)]).unwrap();
        let out = fmap(&model, &Eff::S, &Ty::E, &Ty::T, &is_j(&model), &m).unwrap();
        assert_eq!(
            out,
            Value::set([Value::Bool(true), Value::Bool(false)]).unwrap()
        );
    }

    #[test]
    fn fmap_over_readers() {
        // an environment of two points read as [Δ ↦ s, □ ↦ j]
        let model = Model::from_json(r#"{"entities":["j","s"]}"#).unwrap();
        let m = Value::func(Shape::of(&Ty::E, &model), |i| {
            Ok(Value::Ent(1 - i.as_ent()?))
        });
        let out = fmap(&model, &Eff::r(Ty::E), &Ty::E, &Ty::T, &is_j(&model), &m).unwrap();
        assert_eq!(out.apply(&Value::Ent(0)).unwrap(), Value::Bool(false));
        assert_eq!(out.apply(&Value::Ent(1)).unwrap(), Value::Bool(true));
    }

    #[test]
    fn fmap_identity_on_every_effect() {
        let model = Model::bare(2, 1);
        for e in ["S", "F", "M", "R[e]", "W[e]", "C[t]", "T[g]", "D[g]"] {
            let eff = crate::ty::parse_eff(e).unwrap();
            let id = identity(&Ty::E, &model);
            for m in enumerate_domain(&Ty::comp(eff.clone(), Ty::E), &model).unwrap() {
                let out = fmap(&model, &eff, &Ty::E, &Ty::E, &id, &m).unwrap();
                assert!(values_equal(&out, &m).unwrap(), "{e}");
            }
        }
    }

    #[test]
    fn pure_values() {
        let model = m3();
        assert_eq!(
            pure(&model, &Eff::S, &Ty::E, &Value::Ent(0)).unwrap(),
            Value::set([Value::Ent(0)]).unwrap()
        );
        assert_eq!(
            pure(&model, &Eff::w(Ty::T), &Ty::E, &Value::Ent(0)).unwrap(),
            Value::pair(Value::Ent(0), Value::Bool(true))
        );
        assert!(pure(&model, &Eff::w(Ty::E), &Ty::E, &Value::Ent(0)).is_err());
        // η_C j = λc. c j
        let pj = pure(&model, &Eff::c(Ty::T), &Ty::E, &Value::Ent(0)).unwrap();
        for c in enumerate_domain(&ty("e -> t"), &model).unwrap() {
            assert_eq!(pj.apply(&c).unwrap(), c.apply(&Value::Ent(0)).unwrap());
        }
    }

    #[test]
    fn ap_on_sets_and_homomorphism() {
        let model = Model::bare(2, 1);
        let f = is_j(&model);
        let ff = Value::set([f.clone()]).unwrap();
        let xx = Value::set([Value::Ent(0), Value::Ent(1)]).unwrap();
        let out = ap(&model, &Eff::S, &Ty::E, &Ty::T, &ff, &xx).unwrap();
        assert_eq!(
            out,
            Value::set([Value::Bool(true), Value::Bool(false)]).unwrap()
        );
        for e in ["S", "F", "M", "R[e]", "W[t]", "C[t]", "T[g]", "D[g]"] {
            let eff = crate::ty::parse_eff(e).unwrap();
            for fv in enumerate_domain(&ty("e -> t"), &model).unwrap() {
                for x in enumerate_domain(&Ty::E, &model).unwrap() {
                    let lhs = ap(
                        &model,
                        &eff,
                        &Ty::E,
                        &Ty::T,
                        &pure(&model, &eff, &ty("e -> t"), &fv).unwrap(),
                        &pure(&model, &eff, &Ty::E, &x).unwrap(),
                    )
                    .unwrap();
                    let rhs = pure(&model, &eff, &Ty::T, &fv.apply(&x).unwrap()).unwrap();
                    assert!(values_equal(&lhs, &rhs).unwrap(), "{e}");
                }
            }
        }
    }

    #[test]
    fn state_sequencing_runs_left_first() {
        // states are single entities; F moves the state to m, X reads it
        let model = Model::from_json(r#"{"entities":["j","m"],"asgn_len":1}"#).unwrap();
        let g = Shape::of(&Ty::G, &model);
        let ff = Value::func(g.clone(), |_| {
            let f = Value::func(Shape::of(&Ty::E, &Model::bare(2, 1)), |x| {
                Ok(Value::Bool(x.as_ent()? == 1))
            });
            Ok(Value::pair(f, Value::Asgn(vec![1].into())))
        });
        let xx = Value::func(g.clone(), |s| {
            Ok(Value::pair(Value::Ent(s.as_asgn()?[0]), s.clone()))
        });
        let out = ap(&model, &Eff::t(Ty::G), &Ty::E, &Ty::T, &ff, &xx).unwrap();
        // starting in state j, X sees the state F left behind
        let res = out.apply(&Value::Asgn(vec![0].into())).unwrap();
        assert_eq!(
            res,
            Value::pair(Value::Bool(true), Value::Asgn(vec![1].into()))
        );
    }

    #[test]
    fn bind_examples() {
        let model = Model::bare(2, 1);
        let m = Value::set([Value::Ent(0), Value::Ent(1)]).unwrap();
        let eta = Value::func(Shape::of(&Ty::E, &model), |x| Value::set([x.clone()]));
        assert_eq!(bind(&model, &Eff::S, &Ty::E, &Ty::E, &m, &eta).unwrap(), m);
        let k = Value::func(Shape::of(&Ty::E, &model), |x| Ok(Value::just(x.clone())));
        assert_eq!(
            bind(&model, &Eff::M, &Ty::E, &Ty::E, &Value::failure(), &k).unwrap(),
            Value::failure()
        );
    }

    #[test]
    fn dynamic_bind_matches_comprehension() {
        let model = Model::bare(2, 1);
        let d = ty("D[g] e");
        let ms = enumerate_domain(&d, &model).unwrap();
        let ks = enumerate_domain(&ty("e -> D[g] t"), &model).unwrap();
        let states = enumerate_domain(&Ty::G, &model).unwrap();
        for m in ms.iter().step_by(7) {
            for k in ks.iter().step_by(97) {
                let got = bind(&model, &Eff::d(Ty::G), &Ty::E, &Ty::T, m, k).unwrap();
                for s in &states {
                    let mut want = BTreeSet::new();
                    for p in m.apply(s).unwrap().as_set().unwrap() {
                        let (a, t) = p.as_pair().unwrap();
                        want.extend(
                            k.apply(a)
                                .unwrap()
                                .apply(t)
                                .unwrap()
                                .as_set()
                                .unwrap()
                                .iter()
                                .cloned(),
                        );
                    }
                    assert_eq!(got.apply(s).unwrap(), Value::Set(Arc::new(want)));
                }
            }
        }
    }

    #[test]
    fn counit_of_a_stored_antecedent() {
        let model = Model::from_json(r#"{"entities":["j","sp"],"pred2":{"obscure":[["sp","j"]]}}"#)
            .unwrap();
        // λx. obscure(spot x)(moon j) with spot x = sp and moon j = j
        let body = Value::func(Shape::of(&Ty::E, &model), |x| {
            Ok(Value::Bool(x.as_ent()? == 0))
        });
        let w = Value::pair(body.clone(), Value::Ent(0));
        assert_eq!(counit(&w).unwrap(), Value::Bool(true));
        let eps = counit_fn(&model, &Ty::E, &Ty::T);
        assert_eq!(eps.apply(&w).unwrap(), Value::Bool(true));
    }

    #[test]
    fn phi_and_psi_are_inverse() {
        let model = Model::bare(2, 1);
        for c in enumerate_domain(&ty("W[e] e -> t"), &model).unwrap() {
            let back = psi(&model, &Ty::E, &Ty::E, &phi(&model, &Ty::E, &Ty::E, &c));
            assert!(values_equal(&back, &c).unwrap());
        }
        for k in enumerate_domain(&ty("e -> R[e] t"), &model).unwrap() {
            let back = phi(&model, &Ty::E, &Ty::E, &psi(&model, &Ty::E, &Ty::E, &k));
            assert!(values_equal(&back, &k).unwrap());
        }
    }

    #[test]
    fn eject_flips_arguments() {
        let model = Model::bare(2, 1);
        for k in enumerate_domain(&ty("e -> R[e] t"), &model).unwrap() {
            let e = eject(&model, &Ty::E, &Ty::E, &k);
            let generic = eject_via_adjunction(&model, &Ty::E, &Ty::E, &k).unwrap();
            assert!(values_equal(&e, &generic).unwrap());
            for i in 0..2 {
                for a in 0..2 {
                    let (i, a) = (Value::Ent(i), Value::Ent(a));
                    assert_eq!(e.apply2(&i, &a).unwrap(), k.apply2(&a, &i).unwrap());
                }
            }
            let back = eject_inv(&model, &Ty::E, &Ty::E, &Ty::T, &e).unwrap();
            assert!(values_equal(&back, &k).unwrap());
        }
    }
}
