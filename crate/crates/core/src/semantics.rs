//! Value-level meaning of each mode of combination.

use crate::combine::result_type;
use crate::effects;
use crate::error::{Error, Result};
use crate::mode::Mode;
use crate::model::Model;
use crate::ty::{Eff, Ty};
use crate::value::{Shape, Value};

fn arrow(ty: &Ty) -> Option<(&Ty, &Ty)> {
    match ty {
        Ty::Arrow(a, b) => Some((a, b)),
        _ => None,
    }
}

fn comp(ty: &Ty) -> Option<(&Eff, &Ty)> {
    match ty {
        Ty::Comp(f, a) => Some((f, a)),
        _ => None,
    }
}

/// Combines `lv : lty` and `rv : rty` according to `mode`.
pub fn apply_mode(
    model: &Model,
    mode: &Mode,
    lv: &Value,
    rv: &Value,
    lty: &Ty,
    rty: &Ty,
) -> Result<Value> {
    let unlicensed = || Error::eval(format!("mode {mode} does not apply to {lty} and {rty}"));
    let out_ty = result_type(mode, lty, rty).ok_or_else(unlicensed)?;
    match mode {
        Mode::FA => lv.apply(rv),
        Mode::BA => rv.apply(lv),
        Mode::PM => {
            let (dom, _) = arrow(lty).ok_or_else(unlicensed)?;
            let (l, r) = (lv.clone(), rv.clone());
            Ok(Value::func(Shape::of(dom, model), move |x| {
                Ok(Value::Bool(
                    l.apply(x)?.as_bool()? && r.apply(x)?.as_bool()?,
                ))
            }))
        }
        Mode::FC => {
            let (dom, _) = arrow(rty).ok_or_else(unlicensed)?;
            let (l, r) = (lv.clone(), rv.clone());
            Ok(Value::func(Shape::of(dom, model), move |x| {
                l.apply(&r.apply(x)?)
            }))
        }
        Mode::RR => {
            let (a, rest) = arrow(lty).ok_or_else(unlicensed)?;
            let (b, _) = arrow(rest).ok_or_else(unlicensed)?;
            let (l, r) = (lv.clone(), rv.clone());
            let b_sh = Shape::of(b, model);
            Ok(Value::func(Shape::of(a, model), move |x| {
                let (l, r, x) = (l.clone(), r.clone(), x.clone());
                Ok(Value::func(b_sh.clone(), move |y| {
                    Ok(Value::Bool(
                        l.apply2(&x, y)?.as_bool()? && r.apply(y)?.as_bool()?,
                    ))
                }))
            }))
        }
        Mode::MR(op) => {
            let (f, t) = comp(rty).ok_or_else(unlicensed)?;
            let u = result_type(op, lty, t).ok_or_else(unlicensed)?;
            let k = {
                let (model, op, lv, lty, t) = (
                    model.clone(),
                    (**op).clone(),
                    lv.clone(),
                    lty.clone(),
                    t.clone(),
                );
                Value::func(Shape::of(&t, &model), move |b| {
                    apply_mode(&model, &op, &lv, b, &lty, &t)
                })
            };
            effects::fmap(model, f, t, &u, &k, rv)
        }
        Mode::ML(op) => {
            let (f, s) = comp(lty).ok_or_else(unlicensed)?;
            let u = result_type(op, s, rty).ok_or_else(unlicensed)?;
            let k = {
                let (model, op, rv, rty, s) = (
                    model.clone(),
                    (**op).clone(),
                    rv.clone(),
                    rty.clone(),
                    s.clone(),
                );
                Value::func(Shape::of(&s, &model), move |a| {
                    apply_mode(&model, &op, a, &rv, &s, &rty)
                })
            };
            effects::fmap(model, f, s, &u, &k, lv)
        }
        Mode::AP(op) => {
            let (f, s) = comp(lty).ok_or_else(unlicensed)?;
            let (_, t) = comp(rty).ok_or_else(unlicensed)?;
            let u = result_type(op, s, t).ok_or_else(unlicensed)?;
            let t_sh = Shape::of(t, model);
            // λa λb. a op b
            let curried = {
                let (model, op, s, t) = (model.clone(), (**op).clone(), s.clone(), t.clone());
                Value::func(Shape::of(&s, &model), move |a| {
                    let (model, op, s, t, a) =
                        (model.clone(), op.clone(), s.clone(), t.clone(), a.clone());
                    Ok(Value::func(t_sh.clone(), move |b| {
                        apply_mode(&model, &op, &a, b, &s, &t)
                    }))
                })
            };
            let t_to_u = Ty::arrow(t.clone(), u.clone());
            let lifted = effects::fmap(model, f, s, &t_to_u, &curried, lv)?;
            effects::ap(model, f, t, &u, &lifted, rv)
        }
        Mode::UR(op) => {
            let (dom, cod) = arrow(lty).ok_or_else(unlicensed)?;
            let (f, s) = comp(dom).ok_or_else(unlicensed)?;
            let purified = {
                let (model, f, s, lv) = (model.clone(), f.clone(), s.clone(), lv.clone());
                Value::func(Shape::of(&s, &model), move |a| {
                    lv.apply(&effects::pure(&model, &f, &s, a)?)
                })
            };
            apply_mode(
                model,
                op,
                &purified,
                rv,
                &Ty::arrow(s.clone(), cod.clone()),
                rty,
            )
        }
        Mode::UL(op) => {
            let (dom, cod) = arrow(rty).ok_or_else(unlicensed)?;
            let (f, t) = comp(dom).ok_or_else(unlicensed)?;
            let purified = {
                let (model, f, t, rv) = (model.clone(), f.clone(), t.clone(), rv.clone());
                Value::func(Shape::of(&t, &model), move |b| {
                    rv.apply(&effects::pure(&model, &f, &t, b)?)
                })
            };
            apply_mode(
                model,
                op,
                lv,
                &purified,
                lty,
                &Ty::arrow(t.clone(), cod.clone()),
            )
        }
        Mode::CU(op) => {
            // ε ((λa. (λb. a op b) • r) • l)
            let (wf, s) = comp(lty).ok_or_else(unlicensed)?;
            let (rf, t) = comp(rty).ok_or_else(unlicensed)?;
            let u = result_type(op, s, t).ok_or_else(unlicensed)?;
            let r_u = Ty::comp(rf.clone(), u.clone());
            let k = {
                let (model, op, rf, s, t, u, rv) = (
                    model.clone(),
                    (**op).clone(),
                    rf.clone(),
                    s.clone(),
                    t.clone(),
                    u.clone(),
                    rv.clone(),
                );
                Value::func(Shape::of(&s, &model), move |a| {
                    let inner = {
                        let (model2, op, s, t, a) =
                            (model.clone(), op.clone(), s.clone(), t.clone(), a.clone());
                        Value::func(Shape::of(&t, &model), move |b| {
                            apply_mode(&model2, &op, &a, b, &s, &t)
                        })
                    };
                    effects::fmap(&model, &rf, &t, &u, &inner, &rv)
                })
            };
            let w_of_r = effects::fmap(model, wf, s, &r_u, &k, lv)?;
            effects::counit(&w_of_r)
        }
        Mode::ER(op) => {
            let (s, cod) = arrow(rty).ok_or_else(unlicensed)?;
            let (g, t) = comp(cod).ok_or_else(unlicensed)?;
            let i = match g {
                Eff::R(i) => i,
                _ => return Err(unlicensed()),
            };
            let ejected = effects::eject(model, i, s, rv);
            let new_rty = Ty::comp(g.clone(), Ty::arrow(s.clone(), t.clone()));
            apply_mode(model, op, lv, &ejected, lty, &new_rty)
        }
        Mode::EL(op) => {
            let (s, cod) = arrow(lty).ok_or_else(unlicensed)?;
            let (g, t) = comp(cod).ok_or_else(unlicensed)?;
            let i = match g {
                Eff::R(i) => i,
                _ => return Err(unlicensed()),
            };
            let ejected = effects::eject(model, i, s, lv);
            let new_lty = Ty::comp(g.clone(), Ty::arrow(s.clone(), t.clone()));
            apply_mode(model, op, &ejected, rv, &new_lty, rty)
        }
        Mode::JN(op) => {
            let layered = apply_mode(model, op, lv, rv, lty, rty)?;
            let (f, a) = comp(&out_ty).ok_or_else(unlicensed)?;
            effects::join(model, f, a, &layered)
        }
        Mode::DN(op) => {
            let m = apply_mode(model, op, lv, rv, lty, rty)?;
            m.apply(&effects::identity(&out_ty, model))
        }
    }
}

/// `⇓ m = m id`, for `m : C[o] o`.
pub fn lower(model: &Model, o: &Ty, m: &Value) -> Result<Value> {
    m.apply(&effects::identity(o, model))
}
