//! Type-driven rule search: every way two typed constituents can combine.
//!
//! The binary phase tries the basic modes, then the meta-rules in a fixed
//! order (map, structured application, unit, co-unit, eject). Each binary
//! result then passes through the unary phase, which keeps it and adds a
//! joined and/or lowered variant where the result type allows.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::mode::{CombineConfig, Mode};
use crate::ty::{adjoint, applicative, functor, left_adjoints, monad, Eff, Ty};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CombineResult {
    pub mode: Mode,
    #[serde(rename = "type")]
    pub result: Ty,
}

impl CombineResult {
    pub fn new(mode: Mode, result: Ty) -> Self {
        CombineResult { mode, result }
    }
}

fn wrap(f: fn(Box<Mode>) -> Mode, mode: Mode) -> Mode {
    f(Box::new(mode))
}

/// Basic modes: application in either direction, predicate modification,
/// and (when enabled) composition and relation restriction.
pub fn basic_modes(l: &Ty, r: &Ty, cfg: &CombineConfig) -> Vec<CombineResult> {
    let mut out = Vec::new();
    if cfg.fa {
        if let Ty::Arrow(a, b) = l {
            if **a == *r {
                out.push(CombineResult::new(Mode::FA, (**b).clone()));
            }
        }
    }
    if cfg.ba {
        if let Ty::Arrow(a, b) = r {
            if **a == *l {
                out.push(CombineResult::new(Mode::BA, (**b).clone()));
            }
        }
    }
    if cfg.pm {
        if let (Ty::Arrow(a, t1), Ty::Arrow(b, t2)) = (l, r) {
            if a == b && t1.is_base(crate::ty::Base::T) && t2.is_base(crate::ty::Base::T) {
                out.push(CombineResult::new(Mode::PM, l.clone()));
            }
        }
    }
    if cfg.fc {
        if let (Ty::Arrow(c, d), Ty::Arrow(a, b)) = (l, r) {
            if b == c {
                out.push(CombineResult::new(
                    Mode::FC,
                    Ty::arrow((**a).clone(), (**d).clone()),
                ));
            }
        }
    }
    if cfg.rr {
        if let (Ty::Arrow(_, lb), Ty::Arrow(rb, rt)) = (l, r) {
            if let Ty::Arrow(b, t) = &**lb {
                if b == rb && t.is_base(crate::ty::Base::T) && rt.is_base(crate::ty::Base::T) {
                    out.push(CombineResult::new(Mode::RR, l.clone()));
                }
            }
        }
    }
    out
}

/// Whether the unary phase may join this result type.
pub fn joinable(ty: &Ty) -> Option<Ty> {
    if let Ty::Comp(f, inner) = ty {
        if let Ty::Comp(g, a) = &**inner {
            if f == g && monad(f) {
                return Some(Ty::Comp(f.clone(), a.clone()));
            }
        }
    }
    None
}

/// Whether the unary phase may lower this result type.
pub fn lowerable(ty: &Ty) -> Option<Ty> {
    if let Ty::Comp(Eff::C(o), a) = ty {
        if **o == **a {
            return Some((**o).clone());
        }
    }
    None
}

pub fn join_rule(res: &CombineResult, cfg: &CombineConfig) -> Vec<CombineResult> {
    if !cfg.jn {
        return Vec::new();
    }
    joinable(&res.result)
        .map(|ty| vec![CombineResult::new(wrap(Mode::JN, res.mode.clone()), ty)])
        .unwrap_or_default()
}

pub fn lower_rule(res: &CombineResult, cfg: &CombineConfig) -> Vec<CombineResult> {
    if !cfg.dn {
        return Vec::new();
    }
    lowerable(&res.result)
        .map(|ty| vec![CombineResult::new(wrap(Mode::DN, res.mode.clone()), ty)])
        .unwrap_or_default()
}

type Key = (Ty, Ty);

/// A combination engine bound to one configuration, with its own memo table.
///
/// Sharing a `Combiner` across threads is safe; each entry is inserted only
/// once it has been fully computed.
pub struct Combiner {
    cfg: CombineConfig,
    memo: Mutex<HashMap<Key, Arc<Vec<CombineResult>>>>,
    guard_hits: AtomicUsize,
}

impl Combiner {
    pub fn new(cfg: CombineConfig) -> Self {
        Combiner {
            cfg,
            memo: Mutex::new(HashMap::new()),
            guard_hits: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &CombineConfig {
        &self.cfg
    }

    /// Number of times the recursion guard cut off a revisited type pair.
    pub fn guard_hits(&self) -> usize {
        self.guard_hits.load(Ordering::Relaxed)
    }

    pub fn combine(&self, l: &Ty, r: &Ty) -> Arc<Vec<CombineResult>> {
        let mut stack = Vec::new();
        self.go(l, r, &mut stack)
    }

    fn go(&self, l: &Ty, r: &Ty, stack: &mut Vec<Key>) -> Arc<Vec<CombineResult>> {
        let key = (l.clone(), r.clone());
        if self.cfg.memoize {
            if let Some(hit) = self.memo.lock().unwrap().get(&key) {
                return hit.clone();
            }
        }
        if stack.contains(&key) {
            self.guard_hits.fetch_add(1, Ordering::Relaxed);
            return Arc::new(Vec::new());
        }
        let hits_before = self.guard_hits();
        stack.push(key);
        let binary = self.binary(l, r, stack);
        let key = stack.pop().unwrap();

        let mut out = Vec::new();
        for res in binary {
            self.unary(res, &mut out);
        }
        out.retain(|res| res.result.size() <= self.cfg.max_result_type_size);
        let out = Arc::new(out);
        if self.cfg.memoize && self.guard_hits() == hits_before {
            self.memo
                .lock()
                .unwrap()
                .entry(key)
                .or_insert_with(|| out.clone());
        }
        out
    }

    fn unary(&self, res: CombineResult, out: &mut Vec<CombineResult>) {
        let mut extra = join_rule(&res, &self.cfg);
        extra.extend(lower_rule(&res, &self.cfg));
        out.push(res);
        for e in extra {
            if self.cfg.chain_unary {
                self.unary(e, out);
            } else {
                out.push(e);
            }
        }
    }

    fn lift(
        &self,
        l: &Ty,
        r: &Ty,
        stack: &mut Vec<Key>,
        out: &mut Vec<CombineResult>,
        f: impl Fn(CombineResult) -> CombineResult,
    ) {
        for res in self.go(l, r, stack).iter() {
            out.push(f(res.clone()));
        }
    }

    fn binary(&self, l: &Ty, r: &Ty, stack: &mut Vec<Key>) -> Vec<CombineResult> {
        let cfg = &self.cfg;
        let mut out = basic_modes(l, r, cfg);

        if cfg.map {
            // map right
            if let Ty::Comp(f, t) = r {
                if functor(f) {
                    self.lift(l, t, stack, &mut out, |res| {
                        CombineResult::new(
                            wrap(Mode::MR, res.mode),
                            Ty::Comp(f.clone(), Box::new(res.result)),
                        )
                    });
                }
            }
            // map left
            if let Ty::Comp(f, s) = l {
                if functor(f) {
                    self.lift(s, r, stack, &mut out, |res| {
                        CombineResult::new(
                            wrap(Mode::ML, res.mode),
                            Ty::Comp(f.clone(), Box::new(res.result)),
                        )
                    });
                }
            }
        }

        if cfg.ap {
            if let (Ty::Comp(f, s), Ty::Comp(g, t)) = (l, r) {
                if f == g && applicative(f) {
                    self.lift(s, t, stack, &mut out, |res| {
                        CombineResult::new(
                            wrap(Mode::AP, res.mode),
                            Ty::Comp(f.clone(), Box::new(res.result)),
                        )
                    });
                }
            }
        }

        if cfg.unit {
            if let Ty::Arrow(dom, cod) = l {
                if let Ty::Comp(f, s) = &**dom {
                    if applicative(f) {
                        let l2 = Ty::Arrow(s.clone(), cod.clone());
                        self.lift(&l2, r, stack, &mut out, |res| {
                            CombineResult::new(wrap(Mode::UR, res.mode), res.result)
                        });
                    }
                }
            }
            if let Ty::Arrow(dom, cod) = r {
                if let Ty::Comp(f, t) = &**dom {
                    if applicative(f) {
                        let r2 = Ty::Arrow(t.clone(), cod.clone());
                        self.lift(l, &r2, stack, &mut out, |res| {
                            CombineResult::new(wrap(Mode::UL, res.mode), res.result)
                        });
                    }
                }
            }
        }

        if cfg.cu {
            if let (Ty::Comp(f, s), Ty::Comp(g, t)) = (l, r) {
                if adjoint(f, g) {
                    self.lift(s, t, stack, &mut out, |res| {
                        CombineResult::new(wrap(Mode::CU, res.mode), res.result)
                    });
                }
            }
        }

        if cfg.eject {
            if let Ty::Arrow(s, cod) = r {
                if let Ty::Comp(g, t) = &**cod {
                    if !left_adjoints(g).is_empty() {
                        let r2 = Ty::comp(g.clone(), Ty::Arrow(s.clone(), t.clone()));
                        self.lift(l, &r2, stack, &mut out, |res| {
                            CombineResult::new(wrap(Mode::ER, res.mode), res.result)
                        });
                    }
                }
            }
            if let Ty::Arrow(s, cod) = l {
                if let Ty::Comp(g, t) = &**cod {
                    if !left_adjoints(g).is_empty() {
                        let l2 = Ty::comp(g.clone(), Ty::Arrow(s.clone(), t.clone()));
                        self.lift(&l2, r, stack, &mut out, |res| {
                            CombineResult::new(wrap(Mode::EL, res.mode), res.result)
                        });
                    }
                }
            }
        }

        out
    }
}

/// Every `(mode, type)` pair licensed for `l` combined with `r`.
pub fn combine(l: &Ty, r: &Ty, cfg: &CombineConfig) -> Vec<CombineResult> {
    Combiner::new(cfg.clone()).combine(l, r).as_ref().clone()
}

/// The result type a specific mode assigns to `l` and `r`, ignoring rule
/// toggles. `None` when the mode does not apply.
pub fn result_type(mode: &Mode, l: &Ty, r: &Ty) -> Option<Ty> {
    let arrow_parts = |t: &Ty| match t {
        Ty::Arrow(a, b) => Some(((**a).clone(), (**b).clone())),
        _ => None,
    };
    let comp_parts = |t: &Ty| match t {
        Ty::Comp(f, a) => Some((f.clone(), (**a).clone())),
        _ => None,
    };
    let all = CombineConfig {
        fc: true,
        rr: true,
        ..CombineConfig::default()
    };
    match mode {
        Mode::FA | Mode::BA | Mode::PM | Mode::FC | Mode::RR => basic_modes(l, r, &all)
            .into_iter()
            .find(|res| res.mode == *mode)
            .map(|res| res.result),
        Mode::MR(op) => {
            let (f, t) = comp_parts(r)?;
            functor(&f).then_some(())?;
            Some(Ty::comp(f, result_type(op, l, &t)?))
        }
        Mode::ML(op) => {
            let (f, s) = comp_parts(l)?;
            functor(&f).then_some(())?;
            Some(Ty::comp(f, result_type(op, &s, r)?))
        }
        Mode::AP(op) => {
            let (f, s) = comp_parts(l)?;
            let (g, t) = comp_parts(r)?;
            (f == g && applicative(&f)).then_some(())?;
            Some(Ty::comp(f, result_type(op, &s, &t)?))
        }
        Mode::UR(op) => {
            let (dom, cod) = arrow_parts(l)?;
            let (f, s) = comp_parts(&dom)?;
            applicative(&f).then_some(())?;
            result_type(op, &Ty::arrow(s, cod), r)
        }
        Mode::UL(op) => {
            let (dom, cod) = arrow_parts(r)?;
            let (f, t) = comp_parts(&dom)?;
            applicative(&f).then_some(())?;
            result_type(op, l, &Ty::arrow(t, cod))
        }
        Mode::CU(op) => {
            let (f, s) = comp_parts(l)?;
            let (g, t) = comp_parts(r)?;
            adjoint(&f, &g).then_some(())?;
            result_type(op, &s, &t)
        }
        Mode::ER(op) => {
            let (s, cod) = arrow_parts(r)?;
            let (g, t) = comp_parts(&cod)?;
            (!left_adjoints(&g).is_empty()).then_some(())?;
            result_type(op, l, &Ty::comp(g, Ty::arrow(s, t)))
        }
        Mode::EL(op) => {
            let (s, cod) = arrow_parts(l)?;
            let (g, t) = comp_parts(&cod)?;
            (!left_adjoints(&g).is_empty()).then_some(())?;
            result_type(op, &Ty::comp(g, Ty::arrow(s, t)), r)
        }
        Mode::JN(op) => joinable(&result_type(op, l, r)?),
        Mode::DN(op) => lowerable(&result_type(op, l, r)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::parse_mode;
    use crate::ty::parse_type;

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    fn rows(l: &str, r: &str, cfg: &CombineConfig) -> Vec<(String, String)> {
        combine(&ty(l), &ty(r), cfg)
            .into_iter()
            .map(|res| (res.mode.to_string(), res.result.to_string()))
            .collect()
    }

    fn row(m: &str, t: &str) -> (String, String) {
        (m.to_string(), ty(t).to_string())
    }

    #[test]
    fn basic_application() {
        let cfg = CombineConfig::default();
        assert_eq!(
            basic_modes(&ty("e -> t"), &ty("e"), &cfg),
            vec![CombineResult::new(Mode::FA, Ty::T)]
        );
        assert_eq!(
            basic_modes(&ty("e"), &ty("e -> t"), &cfg),
            vec![CombineResult::new(Mode::BA, Ty::T)]
        );
        assert_eq!(
            basic_modes(&ty("e -> t"), &ty("e -> t"), &cfg),
            vec![CombineResult::new(Mode::PM, ty("e -> t"))]
        );
    }

    #[test]
    fn composition_and_restriction_are_opt_in() {
        let off = CombineConfig::default();
        assert!(basic_modes(&ty("t -> e"), &ty("e -> t"), &off).is_empty());
        let on = CombineConfig {
            fc: true,
            rr: true,
            ..off
        };
        assert_eq!(
            basic_modes(&ty("t -> e"), &ty("e -> t"), &on),
            vec![CombineResult::new(Mode::FC, ty("e -> e"))]
        );
        assert_eq!(
            basic_modes(&ty("e -> e -> t"), &ty("e -> t"), &on),
            vec![CombineResult::new(Mode::RR, ty("e -> e -> t"))]
        );
    }

    #[test]
    fn map_rules() {
        let ch2 = CombineConfig::ch2();
        assert_eq!(
            rows("R[e] e", "e -> t", &ch2),
            vec![row("ML(BA)", "R[e] t")]
        );
        assert_eq!(
            rows("e", "R[e] (e -> t)", &ch2),
            vec![row("MR(BA)", "R[e] t")]
        );
        assert_eq!(
            rows("S e", "R[e] (e -> t)", &ch2),
            vec![
                row("MR(ML(BA))", "R[e] (S t)"),
                row("ML(MR(BA))", "S (R[e] t)")
            ]
        );
    }

    #[test]
    fn structured_application_requires_same_applicative() {
        let cfg = CombineConfig::default();
        assert!(rows("S e", "S (e -> t)", &cfg).contains(&row("AP(BA)", "S t")));
        assert!(!rows("W[e] e", "R[e] (e -> t)", &cfg)
            .iter()
            .any(|r| r.0.starts_with("AP")));
        assert!(!rows("W[e] e", "W[e] (e -> t)", &cfg)
            .iter()
            .any(|r| r.0.contains("AP")));
        assert!(rows("W[t] e", "W[t] (e -> t)", &cfg).contains(&row("AP(BA)", "W[t] t")));
    }

    #[test]
    fn unit_rules() {
        let ch3 = CombineConfig::ch3();
        assert!(rows("S t -> t", "S t", &ch3).contains(&row("UR(MR(FA))", "S t")));
        assert!(rows("S t -> t", "t", &ch3).contains(&row("UR(FA)", "t")));
        assert!(!rows("e", "S t -> t", &ch3)
            .iter()
            .any(|r| r.0.starts_with("UL")));
    }

    #[test]
    fn co_unit_is_directional() {
        let cfg = CombineConfig::default();
        assert!(rows("W[e] e", "R[e] (e -> t)", &cfg).contains(&row("CU(BA)", "t")));
        assert!(!rows("R[e] e", "W[e] (e -> t)", &cfg)
            .iter()
            .any(|r| r.0.contains("CU")));
        assert!(!rows("W[e] e", "R[e] e", &cfg)
            .iter()
            .any(|r| r.0.contains("CU")));
    }

    #[test]
    fn eject_rules() {
        let cfg = CombineConfig::default();
        let got = rows("R[e] (W[e] e)", "e -> R[e] (W[e] t)", &cfg);
        assert!(got.contains(&row("ML(ER(CU(BA)))", "R[e] (W[e] t)")));
        let got = rows("R[e] (S (W[e] e))", "e -> R[e] (S (W[e] t))", &cfg);
        assert!(got.contains(&row("ML(JN(ML(ER(CU(BA)))))", "R[e] (S (W[e] t))")));
        assert!(!rows("e", "e -> S t", &cfg)
            .iter()
            .any(|r| r.0.contains("ER")));
    }

    #[test]
    fn join_and_lower() {
        let cfg = CombineConfig::default();
        let r = CombineResult::new(parse_mode("ML(BA)").unwrap(), ty("S (S t)"));
        assert_eq!(
            join_rule(&r, &cfg),
            vec![CombineResult::new(
                parse_mode("JN(ML(BA))").unwrap(),
                ty("S t")
            )]
        );
        let r = CombineResult::new(parse_mode("AP(BA)").unwrap(), ty("S t"));
        assert!(join_rule(&r, &cfg).is_empty());
        let r = CombineResult::new(parse_mode("MR(FA)").unwrap(), ty("C[t] t"));
        assert_eq!(
            lower_rule(&r, &cfg),
            vec![CombineResult::new(parse_mode("DN(MR(FA))").unwrap(), Ty::T)]
        );
        let r = CombineResult::new(Mode::FA, ty("C[t] e"));
        assert!(lower_rule(&r, &cfg).is_empty());
        // W[e] is not a monad, so its layers stay apart
        let r = CombineResult::new(Mode::FA, ty("W[e] W[e] t"));
        assert!(join_rule(&r, &cfg).is_empty());
    }

    #[test]
    fn unary_phase_follows_parent() {
        let ch4 = CombineConfig::ch4();
        assert_eq!(
            rows("S e", "e -> S t", &ch4),
            vec![row("ML(BA)", "S (S t)"), row("JN(ML(BA))", "S t")]
        );
    }

    #[test]
    fn chained_unary_phase_lowers_joined_results() {
        let strict = CombineConfig::default();
        let chained = CombineConfig {
            chain_unary: true,
            ..strict.clone()
        };
        let a = rows("C[t] e", "C[t] (e -> t)", &strict);
        let b = rows("C[t] e", "C[t] (e -> t)", &chained);
        assert!(!a.contains(&row("DN(JN(MR(ML(BA))))", "t")));
        assert!(b.contains(&row("DN(JN(MR(ML(BA))))", "t")));
        // chaining only adds rows
        let mut it = b.iter();
        assert!(a.iter().all(|x| it.any(|y| y == x)));
    }

    #[test]
    fn size_cap_drops_results() {
        let cfg = CombineConfig {
            max_result_type_size: 2,
            ..CombineConfig::default()
        };
        // layered results are dropped, their joined forms survive
        assert_eq!(
            rows("S e", "S (e -> t)", &cfg),
            vec![
                row("JN(MR(ML(BA)))", "S t"),
                row("JN(ML(MR(BA)))", "S t"),
                row("AP(BA)", "S t")
            ]
        );
    }

    #[test]
    fn memo_does_not_change_output() {
        let on = CombineConfig::default();
        let off = CombineConfig {
            memoize: false,
            ..on.clone()
        };
        for (l, r) in [
            ("S e", "S (e -> t)"),
            ("R[e] (S (W[e] e))", "e -> R[e] (S (W[e] t))"),
        ] {
            assert_eq!(rows(l, r, &on), rows(l, r, &off));
        }
    }

    #[test]
    fn result_type_agrees_with_combine() {
        let cfg = CombineConfig::default();
        for (l, r) in [
            ("S e", "S (e -> t)"),
            ("W[e] e", "R[e] (e -> t)"),
            ("S t -> t", "S t"),
            ("R[e] (S (W[e] e))", "e -> R[e] (S (W[e] t))"),
            ("C[t] e", "C[t] (e -> t)"),
        ] {
            for res in combine(&ty(l), &ty(r), &cfg) {
                assert_eq!(
                    result_type(&res.mode, &ty(l), &ty(r)),
                    Some(res.result.clone())
                );
            }
        }
        assert_eq!(result_type(&Mode::FA, &Ty::E, &Ty::E), None);
    }
}
