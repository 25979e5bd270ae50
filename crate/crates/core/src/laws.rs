//! Extensional checks of the functor, applicative, monad and adjunction laws,
//! and of the equivalences between derived modes and hand-written binds.
//!
//! Every check quantifies over all inhabitants of its variables' types. When
//! the product of those domains exceeds the case budget, a seeded sample of
//! `budget` cases is drawn instead and the report says so.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::effects::{Instance, Standard};
use crate::error::Result;
use crate::mode::parse_mode;
use crate::model::Model;
use crate::semantics::apply_mode;
use crate::ty::{applicative, monad, monoid, Eff, Ty};
use crate::value::{render, values_equal, Shape, Value};

/// Largest case product enumerated exhaustively.
pub const DEFAULT_BUDGET: u64 = 1 << 18;
/// Cases drawn when a product exceeds the budget.
pub const DEFAULT_SAMPLES: u64 = 1 << 14;
pub const DEFAULT_SEED: u64 = 0x5eed;
const MAX_EXAMPLES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub effect: String,
    pub types: Vec<String>,
    pub cases: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
    pub passed: bool,
    pub exhaustive: bool,
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl LawReport {
    fn not_applicable(law: &str, eff: &Eff, note: String) -> Self {
        LawReport {
            law: law.into(),
            effect: eff.to_string(),
            types: vec![],
            cases: 0,
            failures: 0,
            counterexamples: vec![],
            passed: true,
            exhaustive: true,
            applicable: false,
            note: Some(note),
        }
    }
}

/// The effects checked by default.
pub fn default_effects() -> Vec<Eff> {
    vec![
        Eff::S,
        Eff::F,
        Eff::M,
        Eff::r(Ty::E),
        Eff::r(Ty::G),
        Eff::w(Ty::E),
        Eff::w(Ty::T),
        Eff::c(Ty::T),
        Eff::t(Ty::G),
        Eff::d(Ty::G),
    ]
}

pub fn default_under() -> Vec<Ty> {
    vec![Ty::E, Ty::T]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Functor,
    Applicative,
    Monad,
}

/// Runs law checks over one model with one set of effect operations.
#[derive(Clone)]
pub struct Checker {
    pub model: Model,
    pub inst: Arc<dyn Instance>,
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    examples: Vec<String>,
    exhaustive: bool,
    types: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            exhaustive: true,
            ..Default::default()
        }
    }

    fn report(self, law: &str, effect: String) -> LawReport {
        LawReport {
            law: law.into(),
            effect,
            types: self.types,
            cases: self.cases,
            failures: self.failures,
            counterexamples: self.examples,
            passed: self.failures == 0,
            exhaustive: self.exhaustive,
            applicable: true,
            note: None,
        }
    }
}

fn fnv(text: &str) -> u64 {
    text.bytes().fold(0xcbf29ce484222325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100000001b3)
    })
}

fn comp(eff: &Eff, a: &Ty) -> Ty {
    Ty::comp(eff.clone(), a.clone())
}

fn arr(a: &Ty, b: &Ty) -> Ty {
    Ty::arrow(a.clone(), b.clone())
}

fn pairs(under: &[Ty]) -> Vec<(Ty, Ty)> {
    under
        .iter()
        .flat_map(|a| under.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

fn triples(under: &[Ty]) -> Vec<(Ty, Ty, Ty)> {
    pairs(under)
        .into_iter()
        .flat_map(|(a, b)| under.iter().map(move |c| (a.clone(), b.clone(), c.clone())))
        .collect()
}

impl Checker {
    pub fn new(model: Model) -> Self {
        Checker {
            model,
            inst: Arc::new(Standard),
            budget: DEFAULT_BUDGET,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_instance(mut self, inst: Arc<dyn Instance>) -> Self {
        self.inst = inst;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self.samples = self.samples.min(self.budget);
        self
    }

    pub fn with_samples(mut self, samples: u64) -> Self {
        self.samples = samples.max(1);
        self
    }

    fn fun(&self, dom: &Ty, f: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static) -> Value {
        Value::func(Shape::of(dom, &self.model), f)
    }

    fn id(&self, ty: &Ty) -> Value {
        self.fun(ty, |x| Ok(x.clone()))
    }

    /// Checks `law` for every assignment to `vars`, adding to `tally`.
    fn run(
        &self,
        tally: &mut Tally,
        label: &str,
        vars: &[(&str, Ty)],
        law: impl Fn(&[Value]) -> Result<(Value, Value)> + Sync,
    ) {
        tally.types.push(label.to_string());
        let shapes: Vec<Arc<Shape>> = vars
            .iter()
            .map(|(_, t)| Shape::of(t, &self.model))
            .collect();
        let sizes: Vec<Option<u128>> = shapes.iter().map(|s| s.size()).collect();
        let product = sizes
            .iter()
            .try_fold(1u128, |acc, s| s.and_then(|s| acc.checked_mul(s)));
        let exhaustive = product.is_some_and(|p| p <= self.budget as u128);
        let indices: Vec<Vec<u128>> = if exhaustive {
            let total = product.unwrap();
            (0..total)
                .map(|mut k| {
                    let mut idx = vec![0; sizes.len()];
                    for (slot, size) in idx.iter_mut().zip(&sizes).rev() {
                        let size = size.unwrap();
                        *slot = k % size;
                        k /= size;
                    }
                    idx
                })
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ fnv(label));
            (0..self.samples)
                .map(|_| {
                    sizes
                        .iter()
                        .map(|s| rng.gen_range(0..s.unwrap_or(u128::MAX)))
                        .collect()
                })
                .collect()
        };
        tally.exhaustive &= exhaustive;
        let outcomes: Vec<Option<String>> = indices
            .par_iter()
            .map(|idx| {
                let args: Result<Vec<Value>> =
                    shapes.iter().zip(idx).map(|(s, i)| s.nth(*i)).collect();
                let describe = |args: &[Value], why: String| {
                    let shown: Vec<String> = vars
                        .iter()
                        .zip(args)
                        .map(|((n, _), v)| format!("{n} = {}", render(v, &self.model)))
                        .collect();
                    format!("{label}: {}: {why}", shown.join(", "))
                };
                let args = match args {
                    Ok(a) => a,
                    Err(e) => return Some(format!("{label}: {e}")),
                };
                match law(&args).and_then(|(l, r)| Ok((values_equal(&l, &r)?, l, r))) {
                    Ok((true, _, _)) => None,
                    Ok((false, l, r)) => Some(describe(
                        &args,
                        format!("{} != {}", render(&l, &self.model), render(&r, &self.model)),
                    )),
                    Err(e) => Some(describe(&args, e.to_string())),
                }
            })
            .collect();
        for o in outcomes {
            tally.cases += 1;
            if let Some(ex) = o {
                tally.failures += 1;
                if tally.examples.len() < MAX_EXAMPLES {
                    tally.examples.push(ex);
                }
            }
        }
    }

    // -----------------------------------------------------------------------
    // functor

    pub fn functor_laws(&self, eff: &Eff, under: &[Ty]) -> Vec<LawReport> {
        let m = &self.model;
        let inst = &self.inst;
        let mut identity = Tally::new();
        for a in under {
            let id = self.id(a);
            self.run(
                &mut identity,
                &format!("a={a}"),
                &[("m", comp(eff, a))],
                |v| Ok((inst.fmap(m, eff, a, a, &id, &v[0])?, v[0].clone())),
            );
        }
        let mut composition = Tally::new();
        for (a, b, c) in triples(under) {
            let vars = [("f", arr(&a, &b)), ("g", arr(&b, &c)), ("m", comp(eff, &a))];
            self.run(
                &mut composition,
                &format!("a={a} b={b} c={c}"),
                &vars,
                |v| {
                    let (f, g) = (v[0].clone(), v[1].clone());
                    let gf = self.fun(&a, move |x| g.apply(&f.apply(x)?));
                    let lhs = inst.fmap(m, eff, &a, &c, &gf, &v[2])?;
                    let rhs = inst.fmap(
                        m,
                        eff,
                        &b,
                        &c,
                        &v[1],
                        &inst.fmap(m, eff, &a, &b, &v[0], &v[2])?,
                    )?;
                    Ok((lhs, rhs))
                },
            );
        }
        vec![
            identity.report("functor.identity", eff.to_string()),
            composition.report("functor.composition", eff.to_string()),
        ]
    }

    // -----------------------------------------------------------------------
    // applicative

    pub fn applicative_laws(&self, eff: &Eff, under: &[Ty]) -> Vec<LawReport> {
        if !applicative(eff) {
            return vec![LawReport::not_applicable(
                "applicative",
                eff,
                not_monoid(eff),
            )];
        }
        let m = &self.model;
        let inst = &self.inst;
        let mut identity = Tally::new();
        for a in under {
            let pid = match inst.pure(m, eff, &arr(a, a), &self.id(a)) {
                Ok(p) => p,
                Err(e) => return vec![failed("applicative.identity", eff, e.to_string())],
            };
            self.run(
                &mut identity,
                &format!("a={a}"),
                &[("v", comp(eff, a))],
                |v| Ok((inst.ap(m, eff, a, a, &pid, &v[0])?, v[0].clone())),
            );
        }
        let mut homomorphism = Tally::new();
        for (a, b) in pairs(under) {
            let vars = [("f", arr(&a, &b)), ("x", a.clone())];
            self.run(&mut homomorphism, &format!("a={a} b={b}"), &vars, |v| {
                let lhs = inst.ap(
                    m,
                    eff,
                    &a,
                    &b,
                    &inst.pure(m, eff, &arr(&a, &b), &v[0])?,
                    &inst.pure(m, eff, &a, &v[1])?,
                )?;
                Ok((lhs, inst.pure(m, eff, &b, &v[0].apply(&v[1])?)?))
            });
        }
        let mut interchange = Tally::new();
        for (a, b) in pairs(under) {
            let ab = arr(&a, &b);
            let vars = [("u", comp(eff, &ab)), ("y", a.clone())];
            self.run(&mut interchange, &format!("a={a} b={b}"), &vars, |v| {
                let lhs = inst.ap(m, eff, &a, &b, &v[0], &inst.pure(m, eff, &a, &v[1])?)?;
                let y = v[1].clone();
                let at_y = self.fun(&ab, move |f| f.apply(&y));
                let rhs = inst.ap(
                    m,
                    eff,
                    &ab,
                    &b,
                    &inst.pure(m, eff, &arr(&ab, &b), &at_y)?,
                    &v[0],
                )?;
                Ok((lhs, rhs))
            });
        }
        let mut composition = Tally::new();
        for (a, b, c) in triples(under) {
            let (bc, ab, ac) = (arr(&b, &c), arr(&a, &b), arr(&a, &c));
            let compose = {
                let (ab, a) = (ab.clone(), a.clone());
                let model = m.clone();
                self.fun(&bc, move |g| {
                    let (g, a_sh) = (g.clone(), Shape::of(&a, &model));
                    Ok(Value::func(Shape::of(&ab, &model), move |f| {
                        let (g, f) = (g.clone(), f.clone());
                        Ok(Value::func(a_sh.clone(), move |x| g.apply(&f.apply(x)?)))
                    }))
                })
            };
            let vars = [
                ("u", comp(eff, &bc)),
                ("v", comp(eff, &ab)),
                ("w", comp(eff, &a)),
            ];
            self.run(
                &mut composition,
                &format!("a={a} b={b} c={c}"),
                &vars,
                |v| {
                    let ab_ac = arr(&ab, &ac);
                    let p = inst.pure(m, eff, &arr(&bc, &ab_ac), &compose)?;
                    let s1 = inst.ap(m, eff, &bc, &ab_ac, &p, &v[0])?;
                    let s2 = inst.ap(m, eff, &ab, &ac, &s1, &v[1])?;
                    let lhs = inst.ap(m, eff, &a, &c, &s2, &v[2])?;
                    let rhs = inst.ap(
                        m,
                        eff,
                        &b,
                        &c,
                        &v[0],
                        &inst.ap(m, eff, &a, &b, &v[1], &v[2])?,
                    )?;
                    Ok((lhs, rhs))
                },
            );
        }
        let e = eff.to_string();
        vec![
            identity.report("applicative.identity", e.clone()),
            homomorphism.report("applicative.homomorphism", e.clone()),
            interchange.report("applicative.interchange", e.clone()),
            composition.report("applicative.composition", e),
        ]
    }

    // -----------------------------------------------------------------------
    // monad

    fn pure_fn(&self, eff: &Eff, a: &Ty) -> Value {
        let (inst, model, eff2, a2) = (
            self.inst.clone(),
            self.model.clone(),
            eff.clone(),
            a.clone(),
        );
        self.fun(a, move |x| inst.pure(&model, &eff2, &a2, x))
    }

    pub fn monad_laws(&self, eff: &Eff, under: &[Ty]) -> Vec<LawReport> {
        if !monad(eff) {
            return vec![LawReport::not_applicable("monad", eff, not_monoid(eff))];
        }
        let m = &self.model;
        let inst = &self.inst;
        let mut left = Tally::new();
        for (a, b) in pairs(under) {
            let vars = [("x", a.clone()), ("k", arr(&a, &comp(eff, &b)))];
            self.run(&mut left, &format!("a={a} b={b}"), &vars, |v| {
                Ok((
                    inst.bind(m, eff, &a, &b, &inst.pure(m, eff, &a, &v[0])?, &v[1])?,
                    v[1].apply(&v[0])?,
                ))
            });
        }
        let mut right = Tally::new();
        for a in under {
            let pure = self.pure_fn(eff, a);
            self.run(&mut right, &format!("a={a}"), &[("m", comp(eff, a))], |v| {
                Ok((inst.bind(m, eff, a, a, &v[0], &pure)?, v[0].clone()))
            });
        }
        let mut assoc = Tally::new();
        for (a, b, c) in triples(under) {
            let vars = [
                ("m", comp(eff, &a)),
                ("k", arr(&a, &comp(eff, &b))),
                ("h", arr(&b, &comp(eff, &c))),
            ];
            self.run(&mut assoc, &format!("a={a} b={b} c={c}"), &vars, |v| {
                let lhs = inst.bind(
                    m,
                    eff,
                    &b,
                    &c,
                    &inst.bind(m, eff, &a, &b, &v[0], &v[1])?,
                    &v[2],
                )?;
                let (k, h, inst2, model, eff2, b2, c2) = (
                    v[1].clone(),
                    v[2].clone(),
                    inst.clone(),
                    m.clone(),
                    eff.clone(),
                    b.clone(),
                    c.clone(),
                );
                let kh = self.fun(&a, move |x| {
                    inst2.bind(&model, &eff2, &b2, &c2, &k.apply(x)?, &h)
                });
                Ok((lhs, inst.bind(m, eff, &a, &c, &v[0], &kh)?))
            });
        }
        let e = eff.to_string();
        vec![
            left.report("monad.left-identity", e.clone()),
            right.report("monad.right-identity", e.clone()),
            assoc.report("monad.associativity", e),
        ]
    }

    // -----------------------------------------------------------------------
    // adjunction

    pub fn adjunction_laws(&self, under: &[Ty]) -> Vec<LawReport> {
        let m = &self.model;
        let inst = &self.inst;
        let mut out = Vec::new();
        for i in [Ty::E, Ty::G] {
            let (w, r) = (Eff::w(i.clone()), Eff::r(i.clone()));
            let label = format!("W[{i}] -| R[{i}]");
            let mut psi_phi = Tally::new();
            let mut phi_psi = Tally::new();
            let mut eject_inv = Tally::new();
            let mut inv_eject = Tally::new();
            let mut generic = Tally::new();
            for (a, b) in pairs(under) {
                let ab = format!("a={a} b={b}");
                self.run(&mut psi_phi, &ab, &[("c", arr(&comp(&w, &a), &b))], |v| {
                    Ok((
                        inst.psi(m, &i, &a, &inst.phi(m, &i, &a, &v[0])),
                        v[0].clone(),
                    ))
                });
                self.run(&mut phi_psi, &ab, &[("k", arr(&a, &comp(&r, &b)))], |v| {
                    Ok((
                        inst.phi(m, &i, &a, &inst.psi(m, &i, &a, &v[0])),
                        v[0].clone(),
                    ))
                });
                self.run(&mut eject_inv, &ab, &[("k", arr(&a, &comp(&r, &b)))], |v| {
                    Ok((
                        inst.eject_inv(m, &i, &a, &b, &inst.eject(m, &i, &a, &v[0]))?,
                        v[0].clone(),
                    ))
                });
                self.run(&mut inv_eject, &ab, &[("m", comp(&r, &arr(&a, &b)))], |v| {
                    Ok((
                        inst.eject(m, &i, &a, &inst.eject_inv(m, &i, &a, &b, &v[0])?),
                        v[0].clone(),
                    ))
                });
                self.run(&mut generic, &ab, &[("k", arr(&a, &comp(&r, &b)))], |v| {
                    Ok((
                        inst.eject(m, &i, &a, &v[0]),
                        crate::effects::eject_via_adjunction(m, &i, &a, &v[0])?,
                    ))
                });
            }
            let mut unit = Tally::new();
            let mut counit = Tally::new();
            let mut tri_w = Tally::new();
            let mut tri_r = Tally::new();
            for a in under {
                let la = format!("a={a}");
                let wa = comp(&w, a);
                let unit_v = inst.phi(m, &i, a, &self.id(&wa));
                self.run(&mut unit, &la, &[("x", a.clone()), ("j", i.clone())], |v| {
                    Ok((
                        unit_v.apply2(&v[0], &v[1])?,
                        Value::pair(v[0].clone(), v[1].clone()),
                    ))
                });
                let ra = comp(&r, a);
                let counit_v = inst.psi(m, &i, &ra, &self.id(&ra));
                self.run(&mut counit, &la, &[("x", comp(&w, &ra))], |v| {
                    Ok((inst.counit(&v[0])?, counit_v.apply(&v[0])?))
                });
                // ε ∘ W η = id
                self.run(&mut tri_w, &la, &[("x", wa.clone())], |v| {
                    let lifted = inst.fmap(m, &w, a, &comp(&r, &wa), &unit_v, &v[0])?;
                    Ok((inst.counit(&lifted)?, v[0].clone()))
                });
                // R ε ∘ η = id
                let wra = comp(&w, &ra);
                let eps = {
                    let inst = inst.clone();
                    self.fun(&wra, move |x| inst.counit(x))
                };
                let unit_r = inst.phi(m, &i, &ra, &self.id(&wra));
                self.run(&mut tri_r, &la, &[("x", ra.clone())], |v| {
                    Ok((
                        inst.fmap(m, &r, &wra, a, &eps, &unit_r.apply(&v[0])?)?,
                        v[0].clone(),
                    ))
                });
            }
            for (law, t) in [
                ("adjunction.psi-phi", psi_phi),
                ("adjunction.phi-psi", phi_psi),
                ("adjunction.unit", unit),
                ("adjunction.counit", counit),
                ("adjunction.triangle-w", tri_w),
                ("adjunction.triangle-r", tri_r),
                ("adjunction.eject-inverse", eject_inv),
                ("adjunction.inverse-eject", inv_eject),
                ("adjunction.eject-generic", generic),
            ] {
                out.push(t.report(law, label.clone()));
            }
        }
        out.push(self.counit_example());
        out
    }

    /// `ε⟨λx. obscure(spot x)(moon j), j⟩ = obscure(spot j)(moon j)` for
    /// every relation, pair of functions and antecedent.
    fn counit_example(&self) -> LawReport {
        let mut tally = Tally::new();
        let ee = arr(&Ty::E, &Ty::E);
        let vars = [
            ("obscure", "e -> e -> t".parse().unwrap()),
            ("spot", ee.clone()),
            ("moon", ee),
            ("j", Ty::E),
        ];
        self.run(&mut tally, "i=e", &vars, |v| {
            let (obscure, spot, moon, j) = (v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
            let mj = moon.apply(&j)?;
            let pron = self.fun(&Ty::E, move |x| obscure.apply2(&spot.apply(x)?, &mj));
            let lhs = self.inst.counit(&Value::pair(pron, j.clone()))?;
            // direct lookup in the relation's table
            let rel = v[0].as_func()?.tabulate()?;
            let want = rel.apply(&v[1].apply(&j)?)?.apply(&v[2].apply(&j)?)?;
            Ok((lhs, want))
        });
        tally.report("adjunction.counit-example", "W[e] -| R[e]".into())
    }

    // -----------------------------------------------------------------------
    // equivalences

    /// Cross-class coherence for one effect: maps and applications defined
    /// from stronger structure agree with the direct definitions.
    pub fn coherence(&self, eff: &Eff, under: &[Ty]) -> Vec<LawReport> {
        let m = &self.model;
        let inst = &self.inst;
        if !monad(eff) {
            return vec![LawReport::not_applicable("equiv", eff, not_monoid(eff))];
        }
        let mut fmap_ap = Tally::new();
        let mut bind_join = Tally::new();
        let mut ap_bind = Tally::new();
        let mut fmap_bind = Tally::new();
        for (a, b) in pairs(under) {
            let ab = format!("a={a} b={b}");
            let (sa, sb, fab) = (comp(eff, &a), comp(eff, &b), arr(&a, &b));
            self.run(
                &mut fmap_ap,
                &ab,
                &[("k", fab.clone()), ("m", sa.clone())],
                |v| {
                    let lhs = inst.fmap(m, eff, &a, &b, &v[0], &v[1])?;
                    Ok((
                        lhs,
                        inst.ap(m, eff, &a, &b, &inst.pure(m, eff, &fab, &v[0])?, &v[1])?,
                    ))
                },
            );
            self.run(
                &mut bind_join,
                &ab,
                &[("m", sa.clone()), ("k", arr(&a, &sb))],
                |v| {
                    let lhs = inst.bind(m, eff, &a, &b, &v[0], &v[1])?;
                    Ok((
                        lhs,
                        inst.join(m, eff, &b, &inst.fmap(m, eff, &a, &sb, &v[1], &v[0])?)?,
                    ))
                },
            );
            self.run(
                &mut ap_bind,
                &ab,
                &[("F", comp(eff, &fab)), ("X", sa.clone())],
                |v| {
                    let lhs = inst.ap(m, eff, &a, &b, &v[0], &v[1])?;
                    let (x, inst2, model, eff2, a2, b2) = (
                        v[1].clone(),
                        inst.clone(),
                        m.clone(),
                        eff.clone(),
                        a.clone(),
                        b.clone(),
                    );
                    let a_sh = Shape::of(&a, m);
                    let k = self.fun(&fab, move |f| {
                        let (f, inst3, model3, eff3, b3) = (
                            f.clone(),
                            inst2.clone(),
                            model.clone(),
                            eff2.clone(),
                            b2.clone(),
                        );
                        let inner = Value::func(a_sh.clone(), move |x| {
                            inst3.pure(&model3, &eff3, &b3, &f.apply(x)?)
                        });
                        inst2.bind(&model, &eff2, &a2, &b2, &x, &inner)
                    });
                    Ok((lhs, inst.bind(m, eff, &fab, &b, &v[0], &k)?))
                },
            );
            self.run(
                &mut fmap_bind,
                &ab,
                &[("k", fab.clone()), ("m", sa.clone())],
                |v| {
                    let lhs = inst.fmap(m, eff, &a, &b, &v[0], &v[1])?;
                    let (k, inst2, model, eff2, b2) = (
                        v[0].clone(),
                        inst.clone(),
                        m.clone(),
                        eff.clone(),
                        b.clone(),
                    );
                    let ret = self.fun(&a, move |x| inst2.pure(&model, &eff2, &b2, &k.apply(x)?));
                    Ok((lhs, inst.bind(m, eff, &a, &b, &v[1], &ret)?))
                },
            );
        }
        let e = eff.to_string();
        vec![
            fmap_ap.report("equiv.fmap-from-ap", e.clone()),
            bind_join.report("equiv.bind-from-join", e.clone()),
            ap_bind.report("equiv.ap-from-bind", e.clone()),
            fmap_bind.report("equiv.fmap-from-bind", e),
        ]
    }

    fn mode_equiv(
        &self,
        law: &str,
        effect: &str,
        mode: &str,
        lty: &str,
        rty: &str,
        oracle: impl Fn(&Model, &Value, &Value) -> Result<Value> + Sync,
    ) -> LawReport {
        let mut tally = Tally::new();
        let (lty, rty): (Ty, Ty) = (lty.parse().unwrap(), rty.parse().unwrap());
        let mode = parse_mode(mode).unwrap();
        let m = &self.model;
        self.run(
            &mut tally,
            &format!("{mode} on {lty}, {rty}"),
            &[("l", lty.clone()), ("r", rty.clone())],
            |v| {
                Ok((
                    apply_mode(m, &mode, &v[0], &v[1], &lty, &rty)?,
                    oracle(m, &v[0], &v[1])?,
                ))
            },
        );
        tally.report(law, effect.into())
    }

    /// Derived modes that coincide with hand-written operations.
    pub fn derived_equivalences(&self) -> Vec<LawReport> {
        let mut out = Vec::new();
        for (a, b) in pairs(&default_under()) {
            // k ≪ m for the reader-over-sets stack: λg. (λa. k a g) ≪ m g
            let lty = format!("{a} -> R[g] (S {b})");
            let rty = format!("R[g] (S {a})");
            let (a2, b2) = (a.clone(), b.clone());
            out.push(self.mode_equiv(
                "equiv.reader-bind",
                "R[g] S",
                "EL(AP(JN(MR(FA))))",
                &lty,
                &rty,
                move |m, k, mv| {
                    let (k, mv, m2, a3, b3) =
                        (k.clone(), mv.clone(), m.clone(), a2.clone(), b2.clone());
                    Ok(Value::func(Shape::of(&Ty::G, m), move |g| {
                        let g2 = g.clone();
                        let kg = k.clone();
                        let cont =
                            Value::func(Shape::of(&a3, &m2), move |x| kg.apply(x)?.apply(&g2));
                        crate::effects::bind(&m2, &Eff::S, &a3, &b3, &mv.apply(g)?, &cont)
                    }))
                },
            ));
        }
        out.push(self.mode_equiv(
            "equiv.state-bind",
            "R[e] W[e]",
            "ML(ER(CU(BA)))",
            "R[e] (W[e] e)",
            "e -> R[e] (W[e] t)",
            |m, mv, k| {
                let (mv, k) = (mv.clone(), k.clone());
                Ok(Value::func(Shape::of(&Ty::E, m), move |i| {
                    let p = mv.apply(i)?;
                    let (x, j) = p.as_pair()?;
                    k.apply2(x, j)
                }))
            },
        ));
        out.push(self.mode_equiv(
            "equiv.dynamic-bind",
            "R[g] S W[g]",
            "ML(JN(ML(ER(CU(BA)))))",
            "R[g] (S (W[g] e))",
            "e -> R[g] (S (W[g] t))",
            |m, mv, k| {
                let (mv, k) = (mv.clone(), k.clone());
                Ok(Value::func(Shape::of(&Ty::G, m), move |i| {
                    let mut out = Vec::new();
                    for p in mv.apply(i)?.as_set()? {
                        let (x, j) = p.as_pair()?;
                        out.extend(k.apply2(x, j)?.as_set()?.iter().cloned());
                    }
                    Value::set(out)
                }))
            },
        ));
        // F ≫ λp. A ≫ λz. η (p z), with A the subject and F the predicate
        let inverse_scope = |_: &Model, subj: &Value, pred: &Value| -> Result<Value> {
            let mut out = Vec::new();
            for p in pred.as_set()? {
                for z in subj.as_set()? {
                    out.push(p.apply(z)?);
                }
            }
            Value::set(out)
        };
        for mode in ["JN(ML(MR(BA)))", "JN(MR(ML(BA)))"] {
            out.push(self.mode_equiv(
                "equiv.inverse-scope",
                "S",
                mode,
                "S e",
                "S (e -> t)",
                inverse_scope,
            ));
        }
        out
    }

    pub fn equivalences(&self, effects: &[Eff], under: &[Ty]) -> Vec<LawReport> {
        let mut out: Vec<LawReport> = effects
            .iter()
            .flat_map(|e| self.coherence(e, under))
            .collect();
        out.extend(self.derived_equivalences());
        out
    }

    /// Every law for every effect, then the adjunction and equivalences.
    pub fn suite(&self, effects: &[Eff], under: &[Ty]) -> Vec<LawReport> {
        let jobs: Vec<Box<dyn Fn() -> Vec<LawReport> + Send + Sync + '_>> = effects
            .iter()
            .flat_map(|e| {
                let e1 = e.clone();
                let e2 = e.clone();
                let e3 = e.clone();
                let e4 = e.clone();
                [
                    Box::new(move || self.functor_laws(&e1, under))
                        as Box<dyn Fn() -> Vec<LawReport> + Send + Sync>,
                    Box::new(move || self.applicative_laws(&e2, under)),
                    Box::new(move || self.monad_laws(&e3, under)),
                    Box::new(move || self.coherence(&e4, under)),
                ]
            })
            .chain([
                Box::new(move || self.adjunction_laws(under))
                    as Box<dyn Fn() -> Vec<LawReport> + Send + Sync>,
                Box::new(move || self.derived_equivalences()),
            ])
            .collect();
        jobs.par_iter()
            .map(|j| j())
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    }
}

pub fn check_functor_laws(eff: &Eff, model: &Model, under: &[Ty]) -> Vec<LawReport> {
    Checker::new(model.clone()).functor_laws(eff, under)
}

pub fn check_applicative_laws(eff: &Eff, model: &Model, under: &[Ty]) -> Vec<LawReport> {
    Checker::new(model.clone()).applicative_laws(eff, under)
}

pub fn check_monad_laws(eff: &Eff, model: &Model, under: &[Ty]) -> Vec<LawReport> {
    Checker::new(model.clone()).monad_laws(eff, under)
}

pub fn check_adjunction_laws(model: &Model) -> Vec<LawReport> {
    Checker::new(model.clone()).adjunction_laws(&default_under())
}

pub fn check_equivalences(model: &Model) -> Vec<LawReport> {
    Checker::new(model.clone()).equivalences(&default_effects(), &default_under())
}

/// The default suite: every default effect over `e` and `t`.
pub fn run_suite(model: &Model) -> Vec<LawReport> {
    Checker::new(model.clone()).suite(&default_effects(), &default_under())
}

/// A fixed-width table with one row per report and a closing summary line.
pub fn render_table(reports: &[LawReport]) -> String {
    let mut out = format!(
        "{:<28} {:<14} {:>9}  {:<10} {}\n",
        "LAW", "EFFECT", "CASES", "COVERAGE", "RESULT"
    );
    for r in reports {
        let coverage = if !r.applicable {
            "n/a"
        } else if r.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        };
        let result = match (r.applicable, r.passed) {
            (false, _) => r.note.clone().unwrap_or_default(),
            (true, true) => "ok".into(),
            (true, false) => format!("FAILED ({} counterexamples)", r.failures),
        };
        out.push_str(&format!(
            "{:<28} {:<14} {:>9}  {:<10} {}\n",
            r.law, r.effect, r.cases, coverage, result
        ));
        for ex in &r.counterexamples {
            out.push_str(&format!("    {ex}\n"));
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    if failed == 0 {
        out.push_str("all laws passed\n");
    } else {
        out.push_str(&format!("{failed} of {} checks failed\n", reports.len()));
    }
    out
}

fn not_monoid(eff: &Eff) -> String {
    match eff {
        Eff::W(o) if !monoid(o) => format!("{eff} is only a functor: {o} is not a monoid"),
        _ => format!("{eff} does not have this structure"),
    }
}

fn failed(law: &str, eff: &Eff, why: String) -> LawReport {
    LawReport {
        law: law.into(),
        effect: eff.to_string(),
        types: vec![],
        cases: 1,
        failures: 1,
        counterexamples: vec![why],
        passed: false,
        exhaustive: true,
        applicable: true,
        note: None,
    }
}

/// Deliberately broken effect operations, one per effect and class, used to
/// show that the checks can fail.
pub mod fixtures {
    use super::*;
    use crate::effects;

    /// A type-preserving distortion of a computation's effect.
    pub fn perturb(model: &Model, eff: &Eff, a: &Ty, v: &Value) -> Result<Value> {
        fn drop_min(s: &Value) -> Result<Value> {
            Value::set(s.as_set()?.iter().skip(1).cloned())
        }
        Ok(match eff {
            Eff::S => drop_min(v)?,
            Eff::F => Value::pair(v.as_pair()?.0.clone(), Value::set([])?),
            Eff::M => Value::failure(),
            Eff::R(i) => {
                let first = Shape::of(i, model).nth(0)?;
                let v = v.clone();
                Value::func(Shape::of(i, model), move |_| v.apply(&first))
            }
            Eff::W(p) => {
                let (x, q) = v.as_pair()?;
                if monoid(p) {
                    Value::pair(x.clone(), Value::Bool(!q.as_bool()?))
                } else if **p == *a {
                    Value::pair(q.clone(), x.clone())
                } else {
                    v.clone()
                }
            }
            Eff::C(r) if monoid(r) => {
                let v = v.clone();
                Value::func(
                    Shape::of(&Ty::arrow(a.clone(), (**r).clone()), model),
                    move |c| Ok(Value::Bool(!v.apply(c)?.as_bool()?)),
                )
            }
            Eff::C(_) => v.clone(),
            Eff::T(s) => {
                let v = v.clone();
                Value::func(Shape::of(s, model), move |st| {
                    Ok(Value::pair(v.apply(st)?.as_pair()?.0.clone(), st.clone()))
                })
            }
            Eff::D(s) => {
                let v = v.clone();
                Value::func(Shape::of(s, model), move |st| drop_min(&v.apply(st)?))
            }
        })
    }

    pub struct Mutant {
        pub eff: Eff,
        pub class: Class,
    }

    impl Instance for Mutant {
        fn name(&self) -> String {
            format!("broken {:?} for {}", self.class, self.eff)
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
            let out = effects::fmap(model, eff, a, b, k, m)?;
            if *eff == self.eff && self.class == Class::Functor {
                perturb(model, eff, b, &out)
            } else {
                Ok(out)
            }
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
            let out = effects::ap(model, eff, a, b, ff, xx)?;
            if *eff == self.eff && self.class == Class::Applicative {
                perturb(model, eff, b, &out)
            } else {
                Ok(out)
            }
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
            let out = effects::bind(model, eff, a, b, m, k)?;
            if *eff == self.eff && self.class == Class::Monad {
                perturb(model, eff, b, &out)
            } else {
                Ok(out)
            }
        }
    }

    /// `Ψ k = λ⟨a, x⟩. k a x₀`, ignoring the stored value.
    pub struct BrokenPsi;

    impl Instance for BrokenPsi {
        fn name(&self) -> String {
            "broken psi".into()
        }

        fn psi(&self, model: &Model, i: &Ty, a: &Ty, k: &Value) -> Value {
            let k = k.clone();
            let first = Shape::of(i, model).nth(0);
            Value::func(
                Shape::of(&Ty::comp(Eff::w(i.clone()), a.clone()), model),
                move |p| {
                    let (x, _) = p.as_pair()?;
                    k.apply(x)?
                        .apply(first.as_ref().map_err(crate::error::Error::eval)?)
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn checker() -> Checker {
        Checker::new(Model::bare(2, 1))
    }

    fn all_pass(reports: &[LawReport]) {
        for r in reports {
            assert!(r.passed, "{} {}: {:?}", r.law, r.effect, r.counterexamples);
            assert!(!r.applicable || r.cases > 0);
        }
    }

    #[test]
    fn sets_satisfy_functor_laws_exhaustively() {
        let rs = checker().functor_laws(&Eff::S, &default_under());
        all_pass(&rs);
        assert!(rs.iter().all(|r| r.exhaustive));
    }

    #[test]
    fn continuations_satisfy_functor_laws() {
        let rs = checker()
            .with_budget(1 << 16)
            .functor_laws(&Eff::c(Ty::T), &default_under());
        all_pass(&rs);
        assert!(rs.iter().all(|r| r.exhaustive));
    }

    #[test]
    fn writer_of_entities_is_not_applicative() {
        let rs = checker().applicative_laws(&Eff::w(Ty::E), &default_under());
        assert_eq!(rs.len(), 1);
        assert!(!rs[0].applicable);
        assert!(rs[0].note.as_ref().unwrap().contains("not a monoid"));
        let rs = checker().applicative_laws(&Eff::w(Ty::T), &default_under());
        all_pass(&rs);
    }

    #[test]
    fn state_and_dynamic_laws() {
        let c = checker();
        all_pass(&c.applicative_laws(&Eff::t(Ty::G), &default_under()));
        all_pass(&c.monad_laws(&Eff::d(Ty::G), &default_under()));
        all_pass(&c.monad_laws(&Eff::S, &default_under()));
        all_pass(&c.monad_laws(&Eff::M, &default_under()));
    }

    #[test]
    fn writer_fmap_mutant_is_caught() {
        let c = checker().with_instance(Arc::new(Mutant {
            eff: Eff::w(Ty::E),
            class: Class::Functor,
        }));
        let rs = c.functor_laws(&Eff::w(Ty::E), &default_under());
        assert!(rs.iter().any(|r| !r.passed));
    }

    #[test]
    fn broken_psi_is_caught() {
        let rs = checker()
            .with_instance(Arc::new(BrokenPsi))
            .adjunction_laws(&default_under());
        assert!(rs
            .iter()
            .any(|r| r.law == "adjunction.psi-phi" && !r.passed));
    }

    #[test]
    fn adjunction_and_equivalences_hold() {
        let c = checker();
        all_pass(&c.adjunction_laws(&default_under()));
        all_pass(&c.derived_equivalences());
        all_pass(&c.coherence(&Eff::S, &default_under()));
    }

    #[test]
    fn sampled_checks_are_marked() {
        let rs = checker()
            .with_budget(10)
            .functor_laws(&Eff::S, &default_under());
        assert!(rs.iter().any(|r| !r.exhaustive));
        all_pass(&rs);
    }
}
