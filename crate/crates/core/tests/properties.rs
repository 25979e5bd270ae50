use effects_core::combine::Combiner;
use effects_core::interp::{synsem, Sem, DEFAULT_MAX_DERIVATIONS};
use effects_core::lexicon::{Arg, DenSpec, Entry};
use effects_core::mode::{Mode, LEAF_NAMES, META_NAMES, RULE_FLAGS};
use effects_core::syntax::print_tree;
use effects_core::ty::{types_of_size, Base};
use effects_core::{combine, fragment, parse_mode, parse_tree, parse_type, print_mode, print_type};
use effects_core::{CombineConfig, Eff, Syn, Ty};
use proptest::prelude::*;

fn arb_ty() -> impl Strategy<Value = Ty> {
    let leaf = prop_oneof![Just(Ty::E), Just(Ty::T), Just(Ty::G)];
    leaf.prop_recursive(5, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Ty::arrow(a, b)),
            (0..3usize, inner.clone())
                .prop_map(|(k, a)| Ty::comp([Eff::S, Eff::F, Eff::M][k].clone(), a)),
            (0..5usize, inner.clone(), inner).prop_map(|(k, p, a)| {
                let eff = [Eff::r, Eff::w, Eff::c, Eff::t, Eff::d][k](p);
                Ty::comp(eff, a)
            }),
        ]
    })
}

fn sized(max: usize) -> impl Strategy<Value = Ty> {
    arb_ty().prop_filter("too large", move |t| t.size() <= max)
}

fn arb_mode() -> impl Strategy<Value = Mode> {
    let leaf = (0..LEAF_NAMES.len()).prop_map(|i| Mode::leaf(LEAF_NAMES[i]).unwrap());
    leaf.prop_recursive(5, 5, 1, |inner| {
        (0..META_NAMES.len(), inner).prop_map(|(i, m)| Mode::wrap(META_NAMES[i], m).unwrap())
    })
}

fn arb_syn() -> impl Strategy<Value = Syn> {
    let leaf =
        prop_oneof![Just("jupiter"), Just("saw"), Just("a_b"), Just("it")].prop_map(Syn::leaf);
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Syn::branch(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Syn::island(l, r)),
        ]
    })
}

fn is_subsequence<T: PartialEq>(small: &[T], big: &[T]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn types_round_trip(t in sized(9)) {
        prop_assert_eq!(parse_type(&print_type(&t)).unwrap(), t);
    }

    #[test]
    fn modes_round_trip(m in arb_mode()) {
        prop_assert!(m.depth() <= 6);
        prop_assert_eq!(parse_mode(&print_mode(&m)).unwrap(), m);
    }

    #[test]
    fn trees_round_trip(s in arb_syn()) {
        prop_assert_eq!(parse_tree(&print_tree(&s)).unwrap(), s);
    }

    #[test]
    fn ablation_only_removes(l in sized(6), r in sized(6), flag in 0..RULE_FLAGS.len()) {
        let full = combine(&l, &r, &CombineConfig::default());
        let mut cfg = CombineConfig::default();
        cfg.set_rule(RULE_FLAGS[flag], false).unwrap();
        let less = combine(&l, &r, &cfg);
        prop_assert!(is_subsequence(&less, &full), "{} off: {:?} vs {:?}", RULE_FLAGS[flag], less, full);
    }

    #[test]
    fn combine_is_deterministic(l in sized(7), r in sized(7)) {
        let cfg = CombineConfig::default();
        prop_assert_eq!(combine(&l, &r, &cfg), combine(&l, &r, &cfg));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combine_terminates_without_revisiting(l in sized(12), r in sized(12)) {
        let c = Combiner::new(CombineConfig::default());
        let out = c.combine(&l, &r);
        prop_assert_eq!(c.guard_hits(), 0);
        let cap = CombineConfig::default().max_result_type_size;
        prop_assert!(out.iter().all(|res| res.result.size() <= cap));
    }
}

#[test]
fn crossover_is_asymmetric_for_small_parameters() {
    let cfg = CombineConfig::default();
    let e_t = Ty::arrow(Ty::E, Ty::T);
    let params: Vec<Ty> = (1..=2)
        .flat_map(|n| types_of_size(n, &[Base::E, Base::T, Base::G]))
        .collect();
    assert!(!params.is_empty());
    for i in params {
        let wr = combine(
            &Ty::comp(Eff::w(i.clone()), Ty::E),
            &Ty::comp(Eff::r(i.clone()), e_t.clone()),
            &cfg,
        );
        assert!(
            wr.iter().any(|res| res.mode.contains("CU")),
            "W[{i}] e, R[{i}] (e -> t)"
        );
        let rw = combine(
            &Ty::comp(Eff::r(i.clone()), Ty::E),
            &Ty::comp(Eff::w(i.clone()), e_t.clone()),
            &cfg,
        );
        assert!(
            !rw.iter().any(|res| res.mode.contains("CU")),
            "R[{i}] e, W[{i}] (e -> t)"
        );
    }
}

const SENTENCES: [(&str, &str); 9] = [
    ("ch1-extensional", "[jupiter [followed [the moon]]]"),
    ("ch2-functor", "[she [saw [the planet]]]"),
    ("ch2-functor", "[who [saw her]]"),
    ("ch3-applicative", "[mary [saw [a cat]]]"),
    ("ch3-applicative", "[JUPITER left]"),
    ("ch4-monad", "[[a cat] [saw [a box]]]"),
    ("ch4-monad", "[everyone [admires someone]]"),
    ("ch5-adjunction", "[[jupiter push] [eclipsed it]]"),
    (
        "ch5-adjunction",
        "[[if {everyone passed}] [nobody cheered]]",
    ),
];

fn check_local(sem: &Sem, c: &Combiner) {
    if let Sem::Comb {
        ty,
        mode,
        left,
        right,
    } = sem
    {
        let found = c.combine(left.ty(), right.ty());
        assert!(
            found.iter().any(|r| &r.mode == mode && &r.result == ty),
            "{mode} {ty}"
        );
        check_local(left, c);
        check_local(right, c);
    }
}

#[test]
fn every_derivation_is_locally_sound() {
    let c = Combiner::new(CombineConfig::default());
    for (frag, tree) in SENTENCES {
        let f = fragment(frag).unwrap();
        let d = synsem(
            &f.lexicon,
            &parse_tree(tree).unwrap(),
            &c,
            DEFAULT_MAX_DERIVATIONS,
        );
        assert!(!d.sems.is_empty(), "{tree}");
        for s in &d.sems {
            check_local(s, &c);
        }
    }
}

#[test]
fn adding_entries_never_removes_derivations() {
    let c = Combiner::new(CombineConfig::default());
    let extra = [
        ("it", "e", DenSpec::new("pro", vec![Arg::Nat(0)])),
        (
            "saw",
            "e -> e -> t",
            DenSpec::new("pred2", vec![Arg::Name("saw".into())]),
        ),
    ];
    for (frag, tree) in SENTENCES {
        let f = fragment(frag).unwrap();
        let syn = parse_tree(tree).unwrap();
        let before = synsem(&f.lexicon, &syn, &c, DEFAULT_MAX_DERIVATIONS);
        for (word, ty, den) in &extra {
            let mut lex = f.lexicon.clone();
            if lex
                .insert(
                    word,
                    Entry {
                        ty: ty.parse().unwrap(),
                        den: den.clone(),
                    },
                )
                .is_err()
            {
                continue;
            }
            let after = synsem(&lex, &syn, &c, DEFAULT_MAX_DERIVATIONS);
            assert!(after.sems.len() >= before.sems.len(), "{tree} + {word}");
            for s in &before.sems {
                assert!(after.sems.contains(s), "{tree} + {word} lost {s}");
            }
        }
    }
}

#[test]
fn islands_without_quantifiers_are_transparent() {
    let c = Combiner::new(CombineConfig::default());
    let f = fragment("ch2-functor").unwrap();
    for tree in [
        "{she [saw [the planet]]}",
        "{who [saw her]}",
        "{[the planet] is_bright}",
    ] {
        let island = parse_tree(tree).unwrap();
        let plain = island.without_islands();
        let a = synsem(&f.lexicon, &island, &c, DEFAULT_MAX_DERIVATIONS);
        let b = synsem(&f.lexicon, &plain, &c, DEFAULT_MAX_DERIVATIONS);
        assert!(!a.sems.is_empty(), "{tree}");
        assert_eq!(a.sems, b.sems, "{tree}");
    }
}
