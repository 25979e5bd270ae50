//! Randomized check that evaluating a mode on type-conforming values yields
//! a value of the result type the combinator promised.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combine::Combiner;
use crate::mode::CombineConfig;
use crate::model::Model;
use crate::semantics::apply_mode;
use crate::ty::{types_of_size, Base, Ty};
use crate::value::{render, Shape, Value};

/// Types with at most this many inhabitants are drawn as operands.
const MAX_OPERAND: u128 = 1 << 16;
const MAX_TYPE_NODES: usize = 5;

#[derive(Clone, Debug, Default)]
pub struct SoundnessReport {
    pub cases: usize,
    pub failures: Vec<String>,
}

fn pool(model: &Model) -> Vec<Ty> {
    (1..=MAX_TYPE_NODES)
        .flat_map(|n| types_of_size(n, &[Base::E, Base::T, Base::G]))
        .filter(|t| {
            let sh = Shape::of(t, model);
            sh.size().is_some_and(|s| s <= MAX_OPERAND) && sh.nth(0).is_ok()
        })
        .collect()
}

/// Whether membership in `sh` can be decided by enumerating function domains.
fn checkable(sh: &Shape) -> bool {
    match sh {
        Shape::Fun(d, c) => d.size().is_some_and(|n| n <= MAX_OPERAND) && checkable(c),
        Shape::Set(a) | Shape::Maybe(a) => checkable(a),
        Shape::Pair(a, b) => checkable(a) && checkable(b),
        _ => true,
    }
}

fn sample(ty: &Ty, model: &Model, rng: &mut impl Rng) -> crate::Result<Value> {
    let sh = Shape::of(ty, model);
    let n = sh.size().unwrap_or(1);
    sh.nth(rng.gen_range(0..n))
}

/// Draws `cases` (left, right, mode) triples that `cfg` licenses and checks
/// each evaluated result against its declared type.
pub fn check_soundness(
    model: &Model,
    cfg: CombineConfig,
    cases: usize,
    seed: u64,
) -> SoundnessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tys = pool(model);
    let combiner = Combiner::new(cfg);
    let mut report = SoundnessReport::default();
    while report.cases < cases {
        let (l, r) = (tys.choose(&mut rng).unwrap(), tys.choose(&mut rng).unwrap());
        let results = combiner.combine(l, r);
        let Some(res) = results.choose(&mut rng) else {
            continue;
        };
        if !checkable(&Shape::of(&res.result, model)) {
            continue;
        }
        report.cases += 1;
        let outcome = (|| {
            let lv = sample(l, model, &mut rng)?;
            let rv = sample(r, model, &mut rng)?;
            let out = apply_mode(model, &res.mode, &lv, &rv, l, r)?;
            let ok = Shape::of(&res.result, model).contains(&out)?;
            Ok::<_, crate::Error>((ok, lv, rv, out))
        })();
        let head = format!("{} on {l}, {r} => {}", res.mode, res.result);
        match outcome {
            Ok((true, ..)) => {}
            Ok((false, lv, rv, out)) => report.failures.push(format!(
                "{head}: {} applied to {} and {} gave {}",
                res.mode,
                render(&lv, model),
                render(&rv, model),
                render(&out, model)
            )),
            Err(e) => report.failures.push(format!("{head}: {e}")),
        }
    }
    report
}
