//! Example fragments shipped with the crate, each a lexicon paired with a
//! model.

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::model::Model;

macro_rules! shipped {
    ($($name:literal),*) => {
        &[$(($name,
             include_str!(concat!("../fragments/", $name, ".lexicon.json")),
             include_str!(concat!("../fragments/", $name, ".model.json")))),*]
    };
}

const SHIPPED: &[(&str, &str, &str)] = shipped!(
    "ch1-extensional",
    "ch2-functor",
    "ch3-applicative",
    "ch4-monad",
    "ch5-adjunction"
);

#[derive(Clone, Debug)]
pub struct Fragment {
    pub name: String,
    pub lexicon: Lexicon,
    pub model: Model,
}

pub fn fragment_names() -> impl Iterator<Item = &'static str> {
    SHIPPED.iter().map(|(n, _, _)| *n)
}

pub fn fragment(name: &str) -> Result<Fragment> {
    let (_, lex, model) = SHIPPED
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| Error::UnknownFragment(name.to_string()))?;
    Ok(Fragment {
        name: name.to_string(),
        lexicon: Lexicon::from_json(lex)?,
        model: Model::from_json(model)?,
    })
}

pub fn fragments() -> Result<Vec<Fragment>> {
    fragment_names().map(fragment).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_fragment_loads_and_instantiates() {
        for f in fragments().unwrap() {
            f.lexicon
                .check_against(&f.model)
                .unwrap_or_else(|e| panic!("{}: {e}", f.name));
        }
    }

    #[test]
    fn unknown_fragment() {
        assert!(matches!(fragment("ch9"), Err(Error::UnknownFragment(_))));
    }
}
