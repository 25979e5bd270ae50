//! A type-driven semantic composition engine.
//!
//! Given typed constituents, [`combine`] enumerates every mode of combination
//! licensed by functorial, applicative, monadic and adjunction-based
//! meta-combinators. [`synsem`] lifts this to binary trees, [`denote`]
//! evaluates derivations over finite models, and [`laws`] checks the
//! algebraic laws the whole system relies on.

pub mod combine;
pub mod effects;
pub mod error;
pub mod fragment;
pub mod interp;
pub mod laws;
pub mod lexicon;
pub mod mode;
pub mod model;
pub mod semantics;
pub mod soundness;
pub mod syntax;
pub mod ty;
pub mod value;

pub use combine::{combine, result_type, CombineResult, Combiner};
pub use error::{Error, Result, SyntaxError};
pub use fragment::{fragment, fragment_names, fragments, Fragment};
pub use interp::{denote, evaluated, synsem, Derivations, Sem};
pub use laws::{run_suite, Checker, LawReport};
pub use lexicon::{instantiate, load_lexicon, DenSpec, Entry, Lexicon};
pub use mode::{parse_mode, print_mode, CombineConfig, Mode};
pub use model::{load_model, Model};
pub use semantics::apply_mode;
pub use syntax::{enumerate_trees, parse_tree, Syn};
pub use ty::{parse_type, print_type, Eff, Ty};
pub use value::{enumerate_domain, values_equal, Shape, Value};
