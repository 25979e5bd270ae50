//! Semantic types, effect constructors, and the class predicates that decide
//! which modes of combination apply to a pair of types.
//!
//! Concrete syntax:
//!
//! ```text
//! Ty    := AppTy ("->" Ty)?
//! AppTy := Eff AppTy | Atom
//! Atom  := "e" | "t" | "v" | "g" | "(" Ty ")"
//! Eff   := "S" | "F" | "M" | "R[" Ty "]" | "W[" Ty "]" | "C[" Ty "]" | "T[" Ty "]" | "D[" Ty "]"
//! ```
//!
//! Effect prefixes bind tighter than the arrow, so `S e -> t` is a function
//! from `S e`, while `S (e -> t)` is an `S`-computation of a function.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::SyntaxError;

/// Base types: entities, truth values, events, and assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Base {
    E,
    T,
    V,
    /// Assignments / discourse states. Interpreted as fixed-length entity tuples.
    G,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Base(Base),
    Arrow(Box<Ty>, Box<Ty>),
    Comp(Eff, Box<Ty>),
}

/// Effect constructors. Parameterized effects carry the type they read,
/// write, quantify over, or thread as state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Eff {
    /// Indeterminacy (sets of alternatives).
    S,
    /// Focus: a value paired with its alternatives.
    F,
    /// Possible failure.
    M,
    /// Reading an environment.
    R(Box<Ty>),
    /// Writing a side message.
    W(Box<Ty>),
    /// Quantifying over continuations into the parameter type.
    C(Box<Ty>),
    /// Deterministic state threading.
    T(Box<Ty>),
    /// Nondeterministic state threading.
    D(Box<Ty>),
}

impl Ty {
    pub const E: Ty = Ty::Base(Base::E);
    pub const T: Ty = Ty::Base(Base::T);
    pub const V: Ty = Ty::Base(Base::V);
    pub const G: Ty = Ty::Base(Base::G);

    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn comp(eff: Eff, under: Ty) -> Ty {
        Ty::Comp(eff, Box::new(under))
    }

    /// Node count, including effect parameters.
    pub fn size(&self) -> usize {
        match self {
            Ty::Base(_) => 1,
            Ty::Arrow(a, b) => 1 + a.size() + b.size(),
            Ty::Comp(eff, a) => 1 + eff.param().map_or(0, Ty::size) + a.size(),
        }
    }

    pub fn is_base(&self, base: Base) -> bool {
        matches!(self, Ty::Base(b) if *b == base)
    }
}

impl Eff {
    pub fn r(param: Ty) -> Eff {
        Eff::R(Box::new(param))
    }
    pub fn w(param: Ty) -> Eff {
        Eff::W(Box::new(param))
    }
    pub fn c(param: Ty) -> Eff {
        Eff::C(Box::new(param))
    }
    pub fn t(param: Ty) -> Eff {
        Eff::T(Box::new(param))
    }
    pub fn d(param: Ty) -> Eff {
        Eff::D(Box::new(param))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Eff::S => "S",
            Eff::F => "F",
            Eff::M => "M",
            Eff::R(_) => "R",
            Eff::W(_) => "W",
            Eff::C(_) => "C",
            Eff::T(_) => "T",
            Eff::D(_) => "D",
        }
    }

    pub fn param(&self) -> Option<&Ty> {
        match self {
            Eff::S | Eff::F | Eff::M => None,
            Eff::R(p) | Eff::W(p) | Eff::C(p) | Eff::T(p) | Eff::D(p) => Some(p),
        }
    }
}

/// Which algebraic classes an effect constructor belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EffClassReport {
    pub functor: bool,
    pub applicative: bool,
    pub monad: bool,
}

/// Only truth values form a monoid here, under conjunction with unit `true`.
pub fn monoid(ty: &Ty) -> bool {
    ty.is_base(Base::T)
}

pub fn functor(_eff: &Eff) -> bool {
    true
}

pub fn applicative(eff: &Eff) -> bool {
    match eff {
        Eff::W(o) => monoid(o),
        other => functor(other),
    }
}

pub fn monad(eff: &Eff) -> bool {
    applicative(eff)
}

pub fn effect_class(eff: &Eff) -> EffClassReport {
    EffClassReport {
        functor: functor(eff),
        applicative: applicative(eff),
        monad: monad(eff),
    }
}

/// The left adjoints of an effect. Reading an environment is right adjoint
/// to writing into it; nothing else has an adjoint.
pub fn left_adjoints(eff: &Eff) -> Vec<Eff> {
    match eff {
        Eff::R(i) => vec![Eff::W(i.clone())],
        _ => Vec::new(),
    }
}

/// `left ⊣ right`
pub fn adjoint(left: &Eff, right: &Eff) -> bool {
    left_adjoints(right).contains(left)
}

pub fn type_size(ty: &Ty) -> usize {
    ty.size()
}

// ---------------------------------------------------------------------------
// printing

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::E => "e",
            Base::T => "t",
            Base::V => "v",
            Base::G => "g",
        })
    }
}

impl fmt::Display for Eff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param() {
            None => f.write_str(self.name()),
            Some(p) => write!(f, "{}[{}]", self.name(), p),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Base(b) => write!(f, "{b}"),
            Ty::Arrow(a, b) => {
                if matches!(**a, Ty::Arrow(..)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
            Ty::Comp(eff, a) => {
                if matches!(**a, Ty::Arrow(..) | Ty::Comp(..)) {
                    write!(f, "{eff} ({a})")
                } else {
                    write!(f, "{eff} {a}")
                }
            }
        }
    }
}

pub fn print_type(ty: &Ty) -> String {
    ty.to_string()
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok<'a> {
    Word(&'a str),
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok<'_>)>, SyntaxError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'[' => {
                toks.push((i, Tok::LBracket));
                i += 1;
            }
            b']' => {
                toks.push((i, Tok::RBracket));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                toks.push((i, Tok::Arrow));
                i += 2;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                toks.push((start, Tok::Word(&text[start..i])));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(SyntaxError::new(i, format!("unexpected character '{ch}'")));
            }
        }
    }
    Ok(toks)
}

struct TyParser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> TyParser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn expect(&mut self, tok: Tok<'_>, what: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(SyntaxError::new(self.offset(), format!("expected {what}")))
        }
    }

    fn ty(&mut self) -> Result<Ty, SyntaxError> {
        let dom = self.app()?;
        if self.peek() == Some(Tok::Arrow) {
            self.pos += 1;
            let cod = self.ty()?;
            Ok(Ty::arrow(dom, cod))
        } else {
            Ok(dom)
        }
    }

    fn app(&mut self) -> Result<Ty, SyntaxError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                let base = match w {
                    "e" => Some(Base::E),
                    "t" => Some(Base::T),
                    "v" => Some(Base::V),
                    "g" => Some(Base::G),
                    _ => None,
                };
                if let Some(b) = base {
                    return Ok(Ty::Base(b));
                }
                let eff = match w {
                    "S" => Eff::S,
                    "F" => Eff::F,
                    "M" => Eff::M,
                    "R" | "W" | "C" | "T" | "D" => {
                        if self.peek() != Some(Tok::LBracket) {
                            return Err(SyntaxError::new(
                                self.offset(),
                                format!("effect {w} requires a bracketed parameter"),
                            ));
                        }
                        self.pos += 1;
                        let p = self.ty()?;
                        self.expect(Tok::RBracket, "']'")?;
                        match w {
                            "R" => Eff::r(p),
                            "W" => Eff::w(p),
                            "C" => Eff::c(p),
                            "T" => Eff::t(p),
                            _ => Eff::d(p),
                        }
                    }
                    _ => {
                        return Err(SyntaxError::new(
                            at,
                            format!("unknown type or effect '{w}'"),
                        ));
                    }
                };
                let under = self.app()?;
                Ok(Ty::comp(eff, under))
            }
            Some(_) => Err(SyntaxError::new(at, "expected a type")),
            None => Err(SyntaxError::new(at, "unexpected end of input")),
        }
    }
}

pub fn parse_type(text: &str) -> Result<Ty, SyntaxError> {
    let toks = tokenize(text)?;
    let mut p = TyParser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let ty = p.ty()?;
    if p.pos != p.toks.len() {
        return Err(SyntaxError::new(p.offset(), "trailing input"));
    }
    Ok(ty)
}

/// Parses a bare effect such as `S` or `R[e]`.
pub fn parse_eff(text: &str) -> Result<Eff, SyntaxError> {
    // An effect applied to a placeholder parses as a computation type.
    let probe = format!("{text} e");
    match parse_type(&probe) {
        Ok(Ty::Comp(eff, under)) if *under == Ty::E => Ok(eff),
        Ok(_) => Err(SyntaxError::new(0, format!("'{text}' is not an effect"))),
        Err(mut e) => {
            e.position = e.position.min(text.len());
            Err(e)
        }
    }
}

impl FromStr for Ty {
    type Err = SyntaxError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_type(s)
    }
}

impl FromStr for Eff {
    type Err = SyntaxError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_eff(s)
    }
}

impl Serialize for Ty {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ty {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_type(&text).map_err(serde::de::Error::custom)
    }
}

/// All types of exactly `size` nodes over the given bases, with effect
/// parameters drawn from the same pool. Used by exhaustive tests.
pub fn types_of_size(size: usize, bases: &[Base]) -> Vec<Ty> {
    let mut table: Vec<Vec<Ty>> = vec![Vec::new(); size + 1];
    for n in 1..=size {
        let mut out = Vec::new();
        if n == 1 {
            out.extend(bases.iter().map(|b| Ty::Base(*b)));
        }
        // arrows: 1 + a + b = n
        for a in 1..n.saturating_sub(1) {
            let b = n - 1 - a;
            if b == 0 {
                continue;
            }
            for x in &table[a] {
                for y in &table[b] {
                    out.push(Ty::arrow(x.clone(), y.clone()));
                }
            }
        }
        // unparameterized effects: 1 + a = n
        if n >= 2 {
            for x in &table[n - 1] {
                for eff in [Eff::S, Eff::F, Eff::M] {
                    out.push(Ty::comp(eff, x.clone()));
                }
            }
        }
        // parameterized effects: 1 + p + a = n
        for p in 1..n.saturating_sub(1) {
            let a = n - 1 - p;
            if a == 0 {
                continue;
            }
            for param in &table[p] {
                for x in &table[a] {
                    for ctor in [Eff::r, Eff::w, Eff::c, Eff::t, Eff::d] {
                        out.push(Ty::comp(ctor(param.clone()), x.clone()));
                    }
                }
            }
        }
        table[n] = out;
    }
    std::mem::take(&mut table[size])
}
