//! Modes of combination and the rule-toggle configuration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, SyntaxError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Forward application.
    FA,
    /// Backward application.
    BA,
    /// Predicate modification.
    PM,
    /// Function composition.
    FC,
    /// Relation restriction.
    RR,
    /// Map over the right daughter.
    MR(Box<Mode>),
    /// Map over the left daughter.
    ML(Box<Mode>),
    /// Structured application.
    AP(Box<Mode>),
    /// Purify the right daughter.
    UR(Box<Mode>),
    /// Purify the left daughter.
    UL(Box<Mode>),
    JN(Box<Mode>),
    /// Co-unit.
    CU(Box<Mode>),
    /// Eject an effect from the right daughter.
    ER(Box<Mode>),
    /// Eject an effect from the left daughter.
    EL(Box<Mode>),
    /// Lower a continuation-typed result.
    DN(Box<Mode>),
}

/// Constructor names, leaves first.
pub const LEAF_NAMES: [&str; 5] = ["FA", "BA", "PM", "FC", "RR"];
pub const META_NAMES: [&str; 10] = ["MR", "ML", "AP", "UR", "UL", "JN", "CU", "ER", "EL", "DN"];

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::FA => "FA",
            Mode::BA => "BA",
            Mode::PM => "PM",
            Mode::FC => "FC",
            Mode::RR => "RR",
            Mode::MR(_) => "MR",
            Mode::ML(_) => "ML",
            Mode::AP(_) => "AP",
            Mode::UR(_) => "UR",
            Mode::UL(_) => "UL",
            Mode::JN(_) => "JN",
            Mode::CU(_) => "CU",
            Mode::ER(_) => "ER",
            Mode::EL(_) => "EL",
            Mode::DN(_) => "DN",
        }
    }

    pub fn inner(&self) -> Option<&Mode> {
        match self {
            Mode::FA | Mode::BA | Mode::PM | Mode::FC | Mode::RR => None,
            Mode::MR(m)
            | Mode::ML(m)
            | Mode::AP(m)
            | Mode::UR(m)
            | Mode::UL(m)
            | Mode::JN(m)
            | Mode::CU(m)
            | Mode::ER(m)
            | Mode::EL(m)
            | Mode::DN(m) => Some(m),
        }
    }

    pub fn leaf(name: &str) -> Option<Mode> {
        Some(match name {
            "FA" => Mode::FA,
            "BA" => Mode::BA,
            "PM" => Mode::PM,
            "FC" => Mode::FC,
            "RR" => Mode::RR,
            _ => return None,
        })
    }

    /// Wraps `inner` in the meta-combinator called `name`.
    pub fn wrap(name: &str, inner: Mode) -> Option<Mode> {
        let b = Box::new(inner);
        Some(match name {
            "MR" => Mode::MR(b),
            "ML" => Mode::ML(b),
            "AP" => Mode::AP(b),
            "UR" => Mode::UR(b),
            "UL" => Mode::UL(b),
            "JN" => Mode::JN(b),
            "CU" => Mode::CU(b),
            "ER" => Mode::ER(b),
            "EL" => Mode::EL(b),
            "DN" => Mode::DN(b),
            _ => return None,
        })
    }

    pub fn depth(&self) -> usize {
        1 + self.inner().map_or(0, Mode::depth)
    }

    /// Whether a constructor with this name occurs anywhere in the tree.
    pub fn contains(&self, name: &str) -> bool {
        self.name() == name || self.inner().is_some_and(|m| m.contains(name))
    }

    /// Display form using the combinator symbols of the effect-driven grammar.
    pub fn unicode(&self) -> String {
        let sym = match self {
            Mode::FA => ">",
            Mode::BA => "<",
            Mode::PM => "∧",
            Mode::FC => "∘",
            Mode::RR => "↾",
            Mode::MR(_) => "F\u{20d7}",
            Mode::ML(_) => "F\u{20d6}",
            Mode::AP(_) => "A",
            Mode::UR(_) => "U\u{20d7}",
            Mode::UL(_) => "U\u{20d6}",
            Mode::JN(_) => "J",
            Mode::CU(_) => "C",
            Mode::ER(_) => "Δ\u{20d7}",
            Mode::EL(_) => "Δ\u{20d6}",
            Mode::DN(_) => "D",
        };
        match self.inner() {
            None => sym.to_string(),
            Some(m) => format!("{sym}({})", m.unicode()),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inner() {
            None => f.write_str(self.name()),
            Some(m) => write!(f, "{}({m})", self.name()),
        }
    }
}

pub fn print_mode(mode: &Mode) -> String {
    mode.to_string()
}

pub fn parse_mode(text: &str) -> Result<Mode, SyntaxError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    fn go(text: &str, pos: &mut usize, skip: &dyn Fn(&mut usize)) -> Result<Mode, SyntaxError> {
        let bytes = text.as_bytes();
        skip(pos);
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_alphabetic() {
            *pos += 1;
        }
        if start == *pos {
            return Err(SyntaxError::new(start, "expected a mode name"));
        }
        let name = &text[start..*pos];
        skip(pos);
        if let Some(leaf) = Mode::leaf(name) {
            return Ok(leaf);
        }
        if !META_NAMES.contains(&name) {
            return Err(SyntaxError::new(start, format!("unknown mode '{name}'")));
        }
        if bytes.get(*pos) != Some(&b'(') {
            return Err(SyntaxError::new(
                *pos,
                format!("{name} requires an inner mode"),
            ));
        }
        *pos += 1;
        let inner = go(text, pos, skip)?;
        skip(pos);
        if bytes.get(*pos) != Some(&b')') {
            return Err(SyntaxError::new(*pos, "expected ')'"));
        }
        *pos += 1;
        Ok(Mode::wrap(name, inner).expect("meta name checked above"))
    }

    let mode = go(text, &mut pos, &skip)?;
    skip(&mut pos);
    if pos != bytes.len() {
        return Err(SyntaxError::new(pos, "trailing input"));
    }
    Ok(mode)
}

impl FromStr for Mode {
    type Err = SyntaxError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_mode(s)
    }
}

impl Serialize for Mode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Mode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_mode(&text).map_err(serde::de::Error::custom)
    }
}

/// All mode trees of exactly the given depth.
pub fn modes_of_depth(depth: usize) -> Vec<Mode> {
    if depth == 0 {
        return Vec::new();
    }
    if depth == 1 {
        return LEAF_NAMES.iter().filter_map(|n| Mode::leaf(n)).collect();
    }
    let below = modes_of_depth(depth - 1);
    let mut out = Vec::with_capacity(below.len() * META_NAMES.len());
    for name in META_NAMES {
        for m in &below {
            out.push(Mode::wrap(name, m.clone()).unwrap());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// configuration

fn default_max_size() -> usize {
    24
}

fn yes() -> bool {
    true
}

/// Which rules `combine` may use. Paired rules (MR/ML, UR/UL, ER/EL) share
/// one flag each.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombineConfig {
    #[serde(rename = "FA", default = "yes")]
    pub fa: bool,
    #[serde(rename = "BA", default = "yes")]
    pub ba: bool,
    #[serde(rename = "PM", default = "yes")]
    pub pm: bool,
    #[serde(rename = "FC", default)]
    pub fc: bool,
    #[serde(rename = "RR", default)]
    pub rr: bool,
    #[serde(rename = "MAP", default = "yes")]
    pub map: bool,
    #[serde(rename = "AP", default = "yes")]
    pub ap: bool,
    #[serde(rename = "UNIT", default = "yes")]
    pub unit: bool,
    #[serde(rename = "JN", default = "yes")]
    pub jn: bool,
    #[serde(rename = "CU", default = "yes")]
    pub cu: bool,
    #[serde(rename = "EJECT", default = "yes")]
    pub eject: bool,
    #[serde(rename = "DN", default = "yes")]
    pub dn: bool,
    #[serde(default = "default_max_size")]
    pub max_result_type_size: usize,
    #[serde(default = "yes")]
    pub memoize: bool,
    /// Feed join and lowering output back into the unary phase until nothing
    /// new appears. Off means one unary pass per binary result.
    #[serde(default)]
    pub chain_unary: bool,
}

impl Default for CombineConfig {
    fn default() -> Self {
        CombineConfig {
            fa: true,
            ba: true,
            pm: true,
            fc: false,
            rr: false,
            map: true,
            ap: true,
            unit: true,
            jn: true,
            cu: true,
            eject: true,
            dn: true,
            max_result_type_size: default_max_size(),
            memoize: true,
            chain_unary: false,
        }
    }
}

/// Rule flag names accepted by [`CombineConfig::set_rule`].
pub const RULE_FLAGS: [&str; 12] = [
    "FA", "BA", "PM", "FC", "RR", "MAP", "AP", "UNIT", "JN", "CU", "EJECT", "DN",
];

pub const PRESETS: [&str; 5] = ["ch2", "ch3", "ch4", "full", "default"];

impl CombineConfig {
    /// Basic modes FA, BA, PM only.
    pub fn basic() -> Self {
        CombineConfig {
            map: false,
            ap: false,
            unit: false,
            jn: false,
            cu: false,
            eject: false,
            dn: false,
            ..Default::default()
        }
    }

    pub fn ch2() -> Self {
        CombineConfig {
            map: true,
            ..Self::basic()
        }
    }

    pub fn ch3() -> Self {
        CombineConfig {
            ap: true,
            unit: true,
            ..Self::ch2()
        }
    }

    pub fn ch4() -> Self {
        CombineConfig {
            jn: true,
            ..Self::ch3()
        }
    }

    pub fn full() -> Self {
        CombineConfig {
            cu: true,
            eject: true,
            dn: true,
            ..Self::ch4()
        }
    }

    pub fn preset(name: &str) -> Result<Self, Error> {
        match name {
            "basic" => Ok(Self::basic()),
            "ch2" => Ok(Self::ch2()),
            "ch3" => Ok(Self::ch3()),
            "ch4" => Ok(Self::ch4()),
            "full" => Ok(Self::full()),
            "default" => Ok(Self::default()),
            other => Err(Error::Config(format!("unknown preset '{other}'"))),
        }
    }

    fn flag_mut(&mut self, rule: &str) -> Option<&mut bool> {
        Some(match rule {
            "FA" => &mut self.fa,
            "BA" => &mut self.ba,
            "PM" => &mut self.pm,
            "FC" => &mut self.fc,
            "RR" => &mut self.rr,
            "MAP" | "MR" | "ML" => &mut self.map,
            "AP" => &mut self.ap,
            "UNIT" | "UR" | "UL" => &mut self.unit,
            "JN" => &mut self.jn,
            "CU" => &mut self.cu,
            "EJECT" | "ER" | "EL" => &mut self.eject,
            "DN" => &mut self.dn,
            _ => return None,
        })
    }

    /// Toggles a rule by flag name. Mode names of paired rules (e.g. `ML`)
    /// address their shared flag.
    pub fn set_rule(&mut self, rule: &str, on: bool) -> Result<(), Error> {
        let upper = rule.to_ascii_uppercase();
        match self.flag_mut(&upper) {
            Some(f) => {
                *f = on;
                Ok(())
            }
            None => Err(Error::UnknownRule(rule.to_string())),
        }
    }

    pub fn rule(&self, rule: &str) -> Option<bool> {
        self.clone()
            .flag_mut(&rule.to_ascii_uppercase())
            .map(|f| *f)
    }

    /// True when every rule enabled here is also enabled in `other`.
    pub fn is_subset_of(&self, other: &CombineConfig) -> bool {
        RULE_FLAGS
            .iter()
            .all(|r| !self.rule(r).unwrap() || other.rule(r).unwrap())
    }

    /// Whether every constructor in `mode` is permitted.
    pub fn permits(&self, mode: &Mode) -> bool {
        let here = match mode {
            Mode::FA => self.fa,
            Mode::BA => self.ba,
            Mode::PM => self.pm,
            Mode::FC => self.fc,
            Mode::RR => self.rr,
            Mode::MR(_) | Mode::ML(_) => self.map,
            Mode::AP(_) => self.ap,
            Mode::UR(_) | Mode::UL(_) => self.unit,
            Mode::JN(_) => self.jn,
            Mode::CU(_) => self.cu,
            Mode::ER(_) | Mode::EL(_) => self.eject,
            Mode::DN(_) => self.dn,
        };
        here && mode.inner().is_none_or(|m| self.permits(m))
    }
}
