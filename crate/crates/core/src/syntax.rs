//! Constituency trees: `[A B]` is a branch, `{A B}` an island, and a bare
//! token a leaf.

use std::fmt;
use std::str::FromStr;

use crate::error::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Syn {
    Leaf(String),
    Branch(Box<Syn>, Box<Syn>),
    Island(Box<Syn>, Box<Syn>),
}

pub const DEFAULT_MAX_TOKENS: usize = 8;

impl Syn {
    pub fn leaf(word: impl Into<String>) -> Syn {
        Syn::Leaf(word.into())
    }

    pub fn branch(l: Syn, r: Syn) -> Syn {
        Syn::Branch(Box::new(l), Box::new(r))
    }

    pub fn island(l: Syn, r: Syn) -> Syn {
        Syn::Island(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn go<'a>(s: &'a Syn, out: &mut Vec<&'a str>) {
            match s {
                Syn::Leaf(w) => out.push(w),
                Syn::Branch(l, r) | Syn::Island(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        go(self, &mut out);
        out
    }

    /// The same tree with every island turned into a plain branch.
    pub fn without_islands(&self) -> Syn {
        match self {
            Syn::Leaf(w) => Syn::Leaf(w.clone()),
            Syn::Branch(l, r) | Syn::Island(l, r) => {
                Syn::branch(l.without_islands(), r.without_islands())
            }
        }
    }
}

impl fmt::Display for Syn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Syn::Leaf(w) => f.write_str(w),
            Syn::Branch(l, r) => write!(f, "[{l} {r}]"),
            Syn::Island(l, r) => write!(f, "{{{l} {r}}}"),
        }
    }
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, '[' | ']' | '{' | '}')
}

struct TreeParser<'a> {
    text: &'a str,
    pos: usize,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn tree(&mut self) -> Result<Syn, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(SyntaxError::new(start, "unexpected end of input")),
            Some(open @ ('[' | '{')) => {
                self.pos += 1;
                let close = if open == '[' { ']' } else { '}' };
                self.skip_ws();
                if self.peek() == Some(close) {
                    return Err(SyntaxError::new(start, "empty group"));
                }
                let l = self.tree()?;
                self.skip_ws();
                if self.peek() == Some(close) {
                    return Err(SyntaxError::new(
                        self.pos,
                        "group must have exactly two daughters",
                    ));
                }
                let r = self.tree()?;
                self.skip_ws();
                match self.peek() {
                    Some(c) if c == close => {
                        self.pos += 1;
                        Ok(if open == '[' {
                            Syn::branch(l, r)
                        } else {
                            Syn::island(l, r)
                        })
                    }
                    None => Err(SyntaxError::new(
                        self.pos,
                        format!("unbalanced brackets: expected '{close}'"),
                    )),
                    Some(']' | '}') => Err(SyntaxError::new(
                        self.pos,
                        format!("mismatched bracket: expected '{close}'"),
                    )),
                    Some(_) => Err(SyntaxError::new(
                        self.pos,
                        "group must have exactly two daughters",
                    )),
                }
            }
            Some(c @ (']' | '}')) => Err(SyntaxError::new(start, format!("unexpected '{c}'"))),
            Some(_) => {
                while let Some(c) = self.peek() {
                    if is_delim(c) {
                        break;
                    }
                    self.pos += c.len_utf8();
                }
                Ok(Syn::Leaf(self.text[start..self.pos].to_string()))
            }
        }
    }
}

pub fn parse_tree(text: &str) -> Result<Syn, SyntaxError> {
    let mut p = TreeParser { text, pos: 0 };
    let tree = p.tree()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(SyntaxError::new(p.pos, "trailing input after tree"));
    }
    Ok(tree)
}

pub fn print_tree(syn: &Syn) -> String {
    syn.to_string()
}

impl FromStr for Syn {
    type Err = SyntaxError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

/// Every binary bracketing of the tokens, in order. Left-branching splits
/// come last: the split point moves left to right.
pub fn enumerate_trees(tokens: &[String], max_len: usize) -> Result<Vec<Syn>, SyntaxError> {
    if tokens.is_empty() {
        return Err(SyntaxError::new(0, "no tokens"));
    }
    if tokens.len() > max_len {
        return Err(SyntaxError::new(
            0,
            format!("{} tokens exceeds the limit of {max_len}", tokens.len()),
        ));
    }
    if let Some(bad) = tokens
        .iter()
        .find(|t| t.is_empty() || t.chars().any(is_delim))
    {
        return Err(SyntaxError::new(0, format!("invalid token '{bad}'")));
    }
    fn go(tokens: &[String]) -> Vec<Syn> {
        if tokens.len() == 1 {
            return vec![Syn::Leaf(tokens[0].clone())];
        }
        let mut out = Vec::new();
        for split in 1..tokens.len() {
            let lefts = go(&tokens[..split]);
            let rights = go(&tokens[split..]);
            for l in &lefts {
                for r in &rights {
                    out.push(Syn::branch(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    Ok(go(tokens))
}

/// Splits a sentence on whitespace.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}
