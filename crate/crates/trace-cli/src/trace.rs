//! Line-oriented trace format.

use std::collections::HashMap;
use std::fmt;

/// Dense node id assigned in declaration order.
pub type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Nca(Option<Id>),
    Ca(Option<(Id, Id, Id)>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceOp {
    MakeNode(Id),
    /// Parent, new child.
    AddLeaf(Id, Id),
    /// New node placed above the current root of the single tree.
    AddRoot(Id),
    Link(Id, Id),
    Nca(Id, Id, Option<Option<Id>>),
    Ca(Id, Id, Option<Option<(Id, Id, Id)>>),
}

impl TraceOp {
    pub fn is_query(&self) -> bool {
        matches!(self, TraceOp::Nca(..) | TraceOp::Ca(..))
    }

    pub fn expected(&self) -> Option<Expect> {
        match *self {
            TraceOp::Nca(_, _, Some(e)) => Some(Expect::Nca(e)),
            TraceOp::Ca(_, _, Some(e)) => Some(Expect::Ca(e)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub ops: Vec<TraceOp>,
    /// External id of each dense id.
    pub external: Vec<u64>,
}

impl Trace {
    pub fn nodes(&self) -> usize {
        self.external.len()
    }

    pub fn queries(&self) -> usize {
        self.ops.iter().filter(|o| o.is_query()).count()
    }

    pub fn links(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, TraceOp::Link(..))).count()
    }

    /// Ops `0..len`, keeping only the ids they declare.
    pub fn prefix(&self, len: usize) -> Trace {
        let ops = self.ops[..len].to_vec();
        let declared = ops
            .iter()
            .filter_map(|o| match *o {
                TraceOp::MakeNode(v) | TraceOp::AddLeaf(_, v) | TraceOp::AddRoot(v) => Some(v),
                _ => None,
            })
            .max()
            .map_or(0, |v| v as usize + 1);
        Trace { ops, external: self.external[..declared].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    ids: HashMap<u64, Id>,
    external: Vec<u64>,
    line: usize,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column, message: message.into() }
    }

    fn column_of(&self, tok: &str) -> usize {
        tok.as_ptr() as usize - self.text.as_ptr() as usize + 1
    }

    fn number(&self, tok: &str) -> Result<u64, ParseError> {
        tok.parse().map_err(|_| self.err(self.column_of(tok), format!("expected a node id, found `{tok}`")))
    }

    fn known(&self, tok: &str) -> Result<Id, ParseError> {
        let v = self.number(tok)?;
        self.ids.get(&v).copied().ok_or_else(|| self.err(self.column_of(tok), format!("node {v} is not declared")))
    }

    fn known_or_none(&self, tok: &str) -> Result<Option<Id>, ParseError> {
        if tok == "none" {
            Ok(None)
        } else {
            self.known(tok).map(Some)
        }
    }

    fn declare(&mut self, tok: &str) -> Result<Id, ParseError> {
        let v = self.number(tok)?;
        if self.ids.contains_key(&v) {
            return Err(self.err(self.column_of(tok), format!("node {v} is declared twice")));
        }
        let id = self.external.len() as Id;
        self.ids.insert(v, id);
        self.external.push(v);
        Ok(id)
    }

    fn op(&mut self, toks: &[&'a str]) -> Result<TraceOp, ParseError> {
        let arity = |n: usize| {
            if toks.len() == n + 1 {
                Ok(())
            } else {
                Err(self.err(self.column_of(toks[0]), format!("`{}` takes {n} operands", toks[0])))
            }
        };
        let answer = |at: usize, n: usize| -> Result<bool, ParseError> {
            match toks.len() {
                l if l == at => Ok(false),
                l if l > at && toks[at] == "=" && (l == at + 1 + n || (l == at + 2 && toks[at + 1] == "none")) => {
                    Ok(true)
                }
                _ => Err(self.err(self.column_of(toks[at.min(toks.len() - 1)]), "malformed expected answer")),
            }
        };
        Ok(match toks[0] {
            "make_node" => {
                arity(1)?;
                TraceOp::MakeNode(self.declare(toks[1])?)
            }
            "add_leaf" => {
                arity(2)?;
                let p = self.known(toks[1])?;
                TraceOp::AddLeaf(p, self.declare(toks[2])?)
            }
            "add_root" => {
                arity(1)?;
                TraceOp::AddRoot(self.declare(toks[1])?)
            }
            "link" => {
                arity(2)?;
                TraceOp::Link(self.known(toks[1])?, self.known(toks[2])?)
            }
            "nca" | "ca" if toks.len() < 3 => {
                return Err(self.err(self.column_of(toks[0]), format!("`{}` takes 2 operands", toks[0])))
            }
            "nca" => {
                let (x, y) = (self.known(toks[1])?, self.known(toks[2])?);
                let e = if answer(3, 1)? { Some(self.known_or_none(toks[4])?) } else { None };
                TraceOp::Nca(x, y, e)
            }
            "ca" => {
                let (x, y) = (self.known(toks[1])?, self.known(toks[2])?);
                let e = if !answer(3, 3)? {
                    None
                } else if toks[4] == "none" {
                    Some(None)
                } else {
                    Some(Some((self.known(toks[4])?, self.known(toks[5])?, self.known(toks[6])?)))
                };
                TraceOp::Ca(x, y, e)
            }
            other => return Err(self.err(self.column_of(toks[0]), format!("unknown operation `{other}`"))),
        })
    }
}

pub fn parse_trace(text: &str) -> Result<Trace, ParseError> {
    let mut p = Parser { ids: HashMap::new(), external: Vec::new(), line: 0, text: "" };
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        p.line = i + 1;
        p.text = raw;
        let body = raw.split('#').next().unwrap();
        let toks: Vec<&str> = body.split_whitespace().collect();
        if !toks.is_empty() {
            ops.push(p.op(&toks)?);
        }
    }
    Ok(Trace { ops, external: p.external })
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = |v: Id| self.external[v as usize];
        let opt = |v: Option<Id>| v.map_or("none".to_string(), |v| e(v).to_string());
        for op in &self.ops {
            match *op {
                TraceOp::MakeNode(v) => writeln!(f, "make_node {}", e(v))?,
                TraceOp::AddLeaf(p, c) => writeln!(f, "add_leaf {} {}", e(p), e(c))?,
                TraceOp::AddRoot(r) => writeln!(f, "add_root {}", e(r))?,
                TraceOp::Link(x, y) => writeln!(f, "link {} {}", e(x), e(y))?,
                TraceOp::Nca(x, y, None) => writeln!(f, "nca {} {}", e(x), e(y))?,
                TraceOp::Nca(x, y, Some(a)) => writeln!(f, "nca {} {} = {}", e(x), e(y), opt(a))?,
                TraceOp::Ca(x, y, None) => writeln!(f, "ca {} {}", e(x), e(y))?,
                TraceOp::Ca(x, y, Some(None)) => writeln!(f, "ca {} {} = none", e(x), e(y))?,
                TraceOp::Ca(x, y, Some(Some((a, ax, ay)))) => {
                    writeln!(f, "ca {} {} = {} {} {}", e(x), e(y), e(a), e(ax), e(ay))?
                }
            }
        }
        Ok(())
    }
}
