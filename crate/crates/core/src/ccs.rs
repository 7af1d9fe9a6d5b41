//! Finite CCS (no replication, no restriction) and its bigraph encoding
//! over `{get:1, send:1, sum:0}`.
//!
//! Grammar, loosest first: `P | Q`, then `P + Q`, then prefixes `a.P`
//! (input, compiled to `get`) and `'a.P` (output, compiled to `send`). A bare
//! channel `a` abbreviates `a.0`. Parentheses group.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::bigraph::{Bigraph, Interface, Link, Parent, Signature};
use crate::mset::Sym;
use crate::reaction::ParametricReactionRule;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CcsTerm {
    Nil,
    Send(Sym, Box<CcsTerm>),
    Get(Sym, Box<CcsTerm>),
    Sum(Vec<CcsTerm>),
    Par(Vec<CcsTerm>),
}

impl CcsTerm {
    pub fn get(ch: &str, k: CcsTerm) -> CcsTerm {
        CcsTerm::Get(Sym::new(ch), Box::new(k))
    }

    pub fn send(ch: &str, k: CcsTerm) -> CcsTerm {
        CcsTerm::Send(Sym::new(ch), Box::new(k))
    }

    pub fn is_prefix(&self) -> bool {
        matches!(self, CcsTerm::Send(..) | CcsTerm::Get(..))
    }

    pub fn free_names(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<Sym>) {
        match self {
            CcsTerm::Nil => {}
            CcsTerm::Send(a, k) | CcsTerm::Get(a, k) => {
                out.insert(a.clone());
                k.collect_names(out);
            }
            CcsTerm::Sum(ts) | CcsTerm::Par(ts) => ts.iter().for_each(|t| t.collect_names(out)),
        }
    }

    pub fn prefix_count(&self) -> usize {
        match self {
            CcsTerm::Nil => 0,
            CcsTerm::Send(_, k) | CcsTerm::Get(_, k) => 1 + k.prefix_count(),
            CcsTerm::Sum(ts) | CcsTerm::Par(ts) => ts.iter().map(|t| t.prefix_count()).sum(),
        }
    }
}

fn fmt_unit(t: &CcsTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        CcsTerm::Sum(ts) if ts.len() > 1 => write!(f, "({t})"),
        CcsTerm::Par(ts) if ts.len() > 1 => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

impl fmt::Display for CcsTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CcsTerm::Nil => f.write_str("0"),
            CcsTerm::Get(a, k) => {
                write!(f, "{a}.")?;
                fmt_unit(k, f)
            }
            CcsTerm::Send(a, k) => {
                write!(f, "'{a}.")?;
                fmt_unit(k, f)
            }
            CcsTerm::Sum(ts) | CcsTerm::Par(ts) => {
                if ts.is_empty() {
                    return f.write_str("0");
                }
                let sep = if matches!(self, CcsTerm::Sum(_)) { " + " } else { " | " };
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    match (self, t) {
                        (CcsTerm::Par(_), CcsTerm::Sum(_)) => write!(f, "{t}")?,
                        _ => fmt_unit(t, f)?,
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("ccs parse error at column {col}: {msg}")]
pub struct CcsError {
    pub col: usize,
    pub msg: String,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, CcsError> {
        Err(CcsError {
            col: self.pos + 1,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<Sym, CcsError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a channel name");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if s == "0" {
            self.pos = start;
            return self.err("`0` is not a channel name");
        }
        Ok(Sym::new(s))
    }

    fn par(&mut self) -> Result<CcsTerm, CcsError> {
        let mut items = vec![self.sum()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            items.push(self.sum()?);
        }
        if items.len() == 1 {
            return Ok(items.pop().expect("one item"));
        }
        let mut flat = Vec::new();
        for t in items {
            match t {
                CcsTerm::Par(ts) => flat.extend(ts),
                t => flat.push(t),
            }
        }
        Ok(CcsTerm::Par(flat))
    }

    fn sum(&mut self) -> Result<CcsTerm, CcsError> {
        let start = self.pos;
        let first = self.unit()?;
        if self.peek() != Some(b'+') {
            return Ok(first);
        }
        let mut alts = Vec::new();
        let mut push = |p: &Parser<'_>, t: CcsTerm, at: usize| -> Result<(), CcsError> {
            match t {
                CcsTerm::Sum(ts) => alts.extend(ts),
                t if t.is_prefix() => alts.push(t),
                _ => {
                    return Err(CcsError {
                        col: at + 1,
                        msg: "a sum alternative must start with a prefix".into(),
                    })
                }
            }
            let _ = p;
            Ok(())
        };
        push(self, first, start)?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let t = self.unit()?;
            push(self, t, at)?;
        }
        Ok(CcsTerm::Sum(alts))
    }

    fn unit(&mut self) -> Result<CcsTerm, CcsError> {
        match self.peek() {
            Some(b'0') => {
                let save = self.pos;
                self.pos += 1;
                if self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos = save;
                    return self.prefix(false);
                }
                Ok(CcsTerm::Nil)
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.par()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(t)
            }
            Some(b'\'') => {
                self.pos += 1;
                self.prefix(true)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => self.prefix(false),
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn prefix(&mut self, send: bool) -> Result<CcsTerm, CcsError> {
        let ch = self.ident()?;
        let k = if self.peek() == Some(b'.') {
            self.pos += 1;
            self.unit()?
        } else {
            CcsTerm::Nil
        };
        Ok(if send {
            CcsTerm::Send(ch, Box::new(k))
        } else {
            CcsTerm::Get(ch, Box::new(k))
        })
    }
}

pub fn parse_ccs(text: &str) -> Result<CcsTerm, CcsError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let t = p.par()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(t)
}

/// `{get:1, send:1, sum:0}`.
pub fn ccs_signature() -> Arc<Signature> {
    Arc::new(Signature::from_pairs(&[("get", 1), ("send", 1), ("sum", 0)]))
}

struct Compiler {
    b: Bigraph,
    next: usize,
}

impl Compiler {
    fn fresh(&mut self) -> String {
        let n = format!("n{}", self.next);
        self.next += 1;
        n
    }

    /// One sum node per parallel component that is not `0`.
    fn components(&mut self, t: &CcsTerm, parent: &Parent) {
        match t {
            CcsTerm::Nil => {}
            CcsTerm::Par(ts) => ts.iter().for_each(|u| self.components(u, parent)),
            CcsTerm::Sum(alts) => {
                let s = self.fresh();
                self.b.add_node(&s, "sum", parent.clone());
                let sp = Parent::node(&s);
                for a in alts {
                    self.prefix(a, &sp);
                }
            }
            prefix => {
                let s = self.fresh();
                self.b.add_node(&s, "sum", parent.clone());
                self.prefix(prefix, &Parent::node(&s));
            }
        }
    }

    fn prefix(&mut self, t: &CcsTerm, parent: &Parent) {
        let (ctrl, ch, k) = match t {
            CcsTerm::Get(a, k) => ("get", a, k),
            CcsTerm::Send(a, k) => ("send", a, k),
            // sum alternatives are prefixes by construction
            other => return self.components(other, parent),
        };
        let v = self.fresh();
        self.b.add_node(&v, ctrl, parent.clone());
        self.b.link_port(&v, 1, Link::Outer(ch.clone()));
        self.components(k, &Parent::node(&v));
    }
}

/// Ground bigraph with one root. Parallel components and continuations sit
/// under `sum` nodes; each prefix is a `get`/`send` node whose port links to
/// the outer name of its channel. A lone `0` becomes one empty `sum`.
pub fn ccs_to_bigraph(t: &CcsTerm) -> Bigraph {
    ccs_to_bigraph_over(t, &t.free_names())
}

/// `ccs_to_bigraph` with outer names `names ∪ fn(t)`. Reactions keep the
/// outer face, so reducts are compared over the names of the original term.
pub fn ccs_to_bigraph_over(t: &CcsTerm, names: &BTreeSet<Sym>) -> Bigraph {
    let names: BTreeSet<Sym> = names.union(&t.free_names()).cloned().collect();
    let mut c = Compiler {
        b: Bigraph::new(ccs_signature(), Interface::unit(), Interface::with_names(1, names)),
        next: 0,
    };
    if *t == CcsTerm::Nil {
        c.b.add_node("n0", "sum", Parent::Root(0));
    } else {
        c.components(t, &Parent::Root(0));
    }
    c.b
}

/// Compiles a parallel composition of components; `0` components vanish
/// and the empty list gives an empty root.
pub fn ccs_components_to_bigraph(ts: &[CcsTerm], names: &BTreeSet<Sym>) -> Bigraph {
    let mut all = names.clone();
    ts.iter().for_each(|t| all.extend(t.free_names()));
    let mut c = Compiler {
        b: Bigraph::new(ccs_signature(), Interface::unit(), Interface::with_names(1, all)),
        next: 0,
    };
    for t in ts {
        c.components(t, &Parent::Root(0));
    }
    c.b
}

/// `(α.P + P′) | (ᾱ.Q + Q′) → Q | P`: redex sites 0..3 hold `Q`, `Q′`, `P`,
/// `P′`; the reactum keeps sites 0 and 2.
pub fn tau_rule() -> ParametricReactionRule {
    let sig = ccs_signature();
    let mut l = Bigraph::new(sig.clone(), Interface::new(4, &[]), Interface::new(1, &["alpha"]));
    l.add_node("s1", "sum", Parent::Root(0))
        .add_node("x1", "send", Parent::node("s1"))
        .add_site(0, Parent::node("x1"))
        .add_site(1, Parent::node("s1"))
        .add_node("s2", "sum", Parent::Root(0))
        .add_node("x2", "get", Parent::node("s2"))
        .add_site(2, Parent::node("x2"))
        .add_site(3, Parent::node("s2"))
        .link_port("x1", 1, Link::outer("alpha"))
        .link_port("x2", 1, Link::outer("alpha"));
    let mut r = Bigraph::new(sig, Interface::new(2, &[]), Interface::new(1, &["alpha"]));
    r.add_site(0, Parent::Root(0)).add_site(1, Parent::Root(0));
    ParametricReactionRule::new("tau", l, r, vec![0, 2]).expect("tau rule is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vending_machine() {
        let t = parse_ccs("'c.co | c.'co + c.'t").unwrap();
        let expect = CcsTerm::Par(vec![
            CcsTerm::send("c", CcsTerm::get("co", CcsTerm::Nil)),
            CcsTerm::Sum(vec![
                CcsTerm::get("c", CcsTerm::send("co", CcsTerm::Nil)),
                CcsTerm::get("c", CcsTerm::send("t", CcsTerm::Nil)),
            ]),
        ]);
        assert_eq!(t, expect);
        assert_eq!(parse_ccs(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn grammar_precedence() {
        let t = parse_ccs("(a.0 + 'b.0) | c.0").unwrap();
        assert_eq!(
            t,
            CcsTerm::Par(vec![
                CcsTerm::Sum(vec![CcsTerm::get("a", CcsTerm::Nil), CcsTerm::send("b", CcsTerm::Nil)]),
                CcsTerm::get("c", CcsTerm::Nil),
            ])
        );
        assert_eq!(parse_ccs("0").unwrap(), CcsTerm::Nil);
        assert!(parse_ccs("a + 0").is_err());
        assert!(parse_ccs("a.(b | c) + d").is_ok());
        assert!(parse_ccs("(a | b) + c").is_err());
        let e = parse_ccs("a | ").unwrap_err();
        assert_eq!(e.col, 5);
    }

    #[test]
    fn vending_machine_shape() {
        let b = ccs_to_bigraph(&parse_ccs("'c.co | c.'co + c.'t").unwrap());
        b.well_formed().unwrap();
        assert_eq!(b.nodes().len(), 11);
        assert_eq!(b.port_count(), 6);
        assert_eq!(b.outer(), &Interface::new(1, &["c", "co", "t"]));
        assert!(b.is_ground());
    }

    #[test]
    fn nil_is_one_empty_sum() {
        let b = ccs_to_bigraph(&CcsTerm::Nil);
        assert_eq!(b.nodes().len(), 1);
        assert_eq!(b.control("n0").map(|c| c.as_str()), Some("sum"));
    }
}
