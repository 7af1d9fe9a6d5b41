//! The `.brs` specification format and the bigraph literal syntax.
//!
//! ```text
//! brs 1
//! signature { get: 1, send: 1, sum: 0 }
//! agent ccs "'c.co | c.'co + c.'t"
//! rule tau {
//!   redex bigraph {
//!     outer { alpha }
//!     root { s1 sum { x1 send { site 0 } site 1 } s2 sum { x2 get { site 2 } site 3 } }
//!     links { port(x1, 1) -> alpha  port(x2, 1) -> alpha }
//!   }
//!   reactum bigraph { outer { alpha } root { site 0 site 1 } }
//!   eta [0, 2]
//! }
//! options { seed: 7, steps: 10, max_states: 1000 }
//! ```
//!
//! An agent is `ccs "<term>"`, `bigraph { ... }` or `atoms { ... }` with
//! one atom per line in the multiset text form. `#` starts a comment when
//! it begins a token. Inside a bigraph literal, `outer`, `inner` and
//! `edges` list names, each `root { ... }` block is one root holding
//! `name control { ... }` nodes and `site i` entries, and `links` maps
//! `port(node, i)` or an inner name to an edge or an outer name.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::bigraph::{Bigraph, Child, Interface, Link, Parent, Point, Signature};
use crate::ccs::{ccs_signature, ccs_to_bigraph, parse_ccs};
use crate::mset::{text, KernelError, Multiset, Sym};
use crate::reaction::ParametricReactionRule;
use crate::relational::{encode, interpret, RelationalError, DEFAULT_GRAPH};

pub const BRS_HEADER: &str = "brs 1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct BrsError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BrsOptions {
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub max_states: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct BrsSpec {
    pub signature: Arc<Signature>,
    /// `None` when the agent was given as atoms that fail validation.
    pub agent: Option<Bigraph>,
    /// The agent's encoding; for `atoms` agents, the atoms as written.
    pub atoms: Multiset,
    pub rules: Vec<ParametricReactionRule>,
    pub options: BrsOptions,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    Open(char),
    Close(char),
    Comma,
    Colon,
    Arrow,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
    /// Byte offset just past the token.
    end: usize,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '#' | '\'' | '.' | '~' | '%')
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
    peeked: Option<Spanned>,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
            peeked: None,
        }
    }

    fn err<T>(&self, line: usize, col: usize, msg: impl Into<String>) -> Result<T, BrsError> {
        Err(BrsError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.src[self.pos..].chars().next()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn cur(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.cur() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.cur() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn lex(&mut self) -> Result<Option<Spanned>, BrsError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.cur() else { return Ok(None) };
        let tok = match c {
            '{' | '(' | '[' => {
                self.bump();
                Tok::Open(c)
            }
            '}' | ')' | ']' => {
                self.bump();
                Tok::Close(c)
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            ':' => {
                self.bump();
                Tok::Colon
            }
            '-' => {
                self.bump();
                if self.cur() != Some('>') {
                    return self.err(line, col, "expected `->`");
                }
                self.bump();
                Tok::Arrow
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some('\\') => match self.bump() {
                            Some(c) => s.push(c),
                            None => return self.err(line, col, "unterminated string"),
                        },
                        Some(c) => s.push(c),
                        None => return self.err(line, col, "unterminated string"),
                    }
                }
                Tok::Str(s)
            }
            c if ident_char(c) => {
                let start = self.pos;
                while self.cur().is_some_and(ident_char) {
                    self.bump();
                }
                let s = &self.src[start..self.pos];
                match s.parse::<u64>() {
                    Ok(n) => Tok::Num(n),
                    Err(_) => Tok::Ident(s.to_string()),
                }
            }
            other => return self.err(line, col, format!("unexpected character `{other}`")),
        };
        Ok(Some(Spanned {
            tok,
            line,
            col,
            end: self.pos,
        }))
    }

    fn peek(&mut self) -> Result<Option<&Spanned>, BrsError> {
        if self.peeked.is_none() {
            self.peeked = self.lex()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn next(&mut self) -> Result<Spanned, BrsError> {
        self.peek()?;
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.err(self.line, self.col, "unexpected end of input"),
        }
    }

    fn here(&mut self) -> Result<(usize, usize), BrsError> {
        Ok(match self.peek()? {
            Some(t) => (t.line, t.col),
            None => (self.line, self.col),
        })
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Spanned, BrsError> {
        let t = self.next()?;
        if t.tok != want {
            return self.err(t.line, t.col, format!("expected {what}"));
        }
        Ok(t)
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), BrsError> {
        let t = self.next()?;
        match t.tok {
            Tok::Ident(s) => Ok((s, t.line, t.col)),
            Tok::Num(n) => Ok((n.to_string(), t.line, t.col)),
            _ => self.err(t.line, t.col, format!("expected {what}")),
        }
    }

    fn number(&mut self, what: &str) -> Result<u64, BrsError> {
        let t = self.next()?;
        match t.tok {
            Tok::Num(n) => Ok(n),
            _ => self.err(t.line, t.col, format!("expected {what}")),
        }
    }

    fn is_next(&mut self, want: &Tok) -> Result<bool, BrsError> {
        Ok(self.peek()?.is_some_and(|t| t.tok == *want))
    }

    fn is_keyword(&mut self, kw: &str) -> Result<bool, BrsError> {
        Ok(matches!(self.peek()?, Some(Spanned { tok: Tok::Ident(s), .. }) if s == kw))
    }

    /// Raw text up to the brace closing the one just consumed.
    fn raw_block(&mut self, open: &Spanned) -> Result<(String, usize), BrsError> {
        debug_assert!(self.peeked.is_none());
        let start = open.end;
        let first_line = open.line;
        let mut depth = 1;
        while let Some(c) = self.bump() {
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok((self.src[start..self.pos - 1].to_string(), first_line));
                    }
                }
                _ => {}
            }
        }
        self.err(open.line, open.col, "unclosed `{`")
    }
}

enum RawLink {
    Port(String, u32),
    Inner(String),
}

struct Literal {
    outer: Vec<String>,
    inner: Vec<String>,
    edges: Vec<String>,
    roots: usize,
    nodes: Vec<(String, String, Parent, usize, usize)>,
    sites: Vec<(usize, Parent, usize, usize)>,
    links: Vec<(RawLink, String, usize, usize)>,
}

fn name_list(lx: &mut Lexer<'_>, out: &mut Vec<String>) -> Result<(), BrsError> {
    lx.expect(Tok::Open('{'), "`{`")?;
    while !lx.is_next(&Tok::Close('}'))? {
        if lx.is_next(&Tok::Comma)? {
            lx.next()?;
            continue;
        }
        out.push(lx.ident("a name")?.0);
    }
    lx.next()?;
    Ok(())
}

fn place_body(lx: &mut Lexer<'_>, lit: &mut Literal, parent: Parent) -> Result<(), BrsError> {
    lx.expect(Tok::Open('{'), "`{`")?;
    loop {
        if lx.is_next(&Tok::Close('}'))? {
            lx.next()?;
            return Ok(());
        }
        if lx.is_next(&Tok::Comma)? {
            lx.next()?;
            continue;
        }
        let (name, line, col) = lx.ident("a node name or `site`")?;
        if name == "site" {
            let i = lx.number("a site index")? as usize;
            lit.sites.push((i, parent.clone(), line, col));
            continue;
        }
        let (ctrl, _, _) = lx.ident("a control")?;
        lit.nodes
            .push((name.clone(), ctrl, parent.clone(), line, col));
        if lx.is_next(&Tok::Open('{'))? {
            place_body(lx, lit, Parent::Node(Sym::new(&name)))?;
        }
    }
}

fn literal(lx: &mut Lexer<'_>, sig: &Arc<Signature>) -> Result<Bigraph, BrsError> {
    let (l0, c0) = lx.here()?;
    lx.expect(Tok::Open('{'), "`{` opening a bigraph")?;
    let mut lit = Literal {
        outer: Vec::new(),
        inner: Vec::new(),
        edges: Vec::new(),
        roots: 0,
        nodes: Vec::new(),
        sites: Vec::new(),
        links: Vec::new(),
    };
    loop {
        if lx.is_next(&Tok::Close('}'))? {
            lx.next()?;
            break;
        }
        let (kw, line, col) = lx.ident("a bigraph section")?;
        match kw.as_str() {
            "outer" => name_list(lx, &mut lit.outer)?,
            "inner" => name_list(lx, &mut lit.inner)?,
            "edges" => name_list(lx, &mut lit.edges)?,
            "root" => {
                let r = lit.roots;
                lit.roots += 1;
                place_body(lx, &mut lit, Parent::Root(r))?;
            }
            "links" => {
                lx.expect(Tok::Open('{'), "`{`")?;
                loop {
                    if lx.is_next(&Tok::Close('}'))? {
                        lx.next()?;
                        break;
                    }
                    if lx.is_next(&Tok::Comma)? {
                        lx.next()?;
                        continue;
                    }
                    let (src, line, col) = lx.ident("a port or inner name")?;
                    let point = if src == "port" && lx.is_next(&Tok::Open('('))? {
                        lx.next()?;
                        let (v, _, _) = lx.ident("a node name")?;
                        lx.expect(Tok::Comma, "`,`")?;
                        let i = lx.number("a port index")? as u32;
                        lx.expect(Tok::Close(')'), "`)`")?;
                        RawLink::Port(v, i)
                    } else {
                        RawLink::Inner(src)
                    };
                    lx.expect(Tok::Arrow, "`->`")?;
                    let (to, _, _) = lx.ident("an edge or outer name")?;
                    lit.links.push((point, to, line, col));
                }
            }
            other => return lx.err(line, col, format!("unknown bigraph section `{other}`")),
        }
    }

    let err = |line, col, msg: String| BrsError { line, col, msg };
    let mut sites: Vec<usize> = lit.sites.iter().map(|s| s.0).collect();
    sites.sort_unstable();
    for (k, s) in sites.iter().enumerate() {
        if *s != k {
            return Err(err(l0, c0, format!("sites must be numbered 0..{} without gaps", sites.len())));
        }
    }
    let inner = Interface::with_names(sites.len(), lit.inner.iter().map(|s| Sym::new(s)).collect());
    let outer = Interface::with_names(lit.roots, lit.outer.iter().map(|s| Sym::new(s)).collect());
    let mut b = Bigraph::new(sig.clone(), inner, outer);
    for e in &lit.edges {
        if lit.outer.contains(e) {
            return Err(err(l0, c0, format!("`{e}` is both an edge and an outer name")));
        }
        b.add_edge(e);
    }
    let mut seen = BTreeSet::new();
    for (v, ctrl, parent, line, col) in &lit.nodes {
        if sig.arity(ctrl).is_none() {
            return Err(err(*line, *col, format!("control `{ctrl}` is not declared")));
        }
        if !seen.insert(v.clone()) {
            return Err(err(*line, *col, format!("node `{v}` is declared twice")));
        }
        b.add_node(v, ctrl, parent.clone());
    }
    for (i, parent, _, _) in &lit.sites {
        b.add_site(*i, parent.clone());
    }
    let edges: BTreeSet<&String> = lit.edges.iter().collect();
    for (point, to, line, col) in &lit.links {
        let target = if edges.contains(to) {
            Link::edge(to)
        } else if lit.outer.contains(to) {
            Link::outer(to)
        } else {
            return Err(err(*line, *col, format!("`{to}` is neither an edge nor an outer name")));
        };
        let p = match point {
            RawLink::Port(v, i) => Point::Port(Sym::new(v), *i),
            RawLink::Inner(x) => Point::Inner(Sym::new(x)),
        };
        if b.link().contains_key(&p) {
            return Err(err(*line, *col, "point is linked twice".into()));
        }
        b.link.insert(p, target);
    }
    b.well_formed()
        .map_err(|d| err(l0, c0, format!("ill-formed bigraph: {d}")))?;
    Ok(b)
}

/// Parses a bigraph literal `{ ... }` on its own.
pub fn parse_bigraph(src: &str, sig: &Arc<Signature>) -> Result<Bigraph, BrsError> {
    let mut lx = Lexer::new(src);
    if lx.is_keyword("bigraph")? {
        lx.next()?;
    }
    let b = literal(&mut lx, sig)?;
    if let Some(t) = lx.peek()? {
        let (l, c) = (t.line, t.col);
        return lx.err(l, c, "trailing input");
    }
    Ok(b)
}

fn signature_block(lx: &mut Lexer<'_>) -> Result<Signature, BrsError> {
    lx.expect(Tok::Open('{'), "`{`")?;
    let mut sig = Signature::new();
    loop {
        if lx.is_next(&Tok::Close('}'))? {
            lx.next()?;
            return Ok(sig);
        }
        if lx.is_next(&Tok::Comma)? {
            lx.next()?;
            continue;
        }
        let (c, line, col) = lx.ident("a control")?;
        lx.expect(Tok::Colon, "`:`")?;
        let a = lx.number("an arity")?;
        if sig.arity(&c).is_some() {
            return lx.err(line, col, format!("control `{c}` is declared twice"));
        }
        sig.add(&c, a as u32);
    }
}

enum AgentSrc {
    Ccs(String, usize, usize),
    Literal(usize, usize, usize),
    Atoms(String, usize, usize, usize),
}

struct RawRule {
    name: String,
    line: usize,
    col: usize,
    redex: usize,
    reactum: usize,
    eta: Vec<usize>,
}

/// Parses a `.brs` file. Literals are read after the signature is known,
/// wherever the signature block appears.
pub fn parse_spec(src: &str) -> Result<BrsSpec, BrsError> {
    let mut lx = Lexer::new(src);
    let (hl, hc) = lx.here()?;
    match (lx.next().ok().map(|t| t.tok), lx.next().ok().map(|t| t.tok)) {
        (Some(Tok::Ident(b)), Some(Tok::Num(1))) if b == "brs" => {}
        _ => {
            return Err(BrsError {
                line: hl,
                col: hc,
                msg: format!("expected the header `{BRS_HEADER}`"),
            })
        }
    }

    // first pass: structure, with literals recorded by byte offset
    let mut sig: Option<Signature> = None;
    let mut agent: Option<AgentSrc> = None;
    let mut rules: Vec<RawRule> = Vec::new();
    let mut options = BrsOptions::default();
    let skip_literal = |lx: &mut Lexer<'_>| -> Result<usize, BrsError> {
        let t = lx.expect(Tok::Open('{'), "`{` opening a bigraph")?;
        let start = t.end - 1;
        lx.raw_block(&t)?;
        Ok(start)
    };
    while lx.peek()?.is_some() {
        let (kw, line, col) = lx.ident("a block keyword")?;
        match kw.as_str() {
            "signature" => {
                if sig.is_some() {
                    return lx.err(line, col, "second signature block");
                }
                sig = Some(signature_block(&mut lx)?);
            }
            "agent" => {
                if agent.is_some() {
                    return lx.err(line, col, "second agent block");
                }
                let (kind, kl, kc) = lx.ident("`ccs`, `bigraph` or `atoms`")?;
                agent = Some(match kind.as_str() {
                    "ccs" => {
                        let t = lx.next()?;
                        match t.tok {
                            Tok::Str(s) => AgentSrc::Ccs(s, t.line, t.col),
                            _ => return lx.err(t.line, t.col, "expected a quoted CCS term"),
                        }
                    }
                    "bigraph" => AgentSrc::Literal(skip_literal(&mut lx)?, kl, kc),
                    "atoms" => {
                        let t = lx.expect(Tok::Open('{'), "`{`")?;
                        let (text, first) = lx.raw_block(&t)?;
                        AgentSrc::Atoms(text, first, t.line, t.col)
                    }
                    other => return lx.err(kl, kc, format!("unknown agent kind `{other}`")),
                });
            }
            "rule" => {
                let (name, _, _) = lx.ident("a rule name")?;
                lx.expect(Tok::Open('{'), "`{`")?;
                let mut redex = None;
                let mut reactum = None;
                let mut eta = Vec::new();
                loop {
                    if lx.is_next(&Tok::Close('}'))? {
                        lx.next()?;
                        break;
                    }
                    let (part, pl, pc) = lx.ident("`redex`, `reactum` or `eta`")?;
                    match part.as_str() {
                        "redex" | "reactum" => {
                            if lx.is_keyword("bigraph")? {
                                lx.next()?;
                            }
                            let at = skip_literal(&mut lx)?;
                            if part == "redex" {
                                redex = Some(at);
                            } else {
                                reactum = Some(at);
                            }
                        }
                        "eta" => {
                            lx.expect(Tok::Open('['), "`[`")?;
                            loop {
                                if lx.is_next(&Tok::Close(']'))? {
                                    lx.next()?;
                                    break;
                                }
                                if lx.is_next(&Tok::Comma)? {
                                    lx.next()?;
                                    continue;
                                }
                                eta.push(lx.number("a redex site index")? as usize);
                            }
                        }
                        other => return lx.err(pl, pc, format!("unknown rule part `{other}`")),
                    }
                }
                let (Some(redex), Some(reactum)) = (redex, reactum) else {
                    return lx.err(line, col, format!("rule `{name}` needs a redex and a reactum"));
                };
                if rules.iter().any(|r| r.name == name) {
                    return lx.err(line, col, format!("rule `{name}` is defined twice"));
                }
                rules.push(RawRule {
                    name,
                    line,
                    col,
                    redex,
                    reactum,
                    eta,
                });
            }
            "options" => {
                lx.expect(Tok::Open('{'), "`{`")?;
                loop {
                    if lx.is_next(&Tok::Close('}'))? {
                        lx.next()?;
                        break;
                    }
                    if lx.is_next(&Tok::Comma)? {
                        lx.next()?;
                        continue;
                    }
                    let (key, kl, kc) = lx.ident("an option name")?;
                    lx.expect(Tok::Colon, "`:`")?;
                    let v = lx.number("a number")?;
                    match key.as_str() {
                        "seed" => options.seed = Some(v),
                        "steps" => options.steps = Some(v as usize),
                        "max_states" => options.max_states = Some(v as usize),
                        other => return lx.err(kl, kc, format!("unknown option `{other}`")),
                    }
                }
            }
            other => return lx.err(line, col, format!("unknown block `{other}`")),
        }
    }

    let sig = Arc::new(match (sig, &agent) {
        (Some(s), _) => s,
        (None, Some(AgentSrc::Ccs(..))) => (*ccs_signature()).clone(),
        (None, _) => Signature::new(),
    });
    let sub = |at: usize| -> Result<Bigraph, BrsError> {
        let mut lx = Lexer::new(src);
        // replay position bookkeeping up to `at`
        while lx.pos < at {
            lx.bump();
        }
        literal(&mut lx, &sig)
    };
    let ground = |b: Bigraph, line: usize, col: usize| -> Result<Bigraph, BrsError> {
        if b.is_ground() {
            Ok(b)
        } else {
            Err(BrsError {
                line,
                col,
                msg: "the agent must be ground".into(),
            })
        }
    };
    let (agent, atoms) = match agent {
        None => {
            let b = Bigraph::empty(sig.clone());
            let m = encode(&b, DEFAULT_GRAPH).expect("the empty bigraph is well formed");
            (Some(b), m)
        }
        Some(AgentSrc::Ccs(text, line, col)) => {
            for (c, a) in ccs_signature().controls() {
                if sig.arity(c.as_ref()) != Some(a) {
                    return Err(BrsError {
                        line,
                        col,
                        msg: format!("a ccs agent needs control `{c}` with arity {a}"),
                    });
                }
            }
            let t = parse_ccs(&text).map_err(|e| BrsError {
                line,
                col: col + e.col,
                msg: e.msg,
            })?;
            let b = Bigraph {
                sig: sig.clone(),
                ..ccs_to_bigraph(&t)
            };
            let m = encode(&b, DEFAULT_GRAPH).expect("compiled terms are well formed");
            (Some(b), m)
        }
        Some(AgentSrc::Literal(at, line, col)) => {
            let b = ground(sub(at)?, line, col)?;
            let m = encode(&b, DEFAULT_GRAPH).expect("literals are checked for well-formedness");
            (Some(b), m)
        }
        Some(AgentSrc::Atoms(text, first, line, col)) => {
            let m = text::parse_multiset(&text).map_err(|e| match e {
                KernelError::Parse { line: l, col: c, msg } => BrsError {
                    line: first + l - 1,
                    col: c,
                    msg,
                },
                other => BrsError {
                    line,
                    col,
                    msg: other.to_string(),
                },
            })?;
            match interpret(&m, &sig) {
                Ok(b) => (Some(ground(b, line, col)?), m),
                Err(RelationalError::Invalid(_)) => (None, m),
                Err(e) => {
                    return Err(BrsError {
                        line,
                        col,
                        msg: format!("atoms do not encode a bigraph: {e}"),
                    })
                }
            }
        }
    };
    if agent.is_none() && !rules.is_empty() {
        return Err(BrsError {
            line: rules[0].line,
            col: rules[0].col,
            msg: "rules need an agent whose atoms encode a bigraph".into(),
        });
    }
    let mut out_rules = Vec::new();
    for r in rules {
        let redex = sub(r.redex)?;
        let reactum = sub(r.reactum)?;
        let rule = ParametricReactionRule::new(&r.name, redex, reactum, r.eta).map_err(|e| BrsError {
            line: r.line,
            col: r.col,
            msg: e.to_string(),
        })?;
        out_rules.push(rule);
    }
    Ok(BrsSpec {
        signature: sig,
        agent,
        atoms,
        rules: out_rules,
        options,
    })
}

fn write_place(out: &mut String, b: &Bigraph, kids: &std::collections::BTreeMap<Parent, Vec<Child>>, p: &Parent) {
    let mut first = true;
    for c in kids.get(p).into_iter().flatten() {
        if !first {
            out.push(' ');
        }
        first = false;
        match c {
            Child::Site(s) => {
                let _ = write!(out, "site {s}");
            }
            Child::Node(v) => {
                let _ = write!(out, "{v} {}", b.nodes()[v]);
                let q = Parent::Node(v.clone());
                if kids.contains_key(&q) {
                    out.push_str(" { ");
                    write_place(out, b, kids, &q);
                    out.push_str(" }");
                }
            }
        }
    }
}

/// Prints a bigraph literal that `parse_bigraph` reads back. Edge names
/// must differ from outer names.
pub fn bigraph_to_literal(b: &Bigraph) -> String {
    let mut s = String::from("bigraph {\n");
    let names = |set: &mut dyn Iterator<Item = &Sym>| set.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    if !b.outer().names.is_empty() {
        let _ = writeln!(s, "  outer {{ {} }}", names(&mut b.outer().names.iter()));
    }
    if !b.inner().names.is_empty() {
        let _ = writeln!(s, "  inner {{ {} }}", names(&mut b.inner().names.iter()));
    }
    if !b.edges().is_empty() {
        let _ = writeln!(s, "  edges {{ {} }}", names(&mut b.edges().iter()));
    }
    let kids = b.children_map();
    for r in 0..b.outer().width {
        if kids.contains_key(&Parent::Root(r)) {
            s.push_str("  root { ");
            write_place(&mut s, b, &kids, &Parent::Root(r));
            s.push_str(" }\n");
        } else {
            s.push_str("  root { }\n");
        }
    }
    if !b.link().is_empty() {
        s.push_str("  links {\n");
        for (p, l) in b.link() {
            let to = match l {
                Link::Edge(e) | Link::Outer(e) => e,
            };
            match p {
                Point::Port(v, i) => {
                    let _ = writeln!(s, "    port({v}, {i}) -> {to}");
                }
                Point::Inner(x) => {
                    let _ = writeln!(s, "    {x} -> {to}");
                }
            }
        }
        s.push_str("  }\n");
    }
    s.push_str("}\n");
    s
}
