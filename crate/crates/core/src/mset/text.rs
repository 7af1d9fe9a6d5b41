//! Line-oriented text form of atoms, multisets and atom patterns.
//!
//! Naturals print as decimals; `z` and `s(..)` are accepted on input. A name
//! prints bare when its namespace follows from its position, otherwise as
//! `ns:id`.

use super::atom::{Atom, Multiset};
use super::pattern::{AtomPat, Pat};
use super::term::{Name, Namespace, Nat, Sym, Term};
use super::KernelError;

pub const MULTISET_HEADER: &str = "# brs-atoms 1";

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sort {
    Any,
    Name(Namespace),
    Nat,
}

use Namespace as N;
use Sort::{Any, Nat as SNat};

fn pred_sorts(pred: &str) -> &'static [Sort] {
    match pred {
        "is_root" | "is_site" => &[SNat],
        "is_node" => &[Sort::Name(N::Node)],
        "is_o_name" => &[Sort::Name(N::Outer)],
        "is_i_name" => &[Sort::Name(N::Inner)],
        "is_e_name" => &[Sort::Name(N::Edge)],
        "lc" => &[Sort::Name(N::Node), Sort::Name(N::Control)],
        "lp" => &[Any, Sort::Name(N::Node)],
        "has_child_p" | "has_child_l" => &[Any, SNat],
        "vp" => &[Sort::Name(N::Node), SNat],
        _ => &[],
    }
}

fn ctor_sorts(ctor: &str) -> &'static [Sort] {
    match ctor {
        "src_n" | "dst_n" => &[Sort::Name(N::Node)],
        "src_s" | "dst_r" | "s" => &[SNat],
        "src_i" => &[Sort::Name(N::Inner)],
        "dst_o" => &[Sort::Name(N::Outer)],
        "dst_e" => &[Sort::Name(N::Edge)],
        "p" => &[Sort::Name(N::Node), SNat],
        _ => &[],
    }
}

fn sort_at(table: &[Sort], i: usize) -> Sort {
    table.get(i).copied().unwrap_or(Any)
}

fn bare_ok(id: &str) -> bool {
    !id.is_empty()
        && id != "z"
        && id != "s"
        && !id.bytes().all(|b| b.is_ascii_digit())
        && id.chars().all(is_ident_char)
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '#' | '\'' | '.' | '~' | '%')
}

pub fn term_to_string(t: &Term, sort: Sort) -> String {
    let mut s = String::new();
    write_term(&mut s, t, sort, false);
    s
}

fn write_name(out: &mut String, n: &Name, sort: Sort, pattern_mode: bool) {
    let upper = n.id.as_str().starts_with(|c: char| c.is_ascii_uppercase() || c == '_');
    if sort == Sort::Name(n.ns) && bare_ok(n.id.as_str()) && !(pattern_mode && upper) {
        out.push_str(n.id.as_str());
    } else {
        out.push_str(n.ns.as_str());
        out.push(':');
        out.push_str(n.id.as_str());
    }
}

fn write_term(out: &mut String, t: &Term, sort: Sort, pattern_mode: bool) {
    match t {
        Term::Name(n) => write_name(out, n, sort, pattern_mode),
        Term::Nat(n) => out.push_str(&n.0.to_string()),
        Term::App(f, args) => {
            out.push_str(f.as_str());
            out.push('(');
            let table = ctor_sorts(f.as_str());
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(out, a, sort_at(table, i), pattern_mode);
            }
            out.push(')');
        }
    }
}

fn write_graph(out: &mut String, g: &str) {
    out.push('@');
    if bare_ok(g) {
        out.push_str(g);
    } else {
        out.push_str("graph:");
        out.push_str(g);
    }
}

pub fn atom_to_string(a: &Atom) -> String {
    let mut s = String::new();
    s.push_str(a.pred.as_str());
    s.push('(');
    let table = pred_sorts(a.pred.as_str());
    for (i, t) in a.args.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        write_term(&mut s, t, sort_at(table, i), false);
    }
    s.push(')');
    write_graph(&mut s, a.graph.as_str());
    s
}

fn write_pat(out: &mut String, p: &Pat, sort: Sort) {
    match p {
        Pat::Var(v) => out.push_str(v.as_str()),
        Pat::Lit(t) => write_term(out, t, sort, true),
        Pat::Succ(k, q) => {
            for _ in 0..*k {
                out.push_str("s(");
            }
            write_pat(out, q, SNat);
            for _ in 0..*k {
                out.push(')');
            }
        }
        Pat::App(f, ps) => {
            out.push_str(f.as_str());
            out.push('(');
            let table = ctor_sorts(f.as_str());
            for (i, q) in ps.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_pat(out, q, sort_at(table, i));
            }
            out.push(')');
        }
    }
}

pub fn pattern_to_string(a: &AtomPat) -> String {
    let mut s = String::new();
    s.push_str(a.pred.as_str());
    s.push('(');
    let table = pred_sorts(a.pred.as_str());
    for (i, p) in a.args.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        write_pat(&mut s, p, sort_at(table, i));
    }
    s.push(')');
    s.push('@');
    match &a.graph {
        Pat::Var(v) => s.push_str(v.as_str()),
        Pat::Lit(Term::Name(n)) => write_name(&mut s, n, Sort::Name(N::Graph), true),
        other => write_pat(&mut s, other, Sort::Name(N::Graph)),
    }
    s
}

/// Canonical text form: header line, then one atom per line per occurrence.
pub fn multiset_to_text(m: &Multiset) -> String {
    let mut s = String::from(MULTISET_HEADER);
    s.push('\n');
    for a in m.iter() {
        s.push_str(&atom_to_string(a));
        s.push('\n');
    }
    s
}

/// Parses the text form. Blank lines and lines starting with `#` are skipped.
pub fn parse_multiset(src: &str) -> Result<Multiset, KernelError> {
    let mut m = Multiset::new();
    for (lineno, line) in src.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let a = parse_atom(line).map_err(|e| match e {
            KernelError::Parse { col, msg, .. } => KernelError::Parse {
                line: lineno + 1,
                col,
                msg,
            },
            other => other,
        })?;
        m.insert(a);
    }
    Ok(m)
}

pub fn parse_atom(src: &str) -> Result<Atom, KernelError> {
    let mut p = Parser::new(src, false)?;
    let a = p.atom()?;
    p.expect_end()?;
    let mut args = Vec::with_capacity(a.args.len());
    for q in a.args {
        args.push(ground(q).ok_or_else(|| p.err_at(0, "unexpected variable"))?);
    }
    let graph = match ground(a.graph) {
        Some(Term::Name(n)) if n.ns == N::Graph => n.id,
        _ => return Err(p.err_at(0, "graph id must be a name")),
    };
    Ok(Atom {
        pred: a.pred,
        args,
        graph,
    })
}

/// Parses a ground term; bare names need an explicit namespace (`ns:id`).
pub fn parse_term(src: &str) -> Result<Term, KernelError> {
    let mut p = Parser::new(src, false)?;
    let t = p.pat(Any)?;
    p.expect_end()?;
    ground(t).ok_or_else(|| p.err_at(0, "unexpected variable"))
}

pub fn parse_pattern(src: &str) -> Result<AtomPat, KernelError> {
    let mut p = Parser::new(src, true)?;
    let a = p.atom()?;
    p.expect_end()?;
    Ok(a)
}

pub fn parse_pattern_list(src: &str) -> Result<Vec<AtomPat>, KernelError> {
    let trimmed = src.trim();
    let inner = trimmed
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(trimmed);
    let mut p = Parser::new(inner, true)?;
    let mut out = Vec::new();
    if p.at_end() {
        return Ok(out);
    }
    loop {
        out.push(p.atom()?);
        if p.at_end() {
            break;
        }
        p.expect(Tok::Comma)?;
    }
    Ok(out)
}

fn ground(p: Pat) -> Option<Term> {
    match p {
        Pat::Var(_) => None,
        Pat::Lit(t) => Some(t),
        Pat::Succ(k, q) => match ground(*q)? {
            Term::Nat(n) => Some(Term::Nat(Nat(n.0 + k))),
            _ => None,
        },
        Pat::App(f, ps) => Some(Term::App(
            f,
            ps.into_iter().map(ground).collect::<Option<Vec<_>>>()?,
        )),
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    At,
    Colon,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    patterns: bool,
}

impl Parser {
    fn new(src: &str, patterns: bool) -> Result<Parser, KernelError> {
        let mut toks = Vec::new();
        let chars: Vec<(usize, char)> = src.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (off, c) = chars[i];
            let col = src[..off].chars().count() + 1;
            match c {
                c if c.is_whitespace() => {
                    i += 1;
                }
                '(' | ')' | ',' | '@' | ':' => {
                    toks.push((
                        match c {
                            '(' => Tok::LParen,
                            ')' => Tok::RParen,
                            ',' => Tok::Comma,
                            '@' => Tok::At,
                            _ => Tok::Colon,
                        },
                        col,
                    ));
                    i += 1;
                }
                c if is_ident_char(c) => {
                    let mut s = String::new();
                    while i < chars.len() && is_ident_char(chars[i].1) {
                        s.push(chars[i].1);
                        i += 1;
                    }
                    toks.push((Tok::Ident(s), col));
                }
                other => {
                    return Err(KernelError::Parse {
                        line: 1,
                        col,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(Parser {
            toks,
            pos: 0,
            patterns,
        })
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map(|t| t.1)
            .unwrap_or(1)
    }

    fn err_at(&self, col: usize, msg: &str) -> KernelError {
        KernelError::Parse {
            line: 1,
            col: if col == 0 { self.col() } else { col },
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.0)
    }

    fn expect(&mut self, t: Tok) -> Result<(), KernelError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_at(0, &format!("expected {t:?}")))
        }
    }

    fn expect_end(&self) -> Result<(), KernelError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err_at(0, "trailing input"))
        }
    }

    fn ident(&mut self) -> Result<String, KernelError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err_at(0, "expected identifier")),
        }
    }

    fn atom(&mut self) -> Result<AtomPat, KernelError> {
        let pred = self.ident()?;
        self.expect(Tok::LParen)?;
        let table = pred_sorts(&pred);
        let mut args = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                args.push(self.pat(sort_at(table, args.len()))?);
                if self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::At)?;
        let graph = self.pat(Sort::Name(N::Graph))?;
        Ok(AtomPat {
            pred: Sym::from(pred),
            args,
            graph,
        })
    }

    fn pat(&mut self, sort: Sort) -> Result<Pat, KernelError> {
        let col = self.col();
        let id = self.ident()?;
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let table = ctor_sorts(&id);
            let mut args = Vec::new();
            if self.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(self.pat(sort_at(table, args.len()))?);
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            self.expect(Tok::RParen)?;
            if id == "s" {
                if args.len() != 1 {
                    return Err(self.err_at(col, "s takes one argument"));
                }
                return Ok(Pat::succ(1, args.pop().expect("one arg")));
            }
            return Ok(Pat::App(Sym::from(id), args));
        }
        if self.peek() == Some(&Tok::Colon) && matches!(self.peek2(), Some(Tok::Ident(_))) {
            if let Some(ns) = Namespace::parse(&id) {
                self.pos += 1;
                let name = self.ident()?;
                return Ok(Pat::Lit(Term::name(ns, name)));
            }
        }
        if id == "z" {
            return Ok(Pat::z());
        }
        if id.bytes().all(|b| b.is_ascii_digit()) {
            let n: u32 = id
                .parse()
                .map_err(|_| self.err_at(col, "natural out of range"))?;
            return Ok(Pat::nat(n));
        }
        if self.patterns && id.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
            return Ok(Pat::Var(Sym::from(id)));
        }
        match sort {
            Sort::Name(ns) => Ok(Pat::Lit(Term::name(ns, id))),
            _ => Err(self.err_at(
                col,
                &format!("cannot infer the namespace of `{id}`; write ns:{id}"),
            )),
        }
    }
}
