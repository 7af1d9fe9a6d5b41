use std::fmt;
use std::sync::Arc;

/// Interned-ish identifier. Cheap to clone, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Sym {
    fn borrow(&self) -> &str {
        self.as_str()
    }
}

impl AsRef<str> for Sym {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Sort of a name. Names of different sorts never collide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    Node,
    Edge,
    Outer,
    Inner,
    Control,
    Graph,
}

impl Namespace {
    pub const ALL: [Namespace; 6] = [
        Namespace::Node,
        Namespace::Edge,
        Namespace::Outer,
        Namespace::Inner,
        Namespace::Control,
        Namespace::Graph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Namespace::Node => "node",
            Namespace::Edge => "edge",
            Namespace::Outer => "outer",
            Namespace::Inner => "inner",
            Namespace::Control => "control",
            Namespace::Graph => "graph",
        }
    }

    pub fn parse(s: &str) -> Option<Namespace> {
        Namespace::ALL.into_iter().find(|ns| ns.as_str() == s)
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Name {
    pub ns: Namespace,
    pub id: Sym,
}

impl Name {
    pub fn new(ns: Namespace, id: impl Into<Sym>) -> Self {
        Name { ns, id: id.into() }
    }

    /// Counter suffix if the id has the shape produced by the fresh-name supply.
    pub fn fresh_index(&self) -> Option<u64> {
        let (prefix, k) = self.id.as_str().rsplit_once('#')?;
        if prefix != self.ns.as_str() {
            return None;
        }
        k.parse().ok()
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.ns, self.id)
    }
}

/// Natural number built from `z` and `s`. Stored as a machine integer, but
/// matching treats it structurally: a pattern `s^k(P)` matches `n` iff `n >= k`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Nat(pub u32);

impl Nat {
    pub const Z: Nat = Nat(0);

    pub fn succ(self) -> Nat {
        Nat(self.0 + 1)
    }

    pub fn pred(self) -> Option<Nat> {
        self.0.checked_sub(1).map(Nat)
    }

    /// Unary spelling, e.g. `s(s(z))`.
    pub fn unary(self) -> String {
        let mut s = String::new();
        for _ in 0..self.0 {
            s.push_str("s(");
        }
        s.push('z');
        for _ in 0..self.0 {
            s.push(')');
        }
        s
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Name(Name),
    Nat(Nat),
    App(Sym, Vec<Term>),
}

impl Term {
    pub fn name(ns: Namespace, id: impl Into<Sym>) -> Term {
        Term::Name(Name::new(ns, id))
    }

    pub fn nat(n: u32) -> Term {
        Term::Nat(Nat(n))
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(Sym::new(f), args)
    }

    pub fn as_name(&self) -> Option<&Name> {
        match self {
            Term::Name(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_nat(&self) -> Option<Nat> {
        match self {
            Term::Nat(n) => Some(*n),
            _ => None,
        }
    }

    /// Argument of a unary constructor `f(x)`.
    pub fn unwrap_ctor(&self, f: &str) -> Option<&Term> {
        match self {
            Term::App(g, args) if g.as_str() == f && args.len() == 1 => Some(&args[0]),
            _ => None,
        }
    }

    pub fn visit_names<'a>(&'a self, out: &mut impl FnMut(&'a Name)) {
        match self {
            Term::Name(n) => out(n),
            Term::Nat(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.visit_names(out)),
        }
    }
}

impl From<Name> for Term {
    fn from(n: Name) -> Self {
        Term::Name(n)
    }
}

impl From<Nat> for Term {
    fn from(n: Nat) -> Self {
        Term::Nat(n)
    }
}

/// Constructors of the relational vocabulary.
pub mod ctor {
    use super::{Name, Namespace, Nat, Term};

    pub const SRC_N: &str = "src_n";
    pub const SRC_S: &str = "src_s";
    pub const SRC_P: &str = "src_p";
    pub const SRC_I: &str = "src_i";
    pub const DST_N: &str = "dst_n";
    pub const DST_R: &str = "dst_r";
    pub const DST_O: &str = "dst_o";
    pub const DST_E: &str = "dst_e";
    pub const PORT: &str = "p";

    pub fn node(id: &str) -> Term {
        Term::name(Namespace::Node, id)
    }

    pub fn port(node: &str, index: u32) -> Term {
        Term::app(PORT, vec![self::node(node), Term::Nat(Nat(index))])
    }

    pub fn src_n(node: &str) -> Term {
        Term::app(SRC_N, vec![self::node(node)])
    }

    pub fn src_s(site: usize) -> Term {
        Term::app(SRC_S, vec![Term::nat(site as u32)])
    }

    pub fn src_p(node: &str, index: u32) -> Term {
        Term::app(SRC_P, vec![port(node, index)])
    }

    pub fn src_i(inner: &str) -> Term {
        Term::app(SRC_I, vec![Term::name(Namespace::Inner, inner)])
    }

    pub fn dst_n(node: &str) -> Term {
        Term::app(DST_N, vec![self::node(node)])
    }

    pub fn dst_r(root: usize) -> Term {
        Term::app(DST_R, vec![Term::nat(root as u32)])
    }

    pub fn dst_o(outer: &str) -> Term {
        Term::app(DST_O, vec![Term::name(Namespace::Outer, outer)])
    }

    pub fn dst_e(edge: &str) -> Term {
        Term::app(DST_E, vec![Term::name(Namespace::Edge, edge)])
    }

    pub fn graph(id: &str) -> Term {
        Term::Name(Name::new(Namespace::Graph, id))
    }
}
