//! Concrete bigraphs: place graph (`prnt`) and link graph (`link`) over a
//! signature, with composition, juxtaposition and lean equivalence.

mod dot;
mod equiv;
pub mod gen;
mod ops;
mod wf;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::mset::Sym;

pub use dot::to_dot;
pub use equiv::{lean_equiv, shape_key, Witness};
pub use wf::{Diagnostics, Violation};

pub type Control = Sym;

/// Controls with their arities.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Signature {
    arities: BTreeMap<Control, u32>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_pairs(pairs: &[(&str, u32)]) -> Signature {
        let mut s = Signature::new();
        for (c, a) in pairs {
            s.add(c, *a);
        }
        s
    }

    pub fn add(&mut self, control: &str, arity: u32) {
        self.arities.insert(Sym::new(control), arity);
    }

    pub fn arity(&self, control: &str) -> Option<u32> {
        self.arities.get(control).copied()
    }

    pub fn controls(&self) -> impl Iterator<Item = (&Control, u32)> + '_ {
        self.arities.iter().map(|(c, a)| (c, *a))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }
}

/// `⟨width, names⟩`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Interface {
    pub width: usize,
    pub names: BTreeSet<Sym>,
}

impl Interface {
    pub fn new(width: usize, names: &[&str]) -> Interface {
        Interface {
            width,
            names: names.iter().map(|n| Sym::new(n)).collect(),
        }
    }

    pub fn with_names(width: usize, names: BTreeSet<Sym>) -> Interface {
        Interface { width, names }
    }

    pub fn unit() -> Interface {
        Interface::default()
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.names.iter().map(|n| n.as_str()).collect();
        write!(f, "<{}, {{{}}}>", self.width, names.join(","))
    }
}

/// Domain of `prnt`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Child {
    Node(Sym),
    Site(usize),
}

/// Codomain of `prnt`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Parent {
    Node(Sym),
    Root(usize),
}

/// Domain of `link`: a port `(v, i)` with `i` 1-based, or an inner name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Point {
    Port(Sym, u32),
    Inner(Sym),
}

/// Codomain of `link`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Link {
    Edge(Sym),
    Outer(Sym),
}

impl Child {
    pub fn node(n: &str) -> Child {
        Child::Node(Sym::new(n))
    }
}

impl Parent {
    pub fn node(n: &str) -> Parent {
        Parent::Node(Sym::new(n))
    }
}

impl Link {
    pub fn edge(e: &str) -> Link {
        Link::Edge(Sym::new(e))
    }

    pub fn outer(y: &str) -> Link {
        Link::Outer(Sym::new(y))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BigraphError {
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("interface mismatch: inner face {inner} does not match outer face {outer}")]
    InterfaceMismatch { inner: Interface, outer: Interface },
    #[error("node {0} occurs in both operands")]
    NodeClash(Sym),
    #[error("edge {0} occurs in both operands")]
    EdgeClash(Sym),
    #[error("name {0} occurs in both interfaces")]
    NameClash(Sym),
    #[error("ill-formed bigraph: {0}")]
    IllFormed(Diagnostics),
}

/// `(V, E, ctrl, prnt, link) : ⟨m, X⟩ → ⟨n, Y⟩`.
///
/// Construction does not validate; call [`Bigraph::well_formed`] when the
/// input is untrusted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bigraph {
    pub(crate) sig: Arc<Signature>,
    pub(crate) nodes: BTreeMap<Sym, Control>,
    pub(crate) edges: BTreeSet<Sym>,
    pub(crate) prnt: BTreeMap<Child, Parent>,
    pub(crate) link: BTreeMap<Point, Link>,
    pub(crate) inner: Interface,
    pub(crate) outer: Interface,
}

impl Bigraph {
    pub fn new(sig: Arc<Signature>, inner: Interface, outer: Interface) -> Bigraph {
        Bigraph {
            sig,
            nodes: BTreeMap::new(),
            edges: BTreeSet::new(),
            prnt: BTreeMap::new(),
            link: BTreeMap::new(),
            inner,
            outer,
        }
    }

    /// `ε`: no nodes, no edges, empty interfaces.
    pub fn empty(sig: Arc<Signature>) -> Bigraph {
        Bigraph::new(sig, Interface::unit(), Interface::unit())
    }

    /// Identity on `⟨m, X⟩`.
    pub fn identity(sig: Arc<Signature>, face: Interface) -> Bigraph {
        let mut b = Bigraph::new(sig, face.clone(), face.clone());
        for i in 0..face.width {
            b.prnt.insert(Child::Site(i), Parent::Root(i));
        }
        for x in &face.names {
            b.link.insert(Point::Inner(x.clone()), Link::Outer(x.clone()));
        }
        b
    }

    pub fn add_node(&mut self, name: &str, control: &str, parent: Parent) -> &mut Self {
        self.nodes.insert(Sym::new(name), Sym::new(control));
        self.prnt.insert(Child::Node(Sym::new(name)), parent);
        self
    }

    pub fn add_site(&mut self, site: usize, parent: Parent) -> &mut Self {
        self.prnt.insert(Child::Site(site), parent);
        self
    }

    pub fn add_edge(&mut self, name: &str) -> &mut Self {
        self.edges.insert(Sym::new(name));
        self
    }

    pub fn link_port(&mut self, node: &str, index: u32, to: Link) -> &mut Self {
        self.link.insert(Point::Port(Sym::new(node), index), to);
        self
    }

    pub fn link_inner(&mut self, name: &str, to: Link) -> &mut Self {
        self.link.insert(Point::Inner(Sym::new(name)), to);
        self
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn nodes(&self) -> &BTreeMap<Sym, Control> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeSet<Sym> {
        &self.edges
    }

    pub fn prnt(&self) -> &BTreeMap<Child, Parent> {
        &self.prnt
    }

    pub fn link(&self) -> &BTreeMap<Point, Link> {
        &self.link
    }

    pub fn inner(&self) -> &Interface {
        &self.inner
    }

    pub fn outer(&self) -> &Interface {
        &self.outer
    }

    pub fn control(&self, node: &(impl AsRef<str> + ?Sized)) -> Option<&Control> {
        self.nodes.get(node.as_ref())
    }

    pub fn arity(&self, node: &(impl AsRef<str> + ?Sized)) -> u32 {
        self.control(node)
            .and_then(|c| self.sig.arity(c.as_str()))
            .unwrap_or(0)
    }

    pub fn parent(&self, c: &Child) -> Option<&Parent> {
        self.prnt.get(c)
    }

    /// Number of ports, `|P|`.
    pub fn port_count(&self) -> usize {
        self.nodes.keys().map(|v| self.arity(v) as usize).sum()
    }

    pub fn is_ground(&self) -> bool {
        self.inner.width == 0 && self.inner.names.is_empty()
    }

    /// Children of every place, in `prnt` order.
    pub fn children_map(&self) -> BTreeMap<Parent, Vec<Child>> {
        let mut m: BTreeMap<Parent, Vec<Child>> = BTreeMap::new();
        for (c, p) in &self.prnt {
            m.entry(p.clone()).or_default().push(c.clone());
        }
        m
    }

    pub fn children(&self, p: &Parent) -> Vec<Child> {
        self.prnt
            .iter()
            .filter(|(_, q)| *q == p)
            .map(|(c, _)| c.clone())
            .collect()
    }

    /// Points linked to each edge and outer name.
    pub fn points_map(&self) -> BTreeMap<Link, Vec<Point>> {
        let mut m: BTreeMap<Link, Vec<Point>> = BTreeMap::new();
        for (p, l) in &self.link {
            m.entry(l.clone()).or_default().push(p.clone());
        }
        m
    }

    /// Proper descendants of a node, by `prnt`.
    pub fn descendants(&self, node: &Sym) -> BTreeSet<Child> {
        let kids = self.children_map();
        let mut out = BTreeSet::new();
        let mut stack = vec![Parent::Node(node.clone())];
        while let Some(p) = stack.pop() {
            for c in kids.get(&p).into_iter().flatten() {
                if out.insert(c.clone()) {
                    if let Child::Node(v) = c {
                        stack.push(Parent::Node(v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Renames nodes and edges; interfaces are untouched.
    pub fn rename(&self, node: impl Fn(&Sym) -> Sym, edge: impl Fn(&Sym) -> Sym) -> Bigraph {
        let pc = |p: &Parent| match p {
            Parent::Node(v) => Parent::Node(node(v)),
            r => r.clone(),
        };
        let lc = |l: &Link| match l {
            Link::Edge(e) => Link::Edge(edge(e)),
            o => o.clone(),
        };
        Bigraph {
            sig: self.sig.clone(),
            nodes: self.nodes.iter().map(|(v, c)| (node(v), c.clone())).collect(),
            edges: self.edges.iter().map(&edge).collect(),
            prnt: self
                .prnt
                .iter()
                .map(|(c, p)| {
                    let c = match c {
                        Child::Node(v) => Child::Node(node(v)),
                        s => s.clone(),
                    };
                    (c, pc(p))
                })
                .collect(),
            link: self
                .link
                .iter()
                .map(|(p, l)| {
                    let p = match p {
                        Point::Port(v, i) => Point::Port(node(v), *i),
                        x => x.clone(),
                    };
                    (p, lc(l))
                })
                .collect(),
            inner: self.inner.clone(),
            outer: self.outer.clone(),
        }
    }

    /// Prefixes every node and edge name.
    pub fn with_prefix(&self, prefix: &str) -> Bigraph {
        self.rename(
            |v| Sym::from(format!("{prefix}{v}")),
            |e| Sym::from(format!("{prefix}{e}")),
        )
    }

    /// Control multiset, used to prune searches.
    pub fn control_counts(&self) -> BTreeMap<Control, usize> {
        let mut m = BTreeMap::new();
        for c in self.nodes.values() {
            *m.entry(c.clone()).or_insert(0) += 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sig() -> Arc<Signature> {
        Arc::new(Signature::from_pairs(&[("a", 1), ("b", 0), ("c", 2)]))
    }

    #[test]
    fn identity_is_well_formed() {
        let id = Bigraph::identity(sig(), Interface::new(2, &["x", "y"]));
        assert!(id.well_formed().is_ok());
        assert!(!id.is_ground());
        assert!(Bigraph::empty(sig()).is_ground());
    }

    #[test]
    fn descendants_follow_prnt() {
        let mut b = Bigraph::new(sig(), Interface::new(1, &[]), Interface::new(1, &[]));
        b.add_node("u", "b", Parent::Root(0))
            .add_node("v", "b", Parent::node("u"))
            .add_site(0, Parent::node("v"));
        let d = b.descendants(&Sym::new("u"));
        assert!(d.contains(&Child::node("v")));
        assert!(d.contains(&Child::Site(0)));
        assert_eq!(d.len(), 2);
    }
}
