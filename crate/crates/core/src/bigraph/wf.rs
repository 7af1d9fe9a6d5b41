use std::collections::BTreeMap;
use std::fmt;

use super::{Bigraph, Child, Link, Parent, Point};
use crate::mset::Sym;

/// One reason a bigraph is not well formed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    UnknownControl { node: Sym, control: Sym },
    MissingParent(Child),
    SiteOutOfRange(usize),
    UnknownChild(Sym),
    UnknownParentNode { child: Child, parent: Sym },
    RootOutOfRange { child: Child, root: usize },
    Cycle(Sym),
    UnlinkedPort { node: Sym, index: u32 },
    InvalidPort { node: Sym, index: u32 },
    UnlinkedInnerName(Sym),
    UnknownInnerName(Sym),
    UnknownEdge { point: Point, edge: Sym },
    UnknownOuterName { point: Point, name: Sym },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownControl { node, control } => {
                write!(f, "node {node} has undeclared control {control}")
            }
            Violation::MissingParent(c) => write!(f, "{} has no parent", child(c)),
            Violation::SiteOutOfRange(s) => write!(f, "site {s} is outside the inner width"),
            Violation::UnknownChild(v) => write!(f, "prnt mentions unknown node {v}"),
            Violation::UnknownParentNode { child: c, parent } => {
                write!(f, "{} has unknown parent node {parent}", child(c))
            }
            Violation::RootOutOfRange { child: c, root } => {
                write!(f, "{} sits under root {root}, outside the outer width", child(c))
            }
            Violation::Cycle(v) => write!(f, "node {v} is its own ancestor"),
            Violation::UnlinkedPort { node, index } => write!(f, "port ({node},{index}) is not linked"),
            Violation::InvalidPort { node, index } => {
                write!(f, "link mentions port ({node},{index}), which does not exist")
            }
            Violation::UnlinkedInnerName(x) => write!(f, "inner name {x} is not linked"),
            Violation::UnknownInnerName(x) => {
                write!(f, "link mentions inner name {x}, which is not in the inner face")
            }
            Violation::UnknownEdge { point, edge } => {
                write!(f, "{} links to unknown edge {edge}", pt(point))
            }
            Violation::UnknownOuterName { point, name } => {
                write!(f, "{} links to {name}, which is not in the outer face", pt(point))
            }
        }
    }
}

fn child(c: &Child) -> String {
    match c {
        Child::Node(v) => format!("node {v}"),
        Child::Site(s) => format!("site {s}"),
    }
}

fn pt(p: &Point) -> String {
    match p {
        Point::Port(v, i) => format!("port ({v},{i})"),
        Point::Inner(x) => format!("inner name {x}"),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Diagnostics {
    pub violations: Vec<Violation>,
}

impl Diagnostics {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Bigraph {
    /// Checks the structural conditions: total, acyclic `prnt`; total `link` onto
    /// existing edges and outer names; controls drawn from the signature.
    pub fn well_formed(&self) -> Result<(), Diagnostics> {
        let mut v = Vec::new();
        for (n, c) in &self.nodes {
            if self.sig.arity(c.as_str()).is_none() {
                v.push(Violation::UnknownControl {
                    node: n.clone(),
                    control: c.clone(),
                });
            }
        }
        for n in self.nodes.keys() {
            let c = Child::Node(n.clone());
            if !self.prnt.contains_key(&c) {
                v.push(Violation::MissingParent(c));
            }
        }
        for s in 0..self.inner.width {
            let c = Child::Site(s);
            if !self.prnt.contains_key(&c) {
                v.push(Violation::MissingParent(c));
            }
        }
        for (c, p) in &self.prnt {
            match c {
                Child::Node(n) if !self.nodes.contains_key(n) => {
                    v.push(Violation::UnknownChild(n.clone()))
                }
                Child::Site(s) if *s >= self.inner.width => v.push(Violation::SiteOutOfRange(*s)),
                _ => {}
            }
            match p {
                Parent::Node(n) if !self.nodes.contains_key(n) => {
                    v.push(Violation::UnknownParentNode {
                        child: c.clone(),
                        parent: n.clone(),
                    })
                }
                Parent::Root(r) if *r >= self.outer.width => v.push(Violation::RootOutOfRange {
                    child: c.clone(),
                    root: *r,
                }),
                _ => {}
            }
        }
        v.extend(self.cycles().into_iter().map(Violation::Cycle));
        for n in self.nodes.keys() {
            for i in 1..=self.arity(n) {
                if !self.link.contains_key(&Point::Port(n.clone(), i)) {
                    v.push(Violation::UnlinkedPort {
                        node: n.clone(),
                        index: i,
                    });
                }
            }
        }
        for x in &self.inner.names {
            if !self.link.contains_key(&Point::Inner(x.clone())) {
                v.push(Violation::UnlinkedInnerName(x.clone()));
            }
        }
        for (p, l) in &self.link {
            match p {
                Point::Port(n, i) => {
                    if !self.nodes.contains_key(n) || *i == 0 || *i > self.arity(n) {
                        v.push(Violation::InvalidPort {
                            node: n.clone(),
                            index: *i,
                        });
                    }
                }
                Point::Inner(x) if !self.inner.names.contains(x) => {
                    v.push(Violation::UnknownInnerName(x.clone()))
                }
                _ => {}
            }
            match l {
                Link::Edge(e) if !self.edges.contains(e) => v.push(Violation::UnknownEdge {
                    point: p.clone(),
                    edge: e.clone(),
                }),
                Link::Outer(y) if !self.outer.names.contains(y) => {
                    v.push(Violation::UnknownOuterName {
                        point: p.clone(),
                        name: y.clone(),
                    })
                }
                _ => {}
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(Diagnostics { violations: v })
        }
    }

    /// Nodes lying on a `prnt` cycle, each reported once.
    fn cycles(&self) -> Vec<Sym> {
        // 0 = unvisited, 1 = on the current path, 2 = done
        let mut state: BTreeMap<&Sym, u8> = BTreeMap::new();
        let mut out = Vec::new();
        for start in self.nodes.keys() {
            if state.get(start).copied().unwrap_or(0) != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = Some(start);
            while let Some(n) = cur {
                match state.get(n).copied().unwrap_or(0) {
                    0 => {
                        state.insert(n, 1);
                        path.push(n);
                        cur = match self.prnt.get(&Child::Node(n.clone())) {
                            Some(Parent::Node(p)) => self.nodes.get_key_value(p).map(|(k, _)| k),
                            _ => None,
                        };
                    }
                    1 => {
                        out.push(n.clone());
                        break;
                    }
                    _ => break,
                }
            }
            for n in path {
                state.insert(n, 2);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bigraph::{Interface, Signature};

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::from_pairs(&[("k", 1)]))
    }

    #[test]
    fn reports_cycle_and_dangling_port() {
        let mut b = Bigraph::new(sig(), Interface::unit(), Interface::new(1, &[]));
        b.add_node("u", "k", Parent::node("v"))
            .add_node("v", "k", Parent::node("u"));
        let d = b.well_formed().unwrap_err();
        assert!(d.violations.iter().any(|x| matches!(x, Violation::Cycle(_))));
        assert!(d
            .violations
            .iter()
            .any(|x| matches!(x, Violation::UnlinkedPort { .. })));
    }

    #[test]
    fn accepts_simple_agent() {
        let mut b = Bigraph::new(sig(), Interface::unit(), Interface::new(1, &["x"]));
        b.add_node("u", "k", Parent::Root(0))
            .link_port("u", 1, crate::bigraph::Link::outer("x"));
        assert!(b.well_formed().is_ok());
    }
}
