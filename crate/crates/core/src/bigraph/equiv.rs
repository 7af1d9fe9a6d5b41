use std::collections::{BTreeMap, BTreeSet};

use super::{Bigraph, Child, Link, Parent, Point};
use crate::mset::Sym;

/// Bijections `ρ_V` and `ρ_E` witnessing `B ≎ G`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Witness {
    pub nodes: BTreeMap<Sym, Sym>,
    pub edges: BTreeMap<Sym, Sym>,
}

impl Witness {
    pub fn inverse(&self) -> Witness {
        Witness {
            nodes: self.nodes.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            edges: self.edges.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Witness) -> Witness {
        Witness {
            nodes: self
                .nodes
                .iter()
                .filter_map(|(a, b)| other.nodes.get(b).map(|c| (a.clone(), c.clone())))
                .collect(),
            edges: self
                .edges
                .iter()
                .filter_map(|(a, b)| other.edges.get(b).map(|c| (a.clone(), c.clone())))
                .collect(),
        }
    }

    /// Whether this witness respects controls, `prnt` and `link` from `b` to `g`.
    pub fn verify(&self, b: &Bigraph, g: &Bigraph) -> bool {
        if b.inner != g.inner || b.outer != g.outer {
            return false;
        }
        if self.nodes.len() != b.nodes.len()
            || self.nodes.len() != g.nodes.len()
            || self.edges.len() != b.edges.len()
            || self.edges.len() != g.edges.len()
        {
            return false;
        }
        let img_v: BTreeSet<&Sym> = self.nodes.values().collect();
        let img_e: BTreeSet<&Sym> = self.edges.values().collect();
        if img_v.len() != g.nodes.len() || img_e.len() != g.edges.len() {
            return false;
        }
        for (v, w) in &self.nodes {
            if g.nodes.get(w).is_none_or(|c| b.nodes.get(v) != Some(c)) {
                return false;
            }
        }
        let mc = |c: &Child| match c {
            Child::Node(v) => self.nodes.get(v).map(|w| Child::Node(w.clone())),
            s => Some(s.clone()),
        };
        let mp = |p: &Parent| match p {
            Parent::Node(v) => self.nodes.get(v).map(|w| Parent::Node(w.clone())),
            r => Some(r.clone()),
        };
        if b.prnt.len() != g.prnt.len() {
            return false;
        }
        for (c, p) in &b.prnt {
            match (mc(c), mp(p)) {
                (Some(c2), Some(p2)) if g.prnt.get(&c2) == Some(&p2) => {}
                _ => return false,
            }
        }
        let mpt = |p: &Point| match p {
            Point::Port(v, i) => self.nodes.get(v).map(|w| Point::Port(w.clone(), *i)),
            x => Some(x.clone()),
        };
        let ml = |l: &Link| match l {
            Link::Edge(e) => self.edges.get(e).map(|f| Link::Edge(f.clone())),
            y => Some(y.clone()),
        };
        if b.link.len() != g.link.len() {
            return false;
        }
        for (p, l) in &b.link {
            match (mpt(p), ml(l)) {
                (Some(p2), Some(l2)) if g.link.get(&p2) == Some(&l2) => {}
                _ => return false,
            }
        }
        true
    }
}

struct Shapes {
    node: BTreeMap<Sym, String>,
}

fn shapes(b: &Bigraph) -> Shapes {
    let kids = b.children_map();
    let points = b.points_map();
    let degree = |l: &Link| points.get(l).map(|v| v.len()).unwrap_or(0);
    let port_desc = |v: &Sym| {
        let mut s = String::new();
        for i in 1..=b.arity(v) {
            match b.link.get(&Point::Port(v.clone(), i)) {
                Some(Link::Outer(y)) => s.push_str(&format!("o:{y};")),
                Some(l @ Link::Edge(_)) => s.push_str(&format!("e{};", degree(l))),
                None => s.push_str("-;"),
            }
        }
        s
    };
    let mut memo: BTreeMap<Sym, String> = BTreeMap::new();
    fn go(
        v: &Sym,
        b: &Bigraph,
        kids: &BTreeMap<Parent, Vec<Child>>,
        port_desc: &dyn Fn(&Sym) -> String,
        memo: &mut BTreeMap<Sym, String>,
        visiting: &mut BTreeSet<Sym>,
    ) -> String {
        if let Some(s) = memo.get(v) {
            return s.clone();
        }
        if !visiting.insert(v.clone()) {
            return "cycle".into();
        }
        let mut parts: Vec<String> = kids
            .get(&Parent::Node(v.clone()))
            .into_iter()
            .flatten()
            .map(|c| match c {
                Child::Node(u) => go(u, b, kids, port_desc, memo, visiting),
                Child::Site(s) => format!("#{s}"),
            })
            .collect();
        parts.sort();
        let ctrl = b.nodes.get(v).map(|c| c.as_str()).unwrap_or("?");
        let s = format!("{ctrl}({})[{}]", port_desc(v), parts.join(","));
        visiting.remove(v);
        memo.insert(v.clone(), s.clone());
        s
    }
    let mut visiting = BTreeSet::new();
    for v in b.nodes.keys() {
        go(v, b, &kids, &port_desc, &mut memo, &mut visiting);
    }
    Shapes { node: memo }
}

/// Canonical description invariant under renaming of nodes and edges.
/// Lean-equivalent bigraphs have equal keys; the converse need not hold.
pub fn shape_key(b: &Bigraph) -> String {
    let sh = shapes(b);
    let kids = b.children_map();
    let points = b.points_map();
    let mut s = format!("{}->{}|", b.inner, b.outer);
    for r in 0..b.outer.width {
        let mut parts: Vec<String> = kids
            .get(&Parent::Root(r))
            .into_iter()
            .flatten()
            .map(|c| match c {
                Child::Node(u) => sh.node.get(u).cloned().unwrap_or_default(),
                Child::Site(k) => format!("#{k}"),
            })
            .collect();
        parts.sort();
        s.push_str(&format!("r{r}[{}]", parts.join(",")));
    }
    for x in &b.inner.names {
        match b.link.get(&Point::Inner(x.clone())) {
            Some(Link::Outer(y)) => s.push_str(&format!("|{x}>o:{y}")),
            Some(l) => s.push_str(&format!(
                "|{x}>e{}",
                points.get(l).map(|v| v.len()).unwrap_or(0)
            )),
            None => s.push_str(&format!("|{x}>-")),
        }
    }
    s.push_str(&format!("|E{}", b.edges.len()));
    s
}

struct Search<'a> {
    b: &'a Bigraph,
    g: &'a Bigraph,
    sb: Shapes,
    sg: Shapes,
    g_kids: BTreeMap<Parent, Vec<Child>>,
    order: Vec<Sym>,
    rho: BTreeMap<Sym, Sym>,
    used: BTreeSet<Sym>,
    rho_e: BTreeMap<Sym, Sym>,
    used_e: BTreeSet<Sym>,
    log: Vec<Sym>,
}

impl Search<'_> {
    fn link_ok(&mut self, lb: Option<&Link>, lg: Option<&Link>) -> bool {
        match (lb, lg) {
            (Some(Link::Outer(y)), Some(Link::Outer(z))) => y == z,
            (Some(Link::Edge(e)), Some(Link::Edge(f))) => match self.rho_e.get(e) {
                Some(f2) => f2 == f,
                None => {
                    if self.used_e.contains(f) {
                        return false;
                    }
                    self.rho_e.insert(e.clone(), f.clone());
                    self.used_e.insert(f.clone());
                    self.log.push(e.clone());
                    true
                }
            },
            (None, None) => true,
            _ => false,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let e = self.log.pop().expect("non-empty log");
            if let Some(f) = self.rho_e.remove(&e) {
                self.used_e.remove(&f);
            }
        }
    }

    fn ports_ok(&mut self, v: &Sym, w: &Sym) -> bool {
        for i in 1..=self.b.arity(v) {
            let lb = self.b.link.get(&Point::Port(v.clone(), i));
            let lg = self.g.link.get(&Point::Port(w.clone(), i));
            if !self.link_ok(lb, lg) {
                return false;
            }
        }
        true
    }

    fn candidates(&self, v: &Sym) -> Vec<Sym> {
        let want = self.sb.node.get(v);
        let parent = self.b.prnt.get(&Child::Node(v.clone()));
        let pool: Vec<Sym> = match parent {
            Some(Parent::Root(r)) => self
                .g_kids
                .get(&Parent::Root(*r))
                .into_iter()
                .flatten()
                .filter_map(|c| match c {
                    Child::Node(w) => Some(w.clone()),
                    _ => None,
                })
                .collect(),
            Some(Parent::Node(u)) if self.rho.contains_key(u) => self
                .g_kids
                .get(&Parent::Node(self.rho[u].clone()))
                .into_iter()
                .flatten()
                .filter_map(|c| match c {
                    Child::Node(w) => Some(w.clone()),
                    _ => None,
                })
                .collect(),
            _ => self.g.nodes.keys().cloned().collect(),
        };
        pool.into_iter()
            .filter(|w| !self.used.contains(w) && self.sg.node.get(w) == want)
            .collect()
    }

    fn assign(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return self.finish();
        }
        let v = self.order[i].clone();
        for w in self.candidates(&v) {
            let mark = self.log.len();
            if self.ports_ok(&v, &w) {
                self.rho.insert(v.clone(), w.clone());
                self.used.insert(w.clone());
                if self.assign(i + 1) {
                    return true;
                }
                self.rho.remove(&v);
                self.used.remove(&w);
            }
            self.undo_to(mark);
        }
        false
    }

    fn finish(&mut self) -> bool {
        let mark = self.log.len();
        let names: Vec<Sym> = self.b.inner.names.iter().cloned().collect();
        for x in names {
            let lb = self.b.link.get(&Point::Inner(x.clone()));
            let lg = self.g.link.get(&Point::Inner(x.clone()));
            if !self.link_ok(lb, lg) {
                self.undo_to(mark);
                return false;
            }
        }
        let idle_b: Vec<&Sym> = self
            .b
            .edges
            .iter()
            .filter(|e| !self.rho_e.contains_key(*e))
            .collect();
        let idle_g: Vec<&Sym> = self
            .g
            .edges
            .iter()
            .filter(|f| !self.used_e.contains(*f))
            .collect();
        if idle_b.len() != idle_g.len() {
            self.undo_to(mark);
            return false;
        }
        let pairs: Vec<(Sym, Sym)> = idle_b
            .into_iter()
            .zip(idle_g)
            .map(|(e, f)| (e.clone(), f.clone()))
            .collect();
        for (e, f) in pairs {
            self.rho_e.insert(e.clone(), f.clone());
            self.used_e.insert(f);
            self.log.push(e);
        }
        let w = Witness {
            nodes: self.rho.clone(),
            edges: self.rho_e.clone(),
        };
        if w.verify(self.b, self.g) {
            true
        } else {
            self.undo_to(mark);
            false
        }
    }
}

/// Searches for bijections on nodes and edges that fix both interfaces and
/// commute with controls, `prnt` and `link`.
pub fn lean_equiv(b: &Bigraph, g: &Bigraph) -> Option<Witness> {
    if b.inner != g.inner
        || b.outer != g.outer
        || b.nodes.len() != g.nodes.len()
        || b.edges.len() != g.edges.len()
        || b.prnt.len() != g.prnt.len()
        || b.link.len() != g.link.len()
        || b.control_counts() != g.control_counts()
    {
        return None;
    }
    let sb = shapes(b);
    let sg = shapes(g);
    let mut hb: Vec<&String> = sb.node.values().collect();
    let mut hg: Vec<&String> = sg.node.values().collect();
    hb.sort();
    hg.sort();
    if hb != hg {
        return None;
    }
    let kids = b.children_map();
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    let mut queue: std::collections::VecDeque<Parent> = (0..b.outer.width).map(Parent::Root).collect();
    while let Some(p) = queue.pop_front() {
        for c in kids.get(&p).into_iter().flatten() {
            if let Child::Node(v) = c {
                if seen.insert(v.clone()) {
                    order.push(v.clone());
                    queue.push_back(Parent::Node(v.clone()));
                }
            }
        }
    }
    for v in b.nodes.keys() {
        if seen.insert(v.clone()) {
            order.push(v.clone());
        }
    }
    let mut s = Search {
        b,
        g,
        sb,
        sg,
        g_kids: g.children_map(),
        order,
        rho: BTreeMap::new(),
        used: BTreeSet::new(),
        rho_e: BTreeMap::new(),
        used_e: BTreeSet::new(),
        log: Vec::new(),
    };
    if s.assign(0) {
        Some(Witness {
            nodes: s.rho,
            edges: s.rho_e,
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bigraph::{Interface, Signature};

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::from_pairs(&[("k", 1), ("m", 0)]))
    }

    fn pair(names: [&str; 3], edge: &str) -> Bigraph {
        let mut b = Bigraph::new(sig(), Interface::unit(), Interface::new(1, &["y"]));
        b.add_node(names[0], "m", Parent::Root(0))
            .add_node(names[1], "k", Parent::node(names[0]))
            .add_node(names[2], "k", Parent::node(names[0]))
            .add_edge(edge)
            .link_port(names[1], 1, Link::edge(edge))
            .link_port(names[2], 1, Link::edge(edge));
        b
    }

    #[test]
    fn renamed_copies_are_equivalent() {
        let a = pair(["a", "b", "c"], "e");
        let b = pair(["x", "y", "z"], "f");
        let w = lean_equiv(&a, &b).expect("equivalent");
        assert_eq!(w.nodes[&Sym::new("a")], Sym::new("x"));
        assert!(w.verify(&a, &b));
        assert!(w.inverse().verify(&b, &a));
        assert_eq!(shape_key(&a), shape_key(&b));
    }

    #[test]
    fn link_structure_matters() {
        let a = pair(["a", "b", "c"], "e");
        let mut b = a.clone();
        b.link_port("c", 1, Link::outer("y"));
        assert!(lean_equiv(&a, &b).is_none());
    }

    #[test]
    fn idle_edges_count() {
        let a = pair(["a", "b", "c"], "e");
        let mut b = a.clone();
        b.add_edge("idle");
        assert!(lean_equiv(&a, &b).is_none());
        let mut c = a.clone();
        c.add_edge("spare");
        b = b.with_prefix("p_");
        assert!(lean_equiv(&c, &b).is_some());
    }
}
