use std::collections::BTreeMap;

use crate::bigraph::{Bigraph, Child, Link, Parent, Point};
use crate::mset::{ctor, Atom, Multiset, Namespace, Sym, Term};

use super::RelationalError;

pub fn child_term(c: &Child) -> Term {
    match c {
        Child::Node(v) => ctor::src_n(v.as_str()),
        Child::Site(s) => ctor::src_s(*s),
    }
}

pub fn parent_term(p: &Parent) -> Term {
    match p {
        Parent::Node(v) => ctor::dst_n(v.as_str()),
        Parent::Root(r) => ctor::dst_r(*r),
    }
}

pub fn point_term(p: &Point) -> Term {
    match p {
        Point::Port(v, i) => ctor::src_p(v.as_str(), *i),
        Point::Inner(x) => ctor::src_i(x.as_str()),
    }
}

pub fn link_term(l: &Link) -> Term {
    match l {
        Link::Edge(e) => ctor::dst_e(e.as_str()),
        Link::Outer(y) => ctor::dst_o(y.as_str()),
    }
}

/// `⟦B⟧` under graph id `graph`.
///
/// Per node: `is_node`, `lc`, `prnt`, `has_child_p`. Per edge: `is_e_name`,
/// `has_child_l`. Per outer name: `is_o_name`, `has_child_l`. Per port:
/// `is_port`, `lp`, `link`. Per site: `is_site`, `prnt`. Per inner name:
/// `is_i_name`, `link`. Per root: `is_root`, `has_child_p`.
pub fn encode(b: &Bigraph, graph: &str) -> Result<Multiset, RelationalError> {
    b.well_formed().map_err(RelationalError::IllFormed)?;
    Ok(encode_unchecked(b, graph))
}

/// `encode` without the well-formedness check; counters are computed from
/// whatever `prnt` and `link` contain.
pub fn encode_unchecked(b: &Bigraph, graph: &str) -> Multiset {
    let g = Sym::new(graph);
    let mut m = Multiset::new();
    let mut kids: BTreeMap<Parent, u32> = BTreeMap::new();
    for p in b.prnt().values() {
        *kids.entry(p.clone()).or_insert(0) += 1;
    }
    let mut pts: BTreeMap<Link, u32> = BTreeMap::new();
    for l in b.link().values() {
        *pts.entry(l.clone()).or_insert(0) += 1;
    }
    let count_p = |p: &Parent| Term::nat(kids.get(p).copied().unwrap_or(0));
    let count_l = |l: &Link| Term::nat(pts.get(l).copied().unwrap_or(0));

    for (v, c) in b.nodes() {
        let p = Parent::Node(v.clone());
        m.insert(Atom::new("is_node", vec![ctor::node(v.as_str())], &g));
        m.insert(Atom::new(
            "lc",
            vec![ctor::node(v.as_str()), Term::name(Namespace::Control, c.clone())],
            &g,
        ));
        m.insert(Atom::new("has_child_p", vec![parent_term(&p), count_p(&p)], &g));
        for i in 1..=b.arity(v) {
            m.insert(Atom::new("is_port", vec![ctor::port(v.as_str(), i)], &g));
            m.insert(Atom::new(
                "lp",
                vec![ctor::port(v.as_str(), i), ctor::node(v.as_str())],
                &g,
            ));
        }
    }
    for (c, p) in b.prnt() {
        m.insert(Atom::new("prnt", vec![child_term(c), parent_term(p)], &g));
    }
    for e in b.edges() {
        let l = Link::Edge(e.clone());
        m.insert(Atom::new("is_e_name", vec![Term::name(Namespace::Edge, e.clone())], &g));
        m.insert(Atom::new("has_child_l", vec![link_term(&l), count_l(&l)], &g));
    }
    for y in &b.outer().names {
        let l = Link::Outer(y.clone());
        m.insert(Atom::new("is_o_name", vec![Term::name(Namespace::Outer, y.clone())], &g));
        m.insert(Atom::new("has_child_l", vec![link_term(&l), count_l(&l)], &g));
    }
    for (p, l) in b.link() {
        m.insert(Atom::new("link", vec![point_term(p), link_term(l)], &g));
    }
    for s in 0..b.inner().width {
        m.insert(Atom::new("is_site", vec![Term::nat(s as u32)], &g));
    }
    for x in &b.inner().names {
        m.insert(Atom::new("is_i_name", vec![Term::name(Namespace::Inner, x.clone())], &g));
    }
    for r in 0..b.outer().width {
        let p = Parent::Root(r);
        m.insert(Atom::new("is_root", vec![Term::nat(r as u32)], &g));
        m.insert(Atom::new("has_child_p", vec![parent_term(&p), count_p(&p)], &g));
    }
    m
}

/// Expected size of `⟦B⟧`: `4|V| + 2|E| + 2|Y| + 3|P| + 2m + 2|X| + 2n`.
pub fn encoding_size(b: &Bigraph) -> usize {
    4 * b.nodes().len()
        + 2 * b.edges().len()
        + 2 * b.outer().names.len()
        + 3 * b.port_count()
        + 2 * b.inner().width
        + 2 * b.inner().names.len()
        + 2 * b.outer().width
}
