use std::fmt::Write;

use super::{Bigraph, Child, Link, Parent, Point};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn parent_id(p: &Parent) -> String {
    match p {
        Parent::Node(v) => quote(&format!("n:{v}")),
        Parent::Root(r) => quote(&format!("root:{r}")),
    }
}

fn child_id(c: &Child) -> String {
    match c {
        Child::Node(v) => quote(&format!("n:{v}")),
        Child::Site(s) => quote(&format!("site:{s}")),
    }
}

fn link_id(l: &Link) -> String {
    match l {
        Link::Edge(e) => quote(&format!("e:{e}")),
        Link::Outer(y) => quote(&format!("o:{y}")),
    }
}

/// Graphviz rendering: the place graph as solid parent-to-child arrows, the
/// link graph as dashed lines from ports and inner names to edges and names.
pub fn to_dot(b: &Bigraph) -> String {
    let mut s = String::from("digraph bigraph {\n  rankdir=TB;\n");
    for r in 0..b.outer.width {
        let _ = writeln!(s, "  {} [shape=box, label=\"{r}\"];", parent_id(&Parent::Root(r)));
    }
    for (v, c) in &b.nodes {
        let _ = writeln!(
            s,
            "  {} [shape=ellipse, label={}];",
            child_id(&Child::Node(v.clone())),
            quote(&format!("{v} : {c}"))
        );
    }
    for i in 0..b.inner.width {
        let _ = writeln!(
            s,
            "  {} [shape=box, style=dashed, label=\"site {i}\"];",
            child_id(&Child::Site(i))
        );
    }
    for y in &b.outer.names {
        let _ = writeln!(s, "  {} [shape=plaintext, label={}];", link_id(&Link::Outer(y.clone())), quote(y.as_str()));
    }
    for x in &b.inner.names {
        let _ = writeln!(
            s,
            "  {} [shape=plaintext, fontcolor=gray40, label={}];",
            quote(&format!("i:{x}")),
            quote(x.as_str())
        );
    }
    for e in &b.edges {
        let _ = writeln!(s, "  {} [shape=point, label=\"\", xlabel={}];", link_id(&Link::Edge(e.clone())), quote(e.as_str()));
    }
    for (c, p) in &b.prnt {
        let _ = writeln!(s, "  {} -> {};", parent_id(p), child_id(c));
    }
    for (pt, l) in &b.link {
        let (from, label) = match pt {
            Point::Port(v, i) => (child_id(&Child::Node(v.clone())), format!(", taillabel=\"{i}\"")),
            Point::Inner(x) => (quote(&format!("i:{x}")), String::new()),
        };
        let _ = writeln!(
            s,
            "  {from} -> {} [style=dashed, arrowhead=none, constraint=false{label}];",
            link_id(l)
        );
    }
    s.push_str("}\n");
    s
}
