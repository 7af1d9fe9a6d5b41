use std::collections::BTreeMap;

use crate::bigraph::{Bigraph, Child, Interface, Parent, Point};
use crate::mset::{Engine, Namespace, Sym};

use super::ReactionError;

/// Records every node and edge name of `b` with the fresh-name supply.
pub fn observe_bigraph(supply: &mut Engine, b: &Bigraph) {
    for v in b.nodes().keys() {
        supply.observe_name(&crate::mset::Name::new(Namespace::Node, v.clone()));
    }
    for e in b.edges() {
        supply.observe_name(&crate::mset::Name::new(Namespace::Edge, e.clone()));
    }
}

/// Nodes under root `r` of a ground bigraph, parents before children.
fn tree(b: &Bigraph, kids: &BTreeMap<Parent, Vec<Sym>>, r: usize) -> Vec<Sym> {
    let mut out = Vec::new();
    let mut stack: Vec<Sym> = kids.get(&Parent::Root(r)).cloned().unwrap_or_default();
    stack.reverse();
    while let Some(v) = stack.pop() {
        let mut below = kids.get(&Parent::Node(v.clone())).cloned().unwrap_or_default();
        below.reverse();
        stack.extend(below);
        out.push(v);
    }
    debug_assert!(out.iter().all(|v| b.nodes().contains_key(v)));
    out
}

/// `η̄`: root `j` of the result holds `d_{η(j)}`. A parameter tree that no
/// reactum site claims is dropped; one claimed once keeps its names; one
/// claimed `c > 1` times is copied `c` times under fresh names. Copies
/// share edges and outer names.
pub fn instantiate_eta(eta: &[usize], param: &Bigraph, supply: &mut Engine) -> Result<Bigraph, ReactionError> {
    if !param.inner().names.is_empty() || param.inner().width != 0 {
        return Err(ReactionError::Shape("parameter must be ground".into()));
    }
    let m = param.outer().width;
    if let Some(i) = eta.iter().find(|i| **i >= m) {
        return Err(ReactionError::Shape(format!(
            "eta refers to parameter root {i} but the parameter has width {m}"
        )));
    }
    observe_bigraph(supply, param);
    let mut kids: BTreeMap<Parent, Vec<Sym>> = BTreeMap::new();
    for (c, p) in param.prnt() {
        match c {
            Child::Node(v) => kids.entry(p.clone()).or_default().push(v.clone()),
            Child::Site(_) => return Err(ReactionError::Shape("parameter has a site".into())),
        }
    }
    let mut out = Bigraph::new(
        param.signature().clone(),
        Interface::unit(),
        Interface::with_names(eta.len(), param.outer().names.clone()),
    );
    out.edges = param.edges().clone();
    for (j, &i) in eta.iter().enumerate() {
        let c = eta.iter().filter(|k| **k == i).count();
        let nodes = tree(param, &kids, i);
        let name: BTreeMap<Sym, Sym> = nodes
            .iter()
            .map(|v| {
                let n = if c == 1 {
                    v.clone()
                } else {
                    supply.fresh_name(Namespace::Node).id
                };
                (v.clone(), n)
            })
            .collect();
        for v in &nodes {
            let nv = name[v].clone();
            out.nodes.insert(nv.clone(), param.nodes()[v].clone());
            let p = match param.parent(&Child::Node(v.clone())).expect("tree node has a parent") {
                Parent::Root(_) => Parent::Root(j),
                Parent::Node(u) => Parent::Node(name[u].clone()),
            };
            out.prnt.insert(Child::Node(nv.clone()), p);
            for k in 1..=param.arity(v) {
                if let Some(l) = param.link().get(&Point::Port(v.clone(), k)) {
                    out.link.insert(Point::Port(nv.clone(), k), l.clone());
                }
            }
        }
    }
    Ok(out)
}
