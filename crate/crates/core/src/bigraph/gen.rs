//! Random well-formed bigraphs for property tests, benches and acceptance runs.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Bigraph, Interface, Link, Parent, Signature};
use crate::mset::Sym;

#[derive(Clone, Debug)]
pub struct GenParams {
    pub max_nodes: usize,
    pub max_roots: usize,
    pub max_sites: usize,
    pub max_edges: usize,
    pub max_outer: usize,
    pub max_inner: usize,
    /// Prefix for node and edge names, so independently generated bigraphs
    /// can be kept disjoint.
    pub prefix: String,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_nodes: 10,
            max_roots: 3,
            max_sites: 3,
            max_edges: 3,
            max_outer: 3,
            max_inner: 2,
            prefix: String::new(),
        }
    }
}

impl GenParams {
    pub fn ground(mut self) -> Self {
        self.max_sites = 0;
        self.max_inner = 0;
        self
    }

    pub fn prefixed(mut self, p: &str) -> Self {
        self.prefix = p.to_string();
        self
    }
}

/// `n` controls `k0..`, arities 0 to 3.
pub fn random_signature<R: Rng>(rng: &mut R, n: usize) -> Signature {
    let mut s = Signature::new();
    for i in 0..n {
        s.add(&format!("k{i}"), rng.random_range(0..=3));
    }
    s
}

pub fn random_interface<R: Rng>(rng: &mut R, max_width: usize, max_names: usize, tag: &str) -> Interface {
    let width = rng.random_range(0..=max_width);
    let names = rng.random_range(0..=max_names);
    let names = (0..names).map(|i| Sym::from(format!("{tag}{i}"))).collect();
    Interface::with_names(width, names)
}

/// Random bigraph with the given faces. A root is added to the outer face if
/// needed to host nodes or sites.
pub fn random_with_faces<R: Rng>(
    rng: &mut R,
    sig: &Arc<Signature>,
    inner: Interface,
    outer: Interface,
    params: &GenParams,
) -> Bigraph {
    let controls: Vec<(Sym, u32)> = sig.controls().map(|(c, a)| (c.clone(), a)).collect();
    let n_nodes = if controls.is_empty() {
        0
    } else {
        rng.random_range(0..=params.max_nodes)
    };
    let mut outer = outer;
    if outer.width == 0 && (n_nodes > 0 || inner.width > 0) {
        outer.width = 1;
    }
    let mut b = Bigraph::new(sig.clone(), inner.clone(), outer.clone());
    let mut places: Vec<Parent> = (0..outer.width).map(Parent::Root).collect();
    let mut names = Vec::with_capacity(n_nodes);
    for i in 0..n_nodes {
        let name = format!("{}v{i}", params.prefix);
        let (c, _) = controls.choose(rng).expect("controls").clone();
        let parent = places.choose(rng).expect("a place").clone();
        b.add_node(&name, c.as_str(), parent);
        places.push(Parent::Node(Sym::new(&name)));
        names.push(name);
    }
    for s in 0..inner.width {
        let parent = places.choose(rng).expect("a place").clone();
        b.add_site(s, parent);
    }
    let n_edges = rng.random_range(0..=params.max_edges);
    let mut targets: Vec<Link> = outer.names.iter().map(|y| Link::Outer(y.clone())).collect();
    for e in 0..n_edges {
        let name = format!("{}e{e}", params.prefix);
        b.add_edge(&name);
        targets.push(Link::Edge(Sym::from(name)));
    }
    let needs_links = names.iter().any(|v| b.arity(v) > 0) || !inner.names.is_empty();
    if targets.is_empty() && needs_links {
        let name = format!("{}e{}", params.prefix, n_edges);
        b.add_edge(&name);
        targets.push(Link::Edge(Sym::from(name)));
    }
    for v in &names {
        for i in 1..=b.arity(v) {
            let t = targets.choose(rng).expect("a link target").clone();
            b.link_port(v, i, t);
        }
    }
    for x in &inner.names {
        let t = targets.choose(rng).expect("a link target").clone();
        b.link_inner(x.as_str(), t);
    }
    b
}

pub fn random_bigraph<R: Rng>(rng: &mut R, sig: &Arc<Signature>, params: &GenParams) -> Bigraph {
    let inner = random_interface(rng, params.max_sites, params.max_inner, "x");
    let outer = random_interface(rng, params.max_roots.max(1), params.max_outer, "y");
    random_with_faces(rng, sig, inner, outer, params)
}

pub fn random_ground<R: Rng>(rng: &mut R, sig: &Arc<Signature>, params: &GenParams) -> Bigraph {
    let p = params.clone().ground();
    random_bigraph(rng, sig, &p)
}

/// `(C, C')` with `C'`'s outer face equal to `C`'s inner face and disjoint
/// node and edge names.
pub fn random_composable<R: Rng>(
    rng: &mut R,
    sig: &Arc<Signature>,
    params: &GenParams,
) -> (Bigraph, Bigraph) {
    let mid = random_interface(rng, params.max_sites, params.max_inner, "m");
    let top = random_interface(rng, params.max_roots.max(1), params.max_outer, "y");
    let bottom = random_interface(rng, params.max_sites, params.max_inner, "x");
    let pc = GenParams {
        prefix: format!("{}c_", params.prefix),
        ..params.clone()
    };
    let pf = GenParams {
        prefix: format!("{}f_", params.prefix),
        ..params.clone()
    };
    let f = random_with_faces(rng, sig, bottom, mid, &pf);
    let c = random_with_faces(rng, sig, f.outer.clone(), top, &pc);
    (c, f)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn generated_bigraphs_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let sig = Arc::new(random_signature(&mut rng, 4));
            let b = random_bigraph(&mut rng, &sig, &GenParams::default());
            b.well_formed().unwrap();
            let (c, f) = random_composable(&mut rng, &sig, &GenParams::default());
            c.well_formed().unwrap();
            f.well_formed().unwrap();
            assert_eq!(c.inner(), f.outer());
        }
    }
}
