use super::{Bigraph, BigraphError, Child, Diagnostics, Interface, Link, Parent, Point, Violation};

fn disjoint(g: &Bigraph, f: &Bigraph) -> Result<(), BigraphError> {
    if g.sig != f.sig {
        return Err(BigraphError::SignatureMismatch);
    }
    if let Some(v) = g.nodes.keys().find(|v| f.nodes.contains_key(*v)) {
        return Err(BigraphError::NodeClash(v.clone()));
    }
    if let Some(e) = g.edges.intersection(&f.edges).next() {
        return Err(BigraphError::EdgeClash(e.clone()));
    }
    Ok(())
}

fn missing(c: Child) -> BigraphError {
    BigraphError::IllFormed(Diagnostics {
        violations: vec![Violation::MissingParent(c)],
    })
}

impl Bigraph {
    /// `self ∘ f`, defined when `f`'s outer face equals `self`'s inner face.
    /// Roots of `f` are plugged into the sites of `self`; outer names of `f`
    /// are joined to the inner names of `self`.
    pub fn compose(&self, f: &Bigraph) -> Result<Bigraph, BigraphError> {
        let g = self;
        if g.inner != f.outer {
            return Err(BigraphError::InterfaceMismatch {
                inner: g.inner.clone(),
                outer: f.outer.clone(),
            });
        }
        disjoint(g, f)?;
        let mut out = Bigraph::new(g.sig.clone(), f.inner.clone(), g.outer.clone());
        out.nodes = g.nodes.clone();
        out.nodes.extend(f.nodes.iter().map(|(k, v)| (k.clone(), v.clone())));
        out.edges = g.edges.union(&f.edges).cloned().collect();
        for (c, p) in &g.prnt {
            if let Child::Node(_) = c {
                out.prnt.insert(c.clone(), p.clone());
            }
        }
        for (c, p) in &f.prnt {
            let p = match p {
                Parent::Root(j) => g
                    .prnt
                    .get(&Child::Site(*j))
                    .cloned()
                    .ok_or_else(|| missing(Child::Site(*j)))?,
                n => n.clone(),
            };
            out.prnt.insert(c.clone(), p);
        }
        for (p, l) in &g.link {
            if let Point::Port(..) = p {
                out.link.insert(p.clone(), l.clone());
            }
        }
        for (p, l) in &f.link {
            let l = match l {
                Link::Outer(x) => g
                    .link
                    .get(&Point::Inner(x.clone()))
                    .cloned()
                    .ok_or_else(|| {
                        BigraphError::IllFormed(Diagnostics {
                            violations: vec![Violation::UnlinkedInnerName(x.clone())],
                        })
                    })?,
                e => e.clone(),
            };
            out.link.insert(p.clone(), l);
        }
        Ok(out)
    }

    /// `self ⊗ f`. `f` keeps its site and root indices; those of `self` are
    /// shifted past `f`'s widths.
    pub fn juxtapose(&self, f: &Bigraph) -> Result<Bigraph, BigraphError> {
        let g = self;
        disjoint(g, f)?;
        if let Some(x) = g.inner.names.intersection(&f.inner.names).next() {
            return Err(BigraphError::NameClash(x.clone()));
        }
        if let Some(y) = g.outer.names.intersection(&f.outer.names).next() {
            return Err(BigraphError::NameClash(y.clone()));
        }
        let (m, n) = (f.inner.width, f.outer.width);
        let inner = Interface::with_names(
            m + g.inner.width,
            f.inner.names.union(&g.inner.names).cloned().collect(),
        );
        let outer = Interface::with_names(
            n + g.outer.width,
            f.outer.names.union(&g.outer.names).cloned().collect(),
        );
        let mut out = Bigraph::new(g.sig.clone(), inner, outer);
        out.nodes = f.nodes.clone();
        out.nodes.extend(g.nodes.iter().map(|(k, v)| (k.clone(), v.clone())));
        out.edges = g.edges.union(&f.edges).cloned().collect();
        out.prnt = f.prnt.clone();
        for (c, p) in &g.prnt {
            let c = match c {
                Child::Site(s) => Child::Site(s + m),
                x => x.clone(),
            };
            let p = match p {
                Parent::Root(r) => Parent::Root(r + n),
                x => x.clone(),
            };
            out.prnt.insert(c, p);
        }
        out.link = f.link.clone();
        out.link.extend(g.link.iter().map(|(k, v)| (k.clone(), v.clone())));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::bigraph::Signature;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::from_pairs(&[("k", 1), ("m", 0)]))
    }

    #[test]
    fn compose_plugs_roots_into_sites() {
        let mut g = Bigraph::new(sig(), Interface::new(1, &["x"]), Interface::new(1, &["y"]));
        g.add_node("u", "k", Parent::Root(0))
            .add_site(0, Parent::node("u"))
            .link_port("u", 1, Link::outer("y"))
            .link_inner("x", Link::outer("y"));
        let mut f = Bigraph::new(sig(), Interface::unit(), Interface::new(1, &["x"]));
        f.add_node("v", "k", Parent::Root(0))
            .link_port("v", 1, Link::outer("x"));
        let h = g.compose(&f).unwrap();
        assert!(h.well_formed().is_ok());
        assert_eq!(h.parent(&Child::node("v")), Some(&Parent::node("u")));
        assert_eq!(
            h.link().get(&Point::Port("v".into(), 1)),
            Some(&Link::outer("y"))
        );
        assert!(h.is_ground());
    }

    #[test]
    fn compose_checks_interfaces() {
        let g = Bigraph::identity(sig(), Interface::new(1, &[]));
        let f = Bigraph::identity(sig(), Interface::new(2, &[]));
        assert!(matches!(
            g.compose(&f),
            Err(BigraphError::InterfaceMismatch { .. })
        ));
    }

    #[test]
    fn juxtapose_shifts_left_operand() {
        let mut g = Bigraph::new(sig(), Interface::unit(), Interface::new(1, &[]));
        g.add_node("a", "m", Parent::Root(0));
        let mut f = Bigraph::new(sig(), Interface::unit(), Interface::new(1, &[]));
        f.add_node("b", "m", Parent::Root(0));
        let h = g.juxtapose(&f).unwrap();
        assert_eq!(h.outer().width, 2);
        assert_eq!(h.parent(&Child::node("b")), Some(&Parent::Root(0)));
        assert_eq!(h.parent(&Child::node("a")), Some(&Parent::Root(1)));
        assert!(matches!(g.juxtapose(&g), Err(BigraphError::NodeClash(_))));
    }
}
