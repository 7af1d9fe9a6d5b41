use std::collections::BTreeSet;
use std::sync::Arc;

use crate::bigraph::{Bigraph, Child, Interface, Link, Parent, Point, Signature};
use crate::mset::{ctor, Multiset, Namespace, Sym, Term};

use super::validity::check_valid;
use super::RelationalError;

fn name_of(t: &Term, ns: Namespace) -> Option<Sym> {
    match t {
        Term::Name(n) if n.ns == ns => Some(n.id.clone()),
        _ => None,
    }
}

fn index_of(t: &Term) -> Option<usize> {
    t.as_nat().map(|n| n.0 as usize)
}

fn bad(what: &str, t: &Term) -> RelationalError {
    RelationalError::Malformed(format!(
        "{what}: {}",
        crate::mset::text::term_to_string(t, crate::mset::text::Sort::Any)
    ))
}

fn child_of(t: &Term) -> Result<Child, RelationalError> {
    if let Some(v) = t.unwrap_ctor(ctor::SRC_N).and_then(|x| name_of(x, Namespace::Node)) {
        return Ok(Child::Node(v));
    }
    if let Some(s) = t.unwrap_ctor(ctor::SRC_S).and_then(index_of) {
        return Ok(Child::Site(s));
    }
    Err(bad("not a place-graph child", t))
}

fn parent_of(t: &Term) -> Result<Parent, RelationalError> {
    if let Some(v) = t.unwrap_ctor(ctor::DST_N).and_then(|x| name_of(x, Namespace::Node)) {
        return Ok(Parent::Node(v));
    }
    if let Some(r) = t.unwrap_ctor(ctor::DST_R).and_then(index_of) {
        return Ok(Parent::Root(r));
    }
    Err(bad("not a place-graph parent", t))
}

fn port_of(t: &Term) -> Result<(Sym, u32), RelationalError> {
    match t {
        Term::App(f, args) if f.as_str() == ctor::PORT && args.len() == 2 => {
            match (name_of(&args[0], Namespace::Node), args[1].as_nat()) {
                (Some(v), Some(i)) => Ok((v, i.0)),
                _ => Err(bad("not a port", t)),
            }
        }
        _ => Err(bad("not a port", t)),
    }
}

fn point_of(t: &Term) -> Result<Point, RelationalError> {
    if let Some(p) = t.unwrap_ctor(ctor::SRC_P) {
        let (v, i) = port_of(p)?;
        return Ok(Point::Port(v, i));
    }
    if let Some(x) = t.unwrap_ctor(ctor::SRC_I).and_then(|x| name_of(x, Namespace::Inner)) {
        return Ok(Point::Inner(x));
    }
    Err(bad("not a link-graph point", t))
}

fn link_of(t: &Term) -> Result<Link, RelationalError> {
    if let Some(e) = t.unwrap_ctor(ctor::DST_E).and_then(|x| name_of(x, Namespace::Edge)) {
        return Ok(Link::Edge(e));
    }
    if let Some(y) = t.unwrap_ctor(ctor::DST_O).and_then(|x| name_of(x, Namespace::Outer)) {
        return Ok(Link::Outer(y));
    }
    Err(bad("not a link-graph target", t))
}

fn contiguous(idx: &BTreeSet<usize>, what: &str) -> Result<usize, RelationalError> {
    for (k, i) in idx.iter().enumerate() {
        if *i != k {
            return Err(RelationalError::Malformed(format!(
                "{what} indices are not 0..{}",
                idx.len()
            )));
        }
    }
    Ok(idx.len())
}

/// `⟦S⟧★`: reads a bigraph back from a valid multiset. Sites give the inner
/// width and roots the outer width. ∅ interprets as ε.
pub fn interpret(s: &Multiset, sig: &Arc<Signature>) -> Result<Bigraph, RelationalError> {
    let report = check_valid(s, sig);
    if !report.valid {
        return Err(RelationalError::Invalid(report.reasons));
    }
    let graphs = s.graphs();
    if graphs.len() > 1 {
        return Err(RelationalError::Malformed(format!(
            "multiset mixes {} graph ids",
            graphs.len()
        )));
    }
    let first = |a: &crate::mset::Atom| a.args.first().cloned().unwrap_or(Term::nat(0));
    let sites: BTreeSet<usize> = s
        .with_pred("is_site")
        .map(|(a, _)| index_of(&first(a)).ok_or_else(|| bad("site", &first(a))))
        .collect::<Result<_, _>>()?;
    let roots: BTreeSet<usize> = s
        .with_pred("is_root")
        .map(|(a, _)| index_of(&first(a)).ok_or_else(|| bad("root", &first(a))))
        .collect::<Result<_, _>>()?;
    let m = contiguous(&sites, "site")?;
    let n = contiguous(&roots, "root")?;
    let names = |pred: &str, ns: Namespace| -> Result<BTreeSet<Sym>, RelationalError> {
        s.with_pred(pred)
            .map(|(a, _)| name_of(&first(a), ns).ok_or_else(|| bad(pred, &first(a))))
            .collect()
    };
    let inner = Interface::with_names(m, names("is_i_name", Namespace::Inner)?);
    let outer = Interface::with_names(n, names("is_o_name", Namespace::Outer)?);
    let mut b = Bigraph::new(sig.clone(), inner, outer);
    for e in names("is_e_name", Namespace::Edge)? {
        b.edges.insert(e);
    }
    for (a, _) in s.with_pred("lc") {
        let v = name_of(&a.args[0], Namespace::Node).ok_or_else(|| bad("lc", &a.args[0]))?;
        let k = name_of(&a.args[1], Namespace::Control).ok_or_else(|| bad("lc", &a.args[1]))?;
        b.nodes.insert(v, k);
    }
    for (a, _) in s.with_pred("prnt") {
        b.prnt.insert(child_of(&a.args[0])?, parent_of(&a.args[1])?);
    }
    for (a, _) in s.with_pred("lp") {
        let (v, i) = port_of(&a.args[0])?;
        let owner = name_of(&a.args[1], Namespace::Node).ok_or_else(|| bad("lp", &a.args[1]))?;
        if owner != v || i == 0 || i > b.arity(v.as_str()) {
            return Err(RelationalError::InconsistentPort { node: v, index: i });
        }
    }
    for (a, _) in s.with_pred("link") {
        b.link.insert(point_of(&a.args[0])?, link_of(&a.args[1])?);
    }
    b.well_formed().map_err(RelationalError::IllFormed)?;
    Ok(b)
}
