use std::collections::{BTreeMap, BTreeSet};

use crate::bigraph::Bigraph;
use crate::mset::{ctor, Atom, Multiset, Sym, Term};

use super::encode::encode;
use super::RelationalError;

/// `⟦C⟧` split by which interface each atom depends on.
///
/// `out` depends on the outer face only, `inn` on the inner face only,
/// `through` on both (a site directly under a root, an inner name linked to
/// an outer name, and the counters of such places and names), `core` on
/// neither. The four parts add up to `⟦C⟧`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Partition {
    pub out: Multiset,
    pub core: Multiset,
    pub inn: Multiset,
    pub through: Multiset,
}

impl Partition {
    pub fn union(&self) -> Multiset {
        self.out
            .union(&self.core)
            .union(&self.inn)
            .union(&self.through)
    }

    /// Atoms of this bigraph that survive unchanged when it is the outer
    /// operand of a composition.
    pub fn as_upper(&self) -> Multiset {
        self.out.union(&self.core)
    }

    /// Atoms that survive unchanged when it is the inner operand.
    pub fn as_lower(&self) -> Multiset {
        self.core.union(&self.inn)
    }
}

fn is_ctor(t: &Term, f: &str) -> bool {
    t.unwrap_ctor(f).is_some()
}

pub fn partition(c: &Bigraph, graph: &str) -> Result<Partition, RelationalError> {
    let enc = encode(c, graph)?;
    let mut site_parents = BTreeSet::new();
    let mut inner_targets = BTreeSet::new();
    for (a, _) in enc.with_pred("prnt") {
        if is_ctor(&a.args[0], ctor::SRC_S) {
            site_parents.insert(a.args[1].clone());
        }
    }
    for (a, _) in enc.with_pred("link") {
        if is_ctor(&a.args[0], ctor::SRC_I) {
            inner_targets.insert(a.args[1].clone());
        }
    }
    let mut p = Partition::default();
    for a in enc.iter() {
        let x = &a.args;
        let part = match a.pred.as_str() {
            "is_site" | "is_i_name" => &mut p.inn,
            "is_root" | "is_o_name" => &mut p.out,
            "prnt" => {
                let from_site = is_ctor(&x[0], ctor::SRC_S);
                let to_root = is_ctor(&x[1], ctor::DST_R);
                match (from_site, to_root) {
                    (true, true) => &mut p.through,
                    (true, false) => &mut p.inn,
                    (false, true) => &mut p.out,
                    (false, false) => &mut p.core,
                }
            }
            "link" => {
                let from_inner = is_ctor(&x[0], ctor::SRC_I);
                let to_outer = is_ctor(&x[1], ctor::DST_O);
                match (from_inner, to_outer) {
                    (true, true) => &mut p.through,
                    (true, false) => &mut p.inn,
                    (false, true) => &mut p.out,
                    (false, false) => &mut p.core,
                }
            }
            "has_child_p" => {
                let inward = site_parents.contains(&x[0]);
                let outward = is_ctor(&x[0], ctor::DST_R);
                match (inward, outward) {
                    (true, true) => &mut p.through,
                    (true, false) => &mut p.inn,
                    (false, true) => &mut p.out,
                    (false, false) => &mut p.core,
                }
            }
            "has_child_l" => {
                let inward = inner_targets.contains(&x[0]);
                let outward = is_ctor(&x[0], ctor::DST_O);
                match (inward, outward) {
                    (true, true) => &mut p.through,
                    (true, false) => &mut p.inn,
                    (false, true) => &mut p.out,
                    (false, false) => &mut p.core,
                }
            }
            _ => &mut p.core,
        };
        part.insert(a.clone());
    }
    Ok(p)
}

fn counter(m: &Multiset, pred: &str, subject: &Term) -> u32 {
    m.with_pred(pred)
        .find(|(a, _)| a.args.first() == Some(subject))
        .and_then(|(a, _)| a.args.get(1).and_then(|t| t.as_nat()))
        .map(|n| n.0)
        .unwrap_or(0)
}

/// Glue atoms for `C ∘ C'`: children of the roots of `C'` re-parented to the
/// places holding the matching sites of `C`, points on the outer names of
/// `C'` re-linked to the targets of the matching inner names of `C`, and the
/// recomputed counters of those places and targets.
pub fn eq_set(upper: &Partition, lower: &Partition) -> Multiset {
    let mut out = Multiset::new();
    let up = upper.inn.union(&upper.through);
    let low = lower.out.union(&lower.through);
    let graph: Sym = up
        .distinct()
        .chain(low.distinct())
        .map(|a| a.graph.clone())
        .next()
        .unwrap_or_else(|| Sym::new("B"));

    // site j ↦ its place in C; inner name x ↦ its target in C
    let mut site_place: BTreeMap<Term, Term> = BTreeMap::new();
    let mut name_target: BTreeMap<Term, Term> = BTreeMap::new();
    for (a, _) in up.with_pred("prnt") {
        if let Some(j) = a.args[0].unwrap_ctor(ctor::SRC_S) {
            site_place.insert(j.clone(), a.args[1].clone());
        }
    }
    for (a, _) in up.with_pred("link") {
        if let Some(x) = a.args[0].unwrap_ctor(ctor::SRC_I) {
            name_target.insert(x.clone(), a.args[1].clone());
        }
    }

    for (a, _) in low.with_pred("prnt") {
        if let Some(j) = a.args[1].unwrap_ctor(ctor::DST_R) {
            if let Some(place) = site_place.get(j) {
                out.insert(Atom::new("prnt", vec![a.args[0].clone(), place.clone()], &graph));
            }
        }
    }
    for (a, _) in low.with_pred("link") {
        if let Some(x) = a.args[1].unwrap_ctor(ctor::DST_O) {
            let x = rename_ns(x, crate::mset::Namespace::Inner);
            if let Some(t) = name_target.get(&x) {
                out.insert(Atom::new("link", vec![a.args[0].clone(), t.clone()], &graph));
            }
        }
    }

    let places: BTreeSet<&Term> = site_place.values().collect();
    for place in places {
        let mut n = counter(&up, "has_child_p", place);
        for (j, p) in &site_place {
            if p == place {
                n -= 1;
                n += counter(&low, "has_child_p", &Term::app(ctor::DST_R, vec![j.clone()]));
            }
        }
        out.insert(Atom::new("has_child_p", vec![place.clone(), Term::nat(n)], &graph));
    }
    let targets: BTreeSet<&Term> = name_target.values().collect();
    for target in targets {
        let mut n = counter(&up, "has_child_l", target);
        for (x, t) in &name_target {
            if t == target {
                n -= 1;
                let y = rename_ns(x, crate::mset::Namespace::Outer);
                n += counter(&low, "has_child_l", &Term::app(ctor::DST_O, vec![y]));
            }
        }
        out.insert(Atom::new("has_child_l", vec![target.clone(), Term::nat(n)], &graph));
    }
    out
}

/// Inner names of `C` and outer names of `C'` are the same identifiers in
/// different namespaces.
fn rename_ns(t: &Term, ns: crate::mset::Namespace) -> Term {
    match t {
        Term::Name(n) => Term::name(ns, n.id.clone()),
        other => other.clone(),
    }
}

/// Right-hand side of the composition lemma:
/// `out_C ⊎ core_C ⊎ eq ⊎ core_C' ⊎ inn_C'`.
pub fn compose_encoding(upper: &Partition, lower: &Partition) -> Multiset {
    upper
        .as_upper()
        .union(&eq_set(upper, lower))
        .union(&lower.as_lower())
}

/// Right-hand side of the juxtaposition lemma: `⟦F⟧ ⊎ ⟦G⟧` with the sites
/// and roots of `G` shifted past the widths of `F`.
pub fn juxtapose_encoding(g: &Bigraph, f: &Bigraph, graph: &str) -> Result<Multiset, RelationalError> {
    let ef = encode(f, graph)?;
    let eg = encode(g, graph)?;
    let (m, n) = (f.inner().width as u32, f.outer().width as u32);
    let shift = |t: &Term| shift_term(t, m, n);
    let mut out = ef;
    for a in eg.iter() {
        let mut b = a.clone();
        match b.pred.as_str() {
            "is_site" => b.args[0] = nat_add(&b.args[0], m),
            "is_root" => b.args[0] = nat_add(&b.args[0], n),
            _ => b.args = b.args.iter().map(shift).collect(),
        }
        out.insert(b);
    }
    Ok(out)
}

fn nat_add(t: &Term, k: u32) -> Term {
    match t {
        Term::Nat(x) => Term::nat(x.0 + k),
        other => other.clone(),
    }
}

fn shift_term(t: &Term, m: u32, n: u32) -> Term {
    if let Some(s) = t.unwrap_ctor(ctor::SRC_S) {
        return Term::app(ctor::SRC_S, vec![nat_add(s, m)]);
    }
    if let Some(r) = t.unwrap_ctor(ctor::DST_R) {
        return Term::app(ctor::DST_R, vec![nat_add(r, n)]);
    }
    t.clone()
}
