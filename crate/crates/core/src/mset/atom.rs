use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;

use sha2::{Digest, Sha256};

use super::term::{Name, Namespace, Sym, Term};
use super::text;

/// `pred(args)@graph`. Ordering compares the predicate first, so all atoms of
/// one predicate form a contiguous range inside a [`Multiset`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
    pub graph: Sym,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>, graph: &Sym) -> Atom {
        Atom {
            pred: Sym::new(pred),
            args,
            graph: graph.clone(),
        }
    }

    pub fn graph_name(&self) -> Name {
        Name::new(Namespace::Graph, self.graph.clone())
    }

    pub fn arg(&self, i: usize) -> Option<&Term> {
        self.args.get(i)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::atom_to_string(self))
    }
}

/// Finite multiset of atoms with explicit multiplicities.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Multiset {
    counts: BTreeMap<Atom, usize>,
    total: usize,
}

impl Multiset {
    pub fn new() -> Multiset {
        Multiset::default()
    }

    /// Total number of atom occurrences.
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn distinct_len(&self) -> usize {
        self.counts.len()
    }

    pub fn insert(&mut self, atom: Atom) {
        self.insert_n(atom, 1);
    }

    pub fn insert_n(&mut self, atom: Atom, n: usize) {
        if n == 0 {
            return;
        }
        *self.counts.entry(atom).or_insert(0) += n;
        self.total += n;
    }

    /// Removes one occurrence. Returns false if the atom was absent.
    pub fn remove(&mut self, atom: &Atom) -> bool {
        match self.counts.get_mut(atom) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(atom);
                }
                self.total -= 1;
                true
            }
            None => false,
        }
    }

    pub fn count(&self, atom: &Atom) -> usize {
        self.counts.get(atom).copied().unwrap_or(0)
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.counts.contains_key(atom)
    }

    /// Sub-multiset test, respecting multiplicities.
    pub fn includes(&self, other: &Multiset) -> bool {
        other.counts.iter().all(|(a, n)| self.count(a) >= *n)
    }

    pub fn add_all(&mut self, other: &Multiset) {
        for (a, n) in &other.counts {
            self.insert_n(a.clone(), *n);
        }
    }

    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        out.add_all(other);
        out
    }

    /// `self - other`, or `None` if `other` is not included in `self`.
    pub fn difference(&self, other: &Multiset) -> Option<Multiset> {
        let mut out = self.clone();
        for (a, n) in &other.counts {
            let c = out.counts.get_mut(a)?;
            if *c < *n {
                return None;
            }
            *c -= n;
            if *c == 0 {
                out.counts.remove(a);
            }
            out.total -= n;
        }
        Some(out)
    }

    /// Distinct atoms with their multiplicities, in canonical order.
    pub fn iter_counts(&self) -> btree_map::Iter<'_, Atom, usize> {
        self.counts.iter()
    }

    /// Every occurrence, repeated according to multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.counts
            .iter()
            .flat_map(|(a, n)| std::iter::repeat_n(a, *n))
    }

    pub fn distinct(&self) -> impl Iterator<Item = &Atom> + '_ {
        self.counts.keys()
    }

    /// Distinct atoms of one predicate.
    pub fn with_pred(&self, pred: &str) -> impl Iterator<Item = (&Atom, usize)> + '_ {
        self.range_pred(&Sym::new(pred))
    }

    pub fn range_pred(&self, pred: &Sym) -> impl Iterator<Item = (&Atom, usize)> + '_ {
        let pred = pred.clone();
        let lo = Atom {
            pred: pred.clone(),
            args: Vec::new(),
            graph: Sym::new(""),
        };
        self.counts
            .range(lo..)
            .take_while(move |(a, _)| a.pred == pred)
            .map(|(a, n)| (a, *n))
    }

    /// Distinct atoms of one predicate whose first argument is `first`.
    pub fn range_pred_first(
        &self,
        pred: &Sym,
        first: &Term,
    ) -> impl Iterator<Item = (&Atom, usize)> + '_ {
        let pred = pred.clone();
        let first = first.clone();
        let lo = Atom {
            pred: pred.clone(),
            args: vec![first.clone()],
            graph: Sym::new(""),
        };
        self.counts
            .range(lo..)
            .take_while(move |(a, _)| a.pred == pred && a.args.first() == Some(&first))
            .map(|(a, n)| (a, *n))
    }

    pub fn graphs(&self) -> Vec<Sym> {
        let mut gs: Vec<Sym> = self.counts.keys().map(|a| a.graph.clone()).collect();
        gs.sort();
        gs.dedup();
        gs
    }

    /// SHA-256 over the canonical text form.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for a in self.iter() {
            h.update(text::atom_to_string(a).as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

impl FromIterator<Atom> for Multiset {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for a in iter {
            m.insert(a);
        }
        m
    }
}

impl Extend<Atom> for Multiset {
    fn extend<I: IntoIterator<Item = Atom>>(&mut self, iter: I) {
        for a in iter {
            self.insert(a);
        }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")
            .and_then(|_| {
                for (i, a) in self.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                Ok(())
            })
            .and_then(|_| f.write_str("}"))
    }
}
