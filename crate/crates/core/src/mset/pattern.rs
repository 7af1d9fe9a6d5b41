use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::term::{Namespace, Nat, Sym, Term};
use super::text;
use super::KernelError;

pub type Substitution = BTreeMap<Sym, Term>;

/// Term pattern. `Succ(k, p)` stands for `s^k(p)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pat {
    Var(Sym),
    Lit(Term),
    Succ(u32, Box<Pat>),
    App(Sym, Vec<Pat>),
}

impl Pat {
    pub fn var(v: &str) -> Pat {
        Pat::Var(Sym::new(v))
    }

    pub fn name(ns: Namespace, id: &str) -> Pat {
        Pat::Lit(Term::name(ns, id))
    }

    pub fn nat(n: u32) -> Pat {
        Pat::Lit(Term::nat(n))
    }

    pub fn z() -> Pat {
        Pat::nat(0)
    }

    /// `s^k(p)`, folding literals and nested successors.
    pub fn succ(k: u32, p: Pat) -> Pat {
        if k == 0 {
            return p;
        }
        match p {
            Pat::Lit(Term::Nat(n)) => Pat::Lit(Term::Nat(Nat(n.0 + k))),
            Pat::Succ(j, q) => Pat::Succ(j + k, q),
            other => Pat::Succ(k, Box::new(other)),
        }
    }

    pub fn app(f: &str, args: Vec<Pat>) -> Pat {
        Pat::App(Sym::new(f), args)
    }

    pub fn vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Pat::Var(v) => {
                out.insert(v.clone());
            }
            Pat::Lit(_) => {}
            Pat::Succ(_, p) => p.vars(out),
            Pat::App(_, ps) => ps.iter().for_each(|p| p.vars(out)),
        }
    }

    /// Ground term if every variable is bound.
    pub fn instantiate(&self, s: &Substitution) -> Option<Term> {
        match self {
            Pat::Var(v) => s.get(v).cloned(),
            Pat::Lit(t) => Some(t.clone()),
            Pat::Succ(k, p) => match p.instantiate(s)? {
                Term::Nat(n) => Some(Term::Nat(Nat(n.0 + k))),
                _ => None,
            },
            Pat::App(f, ps) => {
                let args = ps.iter().map(|p| p.instantiate(s)).collect::<Option<Vec<_>>>()?;
                Some(Term::App(f.clone(), args))
            }
        }
    }

    /// One-way matching. New bindings are pushed on `trail` so the caller can undo them.
    pub fn matches(&self, t: &Term, s: &mut Substitution, trail: &mut Vec<Sym>) -> bool {
        match self {
            Pat::Var(v) => match s.get(v) {
                Some(b) => b == t,
                None => {
                    s.insert(v.clone(), t.clone());
                    trail.push(v.clone());
                    true
                }
            },
            Pat::Lit(l) => l == t,
            Pat::Succ(k, p) => match t {
                Term::Nat(n) if n.0 >= *k => p.matches(&Term::Nat(Nat(n.0 - k)), s, trail),
                _ => false,
            },
            Pat::App(f, ps) => match t {
                Term::App(g, ts) if f == g && ps.len() == ts.len() => {
                    ps.iter().zip(ts).all(|(p, t)| p.matches(t, s, trail))
                }
                _ => false,
            },
        }
    }
}

impl From<Term> for Pat {
    fn from(t: Term) -> Self {
        Pat::Lit(t)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct AtomPat {
    pub pred: Sym,
    pub args: Vec<Pat>,
    pub graph: Pat,
}

impl AtomPat {
    pub fn new(pred: &str, args: Vec<Pat>, graph: Pat) -> AtomPat {
        AtomPat {
            pred: Sym::new(pred),
            args,
            graph,
        }
    }

    pub fn vars(&self, out: &mut BTreeSet<Sym>) {
        self.args.iter().for_each(|p| p.vars(out));
        self.graph.vars(out);
    }

    pub fn instantiate(&self, s: &Substitution) -> Option<super::Atom> {
        let args = self.args.iter().map(|p| p.instantiate(s)).collect::<Option<Vec<_>>>()?;
        let graph = match self.graph.instantiate(s)? {
            Term::Name(n) if n.ns == Namespace::Graph => n.id,
            _ => return None,
        };
        Some(super::Atom {
            pred: self.pred.clone(),
            args,
            graph,
        })
    }
}

impl fmt::Display for AtomPat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::pattern_to_string(self))
    }
}

type GuardFn = dyn Fn(&mut Substitution) -> bool + Send + Sync;

/// Host-side side condition, evaluated after the left-hand side has matched.
/// It may bind the variables listed in `binds`.
#[derive(Clone)]
pub struct Guard {
    pub binds: Vec<Sym>,
    pub description: String,
    f: Arc<GuardFn>,
}

impl Guard {
    pub fn new(
        description: &str,
        binds: &[&str],
        f: impl Fn(&mut Substitution) -> bool + Send + Sync + 'static,
    ) -> Guard {
        Guard {
            binds: binds.iter().map(|b| Sym::new(b)).collect(),
            description: description.to_string(),
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, s: &mut Substitution) -> bool {
        (self.f)(s)
    }
}

impl fmt::Debug for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Guard({})", self.description)
    }
}

/// `lhs ↦ rhs` over multisets of atoms.
#[derive(Clone, Debug)]
pub struct RewriteRule {
    pub label: Sym,
    pub lhs: Vec<AtomPat>,
    pub rhs: Vec<AtomPat>,
    pub guard: Option<Guard>,
    /// Variables bound to fresh names when the rule fires.
    pub fresh: Vec<(Sym, Namespace)>,
    /// Index of the left-hand pattern whose atom is the branching subject.
    /// Rules with a subject are treated as choices by branching exploration.
    pub choice: Option<usize>,
    order: Vec<usize>,
}

impl RewriteRule {
    pub fn new(label: &str, lhs: Vec<AtomPat>, rhs: Vec<AtomPat>) -> RewriteRule {
        let order = join_order(&lhs);
        RewriteRule {
            label: Sym::new(label),
            lhs,
            rhs,
            guard: None,
            fresh: Vec::new(),
            choice: None,
            order,
        }
    }

    /// Parses comma-separated atom patterns; `{}` or an empty string is ∅.
    pub fn parse(label: &str, lhs: &str, rhs: &str) -> Result<RewriteRule, KernelError> {
        Ok(RewriteRule::new(
            label,
            text::parse_pattern_list(lhs)?,
            text::parse_pattern_list(rhs)?,
        ))
    }

    pub fn with_guard(mut self, g: Guard) -> RewriteRule {
        self.guard = Some(g);
        self
    }

    pub fn with_fresh(mut self, vars: &[(&str, Namespace)]) -> RewriteRule {
        self.fresh
            .extend(vars.iter().map(|(v, ns)| (Sym::new(v), *ns)));
        self
    }

    pub fn with_choice(mut self, subject: usize) -> RewriteRule {
        self.choice = Some(subject);
        self
    }

    pub(crate) fn order(&self) -> &[usize] {
        &self.order
    }

    /// Every right-hand variable must be bound by the left-hand side, the guard
    /// or the fresh-name binder; fresh variables must not occur on the left.
    pub fn check(&self) -> Result<(), KernelError> {
        let mut bound = BTreeSet::new();
        self.lhs.iter().for_each(|p| p.vars(&mut bound));
        for (v, _) in &self.fresh {
            if bound.contains(v) {
                return Err(KernelError::BadRule {
                    label: self.label.to_string(),
                    reason: format!("fresh variable {v} also occurs on the left"),
                });
            }
        }
        if let Some(g) = &self.guard {
            bound.extend(g.binds.iter().cloned());
        }
        bound.extend(self.fresh.iter().map(|(v, _)| v.clone()));
        let mut used = BTreeSet::new();
        self.rhs.iter().for_each(|p| p.vars(&mut used));
        if let Some(v) = used.difference(&bound).next() {
            return Err(KernelError::BadRule {
                label: self.label.to_string(),
                reason: format!("variable {v} is unbound on the right"),
            });
        }
        if let Some(c) = self.choice {
            if c >= self.lhs.len() {
                return Err(KernelError::BadRule {
                    label: self.label.to_string(),
                    reason: "choice subject out of range".into(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ps: &[AtomPat]| {
            ps.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "{}: {{{}}} -> {{{}}}", self.label, side(&self.lhs), side(&self.rhs))?;
        if let Some(g) = &self.guard {
            write!(f, " if {}", g.description)?;
        }
        Ok(())
    }
}

/// Greedy join order: prefer patterns whose variables are already bound.
fn join_order(lhs: &[AtomPat]) -> Vec<usize> {
    let vars: Vec<BTreeSet<Sym>> = lhs
        .iter()
        .map(|p| {
            let mut s = BTreeSet::new();
            p.args.iter().for_each(|a| a.vars(&mut s));
            s
        })
        .collect();
    let first_bound = |i: usize, bound: &BTreeSet<Sym>| {
        let mut s = BTreeSet::new();
        if let Some(a) = lhs[i].args.first() {
            a.vars(&mut s);
        }
        s.is_subset(bound)
    };
    let mut bound = BTreeSet::new();
    let mut left: Vec<usize> = (0..lhs.len()).collect();
    let mut order = Vec::with_capacity(lhs.len());
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .max_by_key(|(_, &i)| {
                let unbound = vars[i].difference(&bound).count();
                (first_bound(i, &bound), usize::MAX - unbound, usize::MAX - i)
            })
            .expect("non-empty");
        let i = left.remove(pos);
        bound.extend(vars[i].iter().cloned());
        order.push(i);
    }
    order
}
