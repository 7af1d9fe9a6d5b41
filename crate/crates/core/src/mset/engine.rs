use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::atom::{Atom, Multiset};
use super::pattern::{AtomPat, RewriteRule, Substitution};
use super::term::{Name, Namespace, Term};
use super::trace::{Outcome, Step, Trace};
use super::KernelError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Match {
    pub consumed: Multiset,
    pub subst: Substitution,
}

/// Calls `f` for every match in search order; `f` returns false to stop.
fn search(rule: &RewriteRule, state: &Multiset, f: &mut dyn FnMut(Match) -> bool) {
    struct Ctx<'a> {
        rule: &'a RewriteRule,
        state: &'a Multiset,
        subst: Substitution,
        used: Vec<&'a Atom>,
        stop: bool,
    }

    fn candidates<'a>(
        state: &'a Multiset,
        p: &AtomPat,
        subst: &Substitution,
    ) -> Vec<(&'a Atom, usize)> {
        match p.args.first().and_then(|a| a.instantiate(subst)) {
            Some(first) => state.range_pred_first(&p.pred, &first).collect(),
            None => state.range_pred(&p.pred).collect(),
        }
    }

    fn go(ctx: &mut Ctx<'_>, depth: usize, f: &mut dyn FnMut(Match) -> bool) {
        if ctx.stop {
            return;
        }
        let order = ctx.rule.order();
        if depth == order.len() {
            let mut s = ctx.subst.clone();
            if let Some(g) = &ctx.rule.guard {
                if !g.eval(&mut s) {
                    return;
                }
            }
            if ctx.rule.fresh.iter().any(|(v, _)| s.contains_key(v)) {
                return;
            }
            let consumed: Multiset = ctx.used.iter().map(|a| (*a).clone()).collect();
            if !f(Match { consumed, subst: s }) {
                ctx.stop = true;
            }
            return;
        }
        let p = &ctx.rule.lhs[order[depth]];
        let cands = candidates(ctx.state, p, &ctx.subst);
        for (atom, count) in cands {
            let already = ctx.used.iter().filter(|u| **u == atom).count();
            if already >= count || atom.args.len() != p.args.len() {
                continue;
            }
            let mut trail = Vec::new();
            let ok = p
                .args
                .iter()
                .zip(&atom.args)
                .all(|(q, t)| q.matches(t, &mut ctx.subst, &mut trail))
                && p.graph
                    .matches(&Term::Name(atom.graph_name()), &mut ctx.subst, &mut trail);
            if ok {
                ctx.used.push(atom);
                go(ctx, depth + 1, f);
                ctx.used.pop();
            }
            for v in trail {
                ctx.subst.remove(&v);
            }
            if ctx.stop {
                return;
            }
        }
    }

    let mut ctx = Ctx {
        rule,
        state,
        subst: Substitution::new(),
        used: Vec::new(),
        stop: false,
    };
    go(&mut ctx, 0, f);
}

/// All matches of `rule` in `state`, de-duplicated and in canonical order.
pub fn match_rule(rule: &RewriteRule, state: &Multiset) -> Vec<Match> {
    let mut out = BTreeSet::new();
    search(rule, state, &mut |m| {
        out.insert(m);
        true
    });
    out.into_iter().collect()
}

pub fn has_match(rule: &RewriteRule, state: &Multiset) -> bool {
    let mut found = false;
    search(rule, state, &mut |_| {
        found = true;
        false
    });
    found
}

/// A rule index together with one of its matches.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub rule: usize,
    pub m: Match,
}

/// Picks the index of a candidate, or `None` to stop.
pub type Chooser<'a> = Box<dyn FnMut(&Multiset, &[Candidate]) -> Option<usize> + 'a>;

/// How `run` picks among enabled matches.
#[allow(clippy::large_enum_variant)]
pub enum Strategy<'a> {
    /// Canonically first match of the first rule that has one.
    First,
    /// Uniform choice among all enabled matches.
    Random(ChaCha8Rng),
    /// The callback returns the index of the chosen candidate, or `None` to stop.
    Interactive(Chooser<'a>),
}

impl Strategy<'_> {
    pub fn random(seed: u64) -> Strategy<'static> {
        Strategy::Random(ChaCha8Rng::seed_from_u64(seed))
    }
}

/// Rewriting engine. Owns the fresh-name supply.
#[derive(Clone, Debug, Default)]
pub struct Engine {
    next: BTreeMap<Namespace, u64>,
}

impl Engine {
    pub fn new() -> Engine {
        Engine::default()
    }

    /// Makes sure future fresh names avoid every name of the form `ns#k` in `m`.
    pub fn observe(&mut self, m: &Multiset) {
        for a in m.distinct() {
            for t in &a.args {
                t.visit_names(&mut |n| self.observe_name(n));
            }
        }
    }

    pub fn observe_name(&mut self, n: &Name) {
        if let Some(k) = n.fresh_index() {
            let e = self.next.entry(n.ns).or_insert(0);
            *e = (*e).max(k + 1);
        }
    }

    pub fn fresh_name(&mut self, ns: Namespace) -> Name {
        let e = self.next.entry(ns).or_insert(0);
        let k = *e;
        *e += 1;
        Name::new(ns, format!("{}#{}", ns.as_str(), k))
    }

    pub fn match_rule(&self, rule: &RewriteRule, state: &Multiset) -> Vec<Match> {
        match_rule(rule, state)
    }

    /// Fires `rule` at `m`: `state - consumed + rhs`. Fresh binders are
    /// allocated here, so the step records them in its bindings.
    pub fn apply(
        &mut self,
        rule: &RewriteRule,
        state: &Multiset,
        m: &Match,
    ) -> Result<(Multiset, Step), KernelError> {
        let expected: Option<Multiset> = rule
            .lhs
            .iter()
            .map(|p| p.instantiate(&m.subst))
            .collect();
        if expected.as_ref() != Some(&m.consumed) {
            return Err(KernelError::ForeignMatch(rule.label.to_string()));
        }
        let rest = state
            .difference(&m.consumed)
            .ok_or_else(|| KernelError::StaleMatch(rule.label.to_string()))?;
        let mut subst = m.subst.clone();
        for (v, ns) in &rule.fresh {
            let n = self.fresh_name(*ns);
            subst.insert(v.clone(), Term::Name(n));
        }
        let mut produced = Multiset::new();
        for p in &rule.rhs {
            let a = p.instantiate(&subst).ok_or_else(|| KernelError::Unbound {
                label: rule.label.to_string(),
                pattern: p.to_string(),
            })?;
            produced.insert(a);
        }
        let next = rest.union(&produced);
        let step = Step {
            label: rule.label.clone(),
            bindings: subst,
            consumed: m.consumed.clone(),
            produced,
        };
        Ok((next, step))
    }

    /// All enabled matches, grouped by rule in rule order.
    pub fn candidates(rules: &[RewriteRule], state: &Multiset) -> Vec<Candidate> {
        rules
            .iter()
            .enumerate()
            .flat_map(|(i, r)| {
                match_rule(r, state)
                    .into_iter()
                    .map(move |m| Candidate { rule: i, m })
            })
            .collect()
    }

    /// Rewrites until no rule applies, the strategy stops, or `fuel` steps ran.
    pub fn run(
        &mut self,
        rules: &[RewriteRule],
        init: &Multiset,
        strategy: &mut Strategy<'_>,
        fuel: Option<usize>,
    ) -> Result<(Multiset, Trace), KernelError> {
        self.observe(init);
        let mut state = init.clone();
        let mut trace = Trace::start(init);
        loop {
            if fuel.is_some_and(|f| trace.steps.len() >= f) {
                let any = rules.iter().any(|r| has_match(r, &state));
                trace.finish(&state, if any { Outcome::FuelExhausted } else { Outcome::Normal });
                return Ok((state, trace));
            }
            let chosen = match strategy {
                Strategy::First => rules.iter().enumerate().find_map(|(i, r)| {
                    match_rule(r, &state)
                        .into_iter()
                        .next()
                        .map(|m| Candidate { rule: i, m })
                }),
                Strategy::Random(rng) => {
                    let mut cands = Self::candidates(rules, &state);
                    if cands.is_empty() {
                        None
                    } else {
                        let k = rng.random_range(0..cands.len());
                        Some(cands.swap_remove(k))
                    }
                }
                Strategy::Interactive(cb) => {
                    let cands = Self::candidates(rules, &state);
                    if cands.is_empty() {
                        None
                    } else {
                        match cb(&state, &cands) {
                            Some(k) if k < cands.len() => Some(cands[k].clone()),
                            _ => {
                                trace.finish(&state, Outcome::Stopped);
                                return Ok((state, trace));
                            }
                        }
                    }
                }
            };
            let Some(c) = chosen else {
                trace.finish(&state, Outcome::Normal);
                return Ok((state, trace));
            };
            let (next, step) = self.apply(&rules[c.rule], &state, &c.m)?;
            trace.steps.push(step);
            state = next;
        }
    }

    /// Every normal form reachable by branching only on choice rules. Rules
    /// without a choice subject are applied deterministically; at a choice
    /// point the canonically least subject atom is branched on.
    pub fn branch_normal_forms(
        &mut self,
        rules: &[RewriteRule],
        init: &Multiset,
        limit: usize,
    ) -> Result<Vec<Multiset>, KernelError> {
        self.observe(init);
        let (det, choice): (Vec<&RewriteRule>, Vec<&RewriteRule>) =
            rules.iter().partition(|r| r.choice.is_none());
        let mut out = BTreeSet::new();
        let mut stack = vec![init.clone()];
        let mut steps = 0usize;
        while let Some(mut state) = stack.pop() {
            loop {
                steps += 1;
                if steps > limit {
                    return Err(KernelError::FuelExhausted(limit));
                }
                let first = det
                    .iter()
                    .find_map(|r| match_rule(r, &state).into_iter().next().map(|m| (*r, m)));
                if let Some((r, m)) = first {
                    state = self.apply(r, &state, &m)?.0;
                    continue;
                }
                let mut options: Vec<(Atom, &RewriteRule, Match)> = Vec::new();
                for r in &choice {
                    let subject = r.choice.expect("choice rule");
                    let pat = &r.lhs[subject];
                    for m in match_rule(r, &state) {
                        let a = pat
                            .instantiate(&m.subst)
                            .expect("subject pattern is bound by its match");
                        options.push((a, r, m));
                    }
                }
                let Some(min) = options.iter().map(|o| o.0.clone()).min() else {
                    out.insert(state);
                    break;
                };
                for (a, r, m) in options.into_iter().rev() {
                    if a == min {
                        stack.push(self.apply(r, &state, &m)?.0);
                    }
                }
                break;
            }
        }
        Ok(out.into_iter().collect())
    }
}
