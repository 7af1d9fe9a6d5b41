use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bigraph::{lean_equiv, shape_key, Bigraph};
use crate::mset::Sym;
use crate::par::{self, Execution};

use super::apply::direct_successors;
use super::compile::{compile_reaction, kernel_successors, CompiledReaction};
use super::matching::find_matches;
use super::{ParametricReactionRule, ReactionError};

/// Which execution path computes successors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Via {
    #[default]
    Direct,
    Kernel,
}

#[derive(Clone, Debug)]
pub struct Successor {
    pub rule: Sym,
    pub state: Bigraph,
}

/// A reactive system: rules plus the chosen execution path.
#[derive(Clone, Debug)]
pub struct Brs {
    rules: Vec<ParametricReactionRule>,
    compiled: Vec<CompiledReaction>,
    via: Via,
}

impl Brs {
    pub fn new(rules: Vec<ParametricReactionRule>, via: Via) -> Brs {
        let compiled = match via {
            Via::Direct => Vec::new(),
            Via::Kernel => rules.iter().map(compile_reaction).collect(),
        };
        Brs { rules, compiled, via }
    }

    pub fn rules(&self) -> &[ParametricReactionRule] {
        &self.rules
    }

    pub fn via(&self) -> Via {
        self.via
    }

    /// Successors in rule order, then match order. Not de-duplicated.
    pub fn successors(&self, agent: &Bigraph) -> Result<Vec<Successor>, ReactionError> {
        let mut out = Vec::new();
        for (i, r) in self.rules.iter().enumerate() {
            let states = match self.via {
                Via::Direct => direct_successors(agent, r)?,
                Via::Kernel => kernel_successors(agent, &self.compiled[i])?,
            };
            out.extend(states.into_iter().map(|state| Successor {
                rule: r.name().clone(),
                state,
            }));
        }
        Ok(out)
    }

    pub fn enabled(&self, agent: &Bigraph) -> bool {
        self.rules.iter().any(|r| !find_matches(agent, r).is_empty())
    }
}

/// Bigraphs up to lean equivalence.
#[derive(Clone, Debug, Default)]
pub struct StateSet {
    states: Vec<Bigraph>,
    by_key: HashMap<String, Vec<usize>>,
}

impl StateSet {
    pub fn new() -> StateSet {
        StateSet::default()
    }

    pub fn find(&self, b: &Bigraph) -> Option<usize> {
        self.by_key
            .get(&shape_key(b))?
            .iter()
            .copied()
            .find(|i| lean_equiv(&self.states[*i], b).is_some())
    }

    /// Index of `b`, and whether it was new.
    pub fn insert(&mut self, b: Bigraph) -> (usize, bool) {
        if let Some(i) = self.find(&b) {
            return (i, false);
        }
        let i = self.states.len();
        self.by_key.entry(shape_key(&b)).or_default().push(i);
        self.states.push(b);
        (i, true)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Bigraph] {
        &self.states
    }

    pub fn into_states(self) -> Vec<Bigraph> {
        self.states
    }
}

/// Receives the current agent and its successors; returns the index to
/// follow, or `None` to stop.
pub type Picker<'a> = Box<dyn FnMut(&Bigraph, &[Successor]) -> Option<usize> + 'a>;

pub enum ExploreStrategy<'a> {
    First,
    Random(u64),
    Interactive(Picker<'a>),
    /// Breadth-first over all successors, de-duplicated up to lean
    /// equivalence, stopping once more than `max_states` states are known.
    All { max_states: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunOutcome {
    /// No reachable state explored has an enabled rule left unexplored.
    Quiescent,
    StepBound,
    StateBound,
    Stopped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub rule: String,
}

#[derive(Clone, Debug)]
pub struct BrsTrace {
    pub states: Vec<Bigraph>,
    pub transitions: Vec<Transition>,
    pub outcome: RunOutcome,
    pub via: Via,
}

impl BrsTrace {
    pub fn successors_of(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .transitions
            .iter()
            .filter(|t| t.from == i)
            .map(|t| t.to)
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// States without outgoing transitions.
    pub fn terminal_states(&self) -> Vec<usize> {
        (0..self.states.len())
            .filter(|i| self.transitions.iter().all(|t| t.from != *i))
            .collect()
    }

    /// State graph; each state is labelled with its index and node count.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph brs {\n");
        for (i, b) in self.states.iter().enumerate() {
            let _ = writeln!(s, "  s{i} [label=\"{i}: {} nodes\"];", b.nodes().len());
        }
        for t in &self.transitions {
            let _ = writeln!(s, "  s{} -> s{} [label=\"{}\"];", t.from, t.to, t.rule);
        }
        s.push_str("}\n");
        s
    }
}

/// Runs `agent` under `rules` for at most `max_steps` reaction steps (the
/// depth bound for breadth-first exploration).
pub fn run_brs(
    agent: &Bigraph,
    brs: &Brs,
    strategy: ExploreStrategy<'_>,
    max_steps: usize,
    exec: Execution,
) -> Result<BrsTrace, ReactionError> {
    let mut trace = BrsTrace {
        states: vec![agent.clone()],
        transitions: Vec::new(),
        outcome: RunOutcome::Quiescent,
        via: brs.via(),
    };
    match strategy {
        ExploreStrategy::All { max_states } => {
            let mut seen = StateSet::new();
            seen.insert(agent.clone());
            let mut frontier = vec![0usize];
            let mut depth = 0;
            while !frontier.is_empty() {
                if depth == max_steps {
                    let live = frontier.iter().any(|i| brs.enabled(&seen.states()[*i]));
                    trace.outcome = if live { RunOutcome::StepBound } else { RunOutcome::Quiescent };
                    break;
                }
                let agents: Vec<Bigraph> = frontier.iter().map(|i| seen.states()[*i].clone()).collect();
                let succs = par::map(exec, &agents, |b| brs.successors(b));
                let mut next = Vec::new();
                let mut full = false;
                for (from, ss) in frontier.iter().zip(succs) {
                    for s in ss? {
                        let (to, new) = seen.insert(s.state);
                        let t = Transition {
                            from: *from,
                            to,
                            rule: s.rule.to_string(),
                        };
                        if !trace.transitions.contains(&t) {
                            trace.transitions.push(t);
                        }
                        if new {
                            next.push(to);
                        }
                    }
                    if seen.len() > max_states {
                        full = true;
                    }
                }
                depth += 1;
                frontier = next;
                if full {
                    trace.outcome = RunOutcome::StateBound;
                    break;
                }
            }
            trace.states = seen.into_states();
        }
        linear => {
            let mut pick: Picker<'_> = match linear {
                ExploreStrategy::First => Box::new(|_, _| Some(0)),
                ExploreStrategy::Random(seed) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Box::new(move |_, s| Some(rng.random_range(0..s.len())))
                }
                ExploreStrategy::Interactive(cb) => cb,
                ExploreStrategy::All { .. } => unreachable!(),
            };
            let mut current = agent.clone();
            for step in 0..=max_steps {
                if step == max_steps {
                    if brs.enabled(&current) {
                        trace.outcome = RunOutcome::StepBound;
                    }
                    break;
                }
                let succs = brs.successors(&current)?;
                if succs.is_empty() {
                    break;
                }
                let Some(k) = pick(&current, &succs).filter(|k| *k < succs.len()) else {
                    trace.outcome = RunOutcome::Stopped;
                    break;
                };
                let chosen = succs[k].clone();
                trace.transitions.push(Transition {
                    from: step,
                    to: step + 1,
                    rule: chosen.rule.to_string(),
                });
                trace.states.push(chosen.state.clone());
                current = chosen.state;
            }
        }
    }
    Ok(trace)
}
