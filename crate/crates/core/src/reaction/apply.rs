use crate::bigraph::{lean_equiv, Bigraph};
use crate::mset::{Engine, Namespace};

use super::eta::{instantiate_eta, observe_bigraph};
use super::matching::{find_matches, Decomposition};
use super::{ParametricReactionRule, ReactionError};

/// `B′ = C ∘ (D ⊗ R) ∘ η̄(C′)`, with the reactum's nodes and edges renamed
/// apart from the agent.
pub fn apply_reaction(
    agent: &Bigraph,
    rule: &ParametricReactionRule,
    d: &Decomposition,
    supply: &mut Engine,
) -> Result<Bigraph, ReactionError> {
    let back = d.recompose()?;
    if back != *agent && lean_equiv(&back, agent).is_none() {
        return Err(ReactionError::StaleDecomposition(rule.name().to_string()));
    }
    observe_bigraph(supply, agent);
    let mut fresh_nodes = std::collections::BTreeMap::new();
    for v in rule.reactum().nodes().keys() {
        fresh_nodes.insert(v.clone(), supply.fresh_name(Namespace::Node).id);
    }
    let mut fresh_edges = std::collections::BTreeMap::new();
    for e in rule.reactum().edges() {
        fresh_edges.insert(e.clone(), supply.fresh_name(Namespace::Edge).id);
    }
    let reactum = rule
        .reactum()
        .rename(|v| fresh_nodes[v].clone(), |e| fresh_edges[e].clone());
    let param = instantiate_eta(rule.eta(), &d.parameter, supply)?;
    let mid = d.identity.juxtapose(&reactum)?.compose(&param)?;
    Ok(d.context.compose(&mid)?)
}

/// One-step successors of `agent` under `rule` by direct application, in
/// match order.
pub fn direct_successors(agent: &Bigraph, rule: &ParametricReactionRule) -> Result<Vec<Bigraph>, ReactionError> {
    let mut supply = Engine::new();
    find_matches(agent, rule)
        .iter()
        .map(|d| apply_reaction(agent, rule, d, &mut supply))
        .collect()
}
