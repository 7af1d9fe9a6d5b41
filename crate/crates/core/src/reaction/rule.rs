use std::fmt;

use crate::bigraph::{Bigraph, Interface};
use crate::mset::Sym;

use super::ReactionError;

/// `(L: ⟨m, X⟩ → J, R: ⟨m′, X⟩ → J, η : m′ → m)`.
///
/// Only redexes and reactums with an empty inner name set are accepted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricReactionRule {
    name: Sym,
    redex: Bigraph,
    reactum: Bigraph,
    eta: Vec<usize>,
}

fn reserved(s: &Sym) -> bool {
    s.as_str().starts_with('~')
}

impl ParametricReactionRule {
    pub fn new(name: &str, redex: Bigraph, reactum: Bigraph, eta: Vec<usize>) -> Result<Self, ReactionError> {
        let bad = |reason: String| ReactionError::BadRule {
            rule: name.to_string(),
            reason,
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(bad("rule names are alphanumeric".into()));
        }
        redex
            .well_formed()
            .map_err(|d| bad(format!("redex is ill-formed: {d}")))?;
        reactum
            .well_formed()
            .map_err(|d| bad(format!("reactum is ill-formed: {d}")))?;
        if redex.signature() != reactum.signature() {
            return Err(bad("redex and reactum use different signatures".into()));
        }
        if redex.outer() != reactum.outer() {
            return Err(bad(format!(
                "outer faces differ: {} vs {}",
                redex.outer(),
                reactum.outer()
            )));
        }
        if !redex.inner().names.is_empty() || !reactum.inner().names.is_empty() {
            return Err(bad("inner names on redex or reactum are not supported".into()));
        }
        if eta.len() != reactum.inner().width {
            return Err(bad(format!(
                "eta has {} entries but the reactum has {} sites",
                eta.len(),
                reactum.inner().width
            )));
        }
        if let Some((j, i)) = eta.iter().enumerate().find(|(_, i)| **i >= redex.inner().width) {
            return Err(bad(format!(
                "eta maps reactum site {j} to missing redex site {i}"
            )));
        }
        if let Some(y) = redex.outer().names.iter().find(|y| reserved(y)) {
            return Err(bad(format!("outer name {y} uses the reserved prefix ~")));
        }
        Ok(ParametricReactionRule {
            name: Sym::new(name),
            redex,
            reactum,
            eta,
        })
    }

    pub fn name(&self) -> &Sym {
        &self.name
    }

    pub fn redex(&self) -> &Bigraph {
        &self.redex
    }

    pub fn reactum(&self) -> &Bigraph {
        &self.reactum
    }

    pub fn eta(&self) -> &[usize] {
        &self.eta
    }

    /// The shared outer face `J`.
    pub fn interface(&self) -> &Interface {
        self.redex.outer()
    }

    pub fn is_ground(&self) -> bool {
        self.redex.is_ground() && self.reactum.is_ground()
    }

    /// `|η⁻¹(i)|` for redex site `i`.
    pub fn multiplicity(&self, site: usize) -> usize {
        self.eta.iter().filter(|i| **i == site).count()
    }

    /// Reactum sites that take a copy of redex site `i`, ascending.
    pub fn preimage(&self, site: usize) -> Vec<usize> {
        (0..self.eta.len()).filter(|j| self.eta[*j] == site).collect()
    }
}

impl fmt::Display for ParametricReactionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {} with eta [{}]",
            self.name,
            self.redex.inner(),
            self.interface(),
            self.eta
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Two ground bigraphs `L, R : ε → J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundReactionRule {
    rule: ParametricReactionRule,
}

impl GroundReactionRule {
    pub fn new(name: &str, redex: Bigraph, reactum: Bigraph) -> Result<Self, ReactionError> {
        if !redex.is_ground() || !reactum.is_ground() {
            return Err(ReactionError::BadRule {
                rule: name.to_string(),
                reason: "ground rules need ground redex and reactum".into(),
            });
        }
        Ok(GroundReactionRule {
            rule: ParametricReactionRule::new(name, redex, reactum, Vec::new())?,
        })
    }

    pub fn redex(&self) -> &Bigraph {
        self.rule.redex()
    }

    pub fn reactum(&self) -> &Bigraph {
        self.rule.reactum()
    }

    pub fn as_parametric(&self) -> &ParametricReactionRule {
        &self.rule
    }

    pub fn into_parametric(self) -> ParametricReactionRule {
        self.rule
    }
}
