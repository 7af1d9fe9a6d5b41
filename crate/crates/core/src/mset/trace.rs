use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::atom::Multiset;
use super::pattern::Substitution;
use super::term::{Sym, Term};
use super::text::{self, Sort};
use super::KernelError;

pub const TRACE_FORMAT: &str = "brs-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub label: Sym,
    pub bindings: Substitution,
    pub consumed: Multiset,
    pub produced: Multiset,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// No rule applies to the final state.
    Normal,
    /// The step budget ran out while some rule was still enabled.
    FuelExhausted,
    /// An interactive strategy declined to continue.
    Stopped,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub initial_digest: String,
    pub final_digest: String,
    pub steps: Vec<Step>,
    pub outcome: Outcome,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    initial: String,
    steps: usize,
}

#[derive(Serialize, Deserialize)]
struct StepRecord {
    step: usize,
    label: String,
    bindings: BTreeMap<String, String>,
    consumed: Vec<String>,
    produced: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Footer {
    #[serde(rename = "final")]
    final_digest: String,
    outcome: Outcome,
}

fn atoms_text(m: &Multiset) -> Vec<String> {
    m.iter().map(text::atom_to_string).collect()
}

fn atoms_parse(v: &[String]) -> Result<Multiset, KernelError> {
    v.iter().map(|s| text::parse_atom(s)).collect()
}

impl Trace {
    pub(crate) fn start(init: &Multiset) -> Trace {
        Trace {
            initial_digest: init.digest(),
            final_digest: String::new(),
            steps: Vec::new(),
            outcome: Outcome::Normal,
        }
    }

    pub(crate) fn finish(&mut self, state: &Multiset, outcome: Outcome) {
        self.final_digest = state.digest();
        self.outcome = outcome;
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-executes the recorded steps from `init`, checking each consumed
    /// multiset is present and both digests agree.
    pub fn replay(&self, init: &Multiset) -> Result<Multiset, KernelError> {
        if init.digest() != self.initial_digest {
            return Err(KernelError::Replay("initial digest differs".into()));
        }
        let mut state = init.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let rest = state.difference(&s.consumed).ok_or_else(|| {
                KernelError::Replay(format!("step {i} ({}) consumes absent atoms", s.label))
            })?;
            state = rest.union(&s.produced);
        }
        if state.digest() != self.final_digest {
            return Err(KernelError::Replay("final digest differs".into()));
        }
        Ok(state)
    }

    /// JSON lines: a header record, one record per step, a final record.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let header = Header {
            format: TRACE_FORMAT.into(),
            version: TRACE_VERSION,
            initial: self.initial_digest.clone(),
            steps: self.steps.len(),
        };
        out.push_str(&serde_json::to_string(&header).expect("serializable"));
        out.push('\n');
        for (i, s) in self.steps.iter().enumerate() {
            let rec = StepRecord {
                step: i,
                label: s.label.to_string(),
                bindings: s
                    .bindings
                    .iter()
                    .map(|(k, v)| (k.to_string(), text::term_to_string(v, Sort::Any)))
                    .collect(),
                consumed: atoms_text(&s.consumed),
                produced: atoms_text(&s.produced),
            };
            out.push_str(&serde_json::to_string(&rec).expect("serializable"));
            out.push('\n');
        }
        let footer = Footer {
            final_digest: self.final_digest.clone(),
            outcome: self.outcome,
        };
        out.push_str(&serde_json::to_string(&footer).expect("serializable"));
        out.push('\n');
        out
    }

    pub fn from_json_lines(src: &str) -> Result<Trace, KernelError> {
        let bad = |e: serde_json::Error| KernelError::Replay(format!("malformed trace: {e}"));
        let mut lines = src.lines().filter(|l| !l.trim().is_empty());
        let header: Header = serde_json::from_str(
            lines
                .next()
                .ok_or_else(|| KernelError::Replay("empty trace".into()))?,
        )
        .map_err(bad)?;
        if header.format != TRACE_FORMAT || header.version != TRACE_VERSION {
            return Err(KernelError::Replay(format!(
                "unsupported trace format {} v{}",
                header.format, header.version
            )));
        }
        let mut steps = Vec::with_capacity(header.steps);
        for _ in 0..header.steps {
            let line = lines
                .next()
                .ok_or_else(|| KernelError::Replay("truncated trace".into()))?;
            let rec: StepRecord = serde_json::from_str(line).map_err(bad)?;
            let bindings = rec
                .bindings
                .iter()
                .map(|(k, v)| Ok((Sym::from(k.as_str()), text::parse_term(v)?)))
                .collect::<Result<BTreeMap<Sym, Term>, KernelError>>()?;
            steps.push(Step {
                label: Sym::from(rec.label),
                bindings,
                consumed: atoms_parse(&rec.consumed)?,
                produced: atoms_parse(&rec.produced)?,
            });
        }
        let footer: Footer = serde_json::from_str(
            lines
                .next()
                .ok_or_else(|| KernelError::Replay("missing final record".into()))?,
        )
        .map_err(bad)?;
        Ok(Trace {
            initial_digest: header.initial,
            final_digest: footer.final_digest,
            steps,
            outcome: footer.outcome,
        })
    }
}
