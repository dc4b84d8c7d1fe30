//! Time and agents encoded as states: bounded timelines of a transition
//! system, and agent×environment product categories.
//!
//! Timeline and product categories are ordinary cognitive categories, so
//! generators, evaluators and the planner apply to them unchanged.

use std::sync::Arc;

use crate::category::{ensure_same, CognitiveCategory, StateId};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::partition::Partition;
use crate::quotient::Evaluator;

/// Largest number of timelines or product states a builder will create.
pub const MAX_GENERATED_STATES: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transitions {
    Deterministic(Generator),
    /// Per state, the sorted non-empty set of possible successors.
    Indeterministic(Vec<Vec<StateId>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    name: String,
    base: Arc<CognitiveCategory>,
    kind: Transitions,
}

impl TransitionSystem {
    pub fn deterministic(name: impl Into<String>, step: Generator) -> Self {
        TransitionSystem {
            name: name.into(),
            base: Arc::clone(step.category()),
            kind: Transitions::Deterministic(step),
        }
    }

    pub fn indeterministic(
        name: impl Into<String>,
        base: &Arc<CognitiveCategory>,
        successors: Vec<Vec<StateId>>,
    ) -> Result<Self> {
        if successors.len() != base.len() {
            return Err(Error::TableLength {
                expected: base.len(),
                got: successors.len(),
            });
        }
        let mut sorted = Vec::with_capacity(successors.len());
        for (x, mut succ) in successors.into_iter().enumerate() {
            if succ.is_empty() {
                return Err(Error::NoOutcomes(base.label(StateId::new(x)).to_string()));
            }
            for &s in &succ {
                base.check(s)?;
            }
            succ.sort_unstable();
            succ.dedup();
            sorted.push(succ);
        }
        Ok(TransitionSystem {
            name: name.into(),
            base: Arc::clone(base),
            kind: Transitions::Indeterministic(sorted),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Arc<CognitiveCategory> {
        &self.base
    }

    pub fn kind(&self) -> &Transitions {
        &self.kind
    }

    pub fn is_deterministic(&self) -> bool {
        matches!(self.kind, Transitions::Deterministic(_))
    }

    /// Successors of `x` in ordinal order.
    pub fn successors(&self, x: StateId) -> Vec<StateId> {
        match &self.kind {
            Transitions::Deterministic(g) => vec![g.image(x)],
            Transitions::Indeterministic(s) => s[x.index()].clone(),
        }
    }

    /// Consecutive entries follow the transitions.
    pub fn admits(&self, timeline: &[StateId]) -> bool {
        timeline.iter().all(|&x| self.base.contains(x))
            && timeline
                .windows(2)
                .all(|w| self.successors(w[0]).contains(&w[1]))
    }

    /// Number of valid timelines of length `horizon`, saturating.
    pub fn timeline_count(&self, horizon: usize) -> u128 {
        let mut counts = vec![1u128; self.base.len()];
        for _ in 1..horizon {
            counts = self
                .base
                .states()
                .map(|x| {
                    self.successors(x)
                        .iter()
                        .fold(0u128, |acc, s| acc.saturating_add(counts[s.index()]))
                })
                .collect();
        }
        counts.iter().fold(0u128, |a, &c| a.saturating_add(c))
    }
}

/// `entries[0] = start`, `entries[t+1] = f(entries[t])`.
pub fn unroll_deterministic(
    ts: &TransitionSystem,
    start: StateId,
    horizon: usize,
) -> Result<Vec<StateId>> {
    let Transitions::Deterministic(step) = &ts.kind else {
        return Err(Error::NotDeterministic(ts.name.clone()));
    };
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    ts.base.check(start)?;
    let mut out = Vec::with_capacity(horizon);
    out.push(start);
    while out.len() < horizon {
        out.push(step.image(*out.last().expect("non-empty")));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct TimelineCategory {
    pub category: Arc<CognitiveCategory>,
    pub timelines: Vec<Vec<StateId>>,
    /// Groups timelines by their first entry; blocks carry base labels.
    pub projection: Evaluator,
}

/// All valid timelines of length `horizon`, in lexicographic ordinal order,
/// labeled by joining base labels with `-`.
pub fn timeline_category(ts: &TransitionSystem, horizon: usize) -> Result<TimelineCategory> {
    if horizon == 0 {
        return Err(Error::ZeroHorizon);
    }
    let count = ts.timeline_count(horizon);
    if count > MAX_GENERATED_STATES {
        return Err(Error::TooLarge {
            what: "timeline count",
            value: count,
            limit: MAX_GENERATED_STATES,
        });
    }

    fn extend(
        ts: &TransitionSystem,
        horizon: usize,
        prefix: &mut Vec<StateId>,
        out: &mut Vec<Vec<StateId>>,
    ) {
        if prefix.len() == horizon {
            out.push(prefix.clone());
            return;
        }
        for s in ts.successors(*prefix.last().expect("non-empty prefix")) {
            prefix.push(s);
            extend(ts, horizon, prefix, out);
            prefix.pop();
        }
    }

    let mut timelines = Vec::with_capacity(count as usize);
    for x in ts.base.states() {
        extend(ts, horizon, &mut vec![x], &mut timelines);
    }
    let base = &ts.base;
    let labels = timelines.iter().map(|t| {
        t.iter()
            .map(|&s| base.label(s))
            .collect::<Vec<_>>()
            .join("-")
    });
    let category = CognitiveCategory::new(format!("{}_h{}", ts.name, horizon), labels)?;
    let assignment: Vec<usize> = timelines.iter().map(|t| t[0].index()).collect();
    let partition = Partition::from_assignment(&category, &assignment, |i| {
        base.label(StateId::new(i)).to_string()
    })?;
    let projection = Evaluator::new(format!("{}_t0", ts.name), partition)?;
    Ok(TimelineCategory {
        category,
        timelines,
        projection,
    })
}

fn check_product_size(agent: &CognitiveCategory, env: &CognitiveCategory) -> Result<()> {
    let size = agent.len() as u128 * env.len() as u128;
    if size > MAX_GENERATED_STATES {
        return Err(Error::TooLarge {
            what: "product size",
            value: size,
            limit: MAX_GENERATED_STATES,
        });
    }
    Ok(())
}

/// States `a⊗e`, agent-major.
pub fn product_category(
    agent: &Arc<CognitiveCategory>,
    env: &Arc<CognitiveCategory>,
) -> Result<Arc<CognitiveCategory>> {
    check_product_size(agent, env)?;
    let labels = agent
        .labels()
        .iter()
        .flat_map(|a| env.labels().iter().map(move |e| format!("{a}⊗{e}")));
    CognitiveCategory::new(format!("{}⊗{}", agent.name(), env.name()), labels)
}

/// State of the product for the pair `(a, e)`.
pub fn product_state(env: &CognitiveCategory, a: StateId, e: StateId) -> StateId {
    StateId::new(a.index() * env.len() + e.index())
}

/// Marginal evaluator onto the agent factor.
pub fn agent_projection(
    product: &Arc<CognitiveCategory>,
    agent: &Arc<CognitiveCategory>,
    env: &Arc<CognitiveCategory>,
) -> Result<Evaluator> {
    let expected = product_category(agent, env)?;
    ensure_same(product, &expected)?;
    let assignment: Vec<usize> = (0..product.len()).map(|i| i / env.len()).collect();
    let p = Partition::from_assignment(product, &assignment, |i| {
        agent.label(StateId::new(i)).to_string()
    })?;
    Evaluator::new(agent.name(), p)
}

/// Marginal evaluator onto the environment factor.
pub fn environment_projection(
    product: &Arc<CognitiveCategory>,
    agent: &Arc<CognitiveCategory>,
    env: &Arc<CognitiveCategory>,
) -> Result<Evaluator> {
    let expected = product_category(agent, env)?;
    ensure_same(product, &expected)?;
    let assignment: Vec<usize> = (0..product.len()).map(|i| i % env.len()).collect();
    let p = Partition::from_assignment(product, &assignment, |i| {
        env.label(StateId::new(i)).to_string()
    })?;
    Evaluator::new(env.name(), p)
}
