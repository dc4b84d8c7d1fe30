//! Cognitive problems and the breadth-first planner.
//!
//! A search node is the image of the whole outset set under the composition
//! applied so far, so a plan found here works for every outset state at once.
//! There are at most `2ⁿ` such nodes; an exhausted frontier is a definitive
//! "no plan exists".
//!
//! Each layer's children can be computed in parallel. They are merged back
//! in (frontier order, generator order), so the result does not depend on
//! the strategy.

use std::collections::HashSet;
use std::sync::Arc;

use crate::category::{ensure_same, CognitiveCategory, StateId};
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorSet};
use crate::par::Strategy;
use crate::quotient::{Evaluator, TransferConflict, TransferError};

/// Fixed-capacity bitset over the states of one category.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    words: Vec<u64>,
}

impl StateSet {
    pub fn empty(n: usize) -> Self {
        StateSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_states(n: usize, states: impl IntoIterator<Item = StateId>) -> Self {
        let mut s = StateSet::empty(n);
        for x in states {
            s.insert(x);
        }
        s
    }

    pub fn insert(&mut self, x: StateId) {
        self.words[x.index() / 64] |= 1 << (x.index() % 64);
    }

    pub fn contains(&self, x: StateId) -> bool {
        self.words[x.index() / 64] >> (x.index() % 64) & 1 == 1
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = StateId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| StateId::new(i * 64 + b))
        })
    }

    /// Image of this set under `g`.
    pub fn image(&self, g: &Generator) -> StateSet {
        let mut out = StateSet {
            words: vec![0; self.words.len()],
        };
        for x in self.iter() {
            out.insert(g.image(x));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct CognitiveProblem {
    category: Arc<CognitiveCategory>,
    outset: Vec<StateId>,
    goal: Vec<StateId>,
    available: GeneratorSet,
}

impl CognitiveProblem {
    /// Outset and goal are stored sorted and deduplicated.
    pub fn new(
        category: &Arc<CognitiveCategory>,
        outset: impl IntoIterator<Item = StateId>,
        goal: impl IntoIterator<Item = StateId>,
        available: GeneratorSet,
    ) -> Result<Self> {
        let normalize = |states: Vec<StateId>, what| -> Result<Vec<StateId>> {
            if states.is_empty() {
                return Err(Error::EmptyStateSet(what));
            }
            for &s in &states {
                category.check(s)?;
            }
            let mut states = states;
            states.sort_unstable();
            states.dedup();
            Ok(states)
        };
        let outset = normalize(outset.into_iter().collect(), "outset")?;
        let goal = normalize(goal.into_iter().collect(), "goal")?;
        ensure_same(category, available.category())?;
        Ok(CognitiveProblem {
            category: Arc::clone(category),
            outset,
            goal,
            available,
        })
    }

    pub fn category(&self) -> &Arc<CognitiveCategory> {
        &self.category
    }

    pub fn outset(&self) -> &[StateId] {
        &self.outset
    }

    pub fn goal(&self) -> &[StateId] {
        &self.goal
    }

    pub fn available(&self) -> &GeneratorSet {
        &self.available
    }

    /// Every outset state lands in the goal under `g`.
    pub fn is_solved_by(&self, g: &Generator) -> bool {
        self.outset.iter().all(|&x| self.goal.contains(&g.image(x)))
    }

    /// `2ⁿ`, the number of distinct search nodes; saturates for large `n`.
    pub fn default_max_depth(&self) -> usize {
        u32::try_from(self.category.len())
            .ok()
            .and_then(|n| 1usize.checked_shl(n))
            .unwrap_or(usize::MAX)
    }
}

/// A sequence of generators; `steps[0]` is applied first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    steps: Vec<Generator>,
    induced: Generator,
}

impl Plan {
    pub fn new(category: &Arc<CognitiveCategory>, steps: Vec<Generator>) -> Result<Self> {
        let mut induced = Generator::identity(category);
        for s in &steps {
            induced = s.after(&induced)?;
        }
        let induced = induced.with_name(if steps.is_empty() {
            "id".to_string()
        } else {
            steps
                .iter()
                .rev()
                .map(Generator::name)
                .collect::<Vec<_>>()
                .join("_o_")
        });
        Ok(Plan { steps, induced })
    }

    pub fn steps(&self) -> &[Generator] {
        &self.steps
    }

    pub fn step_names(&self) -> Vec<&str> {
        self.steps.iter().map(Generator::name).collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The composite generator `steps[k-1] ∘ … ∘ steps[0]`.
    pub fn induced(&self) -> &Generator {
        &self.induced
    }

    /// Applies the steps one by one.
    pub fn execute(&self, state: StateId) -> Result<StateId> {
        self.induced.category().check(state)?;
        Ok(self.steps.iter().fold(state, |x, g| g.image(x)))
    }

    /// `state` followed by the state after each step.
    pub fn trace(&self, state: StateId) -> Result<Vec<StateId>> {
        self.induced.category().check(state)?;
        let mut out = vec![state];
        for g in &self.steps {
            out.push(g.image(*out.last().expect("non-empty")));
        }
        Ok(out)
    }
}

pub fn execute_plan(plan: &Plan, state: StateId) -> Result<StateId> {
    plan.execute(state)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Plan),
    /// `exhausted` means every reachable node was expanded, so no plan of
    /// any length exists; otherwise the search stopped at `depth`.
    Unsolvable {
        depth: usize,
        exhausted: bool,
    },
}

impl SolveOutcome {
    pub fn plan(&self) -> Option<&Plan> {
        match self {
            SolveOutcome::Solved(p) => Some(p),
            SolveOutcome::Unsolvable { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotientOutcome {
    /// The plan names source generators and runs on the source category.
    Solved(Plan),
    Unsolvable {
        depth: usize,
        exhausted: bool,
    },
    TransferFailure(Vec<TransferConflict>),
}

/// Shortest plan, ties broken by generator declaration order.
pub fn solve(problem: &CognitiveProblem, max_depth: usize) -> SolveOutcome {
    solve_with(problem, max_depth, Strategy::default())
}

pub fn solve_with(
    problem: &CognitiveProblem,
    max_depth: usize,
    strategy: Strategy,
) -> SolveOutcome {
    let n = problem.category.len();
    let goal = StateSet::from_states(n, problem.goal.iter().copied());
    let start = StateSet::from_states(n, problem.outset.iter().copied());
    let gens = problem.available.members();

    let build = |path: Vec<usize>| {
        let steps = path.into_iter().map(|i| gens[i].clone()).collect();
        Plan::new(&problem.category, steps).expect("members share the category")
    };

    if start.is_subset(&goal) {
        return SolveOutcome::Solved(build(Vec::new()));
    }

    // Every node remembers its parent and the generator that produced it.
    let mut parents: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    let mut visited: HashSet<StateSet> = HashSet::from([start.clone()]);
    let mut frontier: Vec<(usize, StateSet)> = vec![(0, start)];
    let mut depth = 0;

    let path_to = |parents: &[(usize, usize)], mut node: usize| {
        let mut path = Vec::new();
        while node != 0 {
            let (parent, g) = parents[node];
            path.push(g);
            node = parent;
        }
        path.reverse();
        path
    };

    while !frontier.is_empty() && depth < max_depth {
        depth += 1;
        let children: Vec<Vec<StateSet>> = strategy.map(&frontier, |(_, set)| {
            gens.iter().map(|g| set.image(g)).collect()
        });
        let mut next = Vec::new();
        for ((node, _), images) in frontier.iter().zip(children) {
            for (gi, image) in images.into_iter().enumerate() {
                if visited.contains(&image) {
                    continue;
                }
                let id = parents.len();
                parents.push((*node, gi));
                if image.is_subset(&goal) {
                    return SolveOutcome::Solved(build(path_to(&parents, id)));
                }
                visited.insert(image.clone());
                next.push((id, image));
            }
        }
        frontier = next;
    }
    SolveOutcome::Unsolvable {
        depth,
        exhausted: frontier.is_empty(),
    }
}

/// Solves `block_outset → block_goal` on the evaluator's quotient after
/// transferring every available generator.
pub fn solve_on_quotient(
    evaluator: &Evaluator,
    block_outset: StateId,
    block_goal: StateId,
    available: &GeneratorSet,
    max_depth: usize,
) -> Result<QuotientOutcome> {
    let quotient = evaluator.quotient();
    quotient.check(block_outset)?;
    quotient.check(block_goal)?;
    ensure_same(evaluator.source(), available.category())?;

    let mut conflicts = Vec::new();
    let mut transferred = Vec::new();
    for g in available {
        match evaluator.transfer(g) {
            Ok(q) => transferred.push(q),
            Err(TransferError::Conflict(c)) => conflicts.push(c),
            Err(TransferError::Invalid(e)) => return Err(e),
        }
    }
    if !conflicts.is_empty() {
        return Ok(QuotientOutcome::TransferFailure(conflicts));
    }

    // Quotient actions can coincide; keep the first source generator of each.
    let mut seen = HashSet::new();
    let mut sources = Vec::new();
    let mut members = Vec::new();
    for (g, q) in available.iter().zip(transferred) {
        if seen.insert(q.table().to_vec()) {
            sources.push(g.clone());
            members.push(q);
        }
    }
    let set = GeneratorSet::new(quotient, members)?;
    let problem = CognitiveProblem::new(quotient, [block_outset], [block_goal], set)?;
    Ok(match solve(&problem, max_depth) {
        SolveOutcome::Solved(plan) => {
            let steps = plan
                .steps()
                .iter()
                .map(|q| {
                    let i = problem
                        .available()
                        .iter()
                        .position(|m| m == q)
                        .expect("member");
                    sources[i].clone()
                })
                .collect();
            QuotientOutcome::Solved(Plan::new(evaluator.source(), steps)?)
        }
        SolveOutcome::Unsolvable { depth, exhausted } => {
            QuotientOutcome::Unsolvable { depth, exhausted }
        }
    })
}

/// `[const_T]` for the first goal state `T`.
pub fn solved_by_canonical(problem: &CognitiveProblem) -> Plan {
    let target = problem.goal[0];
    let g = Generator::constant(&problem.category, target).expect("goal state in category");
    Plan::new(&problem.category, vec![g]).expect("same category")
}
