//! A toy genetic algorithm whose random seed is an explicit counter in the state.
//!
//! States are `(population, counter)` pairs labeled like `p010_110_c2`: one
//! bitstring per individual, then the counter. Populations are ordered
//! lexicographically, counters vary fastest.

use std::sync::Arc;

use crate::category::{CognitiveCategory, StateId};
use crate::dsl::Model;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::quotient::Evaluator;
use crate::refine::{Outcome, OutcomeRelation};
use crate::solver::CognitiveProblem;

/// Largest `(population, counter)` category [`ga_fixture`] will build.
pub const MAX_GA_STATES: u128 = 1_000_000;

pub const V_OPT: &str = "V_opt";
pub const V_NOT: &str = "V_not";

/// Both rules flip bit `c mod ℓ` of individual `c mod m` at counter `c`,
/// then advance the counter to `c + 1 mod C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MutationRule {
    /// Always keep the mutant.
    Flip,
    /// Keep the mutant only if it has at least as many ones as its parent.
    Elitist,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAToySpec {
    /// Bits per individual.
    pub length: usize,
    /// Individuals per population.
    pub population: usize,
    /// A population passes iff some individual has at least this many ones.
    pub threshold: usize,
    pub counter_range: usize,
    pub rule: MutationRule,
    /// The initial population, one bitstring per individual.
    pub start: Vec<String>,
}

impl GAToySpec {
    /// Single individual, counter range equal to the length.
    pub fn single(length: usize, threshold: usize, rule: MutationRule, start: &str) -> Self {
        GAToySpec {
            length,
            population: 1,
            threshold,
            counter_range: length,
            rule,
            start: vec![start.to_string()],
        }
    }

    fn bits(&self) -> usize {
        self.length * self.population
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFixture(msg));
        if self.length == 0 || self.population == 0 || self.counter_range == 0 {
            return bad("length, population and counter range must be positive".into());
        }
        if self.threshold > self.length {
            return bad(format!(
                "threshold {} exceeds the bitstring length {}",
                self.threshold, self.length
            ));
        }
        let value = u32::try_from(self.bits())
            .ok()
            .and_then(|b| 2u128.checked_pow(b))
            .and_then(|p| p.checked_mul(self.counter_range as u128))
            .unwrap_or(u128::MAX);
        if value > MAX_GA_STATES {
            return Err(Error::TooLarge {
                what: "population category",
                value,
                limit: MAX_GA_STATES,
            });
        }
        if self.start.len() != self.population {
            return bad(format!(
                "start population has {} individuals, expected {}",
                self.start.len(),
                self.population
            ));
        }
        for s in &self.start {
            if s.len() != self.length || !s.bytes().all(|b| b == b'0' || b == b'1') {
                return bad(format!(
                    "`{s}` is not a bitstring of length {}",
                    self.length
                ));
            }
        }
        Ok(())
    }

    fn population_count(&self) -> usize {
        1 << self.bits()
    }

    /// Bit `j` of individual `i`; individual 0's first bit is most significant.
    fn mask(&self, i: usize, j: usize) -> usize {
        1 << (self.bits() - 1 - (i * self.length + j))
    }

    fn individual(&self, pop: usize, i: usize) -> usize {
        let shift = self.bits() - (i + 1) * self.length;
        (pop >> shift) & ((1 << self.length) - 1)
    }

    fn fitness(&self, pop: usize) -> usize {
        (0..self.population)
            .map(|i| self.individual(pop, i).count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// The population after mutating at counter `c`.
    fn mutate(&self, pop: usize, c: usize) -> usize {
        let mask = self.mask(c % self.population, c % self.length);
        match self.rule {
            MutationRule::Elitist if pop & mask != 0 => pop,
            _ => pop ^ mask,
        }
    }

    fn population_label(&self, pop: usize) -> String {
        (0..self.population)
            .map(|i| format!("{:0w$b}", self.individual(pop, i), w = self.length))
            .collect::<Vec<_>>()
            .join("_")
    }

    fn encode_start(&self) -> usize {
        self.start
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.bytes().enumerate().map(move |(j, b)| (i, j, b)))
            .filter(|&(_, _, b)| b == b'1')
            .fold(0, |acc, (i, j, _)| acc | self.mask(i, j))
    }
}

/// The explicit-seed system: its category, the mutation generator, the
/// fitness evaluator and the problem of evolving the start population.
#[derive(Debug, Clone)]
pub struct GaFixture {
    pub spec: GAToySpec,
    pub category: Arc<CognitiveCategory>,
    pub mutation: Generator,
    /// Blocks `V_not` (omitted when empty) then `V_opt`.
    pub fitness: Evaluator,
    /// Outset: the start population under every counter value. Goal: `V_opt`.
    pub problem: CognitiveProblem,
}

impl GaFixture {
    pub fn v_opt(&self) -> StateId {
        self.block(V_OPT).expect("V_opt is never empty")
    }

    pub fn v_not(&self) -> Option<StateId> {
        self.block(V_NOT)
    }

    fn block(&self, label: &str) -> Option<StateId> {
        self.fitness
            .partition()
            .block_by_label(label)
            .map(StateId::new)
    }

    /// `V_not → V_opt` as a problem on the source category: a solution must
    /// work from every failing state, whatever its counter.
    pub fn block_problem(&self) -> Result<CognitiveProblem> {
        let v_not = self.v_not().ok_or(Error::EmptyStateSet("outset"))?;
        CognitiveProblem::new(
            &self.category,
            self.fitness.block_states(v_not)?.to_vec(),
            self.fitness.block_states(self.v_opt())?.to_vec(),
            self.problem.available().clone(),
        )
    }

    /// The fixture as a `.ccs` model; the problem is named `evolve`.
    pub fn model(&self) -> Model {
        let mut model = Model::default();
        model
            .push_category(&self.category)
            .push_generator(&self.mutation)
            .push_evaluator(&self.fitness)
            .push_problem("evolve", &self.problem);
        model
    }
}

pub fn ga_fixture(spec: &GAToySpec) -> Result<GaFixture> {
    spec.validate()?;
    let c_range = spec.counter_range;
    let states = spec.population_count() * c_range;
    let labels =
        (0..states).map(|x| format!("p{}_c{}", spec.population_label(x / c_range), x % c_range));
    let category = CognitiveCategory::new("P", labels)?;
    let table = (0..states)
        .map(|x| {
            let (pop, c) = (x / c_range, x % c_range);
            StateId::new(spec.mutate(pop, c) * c_range + (c + 1) % c_range)
        })
        .collect();
    let mutation = Generator::new("mutate", &category, table)?;

    let (opt, not): (Vec<StateId>, Vec<StateId>) = category
        .states()
        .partition(|x| spec.fitness(x.index() / c_range) >= spec.threshold);
    let blocks = [(V_NOT, not), (V_OPT, opt.clone())]
        .into_iter()
        .filter(|(_, members)| !members.is_empty());
    let fitness = Evaluator::from_blocks("fitness", &category, blocks)?;

    let start = spec.encode_start();
    let outset = (0..c_range).map(|c| StateId::new(start * c_range + c));
    let available = crate::generator::GeneratorSet::new(&category, vec![mutation.clone()])?;
    let problem = CognitiveProblem::new(&category, outset, opt, available)?;
    Ok(GaFixture {
        spec: spec.clone(),
        category,
        mutation,
        fitness,
        problem,
    })
}

/// Mutation seen without the seed: a relation on populations alone with one
/// outcome (labeled `c{k}`) per counter value. It is not a function as soon as
/// two counters give different results, and must be refined before use.
pub fn population_relation(spec: &GAToySpec) -> Result<OutcomeRelation> {
    spec.validate()?;
    let pops = spec.population_count();
    let category = CognitiveCategory::new(
        "P_obs",
        (0..pops).map(|p| format!("p{}", spec.population_label(p))),
    )?;
    let outcomes = (0..pops)
        .map(|p| {
            (0..spec.counter_range)
                .map(|c| Outcome {
                    label: format!("c{c}"),
                    target: StateId::new(spec.mutate(p, c)),
                    probability: Some(1.0 / spec.counter_range as f64),
                })
                .collect()
        })
        .collect();
    OutcomeRelation::new("mutate_obs", &category, outcomes)
}
