//! Finite cognitive categories and the machinery around them.
//!
//! * [`category`]: states with exactly one morphism per ordered pair.
//! * [`generator`]: operations as total endofunctions, with the omnipotent,
//!   reduced, purposeful and canonical set constructions.
//! * [`partition`] and [`quotient`]: evaluators as partitions, quotient
//!   categories, generator transfer and Bell numbers.
//! * [`refine`]: hidden states that turn a nondeterministic operation into a
//!   generator on a finer category.
//! * [`solver`]: problems and the set-image breadth-first planner.
//! * [`dynamics`]: timelines and agent×environment products.
//! * [`dsl`]: the `.ccs` text format.
//! * [`adapters`]: bounded-tape Turing machines and a toy genetic algorithm.
//!
//! The data-parallel loops run on rayon when the `parallel` feature is on
//! (the default); see [`Strategy`].

pub mod adapters;
pub mod category;
pub mod dsl;
pub mod dynamics;
pub mod error;
pub mod generator;
mod par;
pub mod partition;
pub mod quotient;
pub mod refine;
pub mod solver;

pub use category::{compose, CognitiveCategory, Morphism, StateId};
pub use error::{Error, Result};
pub use generator::{
    canonical_set, compose_generators, enumerate_generators, min_omnipotent_size_check, Generator,
    GeneratorSet,
};
pub use par::Strategy;
pub use partition::{bell_number, enumerate_partitions, meet, Partition};
pub use quotient::{
    conjunction, transfer_generator, Controllability, Evaluator, TransferConflict, TransferError,
};
pub use refine::{refine, verify_roundtrip, Outcome, OutcomeRelation, Refinement};
pub use solver::{
    execute_plan, solve, solve_on_quotient, solved_by_canonical, CognitiveProblem, Plan,
    QuotientOutcome, SolveOutcome,
};
