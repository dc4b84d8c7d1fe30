use thiserror::Error;

/// Errors raised by the engine. Domain "no" answers (unsolvable problems,
/// transfer conflicts) are return values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a category needs at least one state")]
    EmptyCategory,
    #[error("state label must not be empty")]
    EmptyLabel,
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),
    #[error("state `{state}` is not in category `{category}`")]
    UnknownState { category: String, state: String },
    #[error("category mismatch: `{left}` vs `{right}`")]
    CategoryMismatch { left: String, right: String },
    #[error("cannot compose: codomain `{cod}` does not match domain `{dom}`")]
    NotComposable { cod: String, dom: String },
    #[error("generator table has {got} entries, category has {expected} states")]
    TableLength { expected: usize, got: usize },
    #[error("generators `{first}` and `{second}` have the same action")]
    DuplicateGenerator { first: String, second: String },
    #[error("generator set is not omnipotent: no member sends `{from}` to `{to}`")]
    NotOmnipotent { from: String, to: String },
    #[error("{what} exceeds the enumeration bound ({value} > {limit})")]
    TooLarge {
        what: &'static str,
        value: u128,
        limit: u128,
    },
    #[error("block `{0}` is empty")]
    EmptyBlock(String),
    #[error("duplicate block label `{0}`")]
    DuplicateBlock(String),
    #[error("state `{state}` appears in blocks `{first}` and `{second}`")]
    OverlappingBlocks {
        state: String,
        first: String,
        second: String,
    },
    #[error("state `{0}` is not covered by any block")]
    UncoveredState(String),
    #[error("unknown block `{0}`")]
    UnknownBlock(String),
    #[error("evaluator `{0}` has blocks other than `pass` and `fail`")]
    NotBinary(String),
    #[error("conjunction needs at least one evaluator")]
    EmptyConjunction,
    #[error("state `{0}` has no outcomes")]
    NoOutcomes(String),
    #[error("duplicate outcome label `{label}` at state `{state}`")]
    DuplicateOutcome { state: String, label: String },
    #[error("relation is not a function at state `{0}`")]
    NotAFunction(String),
    #[error("refinement does not belong to relation `{0}`")]
    MismatchedRefinement(String),
    #[error("{0} set must not be empty")]
    EmptyStateSet(&'static str),
    #[error("transition system is not deterministic at state `{0}`")]
    NotDeterministic(String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("machine did not halt within {budget} steps on tape `{tape}`")]
    NonHalting { tape: String, budget: usize },
    #[error("invalid genetic algorithm fixture: {0}")]
    InvalidFixture(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
