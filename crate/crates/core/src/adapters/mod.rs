//! Grounded examples: Turing machines and a toy genetic algorithm.

mod genetic;
mod turing;

pub use genetic::*;
pub use turing::*;
