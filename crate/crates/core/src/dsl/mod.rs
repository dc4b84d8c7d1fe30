//! The `.ccs` text format.
//!
//! ```text
//! # four states and a cycle
//! category S4 {
//!   states: s1, s2, s3, s4;
//! }
//!
//! generator cycle over S4 {
//!   s1 -> s2;
//!   s2 -> s3;
//!   s3 -> s4;
//!   s4 -> s1;
//! }
//!
//! problem reach over S4 {
//!   outset: {s1};
//!   goal: {s3};
//!   using: cycle;
//! }
//! ```
//!
//! Evaluators list blocks (`VA = {s1, s2};`), relations list labeled
//! outcomes with an optional probability annotation (`O -> {a: T1 @ 0.5};`),
//! and transitions are `deterministic` or `indeterministic` successor sets.
//! `#` starts a comment unless it continues a name, so refined labels such as
//! `O#a` are single names.

mod model;
mod parser;
mod printer;
mod resolve;

pub use model::*;
pub use parser::{is_valid_name, parse_syntax, MAX_DIAGNOSTICS};
pub use printer::print;
pub use resolve::{resolve, validate, Workspace};

/// Parses and validates. Warnings do not fail the parse.
pub fn parse(text: &str) -> Result<Model, Vec<Diagnostic>> {
    let (model, mut diags) = parse_syntax(text);
    if diags.is_empty() {
        diags = validate(&model);
    }
    if diags.iter().any(Diagnostic::is_error) {
        diags.truncate(MAX_DIAGNOSTICS);
        Err(diags)
    } else {
        Ok(model)
    }
}

/// All diagnostics for `text`: syntax first, semantics only if the syntax is clean.
pub fn check(text: &str) -> Vec<Diagnostic> {
    let (model, diags) = parse_syntax(text);
    if !diags.is_empty() {
        return diags;
    }
    let mut diags = validate(&model);
    diags.truncate(MAX_DIAGNOSTICS);
    diags
}

/// Parses, validates and resolves in one step.
pub fn load(text: &str) -> Result<(Model, Workspace), Vec<Diagnostic>> {
    let model = parse(text)?;
    let ws = resolve(&model)?;
    Ok((model, ws))
}
