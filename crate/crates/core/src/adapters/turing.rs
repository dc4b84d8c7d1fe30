//! A bounded-tape Turing machine, read as a generator on the category of tapes.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use crate::category::{CognitiveCategory, StateId};
use crate::dsl::Model;
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::par::Strategy;

/// Largest tape category [`tm_generator`] will build.
pub const MAX_TAPES: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

/// `δ(q, s) = (q', s', move)`; a missing entry halts the machine.
pub type Delta = BTreeMap<(String, char), (String, char, Move)>;

/// A machine on a tape of fixed length. The head starts at cell 0 and the run
/// halts when δ is undefined or the head moves off either end.
#[derive(Debug, Clone, PartialEq)]
pub struct TuringMachineSpec {
    pub name: String,
    pub states: Vec<String>,
    /// Tape symbols. Each must be ASCII alphanumeric or `_` so tapes are valid names.
    pub alphabet: Vec<char>,
    pub blank: char,
    pub input: Vec<char>,
    pub delta: Delta,
    pub initial: String,
    pub accepting: Vec<String>,
    pub tape_len: usize,
    pub step_budget: usize,
}

/// Final configuration of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub tape: String,
    pub state: String,
    pub steps: usize,
    pub accepted: bool,
}

/// Index-based form used by the simulator.
struct Compiled {
    symbols: Vec<char>,
    delta: Vec<Option<(usize, usize, Move)>>,
    initial: usize,
}

impl Compiled {
    fn symbol(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    /// Runs in place; returns the halting control state and step count.
    fn run(&self, tape: &mut [usize], budget: usize) -> Option<(usize, usize)> {
        let width = self.symbols.len();
        let (mut q, mut head, mut steps) = (self.initial, 0usize, 0usize);
        loop {
            let Some((next, write, mv)) = self.delta[q * width + tape[head]] else {
                return Some((q, steps));
            };
            if steps == budget {
                return None;
            }
            steps += 1;
            tape[head] = write;
            q = next;
            match mv {
                Move::Left if head == 0 => return Some((q, steps)),
                Move::Left => head -= 1,
                Move::Right if head + 1 == tape.len() => return Some((q, steps)),
                Move::Right => head += 1,
            }
        }
    }

    fn render(&self, tape: &[usize]) -> String {
        tape.iter().map(|&s| self.symbols[s]).collect()
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidMachine(msg.into())
}

impl TuringMachineSpec {
    fn compile(&self) -> Result<Compiled> {
        if self.tape_len == 0 {
            return Err(invalid("tape length must be at least 1"));
        }
        if self.states.is_empty() {
            return Err(invalid("no control states"));
        }
        let mut seen = HashSet::new();
        if let Some(q) = self.states.iter().find(|q| !seen.insert(q.as_str())) {
            return Err(invalid(format!("duplicate control state `{q}`")));
        }
        if self.alphabet.is_empty() {
            return Err(invalid("empty tape alphabet"));
        }
        let mut seen = HashSet::new();
        for &c in &self.alphabet {
            if !(c.is_ascii_alphanumeric() || c == '_') {
                return Err(invalid(format!("tape symbol `{c}` is not alphanumeric")));
            }
            if !seen.insert(c) {
                return Err(invalid(format!("duplicate tape symbol `{c}`")));
            }
        }
        let state = |q: &str| {
            self.states
                .iter()
                .position(|s| s == q)
                .ok_or_else(|| invalid(format!("unknown control state `{q}`")))
        };
        let compiled = Compiled {
            symbols: self.alphabet.clone(),
            delta: Vec::new(),
            initial: state(&self.initial)?,
        };
        let symbol = |c: char| {
            compiled
                .symbol(c)
                .ok_or_else(|| invalid(format!("symbol `{c}` is not in the tape alphabet")))
        };
        symbol(self.blank)?;
        for &c in &self.input {
            symbol(c)?;
        }
        for q in &self.accepting {
            state(q)?;
        }
        let width = self.alphabet.len();
        let mut delta = vec![None; self.states.len() * width];
        for ((q, s), (q2, s2, mv)) in &self.delta {
            delta[state(q)? * width + symbol(*s)?] = Some((state(q2)?, symbol(*s2)?, *mv));
        }
        Ok(Compiled { delta, ..compiled })
    }

    /// Number of length-`tape_len` tapes, if within [`MAX_TAPES`].
    pub fn tape_count(&self) -> Result<usize> {
        let value = u32::try_from(self.tape_len)
            .ok()
            .and_then(|l| (self.alphabet.len() as u128).checked_pow(l))
            .unwrap_or(u128::MAX);
        if value > MAX_TAPES {
            return Err(Error::TooLarge {
                what: "tape count",
                value,
                limit: MAX_TAPES,
            });
        }
        Ok(value as usize)
    }

    /// Runs the machine on one tape.
    pub fn simulate(&self, tape: &str) -> Result<Run> {
        let m = self.compile()?;
        let mut cells = tape
            .chars()
            .map(|c| {
                m.symbol(c)
                    .ok_or_else(|| invalid(format!("symbol `{c}` is not in the tape alphabet")))
            })
            .collect::<Result<Vec<_>>>()?;
        if cells.len() != self.tape_len {
            return Err(invalid(format!(
                "tape `{tape}` has length {}, expected {}",
                cells.len(),
                self.tape_len
            )));
        }
        let (q, steps) = m
            .run(&mut cells, self.step_budget)
            .ok_or_else(|| Error::NonHalting {
                tape: tape.to_string(),
                budget: self.step_budget,
            })?;
        let state = self.states[q].clone();
        Ok(Run {
            tape: m.render(&cells),
            accepted: self.accepting.contains(&state),
            state,
            steps,
        })
    }
}

/// The state label of a tape.
pub fn tape_label(tape: &str) -> String {
    format!("t{tape}")
}

fn decode(mut index: usize, width: usize, len: usize) -> Vec<usize> {
    let mut cells = vec![0; len];
    for cell in cells.iter_mut().rev() {
        *cell = index % width;
        index /= width;
    }
    cells
}

fn encode(cells: &[usize], width: usize) -> usize {
    cells.iter().fold(0, |acc, &c| acc * width + c)
}

pub fn tm_generator(spec: &TuringMachineSpec) -> Result<(Arc<CognitiveCategory>, Generator)> {
    tm_generator_with(spec, Strategy::default())
}

/// Builds the category of all tapes (in lexicographic alphabet order) and the
/// generator sending each tape to its halting tape. Fails if any run exceeds
/// the step budget.
pub fn tm_generator_with(
    spec: &TuringMachineSpec,
    strategy: Strategy,
) -> Result<(Arc<CognitiveCategory>, Generator)> {
    let m = spec.compile()?;
    let count = spec.tape_count()?;
    let width = m.symbols.len();
    let results = strategy.map_range(count, |i| {
        let mut cells = decode(i, width, spec.tape_len);
        m.run(&mut cells, spec.step_budget)
            .map(|_| StateId::new(encode(&cells, width)))
            .ok_or(i)
    });
    let table = results
        .into_iter()
        .map(|r| {
            r.map_err(|i| Error::NonHalting {
                tape: m.render(&decode(i, width, spec.tape_len)),
                budget: spec.step_budget,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..count).map(|i| tape_label(&m.render(&decode(i, width, spec.tape_len))));
    let category = CognitiveCategory::new(format!("{}_tapes", spec.name), labels)?;
    let generator = Generator::new(spec.name.clone(), &category, table)?;
    Ok((category, generator))
}

/// The tape category and generator as a `.ccs` model.
pub fn tm_model(spec: &TuringMachineSpec) -> Result<Model> {
    let (category, generator) = tm_generator(spec)?;
    let mut model = Model::default();
    model.push_category(&category).push_generator(&generator);
    Ok(model)
}

fn binary_machine(
    name: &str,
    states: &[String],
    delta: Delta,
    tape_len: usize,
) -> TuringMachineSpec {
    TuringMachineSpec {
        name: name.to_string(),
        states: states.to_vec(),
        alphabet: vec!['0', '1'],
        blank: '0',
        input: vec!['0', '1'],
        delta,
        initial: states[0].clone(),
        accepting: vec![states[states.len() - 1].clone()],
        tape_len,
        step_budget: tape_len + 1,
    }
}

/// Flips every cell left to right, then falls off the right edge.
pub fn bit_flip_machine(tape_len: usize) -> TuringMachineSpec {
    let q = "q0".to_string();
    let delta = Delta::from([
        ((q.clone(), '0'), (q.clone(), '1', Move::Right)),
        ((q.clone(), '1'), (q.clone(), '0', Move::Right)),
    ]);
    binary_machine("flip", &[q], delta, tape_len)
}

/// No transitions: halts immediately on every tape.
pub fn empty_machine(tape_len: usize) -> TuringMachineSpec {
    binary_machine("halt", &["q0".to_string()], Delta::new(), tape_len)
}

/// Overwrites the whole tape with `target` (a string over `0`/`1`).
pub fn constant_writer_machine(target: &str) -> TuringMachineSpec {
    let len = target.chars().count();
    let states: Vec<String> = (0..=len).map(|i| format!("q{i}")).collect();
    let mut delta = Delta::new();
    for (i, w) in target.chars().enumerate() {
        for s in ['0', '1'] {
            delta.insert(
                (states[i].clone(), s),
                (states[i + 1].clone(), w, Move::Right),
            );
        }
    }
    binary_machine("write", &states, delta, len)
}
