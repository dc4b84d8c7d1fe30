//! Builders from raw tables and independent oracles shared by the
//! integration tests. The oracles work on plain `Vec<usize>` tables and never
//! call into the engine.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use ccs_core::dsl::Model;
use ccs_core::dynamics::TransitionSystem;
use ccs_core::{
    CognitiveCategory, CognitiveProblem, Evaluator, Generator, GeneratorSet, Outcome,
    OutcomeRelation, Partition, StateId,
};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn st(i: usize) -> StateId {
    StateId::new(i)
}

pub fn cat(n: usize) -> Arc<CognitiveCategory> {
    CognitiveCategory::new(format!("S{n}"), (0..n).map(|i| format!("s{i}"))).unwrap()
}

pub fn generator(cat: &Arc<CognitiveCategory>, name: &str, table: &[usize]) -> Generator {
    Generator::new(name, cat, table.iter().map(|&t| st(t)).collect()).unwrap()
}

/// Renumbers arbitrary block ids densely in order of first appearance.
pub fn normalize(assignment: &[usize]) -> Vec<usize> {
    let mut seen = Vec::new();
    assignment
        .iter()
        .map(|b| match seen.iter().position(|s| s == b) {
            Some(i) => i,
            None => {
                seen.push(*b);
                seen.len() - 1
            }
        })
        .collect()
}

pub fn partition(cat: &Arc<CognitiveCategory>, assignment: &[usize]) -> Partition {
    Partition::from_assignment(cat, &normalize(assignment), |i| format!("B{i}")).unwrap()
}

pub fn evaluator(cat: &Arc<CognitiveCategory>, assignment: &[usize]) -> Evaluator {
    Evaluator::new("E", partition(cat, assignment)).unwrap()
}

pub fn relation(cat: &Arc<CognitiveCategory>, targets: &[Vec<usize>]) -> OutcomeRelation {
    let outcomes = targets
        .iter()
        .map(|ts| {
            ts.iter()
                .enumerate()
                .map(|(k, &t)| Outcome {
                    label: format!("o{k}"),
                    target: st(t),
                    probability: None,
                })
                .collect()
        })
        .collect();
    OutcomeRelation::new("r", cat, outcomes).unwrap()
}

/// Drops repeated tables, keeping the first; the survivors are `g0, g1, ...`
/// in their original order.
pub fn distinct_tables(tables: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    tables
        .iter()
        .filter(|t| seen.insert((*t).clone()))
        .cloned()
        .collect()
}

pub fn generator_set(cat: &Arc<CognitiveCategory>, tables: &[Vec<usize>]) -> GeneratorSet {
    let members = tables
        .iter()
        .enumerate()
        .map(|(i, t)| generator(cat, &format!("g{i}"), t))
        .collect();
    GeneratorSet::new(cat, members).unwrap()
}

pub fn problem(
    cat: &Arc<CognitiveCategory>,
    tables: &[Vec<usize>],
    outset: &[usize],
    goal: &[usize],
) -> CognitiveProblem {
    CognitiveProblem::new(
        cat,
        outset.iter().map(|&s| st(s)),
        goal.iter().map(|&s| st(s)),
        generator_set(cat, tables),
    )
    .unwrap()
}

// ---- oracles ----

/// The lexicographically first shortest sequence of generator indices (applied
/// left to right) taking every outset state into the goal, searching all
/// sequences up to `max_len`.
pub fn brute_force_plan(
    tables: &[Vec<usize>],
    outset: &[usize],
    goal: &[usize],
    max_len: usize,
) -> Option<Vec<usize>> {
    let goal: HashSet<usize> = goal.iter().copied().collect();
    let k = tables.len();
    for len in 0..=max_len {
        if len > 0 && k == 0 {
            return None;
        }
        let total = k.pow(len as u32);
        for code in 0..total {
            let mut seq = vec![0; len];
            let mut c = code;
            for slot in seq.iter_mut().rev() {
                *slot = c % k;
                c /= k;
            }
            let ok = outset.iter().all(|&x| {
                let y = seq.iter().fold(x, |s, &g| tables[g][s]);
                goal.contains(&y)
            });
            if ok {
                return Some(seq);
            }
        }
    }
    None
}

/// Whether any element of the monoid generated by `tables` (identity
/// included) sends the whole outset into the goal.
pub fn monoid_solvable(n: usize, tables: &[Vec<usize>], outset: &[usize], goal: &[usize]) -> bool {
    let goal: HashSet<usize> = goal.iter().copied().collect();
    let hits = |m: &[usize]| outset.iter().all(|&x| goal.contains(&m[x]));
    let id: Vec<usize> = (0..n).collect();
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        if hits(&m) {
            return true;
        }
        for t in tables {
            let next: Vec<usize> = m.iter().map(|&y| t[y]).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    false
}

/// Indices (in first-appearance order of block ids) of blocks whose members'
/// images land in more than one block.
pub fn conflicting_blocks(assignment: &[usize], table: &[usize]) -> Vec<usize> {
    let a = normalize(assignment);
    let blocks = a.iter().max().map_or(0, |m| m + 1);
    (0..blocks)
        .filter(|&b| {
            let images: BTreeSet<usize> = (0..a.len())
                .filter(|&x| a[x] == b)
                .map(|x| a[table[x]])
                .collect();
            images.len() > 1
        })
        .collect()
}

/// Truncated Dobinski sum `e⁻¹ Σ k^n / k!`.
pub fn dobinski(n: u32, terms: u32) -> f64 {
    let mut sum = 0.0;
    let mut fact = 1.0;
    for k in 0..terms {
        if k > 0 {
            fact *= k as f64;
        }
        sum += (k as f64).powi(n as i32) / fact;
    }
    sum / std::f64::consts::E
}

/// Number of set partitions of `n` labeled items by counting restricted
/// growth strings directly.
pub fn count_partitions(n: usize) -> usize {
    fn go(pos: usize, n: usize, max: usize) -> usize {
        if pos == n {
            return 1;
        }
        (0..=max + 1).map(|b| go(pos + 1, n, max.max(b))).sum()
    }
    if n == 0 {
        1
    } else {
        go(1, n, 0)
    }
}

// ---- random data ----

pub fn random_table(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

pub fn random_assignment(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n);
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

pub fn random_subset(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

const LABELS: &[&str] = &[
    "a",
    "b",
    "x1",
    "O#a",
    "O#b",
    "p⊗q",
    "x-y",
    "_u",
    "states",
    "over",
    "S",
    "T2",
    "category",
    "deterministic",
    "V_opt",
    "t0101",
    "using",
    "goal",
];

fn pick_labels(rng: &mut impl Rng, n: usize) -> Vec<String> {
    let mut pool: Vec<&str> = LABELS.to_vec();
    pool.shuffle(rng);
    pool.into_iter().take(n).map(String::from).collect()
}

/// A valid model mixing every declaration kind over one or two categories,
/// in shuffled order (forward references are legal).
pub fn random_model(rng: &mut impl Rng) -> Model {
    let mut parts: Vec<Model> = Vec::new();
    let mut counter = 0;
    let mut fresh = |prefix: &str| {
        counter += 1;
        format!("{prefix}{counter}")
    };
    for _ in 0..rng.gen_range(1..=2) {
        let n = rng.gen_range(1..=6);
        let cat = CognitiveCategory::new(fresh("C"), pick_labels(rng, n)).unwrap();
        let mut m = Model::default();
        m.push_category(&cat);
        parts.push(m);

        let mut tables = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            tables.push(random_table(rng, n));
        }
        let tables = distinct_tables(&tables);
        let gens: Vec<Generator> = tables
            .iter()
            .map(|t| generator(&cat, &fresh("g"), t))
            .collect();
        for g in &gens {
            let mut m = Model::default();
            m.push_generator(g);
            parts.push(m);
        }
        if rng.gen_bool(0.7) {
            let a = normalize(&random_assignment(rng, n));
            let labels = pick_labels(rng, n);
            let p = Partition::from_assignment(&cat, &a, |i| labels[i].clone()).unwrap();
            let mut m = Model::default();
            m.push_evaluator(&Evaluator::new(fresh("e"), p).unwrap());
            parts.push(m);
        }
        if rng.gen_bool(0.7) {
            let outcomes = (0..n)
                .map(|_| {
                    let k = rng.gen_range(1..=3);
                    let labels = pick_labels(rng, k);
                    labels
                        .into_iter()
                        .map(|label| Outcome {
                            label,
                            target: st(rng.gen_range(0..n)),
                            probability: rng.gen_bool(0.5).then(|| rng.gen::<f64>()),
                        })
                        .collect()
                })
                .collect();
            let mut m = Model::default();
            m.push_relation(&OutcomeRelation::new(fresh("r"), &cat, outcomes).unwrap());
            parts.push(m);
        }
        if rng.gen_bool(0.7) {
            let ts = if rng.gen_bool(0.5) {
                TransitionSystem::deterministic(
                    fresh("t"),
                    generator(&cat, "step", &random_table(rng, n)),
                )
            } else {
                let succ = (0..n)
                    .map(|_| random_subset(rng, n).into_iter().map(st).collect())
                    .collect();
                TransitionSystem::indeterministic(fresh("t"), &cat, succ).unwrap()
            };
            let mut m = Model::default();
            m.push_transition(&ts);
            parts.push(m);
        }
        if rng.gen_bool(0.7) {
            let used: Vec<Generator> = gens.iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
            let p = CognitiveProblem::new(
                &cat,
                random_subset(rng, n).into_iter().map(st),
                random_subset(rng, n).into_iter().map(st),
                GeneratorSet::new(&cat, used).unwrap(),
            )
            .unwrap();
            let mut m = Model::default();
            m.push_problem(&fresh("p"), &p);
            parts.push(m);
        }
    }
    parts.shuffle(rng);
    Model {
        decls: parts.into_iter().flat_map(|m| m.decls).collect(),
    }
}
