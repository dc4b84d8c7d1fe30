//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use ccs_core::adapters::*;
use ccs_core::dsl::{load, parse, print};
use ccs_core::generator::enumerate_generators;
use ccs_core::partition::RestrictedGrowth;
use ccs_core::{
    bell_number, canonical_set, enumerate_partitions, min_omnipotent_size_check, refine, solve,
    solve_on_quotient, verify_roundtrip, Generator, GeneratorSet, QuotientOutcome, SolveOutcome,
    TransferError,
};
use common::*;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const JOHN: &str = include_str!("../../../fixtures/john.ccs");
const BRANCHING: &str = include_str!("../../../fixtures/branching.ccs");
const FIXTURES: &[&str] = &[
    include_str!("../../../fixtures/s4_cycle.ccs"),
    JOHN,
    include_str!("../../../fixtures/conflict.ccs"),
    BRANCHING,
    include_str!("../../../fixtures/powers.ccs"),
    include_str!("../../../fixtures/dynamics.ccs"),
];

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ac1_morphism_counting() -> Result<String, String> {
    for n in 1..=8 {
        let c = cat(n);
        let distinct: std::collections::HashSet<_> =
            c.morphisms().map(|m| (m.dom(), m.cod())).collect();
        ensure!(
            c.morphism_count() == n * n,
            "n={n}: count {}",
            c.morphism_count()
        );
        ensure!(
            distinct.len() == n * n,
            "n={n}: {} distinct morphisms",
            distinct.len()
        );
    }
    ensure!(cat(4).morphism_count() == 16, "n=4 is not 16");
    Ok("n=1..8 give n², n=4 gives 16".into())
}

fn ac2_lower_bound() -> Result<String, String> {
    let c = cat(3);
    let all = enumerate_generators(&c).map_err(|e| e.to_string())?;
    let gens: Vec<&Generator> = all.iter().collect();
    let mut candidates = 0;
    let covers = |set: &[&Generator]| {
        (0..3).all(|a| (0..3).all(|b| set.iter().any(|g| g.table()[a].index() == b)))
    };
    for i in 0..gens.len() {
        candidates += 1;
        ensure!(!covers(&[gens[i]]), "{} is omnipotent", gens[i].name());
        for j in i + 1..gens.len() {
            candidates += 1;
            ensure!(!covers(&[gens[i], gens[j]]), "pair {i},{j} is omnipotent");
        }
    }
    ensure!(candidates == 378, "{candidates} candidate sets");
    ensure!(
        min_omnipotent_size_check(&c, 2).map_err(|e| e.to_string())?,
        "library sweep found an omnipotent set of size 2"
    );
    for n in 1..=8 {
        let c = cat(n);
        let powers = Generator::cycle(&c).powers_closure();
        ensure!(powers.len() == n, "n={n}: {} powers", powers.len());
        ensure!(powers.is_omnipotent(), "n={n}: powers not omnipotent");
    }
    Ok("378 sets of size ≤ 2 on 3 states, none omnipotent; cycle powers omnipotent with n members for n=1..8".into())
}

fn ac3_canonical_uniqueness() -> Result<String, String> {
    let mut rng = rng(3);
    let mut checked = 0;
    for n in 2..=6 {
        let c = cat(n);
        let canonical = canonical_set(&c);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            let mut tables: Vec<Vec<usize>> = if rng.gen_bool(0.5) {
                (1..=n)
                    .map(|k| (0..n).map(|x| perm[(inv[x] + k) % n]).collect())
                    .collect()
            } else {
                (0..n).map(|t| vec![perm[t]; n]).collect()
            };
            for _ in 0..rng.gen_range(0..=3) {
                tables.push(random_table(&mut rng, n));
            }
            tables.shuffle(&mut rng);
            let set = generator_set(&c, &distinct_tables(&tables));
            ensure!(set.is_omnipotent(), "n={n}: generated set not omnipotent");
            let got = set.canonical_from_omnipotent().map_err(|e| e.to_string())?;
            ensure!(got == canonical, "n={n}: canonical mismatch");
            checked += 1;
        }
    }
    Ok(format!("{checked} relabeled omnipotent sets, n=2..6"))
}

fn ac4_bell() -> Result<String, String> {
    let expected = [1u32, 1, 2, 5, 15, 52, 203];
    for (n, &want) in expected.iter().enumerate() {
        let oracle = count_partitions(n);
        let bell = bell_number(n).map_err(|e| e.to_string())?;
        let listed = if n == 0 {
            RestrictedGrowth::new(0).count()
        } else {
            enumerate_partitions(&cat(n))
                .map_err(|e| e.to_string())?
                .len()
        };
        ensure!(
            bell == BigUint::from(oracle),
            "n={n}: bell {bell} vs oracle {oracle}"
        );
        ensure!(
            listed == oracle,
            "n={n}: enumerated {listed} vs oracle {oracle}"
        );
        ensure!(oracle == want as usize, "n={n}: oracle gives {oracle}");
    }
    let mut worst: f64 = 0.0;
    for n in 0..=10u32 {
        let bell: f64 = bell_number(n as usize)
            .unwrap()
            .to_string()
            .parse()
            .unwrap();
        let diff = (bell - dobinski(n, 60)).abs();
        worst = worst.max(diff);
        ensure!(diff <= 0.5, "n={n}: Dobinski off by {diff}");
    }
    Ok(format!(
        "n=0..6 match enumeration; Dobinski max error {worst:.2e} for n ≤ 10"
    ))
}

fn ac5_transfer() -> Result<String, String> {
    let mut rng = rng(5);
    let (mut ok, mut conflicts) = (0, 0);
    for _ in 0..400 {
        let n = rng.gen_range(1..=6);
        let c = cat(n);
        let (t, a) = (random_table(&mut rng, n), random_assignment(&mut rng, n));
        let g = generator(&c, "g", &t);
        let e = evaluator(&c, &a);
        let scan = conflicting_blocks(&a, &t);
        match e.transfer(&g) {
            Ok(q) => {
                ensure!(
                    scan.is_empty(),
                    "transfer succeeded but scan found {scan:?}"
                );
                for x in c.states() {
                    let lhs = e.evaluate(g.apply(x).unwrap()).unwrap();
                    let rhs = q.apply(e.evaluate(x).unwrap()).unwrap();
                    ensure!(lhs == rhs, "square does not commute at {x:?}");
                }
                ok += 1;
            }
            Err(TransferError::Conflict(k)) => {
                ensure!(!scan.is_empty(), "conflict reported, scan found none");
                ensure!(
                    k.conflicting_blocks == scan.len(),
                    "conflict count differs from scan"
                );
                ensure!(
                    k.block == format!("B{}", scan[0]),
                    "first conflict differs from scan"
                );
                conflicts += 1;
            }
            Err(e) => return Err(format!("{e:?}")),
        }
    }
    Ok(format!(
        "{} pairs: {ok} commute, {conflicts} conflicts confirmed",
        ok + conflicts
    ))
}

fn ac6_refinement() -> Result<String, String> {
    let mut rng = rng(6);
    for _ in 0..300 {
        let n = rng.gen_range(1..=6);
        let c = cat(n);
        let targets: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                (0..rng.gen_range(1..=3))
                    .map(|_| rng.gen_range(0..n))
                    .collect()
            })
            .collect();
        let rel = relation(&c, &targets);
        let r = refine(&rel).map_err(|e| e.to_string())?;
        ensure!(
            verify_roundtrip(&rel, &r).unwrap().matches,
            "round trip failed: {targets:?}"
        );
        ensure!(
            r.generator.table().len() == r.refined.len()
                && r.generator.table().iter().all(|&t| r.refined.contains(t)),
            "refined generator not total"
        );
    }
    let (_, ws) = load(BRANCHING).map_err(|d| format!("{d:?}"))?;
    let rel = ws.relation("g").ok_or("no relation g")?;
    let r = refine(rel).map_err(|e| e.to_string())?;
    let rt = verify_roundtrip(rel, &r).map_err(|e| e.to_string())?;
    let o = rel.category().state("O").unwrap();
    ensure!(rt.matches, "branching fixture round trip failed");
    ensure!(
        rt.multi_valued == [o],
        "multi-valued states {:?}",
        rt.multi_valued
    );
    ensure!(
        r.refined.len() == 4,
        "branching fixture refines to {} states",
        r.refined.len()
    );
    Ok("300 random relations round-trip; branching fixture is multi-valued exactly at O".into())
}

fn ac7_solver() -> Result<String, String> {
    let mut rng = rng(7);
    let (mut solved, mut unsolvable, mut tried) = (0, 0, 0);
    while solved + unsolvable < 300 {
        tried += 1;
        let n = rng.gen_range(1..=6);
        let c = cat(n);
        let k = rng.gen_range(1..=4);
        let tables = distinct_tables(
            &(0..k)
                .map(|_| random_table(&mut rng, n))
                .collect::<Vec<_>>(),
        );
        let (outset, goal) = (random_subset(&mut rng, n), random_subset(&mut rng, n));
        let oracle = brute_force_plan(&tables, &outset, &goal, 5);
        let reachable = monoid_solvable(n, &tables, &outset, &goal);
        if oracle.is_none() && reachable {
            continue; // optimum deeper than 5
        }
        let p = problem(&c, &tables, &outset, &goal);
        match (solve(&p, p.default_max_depth()), oracle) {
            (SolveOutcome::Solved(plan), Some(seq)) => {
                ensure!(
                    plan.len() == seq.len(),
                    "length {} vs oracle {}",
                    plan.len(),
                    seq.len()
                );
                for &x in p.outset() {
                    ensure!(
                        p.goal().contains(&plan.execute(x).unwrap()),
                        "plan misses goal"
                    );
                }
                solved += 1;
            }
            (
                SolveOutcome::Unsolvable {
                    exhausted: true, ..
                },
                None,
            ) => {
                ensure!(!reachable, "unsolvable but monoid reaches the goal");
                unsolvable += 1;
            }
            (got, want) => return Err(format!("solver {got:?} vs oracle {want:?}")),
        }
    }
    let (_, ws) = load(JOHN).map_err(|d| format!("{d:?}"))?;
    let john = ws.problem("john").unwrap();
    ensure!(
        matches!(
            solve(john, 16),
            SolveOutcome::Unsolvable {
                exhausted: true,
                ..
            }
        ),
        "John's problem should be unsolvable"
    );
    let with_const = ws.problem("john_const").unwrap();
    let plan = solve(with_const, 16)
        .plan()
        .cloned()
        .ok_or("john_const unsolved")?;
    ensure!(
        plan.step_names() == ["const_love"],
        "john_const plan {:?}",
        plan.step_names()
    );
    Ok(format!(
        "{} problems ({solved} solved, {unsolvable} unsolvable, {} deeper skipped) match oracles; John unsolvable, const_love in 1 step",
        solved + unsolvable,
        tried - solved - unsolvable
    ))
}

fn ac8_dsl() -> Result<String, String> {
    let mut rng = rng(8);
    for i in 0..600 {
        let m = random_model(&mut rng);
        let text = print(&m);
        let back = parse(&text).map_err(|d| format!("model {i}: {d:?}\n{text}"))?;
        ensure!(back == m, "model {i} differs after round trip");
        ensure!(print(&back) == text, "model {i}: print not deterministic");
    }
    for (i, f) in FIXTURES.iter().enumerate() {
        let m = parse(f).map_err(|d| format!("fixture {i}: {d:?}"))?;
        let text = print(&m);
        ensure!(
            parse(&text).unwrap() == m,
            "fixture {i} differs after round trip"
        );
        ensure!(
            print(&parse(&text).unwrap()) == text,
            "fixture {i}: print not deterministic"
        );
    }
    Ok(format!(
        "600 random models and {} fixtures round-trip byte-stably",
        FIXTURES.len()
    ))
}

fn ac9_turing() -> Result<String, String> {
    let (c, g) = tm_generator(&bit_flip_machine(4)).map_err(|e| e.to_string())?;
    let x = c.state("t0000").unwrap();
    ensure!(
        c.label(g.apply(x).unwrap()) == "t1111",
        "0000 maps to {}",
        c.label(g.apply(x).unwrap())
    );
    let (_, id) = tm_generator(&empty_machine(4)).map_err(|e| e.to_string())?;
    ensure!(id.is_identity(), "empty machine is not the identity");
    let (c, w) = tm_generator(&constant_writer_machine("10")).map_err(|e| e.to_string())?;
    ensure!(
        w.is_purposeful() == c.state("t10").ok(),
        "constant writer not purposeful"
    );
    Ok("0000 → 1111, empty δ is identity, writer is constant at 10".into())
}

fn ac10_genetic() -> Result<String, String> {
    let f = ga_fixture(&GAToySpec::single(3, 3, MutationRule::Elitist, "000"))
        .map_err(|e| e.to_string())?;
    let v_not = f.v_not().ok_or("no V_not block")?;
    let quotient = solve_on_quotient(
        &f.fitness,
        v_not,
        f.v_opt(),
        &GeneratorSet::new(&f.category, vec![f.mutation.clone()]).unwrap(),
        16,
    )
    .map_err(|e| e.to_string())?;
    let QuotientOutcome::TransferFailure(conflicts) = quotient else {
        return Err(format!(
            "expected the mutation not to transfer, got {quotient:?}"
        ));
    };
    let p = f.block_problem().map_err(|e| e.to_string())?;
    let plan = solve(&p, p.default_max_depth())
        .plan()
        .cloned()
        .ok_or("V_not → V_opt unsolved")?;
    let v_not_states = f.fitness.block_states(v_not).unwrap();
    for &x in v_not_states {
        let y = plan.execute(x).unwrap();
        ensure!(
            f.fitness.evaluate(y).unwrap() == f.v_opt(),
            "{} ends in {}",
            f.category.label(x),
            f.category.label(y)
        );
    }
    Ok(format!(
        "plan {:?} takes all {} V_not states into V_opt (mutation conflicts in block {} on the quotient)",
        plan.step_names(),
        v_not_states.len(),
        conflicts[0].block
    ))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("AC1 morphism counting", ac1_morphism_counting),
        ("AC2 omnipotence lower bound", ac2_lower_bound),
        ("AC3 canonical uniqueness", ac3_canonical_uniqueness),
        ("AC4 Bell agreement", ac4_bell),
        ("AC5 transfer commutation", ac5_transfer),
        ("AC6 refinement round-trip", ac6_refinement),
        ("AC7 solver optimality and completeness", ac7_solver),
        ("AC8 DSL round-trip", ac8_dsl),
        ("AC9 Turing machine adapter", ac9_turing),
        ("AC10 genetic algorithm fixture", ac10_genetic),
    ];
    // keep the default hook quiet; failures are reported below
    std::panic::set_hook(Box::new(|_| {}));
    let start = Instant::now();
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let ms = t.elapsed().as_millis();
        match result {
            Ok(detail) => println!("[PASS] {name}: {detail} ({ms} ms)"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({ms} ms)");
            }
        }
    }
    println!(
        "{} of 10 criteria passed in {:.1} s",
        10 - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
