use std::path::Path;
use std::sync::Arc;

use ccs_core::dsl::{self, Diagnostic, Model, Severity, Workspace};
use ccs_core::{
    bell_number, canonical_set, refine, solve, solve_on_quotient, verify_roundtrip,
    CognitiveCategory, Controllability, Evaluator, Generator, GeneratorSet, Plan, QuotientOutcome,
    SolveOutcome, StateId, TransferConflict,
};

use crate::report::*;

pub const OK: i32 = 0;
pub const NO: i32 = 1;
pub const USAGE: i32 = 2;

/// Largest `n` accepted by `bell`.
pub const MAX_BELL: usize = ccs_core::partition::MAX_BELL_INDEX;

pub struct Outcome {
    pub exit_code: i32,
    pub body: Body,
}

impl Outcome {
    fn new(exit_code: i32, body: Body) -> Self {
        Outcome { exit_code, body }
    }
}

/// A usage or input error: exit 2.
pub struct Failure(ErrorReport);

impl Failure {
    fn new(error: impl Into<String>) -> Self {
        Failure(ErrorReport {
            error: error.into(),
            file: None,
            diagnostics: Vec::new(),
        })
    }
}

impl From<Failure> for Outcome {
    fn from(f: Failure) -> Self {
        Outcome::new(USAGE, Body::Error(f.0))
    }
}

type Res<T> = Result<T, Failure>;

fn diagnostics(diags: &[Diagnostic]) -> Vec<DiagnosticOut> {
    diags
        .iter()
        .map(|d| DiagnosticOut {
            severity: match d.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            },
            line: d.line,
            column: d.column,
            message: d.message.clone(),
            declaration: d.decl.clone(),
        })
        .collect()
}

fn read(file: &Path) -> Res<String> {
    std::fs::read_to_string(file)
        .map_err(|e| Failure::new(format!("cannot read {}: {e}", file.display())))
}

/// Reads and loads a file; any diagnostic error is a usage failure.
fn load(file: &Path) -> Res<(Model, Workspace)> {
    let text = read(file)?;
    dsl::load(&text).map_err(|diags| {
        Failure(ErrorReport {
            error: format!("{} does not load", file.display()),
            file: Some(file.display().to_string()),
            diagnostics: diagnostics(&diags),
        })
    })
}

fn unknown(kind: &str, name: &str) -> Failure {
    Failure::new(format!("unknown {kind} `{name}`"))
}

fn labels(cat: &CognitiveCategory, states: impl IntoIterator<Item = StateId>) -> Vec<String> {
    states
        .into_iter()
        .map(|s| cat.label(s).to_string())
        .collect()
}

pub fn check(file: &Path) -> Outcome {
    let text = match read(file) {
        Ok(t) => t,
        Err(f) => return f.into(),
    };
    let diags = dsl::check(&text);
    let declarations = dsl::parse_syntax(&text).0.len();
    let code = if diags.is_empty() { OK } else { NO };
    Outcome::new(
        code,
        Body::Check(CheckReport {
            file: file.display().to_string(),
            declarations,
            diagnostics: diagnostics(&diags),
        }),
    )
}

/// `2^n`, saturating.
fn default_depth(n: usize) -> usize {
    u32::try_from(n)
        .ok()
        .and_then(|n| 2usize.checked_pow(n))
        .unwrap_or(usize::MAX)
}

fn conflict_out(e: &Evaluator, c: &TransferConflict) -> ConflictOut {
    let src = e.source();
    ConflictOut {
        generator: c.generator.clone(),
        block: c.block.clone(),
        witnesses: [
            src.label(c.witnesses.0).into(),
            src.label(c.witnesses.1).into(),
        ],
        images: [src.label(c.images.0).into(), src.label(c.images.1).into()],
        image_blocks: [c.image_blocks.0.clone(), c.image_blocks.1.clone()],
        conflicting_blocks: c.conflicting_blocks,
    }
}

fn traces(
    plan: &Plan,
    cat: &CognitiveCategory,
    starts: &[StateId],
    e: Option<&Evaluator>,
) -> Vec<Trace> {
    starts
        .iter()
        .map(|&x| {
            let path = plan.trace(x).expect("outset state in category");
            let last = *path.last().expect("trace includes the start");
            Trace {
                start: cat.label(x).to_string(),
                states: labels(cat, path),
                block: e.map(|e| {
                    let b = e.evaluate(last).expect("same category");
                    e.quotient().label(b).to_string()
                }),
            }
        })
        .collect()
}

/// The block holding every state of `states`, if there is one.
fn common_block(e: &Evaluator, states: &[StateId]) -> Option<StateId> {
    let first = e.evaluate(states[0]).ok()?;
    states
        .iter()
        .all(|&s| e.evaluate(s).ok() == Some(first))
        .then_some(first)
}

pub fn solve_cmd(
    file: &Path,
    name: &str,
    max_depth: Option<usize>,
    quotient: Option<&str>,
) -> Outcome {
    match solve_inner(file, name, max_depth, quotient) {
        Ok(o) => o,
        Err(f) => f.into(),
    }
}

fn solve_inner(
    file: &Path,
    name: &str,
    max_depth: Option<usize>,
    quotient: Option<&str>,
) -> Res<Outcome> {
    let (_, ws) = load(file)?;
    let problem = ws.problem(name).ok_or_else(|| unknown("problem", name))?;
    let cat = problem.category();
    let mut report = SolveReport {
        file: file.display().to_string(),
        problem: name.to_string(),
        quotient: None,
        max_depth: 0,
        status: SolveStatus::Solved,
        plan: None,
        traces: Vec::new(),
        exhausted: None,
        conflicts: Vec::new(),
    };

    let Some(ev_name) = quotient else {
        report.max_depth = max_depth.unwrap_or_else(|| problem.default_max_depth());
        match solve(problem, report.max_depth) {
            SolveOutcome::Solved(plan) => {
                report.plan = Some(plan.step_names().iter().map(|s| s.to_string()).collect());
                report.traces = traces(&plan, cat, problem.outset(), None);
            }
            SolveOutcome::Unsolvable { exhausted, .. } => {
                report.status = SolveStatus::Unsolvable;
                report.exhausted = Some(exhausted);
            }
        }
        let code = if report.plan.is_some() { OK } else { NO };
        return Ok(Outcome::new(code, Body::Solve(report)));
    };

    let e = ws
        .evaluator(ev_name)
        .ok_or_else(|| unknown("evaluator", ev_name))?;
    if e.source().name() != cat.name() {
        return Err(Failure::new(format!(
            "evaluator `{ev_name}` is over `{}`, problem `{name}` is over `{}`",
            e.source().name(),
            cat.name()
        )));
    }
    let outset_block = common_block(e, problem.outset()).ok_or_else(|| {
        Failure::new(format!(
            "the outset of `{name}` spans several blocks of `{ev_name}`"
        ))
    })?;
    let goal_block = common_block(e, problem.goal())
        .filter(|&b| e.block_states(b).map(<[_]>::len).ok() == Some(problem.goal().len()))
        .ok_or_else(|| {
            Failure::new(format!(
                "the goal of `{name}` is not a block of `{ev_name}`"
            ))
        })?;
    let q = e.quotient();
    report.quotient = Some(QuotientOut {
        evaluator: ev_name.to_string(),
        outset_block: q.label(outset_block).to_string(),
        goal_block: q.label(goal_block).to_string(),
    });
    report.max_depth = max_depth.unwrap_or_else(|| default_depth(q.len()));
    let outcome = solve_on_quotient(
        e,
        outset_block,
        goal_block,
        problem.available(),
        report.max_depth,
    )
    .map_err(|err| Failure::new(err.to_string()))?;
    match outcome {
        QuotientOutcome::Solved(plan) => {
            report.plan = Some(plan.step_names().iter().map(|s| s.to_string()).collect());
            let starts = e.block_states(outset_block).expect("block of the quotient");
            report.traces = traces(&plan, cat, starts, Some(e));
        }
        QuotientOutcome::Unsolvable { exhausted, .. } => {
            report.status = SolveStatus::Unsolvable;
            report.exhausted = Some(exhausted);
        }
        QuotientOutcome::TransferFailure(conflicts) => {
            report.status = SolveStatus::TransferFailure;
            report.conflicts = conflicts.iter().map(|c| conflict_out(e, c)).collect();
        }
    }
    let code = if report.plan.is_some() { OK } else { NO };
    Ok(Outcome::new(code, Body::Solve(report)))
}

#[derive(Debug, Default)]
pub struct AnalyzeArgs {
    pub omnipotent: Option<Vec<String>>,
    pub reduced: bool,
    /// `Some(None)`: canonical set of the inferred category.
    pub canonical: Option<Option<String>>,
    pub purposeful: Option<String>,
    pub controllable: Option<(String, Vec<String>)>,
}

fn generator_set(ws: &Workspace, names: &[String]) -> Res<GeneratorSet> {
    let gens = names
        .iter()
        .map(|n| {
            ws.generator(n)
                .cloned()
                .ok_or_else(|| unknown("generator", n))
        })
        .collect::<Res<Vec<Generator>>>()?;
    let cat = Arc::clone(gens[0].category());
    GeneratorSet::new(&cat, gens).map_err(|e| Failure::new(e.to_string()))
}

pub fn analyze(file: &Path, args: &AnalyzeArgs) -> Outcome {
    match analyze_inner(file, args) {
        Ok(o) => o,
        Err(f) => f.into(),
    }
}

fn analyze_inner(file: &Path, args: &AnalyzeArgs) -> Res<Outcome> {
    let (_, ws) = load(file)?;
    let mut findings = Vec::new();
    let mut set_category = None;

    if let Some(names) = &args.omnipotent {
        let set = generator_set(&ws, names)?;
        let cat = Arc::clone(set.category());
        let missing = set.first_uncovered();
        findings.push(Finding {
            check: "omnipotent",
            subject: names.clone(),
            holds: missing.is_none(),
            detail: missing
                .map(|(a, b)| format!("no generator sends {} to {}", cat.label(a), cat.label(b))),
        });
        if args.reduced {
            let detail = if missing.is_some() {
                Some("not omnipotent".to_string())
            } else if set.len() != cat.len() {
                Some(format!("{} generators for {} states", set.len(), cat.len()))
            } else {
                None
            };
            findings.push(Finding {
                check: "reduced",
                subject: names.clone(),
                holds: set.is_reduced(),
                detail,
            });
        }
        set_category = Some(cat);
    }

    if let Some(name) = &args.purposeful {
        let g = ws
            .generator(name)
            .ok_or_else(|| unknown("generator", name))?;
        let target = g.is_purposeful();
        findings.push(Finding {
            check: "purposeful",
            subject: vec![name.clone()],
            holds: target.is_some(),
            detail: target.map(|t| format!("every state goes to {}", g.category().label(t))),
        });
    }

    if let Some((ev, names)) = &args.controllable {
        let e = ws.evaluator(ev).ok_or_else(|| unknown("evaluator", ev))?;
        let set = generator_set(&ws, names)?;
        let verdict = e
            .controllability(&set)
            .map_err(|err| Failure::new(err.to_string()))?;
        let detail = match &verdict {
            Controllability::Controllable => None,
            Controllability::Conflict(c) => Some(format!("conflict in block {}", c.block)),
            Controllability::NotOmnipotent { from, to } => {
                Some(format!("no generator sends {from} to {to} on the quotient"))
            }
        };
        let mut subject = vec![ev.clone()];
        subject.extend(names.iter().cloned());
        findings.push(Finding {
            check: "controllable",
            subject,
            holds: verdict.is_controllable(),
            detail,
        });
    }

    let canonical = match &args.canonical {
        None => None,
        Some(explicit) => {
            let cat =
                match (explicit, set_category, ws.categories.as_slice()) {
                    (Some(name), _, _) => {
                        Arc::clone(ws.category(name).ok_or_else(|| unknown("category", name))?)
                    }
                    (None, Some(cat), _) => cat,
                    (None, None, [only]) => Arc::clone(only),
                    (None, None, _) => return Err(Failure::new(
                        "--canonical needs a category name when the file does not have exactly one",
                    )),
                };
            let set = canonical_set(&cat);
            let mut model = Model::default();
            for g in &set {
                model.push_generator(g);
            }
            Some(CanonicalOut {
                category: cat.name().to_string(),
                generators: set.iter().map(|g| g.name().to_string()).collect(),
                text: dsl::print(&model),
            })
        }
    };

    if findings.is_empty() && canonical.is_none() {
        return Err(Failure::new(
            "nothing to analyze; pass --omnipotent, --purposeful, --controllable or --canonical",
        ));
    }
    Ok(Outcome::new(
        OK,
        Body::Analyze(AnalyzeReport {
            file: file.display().to_string(),
            findings,
            canonical,
        }),
    ))
}

pub fn refine_cmd(file: &Path, relation: &str, out: Option<&Path>) -> Outcome {
    match refine_inner(file, relation, out) {
        Ok(o) => o,
        Err(f) => f.into(),
    }
}

fn refine_inner(file: &Path, name: &str, out: Option<&Path>) -> Res<Outcome> {
    let (_, ws) = load(file)?;
    let rel = ws.relation(name).ok_or_else(|| unknown("relation", name))?;
    let r = refine(rel).map_err(|e| Failure::new(e.to_string()))?;
    let mut model = Model::default();
    model
        .push_category(&r.refined)
        .push_generator(&r.generator)
        .push_evaluator(&r.collapse);
    let text = dsl::print(&model);

    // the written file must reload to the same refinement
    let roundtrip = verify_roundtrip(rel, &r).map_err(|e| Failure::new(e.to_string()))?;
    let reloaded = dsl::load(&text).ok().is_some_and(|(_, w)| {
        w.generator(r.generator.name()).map(Generator::table) == Some(r.generator.table())
            && w.evaluator(r.collapse.name()).map(Evaluator::partition)
                == Some(r.collapse.partition())
    });
    let verified = roundtrip.matches && reloaded;

    if verified {
        if let Some(path) = out {
            std::fs::write(path, &text)
                .map_err(|e| Failure::new(format!("cannot write {}: {e}", path.display())))?;
        }
    }
    Ok(Outcome::new(
        if verified { OK } else { NO },
        Body::Refine(RefineReport {
            file: file.display().to_string(),
            relation: name.to_string(),
            states: r.refined.len(),
            multi_valued: labels(rel.category(), roundtrip.multi_valued.iter().copied()),
            verified,
            out: out.map(|p| p.display().to_string()),
            text,
        }),
    ))
}

pub fn bell(n: usize) -> Outcome {
    if n > MAX_BELL {
        return Failure::new(format!("n must be at most {MAX_BELL}")).into();
    }
    match bell_number(n) {
        Ok(value) => Outcome::new(
            OK,
            Body::Bell(BellReport {
                n,
                value: value.to_string(),
            }),
        ),
        Err(e) => Failure::new(e.to_string()).into(),
    }
}
