//! Semantic validation and resolution of a [`Model`] into engine values.
//!
//! References resolve against the whole file, so a declaration may refer to
//! one that appears later.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::model::*;
use crate::category::{CognitiveCategory, StateId};
use crate::dynamics::TransitionSystem;
use crate::generator::{Generator, GeneratorSet};
use crate::quotient::Evaluator;
use crate::refine::{Outcome, OutcomeRelation};
use crate::solver::CognitiveProblem;

/// Engine values built from a valid model, in declaration order.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub categories: Vec<Arc<CognitiveCategory>>,
    pub generators: Vec<Generator>,
    pub evaluators: Vec<Evaluator>,
    pub relations: Vec<OutcomeRelation>,
    pub transitions: Vec<TransitionSystem>,
    pub problems: Vec<(String, CognitiveProblem)>,
}

impl Workspace {
    pub fn category(&self, name: &str) -> Option<&Arc<CognitiveCategory>> {
        self.categories.iter().find(|c| c.name() == name)
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name() == name)
    }

    pub fn evaluator(&self, name: &str) -> Option<&Evaluator> {
        self.evaluators.iter().find(|e| e.name() == name)
    }

    pub fn relation(&self, name: &str) -> Option<&OutcomeRelation> {
        self.relations.iter().find(|r| r.name() == name)
    }

    pub fn transition(&self, name: &str) -> Option<&TransitionSystem> {
        self.transitions.iter().find(|t| t.name() == name)
    }

    pub fn problem(&self, name: &str) -> Option<&CognitiveProblem> {
        self.problems
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
    }
}

struct Checker<'m> {
    model: &'m Model,
    categories: HashMap<&'m str, &'m CategoryDecl>,
    diags: Vec<Diagnostic>,
}

impl<'m> Checker<'m> {
    fn err(&mut self, loc: Loc, msg: impl Into<String>, decl: &Name) {
        self.diags
            .push(Diagnostic::error(loc, msg, Some(&decl.text)));
    }

    fn warn(&mut self, loc: Loc, msg: impl Into<String>, decl: &Name) {
        self.diags
            .push(Diagnostic::warning(loc, msg, Some(&decl.text)));
    }

    fn category(&mut self, over: &Name, decl: &Name) -> Option<&'m CategoryDecl> {
        let found = self.categories.get(over.as_str()).copied();
        if found.is_none() {
            self.err(over.loc, format!("unknown category `{over}`"), decl);
        }
        found
    }

    /// Reports unknown states; returns whether all were known.
    fn states_known(&mut self, cat: &CategoryDecl, names: &[&Name], decl: &Name) -> bool {
        let mut ok = true;
        for n in names {
            if !cat.states.iter().any(|s| s.text == n.text) {
                self.err(
                    n.loc,
                    format!("unknown state `{n}` in category `{}`", cat.name),
                    decl,
                );
                ok = false;
            }
        }
        ok
    }

    /// Every state of `cat` appears exactly once among `keys`.
    fn total(&mut self, cat: &CategoryDecl, keys: &[&Name], decl: &Name, what: &str) {
        let mut seen = HashSet::new();
        for k in keys {
            if !seen.insert(k.as_str()) {
                self.err(k.loc, format!("state `{k}` is listed twice"), decl);
            }
        }
        let missing: Vec<&str> = cat
            .states
            .iter()
            .map(Name::as_str)
            .filter(|s| !seen.contains(s))
            .collect();
        if !missing.is_empty() {
            self.err(
                decl.loc,
                format!("{what} not total: missing {}", missing.join(", ")),
                decl,
            );
        }
    }

    fn check(&mut self) {
        let mut names: HashMap<(DeclKind, &str), Loc> = HashMap::new();
        for d in &self.model.decls {
            let name = d.name();
            if let Some(first) = names.insert((d.kind(), name.as_str()), name.loc) {
                names.insert((d.kind(), name.as_str()), first);
                self.err(
                    name.loc,
                    format!(
                        "duplicate {} `{name}` (first declared at {first})",
                        d.kind().keyword()
                    ),
                    name,
                );
            }
        }

        for d in &self.model.decls {
            match d {
                Decl::Category(c) => {
                    let mut seen = HashSet::new();
                    for s in &c.states {
                        if !seen.insert(s.as_str()) {
                            self.err(s.loc, format!("duplicate state `{s}`"), &c.name);
                        }
                    }
                }
                Decl::Generator(g) => {
                    let Some(cat) = self.category(&g.over, &g.name) else {
                        continue;
                    };
                    let refs: Vec<&Name> = g.mappings.iter().flat_map(|(a, b)| [a, b]).collect();
                    if self.states_known(cat, &refs, &g.name) {
                        let keys: Vec<&Name> = g.mappings.iter().map(|(a, _)| a).collect();
                        self.total(cat, &keys, &g.name, "generator");
                    }
                }
                Decl::Evaluator(e) => {
                    let Some(cat) = self.category(&e.over, &e.name) else {
                        continue;
                    };
                    let mut labels = HashSet::new();
                    for (label, _) in &e.blocks {
                        if !labels.insert(label.as_str()) {
                            self.err(label.loc, format!("duplicate block `{label}`"), &e.name);
                        }
                    }
                    let refs: Vec<&Name> = e.blocks.iter().flat_map(|(_, m)| m).collect();
                    if !self.states_known(cat, &refs, &e.name) {
                        continue;
                    }
                    let mut owner: HashMap<&str, &str> = HashMap::new();
                    for (label, members) in &e.blocks {
                        for m in members {
                            if let Some(prev) = owner.insert(m.as_str(), label.as_str()) {
                                let msg = if prev == label.as_str() {
                                    format!("state `{m}` is listed twice in block `{label}`")
                                } else {
                                    format!(
                                        "blocks overlap: state `{m}` is in `{prev}` and `{label}`"
                                    )
                                };
                                self.err(m.loc, msg, &e.name);
                            }
                        }
                    }
                    let missing: Vec<&str> = cat
                        .states
                        .iter()
                        .map(Name::as_str)
                        .filter(|s| !owner.contains_key(s))
                        .collect();
                    if !missing.is_empty() {
                        self.err(
                            e.name.loc,
                            format!(
                                "blocks do not cover every state: missing {}",
                                missing.join(", ")
                            ),
                            &e.name,
                        );
                    }
                }
                Decl::Relation(r) => {
                    let Some(cat) = self.category(&r.over, &r.name) else {
                        continue;
                    };
                    let refs: Vec<&Name> = r
                        .entries
                        .iter()
                        .flat_map(|(from, outs)| {
                            std::iter::once(from).chain(outs.iter().map(|o| &o.target))
                        })
                        .collect();
                    let known = self.states_known(cat, &refs, &r.name);
                    for (from, outs) in &r.entries {
                        let mut labels = HashSet::new();
                        for o in outs {
                            if !labels.insert(o.label.as_str()) {
                                self.err(
                                    o.label.loc,
                                    format!(
                                        "duplicate outcome label `{}` at state `{from}`",
                                        o.label
                                    ),
                                    &r.name,
                                );
                            }
                            if let Some(p) = o.probability {
                                if !(0.0..=1.0).contains(&p) {
                                    self.warn(
                                        o.label.loc,
                                        format!("probability {p} is outside [0, 1]"),
                                        &r.name,
                                    );
                                }
                            }
                        }
                    }
                    if known {
                        let keys: Vec<&Name> = r.entries.iter().map(|(a, _)| a).collect();
                        self.total(cat, &keys, &r.name, "relation");
                    }
                }
                Decl::Transition(t) => {
                    let Some(cat) = self.category(&t.over, &t.name) else {
                        continue;
                    };
                    let refs: Vec<&Name> = t
                        .entries
                        .iter()
                        .flat_map(|(from, succ)| std::iter::once(from).chain(succ))
                        .collect();
                    let known = self.states_known(cat, &refs, &t.name);
                    if t.deterministic {
                        for (from, succ) in &t.entries {
                            let distinct: HashSet<&str> = succ.iter().map(Name::as_str).collect();
                            if distinct.len() != 1 {
                                self.err(
                                    from.loc,
                                    format!(
                                        "deterministic transition has {} successors at `{from}`",
                                        distinct.len()
                                    ),
                                    &t.name,
                                );
                            }
                        }
                    }
                    if known {
                        let keys: Vec<&Name> = t.entries.iter().map(|(a, _)| a).collect();
                        self.total(cat, &keys, &t.name, "transition");
                    }
                }
                Decl::Problem(p) => {
                    let Some(cat) = self.category(&p.over, &p.name) else {
                        continue;
                    };
                    let refs: Vec<&Name> = p.outset.iter().chain(&p.goal).collect();
                    self.states_known(cat, &refs, &p.name);
                    for (what, list) in [("outset", &p.outset), ("goal", &p.goal)] {
                        let mut seen = HashSet::new();
                        for s in list {
                            if !seen.insert(s.as_str()) {
                                self.warn(
                                    s.loc,
                                    format!("state `{s}` repeated in {what}"),
                                    &p.name,
                                );
                            }
                        }
                    }
                    let mut actions: Vec<(&Name, &GeneratorDecl)> = Vec::new();
                    for u in &p.using {
                        match self.model.find(DeclKind::Generator, u.as_str()) {
                            Some(Decl::Generator(g)) => {
                                if g.over.text != p.over.text {
                                    self.err(
                                        u.loc,
                                        format!(
                                            "generator `{u}` is over `{}`, not `{}`",
                                            g.over, p.over
                                        ),
                                        &p.name,
                                    );
                                } else {
                                    actions.push((u, g));
                                }
                            }
                            _ => self.err(u.loc, format!("unknown generator `{u}`"), &p.name),
                        }
                    }
                    // Repeated actions violate the generator-set invariant.
                    let mut seen: Vec<(&Name, Vec<(&str, &str)>)> = Vec::new();
                    for (u, g) in actions {
                        let mut table: Vec<(&str, &str)> = g
                            .mappings
                            .iter()
                            .map(|(a, b)| (a.as_str(), b.as_str()))
                            .collect();
                        table.sort_unstable();
                        if let Some((first, _)) = seen.iter().find(|(_, t)| *t == table) {
                            let msg = if first.text == u.text {
                                format!("generator `{u}` is used twice")
                            } else {
                                format!("generators `{first}` and `{u}` have the same action")
                            };
                            self.err(u.loc, msg, &p.name);
                        } else {
                            seen.push((u, table));
                        }
                    }
                }
            }
        }
    }
}

/// All semantic diagnostics, ordered by position.
pub fn validate(model: &Model) -> Vec<Diagnostic> {
    let mut categories = HashMap::new();
    for d in &model.decls {
        if let Decl::Category(c) = d {
            categories.entry(c.name.as_str()).or_insert(c);
        }
    }
    let mut checker = Checker {
        model,
        categories,
        diags: Vec::new(),
    };
    checker.check();
    let mut diags = checker.diags;
    diags.sort_by_key(|d| (d.line, d.column));
    diags
}

/// Builds engine values. Fails with the model's error diagnostics.
pub fn resolve(model: &Model) -> Result<Workspace, Vec<Diagnostic>> {
    let diags = validate(model);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags.into_iter().filter(Diagnostic::is_error).collect());
    }
    let internal = |e: crate::Error, name: &Name| {
        vec![Diagnostic::error(name.loc, e.to_string(), Some(&name.text))]
    };

    let mut ws = Workspace::default();
    for d in &model.decls {
        if let Decl::Category(c) = d {
            let cat = CognitiveCategory::new(
                c.name.text.clone(),
                c.states.iter().map(|s| s.text.clone()),
            )
            .map_err(|e| internal(e, &c.name))?;
            ws.categories.push(cat);
        }
    }
    let cat_of =
        |ws: &Workspace, over: &Name| Arc::clone(ws.category(over.as_str()).expect("validated"));
    let state = |cat: &CognitiveCategory, n: &Name| cat.state(n.as_str()).expect("validated");

    for d in &model.decls {
        match d {
            Decl::Generator(g) => {
                let cat = cat_of(&ws, &g.over);
                let gen = Generator::from_pairs(
                    g.name.text.clone(),
                    &cat,
                    g.mappings.iter().map(|(a, b)| (a.as_str(), b.as_str())),
                )
                .map_err(|e| internal(e, &g.name))?;
                ws.generators.push(gen);
            }
            Decl::Evaluator(e) => {
                let cat = cat_of(&ws, &e.over);
                let blocks = e.blocks.iter().map(|(label, members)| {
                    (
                        label.text.clone(),
                        members.iter().map(|m| state(&cat, m)).collect(),
                    )
                });
                ws.evaluators.push(
                    Evaluator::from_blocks(e.name.text.clone(), &cat, blocks)
                        .map_err(|err| internal(err, &e.name))?,
                );
            }
            Decl::Relation(r) => {
                let cat = cat_of(&ws, &r.over);
                let mut outcomes = vec![Vec::new(); cat.len()];
                for (from, outs) in &r.entries {
                    outcomes[state(&cat, from).index()] = outs
                        .iter()
                        .map(|o| Outcome {
                            label: o.label.text.clone(),
                            target: state(&cat, &o.target),
                            probability: o.probability,
                        })
                        .collect();
                }
                ws.relations.push(
                    OutcomeRelation::new(r.name.text.clone(), &cat, outcomes)
                        .map_err(|e| internal(e, &r.name))?,
                );
            }
            Decl::Transition(t) => {
                let cat = cat_of(&ws, &t.over);
                let mut succ: Vec<Vec<StateId>> = vec![Vec::new(); cat.len()];
                for (from, to) in &t.entries {
                    succ[state(&cat, from).index()] = to.iter().map(|s| state(&cat, s)).collect();
                }
                let ts = if t.deterministic {
                    let table = succ.iter().map(|s| s[0]).collect();
                    Generator::new(t.name.text.clone(), &cat, table)
                        .map(|g| TransitionSystem::deterministic(t.name.text.clone(), g))
                } else {
                    TransitionSystem::indeterministic(t.name.text.clone(), &cat, succ)
                };
                ws.transitions.push(ts.map_err(|e| internal(e, &t.name))?);
            }
            Decl::Category(_) | Decl::Problem(_) => {}
        }
    }

    for d in &model.decls {
        if let Decl::Problem(p) = d {
            let cat = cat_of(&ws, &p.over);
            let members = p
                .using
                .iter()
                .map(|u| ws.generator(u.as_str()).expect("validated").clone())
                .collect();
            let problem = GeneratorSet::new(&cat, members).and_then(|set| {
                CognitiveProblem::new(
                    &cat,
                    p.outset.iter().map(|s| state(&cat, s)),
                    p.goal.iter().map(|s| state(&cat, s)),
                    set,
                )
            });
            ws.problems.push((
                p.name.text.clone(),
                problem.map_err(|e| internal(e, &p.name))?,
            ));
        }
    }
    Ok(ws)
}
