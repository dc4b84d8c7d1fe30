//! Canonical `.ccs` formatting, plus builders that turn engine values back
//! into declarations.

use std::fmt::Write;

use super::model::*;
use crate::category::CognitiveCategory;
use crate::dynamics::{TransitionSystem, Transitions};
use crate::generator::Generator;
use crate::quotient::Evaluator;
use crate::refine::OutcomeRelation;
use crate::solver::CognitiveProblem;

fn join(names: &[Name]) -> String {
    names
        .iter()
        .map(Name::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Declarations in order, two-space indent, one entry per line, separated by
/// a blank line. An empty model prints as the empty string.
pub fn print(model: &Model) -> String {
    let mut out = String::new();
    for (i, d) in model.decls.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        match d {
            Decl::Category(c) => {
                let _ = writeln!(out, "category {} {{", c.name);
                let _ = writeln!(out, "  states: {};", join(&c.states));
            }
            Decl::Generator(g) => {
                let _ = writeln!(out, "generator {} over {} {{", g.name, g.over);
                for (a, b) in &g.mappings {
                    let _ = writeln!(out, "  {a} -> {b};");
                }
            }
            Decl::Evaluator(e) => {
                let _ = writeln!(out, "evaluator {} over {} {{", e.name, e.over);
                for (label, members) in &e.blocks {
                    let _ = writeln!(out, "  {label} = {{{}}};", join(members));
                }
            }
            Decl::Relation(r) => {
                let _ = writeln!(out, "relation {} over {} {{", r.name, r.over);
                for (from, outs) in &r.entries {
                    let outs: Vec<String> = outs
                        .iter()
                        .map(|o| match o.probability {
                            Some(p) => format!("{}: {} @ {p:?}", o.label, o.target),
                            None => format!("{}: {}", o.label, o.target),
                        })
                        .collect();
                    let _ = writeln!(out, "  {from} -> {{{}}};", outs.join(", "));
                }
            }
            Decl::Transition(t) => {
                let kind = if t.deterministic {
                    "deterministic"
                } else {
                    "indeterministic"
                };
                let _ = writeln!(out, "transition {} over {} {kind} {{", t.name, t.over);
                for (from, succ) in &t.entries {
                    let _ = writeln!(out, "  {from} -> {{{}}};", join(succ));
                }
            }
            Decl::Problem(p) => {
                let _ = writeln!(out, "problem {} over {} {{", p.name, p.over);
                let _ = writeln!(out, "  outset: {{{}}};", join(&p.outset));
                let _ = writeln!(out, "  goal: {{{}}};", join(&p.goal));
                let _ = writeln!(out, "  using: {};", join(&p.using));
            }
        }
        out.push_str("}\n");
    }
    out
}

fn names<'a>(it: impl IntoIterator<Item = &'a str>) -> Vec<Name> {
    it.into_iter().map(Name::new).collect()
}

impl Model {
    pub fn push_category(&mut self, cat: &CognitiveCategory) -> &mut Self {
        self.decls.push(Decl::Category(CategoryDecl {
            name: Name::new(cat.name()),
            states: names(cat.labels().iter().map(String::as_str)),
        }));
        self
    }

    pub fn push_generator(&mut self, g: &Generator) -> &mut Self {
        let cat = g.category();
        self.decls.push(Decl::Generator(GeneratorDecl {
            name: Name::new(g.name()),
            over: Name::new(cat.name()),
            mappings: cat
                .states()
                .map(|x| {
                    (
                        Name::new(cat.label(x)),
                        Name::new(cat.label(g.table()[x.index()])),
                    )
                })
                .collect(),
        }));
        self
    }

    pub fn push_evaluator(&mut self, e: &Evaluator) -> &mut Self {
        let cat = e.source();
        self.decls.push(Decl::Evaluator(EvaluatorDecl {
            name: Name::new(e.name()),
            over: Name::new(cat.name()),
            blocks: e
                .partition()
                .blocks()
                .iter()
                .map(|b| {
                    (
                        Name::new(&b.label),
                        names(b.members.iter().map(|&s| cat.label(s))),
                    )
                })
                .collect(),
        }));
        self
    }

    pub fn push_relation(&mut self, r: &OutcomeRelation) -> &mut Self {
        let cat = r.category();
        self.decls.push(Decl::Relation(RelationDecl {
            name: Name::new(r.name()),
            over: Name::new(cat.name()),
            entries: cat
                .states()
                .map(|x| {
                    let outs = r
                        .outcomes(x)
                        .iter()
                        .map(|o| OutcomeDecl {
                            label: Name::new(&o.label),
                            target: Name::new(cat.label(o.target)),
                            probability: o.probability,
                        })
                        .collect();
                    (Name::new(cat.label(x)), outs)
                })
                .collect(),
        }));
        self
    }

    pub fn push_transition(&mut self, ts: &TransitionSystem) -> &mut Self {
        let cat = ts.base();
        self.decls.push(Decl::Transition(TransitionDecl {
            name: Name::new(ts.name()),
            over: Name::new(cat.name()),
            deterministic: matches!(ts.kind(), Transitions::Deterministic(_)),
            entries: cat
                .states()
                .map(|x| {
                    (
                        Name::new(cat.label(x)),
                        names(ts.successors(x).iter().map(|&s| cat.label(s))),
                    )
                })
                .collect(),
        }));
        self
    }

    /// The problem refers to its generators by name; push those too.
    pub fn push_problem(&mut self, name: &str, p: &CognitiveProblem) -> &mut Self {
        let cat = p.category();
        self.decls.push(Decl::Problem(ProblemDecl {
            name: Name::new(name),
            over: Name::new(cat.name()),
            outset: names(p.outset().iter().map(|&s| cat.label(s))),
            goal: names(p.goal().iter().map(|&s| cat.label(s))),
            using: names(p.available().iter().map(Generator::name)),
        }));
        self
    }
}
