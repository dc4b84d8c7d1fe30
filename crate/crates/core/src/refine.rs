//! Hidden-state refinement.
//!
//! An operation that can land in several states from the same outset is not
//! a generator. Splitting every multi-outcome state into one variant per
//! outcome yields a refined category on which the operation is a function,
//! together with the evaluator that collapses variants back onto their origin.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::category::{CognitiveCategory, StateId};
use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::quotient::Evaluator;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub label: String,
    pub target: StateId,
    /// Annotation only; never used by the construction.
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRelation {
    name: String,
    category: Arc<CognitiveCategory>,
    outcomes: Vec<Vec<Outcome>>,
}

impl OutcomeRelation {
    /// `outcomes[x]` lists the possible results of the operation at state `x`.
    pub fn new(
        name: impl Into<String>,
        category: &Arc<CognitiveCategory>,
        outcomes: Vec<Vec<Outcome>>,
    ) -> Result<Self> {
        if outcomes.len() != category.len() {
            return Err(Error::TableLength {
                expected: category.len(),
                got: outcomes.len(),
            });
        }
        for (x, outs) in outcomes.iter().enumerate() {
            let state = || category.label(StateId::new(x)).to_string();
            if outs.is_empty() {
                return Err(Error::NoOutcomes(state()));
            }
            let mut labels = BTreeSet::new();
            for o in outs {
                category.check(o.target)?;
                if !labels.insert(o.label.as_str()) {
                    return Err(Error::DuplicateOutcome {
                        state: state(),
                        label: o.label.clone(),
                    });
                }
            }
        }
        Ok(OutcomeRelation {
            name: name.into(),
            category: Arc::clone(category),
            outcomes,
        })
    }

    /// A deterministic relation read off a generator; every outcome is labeled `out`.
    pub fn from_generator(g: &Generator) -> Self {
        let outcomes = g
            .table()
            .iter()
            .map(|&t| {
                vec![Outcome {
                    label: "out".into(),
                    target: t,
                    probability: None,
                }]
            })
            .collect();
        OutcomeRelation {
            name: g.name().to_string(),
            category: Arc::clone(g.category()),
            outcomes,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn category(&self) -> &Arc<CognitiveCategory> {
        &self.category
    }

    pub fn outcomes(&self, state: StateId) -> &[Outcome] {
        &self.outcomes[state.index()]
    }

    pub fn targets(&self, state: StateId) -> BTreeSet<StateId> {
        self.outcomes(state).iter().map(|o| o.target).collect()
    }

    /// The relation as a generator, if every state has a single target.
    pub fn to_generator(&self) -> Result<Generator> {
        let mut table = Vec::with_capacity(self.category.len());
        for x in self.category.states() {
            let targets = self.targets(x);
            if targets.len() != 1 {
                return Err(Error::NotAFunction(self.category.label(x).to_string()));
            }
            table.push(*targets.first().expect("one target"));
        }
        Generator::new(self.name.clone(), &self.category, table)
    }
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub refined: Arc<CognitiveCategory>,
    pub generator: Generator,
    pub collapse: Evaluator,
    /// Refined state → (original state, outcome label).
    pub origin: Vec<(StateId, String)>,
}

/// Outcome of [`verify_roundtrip`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundTrip {
    /// Collapsed images reproduce every original target set.
    pub matches: bool,
    /// Original states whose collapsed images are not a single state.
    pub multi_valued: Vec<StateId>,
}

impl RoundTrip {
    pub fn single_valued(&self) -> bool {
        self.multi_valued.is_empty()
    }
}

/// Splits every multi-outcome state into `X#label` variants.
///
/// A transition into a split state enters its first variant.
pub fn refine(rel: &OutcomeRelation) -> Result<Refinement> {
    let cat = &rel.category;
    let mut labels = Vec::new();
    let mut origin = Vec::new();
    let mut first_variant = Vec::with_capacity(cat.len());
    for x in cat.states() {
        let outs = rel.outcomes(x);
        first_variant.push(StateId::new(labels.len()));
        if outs.len() == 1 {
            labels.push(cat.label(x).to_string());
            origin.push((x, outs[0].label.clone()));
        } else {
            for o in outs {
                labels.push(format!("{}#{}", cat.label(x), o.label));
                origin.push((x, o.label.clone()));
            }
        }
    }
    let refined = CognitiveCategory::new(format!("{}_{}", cat.name(), rel.name), labels)?;

    let mut table = Vec::with_capacity(origin.len());
    let mut offset = 0;
    for x in cat.states() {
        let outs = rel.outcomes(x);
        for o in outs {
            table.push(first_variant[o.target.index()]);
        }
        offset += outs.len();
    }
    debug_assert_eq!(offset, refined.len());
    let generator = Generator::new(rel.name.clone(), &refined, table)?;

    let mut blocks: Vec<(String, Vec<StateId>)> = cat
        .states()
        .map(|x| (cat.label(x).to_string(), Vec::new()))
        .collect();
    for (r, (x, _)) in origin.iter().enumerate() {
        blocks[x.index()].1.push(StateId::new(r));
    }
    let collapse = Evaluator::from_blocks(format!("collapse_{}", rel.name), &refined, blocks)?;

    Ok(Refinement {
        refined,
        generator,
        collapse,
        origin,
    })
}

/// Checks that collapsing the refined generator reproduces the relation.
pub fn verify_roundtrip(rel: &OutcomeRelation, r: &Refinement) -> Result<RoundTrip> {
    let cat = &rel.category;
    let mismatch = || Error::MismatchedRefinement(rel.name.clone());
    if r.collapse.quotient().labels() != cat.labels()
        || !crate::category::same_category(r.collapse.source(), &r.refined)
        || !crate::category::same_category(r.generator.category(), &r.refined)
        || r.origin.len() != r.refined.len()
        || r.origin.iter().any(|(x, _)| !cat.contains(*x))
    {
        return Err(mismatch());
    }
    let mut reached: Vec<BTreeSet<StateId>> = vec![BTreeSet::new(); cat.len()];
    for refined_state in r.refined.states() {
        let original = r.collapse.evaluate(refined_state)?;
        let image = r.collapse.evaluate(r.generator.apply(refined_state)?)?;
        reached[original.index()].insert(image);
    }
    let matches = cat.states().all(|x| reached[x.index()] == rel.targets(x));
    let multi_valued = cat
        .states()
        .filter(|x| reached[x.index()].len() > 1)
        .collect();
    Ok(RoundTrip {
        matches,
        multi_valued,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn out(label: &str, target: usize) -> Outcome {
        Outcome {
            label: label.into(),
            target: StateId::new(target),
            probability: None,
        }
    }

    fn branching_fixture() -> OutcomeRelation {
        let c = CognitiveCategory::new("S", ["O", "T1", "T2"]).unwrap();
        OutcomeRelation::new(
            "g",
            &c,
            vec![
                vec![out("a", 1), out("b", 2)],
                vec![out("a", 1)],
                vec![out("a", 2)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn branching_state_splits() {
        let rel = branching_fixture();
        assert!(matches!(rel.to_generator(), Err(Error::NotAFunction(_))));
        let r = refine(&rel).unwrap();
        assert_eq!(r.refined.labels(), &["O#a", "O#b", "T1", "T2"]);
        let g = &r.generator;
        let lbl = |s: StateId| r.refined.label(s).to_string();
        assert_eq!(lbl(g.apply(r.refined.state("O#a").unwrap()).unwrap()), "T1");
        assert_eq!(lbl(g.apply(r.refined.state("O#b").unwrap()).unwrap()), "T2");
        assert_eq!(r.collapse.quotient().len(), 3);
        let rt = verify_roundtrip(&rel, &r).unwrap();
        assert!(rt.matches);
        assert_eq!(rt.multi_valued, vec![StateId::new(0)]);
    }

    #[test]
    fn deterministic_relation_is_unchanged() {
        let c = CognitiveCategory::new("S", ["a", "b", "c"]).unwrap();
        let g = Generator::cycle(&c);
        let rel = OutcomeRelation::from_generator(&g);
        let r = refine(&rel).unwrap();
        assert_eq!(r.refined.labels(), c.labels());
        assert_eq!(r.generator.table(), g.table());
        assert!(r
            .collapse
            .partition()
            .same_grouping(&crate::partition::Partition::discrete(&r.refined)));
        let rt = verify_roundtrip(&rel, &r).unwrap();
        assert!(rt.matches && rt.single_valued());
        assert_eq!(rel.to_generator().unwrap(), g);
    }

    #[test]
    fn two_split_states() {
        let c = CognitiveCategory::new("S", ["x", "y"]).unwrap();
        let rel = OutcomeRelation::new(
            "h",
            &c,
            vec![
                vec![out("p", 0), out("q", 1)],
                vec![out("p", 1), out("q", 0)],
            ],
        )
        .unwrap();
        let r = refine(&rel).unwrap();
        assert_eq!(r.refined.len(), 4);
        // targets that are split enter their first variant
        assert_eq!(r.refined.label(r.generator.table()[1]), "y#p");
        assert!(verify_roundtrip(&rel, &r).unwrap().matches);
    }

    #[test]
    fn tampered_refinement_fails() {
        let rel = branching_fixture();
        let mut r = refine(&rel).unwrap();
        let mut table = r.generator.table().to_vec();
        table[1] = StateId::new(2);
        r.generator = Generator::new("g", &r.refined, table).unwrap();
        assert!(!verify_roundtrip(&rel, &r).unwrap().matches);
        let other = refine(&OutcomeRelation::from_generator(&Generator::cycle(
            &CognitiveCategory::new("Z", ["a", "b"]).unwrap(),
        )))
        .unwrap();
        assert!(matches!(
            verify_roundtrip(&rel, &other),
            Err(Error::MismatchedRefinement(_))
        ));
    }

    #[test]
    fn relation_validation() {
        let c = CognitiveCategory::new("S", ["a", "b"]).unwrap();
        assert!(matches!(
            OutcomeRelation::new("r", &c, vec![vec![out("x", 0)], vec![]]),
            Err(Error::NoOutcomes(_))
        ));
        assert!(matches!(
            OutcomeRelation::new(
                "r",
                &c,
                vec![vec![out("x", 0), out("x", 1)], vec![out("x", 0)]]
            ),
            Err(Error::DuplicateOutcome { .. })
        ));
    }
}
