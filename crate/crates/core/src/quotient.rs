//! Evaluators: a partition of the source states plus the quotient category
//! whose states are the block labels.
//!
//! The functor's morphism component is forced (`E(t_rs) = t_E(r)E(s)`), so it
//! is computed by [`Evaluator::evaluate_morphism`] rather than stored.

use std::sync::Arc;

use crate::category::{ensure_same, CognitiveCategory, Morphism, StateId};
use crate::error::{Error, Result};
use crate::generator::{Generator, GeneratorSet};
use crate::partition::Partition;

pub const PASS: &str = "pass";
pub const FAIL: &str = "fail";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluator {
    name: String,
    partition: Partition,
    quotient: Arc<CognitiveCategory>,
}

/// Two states of one block whose images fall into different blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferConflict {
    pub generator: String,
    pub block: String,
    pub witnesses: (StateId, StateId),
    pub images: (StateId, StateId),
    pub image_blocks: (String, String),
    /// How many blocks conflict in total.
    pub conflicting_blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferError {
    Conflict(TransferConflict),
    Invalid(Error),
}

impl From<Error> for TransferError {
    fn from(e: Error) -> Self {
        TransferError::Invalid(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Controllability {
    Controllable,
    Conflict(TransferConflict),
    /// Every member transfers, but the transferred set misses this quotient pair.
    NotOmnipotent {
        from: String,
        to: String,
    },
}

impl Controllability {
    pub fn is_controllable(&self) -> bool {
        matches!(self, Controllability::Controllable)
    }
}

/// Result of [`conjunction`]. `empty_pass` is set when no state satisfies
/// every operand; the evaluator is then the single `fail` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjunction {
    pub evaluator: Evaluator,
    pub empty_pass: bool,
}

impl Evaluator {
    pub fn new(name: impl Into<String>, partition: Partition) -> Result<Self> {
        let name = name.into();
        let quotient = CognitiveCategory::new(
            name.clone(),
            partition.blocks().iter().map(|b| b.label.clone()),
        )?;
        Ok(Evaluator {
            name,
            partition,
            quotient,
        })
    }

    /// Builds the partition from `(label, members)` pairs and wraps it.
    pub fn from_blocks<L, I>(
        name: impl Into<String>,
        category: &Arc<CognitiveCategory>,
        blocks: I,
    ) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Vec<StateId>)>,
    {
        Evaluator::new(name, Partition::new(category, blocks)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn source(&self) -> &Arc<CognitiveCategory> {
        self.partition.category()
    }

    pub fn quotient(&self) -> &Arc<CognitiveCategory> {
        &self.quotient
    }

    /// Quotient state (block) containing `state`.
    pub fn evaluate(&self, state: StateId) -> Result<StateId> {
        Ok(StateId::new(self.partition.block_index(state)?))
    }

    #[inline]
    fn eval(&self, state: StateId) -> StateId {
        StateId::new(self.partition.block_of(state))
    }

    pub fn evaluate_morphism(&self, t: &Morphism) -> Result<Morphism> {
        ensure_same(self.source(), t.category())?;
        self.quotient.hom(self.eval(t.dom()), self.eval(t.cod()))
    }

    /// Source states in the block labeled `label`.
    pub fn block_states(&self, block: StateId) -> Result<&[StateId]> {
        self.quotient.check(block)?;
        Ok(&self.partition.blocks()[block.index()].members)
    }

    /// Induces `g' = Eg` on the quotient, or reports the first block whose
    /// members are sent to different blocks.
    pub fn transfer(&self, g: &Generator) -> std::result::Result<Generator, TransferError> {
        ensure_same(self.source(), g.category())?;
        let mut first: Option<(usize, StateId, StateId)> = None;
        let mut conflicting = 0;
        let mut table = Vec::with_capacity(self.partition.len());
        for (b, block) in self.partition.blocks().iter().enumerate() {
            let anchor = block.members[0];
            let target = self.eval(g.image(anchor));
            if let Some(&other) = block
                .members
                .iter()
                .find(|&&x| self.eval(g.image(x)) != target)
            {
                conflicting += 1;
                first.get_or_insert((b, anchor, other));
            }
            table.push(target);
        }
        match first {
            None => Ok(Generator::from_table_unchecked(
                g.name().to_string(),
                &self.quotient,
                table,
            )),
            Some((b, x, y)) => {
                let (gx, gy) = (g.image(x), g.image(y));
                let label = |s: StateId| self.quotient.label(self.eval(s)).to_string();
                Err(TransferError::Conflict(TransferConflict {
                    generator: g.name().to_string(),
                    block: self.partition.blocks()[b].label.clone(),
                    witnesses: (x, y),
                    images: (gx, gy),
                    image_blocks: (label(gx), label(gy)),
                    conflicting_blocks: conflicting,
                }))
            }
        }
    }

    /// Transfers every member; the transferred set keeps the first member of
    /// each quotient action.
    pub fn transfer_set(
        &self,
        set: &GeneratorSet,
    ) -> std::result::Result<GeneratorSet, TransferError> {
        ensure_same(self.source(), set.category())?;
        let members = set
            .iter()
            .map(|g| self.transfer(g))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(GeneratorSet::dedup(&self.quotient, members)?)
    }

    pub fn controllability(&self, set: &GeneratorSet) -> Result<Controllability> {
        match self.transfer_set(set) {
            Ok(q) => Ok(match q.first_uncovered() {
                None => Controllability::Controllable,
                Some((a, b)) => Controllability::NotOmnipotent {
                    from: self.quotient.label(a).to_string(),
                    to: self.quotient.label(b).to_string(),
                },
            }),
            Err(TransferError::Conflict(c)) => Ok(Controllability::Conflict(c)),
            Err(TransferError::Invalid(e)) => Err(e),
        }
    }

    /// Every member transfers and the transferred set is omnipotent.
    pub fn is_controllable(&self, set: &GeneratorSet) -> Result<bool> {
        Ok(self.controllability(set)?.is_controllable())
    }

    /// Every block is `pass` or `fail`; one of them may be absent.
    fn is_pass_fail(&self) -> bool {
        self.quotient
            .labels()
            .iter()
            .all(|l| l == PASS || l == FAIL)
    }

    /// Source states in the `pass` block, for a binary evaluator.
    pub fn pass_states(&self) -> Result<Vec<StateId>> {
        if !self.is_pass_fail() {
            return Err(Error::NotBinary(self.name.clone()));
        }
        Ok(self
            .partition
            .block_by_label(PASS)
            .map(|b| self.partition.blocks()[b].members.clone())
            .unwrap_or_default())
    }

    /// Binary evaluator with the given pass states. Degenerates to a single
    /// block when `pass` is empty or covers everything.
    pub fn binary(
        name: impl Into<String>,
        category: &Arc<CognitiveCategory>,
        pass: &[StateId],
    ) -> Result<Self> {
        let mut is_pass = vec![false; category.len()];
        for &s in pass {
            category.check(s)?;
            is_pass[s.index()] = true;
        }
        let (yes, no): (Vec<_>, Vec<_>) = category.states().partition(|s| is_pass[s.index()]);
        let blocks: Vec<(&str, Vec<StateId>)> = [(PASS, yes), (FAIL, no)]
            .into_iter()
            .filter(|(_, m)| !m.is_empty())
            .collect();
        Evaluator::from_blocks(name, category, blocks)
    }
}

/// Free-function form of [`Evaluator::transfer`].
pub fn transfer_generator(
    e: &Evaluator,
    g: &Generator,
) -> std::result::Result<Generator, TransferError> {
    e.transfer(g)
}

/// AND of binary pass/fail evaluators over one category.
pub fn conjunction(name: impl Into<String>, operands: &[Evaluator]) -> Result<Conjunction> {
    let first = operands.first().ok_or(Error::EmptyConjunction)?;
    let category = first.source();
    let mut pass = vec![true; category.len()];
    for e in operands {
        ensure_same(category, e.source())?;
        let mut hit = vec![false; category.len()];
        for s in e.pass_states()? {
            hit[s.index()] = true;
        }
        for (p, h) in pass.iter_mut().zip(hit) {
            *p &= h;
        }
    }
    let pass: Vec<StateId> = category.states().filter(|s| pass[s.index()]).collect();
    Ok(Conjunction {
        empty_pass: pass.is_empty(),
        evaluator: Evaluator::binary(name, category, &pass)?,
    })
}
