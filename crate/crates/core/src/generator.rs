//! Generators: total endofunctions on the states of a category.
//!
//! A generator is stored as a dense table `table[x] = image of x`. Applying it
//! returns the image state; [`Generator::to_morphism`] returns the induced
//! morphism `x → table[x]`. Equality and hashing look at the action only.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::category::{ensure_same, CognitiveCategory, Morphism, StateId};
use crate::error::{Error, Result};
use crate::par::Strategy;

/// Largest category `enumerate_generators` accepts.
pub const MAX_ENUMERATION_STATES: usize = 8;

/// Largest category the exhaustive omnipotence lower-bound check accepts.
pub const MAX_LOWER_BOUND_STATES: usize = 4;

#[derive(Debug, Clone)]
pub struct Generator {
    name: String,
    category: Arc<CognitiveCategory>,
    table: Vec<StateId>,
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && crate::category::same_category(&self.category, &other.category)
    }
}

impl Eq for Generator {}

impl Hash for Generator {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.table.hash(state);
    }
}

impl Generator {
    pub fn new(
        name: impl Into<String>,
        category: &Arc<CognitiveCategory>,
        table: Vec<StateId>,
    ) -> Result<Self> {
        if table.len() != category.len() {
            return Err(Error::TableLength {
                expected: category.len(),
                got: table.len(),
            });
        }
        for &t in &table {
            category.check(t)?;
        }
        Ok(Generator {
            name: name.into(),
            category: Arc::clone(category),
            table,
        })
    }

    /// Builds a generator from `(source, target)` label pairs covering every state.
    pub fn from_pairs<'a, I>(
        name: impl Into<String>,
        category: &Arc<CognitiveCategory>,
        pairs: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut table = vec![None; category.len()];
        for (from, to) in pairs {
            table[category.state(from)?.index()] = Some(category.state(to)?);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| Error::UncoveredState(category.label(StateId::new(i)).to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Generator::new(name, category, table)
    }

    pub(crate) fn from_table_unchecked(
        name: String,
        category: &Arc<CognitiveCategory>,
        table: Vec<StateId>,
    ) -> Self {
        debug_assert_eq!(table.len(), category.len());
        Generator {
            name,
            category: Arc::clone(category),
            table,
        }
    }

    pub fn identity(category: &Arc<CognitiveCategory>) -> Self {
        Generator::from_table_unchecked("id".into(), category, category.states().collect())
    }

    /// The purposeful generator sending every state to `target`.
    pub fn constant(category: &Arc<CognitiveCategory>, target: StateId) -> Result<Self> {
        category.check(target)?;
        Ok(Generator::from_table_unchecked(
            format!("const_{}", category.label(target)),
            category,
            vec![target; category.len()],
        ))
    }

    /// `S_i ↦ S_{i+1}`, with the last state wrapping to the first.
    pub fn cycle(category: &Arc<CognitiveCategory>) -> Self {
        let n = category.len();
        let table = (0..n).map(|i| StateId::new((i + 1) % n)).collect();
        Generator::from_table_unchecked("cycle".into(), category, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn category(&self) -> &Arc<CognitiveCategory> {
        &self.category
    }

    pub fn table(&self) -> &[StateId] {
        &self.table
    }

    /// Image of `state`.
    pub fn apply(&self, state: StateId) -> Result<StateId> {
        self.category.check(state)?;
        Ok(self.table[state.index()])
    }

    #[inline]
    pub(crate) fn image(&self, state: StateId) -> StateId {
        self.table[state.index()]
    }

    /// The morphism `state → apply(state)`.
    pub fn to_morphism(&self, state: StateId) -> Result<Morphism> {
        let target = self.apply(state)?;
        self.category.hom(state, target)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn after(&self, inner: &Generator) -> Result<Generator> {
        ensure_same(&self.category, &inner.category)?;
        let table = inner.table.iter().map(|&x| self.image(x)).collect();
        Ok(Generator::from_table_unchecked(
            format!("{}_o_{}", self.name, inner.name),
            &self.category,
            table,
        ))
    }

    /// The constant value, if this generator is purposeful.
    pub fn is_purposeful(&self) -> Option<StateId> {
        let first = self.table[0];
        self.table.iter().all(|&t| t == first).then_some(first)
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(i, t)| t.index() == i)
    }

    /// `{g¹, …, gⁿ}` with repeated actions dropped.
    pub fn powers_closure(&self) -> GeneratorSet {
        let n = self.category.len();
        let mut members = Vec::with_capacity(n);
        let mut current = self.clone();
        for i in 1..=n {
            let name = if i == 1 {
                self.name.clone()
            } else {
                format!("{}_{}", self.name, i)
            };
            members.push(current.clone().with_name(name));
            current = self.after(&current).expect("same category");
        }
        GeneratorSet::dedup(&self.category, members).expect("same category")
    }
}

/// `outer ∘ inner`.
pub fn compose_generators(outer: &Generator, inner: &Generator) -> Result<Generator> {
    outer.after(inner)
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.name)?;
        for (i, t) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}->{}",
                self.category.label(StateId::new(i)),
                self.category.label(*t)
            )?;
        }
        write!(f, "]")
    }
}

/// A finite set of generators over one category, in declaration order.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    category: Arc<CognitiveCategory>,
    members: Vec<Generator>,
}

/// Set equality of actions; declaration order and names are ignored.
impl PartialEq for GeneratorSet {
    fn eq(&self, other: &Self) -> bool {
        crate::category::same_category(&self.category, &other.category)
            && self.members.len() == other.members.len()
            && self.members.iter().collect::<HashSet<_>>()
                == other.members.iter().collect::<HashSet<_>>()
    }
}

impl Eq for GeneratorSet {}

impl GeneratorSet {
    /// Rejects foreign members and repeated actions.
    pub fn new(category: &Arc<CognitiveCategory>, members: Vec<Generator>) -> Result<Self> {
        let mut seen: Vec<&Generator> = Vec::with_capacity(members.len());
        for g in &members {
            ensure_same(category, &g.category)?;
            if let Some(prev) = seen.iter().find(|p| **p == g) {
                return Err(Error::DuplicateGenerator {
                    first: prev.name.clone(),
                    second: g.name.clone(),
                });
            }
            seen.push(g);
        }
        Ok(GeneratorSet {
            category: Arc::clone(category),
            members,
        })
    }

    /// Keeps the first member of every action.
    pub fn dedup(category: &Arc<CognitiveCategory>, members: Vec<Generator>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(members.len());
        for g in members {
            ensure_same(category, &g.category)?;
            if seen.insert(g.table.clone()) {
                kept.push(g);
            }
        }
        Ok(GeneratorSet {
            category: Arc::clone(category),
            members: kept,
        })
    }

    pub fn category(&self) -> &Arc<CognitiveCategory> {
        &self.category
    }

    pub fn members(&self) -> &[Generator] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.members.iter().find(|g| g.name == name)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Generator> {
        self.members.iter()
    }

    /// First ordered pair `(from, to)` that no member realizes.
    pub fn first_uncovered(&self) -> Option<(StateId, StateId)> {
        let n = self.category.len();
        let mut covered = vec![false; n * n];
        for g in &self.members {
            for (a, b) in g.table.iter().enumerate() {
                covered[a * n + b.index()] = true;
            }
        }
        covered
            .iter()
            .position(|c| !c)
            .map(|p| (StateId::new(p / n), StateId::new(p % n)))
    }

    /// Every ordered pair is realized by some member, without composing members.
    pub fn is_omnipotent(&self) -> bool {
        self.first_uncovered().is_none()
    }

    /// Omnipotent with exactly `n` members.
    pub fn is_reduced(&self) -> bool {
        self.members.len() == self.category.len() && self.is_omnipotent()
    }

    /// The `n` constant generators, in state order.
    pub fn canonical(category: &Arc<CognitiveCategory>) -> Self {
        let members = category
            .states()
            .map(|t| Generator::constant(category, t).expect("own state"))
            .collect();
        GeneratorSet {
            category: Arc::clone(category),
            members,
        }
    }

    /// Builds one purposeful generator per target by picking, for every
    /// outset, the first member that reaches the target from it.
    pub fn canonical_from_omnipotent(&self) -> Result<Self> {
        let cat = &self.category;
        let mut members = Vec::with_capacity(cat.len());
        for target in cat.states() {
            let mut table = Vec::with_capacity(cat.len());
            for outset in cat.states() {
                let chosen = self
                    .members
                    .iter()
                    .find(|g| g.image(outset) == target)
                    .ok_or_else(|| Error::NotOmnipotent {
                        from: cat.label(outset).to_string(),
                        to: cat.label(target).to_string(),
                    })?;
                table.push(chosen.image(outset));
            }
            members.push(Generator::from_table_unchecked(
                format!("const_{}", cat.label(target)),
                cat,
                table,
            ));
        }
        GeneratorSet::new(cat, members)
    }
}

impl<'a> IntoIterator for &'a GeneratorSet {
    type Item = &'a Generator;
    type IntoIter = std::slice::Iter<'a, Generator>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Canonical set of `category`.
pub fn canonical_set(category: &Arc<CognitiveCategory>) -> GeneratorSet {
    GeneratorSet::canonical(category)
}

/// Decodes `code` as a base-`n` table, least significant digit at state 0.
fn table_from_code(mut code: u64, n: usize) -> Vec<StateId> {
    let mut table = Vec::with_capacity(n);
    for _ in 0..n {
        table.push(StateId::new((code % n as u64) as usize));
        code /= n as u64;
    }
    table
}

fn check_enumeration_bound(category: &CognitiveCategory, limit: usize) -> Result<()> {
    if category.len() > limit {
        return Err(Error::TooLarge {
            what: "category size",
            value: category.len() as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

/// All `nⁿ` total endofunctions of the category.
pub fn enumerate_generators(category: &Arc<CognitiveCategory>) -> Result<GeneratorSet> {
    check_enumeration_bound(category, MAX_ENUMERATION_STATES)?;
    let n = category.len();
    let total = (n as u64).pow(n as u32);
    let members = (0..total)
        .map(|code| {
            Generator::from_table_unchecked(format!("g{code}"), category, table_from_code(code, n))
        })
        .collect();
    Ok(GeneratorSet {
        category: Arc::clone(category),
        members,
    })
}

/// Exhaustively checks that no set of at most `k` generators is omnipotent.
///
/// Each candidate generator is reduced to the bitmask of pairs it realizes;
/// a set is omnipotent iff the union of its masks covers all `n²` pairs.
pub fn min_omnipotent_size_check(category: &Arc<CognitiveCategory>, k: usize) -> Result<bool> {
    min_omnipotent_size_check_with(category, k, Strategy::default())
}

pub fn min_omnipotent_size_check_with(
    category: &Arc<CognitiveCategory>,
    k: usize,
    strategy: Strategy,
) -> Result<bool> {
    check_enumeration_bound(category, MAX_LOWER_BOUND_STATES)?;
    let n = category.len();
    if k >= n {
        return Err(Error::TooLarge {
            what: "subset size",
            value: k as u128,
            limit: n.saturating_sub(1) as u128,
        });
    }
    let total = n.pow(n as u32);
    let masks: Vec<u32> = (0..total as u64)
        .map(|code| {
            table_from_code(code, n)
                .iter()
                .enumerate()
                .fold(0u32, |m, (a, b)| m | 1 << (a * n + b.index()))
        })
        .collect();
    let full: u32 = (1u32 << (n * n)) - 1;

    fn covers(masks: &[u32], start: usize, left: usize, acc: u32, full: u32) -> bool {
        if acc == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..masks.len()).any(|i| covers(masks, i + 1, left - 1, acc | masks[i], full))
    }

    let found = (1..=k).any(|size| {
        strategy.any_range(masks.len(), |first| {
            covers(&masks, first + 1, size - 1, masks[first], full)
        })
    });
    Ok(!found)
}
