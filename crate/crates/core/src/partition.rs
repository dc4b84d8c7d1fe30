//! Set partitions of a category's states, their common refinement, exhaustive
//! enumeration in restricted-growth-string order, and exact Bell numbers.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::category::{ensure_same, CognitiveCategory, StateId};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`bell_number`].
pub const MAX_BELL_INDEX: usize = 500;

/// Largest category accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_STATES: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub label: String,
    /// Sorted by ordinal.
    pub members: Vec<StateId>,
}

#[derive(Debug, Clone)]
pub struct Partition {
    category: Arc<CognitiveCategory>,
    blocks: Vec<Block>,
    block_of: Vec<usize>,
}

/// Structural equality: same category, same blocks with the same labels in
/// the same order.
impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        crate::category::same_category(&self.category, &other.category)
            && self.blocks == other.blocks
    }
}

impl Eq for Partition {}

impl Partition {
    /// Validates that `blocks` cover every state exactly once.
    pub fn new<L, I>(category: &Arc<CognitiveCategory>, blocks: I) -> Result<Self>
    where
        L: Into<String>,
        I: IntoIterator<Item = (L, Vec<StateId>)>,
    {
        let n = category.len();
        let mut block_of = vec![usize::MAX; n];
        let mut out: Vec<Block> = Vec::new();
        let mut labels = HashSet::new();
        for (label, mut members) in blocks {
            let label = label.into();
            if !labels.insert(label.clone()) {
                return Err(Error::DuplicateBlock(label));
            }
            if members.is_empty() {
                return Err(Error::EmptyBlock(label));
            }
            let idx = out.len();
            for &s in &members {
                category.check(s)?;
                let prev = block_of[s.index()];
                if prev != usize::MAX {
                    let state = category.label(s).to_string();
                    let first = if prev == idx {
                        label.clone()
                    } else {
                        out[prev].label.clone()
                    };
                    return Err(Error::OverlappingBlocks {
                        state,
                        first,
                        second: label,
                    });
                }
                block_of[s.index()] = idx;
            }
            members.sort_unstable();
            out.push(Block { label, members });
        }
        if let Some(missing) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::UncoveredState(
                category.label(StateId::new(missing)).to_string(),
            ));
        }
        Ok(Partition {
            category: Arc::clone(category),
            blocks: out,
            block_of,
        })
    }

    /// Builds a partition from a block index per state. Block `i` gets
    /// `label(i)`; indices must be dense.
    pub fn from_assignment(
        category: &Arc<CognitiveCategory>,
        assignment: &[usize],
        label: impl Fn(usize) -> String,
    ) -> Result<Self> {
        if assignment.len() != category.len() {
            return Err(Error::TableLength {
                expected: category.len(),
                got: assignment.len(),
            });
        }
        let count = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); count];
        for (s, &b) in assignment.iter().enumerate() {
            members[b].push(StateId::new(s));
        }
        Partition::new(
            category,
            members.into_iter().enumerate().map(|(i, m)| (label(i), m)),
        )
    }

    /// Every state in its own block, labeled by the state label.
    pub fn discrete(category: &Arc<CognitiveCategory>) -> Self {
        Partition::new(
            category,
            category
                .states()
                .map(|s| (category.label(s).to_string(), vec![s])),
        )
        .expect("discrete partition is valid")
    }

    /// One block holding every state.
    pub fn single_block(category: &Arc<CognitiveCategory>, label: impl Into<String>) -> Self {
        Partition::new(category, [(label.into(), category.states().collect())])
            .expect("single block is valid")
    }

    pub fn category(&self) -> &Arc<CognitiveCategory> {
        &self.category
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `state`.
    pub fn block_index(&self, state: StateId) -> Result<usize> {
        self.category.check(state)?;
        Ok(self.block_of[state.index()])
    }

    #[inline]
    pub(crate) fn block_of(&self, state: StateId) -> usize {
        self.block_of[state.index()]
    }

    pub fn block_by_label(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.label == label)
    }

    /// Restricted growth string: blocks renumbered by first appearance.
    /// Two partitions are equal up to relabeling iff their RGS agree.
    pub fn rgs(&self) -> Vec<usize> {
        let mut renumber = vec![usize::MAX; self.blocks.len()];
        let mut next = 0;
        self.block_of
            .iter()
            .map(|&b| {
                if renumber[b] == usize::MAX {
                    renumber[b] = next;
                    next += 1;
                }
                renumber[b]
            })
            .collect()
    }

    pub fn same_grouping(&self, other: &Partition) -> bool {
        crate::category::same_category(&self.category, &other.category) && self.rgs() == other.rgs()
    }

    /// Common refinement: non-empty intersections of blocks, ordered by the
    /// first state they contain, labeled `left⊗right`.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        ensure_same(&self.category, &other.category)?;
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let mut members: Vec<Vec<StateId>> = Vec::new();
        for s in self.category.states() {
            let key = (self.block_of(s), other.block_of(s));
            match seen.iter().position(|k| *k == key) {
                Some(i) => members[i].push(s),
                None => {
                    seen.push(key);
                    members.push(vec![s]);
                }
            }
        }
        Partition::new(
            &self.category,
            seen.into_iter().zip(members).map(|((a, b), m)| {
                (
                    format!("{}⊗{}", self.blocks[a].label, other.blocks[b].label),
                    m,
                )
            }),
        )
    }
}

/// Common refinement of two partitions.
pub fn meet(left: &Partition, right: &Partition) -> Result<Partition> {
    left.meet(right)
}

/// Exact Bell number via the Bell triangle.
pub fn bell_number(n: usize) -> Result<BigUint> {
    if n > MAX_BELL_INDEX {
        return Err(Error::TooLarge {
            what: "Bell index",
            value: n as u128,
            limit: MAX_BELL_INDEX as u128,
        });
    }
    // Row r of the triangle starts with the last entry of row r-1; each next
    // entry adds its left neighbour and the entry above that neighbour.
    // B_r is the first entry of row r.
    let mut row: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().expect("non-empty row").clone());
        for above in &row {
            let value = next.last().expect("non-empty row") + above;
            next.push(value);
        }
        row = next;
    }
    Ok(row.swap_remove(0))
}

/// Iterator over restricted growth strings of length `n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    current: Vec<usize>,
    /// `maxima[i]` = max of `current[..i]`
    maxima: Vec<usize>,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            current: vec![0; n],
            maxima: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let n = self.current.len();
        // Find the rightmost position that can still grow.
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.current[i] <= self.maxima[i] {
                self.current[i] += 1;
                for j in i + 1..n {
                    self.maxima[j] = self.maxima[j - 1].max(self.current[j - 1]);
                    self.current[j] = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All partitions of the category's states. Block `i` is labeled `B{i}`.
pub fn enumerate_partitions(category: &Arc<CognitiveCategory>) -> Result<Vec<Partition>> {
    if category.len() > MAX_PARTITION_STATES {
        return Err(Error::TooLarge {
            what: "category size",
            value: category.len() as u128,
            limit: MAX_PARTITION_STATES as u128,
        });
    }
    RestrictedGrowth::new(category.len())
        .map(|rgs| Partition::from_assignment(category, &rgs, |i| format!("B{i}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(n: usize) -> Arc<CognitiveCategory> {
        CognitiveCategory::new("C", (1..=n).map(|i| format!("s{i}"))).unwrap()
    }

    fn st(i: usize) -> StateId {
        StateId::new(i)
    }

    /// Brute force: assign every element a block index in 0..n, keep the
    /// canonical (first-appearance) assignments.
    fn brute_partition_count(n: usize) -> usize {
        let mut count = 0;
        let total = n.pow(n as u32).max(1);
        for code in 0..total {
            let mut c = code;
            let digits: Vec<usize> = (0..n)
                .map(|_| {
                    let d = c % n.max(1);
                    c /= n.max(1);
                    d
                })
                .collect();
            let mut max_seen: isize = -1;
            let canonical = digits.iter().all(|&d| {
                let ok = d as isize <= max_seen + 1;
                max_seen = max_seen.max(d as isize);
                ok
            });
            if canonical {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn bell_matches_brute_force() {
        for n in 0..=6 {
            assert_eq!(
                bell_number(n).unwrap(),
                BigUint::from(brute_partition_count(n)),
                "n={n}"
            );
        }
        assert_eq!(brute_partition_count(4), 15);
        assert_eq!(brute_partition_count(6), 203);
        assert_eq!(bell_number(1).unwrap(), BigUint::from(1u32));
        assert!(bell_number(501).is_err());
        assert!(bell_number(500).is_ok());
    }

    #[test]
    fn rgs_order() {
        let all: Vec<_> = RestrictedGrowth::new(3).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![0, 1, 1],
                vec![0, 1, 2]
            ]
        );
        assert_eq!(RestrictedGrowth::new(1).count(), 1);
        assert_eq!(RestrictedGrowth::new(0).count(), 1);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_partitions(&cat(1)).unwrap().len(), 1);
        assert_eq!(enumerate_partitions(&cat(2)).unwrap().len(), 2);
        for n in 1..=6 {
            let parts = enumerate_partitions(&cat(n)).unwrap();
            assert_eq!(BigUint::from(parts.len()), bell_number(n).unwrap());
            let distinct: HashSet<_> = parts.iter().map(Partition::rgs).collect();
            assert_eq!(distinct.len(), parts.len());
        }
        assert!(enumerate_partitions(&cat(11)).is_err());
    }

    #[test]
    fn construction_errors() {
        let c = cat(4);
        assert!(matches!(
            Partition::new(
                &c,
                [("A", vec![st(0), st(1)]), ("B", vec![st(1), st(2), st(3)])]
            ),
            Err(Error::OverlappingBlocks { .. })
        ));
        assert!(matches!(
            Partition::new(&c, [("A", vec![st(0), st(1)]), ("B", vec![st(2)])]),
            Err(Error::UncoveredState(_))
        ));
        assert!(matches!(
            Partition::new(&c, [("A", vec![st(0), st(1), st(2), st(3)]), ("B", vec![])]),
            Err(Error::EmptyBlock(_))
        ));
        assert!(matches!(
            Partition::new(&c, [("A", vec![st(0), st(1)]), ("A", vec![st(2), st(3)])]),
            Err(Error::DuplicateBlock(_))
        ));
    }

    #[test]
    fn meet_examples() {
        let c = cat(4);
        let ab =
            Partition::new(&c, [("A", vec![st(0), st(1)]), ("B", vec![st(2), st(3)])]).unwrap();
        let cd =
            Partition::new(&c, [("C", vec![st(0), st(2)]), ("D", vec![st(1), st(3)])]).unwrap();
        let m = ab.meet(&cd).unwrap();
        assert_eq!(m.len(), 4);
        assert!(m.same_grouping(&Partition::discrete(&c)));
        assert_eq!(m.blocks()[0].label, "A⊗C");
        assert!(ab
            .meet(&Partition::discrete(&c))
            .unwrap()
            .same_grouping(&Partition::discrete(&c)));
        assert!(ab
            .meet(&Partition::single_block(&c, "all"))
            .unwrap()
            .same_grouping(&ab));
    }

    #[test]
    fn meet_laws_exhaustive() {
        for n in 1..=4 {
            let c = cat(n);
            let parts = enumerate_partitions(&c).unwrap();
            for p in &parts {
                assert!(p.meet(p).unwrap().same_grouping(p));
                for q in &parts {
                    let pq = p.meet(q).unwrap();
                    assert!(pq.same_grouping(&q.meet(p).unwrap()));
                    for r in parts.iter().step_by(3) {
                        assert!(pq
                            .meet(r)
                            .unwrap()
                            .same_grouping(&p.meet(&q.meet(r).unwrap()).unwrap()));
                    }
                }
            }
        }
    }
}
