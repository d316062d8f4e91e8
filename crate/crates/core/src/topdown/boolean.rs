//! Boolean operations on set-accepting DTDAs.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{
    distinct_names, mask_to_set, DtdaCore, DtdaSet, StateSet, DEFAULT_FRONTIER_SET_CAP,
    POWERSET_STATE_CAP,
};
use crate::error::{Error, Result};
use crate::tree::Tree;

/// Reachable synchronous product of two cores. Returns the product and the
/// pair of component states behind each product state.
pub(crate) fn product_core(a: &DtdaCore, b: &DtdaCore) -> Result<(DtdaCore, Vec<(usize, usize)>)> {
    a.alphabet().ensure_same(b.alphabet(), "top-down product")?;
    let alphabet = a.alphabet();
    let mut pairs = vec![(a.initial(), b.initial())];
    let mut index = HashMap::from([(pairs[0], 0usize)]);
    let mut delta: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (p, q) = pairs[i];
        let mut row = Vec::with_capacity(alphabet.len());
        for s in alphabet.symbols() {
            let mut targets = Vec::new();
            for (&x, &y) in a.targets(p, s).iter().zip(b.targets(q, s)) {
                let j = match index.get(&(x, y)) {
                    Some(&j) => j,
                    None => {
                        pairs.push((x, y));
                        index.insert((x, y), pairs.len() - 1);
                        queue.push_back(pairs.len() - 1);
                        pairs.len() - 1
                    }
                };
                targets.push(j);
            }
            row.push(targets);
        }
        if delta.len() <= i {
            delta.resize(i + 1, Vec::new());
        }
        delta[i] = row;
    }
    let names = distinct_names(
        pairs
            .iter()
            .map(|&(p, q)| format!("{}|{}", a.name(p), b.name(q)))
            .collect(),
    );
    Ok((DtdaCore::new(alphabet, names, 0, delta)?, pairs))
}

impl DtdaSet {
    /// Accepts exactly the trees this automaton rejects: the family becomes
    /// every subset of the states outside the current family.
    pub fn complement(&self) -> Result<DtdaSet> {
        let n = self.num_states();
        if n > POWERSET_STATE_CAP {
            return Err(Error::limit(
                "states for set complement",
                POWERSET_STATE_CAP,
            ));
        }
        let family = (0u32..1 << n)
            .map(|m| mask_to_set(m as u128))
            .filter(|s| !self.family.contains(s));
        DtdaSet::new(self.core.clone(), family)
    }

    pub fn union(&self, other: &DtdaSet) -> Result<DtdaSet> {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &DtdaSet) -> Result<DtdaSet> {
        self.combine(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &DtdaSet) -> Result<DtdaSet> {
        self.combine(other, |x, y| x && !y)
    }

    /// Product automaton whose family holds the realizable product frontier
    /// sets whose two projections satisfy `op` with respect to the families.
    pub fn combine(&self, other: &DtdaSet, op: impl Fn(bool, bool) -> bool) -> Result<DtdaSet> {
        let (core, pairs) = product_core(&self.core, &other.core)?;
        let real = core.realizable_masks(DEFAULT_FRONTIER_SET_CAP)?;
        let mut family = BTreeSet::new();
        for &m in &real[core.initial()] {
            let set = mask_to_set(m);
            let left: StateSet = set.iter().map(|&i| pairs[i].0).collect();
            let right: StateSet = set.iter().map(|&i| pairs[i].1).collect();
            if op(self.family.contains(&left), other.family.contains(&right)) {
                family.insert(set);
            }
        }
        DtdaSet::new(core, family)
    }

    /// Drops family members no tree can produce. The language is unchanged.
    pub fn trim(&self) -> Result<DtdaSet> {
        let real = self.core.realizable_frontier_sets()?;
        DtdaSet::new(
            self.core.clone(),
            self.family.iter().filter(|s| real.contains(*s)).cloned(),
        )
    }

    /// A small accepted tree, or `None` for the empty language.
    pub fn witness(&self) -> Result<Option<Tree>> {
        let real = self.core.realizable_witnesses(DEFAULT_FRONTIER_SET_CAP)?;
        Ok(smallest(
            real[self.core.initial()]
                .iter()
                .filter(|(&m, _)| self.family.contains(&mask_to_set(m)))
                .map(|(_, t)| t),
        ))
    }

    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.witness()?.is_none())
    }

    /// A tree in exactly one of the two languages, found on the realizable
    /// frontier sets of the product core.
    pub fn separating_tree(&self, other: &DtdaSet) -> Result<Option<Tree>> {
        let (core, pairs) = product_core(&self.core, &other.core)?;
        let real = core.realizable_witnesses(DEFAULT_FRONTIER_SET_CAP)?;
        Ok(smallest(real[core.initial()].iter().filter_map(
            |(&m, t)| {
                let set = mask_to_set(m);
                let left: StateSet = set.iter().map(|&i| pairs[i].0).collect();
                let right: StateSet = set.iter().map(|&i| pairs[i].1).collect();
                (self.family.contains(&left) != other.family.contains(&right)).then_some(t)
            },
        )))
    }

    pub fn equivalent(&self, other: &DtdaSet) -> Result<bool> {
        Ok(self.separating_tree(other)?.is_none())
    }
}

/// Fewest nodes first, then preorder.
fn smallest<'a>(trees: impl Iterator<Item = &'a Tree>) -> Option<Tree> {
    trees
        .min_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)))
        .cloned()
}
