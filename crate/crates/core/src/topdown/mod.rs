//! Deterministic top-down (root-to-frontier) tree automata.
//!
//! All three acceptance variants share a [`DtdaCore`]: states, an initial
//! state and a total transition function that sends a state and a symbol of
//! rank `i > 0` to a tuple of `i` child states, and a state and a constant to
//! a single state placed on the outer frontier below the leaf.
//!
//! * [`Dtda`] accepts when every outer-frontier state is final.
//! * [`DtdaSet`] accepts when the exact set of outer-frontier states belongs
//!   to a family of state sets.
//! * [`FrontierCheckDtda`] hands the left-to-right sequence of outer-frontier
//!   states to a word automaton.

mod boolean;
mod comb;
mod convert;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};
use crate::tree::{Position, Tree};
use crate::word::Nfa;

pub use comb::{comb_refutation, CombRefutation, CombTarget, RefutationDisplay};
pub use convert::{Decomposition, Literal};

/// A set of states, sorted.
pub type StateSet = BTreeSet<usize>;

/// Largest state count for which families over all subsets are enumerated.
pub const POWERSET_STATE_CAP: usize = 20;

/// Largest state count supported by the bitmask-based set computations.
pub const MASK_STATE_CAP: usize = 128;

/// Default cap on the number of realizable frontier sets explored.
pub const DEFAULT_FRONTIER_SET_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtdaCore {
    alphabet: RankedAlphabet,
    names: Vec<String>,
    initial: usize,
    /// `delta[q][a]`: child states for an inner symbol, or the single
    /// frontier state for a constant.
    delta: Vec<Vec<Vec<usize>>>,
}

impl DtdaCore {
    pub fn new(
        alphabet: &RankedAlphabet,
        names: Vec<String>,
        initial: usize,
        delta: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = names.len();
        if initial >= n {
            return Err(Error::Precondition("initial state out of range".into()));
        }
        if delta.len() != n {
            return Err(Error::Precondition(
                "transition table must have one row per state".into(),
            ));
        }
        let distinct: HashSet<&String> = names.iter().collect();
        if distinct.len() != n {
            return Err(Error::Precondition("state names must be distinct".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::Precondition(format!(
                    "state `{}` does not define a transition for every symbol",
                    names[q]
                )));
            }
            for s in alphabet.symbols() {
                let expected = alphabet.rank(s).max(1);
                let targets = &row[s.0];
                if targets.len() != expected || targets.iter().any(|&t| t >= n) {
                    return Err(Error::Precondition(format!(
                        "transition of state `{}` on `{}` must name {} valid state(s)",
                        names[q],
                        alphabet.name(s),
                        expected
                    )));
                }
            }
        }
        Ok(DtdaCore {
            alphabet: alphabet.clone(),
            names,
            initial,
            delta,
        })
    }

    /// Builds the table by calling `f(state, symbol)` for every pair.
    pub fn from_fn(
        alphabet: &RankedAlphabet,
        names: Vec<String>,
        initial: usize,
        mut f: impl FnMut(usize, Symbol) -> Vec<usize>,
    ) -> Result<Self> {
        let delta = (0..names.len())
            .map(|q| alphabet.symbols().map(|s| f(q, s)).collect())
            .collect();
        Self::new(alphabet, names, initial, delta)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn state_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// `δ(q, a)`: child states, or the one frontier state for a constant.
    pub fn targets(&self, q: usize, a: Symbol) -> &[usize] {
        &self.delta[q][a.0]
    }

    pub(crate) fn check_tree(&self, t: &Tree) -> Result<()> {
        if t.is_consistent(&self.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(
                "tree is not rank-consistent over the automaton's alphabet".into(),
            ))
        }
    }

    /// The state at every outer-frontier position, left to right.
    pub fn run(&self, t: &Tree) -> Result<Vec<(Position, usize)>> {
        self.check_tree(t)?;
        let mut out = Vec::new();
        self.run_from(self.initial, t, &mut Position::root(), &mut out);
        Ok(out)
    }

    fn run_from(&self, q: usize, t: &Tree, pos: &mut Position, out: &mut Vec<(Position, usize)>) {
        let next = &self.delta[q][t.label().0];
        if t.is_leaf() {
            out.push((pos.child(1), next[0]));
            return;
        }
        for (i, (c, &qc)) in t.children().iter().zip(next).enumerate() {
            pos.0.push(i + 1);
            self.run_from(qc, c, pos, out);
            pos.0.pop();
        }
    }

    /// Left-to-right sequence of outer-frontier states.
    pub fn frontier_word(&self, t: &Tree) -> Result<Vec<usize>> {
        Ok(self.run(t)?.into_iter().map(|(_, q)| q).collect())
    }

    /// `δ_A(q, t)`: the set of states reached at the outer frontier from `q`.
    pub fn reached_from(&self, q: usize, t: &Tree) -> StateSet {
        let mut out = StateSet::new();
        self.collect_reached(q, t, &mut out);
        out
    }

    fn collect_reached(&self, q: usize, t: &Tree, out: &mut StateSet) {
        let next = &self.delta[q][t.label().0];
        if t.is_leaf() {
            out.insert(next[0]);
        } else {
            for (c, &qc) in t.children().iter().zip(next) {
                self.collect_reached(qc, c, out);
            }
        }
    }

    /// `δ_A(q0, t)`.
    pub fn frontier_set(&self, t: &Tree) -> Result<StateSet> {
        self.check_tree(t)?;
        Ok(self.reached_from(self.initial, t))
    }

    /// States reachable from the initial state through the transition table.
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for row in &self.delta[q] {
                for &n in row {
                    if !seen[n] {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
        (0..self.num_states()).filter(|&q| seen[q]).collect()
    }

    /// The frontier sets `δ_A(q, t)` over all trees `t`, for every state `q`,
    /// as bitmasks. Least fixpoint of the recursive definition.
    pub(crate) fn realizable_masks(&self, cap: usize) -> Result<Vec<HashSet<u128>>> {
        if self.num_states() > MASK_STATE_CAP {
            return Err(Error::limit(
                "states for frontier-set computation",
                MASK_STATE_CAP,
            ));
        }
        let n = self.num_states();
        let mut real: Vec<HashSet<u128>> = vec![HashSet::new(); n];
        let mut total = 0usize;
        for (q, sets) in real.iter_mut().enumerate() {
            for c in self.alphabet.constants() {
                if sets.insert(1u128 << self.delta[q][c.0][0]) {
                    total += 1;
                }
            }
        }
        let inner: Vec<Symbol> = self
            .alphabet
            .symbols()
            .filter(|&s| self.alphabet.rank(s) > 0)
            .collect();
        // semi-naive: each round only builds combinations that use at least
        // one mask found in the previous round
        let mut fresh: Vec<HashSet<u128>> = real.clone();
        loop {
            let old: Vec<HashSet<u128>> = real
                .iter()
                .zip(&fresh)
                .map(|(all, new)| all.iter().filter(|m| !new.contains(m)).copied().collect())
                .collect();
            let mut next: Vec<HashSet<u128>> = vec![HashSet::new(); n];
            for q in 0..n {
                for &a in &inner {
                    let children = &self.delta[q][a.0];
                    for pivot in 0..children.len() {
                        let mut acc: HashSet<u128> = HashSet::from([0u128]);
                        for (j, &child) in children.iter().enumerate() {
                            let pick = match j.cmp(&pivot) {
                                Ordering::Less => &old[child],
                                Ordering::Equal => &fresh[child],
                                Ordering::Greater => &real[child],
                            };
                            acc = acc
                                .iter()
                                .flat_map(|&m| pick.iter().map(move |&r| m | r))
                                .collect();
                            if acc.is_empty() {
                                break;
                            }
                        }
                        for m in acc {
                            if !real[q].contains(&m) {
                                next[q].insert(m);
                            }
                        }
                    }
                }
            }
            let added: usize = next.iter().map(HashSet::len).sum();
            if added == 0 {
                return Ok(real);
            }
            total += added;
            if total > cap {
                return Err(Error::limit("realizable frontier sets", cap));
            }
            for (all, new) in real.iter_mut().zip(&next) {
                all.extend(new.iter().copied());
            }
            fresh = next;
        }
    }

    /// Like [`realizable_masks`](Self::realizable_masks), with a tree
    /// producing each mask. Masks are discovered height by height, so every
    /// witness has the least height possible and, among those found in the
    /// same round, the fewest nodes.
    pub(crate) fn realizable_witnesses(&self, cap: usize) -> Result<Vec<HashMap<u128, Tree>>> {
        if self.num_states() > MASK_STATE_CAP {
            return Err(Error::limit(
                "states for frontier-set computation",
                MASK_STATE_CAP,
            ));
        }
        let n = self.num_states();
        let mut real: Vec<HashMap<u128, Tree>> = vec![HashMap::new(); n];
        let mut total = 0usize;
        for (q, found) in real.iter_mut().enumerate() {
            for c in self.alphabet.constants() {
                found
                    .entry(1u128 << self.delta[q][c.0][0])
                    .or_insert_with(|| {
                        total += 1;
                        Tree::new_unchecked(c, Vec::new())
                    });
            }
        }
        let inner: Vec<Symbol> = self
            .alphabet
            .symbols()
            .filter(|&s| self.alphabet.rank(s) > 0)
            .collect();
        loop {
            let mut fresh: Vec<HashMap<u128, Tree>> = vec![HashMap::new(); n];
            for q in 0..n {
                for &a in &inner {
                    let mut acc: HashMap<u128, Vec<&Tree>> = HashMap::from([(0u128, Vec::new())]);
                    for &child in &self.delta[q][a.0] {
                        let mut next: HashMap<u128, Vec<&Tree>> = HashMap::new();
                        for (&m, kids) in &acc {
                            for (&r, t) in &real[child] {
                                let mut v = kids.clone();
                                v.push(t);
                                let better =
                                    next.get(&(m | r)).is_none_or(|old| rank(&v) < rank(old));
                                if better {
                                    next.insert(m | r, v);
                                }
                            }
                        }
                        acc = next;
                    }
                    for (m, kids) in acc {
                        if real[q].contains_key(&m) {
                            continue;
                        }
                        let t = Tree::new_unchecked(a, kids.into_iter().cloned().collect());
                        match fresh[q].get(&m) {
                            Some(old) if (old.size(), old) <= (t.size(), &t) => {}
                            _ => {
                                fresh[q].insert(m, t);
                            }
                        }
                    }
                }
            }
            let added: usize = fresh.iter().map(HashMap::len).sum();
            if added == 0 {
                return Ok(real);
            }
            total += added;
            if total > cap {
                return Err(Error::limit("realizable frontier sets", cap));
            }
            for (found, new) in real.iter_mut().zip(fresh) {
                found.extend(new);
            }
        }
    }

    /// Every set `δ_A(q0, t)` some tree produces.
    pub fn realizable_frontier_sets(&self) -> Result<BTreeSet<StateSet>> {
        let real = self.realizable_masks(DEFAULT_FRONTIER_SET_CAP)?;
        Ok(real[self.initial].iter().map(|&m| mask_to_set(m)).collect())
    }
}

/// Orders partial child lists by total size, then lexicographically.
fn rank<'a>(kids: &[&'a Tree]) -> (usize, Vec<&'a Tree>) {
    (kids.iter().map(|k| k.size()).sum(), kids.to_vec())
}

pub(crate) fn set_to_mask(set: &StateSet) -> u128 {
    set.iter().fold(0u128, |m, &q| m | (1u128 << q))
}

pub(crate) fn mask_to_set(mask: u128) -> StateSet {
    (0..128).filter(|&q| mask >> q & 1 == 1).collect()
}

/// Returns `candidates` if they are distinct valid names, else `q0, q1, ...`.
pub(crate) fn distinct_names(candidates: Vec<String>) -> Vec<String> {
    let unique: HashSet<&String> = candidates.iter().collect();
    if unique.len() == candidates.len()
        && candidates.iter().all(|n| crate::alphabet::is_valid_name(n))
    {
        candidates
    } else {
        (0..candidates.len()).map(|i| format!("q{i}")).collect()
    }
}

/// A DTDA with final states: accepts when `δ_A(q0, t) ⊆ F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dtda {
    core: DtdaCore,
    accepting: StateSet,
}

impl Dtda {
    pub fn new(core: DtdaCore, accepting: StateSet) -> Result<Self> {
        if accepting.iter().any(|&q| q >= core.num_states()) {
            return Err(Error::Precondition("final state out of range".into()));
        }
        Ok(Dtda { core, accepting })
    }

    pub fn core(&self) -> &DtdaCore {
        &self.core
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        self.core.alphabet()
    }

    pub fn accepting(&self) -> &StateSet {
        &self.accepting
    }

    pub fn num_states(&self) -> usize {
        self.core.num_states()
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        Ok(self.core.frontier_set(t)?.is_subset(&self.accepting))
    }
}

/// A DTDA with set acceptance: accepts when `δ_A(q0, t)` is a member of the
/// family. The family is kept canonical (sorted sets, sorted, no duplicates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtdaSet {
    core: DtdaCore,
    family: BTreeSet<StateSet>,
}

impl DtdaSet {
    pub fn new(core: DtdaCore, family: impl IntoIterator<Item = StateSet>) -> Result<Self> {
        let family: BTreeSet<StateSet> = family.into_iter().collect();
        let n = core.num_states();
        if family.iter().any(|s| s.iter().any(|&q| q >= n)) {
            return Err(Error::Precondition(
                "accepting family mentions an unknown state".into(),
            ));
        }
        Ok(DtdaSet { core, family })
    }

    pub fn core(&self) -> &DtdaCore {
        &self.core
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        self.core.alphabet()
    }

    pub fn family(&self) -> &BTreeSet<StateSet> {
        &self.family
    }

    pub fn num_states(&self) -> usize {
        self.core.num_states()
    }

    /// Acceptance together with the reached frontier set.
    pub fn run(&self, t: &Tree) -> Result<(bool, StateSet)> {
        let reached = self.core.frontier_set(t)?;
        Ok((self.family.contains(&reached), reached))
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        Ok(self.run(t)?.0)
    }

    pub fn format_set(&self, set: &StateSet) -> String {
        format_state_set(&self.core, set)
    }
}

pub fn format_state_set(core: &DtdaCore, set: &StateSet) -> String {
    let names: Vec<&str> = set.iter().map(|&q| core.name(q)).collect();
    format!("{{{}}}", names.join(" "))
}

/// A DTDA whose acceptance is decided by a word automaton reading the
/// outer-frontier states from left to right. The checker's letters are the
/// core's state indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontierCheckDtda {
    core: DtdaCore,
    checker: Nfa,
}

impl FrontierCheckDtda {
    pub fn new(core: DtdaCore, checker: Nfa) -> Result<Self> {
        if checker.letters() != core.num_states() {
            return Err(Error::AlphabetMismatch(format!(
                "frontier checker reads {} letters but the automaton has {} states",
                checker.letters(),
                core.num_states()
            )));
        }
        Ok(FrontierCheckDtda { core, checker })
    }

    pub fn core(&self) -> &DtdaCore {
        &self.core
    }

    pub fn checker(&self) -> &Nfa {
        &self.checker
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        self.core.alphabet()
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        Ok(self.checker.accepts(&self.core.frontier_word(t)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::enumerate_trees;

    fn fab() -> RankedAlphabet {
        RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap()
    }

    /// Two states; `f` swaps the state into the right child.
    fn swapper() -> DtdaCore {
        let al = fab();
        DtdaCore::from_fn(&al, vec!["p".into(), "r".into()], 0, |q, s| match s.0 {
            0 => vec![q, 1 - q],
            _ => vec![q],
        })
        .unwrap()
    }

    /// Independent recursive definition of the frontier set.
    fn reached_oracle(core: &DtdaCore, q: usize, t: &Tree) -> StateSet {
        let next = core.targets(q, t.label());
        if t.is_leaf() {
            return StateSet::from([next[0]]);
        }
        t.children()
            .iter()
            .zip(next)
            .flat_map(|(c, &qc)| reached_oracle(core, qc, c))
            .collect()
    }

    #[test]
    fn run_matches_recursive_definition() {
        let core = swapper();
        for t in enumerate_trees(core.alphabet(), 7) {
            let run = core.run(&t).unwrap();
            let positions: Vec<Position> = run.iter().map(|(p, _)| p.clone()).collect();
            assert_eq!(positions, t.outer_frontier());
            let image: StateSet = run.iter().map(|&(_, q)| q).collect();
            assert_eq!(image, reached_oracle(&core, 0, &t));
            assert_eq!(core.frontier_set(&t).unwrap(), image);
        }
    }

    #[test]
    fn single_state_run_is_constant() {
        let al = fab();
        let core =
            DtdaCore::from_fn(&al, vec!["q".into()], 0, |_, s| vec![0; al.rank(s).max(1)]).unwrap();
        for t in enumerate_trees(&al, 5) {
            assert!(core.run(&t).unwrap().iter().all(|&(_, q)| q == 0));
        }
    }

    #[test]
    fn trivial_acceptance() {
        let core = swapper();
        let all = Dtda::new(core.clone(), StateSet::from([0, 1])).unwrap();
        let none = Dtda::new(core.clone(), StateSet::new()).unwrap();
        let nothing = DtdaSet::new(core.clone(), []).unwrap();
        let everything = DtdaSet::new(
            core.clone(),
            [
                StateSet::new(),
                StateSet::from([0]),
                StateSet::from([1]),
                StateSet::from([0, 1]),
            ],
        )
        .unwrap();
        for t in enumerate_trees(core.alphabet(), 7) {
            assert!(all.accepts(&t).unwrap());
            assert!(!none.accepts(&t).unwrap());
            assert!(!nothing.accepts(&t).unwrap());
            assert!(everything.accepts(&t).unwrap());
        }
    }

    #[test]
    fn set_acceptance_distinguishes_exact_sets() {
        let core = swapper();
        let al = core.alphabet().clone();
        let only_p = DtdaSet::new(core, [StateSet::from([0])]).unwrap();
        let t = Tree::parse("f(a,b)", &al).unwrap();
        let (acc, reached) = only_p.run(&t).unwrap();
        assert!(!acc);
        assert_eq!(reached, StateSet::from([0, 1]));
        assert!(only_p.accepts(&Tree::parse("a", &al).unwrap()).unwrap());
        assert_eq!(only_p.format_set(&reached), "{p r}");
    }

    #[test]
    fn realizable_sets_of_swapper() {
        let core = swapper();
        let sets = core.realizable_frontier_sets().unwrap();
        let expect: BTreeSet<StateSet> = [StateSet::from([0]), StateSet::from([0, 1])].into();
        assert_eq!(sets, expect);
    }

    #[test]
    fn realizable_sets_agree_with_enumeration() {
        let core = swapper();
        let seen: BTreeSet<StateSet> = enumerate_trees(core.alphabet(), 9)
            .iter()
            .map(|t| core.frontier_set(t).unwrap())
            .collect();
        assert_eq!(seen, core.realizable_frontier_sets().unwrap());
    }

    #[test]
    fn frontier_check_reads_left_to_right() {
        let core = swapper();
        // accepts words that start with `p` and end with `r`
        let mut b = Nfa::new(2);
        let s = b.add_state("s");
        let mid = b.add_state("mid");
        let end = b.add_state("end");
        b.set_initial(s);
        b.add_transition(s, 0, mid);
        b.add_transition(mid, 0, mid);
        b.add_transition(mid, 1, end);
        b.add_transition(end, 1, end);
        b.add_transition(end, 0, mid);
        b.set_accepting(end, true);
        let fc = FrontierCheckDtda::new(core.clone(), b).unwrap();
        let al = core.alphabet().clone();
        assert!(fc.accepts(&Tree::parse("f(a,b)", &al).unwrap()).unwrap());
        assert!(!fc.accepts(&Tree::parse("a", &al).unwrap()).unwrap());
        assert!(FrontierCheckDtda::new(core, Nfa::new(3)).is_err());
    }

    #[test]
    fn construction_validates_totality() {
        let al = fab();
        let names = vec!["q".to_string()];
        assert!(DtdaCore::new(&al, names.clone(), 0, vec![vec![vec![0, 0], vec![0]]]).is_err());
        assert!(DtdaCore::new(
            &al,
            names.clone(),
            1,
            vec![vec![vec![0, 0], vec![0], vec![0]]]
        )
        .is_err());
        assert!(DtdaCore::new(&al, names, 0, vec![vec![vec![0], vec![0], vec![0]]]).is_err());
    }

    #[test]
    fn mismatched_tree_is_rejected() {
        let core = swapper();
        let other = RankedAlphabet::new([("g", 1), ("a", 0)]).unwrap();
        let t = Tree::parse("g(a)", &other).unwrap();
        assert!(matches!(core.run(&t), Err(Error::AlphabetMismatch(_))));
    }
}
