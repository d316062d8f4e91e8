//! Bottom-up (frontier-to-root) tree automata.
//!
//! [`BottomUpTa`] holds a possibly nondeterministic rule set
//! `a(q1, ..., qi) -> q`. Decision procedures (emptiness, equivalence,
//! minimization) work on the deterministic complete form; nondeterministic
//! inputs are determinized on the way in.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};
use crate::explore::{explore, Explored};
use crate::tree::Tree;

/// Default cap on the number of states a construction may materialize.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottomUpTa {
    alphabet: RankedAlphabet,
    names: Vec<String>,
    /// Per symbol: argument states to the sorted set of target states.
    rules: Vec<BTreeMap<Vec<usize>, Vec<usize>>>,
    accepting: Vec<bool>,
}

impl BottomUpTa {
    pub fn new(alphabet: &RankedAlphabet) -> Self {
        BottomUpTa {
            alphabet: alphabet.clone(),
            names: Vec::new(),
            rules: vec![BTreeMap::new(); alphabet.len()],
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.accepting.push(false);
        self.names.len() - 1
    }

    pub fn add_rule(&mut self, symbol: Symbol, args: Vec<usize>, target: usize) -> Result<()> {
        let rank = self.alphabet.rank(symbol);
        if args.len() != rank {
            return Err(Error::ArityMismatch {
                symbol: self.alphabet.name(symbol).to_string(),
                expected: rank,
                found: args.len(),
                pos: 0,
            });
        }
        let n = self.num_states();
        if target >= n || args.iter().any(|&q| q >= n) {
            return Err(Error::Precondition(format!(
                "rule for `{}` uses an undeclared state",
                self.alphabet.name(symbol)
            )));
        }
        let targets = self.rules[symbol.0].entry(args).or_default();
        if let Err(i) = targets.binary_search(&target) {
            targets.insert(i, target);
        }
        Ok(())
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
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

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    /// Rules for one symbol, keyed by argument states.
    pub fn rules(&self, symbol: Symbol) -> &BTreeMap<Vec<usize>, Vec<usize>> {
        &self.rules[symbol.0]
    }

    pub fn is_deterministic_complete(&self) -> bool {
        let n = self.num_states();
        self.alphabet.symbols().all(|s| {
            let rules = &self.rules[s.0];
            let expected = (0..self.alphabet.rank(s)).try_fold(1usize, |acc, _| acc.checked_mul(n));
            Some(rules.len()) == expected && rules.values().all(|t| t.len() == 1)
        })
    }

    fn check_tree(&self, t: &Tree) -> Result<()> {
        if t.is_consistent(&self.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(
                "tree is not rank-consistent over the automaton's alphabet".into(),
            ))
        }
    }

    /// Deterministic transition; `None` if no rule applies.
    pub fn step(&self, symbol: Symbol, args: &[usize]) -> Option<usize> {
        self.rules[symbol.0].get(args).map(|t| t[0])
    }

    fn run_det(&self, t: &Tree) -> usize {
        let args: Vec<usize> = t.children().iter().map(|c| self.run_det(c)).collect();
        self.rules[t.label().0][&args][0]
    }

    /// The state `δ(t)` of a deterministic complete automaton.
    pub fn run(&self, t: &Tree) -> Result<usize> {
        if !self.is_deterministic_complete() {
            return Err(Error::Precondition(
                "running needs a deterministic complete automaton".into(),
            ));
        }
        self.check_tree(t)?;
        Ok(self.run_det(t))
    }

    /// All states some run can assign to the root of `t`.
    pub fn states_of(&self, t: &Tree) -> BTreeSet<usize> {
        let child_sets: Vec<BTreeSet<usize>> =
            t.children().iter().map(|c| self.states_of(c)).collect();
        let rules = &self.rules[t.label().0];
        if child_sets.iter().all(|s| s.len() == 1) {
            let args: Vec<usize> = child_sets
                .iter()
                .map(|s| *s.iter().next().unwrap())
                .collect();
            return rules
                .get(&args)
                .map(|ts| ts.iter().copied().collect())
                .unwrap_or_default();
        }
        let mut out = BTreeSet::new();
        for (args, targets) in rules {
            if args.iter().zip(&child_sets).all(|(q, s)| s.contains(q)) {
                out.extend(targets.iter().copied());
            }
        }
        out
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        self.check_tree(t)?;
        Ok(self.states_of(t).iter().any(|&q| self.accepting[q]))
    }

    /// Builds an automaton from an exploration; state names are `q0, q1, ...`.
    pub(crate) fn from_explored<S>(
        alphabet: &RankedAlphabet,
        explored: &Explored<S>,
        accept: impl Fn(&S) -> bool,
    ) -> Self {
        let mut out = BottomUpTa::new(alphabet);
        for (i, s) in explored.states.iter().enumerate() {
            out.add_state(format!("q{i}"));
            out.accepting[i] = accept(s);
        }
        for (sym, table) in explored.transitions.iter().enumerate() {
            for (args, &target) in table {
                out.rules[sym].insert(args.clone(), vec![target]);
            }
        }
        out
    }

    /// Subset construction: states are the reachable sets of original
    /// states; the empty set, when reachable, is the sink.
    pub fn determinize(&self) -> Result<BottomUpTa> {
        self.determinize_with_cap(DEFAULT_STATE_CAP)
    }

    pub fn determinize_with_cap(&self, cap: usize) -> Result<BottomUpTa> {
        let explored = explore(
            &self.alphabet,
            cap,
            |c| {
                self.rules[c.0]
                    .get(&Vec::new())
                    .cloned()
                    .unwrap_or_default()
            },
            |a, args: &[&Vec<usize>]| {
                let mut out = BTreeSet::new();
                for (rule_args, targets) in &self.rules[a.0] {
                    if rule_args
                        .iter()
                        .zip(args)
                        .all(|(q, set)| set.binary_search(q).is_ok())
                    {
                        out.extend(targets.iter().copied());
                    }
                }
                out.into_iter().collect::<Vec<usize>>()
            },
        )?;
        Ok(Self::from_explored(&self.alphabet, &explored, |set| {
            set.iter().any(|&q| self.accepting[q])
        }))
    }

    /// `self` if already deterministic and complete, else its determinization.
    pub fn to_deterministic(&self) -> Result<BottomUpTa> {
        if self.is_deterministic_complete() {
            Ok(self.clone())
        } else {
            self.determinize()
        }
    }

    /// Reachable product of the deterministic forms of `self` and `other`.
    pub fn product(
        &self,
        other: &BottomUpTa,
        accept: impl Fn(bool, bool) -> bool,
    ) -> Result<BottomUpTa> {
        self.alphabet
            .ensure_same(&other.alphabet, "bottom-up product")?;
        let a = self.to_deterministic()?;
        let b = other.to_deterministic()?;
        let explored = explore(
            &self.alphabet,
            DEFAULT_STATE_CAP,
            |c| (a.rules[c.0][&Vec::new()][0], b.rules[c.0][&Vec::new()][0]),
            |s, args: &[&(usize, usize)]| {
                let left: Vec<usize> = args.iter().map(|p| p.0).collect();
                let right: Vec<usize> = args.iter().map(|p| p.1).collect();
                (a.rules[s.0][&left][0], b.rules[s.0][&right][0])
            },
        )?;
        Ok(Self::from_explored(&self.alphabet, &explored, |&(p, q)| {
            accept(a.accepting[p], b.accepting[q])
        }))
    }

    pub fn union(&self, other: &BottomUpTa) -> Result<BottomUpTa> {
        self.product(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &BottomUpTa) -> Result<BottomUpTa> {
        self.product(other, |x, y| x && y)
    }

    pub fn symmetric_difference(&self, other: &BottomUpTa) -> Result<BottomUpTa> {
        self.product(other, |x, y| x != y)
    }

    pub fn complement(&self) -> Result<BottomUpTa> {
        let mut d = self.to_deterministic()?;
        for a in &mut d.accepting {
            *a = !*a;
        }
        Ok(d)
    }

    /// For each state, a tree of minimal height reaching it (if any).
    fn min_height_trees(&self) -> Vec<Option<Tree>> {
        let n = self.num_states();
        let mut known: Vec<Option<Tree>> = vec![None; n];
        for c in self.alphabet.constants() {
            if let Some(targets) = self.rules[c.0].get(&Vec::new()) {
                for &q in targets {
                    if known[q].is_none() {
                        known[q] = Some(Tree::new_unchecked(c, Vec::new()));
                    }
                }
            }
        }
        loop {
            let snapshot = known.clone();
            let mut changed = false;
            for s in self
                .alphabet
                .symbols()
                .filter(|&s| self.alphabet.rank(s) > 0)
            {
                for (args, targets) in &self.rules[s.0] {
                    if targets.iter().all(|&q| known[q].is_some()) {
                        continue;
                    }
                    let children: Option<Vec<Tree>> =
                        args.iter().map(|&q| snapshot[q].clone()).collect();
                    if let Some(children) = children {
                        let t = Tree::new_unchecked(s, children);
                        for &q in targets {
                            if known[q].is_none() {
                                known[q] = Some(t.clone());
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return known;
            }
        }
    }

    /// States with a nonempty language (reachable by some tree).
    pub fn productive_states(&self) -> Vec<bool> {
        let mut live = vec![false; self.num_states()];
        loop {
            let mut changed = false;
            for s in self.alphabet.symbols() {
                for (args, targets) in &self.rules[s.0] {
                    if args.iter().all(|&q| live[q]) {
                        for &q in targets {
                            if !live[q] {
                                live[q] = true;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                return live;
            }
        }
    }

    /// An accepted tree of minimal height, or `None` if the language is empty.
    pub fn witness(&self) -> Option<Tree> {
        let known = self.min_height_trees();
        self.accepting_states()
            .filter_map(|q| known[q].clone())
            .min_by_key(|t| (t.height(), t.size(), t.preorder()))
    }

    pub fn is_empty(&self) -> bool {
        self.productive_states()
            .iter()
            .zip(&self.accepting)
            .all(|(&live, &acc)| !(live && acc))
    }

    /// For each state, the smallest tree reaching it, ordered by node count
    /// and then by preorder labels (the enumeration order of
    /// [`crate::enumerate_trees`]).
    pub fn smallest_trees(&self) -> Vec<Option<Tree>> {
        type Key = (usize, Vec<Symbol>);
        let n = self.num_states();
        let mut best: Vec<Option<(Key, Tree)>> = vec![None; n];
        loop {
            let mut changed = false;
            for s in self.alphabet.symbols() {
                for (args, targets) in &self.rules[s.0] {
                    let Some(children) = args
                        .iter()
                        .map(|&q| best[q].as_ref().map(|(k, t)| (k, t)))
                        .collect::<Option<Vec<_>>>()
                    else {
                        continue;
                    };
                    let size = 1 + children.iter().map(|(k, _)| k.0).sum::<usize>();
                    if targets
                        .iter()
                        .all(|&q| matches!(&best[q], Some((k, _)) if k.0 < size))
                    {
                        continue;
                    }
                    let mut pre = vec![s];
                    for (k, _) in &children {
                        pre.extend_from_slice(&k.1);
                    }
                    let key = (size, pre);
                    let tree = Tree::new_unchecked(
                        s,
                        children.iter().map(|(_, t)| (*t).clone()).collect(),
                    );
                    for &q in targets {
                        if best[q].as_ref().is_none_or(|(k, _)| key < *k) {
                            best[q] = Some((key.clone(), tree.clone()));
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return best.into_iter().map(|b| b.map(|(_, t)| t)).collect();
            }
        }
    }

    /// The smallest accepted tree in enumeration order.
    pub fn smallest_accepted(&self) -> Option<Tree> {
        let best = self.smallest_trees();
        self.accepting_states()
            .filter_map(|q| best[q].clone())
            .min_by_key(|t| (t.size(), t.preorder()))
    }

    /// `None` if both recognize the same language, else the smallest tree
    /// (node count, then enumeration order) in exactly one of them.
    pub fn separating_tree(&self, other: &BottomUpTa) -> Result<Option<Tree>> {
        Ok(self.symmetric_difference(other)?.smallest_accepted())
    }

    pub fn equivalent(&self, other: &BottomUpTa) -> Result<bool> {
        Ok(self.separating_tree(other)?.is_none())
    }

    /// Minimal deterministic complete automaton. Unreachable states are
    /// dropped; states of the result are the congruence classes, ordered by
    /// their smallest original state index.
    pub fn minimize(&self) -> Result<BottomUpTa> {
        if !self.is_deterministic_complete() {
            return Err(Error::Precondition(
                "minimization needs a deterministic complete automaton".into(),
            ));
        }
        let live: Vec<usize> = self
            .productive_states()
            .iter()
            .enumerate()
            .filter_map(|(q, &l)| l.then_some(q))
            .collect();
        // one context per (symbol, hole position, states in the other positions)
        let mut contexts: Vec<(Symbol, usize, Vec<usize>)> = Vec::new();
        for s in self.alphabet.symbols() {
            let rank = self.alphabet.rank(s);
            for hole in 0..rank {
                for others in all_tuples(&live, rank - 1) {
                    contexts.push((s, hole, others));
                }
            }
        }
        let mut block = vec![usize::MAX; self.num_states()];
        let mut count = renumber(&live, &mut block, |q| self.accepting[q]);
        loop {
            let prev = block.clone();
            let new_count = renumber(&live, &mut block, |q| {
                let sig: Vec<usize> = contexts
                    .iter()
                    .map(|(s, hole, others)| {
                        let mut args = others.clone();
                        args.insert(*hole, q);
                        prev[self.rules[s.0][&args][0]]
                    })
                    .collect();
                (prev[q], sig)
            });
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut out = BottomUpTa::new(&self.alphabet);
        let mut rep = vec![usize::MAX; count];
        for &q in &live {
            if rep[block[q]] == usize::MAX {
                rep[block[q]] = q;
                let b = out.add_state(format!("m{}", block[q]));
                out.accepting[b] = self.accepting[q];
            }
        }
        for s in self.alphabet.symbols() {
            for (args, targets) in &self.rules[s.0] {
                if args
                    .iter()
                    .all(|&q| block[q] != usize::MAX && rep[block[q]] == q)
                {
                    let margs: Vec<usize> = args.iter().map(|&q| block[q]).collect();
                    out.rules[s.0].insert(margs, vec![block[targets[0]]]);
                }
            }
        }
        Ok(out)
    }

    /// Deterministic automaton whose language is exactly the given finite
    /// set of trees. States are the distinct subtrees plus a sink.
    pub fn from_trees(alphabet: &RankedAlphabet, trees: &[Tree]) -> Result<BottomUpTa> {
        let mut subterms: HashMap<Tree, usize> = HashMap::new();
        for t in trees {
            if !t.is_consistent(alphabet) {
                return Err(Error::AlphabetMismatch(
                    "tree is not rank-consistent over the given alphabet".into(),
                ));
            }
            collect_subterms(t, &mut subterms);
        }
        // subterm lookup by (label, child subterm ids)
        let mut by_shape: HashMap<(Symbol, Vec<usize>), usize> = HashMap::new();
        let mut shapes: Vec<(&Tree, usize)> = subterms.iter().map(|(t, &i)| (t, i)).collect();
        shapes.sort_by_key(|&(_, i)| i);
        for (t, i) in shapes {
            let kids = t.children().iter().map(|c| subterms[c]).collect();
            by_shape.insert((t.label(), kids), i);
        }
        let explored = explore(
            alphabet,
            DEFAULT_STATE_CAP,
            |c| by_shape.get(&(c, Vec::new())).copied(),
            |a, args: &[&Option<usize>]| {
                let kids: Option<Vec<usize>> = args.iter().map(|x| **x).collect();
                kids.and_then(|k| by_shape.get(&(a, k)).copied())
            },
        )?;
        let wanted: BTreeSet<usize> = trees.iter().map(|t| subterms[t]).collect();
        let mut out = Self::from_explored(alphabet, &explored, |s| {
            s.is_some_and(|i| wanted.contains(&i))
        });
        let mut id_names: Vec<String> = vec![String::new(); subterms.len()];
        for (t, &i) in &subterms {
            id_names[i] = format!("s{i}_{}", alphabet.name(t.label()));
        }
        for (q, s) in explored.states.iter().enumerate() {
            out.names[q] = match s {
                Some(i) => id_names[*i].clone(),
                None => "sink".to_string(),
            };
        }
        Ok(out)
    }

    /// Renames states; `names` must have one distinct entry per state.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }
}

fn collect_subterms(t: &Tree, map: &mut HashMap<Tree, usize>) {
    for c in t.children() {
        collect_subterms(c, map);
    }
    if !map.contains_key(t) {
        let n = map.len();
        map.insert(t.clone(), n);
    }
}

fn all_tuples(values: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn renumber<K: Hash + Eq>(
    states: &[usize],
    block: &mut [usize],
    key: impl Fn(usize) -> K,
) -> usize {
    let keys: Vec<K> = states.iter().map(|&q| key(q)).collect();
    let mut ids: HashMap<K, usize> = HashMap::new();
    for (&q, k) in states.iter().zip(keys) {
        let n = ids.len();
        block[q] = *ids.entry(k).or_insert(n);
    }
    ids.len()
}
