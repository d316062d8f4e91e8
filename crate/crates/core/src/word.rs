//! Finite automata on words.
//!
//! [`Nfa`] works over letters `0..letters` and carries the standard
//! algorithms (subset construction, products, partition-refinement
//! minimization, shortest separating words). [`PathAutomaton`] fixes the
//! letters to the path alphabet of a ranked alphabet and is how regular sets
//! of labeled paths are represented throughout the crate.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::alphabet::{RankedAlphabet, Token};
use crate::error::{Error, Result};
use crate::tree::{PathWord, Tree};

/// A nondeterministic finite automaton over letters `0..letters`.
///
/// Deterministic automata are the special case with a single initial state
/// and at most one successor per letter; [`Nfa::is_deterministic_complete`]
/// tells whether the transition function is also total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    letters: usize,
    names: Vec<String>,
    initial: BTreeSet<usize>,
    delta: Vec<Vec<Vec<usize>>>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub fn new(letters: usize) -> Self {
        Nfa {
            letters,
            names: Vec::new(),
            initial: BTreeSet::new(),
            delta: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.delta.push(vec![Vec::new(); self.letters]);
        self.accepting.push(false);
        self.names.len() - 1
    }

    pub fn add_transition(&mut self, from: usize, letter: usize, to: usize) {
        let succ = &mut self.delta[from][letter];
        if let Err(i) = succ.binary_search(&to) {
            succ.insert(i, to);
        }
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn letters(&self) -> usize {
        self.letters
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

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn successors(&self, q: usize, letter: usize) -> &[usize] {
        &self.delta[q][letter]
    }

    pub fn is_deterministic_complete(&self) -> bool {
        self.initial.len() == 1
            && self
                .delta
                .iter()
                .all(|row| row.iter().all(|succ| succ.len() == 1))
    }

    /// Successor of a deterministic complete automaton.
    fn step(&self, q: usize, letter: usize) -> usize {
        self.delta[q][letter][0]
    }

    fn start(&self) -> usize {
        *self
            .initial
            .iter()
            .next()
            .expect("deterministic automaton has an initial state")
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut current: BTreeSet<usize> = self.initial.clone();
        for &l in word {
            if l >= self.letters {
                return false;
            }
            current = current
                .iter()
                .flat_map(|&q| self.delta[q][l].iter().copied())
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q])
    }

    /// Subset construction over reachable subsets. The empty subset, when
    /// reachable, is the sink that makes the result complete.
    pub fn determinize(&self) -> Nfa {
        let mut out = Nfa::new(self.letters);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = self.initial.clone();
        let s = out.add_state("d0");
        out.set_initial(s);
        out.set_accepting(s, start.iter().any(|&q| self.accepting[q]));
        index.insert(start.clone(), s);
        queue.push_back(start);
        while let Some(set) = queue.pop_front() {
            let from = index[&set];
            for l in 0..self.letters {
                let next: BTreeSet<usize> = set
                    .iter()
                    .flat_map(|&q| self.delta[q][l].iter().copied())
                    .collect();
                let to = match index.get(&next) {
                    Some(&to) => to,
                    None => {
                        let to = out.add_state(format!("d{}", out.num_states()));
                        out.set_accepting(to, next.iter().any(|&q| self.accepting[q]));
                        index.insert(next.clone(), to);
                        queue.push_back(next);
                        to
                    }
                };
                out.add_transition(from, l, to);
            }
        }
        out
    }

    /// `self` if already deterministic and complete, otherwise its
    /// determinization.
    pub fn to_dfa(&self) -> Nfa {
        if self.is_deterministic_complete() {
            self.clone()
        } else {
            self.determinize()
        }
    }

    pub fn complement(&self) -> Nfa {
        let mut d = self.to_dfa();
        for a in &mut d.accepting {
            *a = !*a;
        }
        d
    }

    /// Reachable product of the two determinizations; a pair accepts iff
    /// `accept(left, right)`.
    pub fn product(&self, other: &Nfa, accept: impl Fn(bool, bool) -> bool) -> Result<Nfa> {
        if self.letters != other.letters {
            return Err(Error::AlphabetMismatch(format!(
                "{} vs {} letters",
                self.letters, other.letters
            )));
        }
        let a = self.to_dfa();
        let b = other.to_dfa();
        let mut out = Nfa::new(self.letters);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = (a.start(), b.start());
        let s = out.add_state("p0");
        out.set_initial(s);
        out.set_accepting(s, accept(a.accepting[start.0], b.accepting[start.1]));
        index.insert(start, s);
        queue.push_back(start);
        while let Some((p, q)) = queue.pop_front() {
            let from = index[&(p, q)];
            for l in 0..self.letters {
                let next = (a.step(p, l), b.step(q, l));
                let to = *index.entry(next).or_insert_with(|| {
                    let to = out.add_state(format!("p{}", out.names.len()));
                    out.accepting[to] = accept(a.accepting[next.0], b.accepting[next.1]);
                    queue.push_back(next);
                    to
                });
                out.add_transition(from, l, to);
            }
        }
        Ok(out)
    }

    pub fn union(&self, other: &Nfa) -> Result<Nfa> {
        self.product(other, |x, y| x || y)
    }

    pub fn intersection(&self, other: &Nfa) -> Result<Nfa> {
        self.product(other, |x, y| x && y)
    }

    /// Shortest accepted word, ties broken lexicographically by letter index.
    pub fn shortest_word(&self) -> Option<Vec<usize>> {
        let d = self.to_dfa();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; d.num_states()];
        let mut seen = vec![false; d.num_states()];
        let mut queue = VecDeque::new();
        let s = d.start();
        seen[s] = true;
        queue.push_back(s);
        while let Some(q) = queue.pop_front() {
            if d.accepting[q] {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some((prev, l)) = parent[cur] {
                    word.push(l);
                    cur = prev;
                }
                word.reverse();
                return Some(word);
            }
            for l in 0..d.letters {
                let n = d.step(q, l);
                if !seen[n] {
                    seen[n] = true;
                    parent[n] = Some((q, l));
                    queue.push_back(n);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    /// `None` if both automata accept the same language, otherwise a shortest
    /// word accepted by exactly one of them.
    pub fn separating_word(&self, other: &Nfa) -> Result<Option<Vec<usize>>> {
        Ok(self.product(other, |x, y| x != y)?.shortest_word())
    }

    pub fn equivalent(&self, other: &Nfa) -> Result<bool> {
        Ok(self.separating_word(other)?.is_none())
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.initial.iter().copied().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for succ in &self.delta[q] {
                for &n in succ {
                    if !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
        (0..self.num_states()).filter(|&q| seen[q]).collect()
    }

    /// Minimal complete DFA by partition refinement. Unreachable states are
    /// dropped; result states are the blocks, ordered by their smallest
    /// original state index.
    pub fn minimize(&self) -> Result<Nfa> {
        if !self.is_deterministic_complete() {
            return Err(Error::Precondition(
                "minimization needs a deterministic complete automaton".into(),
            ));
        }
        let live = self.reachable();
        let mut block = vec![usize::MAX; self.num_states()];
        // initial split by acceptance, numbered by first appearance
        let mut count = renumber(&live, &mut block, |q| self.accepting[q] as usize);
        loop {
            let prev = block.clone();
            let new_count = renumber(&live, &mut block, |q| {
                let sig: Vec<usize> = (0..self.letters).map(|l| prev[self.step(q, l)]).collect();
                (prev[q], sig)
            });
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let mut out = Nfa::new(self.letters);
        let mut rep = vec![usize::MAX; count];
        for &q in &live {
            if rep[block[q]] == usize::MAX {
                rep[block[q]] = q;
                out.add_state(format!("m{}", block[q]));
                out.set_accepting(block[q], self.accepting[q]);
            }
        }
        for (b, &q) in rep.iter().enumerate() {
            for l in 0..self.letters {
                out.add_transition(b, l, block[self.step(q, l)]);
            }
        }
        out.set_initial(block[self.start()]);
        Ok(out)
    }

    /// Renames states; `names` must have one distinct entry per state.
    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.names.len());
        self.names = names;
        self
    }
}

/// Assigns block numbers to `states` by first appearance of their key.
fn renumber<K: std::hash::Hash + Eq>(
    states: &[usize],
    block: &mut [usize],
    key: impl Fn(usize) -> K,
) -> usize {
    let mut ids: HashMap<K, usize> = HashMap::new();
    let keys: Vec<K> = states.iter().map(|&q| key(q)).collect();
    for (&q, k) in states.iter().zip(keys) {
        let n = ids.len();
        block[q] = *ids.entry(k).or_insert(n);
    }
    ids.len()
}

/// A finite automaton over the path alphabet of a ranked alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathAutomaton {
    alphabet: RankedAlphabet,
    nfa: Nfa,
}

impl PathAutomaton {
    /// Wraps an automaton whose letters are path-alphabet indices.
    pub fn from_nfa(alphabet: RankedAlphabet, nfa: Nfa) -> Result<Self> {
        if nfa.letters() != alphabet.gamma_len() {
            return Err(Error::AlphabetMismatch(format!(
                "automaton has {} letters, path alphabet has {}",
                nfa.letters(),
                alphabet.gamma_len()
            )));
        }
        Ok(PathAutomaton { alphabet, nfa })
    }

    /// The empty path language.
    pub fn empty(alphabet: &RankedAlphabet) -> Self {
        let mut nfa = Nfa::new(alphabet.gamma_len());
        let q = nfa.add_state("q0");
        nfa.set_initial(q);
        PathAutomaton {
            alphabet: alphabet.clone(),
            nfa,
        }
    }

    /// A trie-shaped automaton accepting exactly the given words.
    pub fn from_words<'a>(
        alphabet: &RankedAlphabet,
        words: impl IntoIterator<Item = &'a [Token]>,
    ) -> Self {
        let mut nfa = Nfa::new(alphabet.gamma_len());
        let root = nfa.add_state("q0");
        nfa.set_initial(root);
        let mut children: HashMap<(usize, usize), usize> = HashMap::new();
        for word in words {
            let mut q = root;
            for &tok in word {
                let l = alphabet.token_index(tok);
                q = *children.entry((q, l)).or_insert_with(|| {
                    let n = nfa.add_state(format!("q{}", nfa.num_states()));
                    nfa.add_transition(q, l, n);
                    n
                });
            }
            nfa.set_accepting(q, true);
        }
        PathAutomaton {
            alphabet: alphabet.clone(),
            nfa,
        }
    }

    pub fn from_path_words<'a>(
        alphabet: &RankedAlphabet,
        words: impl IntoIterator<Item = &'a PathWord>,
    ) -> Self {
        Self::from_words(alphabet, words.into_iter().map(|w| w.0.as_slice()))
    }

    /// Deterministic automaton for the set of all labeled paths.
    pub fn all_paths(alphabet: &RankedAlphabet) -> Self {
        let r = alphabet.max_rank();
        let mut nfa = Nfa::new(alphabet.gamma_len());
        // state 0: expect a symbol; 1..=r: read a symbol of that rank and
        // expect a direction; r+1: read a constant; r+2: dead.
        let expect_sym = nfa.add_state("sym");
        for k in 1..=r {
            nfa.add_state(format!("rank{k}"));
        }
        let done = nfa.add_state("leaf");
        let dead = nfa.add_state("dead");
        nfa.set_initial(expect_sym);
        nfa.set_accepting(done, true);
        for tok in alphabet.gamma() {
            let l = alphabet.token_index(tok);
            for q in 0..nfa.num_states() {
                let to = match (q, tok) {
                    (0, Token::Sym(s)) => match alphabet.rank(s) {
                        0 => done,
                        k => k,
                    },
                    (k, Token::Dir(d)) if (1..=r).contains(&k) && d <= k => expect_sym,
                    _ => dead,
                };
                nfa.add_transition(q, l, to);
            }
        }
        PathAutomaton {
            alphabet: alphabet.clone(),
            nfa,
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn nfa(&self) -> &Nfa {
        &self.nfa
    }

    pub fn is_deterministic_complete(&self) -> bool {
        self.nfa.is_deterministic_complete()
    }

    pub fn accepts(&self, word: &[Token]) -> bool {
        let letters: Vec<usize> = word.iter().map(|&t| self.alphabet.token_index(t)).collect();
        self.nfa.accepts(&letters)
    }

    pub fn accepts_path(&self, word: &PathWord) -> bool {
        self.accepts(&word.0)
    }

    /// `t ∈ tfp(L)`: every labeled path of `t` is accepted.
    pub fn accepts_all_paths_of(&self, t: &Tree) -> bool {
        t.paths().iter().all(|p| self.accepts_path(p))
    }

    fn wrap(&self, nfa: Nfa) -> PathAutomaton {
        PathAutomaton {
            alphabet: self.alphabet.clone(),
            nfa,
        }
    }

    fn check(&self, other: &PathAutomaton) -> Result<()> {
        self.alphabet.ensure_same(&other.alphabet, "path automata")
    }

    pub fn determinize_complete(&self) -> PathAutomaton {
        self.wrap(self.nfa.determinize())
    }

    pub fn to_dfa(&self) -> PathAutomaton {
        self.wrap(self.nfa.to_dfa())
    }

    pub fn union(&self, other: &PathAutomaton) -> Result<PathAutomaton> {
        self.check(other)?;
        Ok(self.wrap(self.nfa.union(&other.nfa)?))
    }

    pub fn intersection(&self, other: &PathAutomaton) -> Result<PathAutomaton> {
        self.check(other)?;
        Ok(self.wrap(self.nfa.intersection(&other.nfa)?))
    }

    pub fn complement(&self) -> PathAutomaton {
        self.wrap(self.nfa.complement())
    }

    pub fn minimize(&self) -> Result<PathAutomaton> {
        Ok(self.wrap(self.nfa.minimize()?))
    }

    /// `None` when the languages agree, otherwise a shortest separating word
    /// (ties broken by the fixed path-alphabet order).
    pub fn separating_word(&self, other: &PathAutomaton) -> Result<Option<Vec<Token>>> {
        self.check(other)?;
        Ok(self
            .nfa
            .separating_word(&other.nfa)?
            .map(|w| w.into_iter().map(|l| self.alphabet.token_at(l)).collect()))
    }

    pub fn equivalent(&self, other: &PathAutomaton) -> Result<bool> {
        Ok(self.separating_word(other)?.is_none())
    }

    pub fn is_empty(&self) -> bool {
        self.nfa.is_empty()
    }

    /// All accepted words of length at most `max_len`, in length-lexicographic
    /// order. Exponential; meant for small reports and tests.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<Token>> {
        let mut out = Vec::new();
        let mut layer: Vec<(Vec<Token>, BTreeSet<usize>)> =
            vec![(Vec::new(), self.nfa.initial().clone())];
        for len in 0..=max_len {
            for (w, set) in &layer {
                if set.iter().any(|&q| self.nfa.is_accepting(q)) {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &layer {
                for l in 0..self.nfa.letters() {
                    let s: BTreeSet<usize> = set
                        .iter()
                        .flat_map(|&q| self.nfa.successors(q, l).iter().copied())
                        .collect();
                    if !s.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(self.alphabet.token_at(l));
                        next.push((w2, s));
                    }
                }
            }
            layer = next;
        }
        out
    }

    pub fn word_to_string(&self, word: &[Token]) -> String {
        word.iter()
            .map(|&t| self.alphabet.token_name(t))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fab() -> RankedAlphabet {
        RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap()
    }

    fn abcd() -> RankedAlphabet {
        RankedAlphabet::new([("a", 2), ("b", 2), ("c", 0), ("d", 0)]).unwrap()
    }

    fn words(al: &RankedAlphabet, ws: &[&str]) -> PathAutomaton {
        let parsed: Vec<PathWord> = ws.iter().map(|w| PathWord::parse(w, al).unwrap()).collect();
        PathAutomaton::from_path_words(al, &parsed)
    }

    fn tok(al: &RankedAlphabet, w: &str) -> Vec<Token> {
        PathWord::parse(w, al).unwrap().0
    }

    #[test]
    fn determinize_trie_for_t0_paths() {
        let al = fab();
        let a = words(&al, &["f1a", "f2b"]);
        assert_eq!(a.nfa().num_states(), 6);
        let d = a.determinize_complete();
        assert!(d.is_deterministic_complete());
        // six singleton subsets plus the empty sink
        assert_eq!(d.nfa().num_states(), 7);
        assert!(d.equivalent(&a).unwrap());
    }

    #[test]
    fn determinize_is_idempotent_up_to_renaming() {
        let al = fab();
        let d = words(&al, &["f1a", "f2b"]).determinize_complete();
        let dd = d.determinize_complete();
        assert_eq!(d.nfa().num_states(), dd.nfa().num_states());
        assert!(dd.equivalent(&d).unwrap());
    }

    #[test]
    fn no_accepting_state_gives_empty_dfa() {
        let al = fab();
        let mut nfa = Nfa::new(al.gamma_len());
        let q = nfa.add_state("q");
        nfa.set_initial(q);
        nfa.add_transition(q, 0, q);
        let a = PathAutomaton::from_nfa(al, nfa).unwrap();
        let d = a.determinize_complete();
        assert!(d.is_empty());
        assert_eq!(d.minimize().unwrap().nfa().num_states(), 1);
    }

    #[test]
    fn boolean_operations() {
        let al = abcd();
        let x = words(&al, &["a1b1c", "a2c"]);
        let y = words(&al, &["a2c", "a2d"]);
        let both = x.intersection(&y).unwrap();
        assert!(both.equivalent(&words(&al, &["a2c"])).unwrap());
        let either = x.union(&y).unwrap();
        assert!(either
            .equivalent(&words(&al, &["a1b1c", "a2c", "a2d"]))
            .unwrap());
        assert!(x.complement().complement().equivalent(&x).unwrap());
        let e = PathAutomaton::empty(&al);
        assert!(x.union(&e).unwrap().equivalent(&x).unwrap());
    }

    #[test]
    fn separating_word_is_shortest() {
        let al = fab();
        let one = words(&al, &["f1a"]);
        let two = words(&al, &["f1a", "f2b"]);
        assert_eq!(one.separating_word(&one).unwrap(), None);
        assert_eq!(one.separating_word(&two).unwrap(), Some(tok(&al, "f2b")));
    }

    #[test]
    fn separating_word_ties_broken_by_gamma_order() {
        let al = fab();
        let x = words(&al, &["f1b", "f2a"]);
        let e = PathAutomaton::empty(&al);
        // f 1 a < f 1 b < f 2 a; "f1b" is the lexicographically first member
        assert_eq!(x.separating_word(&e).unwrap(), Some(tok(&al, "f1b")));
    }

    #[test]
    fn minimize_merges_bisimilar_accepting_states() {
        // two accepting states reached on `a` and `b`, both with self-loops
        // only into the sink: they merge
        let al = fab();
        let mut nfa = Nfa::new(al.gamma_len());
        let s = nfa.add_state("s");
        let x = nfa.add_state("x");
        let y = nfa.add_state("y");
        let sink = nfa.add_state("sink");
        nfa.set_initial(s);
        nfa.set_accepting(x, true);
        nfa.set_accepting(y, true);
        for l in 0..al.gamma_len() {
            let to = match l {
                1 => x,
                2 => y,
                _ => sink,
            };
            nfa.add_transition(s, l, to);
            nfa.add_transition(x, l, sink);
            nfa.add_transition(y, l, sink);
            nfa.add_transition(sink, l, sink);
        }
        let m = nfa.minimize().unwrap();
        assert_eq!(m.num_states(), 3);
        assert!(m.equivalent(&nfa).unwrap());
        let mm = m.minimize().unwrap();
        assert_eq!(mm, m);
    }

    #[test]
    fn minimize_rejects_nfa() {
        let al = fab();
        let a = words(&al, &["f1a"]);
        assert!(matches!(a.minimize(), Err(Error::Precondition(_))));
    }

    #[test]
    fn alphabet_mismatch_is_reported() {
        let x = PathAutomaton::empty(&fab());
        let y = PathAutomaton::empty(&abcd());
        assert!(matches!(x.union(&y), Err(Error::AlphabetMismatch(_))));
        assert!(matches!(
            x.separating_word(&y),
            Err(Error::AlphabetMismatch(_))
        ));
    }

    #[test]
    fn all_paths_accepts_exactly_labeled_paths() {
        let al = abcd();
        let all = PathAutomaton::all_paths(&al);
        assert!(all.is_deterministic_complete());
        for w in all.words_up_to(5) {
            assert!(PathWord(w).is_valid(&al));
        }
        assert!(all.accepts(&tok(&al, "a1b2d")));
        assert!(!all.accepts(&[Token::Sym(crate::Symbol(0))]));
        assert_eq!(all.words_up_to(3).len(), 2 + 2 * 2 * 2);
    }

    #[test]
    fn words_up_to_lists_finite_language() {
        let al = fab();
        let a = words(&al, &["f2b", "f1a", "a"]);
        let listed: Vec<String> = a
            .words_up_to(5)
            .iter()
            .map(|w| a.word_to_string(w))
            .collect();
        assert_eq!(listed, ["a", "f 1 a", "f 2 b"]);
    }
}
