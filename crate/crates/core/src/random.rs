//! Seeded random instances for property tests and the command line.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::RankedAlphabet;
use crate::bottomup::BottomUpTa;
use crate::explore::tuples_with_max;
use crate::topdown::{Dtda, DtdaCore, DtdaSet, StateSet};
use crate::tree::Tree;
use crate::word::{Nfa, PathAutomaton};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_binary` binary symbols `f, g, ...` and between one and
/// `max_nullary` constants `a, b, ...`.
pub fn random_alphabet(rng: &mut Rng64, max_binary: usize, max_nullary: usize) -> RankedAlphabet {
    let binary = rng.gen_range(0..=max_binary);
    let nullary = rng.gen_range(1..=max_nullary.max(1));
    let syms = ["f", "g", "h", "k"]
        .iter()
        .take(binary)
        .map(|&n| (n, 2))
        .chain(
            ["a", "b", "c", "d", "e"]
                .iter()
                .take(nullary)
                .map(|&n| (n, 0)),
        );
    RankedAlphabet::new(syms).expect("valid alphabet")
}

fn state_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("q{i}")).collect()
}

pub fn random_core(rng: &mut Rng64, alphabet: &RankedAlphabet, states: usize) -> DtdaCore {
    let n = states.max(1);
    DtdaCore::from_fn(alphabet, state_names(n), 0, |_, s| {
        (0..alphabet.rank(s).max(1))
            .map(|_| rng.gen_range(0..n))
            .collect()
    })
    .expect("valid core")
}

fn random_subset(rng: &mut Rng64, n: usize) -> StateSet {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

pub fn random_dtda(rng: &mut Rng64, alphabet: &RankedAlphabet, states: usize) -> Dtda {
    let core = random_core(rng, alphabet, states);
    let accepting = random_subset(rng, core.num_states());
    Dtda::new(core, accepting).expect("valid DTDA")
}

/// Each nonempty subset of states joins the family with probability 1/2
/// when there are at most six states; otherwise a handful of random sets.
pub fn random_dtda_set(rng: &mut Rng64, alphabet: &RankedAlphabet, states: usize) -> DtdaSet {
    let core = random_core(rng, alphabet, states);
    let n = core.num_states();
    let family: Vec<StateSet> = if n <= 6 {
        (1u32..1 << n)
            .filter(|_| rng.gen_bool(0.5))
            .map(|m| (0..n).filter(|&q| m >> q & 1 == 1).collect())
            .collect()
    } else {
        (0..rng.gen_range(1..=8))
            .map(|_| random_subset(rng, n))
            .collect()
    };
    DtdaSet::new(core, family).expect("valid DTDA")
}

/// Nondeterministic bottom-up automaton; every rule is present with
/// probability `density`, constants always get at least one target.
pub fn random_bottomup(
    rng: &mut Rng64,
    alphabet: &RankedAlphabet,
    states: usize,
    density: f64,
) -> BottomUpTa {
    let n = states.max(1);
    let mut ta = BottomUpTa::new(alphabet);
    for name in state_names(n) {
        ta.add_state(name);
    }
    for s in alphabet.symbols() {
        let r = alphabet.rank(s);
        let tuples: Vec<Vec<usize>> = if r == 0 {
            vec![Vec::new()]
        } else {
            (0..n).flat_map(|k| tuples_with_max(k, r)).collect()
        };
        for args in tuples {
            let mut added = false;
            for q in 0..n {
                if rng.gen_bool(density) {
                    ta.add_rule(s, args.clone(), q).expect("valid rule");
                    added = true;
                }
            }
            if r == 0 && !added {
                ta.add_rule(s, args, rng.gen_range(0..n))
                    .expect("valid rule");
            }
        }
    }
    for q in 0..n {
        ta.set_accepting(q, rng.gen_bool(0.5));
    }
    ta
}

/// Deterministic bottom-up automaton with uniformly random transitions.
pub fn random_dta(rng: &mut Rng64, alphabet: &RankedAlphabet, states: usize) -> BottomUpTa {
    let n = states.max(1);
    let mut ta = BottomUpTa::new(alphabet);
    for name in state_names(n) {
        ta.add_state(name);
    }
    for s in alphabet.symbols() {
        let r = alphabet.rank(s);
        let tuples: Vec<Vec<usize>> = if r == 0 {
            vec![Vec::new()]
        } else {
            (0..n).flat_map(|k| tuples_with_max(k, r)).collect()
        };
        for args in tuples {
            ta.add_rule(s, args, rng.gen_range(0..n))
                .expect("valid rule");
        }
    }
    for q in 0..n {
        ta.set_accepting(q, rng.gen_bool(0.5));
    }
    ta
}

/// Nondeterministic word automaton; each edge with probability `density`.
pub fn random_nfa(rng: &mut Rng64, letters: usize, states: usize, density: f64) -> Nfa {
    let n = states.max(1);
    let mut nfa = Nfa::new(letters);
    for i in 0..n {
        nfa.add_state(format!("n{i}"));
    }
    nfa.set_initial(0);
    if n > 1 && rng.gen_bool(0.3) {
        nfa.set_initial(rng.gen_range(1..n));
    }
    for p in 0..n {
        for l in 0..letters {
            for q in 0..n {
                if rng.gen_bool(density) {
                    nfa.add_transition(p, l, q);
                }
            }
        }
        nfa.set_accepting(p, rng.gen_bool(0.4));
    }
    nfa
}

/// Complete DFA over the path alphabet with uniformly random transitions.
pub fn random_path_dfa(rng: &mut Rng64, alphabet: &RankedAlphabet, states: usize) -> PathAutomaton {
    let n = states.max(1);
    let mut nfa = Nfa::new(alphabet.gamma_len());
    for i in 0..n {
        nfa.add_state(format!("p{i}"));
    }
    nfa.set_initial(0);
    for p in 0..n {
        for l in 0..alphabet.gamma_len() {
            nfa.add_transition(p, l, rng.gen_range(0..n));
        }
        nfa.set_accepting(p, rng.gen_bool(0.6));
    }
    PathAutomaton::from_nfa(alphabet.clone(), nfa).expect("letters match")
}

/// `amount` distinct indices below `len` in increasing order; all of them
/// when `amount >= len`.
pub fn sample_indices(rng: &mut Rng64, len: usize, amount: usize) -> Vec<usize> {
    let mut picks = rand::seq::index::sample(rng, len, amount.min(len)).into_vec();
    picks.sort_unstable();
    picks
}

/// A random tree with at most `max_nodes` nodes, or `None` when the
/// alphabet has no constants.
pub fn random_tree(rng: &mut Rng64, alphabet: &RankedAlphabet, max_nodes: usize) -> Option<Tree> {
    if !alphabet.has_constants() || max_nodes == 0 {
        return None;
    }
    let budget = rng.gen_range(1..=max_nodes);
    Some(grow(rng, alphabet, budget))
}

fn grow(rng: &mut Rng64, alphabet: &RankedAlphabet, budget: usize) -> Tree {
    // a symbol of rank r needs at least r + 1 nodes
    let fitting: Vec<_> = alphabet
        .symbols()
        .filter(|&s| alphabet.rank(s) < budget || alphabet.rank(s) == 0)
        .collect();
    let s = *fitting.choose(rng).expect("constants always fit");
    let r = alphabet.rank(s);
    if r == 0 {
        return Tree::new_unchecked(s, Vec::new());
    }
    // spread the remaining budget over the children, each at least one
    let mut shares = vec![1usize; r];
    for _ in 0..budget - 1 - r {
        shares[rng.gen_range(0..r)] += 1;
    }
    let children = shares.into_iter().map(|b| grow(rng, alphabet, b)).collect();
    Tree::new_unchecked(s, children)
}
