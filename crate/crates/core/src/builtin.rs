//! Fixed example languages: the two comb targets over `{a:2, c:0, d:0, e:0}`
//! (as bottom-up automata and as frontier-check DTDAs), the two-tree
//! language `T0 = {f(a,b), f(b,a)}` and the seven-path example whose tree
//! language has four members.

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::bottomup::BottomUpTa;
use crate::error::{Error, Result};
use crate::topdown::{CombTarget, DtdaCore, FrontierCheckDtda};
use crate::tree::{PathWord, Tree};
use crate::word::{Nfa, PathAutomaton};

const COMB_SYMBOLS: [(&str, usize); 4] = [("a", 2), ("c", 0), ("d", 0), ("e", 0)];

pub fn comb_alphabet() -> RankedAlphabet {
    RankedAlphabet::new(COMB_SYMBOLS).expect("valid alphabet")
}

/// The alphabet must consist of exactly `a:2, c:0, d:0, e:0`, in any order.
pub fn check_comb_alphabet(alphabet: &RankedAlphabet) -> Result<()> {
    let ok = alphabet.len() == COMB_SYMBOLS.len()
        && COMB_SYMBOLS.iter().all(|&(name, rank)| {
            alphabet
                .lookup(name)
                .is_some_and(|s| alphabet.rank(s) == rank)
        });
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "expected the alphabet a:2 c:0 d:0 e:0, found {alphabet}"
        )))
    }
}

fn comb_symbols(alphabet: &RankedAlphabet) -> Result<[Symbol; 4]> {
    check_comb_alphabet(alphabet)?;
    let s = |n| alphabet.lookup(n).unwrap();
    Ok([s("a"), s("c"), s("d"), s("e")])
}

/// Trees with exactly one `d`. States count `d` leaves: zero, one, many.
pub fn t1_automaton(alphabet: &RankedAlphabet) -> Result<BottomUpTa> {
    let [a, c, d, e] = comb_symbols(alphabet)?;
    let mut ta = BottomUpTa::new(alphabet);
    for name in ["zero", "one", "many"] {
        ta.add_state(name);
    }
    ta.set_accepting(1, true);
    ta.add_rule(c, vec![], 0)?;
    ta.add_rule(e, vec![], 0)?;
    ta.add_rule(d, vec![], 1)?;
    for x in 0..3 {
        for y in 0..3 {
            ta.add_rule(a, vec![x, y], (x + y).min(2))?;
        }
    }
    Ok(ta)
}

/// Trees with some `d` leaf left of some `e` leaf. Below an unestablished
/// node it matters which of `d`, `e` occur: `none`, `d`, `e`, `e_d` (both,
/// every `e` left of every `d`); `ok` once a `d` precedes an `e`.
pub fn t2_automaton(alphabet: &RankedAlphabet) -> Result<BottomUpTa> {
    let [a, c, d, e] = comb_symbols(alphabet)?;
    const OK: usize = 4;
    let has_d = |q: usize| q == 1 || q == 3;
    let has_e = |q: usize| q == 2 || q == 3;
    let mut ta = BottomUpTa::new(alphabet);
    for name in ["none", "d", "e", "e_d", "ok"] {
        ta.add_state(name);
    }
    ta.set_accepting(OK, true);
    ta.add_rule(c, vec![], 0)?;
    ta.add_rule(d, vec![], 1)?;
    ta.add_rule(e, vec![], 2)?;
    for x in 0..5 {
        for y in 0..5 {
            let target = if x == OK || y == OK || (has_d(x) && has_e(y)) {
                OK
            } else {
                usize::from(has_d(x) || has_d(y)) + 2 * usize::from(has_e(x) || has_e(y))
            };
            ta.add_rule(a, vec![x, y], target)?;
        }
    }
    Ok(ta)
}

pub fn target_automaton(alphabet: &RankedAlphabet, target: CombTarget) -> Result<BottomUpTa> {
    match target {
        CombTarget::T1 => t1_automaton(alphabet),
        CombTarget::T2 => t2_automaton(alphabet),
    }
}

/// One inner state `q` and one frontier state per leaf symbol, so the
/// frontier word spells out the leaves.
fn leaf_spelling_core(alphabet: &RankedAlphabet) -> Result<DtdaCore> {
    let [a, c, d, e] = comb_symbols(alphabet)?;
    let names = ["q", "qc", "qd", "qe"].map(String::from).to_vec();
    DtdaCore::from_fn(alphabet, names, 0, |_, s| {
        if s == a {
            vec![0, 0]
        } else if s == c {
            vec![1]
        } else if s == d {
            vec![2]
        } else {
            debug_assert_eq!(s, e);
            vec![3]
        }
    })
}

/// Frontier-check version of T1: the checker counts `qd` up to two.
pub fn t1_frontier_check(alphabet: &RankedAlphabet) -> Result<FrontierCheckDtda> {
    let core = leaf_spelling_core(alphabet)?;
    let mut b = Nfa::new(4);
    for name in ["zero", "one", "many"] {
        b.add_state(name);
    }
    b.set_initial(0);
    b.set_accepting(1, true);
    for q in 0..3 {
        for letter in 0..4 {
            let to = if letter == 2 { (q + 1).min(2) } else { q };
            b.add_transition(q, letter, to);
        }
    }
    FrontierCheckDtda::new(core, b)
}

/// Frontier-check version of T2: the checker looks for `qd` then later `qe`.
pub fn t2_frontier_check(alphabet: &RankedAlphabet) -> Result<FrontierCheckDtda> {
    let core = leaf_spelling_core(alphabet)?;
    let mut b = Nfa::new(4);
    for name in ["start", "seen_d", "ok"] {
        b.add_state(name);
    }
    b.set_initial(0);
    b.set_accepting(2, true);
    for q in 0..3 {
        for letter in 0..4 {
            let to = match (q, letter) {
                (0, 2) => 1,
                (1, 3) => 2,
                _ => q,
            };
            b.add_transition(q, letter, to);
        }
    }
    FrontierCheckDtda::new(core, b)
}

pub fn t0_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).expect("valid alphabet")
}

/// `f(a,b)` and `f(b,a)`.
pub fn t0_trees() -> Vec<Tree> {
    let al = t0_alphabet();
    ["f(a,b)", "f(b,a)"]
        .iter()
        .map(|s| Tree::parse(s, &al).expect("valid tree"))
        .collect()
}

pub fn t0_automaton() -> BottomUpTa {
    BottomUpTa::from_trees(&t0_alphabet(), &t0_trees()).expect("valid trees")
}

pub fn fig1_alphabet() -> RankedAlphabet {
    RankedAlphabet::new([("a", 2), ("b", 2), ("c", 0), ("d", 0)]).expect("valid alphabet")
}

pub const FIG1_PATHS: [&str; 7] = [
    "a 1 b 1 c",
    "a 1 b 2 d",
    "a 1 a 1 d",
    "a 1 a 2 c",
    "a 2 c",
    "a 2 d",
    "b 2 c",
];

pub const FIG1_TREES: [&str; 4] = ["a(b(c,d),c)", "a(b(c,d),d)", "a(a(d,c),c)", "a(a(d,c),d)"];

pub fn fig1_paths() -> Vec<PathWord> {
    let al = fig1_alphabet();
    FIG1_PATHS
        .iter()
        .map(|s| PathWord::parse(s, &al).expect("valid path"))
        .collect()
}

pub fn fig1_path_automaton() -> PathAutomaton {
    PathAutomaton::from_path_words(&fig1_alphabet(), &fig1_paths())
}

pub fn fig1_trees() -> Vec<Tree> {
    let al = fig1_alphabet();
    FIG1_TREES
        .iter()
        .map(|s| Tree::parse(s, &al).expect("valid tree"))
        .collect()
}
