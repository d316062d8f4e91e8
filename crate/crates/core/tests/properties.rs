//! Randomized invariants. Every automaton is generated from a seed so that
//! failures shrink to a reproducible seed; each property is checked against
//! brute-force enumeration of words or trees.

use std::collections::BTreeSet;

use dtda::bridge;
use dtda::builtin;
use dtda::format::Document;
use dtda::random::{
    random_alphabet, random_bottomup, random_dta, random_dtda, random_dtda_set, random_nfa,
    random_path_dfa, random_tree, rng,
};
use dtda::tree::trees_by_size;
use dtda::{
    comb_refutation, enumerate_trees, CombTarget, DtdaSet, PathAutomaton, RankedAlphabet, Tree,
};
use proptest::prelude::*;

fn fab() -> RankedAlphabet {
    RankedAlphabet::parse("f:2 a:0 b:0").unwrap()
}

fn words(letters: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..letters).map(move |l| {
                    let mut v = w.clone();
                    v.push(l);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn catalan(n: u64) -> u64 {
    (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn word_operations_match_brute_force(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let mut r = rng(seed);
        let a = random_nfa(&mut r, 2, n, 0.4);
        let b = random_nfa(&mut r, 2, m, 0.4);
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        let c = a.complement();
        let d = a.to_dfa();
        let min = d.minimize().unwrap();
        prop_assert!(min.num_states() <= d.num_states());
        prop_assert_eq!(min.minimize().unwrap().num_states(), min.num_states());
        for w in words(2, 6) {
            let (x, y) = (a.accepts(&w), b.accepts(&w));
            prop_assert_eq!(u.accepts(&w), x || y);
            prop_assert_eq!(i.accepts(&w), x && y);
            prop_assert_eq!(c.accepts(&w), !x);
            prop_assert_eq!(d.accepts(&w), x);
            prop_assert_eq!(min.accepts(&w), x);
        }
        match a.shortest_word() {
            Some(w) => {
                prop_assert!(a.accepts(&w));
                for v in words(2, w.len().saturating_sub(1)) {
                    if v.len() < w.len() {
                        prop_assert!(!a.accepts(&v));
                    }
                }
            }
            None => prop_assert!(words(2, 6).iter().all(|w| !a.accepts(w))),
        }
    }

    #[test]
    fn bottom_up_constructions_match_membership(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let al = fab();
        let mut r = rng(seed);
        let a = random_bottomup(&mut r, &al, n, 0.3);
        let b = random_bottomup(&mut r, &al, m, 0.3);
        let d = a.determinize().unwrap();
        prop_assert!(d.is_deterministic_complete());
        let u = a.union(&b).unwrap();
        let i = a.intersection(&b).unwrap();
        let c = a.complement().unwrap();
        let min = a.to_deterministic().unwrap().minimize().unwrap();
        prop_assert_eq!(min.minimize().unwrap().num_states(), min.num_states());
        let trees = enumerate_trees(&al, 7);
        for t in &trees {
            let (x, y) = (a.accepts(t).unwrap(), b.accepts(t).unwrap());
            prop_assert_eq!(d.accepts(t).unwrap(), x);
            prop_assert_eq!(u.accepts(t).unwrap(), x || y);
            prop_assert_eq!(i.accepts(t).unwrap(), x && y);
            prop_assert_eq!(c.accepts(t).unwrap(), !x);
            prop_assert_eq!(min.accepts(t).unwrap(), x);
        }
        let first = trees.iter().find(|t| a.accepts(t).unwrap());
        if let Some(first) = first {
            prop_assert_eq!(a.smallest_accepted(), Some(first.clone()));
            let w = a.witness().unwrap();
            prop_assert!(a.accepts(&w).unwrap());
            let lowest = trees.iter().filter(|t| a.accepts(t).unwrap()).map(Tree::height).min().unwrap();
            prop_assert!(w.height() <= lowest);
        }
        prop_assert_eq!(a.is_empty(), a.witness().is_none());
        if let Some(t) = a.separating_tree(&b).unwrap() {
            prop_assert_ne!(a.accepts(&t).unwrap(), b.accepts(&t).unwrap());
        } else {
            prop_assert!(trees.iter().all(|t| a.accepts(t).unwrap() == b.accepts(t).unwrap()));
        }
    }

    #[test]
    fn run_image_is_the_recursive_frontier_set(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let al = random_alphabet(&mut r, 2, 3);
        let core = dtda::random::random_core(&mut r, &al, n);
        for _ in 0..10 {
            let Some(t) = random_tree(&mut r, &al, 9) else { break };
            let run = core.run(&t).unwrap();
            let image: BTreeSet<usize> = run.iter().map(|(_, q)| *q).collect();
            prop_assert_eq!(&image, &core.frontier_set(&t).unwrap());
            prop_assert_eq!(&image, &core.reached_from(core.initial(), &t));
            let positions: Vec<_> = run.iter().map(|(p, _)| p.clone()).collect();
            prop_assert_eq!(positions, t.outer_frontier());
        }
    }

    #[test]
    fn dtda_to_set_preserves_membership(seed in any::<u64>(), n in 1usize..5) {
        let al = fab();
        let mut r = rng(seed);
        let a = random_dtda(&mut r, &al, n);
        let s = a.to_set().unwrap();
        let bu = a.to_bottomup().unwrap();
        for t in enumerate_trees(&al, 7) {
            let x = a.accepts(&t).unwrap();
            prop_assert_eq!(s.accepts(&t).unwrap(), x);
            prop_assert_eq!(bu.accepts(&t).unwrap(), x);
        }
    }

    #[test]
    fn set_boolean_laws(seed in any::<u64>(), n in 1usize..4, m in 1usize..4) {
        let al = fab();
        let mut r = rng(seed);
        let a = random_dtda_set(&mut r, &al, n);
        let b = random_dtda_set(&mut r, &al, m);
        let ca = a.complement().unwrap();
        let cb = b.complement().unwrap();
        let lhs = a.union(&b).unwrap().complement().unwrap();
        let rhs = ca.intersection(&cb).unwrap();
        let diff = a.difference(&b).unwrap();
        let cca = ca.complement().unwrap();
        prop_assert_eq!(cca.family(), a.family());
        for t in enumerate_trees(&al, 7) {
            let (x, y) = (a.accepts(&t).unwrap(), b.accepts(&t).unwrap());
            prop_assert_eq!(lhs.accepts(&t).unwrap(), !(x || y));
            prop_assert_eq!(rhs.accepts(&t).unwrap(), !(x || y));
            prop_assert_eq!(diff.accepts(&t).unwrap(), x && !y);
        }
        prop_assert!(a.trim().unwrap().equivalent(&a).unwrap());
        prop_assert!(a.union(&a).unwrap().equivalent(&a).unwrap());
    }

    #[test]
    fn set_equivalence_matches_tree_by_tree(seed in any::<u64>(), n in 1usize..4) {
        let al = fab();
        let mut r = rng(seed);
        let a = random_dtda_set(&mut r, &al, n);
        let x = random_dta(&mut r, &al, 2);
        let bu = a.to_bottomup().unwrap();
        let trees = enumerate_trees(&al, 7);
        for t in &trees {
            prop_assert_eq!(bu.accepts(t).unwrap(), a.accepts(t).unwrap());
        }
        match bu.separating_tree(&x).unwrap() {
            None => prop_assert!(trees.iter().all(|t| a.accepts(t).unwrap() == x.accepts(t).unwrap())),
            Some(t) => prop_assert_ne!(a.accepts(&t).unwrap(), x.accepts(&t).unwrap()),
        }
        prop_assert_eq!(a.is_empty().unwrap(), bu.is_empty());
    }

    #[test]
    fn decomposition_matches_set_acceptance(seed in any::<u64>(), n in 1usize..4) {
        let al = fab();
        let mut r = rng(seed);
        let a = random_dtda_set(&mut r, &al, n);
        let d = a.decompose().unwrap();
        prop_assert_eq!(d.component_count(), a.family().iter().map(|f| 1 + f.len()).sum::<usize>());
        for t in enumerate_trees(&al, 7) {
            prop_assert_eq!(d.accepts(&t).unwrap(), a.accepts(&t).unwrap());
        }
    }

    #[test]
    fn comb_refutation_invariants(seed in any::<u64>(), n in 1usize..6, second in any::<bool>()) {
        let al = builtin::comb_alphabet();
        let mut r = rng(seed);
        let a = random_dtda_set(&mut r, &al, n);
        let target = if second { CombTarget::T2 } else { CombTarget::T1 };
        let fixture = builtin::target_automaton(&al, target).unwrap();
        let c = comb_refutation(&a, target).unwrap();
        prop_assert_eq!(a.core().frontier_set(&c.t).unwrap(), a.core().frontier_set(&c.t_prime).unwrap());
        prop_assert!(fixture.accepts(&c.t).unwrap());
        prop_assert!(!fixture.accepts(&c.t_prime).unwrap());
        prop_assert_eq!(c.num_a(), c.k + 3 * c.p);
        prop_assert!(c.p >= 1);
    }

    #[test]
    fn galois_laws_between_trees_and_paths(seed in any::<u64>(), n in 1usize..4) {
        let al = fab();
        let mut r = rng(seed);
        let t = random_dta(&mut r, &al, n);
        let p = random_path_dfa(&mut r, &al, n + 1);
        let pot_t = bridge::pot_language(&t);
        let closure = bridge::tfp_dtda(&pot_t).unwrap();
        let tfp_p = bridge::tfp_dtda(&p).unwrap();
        let tfp_p_bu = tfp_p.to_bottomup().unwrap();
        let again = bridge::tfp_dtda(&bridge::pot_language(&tfp_p_bu)).unwrap();
        for x in enumerate_trees(&al, 7) {
            // T ⊆ tfp(pot(T))
            if t.accepts(&x).unwrap() {
                prop_assert!(closure.accepts(&x).unwrap());
                for w in x.paths() {
                    prop_assert!(pot_t.accepts_path(&w));
                }
            }
            // pot(tfp(P)) ⊆ P and tfp(pot(tfp(P))) = tfp(P)
            let inside = tfp_p.accepts(&x).unwrap();
            prop_assert_eq!(inside, p.accepts_all_paths_of(&x));
            prop_assert_eq!(again.accepts(&x).unwrap(), inside);
        }
        prop_assert!(bridge::is_dtda_recognizable(&tfp_p_bu).unwrap().recognizable);
    }

    #[test]
    fn paths_of_a_tree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let al = random_alphabet(&mut r, 3, 3);
        if let Some(t) = random_tree(&mut r, &al, 11) {
            let paths = t.paths();
            prop_assert_eq!(paths.len(), t.frontier().len());
            let single = dtda::BottomUpTa::from_trees(&al, std::slice::from_ref(&t)).unwrap();
            let pot = bridge::pot_language(&single);
            prop_assert!(pot.equivalent(&PathAutomaton::from_path_words(&al, &paths)).unwrap());
            for w in &paths {
                prop_assert!(w.is_valid(&al));
                prop_assert!(t.has_path(w));
            }
        }
    }

    #[test]
    fn singleton_accepts_only_its_tree(seed in any::<u64>()) {
        let al = fab();
        let mut r = rng(seed);
        let t = random_tree(&mut r, &al, 7).unwrap();
        let single = dtda::Dtda::singleton(&al, &t).unwrap();
        prop_assert_eq!(single.num_states(), t.size() + 2);
        for x in trees_by_size(&al, t.size() + 2).iter().flatten() {
            prop_assert_eq!(single.accepts(x).unwrap(), *x == t);
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), n in 1usize..5) {
        let al = fab();
        let mut r = rng(seed);
        let docs = [
            Document::DtdaSet(random_dtda_set(&mut r, &al, n)),
            Document::Dtda(random_dtda(&mut r, &al, n)),
            Document::BottomUp(random_bottomup(&mut r, &al, n, 0.3)),
            Document::PathDfa(random_path_dfa(&mut r, &al, n)),
        ];
        for doc in docs {
            let text = doc.to_text();
            let back = Document::parse(&text).unwrap();
            prop_assert_eq!(back.to_text(), text);
        }
    }
}

#[test]
fn enumeration_is_complete_and_closed() {
    let al = fab();
    let by_size = trees_by_size(&al, 9);
    for (size, bucket) in by_size.iter().enumerate() {
        // binary trees with k internal nodes have 2k+1 nodes and k+1 leaves
        let expected = if size % 2 == 1 {
            let k = (size as u64 - 1) / 2;
            catalan(k) * 2u64.pow(k as u32 + 1)
        } else {
            0
        };
        assert_eq!(bucket.len() as u64, expected, "size {size}");
        let distinct: BTreeSet<&Tree> = bucket.iter().collect();
        assert_eq!(distinct.len(), bucket.len());
        assert!(bucket
            .iter()
            .all(|t| t.size() == size && t.is_consistent(&al)));
    }
    // closed under taking subtrees
    let all: BTreeSet<Tree> = enumerate_trees(&al, 9).into_iter().collect();
    for t in &all {
        for c in t.children() {
            assert!(all.contains(c));
        }
    }
}

#[test]
fn set_family_membership_is_exact() {
    let al = fab();
    let core =
        dtda::DtdaCore::from_fn(
            &al,
            vec!["s".into(), "x".into(), "y".into()],
            0,
            |_, s| match s.0 {
                0 => vec![0, 0],
                1 => vec![1],
                _ => vec![2],
            },
        )
        .unwrap();
    let only_x = DtdaSet::new(core.clone(), [BTreeSet::from([1])]).unwrap();
    let both = DtdaSet::new(core, [BTreeSet::from([1, 2])]).unwrap();
    for t in enumerate_trees(&al, 7) {
        let leaves: BTreeSet<String> = t
            .paths()
            .iter()
            .map(|w| w.display(&al).chars().last().unwrap().to_string())
            .collect();
        assert_eq!(
            only_x.accepts(&t).unwrap(),
            leaves == BTreeSet::from(["a".to_string()])
        );
        assert_eq!(both.accepts(&t).unwrap(), leaves.len() == 2);
    }
}
