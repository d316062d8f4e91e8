//! Reachable-state exploration for deterministic bottom-up constructions.
//!
//! Every deterministic construction in the crate (subset construction,
//! products, top-down to bottom-up conversions) has the same shape: a state
//! for each constant, and a state computed from the states of the children
//! at each inner node. [`explore`] materializes exactly the states reachable
//! this way and the complete transition table between them.

use std::collections::HashMap;
use std::hash::Hash;

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};

pub(crate) struct Explored<S> {
    pub states: Vec<S>,
    /// Per symbol: argument tuple to target index.
    pub transitions: Vec<HashMap<Vec<usize>, usize>>,
}

/// Bound on the size of the explicit transition table.
pub(crate) const TRANSITION_CAP: usize = 2_000_000;

pub(crate) fn explore<S, L, N>(
    alphabet: &RankedAlphabet,
    cap: usize,
    mut leaf: L,
    mut node: N,
) -> Result<Explored<S>>
where
    S: Clone + Eq + Hash,
    L: FnMut(Symbol) -> S,
    N: FnMut(Symbol, &[&S]) -> S,
{
    let mut states: Vec<S> = Vec::new();
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut transitions: Vec<HashMap<Vec<usize>, usize>> = vec![HashMap::new(); alphabet.len()];

    let mut intern = |s: S, states: &mut Vec<S>| -> Result<usize> {
        if let Some(&i) = index.get(&s) {
            return Ok(i);
        }
        if states.len() >= cap {
            return Err(Error::limit(
                "reachable states in bottom-up construction",
                cap,
            ));
        }
        index.insert(s.clone(), states.len());
        states.push(s);
        Ok(states.len() - 1)
    };

    for c in alphabet.constants() {
        let s = leaf(c);
        let i = intern(s, &mut states)?;
        transitions[c.0].insert(Vec::new(), i);
    }
    let inner: Vec<Symbol> = alphabet
        .symbols()
        .filter(|&s| alphabet.rank(s) > 0)
        .collect();
    let mut k = 0;
    let mut table = 0usize;
    while k < states.len() {
        for &a in &inner {
            for args in tuples_with_max(k, alphabet.rank(a)) {
                table += 1;
                if table > TRANSITION_CAP {
                    return Err(Error::limit(
                        "transitions in bottom-up construction",
                        TRANSITION_CAP,
                    ));
                }
                let target = {
                    let refs: Vec<&S> = args.iter().map(|&j| &states[j]).collect();
                    node(a, &refs)
                };
                let i = intern(target, &mut states)?;
                transitions[a.0].insert(args, i);
            }
        }
        k += 1;
    }
    Ok(Explored {
        states,
        transitions,
    })
}

/// All tuples over `0..=k` of the given length that contain `k`.
pub(crate) fn tuples_with_max(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for first in 0..len {
        // `first` is the leftmost occurrence of k: earlier positions range
        // over 0..k, later ones over 0..=k
        let sizes: Vec<usize> = (0..len)
            .map(|i| match i.cmp(&first) {
                std::cmp::Ordering::Less => k,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => k + 1,
            })
            .collect();
        if sizes.contains(&0) {
            continue;
        }
        let mut idx = vec![0usize; len];
        'odometer: loop {
            out.push(
                idx.iter()
                    .enumerate()
                    .map(|(i, &v)| if i == first { k } else { v })
                    .collect(),
            );
            let mut i = len;
            loop {
                if i == 0 {
                    break 'odometer;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < sizes[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
    out
}
