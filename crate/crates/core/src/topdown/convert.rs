//! Conversions between acceptance modes and into bottom-up automata.

use std::collections::BTreeSet;
use std::fmt;

use super::{distinct_names, mask_to_set, Dtda, DtdaCore, DtdaSet, StateSet, POWERSET_STATE_CAP};
use crate::alphabet::RankedAlphabet;
use crate::bottomup::{BottomUpTa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::explore::explore;
use crate::tree::Tree;

impl Dtda {
    /// The same language with set acceptance: the family is every subset
    /// of the final states.
    pub fn to_set(&self) -> Result<DtdaSet> {
        let finals: Vec<usize> = self.accepting.iter().copied().collect();
        if finals.len() > POWERSET_STATE_CAP {
            return Err(Error::limit(
                "final states for subset family",
                POWERSET_STATE_CAP,
            ));
        }
        let family = (0u32..1 << finals.len()).map(|m| {
            (0..finals.len())
                .filter(|&i| m >> i & 1 == 1)
                .map(|i| finals[i])
                .collect::<StateSet>()
        });
        DtdaSet::new(self.core.clone(), family)
    }

    /// Deterministic bottom-up automaton for the same language. Its state
    /// after reading `t` is the set of top-down states `q` with
    /// `δ(q, t) ⊆ F`.
    pub fn to_bottomup(&self) -> Result<BottomUpTa> {
        let core = &self.core;
        let n = core.num_states();
        if n > super::MASK_STATE_CAP {
            return Err(Error::limit(
                "states for bottom-up conversion",
                super::MASK_STATE_CAP,
            ));
        }
        let fin = super::set_to_mask(&self.accepting);
        let explored = explore(
            core.alphabet(),
            DEFAULT_STATE_CAP,
            |c| {
                (0..n)
                    .filter(|&q| fin >> core.targets(q, c)[0] & 1 == 1)
                    .fold(0u128, |m, q| m | 1 << q)
            },
            |a, args: &[&u128]| {
                (0..n)
                    .filter(|&q| {
                        core.targets(q, a)
                            .iter()
                            .zip(args)
                            .all(|(&qc, &&m)| m >> qc & 1 == 1)
                    })
                    .fold(0u128, |m, q| m | 1 << q)
            },
        )?;
        let q0 = core.initial();
        Ok(BottomUpTa::from_explored(
            core.alphabet(),
            &explored,
            |&m| m >> q0 & 1 == 1,
        ))
    }

    /// Accepts exactly `{t}`. One state per node of `t` checks the label,
    /// `q+` marks a correct frontier and `q-` poisons everything below a
    /// mismatch.
    pub fn singleton(alphabet: &RankedAlphabet, t: &Tree) -> Result<Dtda> {
        if !t.is_consistent(alphabet) {
            return Err(Error::AlphabetMismatch(
                "tree is not rank-consistent over the alphabet".into(),
            ));
        }
        // nodes in preorder with the index of their children
        let mut labels = Vec::new();
        let mut kids: Vec<Vec<usize>> = Vec::new();
        fn walk(t: &Tree, labels: &mut Vec<crate::Symbol>, kids: &mut Vec<Vec<usize>>) -> usize {
            let me = labels.len();
            labels.push(t.label());
            kids.push(Vec::new());
            for c in t.children() {
                let j = walk(c, labels, kids);
                kids[me].push(j);
            }
            me
        }
        walk(t, &mut labels, &mut kids);
        let nodes = labels.len();
        let (plus, minus) = (nodes, nodes + 1);
        let mut seen = vec![0usize; alphabet.len()];
        let mut names: Vec<String> = labels
            .iter()
            .map(|s| {
                seen[s.0] += 1;
                format!("q_{}{}", alphabet.name(*s), seen[s.0])
            })
            .collect();
        names.push("q+".into());
        names.push("q-".into());
        let core = DtdaCore::from_fn(alphabet, distinct_names(names), 0, |q, s| {
            let arity = alphabet.rank(s);
            if q < nodes && labels[q] == s {
                if arity == 0 {
                    vec![plus]
                } else {
                    kids[q].clone()
                }
            } else {
                vec![minus; arity.max(1)]
            }
        })?;
        Dtda::new(core, StateSet::from([plus]))
    }
}

impl DtdaSet {
    /// Deterministic bottom-up automaton for the same language. Its state
    /// after reading `t` is the map `q ↦ δ(q, t)`.
    pub fn to_bottomup(&self) -> Result<BottomUpTa> {
        self.to_bottomup_with_cap(DEFAULT_STATE_CAP)
    }

    pub fn to_bottomup_with_cap(&self, cap: usize) -> Result<BottomUpTa> {
        let core = &self.core;
        if core.num_states() > super::MASK_STATE_CAP {
            return Err(Error::limit(
                "states for bottom-up conversion",
                super::MASK_STATE_CAP,
            ));
        }
        // only states reachable from q0 can matter
        let live = core.reachable_states();
        let mut slot = vec![usize::MAX; core.num_states()];
        for (i, &q) in live.iter().enumerate() {
            slot[q] = i;
        }
        let explored = explore(
            core.alphabet(),
            cap,
            |c| {
                live.iter()
                    .map(|&q| 1u128 << core.targets(q, c)[0])
                    .collect::<Vec<u128>>()
            },
            |a, args: &[&Vec<u128>]| {
                live.iter()
                    .map(|&q| {
                        core.targets(q, a)
                            .iter()
                            .zip(args)
                            .fold(0u128, |m, (&qc, f)| m | f[slot[qc]])
                    })
                    .collect::<Vec<u128>>()
            },
        )?;
        let root = slot[core.initial()];
        Ok(BottomUpTa::from_explored(core.alphabet(), &explored, |f| {
            self.family.contains(&mask_to_set(f[root]))
        }))
    }

    /// Splits the language into a union of intersections of plain DTDAs and
    /// their complements. Set `F_i` contributes the clause
    /// `[F_i] ∧ ⋀_{q ∈ F_i} ¬[Q ∖ {q}]`, where `[G]` is the core with final
    /// states `G`.
    pub fn decompose(&self) -> Result<Decomposition> {
        let all: StateSet = (0..self.num_states()).collect();
        let mut components = Vec::new();
        let mut clauses = Vec::new();
        for set in &self.family {
            let mut clause = vec![Literal {
                component: components.len(),
                positive: true,
            }];
            components.push(Dtda::new(self.core.clone(), set.clone())?);
            for &q in set {
                let mut rest = all.clone();
                rest.remove(&q);
                clause.push(Literal {
                    component: components.len(),
                    positive: false,
                });
                components.push(Dtda::new(self.core.clone(), rest)?);
            }
            clauses.push(clause);
        }
        Ok(Decomposition {
            components,
            clauses,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Literal {
    pub component: usize,
    pub positive: bool,
}

/// A disjunction of conjunctions of (possibly negated) DTDA languages.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub components: Vec<Dtda>,
    pub clauses: Vec<Vec<Literal>>,
}

impl Decomposition {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        let values = self
            .components
            .iter()
            .map(|d| d.accepts(t))
            .collect::<Result<Vec<bool>>>()?;
        Ok(self
            .clauses
            .iter()
            .any(|c| c.iter().all(|l| values[l.component] == l.positive)))
    }

    /// Distinct final-state sets used by the components.
    pub fn final_sets(&self) -> BTreeSet<StateSet> {
        self.components
            .iter()
            .map(|d| d.accepting().clone())
            .collect()
    }
}

impl fmt::Display for Decomposition {
    /// `(A0 & !A1) | (A2)`; an empty union prints as `false`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "false");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|l| format!("{}A{}", if l.positive { "" } else { "!" }, l.component))
                    .collect();
                format!("({})", lits.join(" & "))
            })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}
