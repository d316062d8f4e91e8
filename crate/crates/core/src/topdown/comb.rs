//! Pumping right combs against set-accepting DTDAs.
//!
//! A right comb over `{a:2, c:0, d:0, e:0}` is a spine of `a` nodes going
//! right, each with a leaf as left child; the last `a` has two leaf children.
//! The states a DTDA assigns along the spine are ultimately periodic, so
//! moving a leaf by one period leaves the set of outer-frontier states
//! unchanged while changing membership in the target language.

use std::fmt;

use super::{DtdaSet, StateSet};
use crate::alphabet::{RankedAlphabet, Symbol};
use crate::builtin;
use crate::error::{Error, Result};
use crate::tree::Tree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CombTarget {
    /// `d` occurs exactly once.
    T1,
    /// Some `d` occurs left of some `e`.
    T2,
}

impl CombTarget {
    pub fn name(self) -> &'static str {
        match self {
            CombTarget::T1 => "t1",
            CombTarget::T2 => "t2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CombTarget::T1 => "d occurs exactly once",
            CombTarget::T2 => "d occurs left of e",
        }
    }
}

impl std::str::FromStr for CombTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(CombTarget::T1),
            "t2" => Ok(CombTarget::T2),
            other => Err(Error::Precondition(format!(
                "unknown comb target `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CombRefutation {
    pub target: CombTarget,
    /// Index of the first spine state that reappears.
    pub k: usize,
    /// Distance to its first reappearance.
    pub p: usize,
    /// Spine states, one per `a`, for the comb with `k + 3p` letters `a`.
    pub spine: Vec<usize>,
    /// In the target language.
    pub t: Tree,
    /// Outside the target language.
    pub t_prime: Tree,
    pub frontier_t: StateSet,
    pub frontier_t_prime: StateSet,
    /// Whether the automaton accepts both trees (otherwise neither).
    pub accepted: bool,
}

impl CombRefutation {
    pub fn num_a(&self) -> usize {
        self.k + 3 * self.p
    }
}

/// Builds the pair of combs that `a` cannot tell apart although exactly one
/// of them lies in `target`.
pub fn comb_refutation(a: &DtdaSet, target: CombTarget) -> Result<CombRefutation> {
    let al = a.alphabet();
    let sym = |name: &str| -> Result<Symbol> {
        al.lookup(name)
            .ok_or_else(|| Error::Precondition(format!("comb alphabet needs symbol `{name}`")))
    };
    builtin::check_comb_alphabet(al)?;
    let (sa, sc, sd, se) = (sym("a")?, sym("c")?, sym("d")?, sym("e")?);
    let core = a.core();

    let mut first_seen = vec![usize::MAX; core.num_states()];
    let mut spine = vec![core.initial()];
    let (k, p) = loop {
        let m = spine.len() - 1;
        let s = spine[m];
        if first_seen[s] != usize::MAX {
            break (first_seen[s], m - first_seen[s]);
        }
        first_seen[s] = m;
        spine.push(core.targets(s, sa)[1]);
    };
    let n = k + 3 * p;
    while spine.len() < n {
        let s = *spine.last().unwrap();
        spine.push(core.targets(s, sa)[1]);
    }
    spine.truncate(n);

    let mut left_t = vec![sc; n];
    let mut left_tp = vec![sc; n];
    match target {
        CombTarget::T1 => {
            left_t[k] = sd;
            left_tp[k] = sd;
            left_tp[k + p] = sd;
        }
        CombTarget::T2 => {
            left_t[k] = sd;
            left_t[k + p] = se;
            left_tp[k + p] = se;
            left_tp[k + 2 * p] = sd;
        }
    }
    let t = comb(sa, sc, &left_t);
    let t_prime = comb(sa, sc, &left_tp);

    let lang = builtin::target_automaton(al, target)?;
    if !lang.accepts(&t)? || lang.accepts(&t_prime)? {
        return Err(Error::Internal(
            "comb pair does not separate the target".into(),
        ));
    }
    let (acc, frontier_t) = a.run(&t)?;
    let (acc_prime, frontier_t_prime) = a.run(&t_prime)?;
    if frontier_t != frontier_t_prime || acc != acc_prime {
        return Err(Error::Internal(
            "comb pair reached different frontier sets".into(),
        ));
    }
    Ok(CombRefutation {
        target,
        k,
        p,
        spine,
        t,
        t_prime,
        frontier_t,
        frontier_t_prime,
        accepted: acc,
    })
}

/// Right comb with `left.len()` letters `a`; `left[i]` is the left leaf of
/// the `i`-th `a`, and the last `a` also gets `c` on the right.
pub(crate) fn comb(a: Symbol, c: Symbol, left: &[Symbol]) -> Tree {
    let mut t = Tree::new_unchecked(c, Vec::new());
    for &l in left.iter().rev() {
        t = Tree::new_unchecked(a, vec![Tree::new_unchecked(l, Vec::new()), t]);
    }
    t
}

/// Display adapter for a refutation; needs the alphabet for tree output.
pub struct RefutationDisplay<'a> {
    pub refutation: &'a CombRefutation,
    pub automaton: &'a DtdaSet,
}

impl fmt::Display for RefutationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.refutation;
        let al: &RankedAlphabet = self.automaton.alphabet();
        writeln!(
            f,
            "target: {} ({})",
            r.target.name(),
            r.target.description()
        )?;
        writeln!(f, "k: {}", r.k)?;
        writeln!(f, "p: {}", r.p)?;
        writeln!(f, "letters a: {}", r.num_a())?;
        writeln!(f, "t (in target): {}", r.t.display(al))?;
        writeln!(f, "t' (not in target): {}", r.t_prime.display(al))?;
        writeln!(
            f,
            "frontier set of t: {}",
            self.automaton.format_set(&r.frontier_t)
        )?;
        writeln!(
            f,
            "frontier set of t': {}",
            self.automaton.format_set(&r.frontier_t_prime)
        )?;
        write!(
            f,
            "automaton {} both trees",
            if r.accepted { "accepts" } else { "rejects" }
        )
    }
}
