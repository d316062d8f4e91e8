//! Between tree languages and path languages.
//!
//! `pot(T)` collects the labeled paths of the trees in `T`; `tfp(P)` is the
//! set of trees all of whose labeled paths lie in `P`. A regular tree
//! language is DTDA-recognizable exactly when `T = tfp(pot(T))`, and Boolean
//! combinations of `k` such languages are certified by `k` path languages
//! whose induced cells never split `T`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::alphabet::Token;
use crate::bottomup::{BottomUpTa, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};
use crate::explore::explore;
use crate::topdown::{distinct_names, Dtda, DtdaCore, StateSet};
use crate::tree::Tree;
use crate::word::{Nfa, PathAutomaton};

/// Default bound on the number of path languages given to the verifier.
pub const DEFAULT_MAX_ATOMS: usize = 12;

/// Path automaton for `pot(T)`, read top-down off a bottom-up automaton.
///
/// From a tree-automaton state `q`, reading `a` moves to an intermediate
/// state for each rule `a(q1..qi) -> q` whose argument states are all
/// productive; reading direction `d` there moves to `qd`. Reading a
/// constant with a rule into `q` reaches the single accepting state.
pub fn pot_language(t: &BottomUpTa) -> PathAutomaton {
    let al = t.alphabet();
    let productive = t.productive_states();
    let n = t.num_states();
    let mut nfa = Nfa::new(al.gamma_len());
    for q in 0..n {
        nfa.add_state(t.name(q).to_string());
    }
    let end = nfa.add_state("end");
    nfa.set_accepting(end, true);
    for q in t.accepting_states() {
        nfa.set_initial(q);
    }
    let mut mid: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for s in al.symbols() {
        let read = al.token_index(Token::Sym(s));
        for (args, targets) in t.rules(s) {
            if !args.iter().all(|&q| productive[q]) {
                continue;
            }
            let from_state = if args.is_empty() {
                end
            } else {
                let key = (s.0, args.clone());
                if let Some(&m) = mid.get(&key) {
                    m
                } else {
                    let m = nfa.add_state(String::new());
                    for (d, &qd) in args.iter().enumerate() {
                        nfa.add_transition(m, al.token_index(Token::Dir(d + 1)), qd);
                    }
                    mid.insert(key, m);
                    m
                }
            };
            for &q in targets {
                nfa.add_transition(q, read, from_state);
            }
        }
    }
    let names = distinct_names(
        (0..nfa.num_states())
            .map(|i| {
                if i < n {
                    t.name(i).to_string()
                } else if i == end {
                    "end".to_string()
                } else {
                    format!("i{}", i - end - 1)
                }
            })
            .collect(),
    );
    PathAutomaton::from_nfa(al.clone(), nfa.with_names(names)).expect("letters match")
}

/// DTDA for `tfp(L(P))`: its states are those of a complete DFA for `P`;
/// a node labeled `a` in state `p` sends `p·a·d` to its `d`-th child and a
/// constant `c` puts `p·c` on the frontier; final states are the accepting
/// DFA states.
pub fn tfp_dtda(p: &PathAutomaton) -> Result<Dtda> {
    let dfa = if p.is_deterministic_complete() {
        p.clone()
    } else {
        p.to_dfa()
    };
    let al = p.alphabet();
    let nfa = dfa.nfa();
    let step = |q: usize, tok: Token| nfa.successors(q, al.token_index(tok))[0];
    let initial = *nfa.initial().iter().next().expect("DFA has a start state");
    let core = DtdaCore::from_fn(al, nfa.names().to_vec(), initial, |q, s| {
        let after = step(q, Token::Sym(s));
        match al.rank(s) {
            0 => vec![after],
            r => (1..=r).map(|d| step(after, Token::Dir(d))).collect(),
        }
    })?;
    let accepting: StateSet = (0..nfa.num_states())
        .filter(|&q| nfa.is_accepting(q))
        .collect();
    Dtda::new(core, accepting)
}

#[derive(Debug, Clone)]
pub struct RecognizabilityVerdict {
    pub recognizable: bool,
    /// Minimal DFA for `pot(T)`.
    pub path_language: PathAutomaton,
    /// DTDA for `tfp(pot(T))`.
    pub candidate: Dtda,
    /// Smallest tree in `tfp(pot(T))` but not in `T`.
    pub counterexample: Option<Tree>,
}

/// Decides whether some DTDA recognizes `L(t)`.
pub fn is_dtda_recognizable(t: &BottomUpTa) -> Result<RecognizabilityVerdict> {
    let path_language = pot_language(t).to_dfa().minimize()?;
    let candidate = tfp_dtda(&path_language)?;
    let counterexample = candidate.to_bottomup()?.separating_tree(t)?;
    Ok(RecognizabilityVerdict {
        recognizable: counterexample.is_none(),
        path_language,
        candidate,
        counterexample,
    })
}

impl RecognizabilityVerdict {
    pub fn report(&self) -> String {
        let al = self.candidate.alphabet();
        let mut s = String::new();
        if let Some(t) = &self.counterexample {
            let _ = writeln!(
                s,
                "NO: not recognizable by a deterministic top-down automaton"
            );
            let _ = writeln!(
                s,
                "counterexample: {} (all its paths occur in the language, the tree does not)",
                t.display(al)
            );
        } else {
            let _ = writeln!(s, "YES: recognizable by a deterministic top-down automaton");
            let _ = writeln!(s, "candidate states: {}", self.candidate.num_states());
        }
        let _ = write!(
            s,
            "path DFA states: {}",
            self.path_language.nfa().num_states()
        );
        s
    }

    pub fn structured(&self) -> String {
        let al = self.candidate.alphabet();
        let mut s = String::new();
        let _ = writeln!(
            s,
            "verdict: {}",
            if self.recognizable { "yes" } else { "no" }
        );
        let _ = writeln!(
            s,
            "path_dfa_states: {}",
            self.path_language.nfa().num_states()
        );
        let _ = writeln!(s, "candidate_states: {}", self.candidate.num_states());
        let _ = write!(
            s,
            "counterexample: {}",
            self.counterexample
                .as_ref()
                .map_or("-".to_string(), |t| t.to_string(al))
        );
        s
    }
}

/// A union of cells. Each clause is a sign vector: position `i` is `true`
/// for `tfp(P_i)` and `false` for its complement.
#[derive(Debug, Clone)]
pub struct DnfFormula {
    pub k: usize,
    pub clauses: BTreeSet<Vec<bool>>,
    pub atoms: Vec<PathAutomaton>,
}

impl DnfFormula {
    pub fn signs(&self, t: &Tree) -> Vec<bool> {
        self.atoms
            .iter()
            .map(|p| p.accepts_all_paths_of(t))
            .collect()
    }

    pub fn eval(&self, t: &Tree) -> bool {
        self.clauses.contains(&self.signs(t))
    }

    pub fn clause_strings(&self) -> Vec<String> {
        self.clauses.iter().map(|c| sign_string(c)).collect()
    }
}

pub fn sign_string(signs: &[bool]) -> String {
    signs.iter().map(|&b| if b { '+' } else { '-' }).collect()
}

#[derive(Debug, Clone)]
pub enum BoolCombVerdict {
    Formula(DnfFormula),
    /// Two trees with the same sign vector, one inside and one outside `T`.
    Inhomogeneous {
        cell: Vec<bool>,
        inside: Tree,
        outside: Tree,
    },
}

impl BoolCombVerdict {
    pub fn formula(&self) -> Option<&DnfFormula> {
        match self {
            BoolCombVerdict::Formula(f) => Some(f),
            BoolCombVerdict::Inhomogeneous { .. } => None,
        }
    }

    pub fn report(&self, t: &BottomUpTa) -> String {
        let al = t.alphabet();
        match self {
            BoolCombVerdict::Formula(f) => {
                let mut s = format!(
                    "YES: the language is a union of {} cell(s) over {} path language(s)\n",
                    f.clauses.len(),
                    f.k
                );
                if f.clauses.is_empty() {
                    s.push_str("formula: false");
                } else {
                    let _ = write!(s, "formula: {}", f.clause_strings().join(" | "));
                }
                s
            }
            BoolCombVerdict::Inhomogeneous {
                cell,
                inside,
                outside,
            } => format!(
                "NO: cell {} contains trees on both sides\nin language: {}\nnot in language: {}",
                sign_string(cell),
                inside.display(al),
                outside.display(al)
            ),
        }
    }

    pub fn structured(&self, t: &BottomUpTa) -> String {
        let al = t.alphabet();
        match self {
            BoolCombVerdict::Formula(f) => format!(
                "verdict: yes\nk: {}\nclauses: {}",
                f.k,
                if f.clauses.is_empty() {
                    "-".to_string()
                } else {
                    f.clause_strings().join(" ")
                }
            ),
            BoolCombVerdict::Inhomogeneous {
                cell,
                inside,
                outside,
            } => format!(
                "verdict: no\ncell: {}\ninside: {}\noutside: {}",
                sign_string(cell),
                inside.to_string(al),
                outside.to_string(al)
            ),
        }
    }
}

/// Checks whether `T` is a union of cells of `tfp(P_1), ..., tfp(P_k)`.
pub fn verify_bool_combination(t: &BottomUpTa, atoms: &[PathAutomaton]) -> Result<BoolCombVerdict> {
    verify_bool_combination_with_cap(t, atoms, DEFAULT_MAX_ATOMS)
}

pub fn verify_bool_combination_with_cap(
    t: &BottomUpTa,
    atoms: &[PathAutomaton],
    max_atoms: usize,
) -> Result<BoolCombVerdict> {
    if atoms.len() > max_atoms {
        return Err(Error::limit(
            "path languages in a Boolean combination",
            max_atoms,
        ));
    }
    let al = t.alphabet();
    for p in atoms {
        al.ensure_same(p.alphabet(), "Boolean-combination verifier")?;
    }
    let target = t.to_deterministic()?;
    let parts: Vec<BottomUpTa> = atoms
        .iter()
        .map(|p| tfp_dtda(p)?.to_bottomup())
        .collect::<Result<_>>()?;
    let mut all = vec![&target];
    all.extend(parts.iter());
    let leaf_rule = |ta: &BottomUpTa, c| ta.rules(c)[&Vec::new()][0];
    let explored = explore(
        al,
        DEFAULT_STATE_CAP,
        |c| {
            all.iter()
                .map(|ta| leaf_rule(ta, c))
                .collect::<Vec<usize>>()
        },
        |a, args: &[&Vec<usize>]| {
            all.iter()
                .enumerate()
                .map(|(j, ta)| {
                    let sub: Vec<usize> = args.iter().map(|v| v[j]).collect();
                    ta.rules(a)[&sub][0]
                })
                .collect::<Vec<usize>>()
        },
    )?;
    let product = BottomUpTa::from_explored(al, &explored, |v| target.is_accepting(v[0]));
    let smallest = product.smallest_trees();
    let key = |t: &Tree| (t.size(), t.preorder());

    // per cell: smallest tree inside and outside T
    let mut cells: BTreeMap<Vec<bool>, [Option<Tree>; 2]> = BTreeMap::new();
    for (i, v) in explored.states.iter().enumerate() {
        let signs: Vec<bool> = v[1..]
            .iter()
            .zip(&parts)
            .map(|(&q, ta)| ta.is_accepting(q))
            .collect();
        let side = usize::from(!target.is_accepting(v[0]));
        let tree = smallest[i].clone().expect("explored states are reachable");
        let slot = &mut cells.entry(signs).or_default()[side];
        if slot.as_ref().is_none_or(|old| key(&tree) < key(old)) {
            *slot = Some(tree);
        }
    }
    let split = cells
        .iter()
        .filter_map(|(cell, [inn, out])| Some((cell, inn.as_ref()?, out.as_ref()?)))
        .min_by_key(|(_, i, o)| (i.size() + o.size(), key(i), key(o)));
    if let Some((cell, inside, outside)) = split {
        return Ok(BoolCombVerdict::Inhomogeneous {
            cell: cell.clone(),
            inside: inside.clone(),
            outside: outside.clone(),
        });
    }
    let clauses = cells
        .into_iter()
        .filter(|(_, [inn, _])| inn.is_some())
        .map(|(cell, _)| cell)
        .collect();
    Ok(BoolCombVerdict::Formula(DnfFormula {
        k: atoms.len(),
        clauses,
        atoms: atoms.to_vec(),
    }))
}
