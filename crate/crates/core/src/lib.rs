//! Deterministic top-down tree automata and the Boolean closure of the
//! languages they recognize.
//!
//! The crate covers ranked trees and their labeled paths, word automata over
//! the path alphabet, bottom-up tree automata as the general regular model,
//! deterministic top-down automata with plain, set (Muller-style) and
//! frontier-check acceptance, and the bridge between tree languages and path
//! languages: the top-down recognizability test and a certificate checker for
//! Boolean combinations of top-down languages.

pub mod alphabet;
pub mod bottomup;
pub mod bridge;
pub mod builtin;
mod error;
mod explore;
pub mod format;
pub mod random;
pub mod topdown;
pub mod tree;
pub mod word;

pub use alphabet::{RankedAlphabet, Symbol, Token};
pub use bottomup::BottomUpTa;
pub use error::{Error, Result};
pub use topdown::{
    comb_refutation, CombRefutation, CombTarget, Decomposition, Dtda, DtdaCore, DtdaSet,
    FrontierCheckDtda, Literal, StateSet,
};
pub use tree::{enumerate_trees, PathWord, Position, Tree};
pub use word::{Nfa, PathAutomaton};
