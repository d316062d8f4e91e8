//! Ranked alphabets and the path alphabet derived from them.
//!
//! A ranked alphabet fixes, for every symbol, the number of children a node
//! carrying it must have. Labeled paths through trees are words over the
//! path alphabet, which adds the child directions `1..=r` (with `r` the
//! maximal rank) to the symbols.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol in its [`RankedAlphabet`], in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub usize);

/// A letter of the path alphabet: either a tree symbol or a child direction.
///
/// The two kinds are kept apart by tag, so the direction `1` never collides
/// with a symbol name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    Sym(Symbol),
    /// 1-based child direction.
    Dir(usize),
}

/// A finite set of symbols with fixed ranks.
#[derive(Debug, Clone)]
pub struct RankedAlphabet {
    symbols: Vec<(String, usize)>,
    index: HashMap<String, usize>,
    max_rank: usize,
}

const RESERVED: &[char] = &['(', ')', ',', '{', '}', ':', '#', '@'];

/// Returns `true` if `name` may be used as a symbol or state name in the text
/// formats.
pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "->"
        && !name
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || RESERVED.contains(&c))
}

impl RankedAlphabet {
    pub fn new<S, I>(symbols: I) -> Result<Self>
    where
        S: Into<String>,
        I: IntoIterator<Item = (S, usize)>,
    {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for (name, rank) in symbols {
            let name = name.into();
            if !is_valid_name(&name) {
                return Err(Error::InvalidAlphabet(format!(
                    "`{name}` is not a valid symbol name"
                )));
            }
            if name.chars().all(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol `{name}` consists only of digits and would be confused with a direction"
                )));
            }
            if index.insert(name.clone(), list.len()).is_some() {
                return Err(Error::InvalidAlphabet(format!(
                    "symbol `{name}` declared twice"
                )));
            }
            list.push((name, rank));
        }
        let max_rank = list.iter().map(|&(_, r)| r).max().unwrap_or(0);
        Ok(RankedAlphabet {
            symbols: list,
            index,
            max_rank,
        })
    }

    /// Parses the alphabet file format: `name:rank` entries separated by
    /// whitespace or newlines, `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line == "@alphabet" {
                continue;
            }
            for item in line.split_whitespace() {
                entries.push(parse_entry(item, lineno + 1)?);
            }
        }
        Self::new(entries)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    pub fn symbols(&self) -> impl ExactSizeIterator<Item = Symbol> + '_ {
        (0..self.symbols.len()).map(Symbol)
    }

    /// Symbols of the given rank, in declaration order.
    pub fn symbols_of_rank(&self, rank: usize) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .filter(move |(_, (_, r))| *r == rank)
            .map(|(i, _)| Symbol(i))
    }

    pub fn constants(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols_of_rank(0)
    }

    pub fn has_constants(&self) -> bool {
        self.constants().next().is_some()
    }

    pub fn rank(&self, s: Symbol) -> usize {
        self.symbols[s.0].1
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.symbols[s.0].0
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied().map(Symbol)
    }

    /// Number of letters of the path alphabet.
    pub fn gamma_len(&self) -> usize {
        self.symbols.len() + self.max_rank
    }

    /// Position of a token in the fixed path-alphabet order: symbols in
    /// declaration order, then directions ascending.
    pub fn token_index(&self, t: Token) -> usize {
        match t {
            Token::Sym(s) => s.0,
            Token::Dir(d) => self.symbols.len() + d - 1,
        }
    }

    pub fn token_at(&self, i: usize) -> Token {
        if i < self.symbols.len() {
            Token::Sym(Symbol(i))
        } else {
            Token::Dir(i - self.symbols.len() + 1)
        }
    }

    pub fn gamma(&self) -> impl Iterator<Item = Token> + '_ {
        (0..self.gamma_len()).map(|i| self.token_at(i))
    }

    /// Parses a single path token: bare integers are directions, anything
    /// else must be a declared symbol.
    pub fn parse_token(&self, text: &str) -> Option<Token> {
        if !text.is_empty() && text.chars().all(|c| c.is_ascii_digit()) {
            let d: usize = text.parse().ok()?;
            (1..=self.max_rank).contains(&d).then_some(Token::Dir(d))
        } else {
            self.lookup(text).map(Token::Sym)
        }
    }

    pub fn token_name(&self, t: Token) -> String {
        match t {
            Token::Sym(s) => self.name(s).to_string(),
            Token::Dir(d) => d.to_string(),
        }
    }

    pub(crate) fn ensure_same(&self, other: &RankedAlphabet, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{what}: `{self}` vs `{other}`"
            )))
        }
    }
}

fn parse_entry(item: &str, line: usize) -> Result<(String, usize)> {
    let (name, rank) = item
        .rsplit_once(':')
        .ok_or_else(|| Error::format(line, format!("expected `name:rank`, found `{item}`")))?;
    let rank = rank
        .parse()
        .map_err(|_| Error::format(line, format!("invalid rank in `{item}`")))?;
    Ok((name.to_string(), rank))
}

impl PartialEq for RankedAlphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for RankedAlphabet {}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, rank)) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{name}:{rank}")?;
        }
        Ok(())
    }
}
