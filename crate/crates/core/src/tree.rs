//! Finite ranked trees, node addressing and labeled paths.

use std::collections::BTreeMap;
use std::fmt;

use crate::alphabet::{RankedAlphabet, Symbol, Token};
use crate::error::{Error, Result};

/// A finite ranked tree `a(t1, ..., ti)`.
///
/// Trees do not carry their alphabet; every constructor that takes an
/// alphabet checks that the number of children matches the rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    label: Symbol,
    children: Vec<Tree>,
}

/// A node address: the sequence of 1-based child directions from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, d: usize) -> Self {
        let mut v = self.0.clone();
        v.push(d);
        Position(v)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl Tree {
    /// Builds a node, checking the label's rank against the child count.
    pub fn node(alphabet: &RankedAlphabet, label: Symbol, children: Vec<Tree>) -> Result<Tree> {
        let expected = alphabet.rank(label);
        if expected != children.len() {
            return Err(Error::ArityMismatch {
                symbol: alphabet.name(label).to_string(),
                expected,
                found: children.len(),
                pos: 0,
            });
        }
        Ok(Tree { label, children })
    }

    /// Builds a node without checking ranks. Callers guarantee consistency.
    pub(crate) fn new_unchecked(label: Symbol, children: Vec<Tree>) -> Tree {
        Tree { label, children }
    }

    pub fn leaf(alphabet: &RankedAlphabet, label: Symbol) -> Result<Tree> {
        Self::node(alphabet, label, Vec::new())
    }

    /// Parses term syntax: `tree := sym | sym '(' tree (',' tree)* ')'`.
    pub fn parse(text: &str, alphabet: &RankedAlphabet) -> Result<Tree> {
        let mut p = TermParser {
            src: text,
            pos: 0,
            alphabet,
        };
        let t = p.tree()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(Error::Syntax {
                pos: p.pos,
                msg: "trailing input after tree".into(),
            });
        }
        Ok(t)
    }

    pub fn label(&self) -> Symbol {
        self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        self.children
            .iter()
            .map(Tree::height)
            .max()
            .map_or(0, |h| h + 1)
    }

    /// Labels in preorder; this sequence determines a ranked tree uniquely.
    pub fn preorder(&self) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(self.size());
        self.preorder_into(&mut out);
        out
    }

    fn preorder_into(&self, out: &mut Vec<Symbol>) {
        out.push(self.label);
        for c in &self.children {
            c.preorder_into(out);
        }
    }

    /// Checks that every node has as many children as its label's rank.
    pub fn is_consistent(&self, alphabet: &RankedAlphabet) -> bool {
        self.label.0 < alphabet.len()
            && alphabet.rank(self.label) == self.children.len()
            && self.children.iter().all(|c| c.is_consistent(alphabet))
    }

    pub fn subtree(&self, pos: &Position) -> Option<&Tree> {
        let mut t = self;
        for &d in &pos.0 {
            t = t.children.get(d.checked_sub(1)?)?;
        }
        Some(t)
    }

    /// `dom(t)` in preorder.
    pub fn domain(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk(&mut Position::root(), &mut |p, _| out.push(p.clone()));
        out
    }

    /// `fr(t)`: leaf positions, left to right.
    pub fn frontier(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk(&mut Position::root(), &mut |p, t| {
            if t.is_leaf() {
                out.push(p.clone())
            }
        });
        out
    }

    /// `fr+(t) = { u1 | u ∈ fr(t) }`, left to right.
    pub fn outer_frontier(&self) -> Vec<Position> {
        self.frontier().into_iter().map(|p| p.child(1)).collect()
    }

    /// `dom+(t) = dom(t) ∪ fr+(t)`.
    pub fn extended_domain(&self) -> Vec<Position> {
        let mut out = self.domain();
        out.extend(self.outer_frontier());
        out
    }

    fn walk(&self, pos: &mut Position, f: &mut impl FnMut(&Position, &Tree)) {
        f(pos, self);
        for (i, c) in self.children.iter().enumerate() {
            pos.0.push(i + 1);
            c.walk(pos, f);
            pos.0.pop();
        }
    }

    /// The labeled paths of the tree, one per leaf, left to right.
    pub fn paths(&self) -> Vec<PathWord> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.paths_into(&mut prefix, &mut out);
        out
    }

    fn paths_into(&self, prefix: &mut Vec<Token>, out: &mut Vec<PathWord>) {
        prefix.push(Token::Sym(self.label));
        if self.children.is_empty() {
            out.push(PathWord(prefix.clone()));
        }
        for (i, c) in self.children.iter().enumerate() {
            prefix.push(Token::Dir(i + 1));
            c.paths_into(prefix, out);
            prefix.pop();
        }
        prefix.pop();
    }

    /// Follows the directions of `path` and checks that the labels read
    /// match and that it ends at a leaf.
    pub fn has_path(&self, path: &PathWord) -> bool {
        let mut t = self;
        let mut tokens = path.0.iter();
        loop {
            match tokens.next() {
                Some(Token::Sym(s)) if *s == t.label => {}
                _ => return false,
            }
            match tokens.next() {
                None => return t.is_leaf(),
                Some(Token::Dir(d)) => match d.checked_sub(1).and_then(|i| t.children.get(i)) {
                    Some(c) => t = c,
                    None => return false,
                },
                Some(Token::Sym(_)) => return false,
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> TreeDisplay<'a> {
        TreeDisplay {
            tree: self,
            alphabet,
        }
    }

    pub fn to_string(&self, alphabet: &RankedAlphabet) -> String {
        self.display(alphabet).to_string()
    }
}

pub struct TreeDisplay<'a> {
    tree: &'a Tree,
    alphabet: &'a RankedAlphabet,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.alphabet.name(self.tree.label))?;
        if !self.tree.children.is_empty() {
            f.write_str("(")?;
            for (i, c) in self.tree.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", c.display(self.alphabet))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
    alphabet: &'a RankedAlphabet,
}

impl TermParser<'_> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn tree(&mut self) -> Result<Tree> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || "(),{}:#@".contains(c))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(Error::Syntax {
                pos: start,
                msg: match self.peek() {
                    Some(c) => format!("expected a symbol, found `{c}`"),
                    None => "expected a symbol, found end of input".into(),
                },
            });
        }
        let name = &rest[..len];
        self.pos += len;
        let label = self
            .alphabet
            .lookup(name)
            .ok_or_else(|| Error::UnknownSymbol {
                name: name.to_string(),
                pos: start,
            })?;
        self.skip_ws();
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.tree()?);
                self.skip_ws();
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    other => {
                        return Err(Error::Syntax {
                            pos: self.pos,
                            msg: match other {
                                Some(c) => format!("expected `,` or `)`, found `{c}`"),
                                None => "unclosed `(`".into(),
                            },
                        })
                    }
                }
            }
        }
        let expected = self.alphabet.rank(label);
        if expected != children.len() {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected,
                found: children.len(),
                pos: start,
            });
        }
        Ok(Tree { label, children })
    }
}

/// A labeled path `a1 d1 a2 d2 ... an dn a(n+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord(pub Vec<Token>);

impl PathWord {
    /// Checks label/direction alternation, direction bounds and the rank-0
    /// final label.
    pub fn is_valid(&self, alphabet: &RankedAlphabet) -> bool {
        let n = self.0.len();
        if n.is_multiple_of(2) {
            return false;
        }
        let mut prev_rank = 0;
        for (i, tok) in self.0.iter().enumerate() {
            match (i % 2, tok) {
                (0, Token::Sym(s)) if s.0 < alphabet.len() => prev_rank = alphabet.rank(*s),
                (1, Token::Dir(d)) if (1..=prev_rank).contains(d) => {}
                _ => return false,
            }
        }
        prev_rank == 0
    }

    /// Parses whitespace-separated tokens (`a 1 b 2 d`), or the compact form
    /// `a1b2d` when every symbol name is a single character.
    pub fn parse(text: &str, alphabet: &RankedAlphabet) -> Result<PathWord> {
        let text = text.trim();
        let mut tokens = Vec::new();
        if text.contains(char::is_whitespace) || text.is_empty() {
            let mut offset = 0;
            for part in text.split_whitespace() {
                let pos = text[offset..].find(part).map_or(offset, |p| p + offset);
                offset = pos + part.len();
                tokens.push(parse_path_token(part, pos, alphabet)?);
            }
        } else if let Some(tok) = alphabet.parse_token(text) {
            tokens.push(tok);
        } else {
            let compact_ok = alphabet
                .symbols()
                .all(|s| alphabet.name(s).chars().count() == 1)
                && alphabet.max_rank() <= 9;
            if !compact_ok {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "compact path syntax needs single-character symbols; separate tokens by spaces".into(),
                });
            }
            for (pos, c) in text.char_indices() {
                tokens.push(parse_path_token(&c.to_string(), pos, alphabet)?);
            }
        }
        let word = PathWord(tokens);
        if !word.is_valid(alphabet) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("`{text}` is not a labeled path"),
            });
        }
        Ok(word)
    }

    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> String {
        self.0
            .iter()
            .map(|&t| alphabet.token_name(t))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The word as path-alphabet letter indices.
    pub fn letters(&self, alphabet: &RankedAlphabet) -> Vec<usize> {
        self.0.iter().map(|&t| alphabet.token_index(t)).collect()
    }
}

fn parse_path_token(part: &str, pos: usize, alphabet: &RankedAlphabet) -> Result<Token> {
    alphabet.parse_token(part).ok_or_else(|| {
        if part.chars().all(|c| c.is_ascii_digit()) {
            Error::Syntax {
                pos,
                msg: format!("direction {part} out of range"),
            }
        } else {
            Error::UnknownSymbol {
                name: part.to_string(),
                pos,
            }
        }
    })
}

/// All trees with at most `max_nodes` nodes, ordered by node count and then
/// lexicographically by preorder label sequence.
pub fn enumerate_trees(alphabet: &RankedAlphabet, max_nodes: usize) -> Vec<Tree> {
    let by_size = trees_by_size(alphabet, max_nodes);
    by_size.into_iter().flatten().collect()
}

/// `result[n]` holds the trees with exactly `n` nodes, each bucket in
/// preorder-lexicographic order.
pub fn trees_by_size(alphabet: &RankedAlphabet, max_nodes: usize) -> Vec<Vec<Tree>> {
    let mut by_size: Vec<Vec<Tree>> = vec![Vec::new(); max_nodes + 1];
    for n in 1..=max_nodes {
        let mut bucket = Vec::new();
        for s in alphabet.symbols() {
            let rank = alphabet.rank(s);
            if rank == 0 {
                if n == 1 {
                    bucket.push(Tree::new_unchecked(s, Vec::new()));
                }
                continue;
            }
            if n < 1 + rank {
                continue;
            }
            for sizes in compositions(n - 1, rank) {
                let mut partial: Vec<Vec<Tree>> = vec![Vec::new()];
                for &k in &sizes {
                    let mut next = Vec::new();
                    for prefix in &partial {
                        for c in &by_size[k] {
                            let mut p = prefix.clone();
                            p.push(c.clone());
                            next.push(p);
                        }
                    }
                    partial = next;
                }
                bucket.extend(partial.into_iter().map(|ch| Tree::new_unchecked(s, ch)));
            }
        }
        bucket.sort_by_cached_key(Tree::preorder);
        by_size[n] = bucket;
    }
    by_size
}

/// Ordered ways to write `total` as a sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Histogram of node counts.
pub fn count_by_size(trees: &[Tree]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for t in trees {
        *m.entry(t.size()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abcd() -> RankedAlphabet {
        RankedAlphabet::new([("a", 2), ("b", 2), ("c", 0), ("d", 0)]).unwrap()
    }

    fn fab() -> RankedAlphabet {
        RankedAlphabet::new([("f", 2), ("a", 0), ("b", 0)]).unwrap()
    }

    fn pos(s: &str) -> Position {
        Position(
            s.chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect(),
        )
    }

    #[test]
    fn parse_example_tree() {
        let al = abcd();
        let t = Tree::parse("a(b(c,d),c)", &al).unwrap();
        let dom: Vec<_> = t.domain();
        assert_eq!(dom, vec![pos(""), pos("1"), pos("11"), pos("12"), pos("2")]);
        assert_eq!(t.frontier(), vec![pos("11"), pos("12"), pos("2")]);
        assert_eq!(t.outer_frontier(), vec![pos("111"), pos("121"), pos("21")]);
        assert_eq!(t.to_string(&al), "a(b(c,d),c)");
        assert_eq!(t.size(), 5);
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn parse_tolerates_whitespace() {
        let al = abcd();
        let t = Tree::parse("  a ( b(c , d) ,c ) ", &al).unwrap();
        assert_eq!(t.to_string(&al), "a(b(c,d),c)");
    }

    #[test]
    fn parse_constant_and_t0_member() {
        let al = abcd();
        let c = Tree::parse("c", &al).unwrap();
        assert_eq!(c.domain(), vec![Position::root()]);
        let al = fab();
        let t = Tree::parse("f(a,b)", &al).unwrap();
        assert_eq!(t.size(), 3);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let al = fab();
        assert_eq!(
            Tree::parse("f(a,x)", &al),
            Err(Error::UnknownSymbol {
                name: "x".into(),
                pos: 4
            })
        );
        assert!(matches!(
            Tree::parse("f(a)", &al),
            Err(Error::ArityMismatch {
                expected: 2,
                found: 1,
                pos: 0,
                ..
            })
        ));
        assert!(matches!(
            Tree::parse("a(b)", &al),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            Tree::parse("f(a,b", &al),
            Err(Error::Syntax { pos: 5, .. })
        ));
        assert!(matches!(
            Tree::parse("f(a,b) b", &al),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            Tree::parse("", &al),
            Err(Error::Syntax { pos: 0, .. })
        ));
    }

    #[test]
    fn paths_of_example_tree() {
        let al = abcd();
        let t = Tree::parse("a(b(c,d),c)", &al).unwrap();
        let paths: Vec<_> = t.paths().iter().map(|p| p.display(&al)).collect();
        assert_eq!(paths, ["a 1 b 1 c", "a 1 b 2 d", "a 2 c"]);
        let c = Tree::parse("c", &al).unwrap();
        assert_eq!(c.paths().len(), 1);
        assert_eq!(c.paths()[0].display(&al), "c");
        let al = fab();
        let t = Tree::parse("f(a,b)", &al).unwrap();
        let paths: Vec<_> = t.paths().iter().map(|p| p.display(&al)).collect();
        assert_eq!(paths, ["f 1 a", "f 2 b"]);
    }

    #[test]
    fn path_word_syntax() {
        let al = abcd();
        let spaced = PathWord::parse("a 1 b 2 d", &al).unwrap();
        let compact = PathWord::parse("a1b2d", &al).unwrap();
        assert_eq!(spaced, compact);
        assert!(PathWord::parse("a1b", &al).is_err());
        assert!(PathWord::parse("a3c", &al).is_err());
        assert!(PathWord::parse("c1c", &al).is_err());
        assert_eq!(PathWord::parse("c", &al).unwrap().0.len(), 1);

        let long = RankedAlphabet::new([("node", 2), ("x", 0)]).unwrap();
        assert!(PathWord::parse("node 2 x", &long).is_ok());
        assert!(PathWord::parse("node2x", &long).is_err());
    }

    #[test]
    fn enumerate_small() {
        let al = fab();
        let show = |n| {
            enumerate_trees(&al, n)
                .iter()
                .map(|t| t.to_string(&al))
                .collect::<Vec<_>>()
        };
        assert_eq!(show(1), ["a", "b"]);
        assert_eq!(show(3), ["a", "b", "f(a,a)", "f(a,b)", "f(b,a)", "f(b,b)"]);
        let only_binary = RankedAlphabet::new([("f", 2)]).unwrap();
        assert!(enumerate_trees(&only_binary, 5).is_empty());
    }

    #[test]
    fn enumerate_counts_match_catalan() {
        // binary trees with n inner nodes: Catalan(n) shapes, 2^(n+1) leaf labelings
        let al = fab();
        let counts = count_by_size(&enumerate_trees(&al, 9));
        assert_eq!(counts[&1], 2);
        assert_eq!(counts[&3], 4);
        assert_eq!(counts[&5], 2 * 8);
        assert_eq!(counts[&7], 5 * 16);
        assert_eq!(counts[&9], 14 * 32);
        assert_eq!(counts.get(&2), None);
    }

    #[test]
    fn compositions_small() {
        assert_eq!(compositions(3, 2), vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(compositions(1, 2), Vec::<Vec<usize>>::new());
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
    }
}
