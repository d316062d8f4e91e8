//! Line-oriented text formats for automata and tree lists.
//!
//! A document is a sequence of `@section` blocks. The first is `@kind`,
//! naming one of `buta`, `dtda`, `dtdaset`, `fcheck`, `pathnfa`, `pathdfa`
//! or `trees`. Content may follow the section name on the same line or on
//! the lines below it; `#` starts a comment.
//!
//! ```text
//! @kind buta
//! @alphabet f:2 a:0 b:0
//! @accept q1
//! @trans
//! a -> q0
//! f(q0,q0) -> q1
//! ```
//!
//! Top-down transitions read `q a -> q1 q2` and `q c -> q'`; path
//! transitions read `p TOKEN -> q` with directions as bare integers. A
//! frontier-check document adds `@check-states`, `@check-initial`,
//! `@check-accept` and `@check-trans` (`p q -> p'`, letters are the
//! top-down state names). `@states` is optional; without it states are
//! collected in order of first mention. Missing top-down transitions, and
//! missing transitions of a `pathdfa`, go to an added sink state.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::alphabet::{is_valid_name, RankedAlphabet};
use crate::bottomup::BottomUpTa;
use crate::error::{Error, Result};
use crate::topdown::{Dtda, DtdaCore, DtdaSet, FrontierCheckDtda, StateSet};
use crate::tree::Tree;
use crate::word::{Nfa, PathAutomaton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    BottomUp,
    Dtda,
    DtdaSet,
    FrontierCheck,
    PathNfa,
    PathDfa,
    Trees,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::BottomUp,
        Kind::Dtda,
        Kind::DtdaSet,
        Kind::FrontierCheck,
        Kind::PathNfa,
        Kind::PathDfa,
        Kind::Trees,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::BottomUp => "buta",
            Kind::Dtda => "dtda",
            Kind::DtdaSet => "dtdaset",
            Kind::FrontierCheck => "fcheck",
            Kind::PathNfa => "pathnfa",
            Kind::PathDfa => "pathdfa",
            Kind::Trees => "trees",
        }
    }

    fn sections(self) -> &'static [&'static str] {
        match self {
            Kind::BottomUp => &["alphabet", "states", "accept", "trans"],
            Kind::Dtda => &["alphabet", "states", "initial", "accept", "trans"],
            Kind::DtdaSet => &["alphabet", "states", "initial", "accept-sets", "trans"],
            Kind::FrontierCheck => &[
                "alphabet",
                "states",
                "initial",
                "trans",
                "check-states",
                "check-initial",
                "check-accept",
                "check-trans",
            ],
            Kind::PathNfa | Kind::PathDfa => &["alphabet", "states", "initial", "accept", "trans"],
            Kind::Trees => &["alphabet", "trees"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown kind `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub enum Document {
    BottomUp(BottomUpTa),
    Dtda(Dtda),
    DtdaSet(DtdaSet),
    FrontierCheck(FrontierCheckDtda),
    PathNfa(PathAutomaton),
    PathDfa(PathAutomaton),
    Trees(RankedAlphabet, Vec<Tree>),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::BottomUp(_) => Kind::BottomUp,
            Document::Dtda(_) => Kind::Dtda,
            Document::DtdaSet(_) => Kind::DtdaSet,
            Document::FrontierCheck(_) => Kind::FrontierCheck,
            Document::PathNfa(_) => Kind::PathNfa,
            Document::PathDfa(_) => Kind::PathDfa,
            Document::Trees(..) => Kind::Trees,
        }
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        match self {
            Document::BottomUp(a) => a.alphabet(),
            Document::Dtda(a) => a.alphabet(),
            Document::DtdaSet(a) => a.alphabet(),
            Document::FrontierCheck(a) => a.alphabet(),
            Document::PathNfa(a) | Document::PathDfa(a) => a.alphabet(),
            Document::Trees(al, _) => al,
        }
    }

    pub fn parse(text: &str) -> Result<Document> {
        parse_document(text)
    }

    pub fn to_text(&self) -> String {
        write_document(self)
    }
}

struct Section {
    line: usize,
    /// `(line number, content)` with comments stripped, blank lines dropped.
    entries: Vec<(usize, String)>,
}

impl Section {
    fn words(&self) -> impl Iterator<Item = (usize, &str)> {
        self.entries
            .iter()
            .flat_map(|(l, s)| s.split_whitespace().map(move |w| (*l, w)))
    }
}

fn split_sections(text: &str) -> Result<(Kind, usize, HashMap<String, Section>)> {
    let mut sections: Vec<(String, Section)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('@') {
            let (name, tail) = match rest.find(char::is_whitespace) {
                Some(p) => (&rest[..p], rest[p..].trim()),
                None => (rest, ""),
            };
            if name.is_empty() {
                return Err(Error::format(line, "empty section name"));
            }
            let mut entries = Vec::new();
            if !tail.is_empty() {
                entries.push((line, tail.to_string()));
            }
            sections.push((name.to_string(), Section { line, entries }));
        } else {
            match sections.last_mut() {
                Some((_, s)) => s.entries.push((line, content.to_string())),
                None => return Err(Error::format(line, "content before the first section")),
            }
        }
    }
    let Some((first, kind_section)) = sections.first() else {
        return Err(Error::format(1, "empty document"));
    };
    if first != "kind" {
        return Err(Error::format(
            kind_section.line,
            "the document must start with @kind",
        ));
    }
    let kind_line = kind_section.line;
    let kind_words: Vec<&str> = kind_section.words().map(|(_, w)| w).collect();
    let kind = match kind_words.as_slice() {
        [k] => Kind::from_str(k).map_err(|_| {
            Error::format(
                kind_line,
                format!(
                    "unknown kind `{k}` (expected one of {})",
                    Kind::ALL.map(Kind::as_str).join(", ")
                ),
            )
        })?,
        _ => return Err(Error::format(kind_line, "@kind takes exactly one word")),
    };
    let mut map = HashMap::new();
    for (name, section) in sections.into_iter().skip(1) {
        if !kind.sections().contains(&name.as_str()) {
            return Err(Error::format(
                section.line,
                format!("section @{name} is not allowed in a {kind} document"),
            ));
        }
        let line = section.line;
        if map.insert(name.clone(), section).is_some() {
            return Err(Error::format(
                line,
                format!("section @{name} appears twice"),
            ));
        }
    }
    if !map.contains_key("alphabet") {
        return Err(Error::format(kind_line, "missing @alphabet section"));
    }
    Ok((kind, kind_line, map))
}

/// State names in order of first mention; fixed when `@states` is given.
struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
    fixed: bool,
    what: &'static str,
}

impl Names {
    fn new(declared: Option<&Section>, what: &'static str) -> Result<Names> {
        let mut names = Names {
            names: Vec::new(),
            index: HashMap::new(),
            fixed: false,
            what,
        };
        if let Some(sec) = declared {
            for (line, w) in sec.words() {
                if names.index.contains_key(w) {
                    return Err(Error::format(line, format!("{what} `{w}` declared twice")));
                }
                names.get(w, line)?;
            }
            names.fixed = true;
        }
        Ok(names)
    }

    fn get(&mut self, name: &str, line: usize) -> Result<usize> {
        if let Some(&i) = self.index.get(name) {
            return Ok(i);
        }
        if self.fixed {
            return Err(Error::format(
                line,
                format!("undeclared {} `{name}`", self.what),
            ));
        }
        if !is_valid_name(name) {
            return Err(Error::format(
                line,
                format!("invalid {} name `{name}`", self.what),
            ));
        }
        self.index.insert(name.to_string(), self.names.len());
        self.names.push(name.to_string());
        Ok(self.names.len() - 1)
    }

    fn fresh(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        let mut i = 1;
        while self.index.contains_key(&name) {
            name = format!("{base}_{i}");
            i += 1;
        }
        self.index.insert(name.clone(), self.names.len());
        self.names.push(name);
        self.names.len() - 1
    }
}

fn split_arrow(line: usize, text: &str) -> Result<(&str, &str)> {
    let mut parts = text.split("->");
    match (parts.next(), parts.next(), parts.next()) {
        (Some(l), Some(r), None) => Ok((l.trim(), r.trim())),
        _ => Err(Error::format(line, "expected exactly one `->`")),
    }
}

fn symbol_of(al: &RankedAlphabet, name: &str, line: usize) -> Result<crate::Symbol> {
    al.lookup(name)
        .ok_or_else(|| Error::format(line, format!("unknown symbol `{name}`")))
}

pub fn parse_document(text: &str) -> Result<Document> {
    let (kind, kind_line, sections) = split_sections(text)?;
    let alphabet_text: Vec<&str> = sections["alphabet"]
        .entries
        .iter()
        .map(|(_, s)| s.as_str())
        .collect();
    let al = RankedAlphabet::parse(&alphabet_text.join("\n"))
        .map_err(|e| Error::format(sections["alphabet"].line, e.to_string()))?;
    match kind {
        Kind::BottomUp => parse_buta(&al, &sections).map(Document::BottomUp),
        Kind::Dtda => {
            let (core, mut names) = parse_core(&al, &sections, kind_line)?;
            let accepting = state_list(&sections, "accept", &mut names)?;
            Ok(Document::Dtda(Dtda::new(core, accepting)?))
        }
        Kind::DtdaSet => {
            let (core, mut names) = parse_core(&al, &sections, kind_line)?;
            let family = match sections.get("accept-sets") {
                Some(sec) => parse_family(sec, &mut names)?,
                None => Vec::new(),
            };
            Ok(Document::DtdaSet(DtdaSet::new(core, family)?))
        }
        Kind::FrontierCheck => parse_fcheck(&al, &sections, kind_line).map(Document::FrontierCheck),
        Kind::PathNfa => parse_path(&al, &sections, false).map(Document::PathNfa),
        Kind::PathDfa => parse_path(&al, &sections, true).map(Document::PathDfa),
        Kind::Trees => {
            let trees = match sections.get("trees") {
                Some(sec) => sec
                    .entries
                    .iter()
                    .map(|(l, s)| Tree::parse(s, &al).map_err(|e| Error::format(*l, e.to_string())))
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            Ok(Document::Trees(al, trees))
        }
    }
}

fn state_list(
    sections: &HashMap<String, Section>,
    name: &str,
    names: &mut Names,
) -> Result<StateSet> {
    let mut out = StateSet::new();
    if let Some(sec) = sections.get(name) {
        for (line, w) in sec.words() {
            out.insert(names.get(w, line)?);
        }
    }
    Ok(out)
}

fn parse_family(sec: &Section, names: &mut Names) -> Result<Vec<StateSet>> {
    let mut family = Vec::new();
    for (line, text) in &sec.entries {
        let mut rest = text.as_str();
        loop {
            rest = rest.trim_start();
            if rest.is_empty() {
                break;
            }
            let Some(body) = rest.strip_prefix('{') else {
                return Err(Error::format(*line, "expected `{` to start a state set"));
            };
            let Some(end) = body.find('}') else {
                return Err(Error::format(*line, "unclosed `{`"));
            };
            let mut set = StateSet::new();
            for w in body[..end].split_whitespace() {
                set.insert(names.get(w, *line)?);
            }
            family.push(set);
            rest = &body[end + 1..];
        }
    }
    Ok(family)
}

fn parse_buta(al: &RankedAlphabet, sections: &HashMap<String, Section>) -> Result<BottomUpTa> {
    let mut names = Names::new(sections.get("states"), "state")?;
    let mut rules = Vec::new();
    if let Some(sec) = sections.get("trans") {
        for (line, text) in &sec.entries {
            let line = *line;
            let (lhs, rhs) = split_arrow(line, text)?;
            let (sym, args): (&str, Vec<&str>) = match lhs.find('(') {
                None => (lhs, Vec::new()),
                Some(p) => {
                    let inner = lhs[p + 1..].strip_suffix(')').ok_or_else(|| {
                        Error::format(line, "expected `)` after the argument states")
                    })?;
                    let args = if inner.trim().is_empty() {
                        Vec::new()
                    } else {
                        inner.split(',').map(str::trim).collect()
                    };
                    (lhs[..p].trim(), args)
                }
            };
            let s = symbol_of(al, sym, line)?;
            if args.len() != al.rank(s) {
                return Err(Error::format(
                    line,
                    format!(
                        "symbol `{sym}` has rank {} but the rule lists {} state(s)",
                        al.rank(s),
                        args.len()
                    ),
                ));
            }
            let args = args
                .iter()
                .map(|a| names.get(a, line))
                .collect::<Result<Vec<_>>>()?;
            let targets: Vec<&str> = rhs.split_whitespace().collect();
            if targets.len() != 1 {
                return Err(Error::format(line, "a rule has exactly one target state"));
            }
            let target = names.get(targets[0], line)?;
            rules.push((s, args, target));
        }
    }
    let accepting = state_list(sections, "accept", &mut names)?;
    let mut ta = BottomUpTa::new(al);
    for n in &names.names {
        ta.add_state(n.clone());
    }
    for (s, args, target) in rules {
        ta.add_rule(s, args, target)?;
    }
    for q in accepting {
        ta.set_accepting(q, true);
    }
    Ok(ta)
}

/// Reads `@states`, `@initial` and `@trans` of a top-down document.
fn parse_core(
    al: &RankedAlphabet,
    sections: &HashMap<String, Section>,
    kind_line: usize,
) -> Result<(DtdaCore, Names)> {
    let mut names = Names::new(sections.get("states"), "state")?;
    let initial = match sections.get("initial") {
        Some(sec) => {
            let words: Vec<(usize, &str)> = sec.words().collect();
            match words.as_slice() {
                [(line, w)] => Some(names.get(w, *line)?),
                _ => return Err(Error::format(sec.line, "@initial takes exactly one state")),
            }
        }
        None => None,
    };
    let mut table: HashMap<(usize, usize), (usize, Vec<usize>)> = HashMap::new();
    if let Some(sec) = sections.get("trans") {
        for (line, text) in &sec.entries {
            let line = *line;
            let (lhs, rhs) = split_arrow(line, text)?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let [q, sym] = lhs.as_slice() else {
                return Err(Error::format(line, "expected `state symbol -> states`"));
            };
            let q = names.get(q, line)?;
            let s = symbol_of(al, sym, line)?;
            let targets = rhs
                .split_whitespace()
                .map(|w| names.get(w, line))
                .collect::<Result<Vec<_>>>()?;
            let expected = al.rank(s).max(1);
            if targets.len() != expected {
                return Err(Error::format(
                    line,
                    format!(
                        "transition on `{sym}` needs {expected} target state(s), found {}",
                        targets.len()
                    ),
                ));
            }
            if let Some((prev, old)) = table.insert((q, s.0), (line, targets.clone())) {
                if old != targets {
                    return Err(Error::format(
                        line,
                        format!("conflicting transition (first given on line {prev}); the automaton must be deterministic"),
                    ));
                }
            }
        }
    }
    // acceptance sections may mention states first; register them before
    // the sink is added
    for key in ["accept", "accept-sets"] {
        if let Some(sec) = sections.get(key) {
            for (line, w) in sec.words() {
                let w = w.trim_matches(|c| c == '{' || c == '}');
                for part in w.split(['{', '}']).filter(|p| !p.is_empty()) {
                    names.get(part, line)?;
                }
            }
        }
    }
    if names.names.is_empty() {
        return Err(Error::format(kind_line, "the automaton has no states"));
    }
    let initial = initial.unwrap_or(0);
    let complete =
        (0..names.names.len()).all(|q| al.symbols().all(|s| table.contains_key(&(q, s.0))));
    let sink = if complete {
        None
    } else {
        Some(names.fresh("sink"))
    };
    let core = DtdaCore::from_fn(al, names.names.clone(), initial, |q, s| {
        match table.get(&(q, s.0)) {
            Some((_, t)) => t.clone(),
            None => vec![sink.expect("incomplete table has a sink"); al.rank(s).max(1)],
        }
    })?;
    Ok((core, names))
}

fn parse_fcheck(
    al: &RankedAlphabet,
    sections: &HashMap<String, Section>,
    kind_line: usize,
) -> Result<FrontierCheckDtda> {
    let (core, mut letters) = parse_core(al, sections, kind_line)?;
    letters.fixed = true;
    let mut names = Names::new(sections.get("check-states"), "checker state")?;
    let mut initial = BTreeSet::new();
    if let Some(sec) = sections.get("check-initial") {
        for (line, w) in sec.words() {
            initial.insert(names.get(w, line)?);
        }
    }
    let mut edges = Vec::new();
    if let Some(sec) = sections.get("check-trans") {
        for (line, text) in &sec.entries {
            let (lhs, rhs) = split_arrow(*line, text)?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let rhs: Vec<&str> = rhs.split_whitespace().collect();
            let ([p, q], [to]) = (lhs.as_slice(), rhs.as_slice()) else {
                return Err(Error::format(
                    *line,
                    "expected `checker-state state -> checker-state`",
                ));
            };
            let p = names.get(p, *line)?;
            let q = letters.get(q, *line)?;
            let to = names.get(to, *line)?;
            edges.push((p, q, to));
        }
    }
    let accepting = state_list(sections, "check-accept", &mut names)?;
    if names.names.is_empty() {
        return Err(Error::format(
            kind_line,
            "the frontier checker has no states",
        ));
    }
    if initial.is_empty() {
        initial.insert(0);
    }
    let mut b = Nfa::new(core.num_states());
    for n in &names.names {
        b.add_state(n.clone());
    }
    for q in initial {
        b.set_initial(q);
    }
    for (p, q, to) in edges {
        b.add_transition(p, q, to);
    }
    for q in accepting {
        b.set_accepting(q, true);
    }
    FrontierCheckDtda::new(core, b)
}

fn parse_path(
    al: &RankedAlphabet,
    sections: &HashMap<String, Section>,
    deterministic: bool,
) -> Result<PathAutomaton> {
    let mut names = Names::new(sections.get("states"), "state")?;
    let mut initial = BTreeSet::new();
    if let Some(sec) = sections.get("initial") {
        for (line, w) in sec.words() {
            initial.insert(names.get(w, line)?);
        }
    }
    let mut edges: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    if let Some(sec) = sections.get("trans") {
        for (line, text) in &sec.entries {
            let line = *line;
            let (lhs, rhs) = split_arrow(line, text)?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let rhs: Vec<&str> = rhs.split_whitespace().collect();
            let ([p, tok], [to]) = (lhs.as_slice(), rhs.as_slice()) else {
                return Err(Error::format(line, "expected `state token -> state`"));
            };
            let p = names.get(p, line)?;
            let tok = al.parse_token(tok).ok_or_else(|| {
                Error::format(line, format!("`{tok}` is neither a symbol nor a direction"))
            })?;
            let to = names.get(to, line)?;
            let targets = edges.entry((p, al.token_index(tok))).or_default();
            targets.insert(to);
            if deterministic && targets.len() > 1 {
                return Err(Error::format(
                    line,
                    "a pathdfa has at most one successor per state and token (use @kind pathnfa)",
                ));
            }
        }
    }
    let accepting = state_list(sections, "accept", &mut names)?;
    if names.names.is_empty() {
        names.fresh("q0");
    }
    if initial.is_empty() {
        initial.insert(0);
    }
    if deterministic && initial.len() > 1 {
        return Err(Error::format(
            sections["initial"].line,
            "a pathdfa has exactly one initial state",
        ));
    }
    let letters = al.gamma_len();
    let n = names.names.len();
    let sink =
        if deterministic && (0..n).any(|q| (0..letters).any(|l| !edges.contains_key(&(q, l)))) {
            Some(names.fresh("sink"))
        } else {
            None
        };
    let mut nfa = Nfa::new(letters);
    for name in &names.names {
        nfa.add_state(name.clone());
    }
    for q in initial {
        nfa.set_initial(q);
    }
    for ((p, l), targets) in &edges {
        for &to in targets {
            nfa.add_transition(*p, *l, to);
        }
    }
    if let Some(s) = sink {
        for q in 0..nfa.num_states() {
            for l in 0..letters {
                if nfa.successors(q, l).is_empty() {
                    nfa.add_transition(q, l, s);
                }
            }
        }
    }
    for q in accepting {
        nfa.set_accepting(q, true);
    }
    PathAutomaton::from_nfa(al.clone(), nfa)
}

/// Names usable in the text formats: kept when valid and distinct,
/// otherwise `prefix0, prefix1, ...`.
fn printable(names: &[String], prefix: &str) -> Vec<String> {
    let distinct: BTreeSet<&String> = names.iter().collect();
    if distinct.len() == names.len() && names.iter().all(|n| is_valid_name(n)) {
        names.to_vec()
    } else {
        (0..names.len()).map(|i| format!("{prefix}{i}")).collect()
    }
}

fn header(out: &mut String, kind: Kind, al: &RankedAlphabet) {
    let _ = writeln!(out, "@kind {kind}");
    let _ = writeln!(out, "@alphabet {al}");
}

fn list<'a>(out: &mut String, section: &str, items: impl IntoIterator<Item = &'a str>) {
    let items: Vec<&str> = items.into_iter().collect();
    if items.is_empty() {
        let _ = writeln!(out, "@{section}");
    } else {
        let _ = writeln!(out, "@{section} {}", items.join(" "));
    }
}

pub fn write_document(doc: &Document) -> String {
    let mut out = String::new();
    header(&mut out, doc.kind(), doc.alphabet());
    match doc {
        Document::BottomUp(ta) => write_buta(&mut out, ta),
        Document::Dtda(d) => {
            let names = write_core(&mut out, d.core());
            list(
                &mut out,
                "accept",
                d.accepting().iter().map(|&q| names[q].as_str()),
            );
            write_trans(&mut out, d.core(), &names);
        }
        Document::DtdaSet(d) => {
            let names = write_core(&mut out, d.core());
            let sets: Vec<String> = d
                .family()
                .iter()
                .map(|s| {
                    let inner: Vec<&str> = s.iter().map(|&q| names[q].as_str()).collect();
                    format!("{{{}}}", inner.join(" "))
                })
                .collect();
            list(&mut out, "accept-sets", sets.iter().map(String::as_str));
            write_trans(&mut out, d.core(), &names);
        }
        Document::FrontierCheck(f) => {
            let names = write_core(&mut out, f.core());
            write_trans(&mut out, f.core(), &names);
            let b = f.checker();
            let bn = printable(b.names(), "b");
            list(&mut out, "check-states", bn.iter().map(String::as_str));
            list(
                &mut out,
                "check-initial",
                b.initial().iter().map(|&q| bn[q].as_str()),
            );
            list(
                &mut out,
                "check-accept",
                (0..b.num_states())
                    .filter(|&q| b.is_accepting(q))
                    .map(|q| bn[q].as_str()),
            );
            out.push_str("@check-trans\n");
            for p in 0..b.num_states() {
                for (l, letter) in names.iter().enumerate() {
                    for &to in b.successors(p, l) {
                        let _ = writeln!(out, "{} {} -> {}", bn[p], letter, bn[to]);
                    }
                }
            }
        }
        Document::PathNfa(p) => write_path(&mut out, p),
        Document::PathDfa(p) => {
            if p.is_deterministic_complete() {
                write_path(&mut out, p)
            } else {
                write_path(&mut out, &p.to_dfa())
            }
        }
        Document::Trees(al, trees) => {
            out.push_str("@trees\n");
            for t in trees {
                let _ = writeln!(out, "{}", t.display(al));
            }
        }
    }
    out
}

fn write_buta(out: &mut String, ta: &BottomUpTa) {
    let al = ta.alphabet();
    let names = printable(ta.names(), "q");
    list(out, "states", names.iter().map(String::as_str));
    list(
        out,
        "accept",
        ta.accepting_states().map(|q| names[q].as_str()),
    );
    out.push_str("@trans\n");
    for s in al.symbols() {
        for (args, targets) in ta.rules(s) {
            for &t in targets {
                if args.is_empty() {
                    let _ = writeln!(out, "{} -> {}", al.name(s), names[t]);
                } else {
                    let a: Vec<&str> = args.iter().map(|&q| names[q].as_str()).collect();
                    let _ = writeln!(out, "{}({}) -> {}", al.name(s), a.join(","), names[t]);
                }
            }
        }
    }
}

fn write_core(out: &mut String, core: &DtdaCore) -> Vec<String> {
    let names = printable(core.names(), "q");
    list(out, "states", names.iter().map(String::as_str));
    list(out, "initial", [names[core.initial()].as_str()]);
    names
}

fn write_trans(out: &mut String, core: &DtdaCore, names: &[String]) {
    let al = core.alphabet();
    out.push_str("@trans\n");
    for q in 0..core.num_states() {
        for s in al.symbols() {
            let t: Vec<&str> = core
                .targets(q, s)
                .iter()
                .map(|&x| names[x].as_str())
                .collect();
            let _ = writeln!(out, "{} {} -> {}", names[q], al.name(s), t.join(" "));
        }
    }
}

fn write_path(out: &mut String, p: &PathAutomaton) {
    let al = p.alphabet();
    let nfa = p.nfa();
    let names = printable(nfa.names(), "p");
    list(out, "states", names.iter().map(String::as_str));
    list(
        out,
        "initial",
        nfa.initial().iter().map(|&q| names[q].as_str()),
    );
    list(
        out,
        "accept",
        (0..nfa.num_states())
            .filter(|&q| nfa.is_accepting(q))
            .map(|q| names[q].as_str()),
    );
    out.push_str("@trans\n");
    for q in 0..nfa.num_states() {
        for (l, tok) in al.gamma().enumerate() {
            for &to in nfa.successors(q, l) {
                let _ = writeln!(out, "{} {} -> {}", names[q], al.token_name(tok), names[to]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::tree::enumerate_trees;

    const T0: &str = "\
@kind buta
@alphabet f:2 a:0 b:0
@accept acc
@trans
a -> qa
b -> qb   # leaves
f(qa,qb) -> acc
f(qb,qa) -> acc
";

    #[test]
    fn parse_buta() {
        let Document::BottomUp(ta) = parse_document(T0).unwrap() else {
            panic!()
        };
        assert_eq!(ta.names(), ["qa", "qb", "acc"]);
        let al = ta.alphabet().clone();
        let got: Vec<String> = enumerate_trees(&al, 5)
            .into_iter()
            .filter(|t| ta.accepts(t).unwrap())
            .map(|t| t.to_string(&al))
            .collect();
        assert_eq!(got, ["f(a,b)", "f(b,a)"]);
    }

    #[test]
    fn buta_round_trip() {
        let doc = parse_document(T0).unwrap();
        let text = doc.to_text();
        let again = parse_document(&text).unwrap();
        assert_eq!(again.to_text(), text);
        let (Document::BottomUp(a), Document::BottomUp(b)) = (doc, again) else {
            panic!()
        };
        assert!(a.equivalent(&b).unwrap());
    }

    #[test]
    fn partial_dtda_gets_a_sink() {
        let text = "@kind dtda\n@alphabet f:2 a:0 b:0\n@initial q\n@accept ok\n@trans\nq f -> q q\nq a -> ok\n";
        let Document::Dtda(d) = parse_document(text).unwrap() else {
            panic!()
        };
        assert_eq!(d.core().names(), ["q", "ok", "sink"]);
        let al = d.alphabet().clone();
        assert!(d.accepts(&Tree::parse("f(a,a)", &al).unwrap()).unwrap());
        assert!(!d.accepts(&Tree::parse("f(a,b)", &al).unwrap()).unwrap());
        let again = parse_document(&Document::Dtda(d.clone()).to_text()).unwrap();
        let Document::Dtda(e) = again else { panic!() };
        assert_eq!(d, e);
    }

    #[test]
    fn dtdaset_family_is_canonical() {
        let text = "@kind dtdaset\n@alphabet f:2 a:0\n@states q r\n@accept-sets {r q} {} {q r}\n@trans\nq f -> q r\nq a -> q\nr f -> r r\nr a -> r\n";
        let Document::DtdaSet(d) = parse_document(text).unwrap() else {
            panic!()
        };
        assert_eq!(d.family().len(), 2);
        let out = Document::DtdaSet(d).to_text();
        assert!(out.contains("@accept-sets {} {q r}\n"), "{out}");
    }

    #[test]
    fn fcheck_round_trip() {
        let al = builtin::comb_alphabet();
        let f = builtin::t2_frontier_check(&al).unwrap();
        let text = Document::FrontierCheck(f.clone()).to_text();
        let Document::FrontierCheck(g) = parse_document(&text).unwrap() else {
            panic!()
        };
        assert_eq!(f, g);
    }

    #[test]
    fn pathdfa_is_completed() {
        let text = "@kind pathdfa\n@alphabet f:2 a:0\n@initial s\n@accept e\n@trans\ns f -> x\nx 1 -> y\ny a -> e\n";
        let Document::PathDfa(p) = parse_document(text).unwrap() else {
            panic!()
        };
        assert!(p.is_deterministic_complete());
        assert_eq!(p.nfa().num_states(), 5);
        let al = p.alphabet().clone();
        let words: Vec<String> = p
            .words_up_to(5)
            .iter()
            .map(|w| p.word_to_string(w))
            .collect();
        assert_eq!(words, ["f 1 a"]);
        assert!(al.lookup("f").is_some());
    }

    #[test]
    fn pathdfa_rejects_nondeterminism() {
        let text = "@kind pathdfa\n@alphabet a:0\n@trans\ns a -> x\ns a -> y\n";
        assert!(matches!(
            parse_document(text),
            Err(Error::Format { line: 5, .. })
        ));
        let nfa = text.replace("pathdfa", "pathnfa");
        assert!(matches!(parse_document(&nfa), Ok(Document::PathNfa(_))));
    }

    #[test]
    fn trees_document() {
        let text = "@kind trees\n@alphabet f:2 a:0 b:0\n@trees\nf(a,b)\nf(b, a)\n";
        let Document::Trees(al, trees) = parse_document(text).unwrap() else {
            panic!()
        };
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[1].to_string(&al), "f(b,a)");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("", 1),
            ("@alphabet a:0\n", 1),
            ("@kind nope\n@alphabet a:0\n", 1),
            ("@kind buta\n@alphabet f:2 a:0\n@trans\nf(q) -> q\n", 4),
            ("@kind buta\n@alphabet a:0\n@trans\nz -> q\n", 4),
            ("@kind dtda\n@alphabet a:0\n@trans\nq a -> q -> q\n", 4),
            ("@kind dtda\n@alphabet a:0\n@trans\nq a -> q\nq a -> r\n", 5),
            (
                "@kind dtda\n@alphabet a:0\n@states q\n@trans\nq a -> r\n",
                5,
            ),
            ("@kind dtda\n@alphabet a:0\n@bogus\n", 3),
            ("@kind buta\n@kind buta\n@alphabet a:0\n", 2),
            ("junk\n@kind buta\n", 1),
        ];
        for (text, line) in cases {
            match parse_document(text) {
                Err(Error::Format { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
