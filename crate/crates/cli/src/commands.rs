use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use dtda::bridge::{self, BoolCombVerdict};
use dtda::format::Document;
use dtda::topdown::{format_state_set, RefutationDisplay};
use dtda::{
    random, BottomUpTa, CombTarget, Dtda, DtdaSet, PathAutomaton, PathWord, RankedAlphabet, Tree,
};

use crate::{Cli, Command, ConvertArgs, EnumerateArgs, OutKind, Question, Target};

/// `Ok(true)` for ACCEPT / YES, `Ok(false)` for REJECT / NO.
pub fn dispatch(cli: &Cli) -> Result<bool> {
    let s = cli.structured;
    match &cli.command {
        Command::Run { file, input } => run(&load(file)?, input, s),
        Command::Decide { question } => decide(question, s),
        Command::Convert(args) => convert(args).map(|_| true),
        Command::Refute { file, target } => refute(file, *target, s).map(|_| true),
        Command::Enumerate(args) => enumerate(args, s).map(|_| true),
    }
}

fn load(path: &Path) -> Result<Document> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Document::parse(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn parse_tree(input: &str, al: &RankedAlphabet) -> Result<Tree> {
    Tree::parse(input, al).with_context(|| format!("cannot parse tree `{input}`"))
}

fn verdict(ok: bool, yes: &str, no: &str) -> String {
    if ok { yes } else { no }.to_string()
}

fn run(doc: &Document, input: &str, structured: bool) -> Result<bool> {
    let (ok, detail_key, detail): (bool, &str, String) = match doc {
        Document::BottomUp(ta) => {
            let t = parse_tree(input, ta.alphabet())?;
            let states = ta.states_of(&t);
            let names = states
                .iter()
                .map(|&q| ta.name(q))
                .collect::<Vec<_>>()
                .join(" ");
            (ta.accepts(&t)?, "states", format!("{{{names}}}"))
        }
        Document::Dtda(d) => {
            let t = parse_tree(input, d.alphabet())?;
            let reached = d.core().frontier_set(&t)?;
            (
                d.accepts(&t)?,
                "reached",
                format_state_set(d.core(), &reached),
            )
        }
        Document::DtdaSet(d) => {
            let t = parse_tree(input, d.alphabet())?;
            let (ok, reached) = d.run(&t)?;
            (ok, "reached", d.format_set(&reached))
        }
        Document::FrontierCheck(f) => {
            let t = parse_tree(input, f.alphabet())?;
            let word = f.core().frontier_word(&t)?;
            let names: Vec<&str> = word.iter().map(|&q| f.core().name(q)).collect();
            (f.accepts(&t)?, "frontier", names.join(" "))
        }
        Document::PathNfa(p) | Document::PathDfa(p) => {
            let w = PathWord::parse(input, p.alphabet())
                .with_context(|| format!("cannot parse path word `{input}`"))?;
            (p.accepts_path(&w), "word", w.display(p.alphabet()))
        }
        Document::Trees(..) => bail!("a tree list cannot be run; convert it with --to buta"),
    };
    if structured {
        println!("verdict: {}", verdict(ok, "accept", "reject"));
        println!("{detail_key}: {detail}");
    } else {
        println!("{}", verdict(ok, "ACCEPT", "REJECT"));
        println!("{detail_key}: {detail}");
    }
    Ok(ok)
}

/// The tree language of a document as a bottom-up automaton.
fn tree_language(doc: &Document) -> Result<BottomUpTa> {
    Ok(match doc {
        Document::BottomUp(ta) => ta.clone(),
        Document::Dtda(d) => d.to_bottomup()?,
        Document::DtdaSet(d) => d.to_bottomup()?,
        Document::Trees(al, trees) => BottomUpTa::from_trees(al, trees)?,
        Document::FrontierCheck(_) => {
            bail!("frontier-check automata only support membership runs")
        }
        Document::PathNfa(_) | Document::PathDfa(_) => {
            bail!("this is a path automaton; convert it with --to dtda for its tree language")
        }
    })
}

/// Top-down automata are compared on their frontier sets directly, which
/// avoids the exponential bottom-up translation.
fn set_like(doc: &Document) -> Option<Result<DtdaSet>> {
    match doc {
        Document::DtdaSet(d) => Some(Ok(d.clone())),
        Document::Dtda(d) => Some(d.to_set().map_err(Into::into)),
        _ => None,
    }
}

fn path_language(doc: &Document) -> Option<&PathAutomaton> {
    match doc {
        Document::PathNfa(p) | Document::PathDfa(p) => Some(p),
        _ => None,
    }
}

fn decide(q: &Question, structured: bool) -> Result<bool> {
    match q {
        Question::DtdaRecognizable { file } => {
            let ta = tree_language(&load(file)?)?;
            let v = bridge::is_dtda_recognizable(&ta)?;
            println!(
                "{}",
                if structured {
                    v.structured()
                } else {
                    v.report()
                }
            );
            Ok(v.recognizable)
        }
        Question::Equiv { left, right } => {
            let (l, r) = (load(left)?, load(right)?);
            let (equal, witness, side) = match (path_language(&l), path_language(&r)) {
                (Some(p), Some(q)) => match p.separating_word(q)? {
                    None => (true, String::new(), ""),
                    Some(w) => {
                        let side = if p.accepts(&w) { "left" } else { "right" };
                        (false, p.word_to_string(&w), side)
                    }
                },
                (None, None) if set_like(&l).is_some() && set_like(&r).is_some() => {
                    let (a, b) = (set_like(&l).unwrap()?, set_like(&r).unwrap()?);
                    match a.separating_tree(&b)? {
                        None => (true, String::new(), ""),
                        Some(t) => {
                            let side = if a.accepts(&t)? { "left" } else { "right" };
                            (false, t.to_string(a.alphabet()), side)
                        }
                    }
                }
                (None, None) => {
                    let (a, b) = (tree_language(&l)?, tree_language(&r)?);
                    match a.separating_tree(&b)? {
                        None => (true, String::new(), ""),
                        Some(t) => {
                            let side = if a.accepts(&t)? { "left" } else { "right" };
                            (false, t.to_string(a.alphabet()), side)
                        }
                    }
                }
                _ => bail!("cannot compare a path automaton with a tree automaton"),
            };
            if structured {
                println!("verdict: {}", verdict(equal, "yes", "no"));
                println!(
                    "counterexample: {}",
                    if equal { "-" } else { witness.as_str() }
                );
                if !equal {
                    println!("accepted_by: {side}");
                }
            } else if equal {
                println!("YES: the languages are equal");
            } else {
                println!("NO: the languages differ");
                println!("counterexample: {witness} (accepted only by the {side} automaton)");
            }
            Ok(equal)
        }
        Question::Empty { file } => {
            let doc = load(file)?;
            let witness = match path_language(&doc) {
                Some(p) => p.nfa().shortest_word().map(|w| {
                    w.iter()
                        .map(|&l| p.alphabet().token_name(p.alphabet().token_at(l)))
                        .collect::<Vec<_>>()
                        .join(" ")
                }),
                None if set_like(&doc).is_some() => {
                    let d = set_like(&doc).unwrap()?;
                    d.witness()?.map(|t| t.to_string(d.alphabet()))
                }
                None => {
                    let ta = tree_language(&doc)?;
                    ta.witness().map(|t| t.to_string(ta.alphabet()))
                }
            };
            let empty = witness.is_none();
            if structured {
                println!("verdict: {}", verdict(empty, "yes", "no"));
                println!("witness: {}", witness.as_deref().unwrap_or("-"));
            } else if let Some(w) = &witness {
                println!("NO: the language is not empty");
                println!("witness: {w}");
            } else {
                println!("YES: the language is empty");
            }
            Ok(empty)
        }
        Question::Boolcomb {
            file,
            paths,
            max_atoms,
        } => {
            let ta = tree_language(&load(file)?)?;
            let atoms = paths
                .iter()
                .map(|p| {
                    let doc = load(p)?;
                    path_language(&doc)
                        .cloned()
                        .ok_or_else(|| anyhow!("{} is not a path automaton", p.display()))
                })
                .collect::<Result<Vec<_>>>()?;
            let v = bridge::verify_bool_combination_with_cap(&ta, &atoms, *max_atoms)?;
            println!(
                "{}",
                if structured {
                    v.structured(&ta)
                } else {
                    v.report(&ta)
                }
            );
            Ok(matches!(v, BoolCombVerdict::Formula(_)))
        }
    }
}

/// A loaded document in the algebra used for Boolean operations.
enum Value {
    Trees(BottomUpTa),
    Sets(DtdaSet),
    Plain(Dtda),
    Paths(PathAutomaton, bool),
    Finite(RankedAlphabet, Vec<Tree>),
}

impl Value {
    fn from_doc(doc: Document) -> Result<Value> {
        Ok(match doc {
            Document::BottomUp(ta) => Value::Trees(ta),
            Document::Dtda(d) => Value::Plain(d),
            Document::DtdaSet(d) => Value::Sets(d),
            Document::PathNfa(p) => Value::Paths(p, false),
            Document::PathDfa(p) => Value::Paths(p, true),
            Document::Trees(al, t) => Value::Finite(al, t),
            Document::FrontierCheck(_) => bail!("frontier-check automata cannot be converted"),
        })
    }

    fn into_trees(self) -> Result<BottomUpTa> {
        Ok(match self {
            Value::Trees(ta) => ta,
            Value::Sets(d) => d.to_bottomup()?,
            Value::Plain(d) => d.to_bottomup()?,
            Value::Paths(p, _) => bridge::tfp_dtda(&p)?.to_bottomup()?,
            Value::Finite(al, t) => BottomUpTa::from_trees(&al, &t)?,
        })
    }

    fn into_sets(self) -> Result<DtdaSet> {
        match self {
            Value::Sets(d) => Ok(d),
            Value::Plain(d) => Ok(d.to_set()?),
            Value::Paths(p, _) => Ok(bridge::tfp_dtda(&p)?.to_set()?),
            Value::Finite(al, trees) => finite_as_set(&al, &trees),
            Value::Trees(ta) => Ok(recognizable_dtda(&ta)?.to_set()?),
        }
    }

    fn into_paths(self) -> Result<PathAutomaton> {
        match self {
            Value::Paths(p, _) => Ok(p),
            other => Ok(bridge::pot_language(&other.into_trees()?)),
        }
    }
}

/// Union of singleton set automata, one per tree.
fn finite_as_set(al: &RankedAlphabet, trees: &[Tree]) -> Result<DtdaSet> {
    let mut acc: Option<DtdaSet> = None;
    for t in trees {
        let single = Dtda::singleton(al, t)?;
        let plus = single
            .core()
            .state_by_name("q+")
            .unwrap_or(single.num_states() - 2);
        let s = DtdaSet::new(single.core().clone(), [[plus].into()])?;
        acc = Some(match acc {
            None => s,
            Some(a) => a.union(&s)?.trim()?,
        });
    }
    match acc {
        Some(a) => Ok(a),
        None => Ok(Dtda::new(
            dtda::DtdaCore::from_fn(al, vec!["q".into()], 0, |_, s| vec![0; al.rank(s).max(1)])?,
            Default::default(),
        )?
        .to_set()?),
    }
}

fn recognizable_dtda(ta: &BottomUpTa) -> Result<Dtda> {
    let v = bridge::is_dtda_recognizable(ta)?;
    match v.counterexample {
        None => Ok(v.candidate),
        Some(t) => bail!(
            "no deterministic top-down automaton recognizes this language; {} has all its paths in the language but is not a member",
            t.to_string(ta.alphabet())
        ),
    }
}

fn convert(args: &ConvertArgs) -> Result<()> {
    let mut value = Value::from_doc(load(&args.file)?)?;
    let ops = args.complement || args.union.is_some() || args.intersect.is_some();
    if ops {
        value = combine(value, args)?;
    }
    let doc = match args.to {
        OutKind::Buta => {
            let mut ta = value.into_trees()?;
            if args.minimize {
                ta = ta.to_deterministic()?.minimize()?;
            }
            Document::BottomUp(ta)
        }
        OutKind::Dtda => Document::Dtda(match value {
            Value::Plain(d) => d,
            Value::Paths(p, _) => bridge::tfp_dtda(&p)?,
            Value::Finite(al, trees) if trees.len() == 1 => Dtda::singleton(&al, &trees[0])?,
            Value::Sets(_) => bail!("a set automaton has no plain equivalent in general; use --to buta or --to decomposition"),
            other => recognizable_dtda(&other.into_trees()?)?,
        }),
        OutKind::Dtdaset => Document::DtdaSet(value.into_sets()?),
        OutKind::Pathnfa => Document::PathNfa(value.into_paths()?),
        OutKind::Pathdfa => {
            let mut p = value.into_paths()?.to_dfa();
            if args.minimize {
                p = p.minimize()?;
            }
            Document::PathDfa(p)
        }
        OutKind::Decomposition => return write_decomposition(value.into_sets()?, args),
    };
    emit(&doc.to_text(), args.out.as_deref())
}

fn combine(value: Value, args: &ConvertArgs) -> Result<Value> {
    let other = |p: &Path| -> Result<Value> { Value::from_doc(load(p)?) };
    match value {
        Value::Paths(mut p, det) => {
            if let Some(f) = &args.union {
                p = p.union(&other(f)?.into_paths()?)?;
            }
            if let Some(f) = &args.intersect {
                p = p.intersection(&other(f)?.into_paths()?)?;
            }
            if args.complement {
                p = p.complement();
            }
            Ok(Value::Paths(p, det))
        }
        Value::Sets(_) | Value::Plain(_) => {
            let mut s = value.into_sets()?;
            if let Some(f) = &args.union {
                s = s.union(&other(f)?.into_sets()?)?;
            }
            if let Some(f) = &args.intersect {
                s = s.intersection(&other(f)?.into_sets()?)?;
            }
            if args.complement {
                s = s.complement()?;
            }
            Ok(Value::Sets(s))
        }
        v => {
            let mut ta = v.into_trees()?;
            if let Some(f) = &args.union {
                ta = ta.union(&other(f)?.into_trees()?)?;
            }
            if let Some(f) = &args.intersect {
                ta = ta.intersection(&other(f)?.into_trees()?)?;
            }
            if args.complement {
                ta = ta.complement()?;
            }
            Ok(Value::Trees(ta))
        }
    }
}

fn write_decomposition(set: DtdaSet, args: &ConvertArgs) -> Result<()> {
    let d = set.decompose()?;
    let Some(dir) = &args.out else {
        bail!("--to decomposition needs --out DIR for the component files");
    };
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (i, c) in d.components.iter().enumerate() {
        let path = dir.join(format!("A{i}.dtda"));
        fs::write(&path, Document::Dtda(c.clone()).to_text())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let formula = format!("{d}\n");
    fs::write(dir.join("formula.txt"), &formula).context("cannot write formula.txt")?;
    print!("{formula}");
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn refute(file: &Path, target: Target, structured: bool) -> Result<()> {
    let set = match load(file)? {
        Document::DtdaSet(d) => d,
        Document::Dtda(d) => d.to_set()?,
        other => bail!("refute needs a dtdaset or dtda file, got {}", other.kind()),
    };
    let target = match target {
        Target::T1 => CombTarget::T1,
        Target::T2 => CombTarget::T2,
    };
    let r = dtda::comb_refutation(&set, target)?;
    let al = set.alphabet();
    if structured {
        println!("target: {}", target.name());
        println!("k: {}", r.k);
        println!("p: {}", r.p);
        println!("a_count: {}", r.num_a());
        println!("t: {}", r.t.to_string(al));
        println!("t_prime: {}", r.t_prime.to_string(al));
        println!("frontier: {}", set.format_set(&r.frontier_t));
        println!("t_in_target: yes");
        println!("t_prime_in_target: no");
        println!("accepted: {}", verdict(r.accepted, "both", "neither"));
    } else {
        println!(
            "{}",
            RefutationDisplay {
                refutation: &r,
                automaton: &set
            }
        );
    }
    Ok(())
}

fn enumerate(args: &EnumerateArgs, structured: bool) -> Result<()> {
    let filter = args.accepted_by.as_deref().map(load).transpose()?;
    let al = match (&args.alphabet, &args.alphabet_file, &filter) {
        (Some(spec), _, _) => RankedAlphabet::parse(spec)?,
        (_, Some(f), _) => RankedAlphabet::parse(
            &fs::read_to_string(f).with_context(|| format!("cannot read {}", f.display()))?,
        )?,
        (_, _, Some(doc)) => doc.alphabet().clone(),
        _ => bail!("give --alphabet, --alphabet-file or --accepted-by"),
    };
    let mut trees = dtda::enumerate_trees(&al, args.max_nodes);
    if let Some(doc) = &filter {
        let mut kept = Vec::new();
        for t in trees {
            if member(doc, &t)? {
                kept.push(t);
            }
        }
        trees = kept;
    }
    if let Some(k) = args.sample {
        let picks = random::sample_indices(&mut random::rng(args.seed), trees.len(), k);
        trees = picks.into_iter().map(|i| trees[i].clone()).collect();
    }
    if structured {
        println!("count: {}", trees.len());
        for t in &trees {
            println!("tree: {}", t.to_string(&al));
        }
    } else {
        for t in &trees {
            println!("{}", t.to_string(&al));
        }
    }
    Ok(())
}

fn member(doc: &Document, t: &Tree) -> Result<bool> {
    Ok(match doc {
        Document::BottomUp(ta) => ta.accepts(t)?,
        Document::Dtda(d) => d.accepts(t)?,
        Document::DtdaSet(d) => d.accepts(t)?,
        Document::FrontierCheck(f) => f.accepts(t)?,
        Document::PathNfa(p) | Document::PathDfa(p) => p.accepts_all_paths_of(t),
        Document::Trees(_, list) => list.contains(t),
    })
}
