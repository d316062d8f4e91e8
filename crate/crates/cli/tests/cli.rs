use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn dtda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dtda"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let cases: Vec<(Vec<String>, i32)> = vec![
        (
            vec!["run".into(), fixture("fig1-tfp.dtda"), "a(b(c,d),c)".into()],
            0,
        ),
        (
            vec!["run".into(), fixture("fig1-tfp.dtda"), "a(b(c,d),d)".into()],
            0,
        ),
        (
            vec!["run".into(), fixture("fig1-tfp.dtda"), "a(b(c,c),c)".into()],
            1,
        ),
        (vec!["run".into(), fixture("t1.fcheck"), "a(d,c)".into()], 0),
        (vec!["run".into(), fixture("t1.fcheck"), "a(d,d)".into()], 1),
        (vec!["run".into(), fixture("t2.fcheck"), "a(d,e)".into()], 0),
        (vec!["run".into(), fixture("t2.fcheck"), "a(e,d)".into()], 1),
        (vec!["run".into(), fixture("empty.dtdaset"), "c".into()], 1),
        (vec!["run".into(), fixture("t0.buta"), "f(a,b)".into()], 0),
        (
            vec![
                "decide".into(),
                "dtda-recognizable".into(),
                fixture("t0.buta"),
            ],
            1,
        ),
        (
            vec![
                "decide".into(),
                "dtda-recognizable".into(),
                fixture("fig1.trees"),
            ],
            0,
        ),
        (
            vec![
                "decide".into(),
                "equiv".into(),
                fixture("t1.buta"),
                fixture("t1.buta"),
            ],
            0,
        ),
        (
            vec![
                "decide".into(),
                "equiv".into(),
                fixture("t1.buta"),
                fixture("t2.buta"),
            ],
            1,
        ),
        (
            vec!["decide".into(), "empty".into(), fixture("empty.dtdaset")],
            0,
        ),
        (vec!["decide".into(), "empty".into(), fixture("t2.buta")], 1),
        (
            vec![
                "refute".into(),
                fixture("onestate.dtdaset"),
                "--target".into(),
                "t1".into(),
            ],
            0,
        ),
        (
            vec![
                "refute".into(),
                fixture("wrong-alphabet.dtdaset"),
                "--target".into(),
                "t1".into(),
            ],
            2,
        ),
        (
            vec!["run".into(), fixture("no-such-file.buta"), "a".into()],
            2,
        ),
        (vec!["run".into(), fixture("t0.buta"), "f(a".into()], 2),
    ];
    for (args, expected) in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = dtda(&refs);
        assert_eq!(
            code(&out),
            expected,
            "dtda {}: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn t0_is_not_recognizable_with_counterexample() {
    let out = dtda(&["decide", "dtda-recognizable", &fixture("t0.buta")]);
    assert!(stdout(&out).contains("f(a,a)"));
    let out = dtda(&[
        "--structured",
        "decide",
        "dtda-recognizable",
        &fixture("t0.buta"),
    ]);
    assert!(stdout(&out)
        .lines()
        .any(|l| l.starts_with("counterexample: f(a,a)")));
}

#[test]
fn refute_one_state_prints_three_a_comb() {
    let out = dtda(&[
        "--structured",
        "refute",
        &fixture("onestate.dtdaset"),
        "--target",
        "t1",
    ]);
    let text = stdout(&out);
    assert!(text.contains("a_count: 3"), "{text}");
    assert!(text.contains("t: a(d,a(c,a(c,c)))"), "{text}");
    assert!(text.contains("t_prime: a(d,a(d,a(c,c)))"), "{text}");
    let out = dtda(&["refute", &fixture("random4.dtdaset"), "--target", "t2"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn pot_of_t0_is_its_four_paths() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("p.pathdfa");
    let out = dtda(&[
        "convert",
        &fixture("t0.buta"),
        "--to",
        "pathdfa",
        "--minimize",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let p = out_path.to_str().unwrap();
    for w in ["f 1 a", "f 1 b", "f 2 a", "f 2 b"] {
        assert_eq!(code(&dtda(&["run", p, w])), 0, "{w}");
    }
    for w in ["f 2 f 1 a", "a", "f 1 f 2 a"] {
        assert_eq!(code(&dtda(&["run", p, w])), 1, "{w}");
    }
}

#[test]
fn conversions_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let steps: Vec<(String, &str, String)> = vec![
        (fixture("fig1-paths.pathdfa"), "dtda", path("a.dtda")),
        (path("a.dtda"), "dtdaset", path("a.dtdaset")),
        (path("a.dtdaset"), "buta", path("a.buta")),
        (fixture("fig1.trees"), "buta", path("trees.buta")),
        (fixture("t0.trees"), "dtdaset", path("t0.dtdaset")),
    ];
    for (src, kind, dst) in &steps {
        let out = dtda(&["convert", src, "--to", kind, "-o", dst]);
        assert_eq!(
            code(&out),
            0,
            "{src} -> {kind}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    for (l, r) in [
        (path("a.dtda"), path("a.dtdaset")),
        (path("a.dtdaset"), path("a.buta")),
        (path("a.buta"), path("trees.buta")),
        (path("t0.dtdaset"), fixture("t0.buta")),
    ] {
        assert_eq!(code(&dtda(&["decide", "equiv", &l, &r])), 0, "{l} vs {r}");
    }
}

#[test]
fn boolean_options_combine_languages() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_string_lossy().into_owned();
    let src = fixture("random4.dtdaset");
    assert_eq!(
        code(&dtda(&[
            "convert",
            &src,
            "--complement",
            "--to",
            "dtdaset",
            "-o",
            &path("c.dtdaset")
        ])),
        0
    );
    assert_eq!(
        code(&dtda(&[
            "convert",
            &src,
            "--intersect",
            &path("c.dtdaset"),
            "--to",
            "dtdaset",
            "-o",
            &path("i.dtdaset")
        ])),
        0
    );
    assert_eq!(code(&dtda(&["decide", "empty", &path("i.dtdaset")])), 0);
    assert_eq!(
        code(&dtda(&[
            "convert",
            &src,
            "--union",
            &path("c.dtdaset"),
            "--complement",
            "--to",
            "dtdaset",
            "-o",
            &path("n.dtdaset")
        ])),
        0
    );
    assert_eq!(code(&dtda(&["decide", "empty", &path("n.dtdaset")])), 0);
    assert_eq!(
        code(&dtda(&["decide", "equiv", &src, &path("c.dtdaset")])),
        1
    );
}

#[test]
fn decomposition_writes_components_and_formula() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("dec");
    let out = dtda(&[
        "convert",
        &fixture("random4.dtdaset"),
        "--to",
        "decomposition",
        "-o",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let formula = std::fs::read_to_string(out_dir.join("formula.txt")).unwrap();
    let components = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .path()
                .extension()
                .is_some_and(|x| x == "dtda")
        })
        .count();
    // every component is named in the formula exactly once
    assert_eq!(formula.matches('A').count(), components);
    let first = out_dir.join("A0.dtda");
    assert!(code(&dtda(&["run", first.to_str().unwrap(), "c"])) <= 1);
}

#[test]
fn boolcomb_on_t0_with_singleton_paths_is_a_formula() {
    let out = dtda(&[
        "decide",
        "boolcomb",
        &fixture("t0.buta"),
        &fixture("p-ab.pathdfa"),
        &fixture("p-ba.pathdfa"),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("-+ | +-"));
}

#[test]
fn enumerate_filters_and_samples() {
    let out = dtda(&[
        "enumerate",
        "--accepted-by",
        &fixture("t1.buta"),
        "--max-nodes",
        "3",
    ]);
    let trees: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    assert_eq!(trees, ["d", "a(c,d)", "a(d,c)", "a(d,e)", "a(e,d)"]);
    let a = dtda(&[
        "enumerate",
        "--alphabet",
        "f:2 a:0 b:0",
        "--max-nodes",
        "5",
        "--sample",
        "3",
        "--seed",
        "9",
    ]);
    let b = dtda(&[
        "enumerate",
        "--alphabet",
        "f:2 a:0 b:0",
        "--max-nodes",
        "5",
        "--sample",
        "3",
        "--seed",
        "9",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 3);
}
