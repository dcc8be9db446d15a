use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lexshift::synthetic::{generate, GeneratorConfig};
use tempfile::TempDir;

fn lexshift(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexshift"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

#[track_caller]
fn ok(args: &[&str], cwd: &Path) -> Output {
    let out = lexshift(args, cwd);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new(files: &[(&str, &str)]) -> Self {
        let dir = tempfile::tempdir().unwrap();
        for (name, contents) in files {
            fs::write(dir.path().join(name), contents).unwrap();
        }
        Self { dir }
    }

    fn path(&self) -> &Path {
        self.dir.path()
    }

    fn read(&self, name: &str) -> String {
        fs::read_to_string(self.path().join(name)).unwrap()
    }

    fn file(&self, name: &str) -> PathBuf {
        self.path().join(name)
    }
}

fn synthetic_workspace() -> Workspace {
    let fixture = generate(&GeneratorConfig {
        seed: 7,
        sentences: 400,
        labeled: 200,
        ..Default::default()
    });
    Workspace::new(&[
        ("corpus.txt", &fixture.corpus),
        ("pos.txt", &fixture.positive_list),
        ("neg.txt", &fixture.negative_list),
        ("labeled.csv", &fixture.labeled_csv),
    ])
}

const LEX: [&str; 4] = ["--positive", "pos.txt", "--negative", "neg.txt"];

fn with_lex<'a>(args: &[&'a str]) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(LEX);
    v
}

#[test]
fn staged_stages_match_full_run() {
    let ws = synthetic_workspace();
    let cwd = ws.path();
    ok(
        &with_lex(&[
            "run",
            "--corpus",
            "corpus.txt",
            "--labeled",
            "labeled.csv",
            "--out-dir",
            "full",
        ]),
        cwd,
    );

    fs::create_dir(ws.file("staged")).unwrap();
    ok(
        &with_lex(&[
            "collect",
            "--corpus",
            "corpus.txt",
            "--out",
            "staged/words.tsv",
        ]),
        cwd,
    );
    ok(
        &with_lex(&[
            "extract",
            "--corpus",
            "corpus.txt",
            "--words",
            "staged/words.tsv",
            "--out",
            "staged/triples.tsv",
        ]),
        cwd,
    );
    ok(
        &[
            "graph",
            "--words",
            "staged/words.tsv",
            "--triples",
            "staged/triples.tsv",
            "--nodes-out",
            "staged/nodes.tsv",
            "--edges-out",
            "staged/edges.tsv",
        ],
        cwd,
    );
    ok(
        &[
            "infer",
            "--nodes",
            "staged/nodes.tsv",
            "--edges",
            "staged/edges.tsv",
            "--out",
            "staged/beliefs.tsv",
            "--report",
            "staged/convergence.json",
        ],
        cwd,
    );
    ok(
        &with_lex(&[
            "detect",
            "--beliefs",
            "staged/beliefs.tsv",
            "--words",
            "staged/words.tsv",
            "--out",
            "staged/ranked.tsv",
            "--delta-out",
            "staged/delta.tsv",
            "--nonlexical-out",
            "staged/nonlexical.tsv",
        ]),
        cwd,
    );
    ok(
        &with_lex(&[
            "eval",
            "--labeled",
            "labeled.csv",
            "--delta",
            "staged/delta.tsv",
            "--out",
            "staged/eval.json",
        ]),
        cwd,
    );

    let mut names: Vec<String> = fs::read_dir(ws.file("full"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 10);
    for name in &names {
        assert_eq!(
            fs::read(ws.file("full").join(name)).unwrap(),
            fs::read(ws.file("staged").join(name)).unwrap(),
            "{name} differs"
        );
    }

    // Stdout output is the same as the file output.
    let out = ok(&with_lex(&["collect", "--corpus", "corpus.txt"]), cwd);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        ws.read("full/words.tsv")
    );
}

#[test]
fn one_triple_per_correlation_kind() {
    let ws = Workspace::new(&[
        (
            "corpus.txt",
            "it is efficient and quiet\n\
             too noisy, though it is efficient\n\
             a reasonably quiet fridge\n\
             everything as expected or better\n\
             it is a powerful but noisy machine\n",
        ),
        ("pos.txt", ""),
        ("neg.txt", ""),
    ]);
    ok(
        &with_lex(&["run", "--corpus", "corpus.txt", "--out-dir", "out"]),
        ws.path(),
    );
    assert_eq!(
        ws.read("out/triples.tsv"),
        "0\tefficient\tAND\tquiet\n\
         1\tnoisy\tALT\tefficient\n\
         2\treasonably\tNB\tquiet\n\
         3\texpected\tOR\tbetter\n\
         4\tpowerful\tBUT\tnoisy\n"
    );
}

#[test]
fn infer_single_iteration() {
    let ws = Workspace::new(&[
        ("nodes.tsv", "a\t0.7\nb\t0.5\nc\t0.5\n"),
        ("edges.tsv", "a\tb\tAND\t1\nb\tc\tAND\t1\n"),
    ]);
    let cwd = ws.path();
    ok(
        &[
            "infer",
            "--nodes",
            "nodes.tsv",
            "--edges",
            "edges.tsv",
            "--max-iter",
            "1",
            "--out",
            "one.tsv",
            "--report",
            "one.json",
        ],
        cwd,
    );
    let report: serde_json::Value = serde_json::from_str(&ws.read("one.json")).unwrap();
    assert_eq!(report["iterations"], 1);
    assert_eq!(report["converged"], false);
    // After one sweep `c` has only heard from `b`, whose prior is uniform.
    assert!(ws.read("one.tsv").contains("c\t0.5\t0.5\n"));

    ok(
        &[
            "infer",
            "--nodes",
            "nodes.tsv",
            "--edges",
            "edges.tsv",
            "--out",
            "full.tsv",
            "--report",
            "full.json",
        ],
        cwd,
    );
    let report: serde_json::Value = serde_json::from_str(&ws.read("full.json")).unwrap();
    assert_eq!(report["converged"], true);
    assert_ne!(ws.read("one.tsv"), ws.read("full.tsv"));
}

#[test]
fn lci_baseline_and_affected_eval() {
    let ws = synthetic_workspace();
    let cwd = ws.path();
    let out = ok(
        &with_lex(&[
            "detect",
            "--baseline",
            "lci",
            "--corpus",
            "corpus.txt",
            "--top-n",
            "5",
            "--delta-out",
            "lci_delta.tsv",
        ]),
        cwd,
    );
    let ranking = String::from_utf8(out.stdout).unwrap();
    assert!(ranking.starts_with("1\t"));
    assert_eq!(ranking.lines().count(), 60);
    assert_eq!(ws.read("lci_delta.tsv").lines().count(), 5);

    let all = ok(
        &with_lex(&[
            "eval",
            "--labeled",
            "labeled.csv",
            "--delta",
            "lci_delta.tsv",
        ]),
        cwd,
    );
    let affected = ok(
        &with_lex(&[
            "eval",
            "--labeled",
            "labeled.csv",
            "--delta",
            "lci_delta.tsv",
            "--affected-only",
        ]),
        cwd,
    );
    let all: serde_json::Value = serde_json::from_slice(&all.stdout).unwrap();
    let affected: serde_json::Value = serde_json::from_slice(&affected.stdout).unwrap();
    assert_eq!(all["original"]["total"], 200);
    assert!(affected["original"]["total"].as_u64().unwrap() < 200);

    let preds = ok(
        &with_lex(&[
            "classify",
            "--corpus",
            "corpus.txt",
            "--delta",
            "lci_delta.tsv",
        ]),
        cwd,
    );
    assert_eq!(
        String::from_utf8(preds.stdout).unwrap().lines().count(),
        400
    );
}

#[test]
fn empty_corpus_succeeds_with_warning() {
    let ws = Workspace::new(&[
        ("corpus.txt", ""),
        ("pos.txt", "good\n"),
        ("neg.txt", "bad\n"),
    ]);
    let out = ok(
        &with_lex(&["run", "--corpus", "corpus.txt", "--out-dir", "out"]),
        ws.path(),
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("no sentences"));
    assert_eq!(ws.read("out/ranked.tsv"), "");
}

#[test]
fn exit_codes() {
    let ws = Workspace::new(&[
        ("corpus.txt", "good and bad\n"),
        ("tagged.tsv", "good\tJJ\nbad\tXYZ\n"),
        ("pos.txt", "good\n"),
        ("neg.txt", "bad\n"),
        ("conflict.txt", "good\n"),
        ("bad.toml", "no_such_key = 1\n"),
        ("eps.toml", "epsilon_and = 0.7\n"),
        ("words.tsv", "good\tlexical\t0.7\t1\n"),
        ("triples.tsv", "0\tgood\tAND\tbad\n"),
    ]);
    let cwd = ws.path();
    let code = |args: &[&str]| lexshift(args, cwd).status.code();

    assert_eq!(
        code(&with_lex(&["collect", "--corpus", "missing.txt"])),
        Some(2)
    );
    assert_eq!(
        code(&with_lex(&[
            "collect",
            "--corpus",
            "tagged.tsv",
            "--format",
            "tagged"
        ])),
        Some(2)
    );
    assert_eq!(
        code(&[
            "collect",
            "--corpus",
            "corpus.txt",
            "--positive",
            "pos.txt",
            "--negative",
            "conflict.txt"
        ]),
        Some(2)
    );
    assert_eq!(
        code(&with_lex(&[
            "--config",
            "bad.toml",
            "collect",
            "--corpus",
            "corpus.txt"
        ])),
        Some(3)
    );
    assert_eq!(
        code(&with_lex(&[
            "--config",
            "eps.toml",
            "run",
            "--corpus",
            "corpus.txt",
            "--out-dir",
            "o"
        ])),
        Some(3)
    );
    assert_eq!(
        code(&["infer", "--nodes", "x", "--edges", "y", "--damping", "1.5"]),
        Some(3)
    );
    assert_eq!(
        code(&[
            "graph",
            "--words",
            "words.tsv",
            "--triples",
            "triples.tsv",
            "--nodes-out",
            "n",
            "--edges-out",
            "e"
        ]),
        Some(4)
    );
    let out = lexshift(&with_lex(&["collect", "--corpus", "missing.txt"]), cwd);
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.txt"));
}
