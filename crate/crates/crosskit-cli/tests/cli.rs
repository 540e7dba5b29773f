//! End-to-end tests of the `crosskit` binary: output goldens, exit-code
//! contract, determinism, and the close/member round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use crosskit::automata::{canonical_dfa, parse_regex, regex_to_nfa, to_json};
use crosskit::finlang::FiniteLanguage;
use crosskit::oracle::chain_membership;
use crosskit::words::{RuleSet, Word};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crosskit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().expect("temp dir")
}

fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).expect("write fixture");
    path
}

#[test]
fn cross_outputs_canonical_order() {
    assert_eq!(stdout(&["cross", "ab", "ba"]), "a\nb\naba\nbab\n");
    assert_eq!(stdout(&["cross", "ab", "bb"]), "b\nab\nbb\nabb\n");
    assert_eq!(stdout(&["cross", "ab", "cd"]), "");
    assert_eq!(code(&["cross", "ab", "cd"]), 0);
}

#[test]
fn cross_trace_lines_are_deterministic() {
    let first = stdout(&["cross", "ab", "ba", "--trace"]);
    let second = stdout(&["cross", "ab", "ba", "--trace"]);
    assert_eq!(first, second);
    assert!(first.lines().count() == 4);
    assert!(first.contains(">-["));
}

#[test]
fn cross_rejects_empty_word() {
    assert_eq!(code(&["cross", "ab", "_"]), 3);
    assert_eq!(code(&["cross", "_", "ab"]), 3);
}

#[test]
fn cross_rule_flags() {
    assert_eq!(stdout(&["cross", "ab", "ba", "--rules", "a"]), "a\nbab\n");
    assert_eq!(
        stdout(&["cross", "ab", "ba", "--rules", "a", "--mode", "1"]),
        "a\n"
    );
}

#[test]
fn cross_rules_from_file() {
    let dir = tempdir();
    let rules = write(&dir, "rules.txt", "# overlap rules\naba\n");
    let spec = format!("@{}", rules.to_str().unwrap());
    assert_eq!(
        stdout(&["cross", "pabaq", "rabas", "--rules", &spec]),
        "pabas\nrabaq\n"
    );
    let bad = write(&dir, "bad.txt", "_\n");
    assert_eq!(
        code(&[
            "cross",
            "ab",
            "ba",
            "--rules",
            &format!("@{}", bad.to_str().unwrap())
        ]),
        3
    );
}

#[test]
fn lang_command_matches_library() {
    let dir = tempdir();
    let l = write(&dir, "L.txt", "ab\nba\nbb\n");
    let got = stdout(&["lang", "--in", l.to_str().unwrap()]);
    assert_eq!(got, "a\nb\nab\nba\nbb\naba\nabb\nbab\nbba\nbbb\n");
}

#[test]
fn lang_is_symmetric_in_file_order() {
    let dir = tempdir();
    let a = write(&dir, "A.txt", "ab\n");
    let b = write(&dir, "B.txt", "ba\nbb\n");
    let lhs = stdout(&[
        "lang",
        "--in",
        a.to_str().unwrap(),
        "--in2",
        b.to_str().unwrap(),
    ]);
    let rhs = stdout(&[
        "lang",
        "--in",
        b.to_str().unwrap(),
        "--in2",
        a.to_str().unwrap(),
    ]);
    assert_eq!(lhs, rhs);
}

#[test]
fn lang_missing_file_is_usage_error() {
    assert_eq!(code(&["lang", "--in", "no-such-file.txt"]), 2);
}

#[test]
fn close_min_matches_canonical_regex() {
    let dir = tempdir();
    let ax = write(&dir, "ax.txt", "aabb\naaabbb\n");
    let out = dir.path().join("c.json");
    assert_eq!(
        code(&[
            "close",
            "--axioms",
            ax.to_str().unwrap(),
            "--min",
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let got = std::fs::read(&out).expect("closure written");
    let expected = to_json(&canonical_dfa(&regex_to_nfa(&parse_regex("a+b+").unwrap())).as_nfa());
    assert_eq!(got, expected);
}

#[test]
fn close_rejects_epsilon_axiom() {
    let dir = tempdir();
    let ax = write(&dir, "ax.txt", "ab\n_\n");
    assert_eq!(code(&["close", "--axioms", ax.to_str().unwrap()]), 3);
}

#[test]
fn close_dot_output_is_stable() {
    let dir = tempdir();
    let ax = write(&dir, "ax.txt", "a\n");
    let dot1 = dir.path().join("g1.dot");
    let dot2 = dir.path().join("g2.dot");
    assert_eq!(
        code(&[
            "close",
            "--axioms",
            ax.to_str().unwrap(),
            "--dot",
            dot1.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(
        code(&[
            "close",
            "--axioms",
            ax.to_str().unwrap(),
            "--dot",
            dot2.to_str().unwrap()
        ]),
        0
    );
    let a = std::fs::read_to_string(&dot1).unwrap();
    let b = std::fs::read_to_string(&dot2).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("rankdir=LR"));
}

#[test]
fn member_round_trips_against_chain_oracle() {
    let dir = tempdir();
    let ax = write(&dir, "ax.txt", "aabb\naaabbb\n");
    let out = dir.path().join("c.json");
    assert_eq!(
        code(&[
            "close",
            "--axioms",
            ax.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let axioms = FiniteLanguage::new([
        "aabb".parse::<Word>().unwrap(),
        "aaabbb".parse::<Word>().unwrap(),
    ])
    .unwrap();
    // All words over {a, b} up to length 8.
    let mut frontier = vec![String::new()];
    for _ in 0..8 {
        let mut next = Vec::new();
        for prefix in &frontier {
            for c in ['a', 'b'] {
                let mut s = prefix.clone();
                s.push(c);
                let word: Word = s.parse().unwrap();
                let expected = chain_membership(&word, &axioms, &RuleSet::AllSymbols);
                let printed = stdout(&["member", "--closure", out.to_str().unwrap(), &s]);
                assert_eq!(
                    printed.trim() == "accept",
                    expected,
                    "member disagrees with the chain oracle on {}",
                    s
                );
                next.push(s);
            }
        }
        frontier = next;
    }
}

#[test]
fn member_trace_replays() {
    let dir = tempdir();
    let ax = write(&dir, "ax.txt", "aabb\naaabbb\n");
    let out = dir.path().join("c.json");
    assert_eq!(
        code(&[
            "close",
            "--axioms",
            ax.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let text = stdout(&[
        "member",
        "--closure",
        out.to_str().unwrap(),
        "aab",
        "--trace",
    ]);
    assert!(text.starts_with("accept\n"));
    assert!(text.contains("segment 1"));
    assert!(text.contains("segment 2"));
}

#[test]
fn member_without_provenance_still_answers() {
    let dir = tempdir();
    let ax = write(&dir, "ax.txt", "aabb\naaabbb\n");
    let out = dir.path().join("c.json");
    assert_eq!(
        code(&[
            "close",
            "--axioms",
            ax.to_str().unwrap(),
            "--min",
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    assert_eq!(
        stdout(&["member", "--closure", out.to_str().unwrap(), "aab"]).trim(),
        "accept"
    );
    // A trace needs provenance, which --min drops.
    assert_eq!(
        code(&[
            "member",
            "--closure",
            out.to_str().unwrap(),
            "aab",
            "--trace"
        ]),
        3
    );
}

#[test]
fn once_produces_canonical_automaton() {
    let dir = tempdir();
    let out = dir.path().join("once.json");
    assert_eq!(
        code(&["once", "--lang", "(aa)+", "--out", out.to_str().unwrap()]),
        0
    );
    let got = std::fs::read(&out).unwrap();
    let expected = to_json(&canonical_dfa(&regex_to_nfa(&parse_regex("a+").unwrap())).as_nfa());
    assert_eq!(got, expected);
}

#[test]
fn base_verify_golden() {
    let text = stdout(&["base", "--lang", "a+b+", "--verify"]);
    assert_eq!(
        text,
        "B = {aa, ab, bb}\nS = {a}\nE = {b}\nunits = {}\ndecomposition = true\n"
    );
    let failing = stdout(&["base", "--lang", "(aa)+", "--verify"]);
    assert!(failing.contains("decomposition = false"));
    assert!(failing.contains("witness = "));
}

#[test]
fn classify_report_and_assert() {
    let text = stdout(&["classify", "--lang", "a+b+", "--families", "crossover,slt"]);
    assert_eq!(text, "crossover: holds\nslt: holds k=1\n");

    let out = run(&[
        "classify",
        "--lang",
        "(aa)+",
        "--families",
        "crossover",
        "--assert",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let printed = String::from_utf8_lossy(&out.stdout);
    assert!(printed.contains("crossover: fails witness="));

    assert_eq!(
        code(&["classify", "--lang", "a+b+", "--families", "bogus"]),
        2
    );
}

#[test]
fn classify_json_schema() {
    let text = stdout(&["classify", "--lang", "a+b+", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    assert!(doc["language"].as_str().unwrap().len() == 64);
    let families = doc["families"].as_array().unwrap();
    assert_eq!(families.len(), 7);
    assert_eq!(families[0]["name"], "crossover");
    assert_eq!(families[0]["holds"], true);
}

#[test]
fn splice_and_differential() {
    let dir = tempdir();
    let sys = write(
        &dir,
        "sys.json",
        r#"{"alphabet":["a","b"],"axioms":["aabb","aaabbb"],"rules":{"kind":"simple","items":["a","b"]}}"#,
    );
    let words = stdout(&["splice", "--system", sys.to_str().unwrap(), "--maxlen", "4"]);
    assert_eq!(words, "ab\naab\nabb\naaab\naabb\nabbb\n");
    assert_eq!(
        stdout(&[
            "splice",
            "--system",
            sys.to_str().unwrap(),
            "--maxlen",
            "6",
            "--diff"
        ])
        .trim(),
        "equal"
    );

    let full = write(
        &dir,
        "full.json",
        r#"{"alphabet":["a"],"axioms":["aa"],"rules":{"kind":"full","items":[["a","_","a","_"]]}}"#,
    );
    assert_eq!(
        code(&[
            "splice",
            "--system",
            full.to_str().unwrap(),
            "--maxlen",
            "4",
            "--diff"
        ]),
        2
    );
}

#[test]
fn language_inputs_accept_files() {
    let dir = tempdir();
    let words = write(&dir, "lang.txt", "ab\naabb\n");
    let text = stdout(&["base", "--lang", &format!("@{}", words.to_str().unwrap())]);
    assert!(text.contains("B = {aa, ab, bb}"));

    let refile = write(&dir, "lang.re", "a+b+\n");
    let text = stdout(&["base", "--lang", &format!("@{}", refile.to_str().unwrap())]);
    assert!(text.contains("B = {aa, ab, bb}"));

    let dfa = canonical_dfa(&regex_to_nfa(&parse_regex("a+b+").unwrap()));
    let auto = dir.path().join("lang.json");
    std::fs::write(&auto, to_json(&dfa.as_nfa())).unwrap();
    let text = stdout(&["base", "--lang", &format!("@{}", auto.to_str().unwrap())]);
    assert!(text.contains("B = {aa, ab, bb}"));

    assert_eq!(code(&["base", "--lang", "(unclosed"]), 3);
}

#[test]
fn commands_are_byte_deterministic() {
    let dir = tempdir();
    let l = write(&dir, "L.txt", "ab\nba\nbb\n");
    let cases: Vec<Vec<&str>> = vec![
        vec!["cross", "ab", "ba", "--trace"],
        vec!["lang", "--in", l.to_str().unwrap()],
        vec!["base", "--lang", "a+b+", "--verify", "--format", "json"],
        vec!["classify", "--lang", "a+b+", "--format", "json"],
    ];
    for args in cases {
        let first = stdout(&args);
        let second = stdout(&args);
        assert_eq!(first, second, "nondeterministic output for {:?}", args);
    }
}
