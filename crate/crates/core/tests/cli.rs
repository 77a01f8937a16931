use std::io::Write;
use std::path::PathBuf;

use scatcont::cli::run;
use scatcont::io::{parse, serialize};

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn corpus_path(name: &str) -> String {
    corpus_dir().join(name).to_string_lossy().into_owned()
}

fn scatcont(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("scatcont").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    line.split(' ').find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn corpus_round_trips() {
    let mut count = 0;
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let canonical = serialize(&doc);
        let again = parse(&canonical).unwrap();
        assert_eq!(again, doc, "{}", path.display());
        assert_eq!(serialize(&again), canonical, "{}", path.display());
        count += 1;
    }
    assert!(count >= 20, "only {count} corpus documents");
}

#[test]
fn swap_report() {
    let (code, out, _) = scatcont(&["map", "report", &corpus_path("swap.map")]);
    assert_eq!(code, 0);
    let line = |tag: &str, kind: &str| {
        out.lines()
            .find(|l| l.starts_with(tag) && field(l, "kind") == Some(kind))
            .unwrap_or_else(|| panic!("no {tag} {kind} in\n{out}"))
            .to_string()
    };
    assert_eq!(field(&line("series ", "sc"), "index"), Some("2"));
    assert_eq!(field(&line("series ", "wd"), "index"), Some("2"));
    assert_eq!(field(&line("decomposition ", "dec"), "value"), Some("2"));
    let decc = line("decomposition ", "dec-closed");
    assert_eq!(field(&decc, "value"), Some("none"));
    assert_eq!(field(&decc, "non-monotone-pair"), Some("0<1"));
    assert!(out.lines().filter(|l| l.starts_with("check ")).all(|l| field(l, "outcome") != Some("violated")));
}

#[test]
fn given_certificates_are_checked() {
    let (code, out, _) = scatcont(&["map", "report", &corpus_path("swap-certificates.doc")]);
    assert_eq!(code, 0);
    let given: Vec<&str> = out.lines().filter(|l| l.starts_with("given-")).collect();
    assert_eq!(given.len(), 3);
    assert!(given.iter().all(|l| field(l, "valid") == Some("yes")), "{given:?}");

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "space S\npoints 2\nle 0 1\n\nmap swap : S -> S\nval 0 1\nval 1 0\n\ncover swap closed\npiece {{0,1}}\n").unwrap();
    let (code, out, _) = scatcont(&["map", "report", bad.path().to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(out.contains("given-cover") && out.contains("valid=no"));
}

#[test]
fn verify_is_clean_and_sorted() {
    let (code, out, _) = scatcont(&["verify", "--max-x", "3", "--max-y", "3", "--jobs", "2"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.windows(2).all(|w| w[0] <= w[1]));
    assert!(lines.contains(&"summary findings=3 violations=0"), "{out}");
    assert!(!out.contains("elapsed"));
}

#[test]
fn sampled_verify_is_seed_reproducible() {
    let args = ["verify", "--max-x", "1", "--max-y", "1", "--seed", "7", "--samples", "40"];
    let (c1, a, _) = scatcont(&[&args[..], &["--jobs", "1"]].concat());
    let (c2, b, _) = scatcont(&[&args[..], &["--jobs", "3"]].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.contains("seed value=7 prng=ChaCha8"), "{a}");
    let (_, other, _) = scatcont(&["verify", "--max-x", "1", "--max-y", "1", "--seed", "8", "--samples", "40"]);
    assert_ne!(a, other);
}

#[test]
fn mine_finds_the_witness() {
    let (code, out, _) = scatcont(&["mine", "--pattern", "sc-not-wd", "--max-x", "2", "--max-y", "2"]);
    assert_eq!(code, 0);
    let findings: Vec<&str> = out.lines().filter(|l| l.starts_with("finding ")).collect();
    assert_eq!(findings.len(), 1);
    assert_eq!(field(findings[0], "instance"), Some("X=2:0<1,1<0;Y=2:1<0;f=0,1"));
}

#[test]
fn compose_reports_bounds() {
    let doc = corpus_path("compose.doc");
    let (f, g) = (format!("{doc}#f"), format!("{doc}#g"));
    let (code, out, _) = scatcont(&["map", "compose", &f, &g, "--bounds"]);
    assert_eq!(code, 0);
    let find = |tag: &str, key: &str, value: &str| {
        out.lines().find(|l| l.starts_with(tag) && field(l, key) == Some(value)).unwrap_or_else(|| panic!("{out}")).to_string()
    };
    let gated = find("check ", "id", "comp-sc-sc-regular-middle");
    assert_eq!(field(&gated, "outcome"), Some("hypothesis-not-met"));
    assert_eq!(field(&find("summary ", "map", "g.f"), "sc"), Some("none"));
    assert_eq!(field(&find("summary ", "map", "f"), "sc"), Some("2"));
    let (code, out, _) = scatcont(&["map", "compose", &f, &g]);
    assert_eq!(code, 0);
    assert!(!out.contains("check "));
    let (code, _, err) = scatcont(&["map", "compose", &doc, &g]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn tree_report_verifies() {
    let (code, out, _) = scatcont(&["tree", "report", &corpus_path("root-indicator.tree"), "--truncate", "100"]);
    assert_eq!(code, 0);
    assert!(out.contains("tree-dec-closed map=root value=omega pigeonhole=()<-(*) certificate=ok"), "{out}");
    assert!(out.contains("model map=root depth=100 agrees=ok"), "{out}");
    let (code, out, _) = scatcont(&["tree", "report", &corpus_path("truncation-family.seq")]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("stable-cover ") && field(l, "certificate") == Some("ok")), "{out}");
}

#[test]
fn space_check_and_enum() {
    let (code, out, _) = scatcont(&["space", "check", &corpus_path("chain3.space")]);
    assert_eq!(code, 0);
    assert!(out.contains("closed-chain=3"));
    let (code, out, _) = scatcont(&["enum", "spaces", "--n", "3", "--up-to-iso"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("space ")).count(), 9);
    let (_, human, _) = scatcont(&["--format", "human", "enum", "spaces", "--n", "3"]);
    assert!(human.starts_with("[space]"));
}

#[test]
fn exit_codes() {
    assert_eq!(scatcont(&[]).0, 1);
    assert_eq!(scatcont(&["verify", "--max-x", "two", "--max-y", "1"]).0, 1);
    assert_eq!(scatcont(&["mine", "--pattern", "nope", "--max-x", "1", "--max-y", "1"]).0, 1);
    assert_eq!(scatcont(&["--help"]).0, 0);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "space C\npoints 3\nle 0 1\nle 1 2\n").unwrap();
    let path = bad.path().to_str().unwrap().to_string();
    let (code, _, err) = scatcont(&["space", "check", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("not transitive"), "{err}");
    assert_eq!(scatcont(&["space", "check", "--close", &path]).0, 0);
    assert_eq!(scatcont(&["space", "check", "/nonexistent/file"]).0, 2);

    assert_eq!(scatcont(&["enum", "spaces", "--n", "9"]).0, 3);
    assert_eq!(scatcont(&["verify", "--max-x", "8", "--max-y", "8"]).0, 3);
}
