use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use tempfile::TempDir;

use liechief::corpus::{self, BUILTIN_NAMES};
use liechief_cli::format;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liechief"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn export(dir: &Path, name: &str, field: &str) -> PathBuf {
    let path = dir.join(format!("{name}-{field}.txt"));
    let o = run(&["corpus", "export", name, "--field", field, "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn every_builtin_round_trips() {
    for p in [2, 3, 5, 7] {
        for name in BUILTIN_NAMES {
            let Ok(e) = corpus::builtin(name, p) else { continue };
            let text = format::write(&e.algebra, Some(name));
            assert_eq!(format::parse(&text, None).unwrap(), e.algebra, "{name} over GF({p})");
            assert_eq!(format::write(&format::parse(&text, None).unwrap(), Some(name)), text);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn random_algebras_round_trip(dim in 1usize..=5, p in prop::sample::select(vec![2u8, 3, 5, 7]), seed in 0u64..10_000) {
        let l = corpus::random_solvable(dim, p, seed).unwrap();
        prop_assert_eq!(format::parse(&format::write(&l, None), Some(p)).unwrap(), l);
    }
}

#[test]
fn validate_reports() {
    let dir = TempDir::new().unwrap();
    let h = export(dir.path(), "heisenberg", "2");
    let o = run(&["validate", h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid, solvable, derived length 2"));

    let a = write(dir.path(), "empty.txt", "field = 2\ndim = 2\n");
    let o = run(&["validate", a.to_str().unwrap()]);
    assert!(stdout(&o).contains("valid, abelian"));

    let bad = write(dir.path(), "bad.txt", "field = 3\ndim = 3\nc[1][2][3] = 1\nc[2][1][3] = 1\n");
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("antisymmetry fails at (1,2,3)"));

    let jacobi = write(dir.path(), "jacobi.txt", "field = 3\ndim = 3\nc[1][2][3] = 1\nc[2][3][1] = 1\nc[1][3][1] = 1\n");
    assert_eq!(run(&["validate", jacobi.to_str().unwrap()]).status.code(), Some(2));

    let garbled = write(dir.path(), "garbled.txt", "field = 2\ndim = 2\nbracket x y\n");
    let o = run(&["validate", garbled.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(run(&["validate", "/nonexistent/file"]).status.code(), Some(1));
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let h = export(dir.path(), "heisenberg", "2");
    let o = run(&["analyze", h.to_str().unwrap(), "--oracle", "on"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("φ = <x3>"), "{text}");
    assert!(text.contains("chief factors: Frattini, complemented, complemented"));
    assert!(text.contains("oracle cross-check: agrees"));

    let s = export(dir.path(), "sl2", "5");
    let text = stdout(&run(&["analyze", s.to_str().unwrap()]));
    assert!(text.contains("primitive type 2"));
    assert!(text.contains("chief factors: supplemented\n"));

    let a = export(dir.path(), "abelian2", "2");
    let o = run(&["analyze", a.to_str().unwrap(), "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["minimal_ideals"].as_array().unwrap().len(), 3);
    assert_eq!(v["frattini"]["dim"], 0);
}

#[test]
fn budget_refusal() {
    let dir = TempDir::new().unwrap();
    let big = export(dir.path(), "abelian6", "7");
    let o = run(&["analyze", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let seven = write(dir.path(), "seven.txt", "field = 2\ndim = 7\n");
    let o = run(&["analyze", seven.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("subspaces"));
    let r4 = export(dir.path(), "r4", "2");
    assert_eq!(run(&["chief-series", r4.to_str().unwrap(), "--all", "--cap", "5"]).status.code(), Some(3));
}

#[test]
fn chief_series_listing() {
    let dir = TempDir::new().unwrap();
    let h = export(dir.path(), "heisenberg", "2");
    let text = stdout(&run(&["chief-series", h.to_str().unwrap(), "--all", "--oracle", "on"]));
    assert!(text.ends_with("3 chief series\n"), "{text}");
}

#[test]
fn jh_reports() {
    let dir = TempDir::new().unwrap();
    let a = export(dir.path(), "abelian2", "2");
    let o = run(&["jh", a.to_str().unwrap(), "1,0", "0,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("σ = (1 2); m-related cases 1, 1"), "{text}");
    assert!(text.contains("common complements found (2)"));

    let o = run(&["jh", a.to_str().unwrap(), "0 | 1,0 | L", "1,0"]);
    assert!(stdout(&o).contains("σ = id"));

    let o = run(&["jh", a.to_str().unwrap(), "1,0", "0,1", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sigma"]["cycles"], "(1 2)");
    assert_eq!(v["per_index"][0]["witness"]["case"], 1);

    let o = run(&["jh", a.to_str().unwrap(), "1,0,1", "0,1"]);
    assert_eq!(o.status.code(), Some(1));
    let h = export(dir.path(), "heisenberg", "2");
    let o = run(&["jh", h.to_str().unwrap(), "1,0,0", "0,0,1|1,0,0;0,0,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not an ideal"));
}

#[test]
fn r4_all_pairs() {
    let dir = TempDir::new().unwrap();
    let r4 = export(dir.path(), "r4", "2");
    let o = run(&["jh", r4.to_str().unwrap(), "--all-pairs"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("441 pair reports, all verified\n"));
    let o = run(&["jh", r4.to_str().unwrap(), "--all-pairs", "--format", "structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pairs"], 441);
    assert_eq!(v["failures"], 0);
}

#[test]
fn corpus_commands() {
    let text = stdout(&run(&["corpus", "list"]));
    for name in BUILTIN_NAMES {
        assert!(text.contains(name));
    }
    let a = stdout(&run(&["corpus", "export", "random4", "--seed", "9", "--field", "3"]));
    let b = stdout(&run(&["corpus", "export", "random4", "--seed", "9", "--field", "3"]));
    assert_eq!(a, b);
    assert_eq!(format::parse(&a, Some(3)).unwrap(), corpus::random_solvable(4, 3, 9).unwrap());
    assert_eq!(run(&["corpus", "export", "e8"]).status.code(), Some(1));
    assert_eq!(run(&["corpus", "export", "sl2", "--field", "4"]).status.code(), Some(1));
    assert_eq!(run(&["corpus", "export", "sl2", "--field", "3"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
