use std::path::Path;
use std::process::{Command, Output};

fn nca(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nca"));
    c.args(args).env_remove("NCA_MAX_N");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_check_passes_with_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.trace");
    let out = nca(&["gen", "--profile", "root-heavy", "--n", "300", "--m", "600", "--seed", "4", "-o", path(&f)], &[]);
    assert!(out.status.success());
    let first = std::fs::read(&f).unwrap();
    nca(&["gen", "--profile", "root-heavy", "--n", "300", "--m", "600", "--seed", "4", "-o", path(&f)], &[]);
    assert_eq!(first, std::fs::read(&f).unwrap());

    let out = nca(
        &["run", "--engine", "oracle", "static", "inc-log2", "inc-linear", "edmonds", "link", "link-fixed",
          "--trace", path(&f), "--check", "--stats", "csv"],
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "engine,n,m,eta,reorgs,recompressions,arena_cells,max_query_steps,wall_ms");
    assert_eq!(rows.len(), 8);
    assert!(rows[1..].iter().all(|r| r.split(',').count() == 9));
}

#[test]
fn wrong_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.trace");
    std::fs::write(&f, "make_node 0\nmake_node 1\nlink 0 1\nnca 0 1 = 1\n").unwrap();
    let out = nca(&["run", "--engine", "link", "--trace", path(&f), "--check"], &[]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mismatch at op 3"), "{err}");
}

#[test]
fn usage_problems_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.trace");
    std::fs::write(&f, "make_node 0\nnca 0 5\n").unwrap();
    let parse = nca(&["run", "--engine", "oracle", "--trace", path(&f)], &[]);
    assert_eq!(parse.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));
    assert_eq!(nca(&["run", "--engine", "nope", "--trace", path(&f)], &[]).status.code(), Some(2));
    assert_eq!(nca(&["run", "--engine", "oracle", "--trace", "/nonexistent"], &[]).status.code(), Some(2));
    assert_eq!(nca(&["frob"], &[]).status.code(), Some(2));

    std::fs::write(&f, "make_node 0\nmake_node 1\nlink 0 1\n").unwrap();
    let inc = nca(&["run", "--engine", "inc-log2", "--trace", path(&f)], &[]);
    assert_eq!(inc.status.code(), Some(2));
}

#[test]
fn capacity_comes_from_env() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.trace");
    nca(&["gen", "--profile", "leaf-heavy", "--n", "100", "--m", "10", "--seed", "1", "-o", path(&f)], &[]);
    let args = ["run", "--engine", "inc-linear", "--trace", path(&f)];
    assert_eq!(nca(&args, &[("NCA_MAX_N", "64")]).status.code(), Some(2));
    assert_eq!(nca(&args, &[("NCA_MAX_N", "128")]).status.code(), Some(0));
    let mut flagged = args.to_vec();
    flagged.extend(["--max-n", "128"]);
    assert_eq!(nca(&flagged, &[("NCA_MAX_N", "64")]).status.code(), Some(0));
}
