//! The `lsg` binary: exit codes, error messages and the search command.

use std::path::PathBuf;
use std::process::{Command, Output};

fn lsg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsg"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_accepts_every_fixture() {
    for f in [
        "d2.gdf",
        "c8.gdf",
        "sym2.gdf",
        "c4-mixed.gdf",
        "nonflat.gdf",
    ] {
        let o = lsg(&["check", &fixture(f)]);
        assert_eq!(o.status.code(), Some(0), "{f}");
        assert!(stdout(&o).ends_with("ok\n"));
    }
}

#[test]
fn parse_errors_exit_2_with_the_line() {
    let path = scratch(
        "bad.gdf",
        "[space]\npoints = a b\n\n[groupoid]\nbuilder = torus\n",
    );
    let o = lsg(&["check", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5: unknown builder `torus`"));
    let o = lsg(&["check", "/nonexistent.gdf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guard_bounds_exit_3() {
    let o = lsg(&["report", "sheaf", &fixture("sym2.gdf"), "--max-arrows", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = lsg(&[
        "report",
        "star-connectivity",
        &fixture("c8.gdf"),
        "--max-points",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn false_properties_exit_1() {
    assert_eq!(
        lsg(&["report", "sheaf", &fixture("pair.gdf")])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lsg(&["report", "sheaf", &fixture("z2bundle.gdf")])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        lsg(&["report", "coherence", &fixture("c4-mixed.gdf")])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lsg(&["report", "connection", &fixture("nonflat.gdf")])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        lsg(&["report", "star-connectivity", &fixture("sym2.gdf")])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        lsg(&["report", "c1", &fixture("sym2.gdf")]).status.code(),
        Some(0)
    );
}

#[test]
fn search_finds_the_four_point_circle() {
    let o = lsg(&["search", "global-coherence-failure"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("# not globally coherent at p2"));
    // the printed counterexample is itself a document that fails coherence
    let path = scratch("found.gdf", &text);
    assert_eq!(lsg(&["report", "coherence", &path]).status.code(), Some(1));
    // nothing smaller exists among the candidate groupoids
    let o = lsg(&["search", "global-coherence-failure", "--max-points", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn search_in_a_file_is_limited_to_its_groupoid() {
    let o = lsg(&["search", "global-coherence-failure", &fixture("c4.gdf")]);
    assert_eq!(o.status.code(), Some(0));
    let o = lsg(&[
        "search",
        "global-coherence-failure",
        &fixture("c4-mixed.gdf"),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn gen_output_is_parseable() {
    let o = lsg(&["gen", "pair", "--on", "s2"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("pair-s2.gdf", &stdout(&o));
    assert_eq!(lsg(&["check", &path]).status.code(), Some(0));
    assert_eq!(lsg(&["gen", "sym2", "--on", "c4"]).status.code(), Some(2));
}

#[test]
fn check_reads_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let gen = lsg(&["gen", "sym2"]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_lsg"))
        .args(["check", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sym2_coherence_table_marks_c1_coherent() {
    let o = lsg(&["report", "coherence", &fixture("sym2.gdf")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let wide_rows: Vec<&str> = text
        .lines()
        .skip_while(|l| !l.starts_with("wide"))
        .collect();
    assert_eq!(
        wide_rows[1].split_whitespace().collect::<Vec<_>>(),
        ["C1", "yes", "yes"]
    );
}
