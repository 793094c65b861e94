//! Generated documents against the checked-in fixtures, and round trips.

use std::path::PathBuf;

use lsg_cli::gen::{generate, Example};
use lsg_cli::parse_gdf;
use lsg_cli::report::{self, Options};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap()
}

const GENERATED: [(Example, &str); 7] = [
    (Example::D2, "d2.gdf"),
    (Example::S2, "s2.gdf"),
    (Example::C4, "c4.gdf"),
    (Example::C8, "c8.gdf"),
    (Example::Pair, "pair.gdf"),
    (Example::Z2bundle, "z2bundle.gdf"),
    (Example::Sym2, "sym2.gdf"),
];

#[test]
fn generated_examples_match_fixtures() {
    for (example, file) in GENERATED {
        assert_eq!(
            generate(example, None).unwrap().to_string(),
            read(file),
            "{file}"
        );
    }
}

#[test]
fn every_fixture_round_trips() {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "gdf"))
        .collect();
    files.sort();
    assert!(files.len() >= 9);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_gdf(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let printed = doc.to_string();
        let again = parse_gdf(&printed).unwrap();
        assert_eq!(again, doc, "{}", path.display());
        assert_eq!(again.to_string(), printed, "{}", path.display());
    }
}

#[test]
fn pair_and_bundle_follow_the_base_space() {
    let doc = generate(Example::Pair, Some("c4")).unwrap();
    assert_eq!(doc.q().len(), 16);
    let doc = generate(Example::Z2bundle, Some("s2")).unwrap();
    assert_eq!(doc.q().len(), 4);
    assert!(generate(Example::Sym2, Some("c4")).is_err());
    assert!(generate(Example::Pair, Some("torus")).is_err());
}

#[test]
fn mixed_atlas_fails_global_coherence_at_y1() {
    let doc = parse_gdf(&read("c4-mixed.gdf")).unwrap();
    let r = report::coherence(&doc, &Options::default()).unwrap();
    assert!(!r.holds);
    let row = r
        .text
        .lines()
        .find(|l| l.starts_with("atlas mixed"))
        .unwrap();
    assert_eq!(
        row.split_whitespace().collect::<Vec<_>>(),
        ["atlas", "mixed", "yes", "no", "yes", "yes"]
    );
    assert!(r.text.contains("at y1: loc(glob(s)) adds {x1/x2, x2/x1}"));
}

#[test]
fn oracle_glob_gives_the_same_coherence_table() {
    for file in ["c4-mixed.gdf", "pair.gdf", "z2bundle.gdf"] {
        let doc = parse_gdf(&read(file)).unwrap();
        let fast = report::coherence(&doc, &Options::default()).unwrap();
        let slow = report::coherence(
            &doc,
            &Options {
                oracle: true,
                ..Options::default()
            },
        )
        .unwrap();
        assert_eq!(fast, slow, "{file}");
    }
}

#[test]
fn twisted_connection_has_a_cycle_witness() {
    let doc = parse_gdf(&read("nonflat.gdf")).unwrap();
    let r = report::connection(&doc, &Options::default()).unwrap();
    assert!(!r.holds);
    assert!(r
        .text
        .contains("witness: cycle x1 y1 x2 y2 x1 transports to x1/x1^1"));
    assert!(r.text.contains("connection flat:\n  flat: yes"));
}

#[test]
fn sheaf_report_separates_bundles_from_pairs() {
    let bundle = parse_gdf(&read("z2bundle.gdf")).unwrap();
    assert!(report::sheaf(&bundle, &Options::default()).unwrap().holds);
    let pair = parse_gdf(&read("pair.gdf")).unwrap();
    let r = report::sheaf(&pair, &Options::default()).unwrap();
    assert!(!r.holds);
    assert!(r.text.contains("is not unique"));
}
