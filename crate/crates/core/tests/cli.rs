use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;

use pathlabel::cli::star_table;
use pathlabel::graph::make_star;
use pathlabel::labelling::star_labelling;
use pathlabel::Labelling;

fn pathlabel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathlabel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pathlabel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn default_star_table() {
    let o = pathlabel(&["star-table"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8, "{text}");
    assert!(lines[0].contains("optimal_rank"));
    assert_eq!(
        lines[7],
        "| 1000000 |               39 |           210 |            6 |"
    );
}

#[test]
fn csv_tables_and_footnotes() {
    let o = pathlabel(&["binary-tree-table", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "h,vertices,theoretical_bits,universe_size,flag"
    );
    assert!(!o.stderr.is_empty(), "footnotes go to stderr in csv mode");

    let o = pathlabel(&["bloom-table", "--format", "csv", "--at-least-one"]);
    assert!(o.status.success());
    let last = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(last, "40,21,7.28,0.6,20.4");
}

#[test]
fn verify_exact_schemes() {
    let o = pathlabel(&["verify", "--star", "100", "--scheme", "star"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("false positives: 0"));

    let o = pathlabel(&["verify", "--core-periphery", "10", "--scheme", "combined"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = pathlabel(&["verify", "--binary-tree", "6", "--scheme", "combined"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = pathlabel(&["verify", "--complete", "12", "--scheme", "bit-per-vertex"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_bloom_reports_violations() {
    let mut failing = 0;
    for seed in 1..=5 {
        let s = seed.to_string();
        let o = pathlabel(&[
            "verify", "--star", "40", "--scheme", "bloom", "--m", "21", "--k", "7", "--seed", &s,
        ]);
        match o.status.code() {
            Some(0) => assert!(stdout(&o).contains("false positives: 0")),
            Some(1) => {
                failing += 1;
                assert!(
                    stdout(&o).contains("edge"),
                    "violations listed: {}",
                    stdout(&o)
                );
            }
            other => panic!("unexpected exit {other:?}"),
        }
    }
    assert!(
        failing > 0,
        "random labels on 40 edges should produce a violation"
    );
}

#[test]
fn route_examples() {
    let o = pathlabel(&[
        "route", "--star", "10", "--scheme", "star", "--from", "1", "--to", "7",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "path: 1 0 7\ncandidates: 1 1 0\noutcome: delivered at 7, 2 hops\n"
    );

    let o = pathlabel(&[
        "route", "--star", "10", "--scheme", "star", "--from", "4", "--to", "4",
    ]);
    assert!(o.status.success());
    assert!(
        stdout(&o).ends_with("delivered at 4, 0 hops\n"),
        "{}",
        stdout(&o)
    );

    // Leaf of core vertex 0 to leaf of core vertex 3.
    let o = pathlabel(&[
        "route",
        "--core-periphery",
        "5",
        "--scheme",
        "combined",
        "--from",
        "5",
        "--to",
        "17",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("path: 5 0 3 17\n"), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("3 hops\n"));
}

#[test]
fn usage_errors() {
    assert_eq!(
        pathlabel(&["verify", "--scheme", "star"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pathlabel(&["verify", "--complete", "4", "--scheme", "star"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        pathlabel(&["star-table", "--n", "abc"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pathlabel(&[
            "verify",
            "--graph",
            "/nonexistent/graph.txt",
            "--scheme",
            "bit-per-edge"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn dump_labelling_round_trips() {
    let path = scratch("star30.labels");
    let p = path.to_str().unwrap();
    let o = pathlabel(&[
        "verify",
        "--star",
        "30",
        "--scheme",
        "star",
        "--rank",
        "2",
        "--dump-labelling",
        p,
    ]);
    assert!(o.status.success());
    let dumped = Labelling::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let expected = star_labelling(30, 2).unwrap();
    assert_eq!(dumped.universe_size(), expected.universe_size());
    assert_eq!(dumped.labels(), expected.labels());
}

#[test]
fn graph_file_input() {
    // Triangle core {0,1,2} with pendant paths 0-3-4 and 2-5.
    let path = scratch("lollipop.txt");
    std::fs::write(&path, "6 6\n0 1\n1 2\n0 2\n0 3\n3 4\n2 5\n").unwrap();
    let p = path.to_str().unwrap();

    let o = pathlabel(&[
        "verify", "--graph", p, "--scheme", "combined", "--core", "0,1,2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("graph: 6 vertices, 6 edges\n"));

    let o = pathlabel(&[
        "route", "--graph", p, "--scheme", "combined", "--core", "0,1,2", "--from", "4", "--to",
        "5",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("path: 4 3 0 2 5\n"), "{}", stdout(&o));

    let tree = scratch("tree.txt");
    std::fs::write(&tree, "5 4\n0 1\n1 2\n1 3\n3 4\n").unwrap();
    let t = tree.to_str().unwrap();
    let o = pathlabel(&[
        "verify", "--graph", t, "--scheme", "combined", "--center", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // Contracting {0,1} leaves parallel edges to vertex 2.
    let o = pathlabel(&[
        "verify", "--graph", p, "--scheme", "combined", "--core", "0,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn route_matches_library_on_star() {
    let g = make_star(12).unwrap();
    let o = pathlabel(&[
        "route", "--star", "12", "--scheme", "star", "--from", "3", "--to", "9",
    ]);
    let path = g.shortest_path(3, 9).unwrap();
    let expected: Vec<String> = path.vertices.iter().map(usize::to_string).collect();
    assert!(stdout(&o).starts_with(&format!("path: {}\n", expected.join(" "))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_table_csv_matches_library(sizes in prop::collection::vec(2u64..100_000, 1..6)) {
        let list: Vec<String> = sizes.iter().map(u64::to_string).collect();
        let arg = list.join(",");
        let o = pathlabel(&["star-table", "--format", "csv", "--n", &arg]);
        prop_assert!(o.status.success());
        let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
        let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
        let rows: Vec<Vec<String>> = reader
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        let table = star_table(&sizes).unwrap();
        prop_assert_eq!(headers, table.headers);
        prop_assert_eq!(rows, table.rows);
    }
}
