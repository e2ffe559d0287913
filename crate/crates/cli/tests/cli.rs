use std::path::{Path, PathBuf};

use serde_json::Value;

use crown_cli::{run, CommandResult, EXIT_BUDGET, EXIT_OK, EXIT_PROPERTY_FAILS, EXIT_USAGE};
use crown_core::crown::crown_oracle;
use crown_core::generators::random_linear_graph;
use crown_core::io::{parse_l3g, to_l3g};

fn crown(args: &[&str]) -> CommandResult {
    run(std::iter::once("crown").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const CROWN_L3G: &str = "9 4\n0 1 2\n0 3 4\n1 5 6\n2 7 8\n";

#[test]
fn check_reports_witness_and_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "crown.l3g", CROWN_L3G);
    let r = crown(&["check", p.to_str().unwrap()]);
    assert_eq!(r.exit_code, EXIT_PROPERTY_FAILS);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema"], "crown.witness/1");
    assert_eq!(v["base"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["jewels"].as_array().unwrap().len(), 3);

    let r = crown(&["check", "--json", p.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["crown_free"], false);
}

#[test]
fn check_agrees_with_oracle_on_a_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..60 {
        let n = 9 + (seed as usize % 5);
        let g = random_linear_graph(n, 4 + seed as usize % 9, seed)
            .unwrap()
            .graph;
        let p = write(dir.path(), "g.l3g", &to_l3g(&g));
        let r = crown(&["check", p.to_str().unwrap()]);
        let expected = if crown_oracle(&g).is_some() {
            EXIT_PROPERTY_FAILS
        } else {
            EXIT_OK
        };
        assert_eq!(r.exit_code, expected, "seed {seed}");
    }
}

#[test]
fn malformed_input_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.l3g", "9 2\n0 1 2\n0 1 3\n");
    let r = crown(&["check", p.to_str().unwrap()]);
    assert_eq!(r.exit_code, EXIT_USAGE);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
}

#[test]
fn random_output_round_trips() {
    for seed in 0..20 {
        let r = crown(&[
            "random",
            "--n",
            "12",
            "--m",
            "15",
            "--seed",
            &seed.to_string(),
        ]);
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(to_l3g(&parse_l3g(&r.stdout).unwrap()), r.stdout);
        let again = crown(&[
            "random",
            "--n",
            "12",
            "--m",
            "15",
            "--seed",
            &seed.to_string(),
        ]);
        assert_eq!(again, r);
    }
}

#[test]
fn exact_json_is_thread_independent() {
    let strip = |r: &CommandResult| {
        let mut v: Value = serde_json::from_str(&r.stdout).unwrap();
        let obj = v.as_object_mut().unwrap();
        obj.remove("elapsed_ms");
        obj.remove("nodes_explored");
        v
    };
    let one = crown(&["exact", "--n", "9", "--json", "--threads", "1"]);
    let two = crown(&["exact", "--n", "9", "--json", "--threads", "2"]);
    assert_eq!(one.exit_code, EXIT_OK);
    assert_eq!(strip(&one), strip(&two));
    let v = strip(&one);
    assert_eq!(v["schema"], "crown.certificate/1");
    assert_eq!(v["exhaustive"], true);
    assert_eq!(
        v["witnesses_l3g"].as_array().unwrap().len(),
        v["witnesses"].as_array().unwrap().len()
    );
}

#[test]
fn exact_seven_and_budget() {
    let r = crown(&["exact", "--n", "7", "--json"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["value"], 7);
    assert_eq!(v["exhaustive"], true);
    let r = crown(&["exact", "--n", "10", "--max-nodes", "2"]);
    assert_eq!(r.exit_code, EXIT_BUDGET);
    assert!(r.stdout.contains("exhaustive = false"));
    assert_eq!(crown(&["exact", "--n", "11"]).exit_code, EXIT_USAGE);
    assert_eq!(
        crown(&["exact", "--n", "13", "--best-effort"]).exit_code,
        EXIT_USAGE
    );
}

#[test]
fn lemmas_order11_prints_eleven() {
    let r = crown(&["lemmas", "--suite", "order11"]);
    assert_eq!(r.exit_code, EXIT_OK);
    assert!(r.stdout.contains("min_counterexample_order = 11"));
    let r = crown(&["lemmas", "--suite", "order11", "--json"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema"], "crown.reports/1");
    assert_eq!(v["reports"][0]["facts"]["min_counterexample_order"], 11);
}

#[test]
fn discharge_and_link_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = crown(&["construct", "--n", "11"]).stdout;
    let p = write(dir.path(), "c.l3g", &g);
    let r = crown(&["discharge", "--json", p.to_str().unwrap()]);
    assert_eq!(r.exit_code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema"], "crown.discharge/1");
    assert_eq!(v["t_star"], v["t_plain"]);
    assert_eq!(v["per_edge"].as_array().unwrap().len(), 12);

    let p = write(dir.path(), "crown.l3g", CROWN_L3G);
    let r = crown(&["link", p.to_str().unwrap(), "--edge", "0"]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["schema"], "crown.link/1");
    assert_eq!(v["class_sizes"], serde_json::json!([1, 1, 1]));
    assert!(!v["rainbow_matching"].is_null());
    let r = crown(&["link", p.to_str().unwrap(), "--edge", "0", "--dot"]);
    assert!(r.stdout.starts_with("graph"));
}

#[test]
fn discharge_reports_a_trace_when_the_sum_fits() {
    let dir = tempfile::tempdir().unwrap();
    let fano = "7 7\n0 1 2\n0 3 4\n0 5 6\n1 3 5\n1 4 6\n2 3 6\n2 4 5\n";
    let p = write(dir.path(), "fano.l3g", fano);
    let r = crown(&["discharge", "--json", p.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert!(v["trace"].is_null());
    assert!(v["trace_error"].is_string());

    // 25 edges on 15 vertices give a degree sum of exactly 5n
    let g = (0..)
        .map(|seed| random_linear_graph(15, 25, seed).unwrap().graph)
        .find(|g| g.edge_count() == 25 && g.min_degree() >= 2)
        .unwrap();
    let p = write(dir.path(), "dense.l3g", &to_l3g(&g));
    let r = crown(&["discharge", "--json", p.to_str().unwrap()]);
    assert_eq!(r.exit_code, EXIT_OK);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["verification"]["ok"], true);
    assert_eq!(v["trace"]["residue"], 0);
}
