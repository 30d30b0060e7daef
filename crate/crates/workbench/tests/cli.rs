//! End-to-end tests of the `workbench` binary: exit codes, report
//! shapes, determinism of JSON output, and the documented file formats.

use std::process::{Command, Output};

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bounds_prints_the_number() {
    let out = workbench(&["bounds", "--group", "sl3", "--p", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "27\n");

    let out = workbench(&["bounds", "--group", "sl3", "--p", "5"]);
    assert_eq!(stdout(&out), "621\n");

    let out = workbench(&["bounds", "--group", "sp4", "--p", "3"]);
    assert_eq!(stdout(&out), "161\n");
}

#[test]
fn non_prime_level_is_a_usage_error() {
    let out = workbench(&["building", "--group", "sl3", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = workbench(&["bounds", "--group", "sl3", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = workbench(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_group_and_parabolic_is_a_usage_error() {
    let out = workbench(&["parabolic", "--group", "sl3", "--which", "G0", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn level_beyond_the_enumeration_cap_is_a_usage_error() {
    let out = workbench(&["generators", "--p", "17"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifest_goes_to_stderr_with_wall_time() {
    let out = workbench(&["orders", "--group", "sl3", "--p", "3"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let manifest: serde_json::Value = serde_json::from_str(err.lines().last().unwrap()).unwrap();
    assert_eq!(manifest["kind"], "manifest");
    assert_eq!(manifest["command"], "orders");
    assert_eq!(manifest["p"], "3");
    assert!(manifest["wall_time_ms"].is_string());
}

#[test]
fn json_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = workbench(&[
            "parabolic",
            "--group",
            "sp4",
            "--which",
            "G0",
            "--p",
            "3",
            "--json",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "two runs must be byte-identical");
}

#[test]
fn parabolic_json_matches_the_g0_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g0.json");
    let out = workbench(&[
        "parabolic",
        "--group",
        "sp4",
        "--which",
        "G0",
        "--p",
        "3",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["kind"], "parabolic");
    assert_eq!(doc["p"], "3");
    let degrees = doc["degrees"].as_array().unwrap();
    assert_eq!(degrees.len(), 5);
    assert_eq!(degrees[0]["free_rank"], "1");
    assert_eq!(degrees[2]["free_rank"], "2");
    let torsion: Vec<&str> = degrees[2]["torsion"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert_eq!(torsion, ["3", "6"]);
}

#[test]
fn orders_json_has_string_valued_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orders.json");
    let out = workbench(&[
        "orders",
        "--group",
        "sl3",
        "--p",
        "3",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["group_order"], "5616");
    assert_eq!(doc["indices"]["I0"], "52");
    assert_eq!(doc["indices"]["I1"], "13");
    assert_eq!(doc["stabilizer_orders"]["B"], "108");
}

#[test]
fn building_edge_list_format() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let json = dir.path().join("building.json");
    let out = workbench(&[
        "building",
        "--group",
        "sl3",
        "--p",
        "3",
        "--edge-list",
        edges.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let text = std::fs::read_to_string(&edges).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 52);
    for line in &lines {
        let mut parts = line.split(' ');
        let u: usize = parts.next().unwrap().parse().unwrap();
        let v: usize = parts.next().unwrap().parse().unwrap();
        assert!(parts.next().is_none());
        assert!(u < 13, "left block is 0..13");
        assert!(
            (13..26).contains(&v),
            "right block is offset by the left count"
        );
    }

    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["h1"], "27");
    assert_eq!(doc["left"].as_array().unwrap().len(), 13);
    // representative of the first line: a single rref row over F_3
    assert_eq!(doc["left"][0][0].as_array().unwrap().len(), 3);
}

#[test]
fn generators_json_round_trips_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gens.json");
    let out = workbench(&["generators", "--p", "5", "--json", path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["rank"], "11");
    assert_eq!(doc["index"], "60");
    let gens = doc["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 11);
    for g in gens {
        let rows: Vec<Vec<String>> = g["matrix"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                r.as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_str().unwrap().to_string())
                    .collect()
            })
            .collect();
        let m = workbench::json::matrix_from_json(&rows).unwrap();
        // congruence and determinant conditions survive the round trip
        use num_bigint::BigInt;
        assert_eq!(m.det(), BigInt::from(1));
        for r in 0..2 {
            for c in 0..2 {
                let want = i64::from(r == c);
                let diff = m.at(r, c) - BigInt::from(want);
                assert_eq!(diff % BigInt::from(5), BigInt::from(0));
            }
        }
        assert!(g["word"].as_str().unwrap().split(' ').count() >= 1);
    }
}

#[test]
fn les_json_reports_chi_zero_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("les.json");
    let out = workbench(&[
        "les",
        "--group",
        "sp4",
        "--p",
        "3",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["chi_check"], "0");
    assert_eq!(doc["derived_bounds"]["4"], "161");
    assert_eq!(doc["vertex_term_ranks"].as_array().unwrap().len(), 5);
}

#[test]
fn les_over_a_field_keeps_chi_zero() {
    let out = workbench(&["les", "--group", "sl3", "--p", "3", "--field-char", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("chi = 0"));
    // q = p is rejected as an invariant violation of the request
    let out = workbench(&["les", "--group", "sl3", "--p", "3", "--field-char", "3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_all_passes_at_p3() {
    let out = workbench(&["verify-all", "--p", "3"]);
    assert!(out.status.success(), "stdout: {}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("ok les-sl3"));
    assert!(text.contains("ok les-sp4"));
    assert!(text.contains("all checks passed"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn help_mentions_every_subcommand() {
    let out = workbench(&["--help"]);
    let text = stdout(&out);
    for sub in [
        "orders",
        "building",
        "generators",
        "parabolic",
        "les",
        "bounds",
        "verify-all",
    ] {
        assert!(text.contains(sub), "missing {sub} in help");
    }
}
