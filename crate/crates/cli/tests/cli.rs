use std::path::Path;
use std::process::{Command, Output};

fn netcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netcode"))
        .args(args)
        .env_remove("NETCODE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn detect_triangle_passes() {
    let o = netcode(&["detect", "--graph", "cycle:3", "--code", "rep", "--m", "6", "--protocol", "triangle", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS detect triangle-detect on 3 nodes, m=6"));
    assert!(text.contains("max_bits = 18"));
}

#[test]
fn detect_parity_costs_three_symbols() {
    let o = netcode(&["detect", "--graph", "complete:4", "--code", "parity", "--m", "2", "--protocol", "parity", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"][0]["metrics"]["max_bits"], "6");
    assert_eq!(v["checks"][0]["metrics"]["min_bits"], "6");
}

#[test]
fn usage_errors_exit_2() {
    let unknown = netcode(&["detect", "--graph", "cycle:3", "--m", "2", "--protocol", "gossip"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown protocol"));
    let bad_graph = netcode(&["detect", "--graph", "torus:3", "--m", "2"]);
    assert_eq!(bad_graph.status.code(), Some(2));
    let no_subcommand = netcode(&[]);
    assert_eq!(no_subcommand.status.code(), Some(2));
    let wrong_code = netcode(&["detect", "--graph", "cycle:3", "--code", "parity", "--m", "2", "--protocol", "triangle"]);
    assert_eq!(wrong_code.status.code(), Some(2));
}

#[test]
fn correct_cycle_and_triangle() {
    let o = netcode(&["correct", "--graph", "cycle:4", "--m", "4", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = netcode(&["correct", "--graph", "cycle:3", "--m", "6", "--protocol", "triangle", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["checks"][0]["metrics"]["max_total_bits"], "30");
    assert_eq!(v["checks"][0]["metrics"]["cases"], "12160");
}

#[test]
fn correct_refuses_two_errors_on_cycles() {
    for protocol in ["cycle", "triangle"] {
        let o = netcode(&["correct", "--graph", "cycle:3", "--m", "2", "--protocol", protocol, "--t", "2"]);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("out of contract"));
    }
}

#[test]
fn bounds_lp_and_mds() {
    let o = netcode(&["bounds", "--graph", "cycle:5", "--n", "5", "--k", "1", "--d", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("bound,value,applicability\n"));
    assert!(csv.contains("\nlp,5/2,applicable\n"));

    let o = netcode(&["bounds", "--n", "4", "--k", "2", "--mds", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v["bounds"].as_array().unwrap();
    let value = |name: &str| rows.iter().find(|r| r["bound"] == name).unwrap()["value"].clone();
    assert_eq!(value("mds"), "3");
    assert_eq!(value("closed_nkd"), "3");
    assert_eq!(value("lp"), "3");
    assert_eq!(value("combined"), "3");
}

#[test]
fn bounds_inapplicable_lp_is_not_an_error() {
    let o = netcode(&["bounds", "--graph", "cycle:6", "--k", "1", "--d", "2", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("inapplicable: n = 6 > 2(d-1) = 2"), "{text}");
}

#[test]
fn verify_all_writes_report_and_exit_status_matches() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = netcode(&["verify-all", "--format", "json", "--output", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["generated_at"].is_string());
    let passed = v["passed"].as_bool().unwrap();
    assert_eq!(o.status.code(), Some(if passed { 0 } else { 1 }));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 9);

    let subset = netcode(&["verify-all", "--criteria", "1,2,3,4,6,7,8,9", "--no-timestamp"]);
    assert_eq!(subset.status.code(), Some(0), "{}", stdout(&subset));
}

#[test]
fn verify_all_mutation_fails_with_counterexample() {
    let o = netcode(&["verify-all", "--criteria", "1", "--mutate", "drop-triangle-check", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL detect triangle-detect"));
    assert!(text.contains("non-codeword accepted"));
    assert!(text.contains("| input ("));
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn verify_all_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "1", "4", "3"].iter().enumerate() {
        for format in ["json", "text", "csv"] {
            let path = dir.path().join(format!("{i}.{format}"));
            netcode(&[
                "verify-all",
                "--threads",
                threads,
                "--no-timestamp",
                "--format",
                format,
                "--output",
                path.to_str().unwrap(),
            ]);
            outputs.push((format, read(&path)));
        }
    }
    for (format, bytes) in &outputs[3..] {
        let reference = &outputs.iter().find(|(f, _)| f == format).unwrap().1;
        assert_eq!(bytes, reference, "{format} report differs");
    }
}

#[test]
fn config_file_sets_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# detection run\ngraph = complete:4\ncode = parity\nm = 2\nprotocol = parity\nformat = json\nno_timestamp = true\n").unwrap();
    let o = netcode(&["detect", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["checks"][0]["metrics"]["max_bits"], "6");

    let o = netcode(&["detect", "--config", cfg.to_str().unwrap(), "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["checks"][0]["metrics"]["max_bits"], "3");

    std::fs::write(&cfg, "graph complete:4\n").unwrap();
    assert_eq!(netcode(&["detect", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn budget_env_var_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_netcode"))
        .args(["detect", "--graph", "cycle:3", "--m", "6", "--protocol", "triangle"])
        .env("NETCODE_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capacity exceeded"));
}

#[test]
fn free_set_build_f_and_transcript() {
    let o = netcode(&["free-set", "--range", "9", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["size"], 5);
    assert_eq!(v["verified_free"], true);

    let o = netcode(&["free-set", "--m", "4", "--format", "json", "--no-timestamp"]);
    assert_eq!(json(&o)["members"], serde_json::json!([1, 2, 4, 5]));

    let o = netcode(&["build-f", "--n", "3", "--m", "4", "--format", "json", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["cycles"].as_array().unwrap().len(), 16);
    assert_eq!(v["properties"]["special_cycles"], 16);

    let o = netcode(&["transcript", "--graph", "cycle:3", "--m", "2", "--protocol", "triangle", "--input", "1,1,3", "--correct", "--no-timestamp"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("output (01,01,01)"), "{text}");
    assert!(text.starts_with("input (01,01,11)\n1 1->2 bits:"));
}
