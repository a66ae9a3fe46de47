use std::process::{Command, Output};

fn qch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qch")).args(args).env_remove("QCH_PRIME_COUNT").output().expect("run qch")
}

fn reports(o: &Output) -> Vec<serde_json::Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).expect("JSON line")).collect()
}

#[test]
fn rmatrix_example_gives_three_pass_reports() {
    let o = qch(&["rmatrix", "--k", "2", "--checks", "ybe,bmw,height", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = reports(&o);
    assert_eq!(rs.len(), 3);
    assert!(rs.iter().all(|r| r["status"] == "pass"), "{rs:?}");
    assert_eq!(rs[0]["params"]["k"], 2);
    assert!(rs[0]["elapsed_ms"].is_u64());
}

#[test]
fn parent_at_k1_is_exact_zero() {
    let o = qch(&["qma", "--k", "1", "--pair", "rtt", "--verify", "parent", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = reports(&o);
    assert_eq!(rs.len(), 1);
    assert_eq!(rs[0]["status"], "pass");
    assert!(rs[0]["check"].as_str().unwrap().contains("literal"));
    assert!(rs[0].get("residual").is_none());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["rmatrix", "--checks", "nope"][..],
        &["qma", "--pair", "xyz"],
        &["qma", "--k", "0"],
        &["frobnicate"],
        &["classical", "--g", "1/0x"],
        &["ideal", "--degree", "1"],
    ] {
        let o = qch(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn failing_check_exits_1_with_json_on_stderr() {
    let dir = std::env::temp_dir().join(format!("qch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.json");
    let dump = qch(&["dump", "--k", "1", "--what", "r"]);
    std::fs::write(&path, &dump.stdout).unwrap();
    // Without μ there is no BMW data, so the height search cannot run.
    let o = qch(&["rmatrix", "--input", path.to_str().unwrap(), "--checks", "ybe,height", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let rs = reports(&o);
    assert_eq!(rs[0]["status"], "pass");
    assert_eq!(rs[1]["status"], "fail");
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).lines().next().unwrap()).unwrap();
    assert_eq!(err["status"], "fail");
    // With μ the supplied matrix is classified as Sp(2).
    let o = qch(&["rmatrix", "--input", path.to_str().unwrap(), "--mu", "-q^-3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = reports(&o);
    assert_eq!(rs.len(), 4);
    assert!(rs[3]["detail"].as_str().unwrap().contains("Sp(2)"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn prime_count_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_qch")).args(["ideal", "--k", "1", "--json"]).env("QCH_PRIME_COUNT", "5").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let rs = reports(&o);
    assert_eq!(rs[0]["params"]["primes"], 5);
    assert_eq!(rs[0]["sampled_primes"].as_array().unwrap().len(), 5);
    assert_eq!(rs[0]["params"]["degrees"], serde_json::json!([2]));
}

#[test]
fn appendix_prints_130_relations() {
    let o = qch(&["appendix"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout).to_string();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 130);
    assert!(lines.iter().all(|l| l.split('\t').count() == 3 && l.contains(" * M[")));
    let printed = String::from_utf8_lossy(&qch(&["appendix", "--as-printed"]).stdout).to_string();
    let differ = text.lines().zip(printed.lines()).filter(|(a, b)| a != b).count();
    assert_eq!(differ, 1);
}

#[test]
fn dump_is_json_records() {
    let o = qch(&["dump", "--k", "2", "--what", "k"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 16);
    assert!(recs.iter().all(|r| r["in"].as_array().unwrap().len() == 2 && r["coeff"].is_string()));
}

#[test]
fn witness_export_lists_terms() {
    let o = qch(&["ideal", "--k", "1", "--pair", "re", "--witness", "ch"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let nrel = v["relations"].as_array().unwrap().len();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    for e in entries {
        assert_eq!(e["verified"], true);
        for t in e["witness"].as_array().unwrap() {
            let t = t.as_array().unwrap();
            assert_eq!(t.len(), 4);
            assert!(t[0].is_string() && t[1].is_string() && t[3].is_string());
            assert!((t[2].as_u64().unwrap() as usize) < nrel);
        }
    }
}
