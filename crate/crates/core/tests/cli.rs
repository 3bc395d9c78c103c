use std::path::Path;
use std::process::{Command, Output};

use entshare::states::{ghz, product_bits, write_state_file, AnyState};
use serde_json::Value;

fn entshare(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entshare"))
        .args(args)
        .env_remove("ENTSHARE_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn state_file(dir: &Path, name: &str, state: AnyState) -> String {
    let p = dir.join(name);
    write_state_file(&p, &state).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn measure_ghz_cut() {
    let dir = tempfile::tempdir().unwrap();
    let f = state_file(dir.path(), "ghz.json", AnyState::Pure(ghz(3).unwrap()));
    let v = json(&entshare(&["measure", "--input", &f, "--cut", "0:12"]));
    let cut = &v["cuts"][0];
    assert_eq!(cut["cut"], "0:12");
    assert!((cut["negativity"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((cut["realignment"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((cut["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // qubitwise monogamy for every focus and measure
    assert_eq!(v["monogamy"].as_array().unwrap().len(), 9);
}

#[test]
fn measure_product_is_zero_and_blocks_work() {
    let dir = tempfile::tempdir().unwrap();
    let f = state_file(dir.path(), "prod.json", AnyState::Pure(product_bits(&[0, 1, 1, 0]).unwrap()));
    let v = json(&entshare(&["measure", "--input", &f, "--blocks", "0|1|2,3"]));
    for c in v["cuts"].as_array().unwrap() {
        for k in ["concurrence", "negativity", "realignment"] {
            assert!(c[k].as_f64().unwrap().abs() < 1e-12, "{k}: {c}");
        }
    }
    let reports = v["monogamy"].as_array().unwrap();
    assert!(reports.iter().any(|r| r["inequality_id"] == "negativity_block"));
    assert!(reports.iter().all(|r| r["holds"] == true));
}

#[test]
fn malformed_input_exits_2_naming_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, r#"{"dims":[2,2],"data":[[1,0],[0,0],[0,0],[0,0]]}"#).unwrap();
    let out = entshare(&["measure", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind"));

    std::fs::write(&p, r#"{"dims":[2,2],"kind":"pure","data":[[1,0],[1,0],[0,0],[0,0]]}"#).unwrap();
    let out = entshare(&["measure", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unit norm"));

    let f = state_file(dir.path(), "ghz.json", AnyState::Pure(ghz(3).unwrap()));
    assert_eq!(entshare(&["measure", "--input", &f, "--cut", "0:1"]).status.code(), Some(2));
    assert_eq!(entshare(&["measure", "--input", &f, "--cut", "0-12"]).status.code(), Some(2));
}

#[test]
fn table1_text_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.json");
    let out = entshare(&["table1", "--out", p.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().any(|l| l.starts_with("W ") && l.contains(">0")));
    let rows: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    let ghz = rows.as_array().unwrap().iter().find(|r| r["class"] == "GHZ").unwrap();
    assert_eq!(ghz["tau_positive"], true);
    assert_eq!(ghz["pi_positive"], true);
}

#[test]
fn sweep_csv_and_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fig.csv");
    assert!(entshare(&["sweep", "--step", "0.01", "--out", p.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,tau_N,tau_R"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[100][0], 1.0);
    assert!(rows.iter().all(|r| r[1] >= 0.0 && r[2] >= 0.0 && r[1] <= r[2] + 1e-9));

    let bad = dir.path().join("missing/dir/fig.csv");
    assert_eq!(entshare(&["sweep", "--out", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(entshare(&["sweep", "--step", "0"]).status.code(), Some(2));
}

#[test]
fn conjecture_is_deterministic_and_seed_flag_wins() {
    let a = entshare(&["conjecture", "--qubits", "4", "--samples", "30", "--seed", "11"]);
    let b = Command::new(env!("CARGO_BIN_EXE_entshare"))
        .args(["conjecture", "--qubits", "4", "--samples", "30"])
        .env("ENTSHARE_SEED", "11")
        .output()
        .unwrap();
    let c = Command::new(env!("CARGO_BIN_EXE_entshare"))
        .args(["conjecture", "--qubits", "4", "--samples", "30", "--seed", "11"])
        .env("ENTSHARE_SEED", "12")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["violations"], 0);

    let empty = json(&entshare(&["conjecture", "--qubits", "3", "--samples", "0"]));
    assert_eq!(empty["evaluations"], 0);
    assert_eq!(empty["min_slack"], Value::Null);
}

#[test]
fn bloch_reports_and_non_physical_exit() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.csv");
    std::fs::write(&p, "# Bell\n1,0,0,0,-1,0,0,0,1,0,0,0,0,0,0\n").unwrap();
    let v = json(&entshare(&["bloch", "--input", p.to_str().unwrap()]));
    assert!((v["negativity"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(v["separable"], false);
    assert!((v["realignment_closed_form"]["closed_form_norm"].as_f64().unwrap() - 2.0).abs() < 1e-12);

    std::fs::write(&p, "0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n").unwrap();
    let v = json(&entshare(&["bloch", "--input", p.to_str().unwrap()]));
    assert_eq!(v["separable"], true);
    for k in ["concurrence", "negativity", "realignment"] {
        assert!(v[k].as_f64().unwrap().abs() < 1e-12);
    }

    std::fs::write(&p, "1,0,0,0,1,0,0,0,1,0,0,0,0,0,0\n").unwrap();
    let out = entshare(&["bloch", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("minimum eigenvalue -5"));

    std::fs::write(&p, "1,0,0\n").unwrap();
    assert_eq!(entshare(&["bloch", "--input", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = state_file(dir.path(), "ghz.json", AnyState::Pure(ghz(3).unwrap()));
    let v = json(&entshare(&["classify", "--input", &f]));
    assert_eq!(v["class"], "GHZ");
    let f = state_file(dir.path(), "m.json", AnyState::Mixed(ghz(3).unwrap().to_density()));
    assert_eq!(entshare(&["classify", "--input", &f]).status.code(), Some(2));
}

#[test]
fn written_state_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let state = AnyState::Mixed(entshare::states::ghz_w_mixture(0.4).unwrap());
    let f = state_file(dir.path(), "mix.json", state.clone());
    assert_eq!(entshare::states::read_state_file(Path::new(&f)).unwrap(), state);
    let v = json(&entshare(&["measure", "--input", &f]));
    assert_eq!(v["kind"], "mixed");
    assert_eq!(v["cuts"].as_array().unwrap().len(), 3);
}
