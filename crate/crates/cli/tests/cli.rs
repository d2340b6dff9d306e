use std::path::PathBuf;
use std::process::{Command, Output};

fn bfclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bfclab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn measures_csv_rows() {
    let o = bfclab(&["measures", "--zoo", "or:4,sink:4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "name,n,s,bs,fbs,deg,D");
    assert_eq!(lines[1], "or:4,4,4,4,4.000000,4,4");
    assert!(lines[2].starts_with("sink:4,6,"));
}

#[test]
fn measures_from_file_and_json() {
    let path = scratch("and2.json");
    std::fs::write(&path, r#"{"arity": 2, "kind": "table", "table": "8"}"#).unwrap();
    let o = bfclab(&["measures", "--file", path.to_str().unwrap(), "--out", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["name"], "and2");
    assert_eq!(v[0]["bs"], 2);
}

#[test]
fn empty_input_is_an_empty_report() {
    let o = bfclab(&["measures"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "name,n,s,bs,fbs,deg,D\n");
    let o = bfclab(&["simulate", "--trials", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&bfclab(&["no-such-command"])), 2);
    assert_eq!(code(&bfclab(&["measures", "--out", "xml"])), 2);
    assert_eq!(code(&bfclab(&["measures", "--zoo", "nope:3"])), 2);
    let o = bfclab(&["simulate", "--t", "10", "--trials", "5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("t = 10"));
    assert_eq!(code(&bfclab(&["verify-walks", "--gamma-hat", "0.2"])), 2);
    assert_eq!(code(&bfclab(&["sink-poly", "--eps", "0.7"])), 2);
    let o = bfclab(&["verify-bs-chain", "--zoo", "const1:2,and:2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("non-constant required"));
}

#[test]
fn resource_bound_exits_3() {
    let o = bfclab(&["sink-poly", "--k", "6"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert_eq!(code(&bfclab(&["measures", "--zoo", "or:6", "--max-arity", "5"])), 3);
}

#[test]
fn sink_poly_writes_witness() {
    let path = scratch("sink4.txt");
    let o = bfclab(&["sink-poly", "--k", "4", "--witness", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let p = bfclab::Poly::from_text(6, &text).unwrap();
    let sink = bfclab::zoo::sink(4).unwrap();
    for x in 0..64 {
        let target = if sink.eval(x) == Some(true) { 1.0 } else { 0.0 };
        assert!((p.eval_bool(x) - target).abs() <= 1.0 / 3.0 + 1e-9);
    }
}

#[test]
fn chain_xor_xor_passes() {
    let o = bfclab(&["verify-bs-chain", "--zoo", "xor:2,xor:2", "--out", "json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let adeg = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "xor:2/xor:2/1-adeg-fg")
        .unwrap()["values"]["adeg_fg"]
        .clone();
    assert_eq!(adeg, 4);
}

#[test]
fn failing_check_exits_1() {
    // The same-error first step fails for OR_3 ∘ AND_2.
    let o = bfclab(&["verify-bs-chain", "--zoo", "or:3,and:2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("FAIL or:3/and:2/1-adeg-fg"));
}

#[test]
fn pror_and_symmetric_reports() {
    let o = bfclab(&["verify-pror"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("pror(and2,xor2)/lcm"));
    let o = bfclab(&["verify-pror", "--zoo", "maj:3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("pror(maj:3)/single,pass"));
    let o = bfclab(&["verify-symmetric", "--n-max", "4", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("band/n04,pass"));
    assert!(stdout(&o).contains("junta/example/bound,recorded"));
}

#[test]
fn simulate_reports_are_byte_identical() {
    let dir = scratch("transcripts");
    let args = [
        "simulate", "--t", "16", "--trials", "40", "--seed", "7", "--out", "json", "--transcripts",
        dir.to_str().unwrap(),
    ];
    let a = bfclab(&args);
    let b = bfclab(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    let tr = std::fs::read_to_string(dir.join("or2-t16-x3.txt")).unwrap();
    assert!(tr.starts_with("# index gamma bit cumulative_cost"));
    assert!(tr.lines().count() > 1);
}

#[test]
fn walks_seed_replay() {
    let args = ["verify-walks", "--walks", "2000", "--samples", "5000", "--bits", "20000", "--seed", "3"];
    let a = bfclab(&args);
    let b = bfclab(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("sampling/replay,pass"));
}
