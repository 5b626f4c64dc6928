use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khbeta")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn cell(entry: &Value, i: i64, q: i64, kind: &str) -> Option<u64> {
    entry["table"].as_array().unwrap().iter().find_map(|c| {
        (c["i"] == i && c["q"] == q && c["kind"] == kind).then(|| c["rank"].as_u64().unwrap())
    })
}

fn braid_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn kh_table_of_trefoil() {
    let o = run(&["homology", "--theory", "kh", "--char", "3", "trefoil"]);
    assert!(o.status.success());
    let e = &json_lines(&o)[0];
    assert_eq!(cell(e, 0, 1, "free"), Some(1));
    assert_eq!(cell(e, 0, 3, "free"), Some(1));
}

#[test]
fn bn_table_of_unknot() {
    let o = run(&["homology", "--theory", "bn", "--char", "3", "unknot"]);
    assert!(o.status.success());
    let e = &json_lines(&o)[0];
    assert_eq!(cell(e, 0, -1, "free"), Some(1));
    assert_eq!(cell(e, 0, 1, "free"), Some(1));
    assert_eq!(e["table"].as_array().unwrap().len(), 2);
}

#[test]
fn chain_summary_for_big() {
    let o = run(&["homology", "--theory", "big", "trefoil"]);
    assert!(o.status.success());
    let e = &json_lines(&o)[0];
    assert_eq!(e["chain_checks"]["d_squared_zero"], true);
    assert!(e["note"].as_str().unwrap().contains("chain-level"));
}

#[test]
fn malformed_line_is_a_usage_error() {
    let f = braid_file("trefoil : 2 : 1 1 1\nbroken : two : 1\n");
    let o = run(&["invariants", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn bad_characteristic_is_a_usage_error() {
    assert_eq!(run(&["invariants", "--char", "4", "trefoil"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", "--theory", "tlee", "trefoil"]).status.code(), Some(2));
}

#[test]
fn characteristic_two_warns() {
    let o = run(&["invariants", "--char", "2", "unknot"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}

#[test]
fn invariant_values() {
    let t = &json_lines(&run(&["invariants", "trefoil"]))[0];
    assert_eq!((t["sl"].as_i64(), t["c"].as_i64(), t["c_bar"].as_i64(), t["s"].as_i64()), (Some(1), Some(0), Some(0), Some(2)));
    assert_eq!(t["psi_vanishes"], false);
    let n = &json_lines(&run(&["invariants", "2 : -1"]))[0];
    assert_eq!((n["sl"].as_i64(), n["c"].as_i64(), n["s"].as_i64()), (Some(-3), Some(1), Some(0)));
    assert_eq!(n["psi_vanishes"], true);
    let u = &json_lines(&run(&["invariants", "1 :"]))[0];
    assert_eq!((u["sl"].as_i64(), u["c"].as_i64(), u["s"].as_i64()), (Some(-1), Some(0), Some(0)));
    for key in ["name", "strands", "letters", "writhe", "theory", "char", "conventions"] {
        assert!(t.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn links_get_a_null_s_with_reason() {
    let h = &json_lines(&run(&["invariants", "hopf"]))[0];
    assert!(h["s"].is_null());
    assert!(h["s_reason"].as_str().unwrap().contains("2 components"));
}

#[test]
fn csv_and_json_agree() {
    let f = braid_file("a : 2 : 1 1 1\nb : 3 : 1 -2 1 -2\nc : 2 : -1\n");
    let path = f.path().to_str().unwrap();
    let js = json_lines(&run(&["invariants", path]));
    let csv_text = stdout(&run(&["invariants", "--format", "csv", path]));
    let mut rdr = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = rdr.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), js.len());
    for (row, j) in rows.iter().zip(&js) {
        for (h, v) in headers.iter().zip(row.iter()) {
            let expect = match &j[h] {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                Value::Array(a) => a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                other => other.to_string(),
            };
            assert_eq!(v, expect, "column {h}");
        }
    }
}

#[test]
fn batch_keeps_input_order() {
    let names = ["5_2", "unknot", "3_1", "4_1", "hopf", "5_1"];
    let text: String = names
        .iter()
        .map(|n| {
            let o = run(&["invariants", n]);
            let j = &json_lines(&o)[0];
            let letters: Vec<String> = j["letters"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
            format!("{n} : {} : {}\n", j["strands"], letters.join(" "))
        })
        .collect();
    let f = braid_file(&text);
    let o = run(&["batch", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    let got: Vec<String> = json_lines(&o).iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(got, names);
}

#[test]
fn verify_runs() {
    let o = run(&["verify", "--moves", "50", "--seed", "7", "trefoil"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let trace = json_lines(&o);
    assert!(!trace.is_empty());
    for e in &trace {
        assert_eq!(e["status"], "pass");
        for key in ["move", "site", "assertion", "status"] {
            assert!(e.get(key).is_some());
        }
    }
    assert_eq!(run(&["verify", "--moves", "0", "trefoil"]).status.code(), Some(0));
}

#[test]
fn verify_with_negative_stabilizations() {
    let o = run(&["verify", "--moves", "30", "--seed", "1", "--allow-negative", "unknot"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json_lines(&o).iter().any(|e| e["assertion"].as_str().unwrap().starts_with("U*phi1-")));
}

#[test]
fn verify_traces_are_reproducible() {
    let a = run(&["verify", "--moves", "25", "--seed", "11", "figure_eight"]);
    let b = run(&["verify", "--moves", "25", "--seed", "11", "figure_eight"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let o = run(&["verify", "--moves", "5", "--out", path.to_str().unwrap(), "trefoil"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().lines().count() > 0);
}

#[test]
fn c_simplicity_rows() {
    let t = &json_lines(&run(&["check-c-simple", "trefoil"]))[0];
    assert_eq!(t["cond1"], true);
    assert_eq!(t["identity_holds"], true);
    let f8 = &json_lines(&run(&["check-c-simple", "figure_eight"]))[0];
    assert_eq!(f8["pseudo_thin"], true);
    assert_eq!(f8["identity_holds"], true);
    let k = &json_lines(&run(&["check-c-simple", "10_139"]))[0];
    assert!(k["cond1"] == true || k["cond2"] == true || k["cond3"] == true);
    let h = run(&["check-c-simple", "hopf"]);
    assert!(h.status.success());
    assert!(json_lines(&h)[0]["skipped"].as_str().is_some());
}
