use std::path::Path;
use std::process::{Command, Output};

fn bh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bh"))
        .args(args)
        .output()
        .expect("bh runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_exit_codes() {
    assert_eq!(bh(&["classify", "4", "2"]).status.code(), Some(0));
    assert_eq!(bh(&["classify", "8", "2"]).status.code(), Some(1));
    let open = (2..=100)
        .flat_map(|n| (2..=100).map(move |h| (n, h)))
        .find(|&(n, h)| butson::existence::classify(n, h).is_open())
        .unwrap();
    let (n, h) = (open.0.to_string(), open.1.to_string());
    assert_eq!(bh(&["classify", &n, &h]).status.code(), Some(2));
}

#[test]
fn classify_json_names_rule() {
    let o = bh(&["classify", "8", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "not_exists");
    assert_eq!(v["rule"], "prime_power_necessity");
    assert_eq!(v["certificate"]["p"], 2);
}

#[test]
fn bad_arguments_are_not_verdicts() {
    let code = bh(&["classify", "x", "2"]).status.code();
    assert!(!matches!(code, Some(0..=2)));
    assert!(!matches!(bh(&["classify", "0", "2"]).status.code(), Some(0..=2)));
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    assert!(bh(&["construct", "--n", "4", "--h", "2", "--out", p]).status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.trim(), r#"{"kind":"bh","group":[4],"h":2,"row":[0,0,0,1]}"#);
    assert_eq!(bh(&["verify", p]).status.code(), Some(0));

    std::fs::write(&path, r#"{"kind":"bh","group":[2],"h":2,"row":[0,1]}"#).unwrap();
    assert_eq!(bh(&["verify", p]).status.code(), Some(1));

    std::fs::write(&path, r#"{"kind":"bh","group":[2],"h":2,"row":[0,5]}"#).unwrap();
    let o = bh(&["verify", p]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("outside"));

    assert!(!bh(&["construct", "--n", "2", "--h", "2"]).status.success());
}

#[test]
fn array_subcommand() {
    let o = bh(&["array", "--dims", "3,3", "--h", "3"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).trim(),
        r#"{"kind":"perfect-array","dims":[3,3],"h":3,"data":[0,1,0,1,2,1,0,1,0]}"#
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.json");
    let p = path.to_str().unwrap();
    assert!(bh(&["array", "--dims", "8,8", "--h", "8", "--out", p]).status.success());
    assert_eq!(bh(&["verify", p]).status.code(), Some(0));
}

fn census_files(dir: &Path, jobs: &str) -> (Vec<u8>, Vec<u8>) {
    let csv = dir.join(format!("r{jobs}.csv"));
    let summary = dir.join(format!("s{jobs}.json"));
    let o = bh(&[
        "census", "--n-min", "1", "--n-max", "40", "--h-min", "1", "--h-max", "40",
        "--attribution", "staged", "--out", csv.to_str().unwrap(),
        "--summary", summary.to_str().unwrap(), "--jobs", jobs,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (std::fs::read(csv).unwrap(), std::fs::read(summary).unwrap())
}

#[test]
fn census_output_is_stable_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = census_files(dir.path(), "1");
    let four = census_files(dir.path(), "4");
    assert_eq!(one, four);
    let csv = String::from_utf8(one.0).unwrap();
    assert_eq!(csv.lines().count(), 1 + 40 * 40);
    assert!(csv.contains("\n4,2,EXISTS,construction,B\n"));
}

#[test]
fn census_rejects_bad_bounds() {
    let o = bh(&["census", "--n-min", "0"]);
    assert!(!o.status.success());
}

#[test]
fn tools() {
    assert_eq!(stdout(&bh(&["tools", "f-value", "4", "2"])).trim(), "4");
    assert_eq!(stdout(&bh(&["tools", "factor", "360"])).trim(), "2^3 * 3^2 * 5^1");
    assert_eq!(stdout(&bh(&["tools", "ord", "7", "2"])).trim(), "3");
    assert_eq!(stdout(&bh(&["tools", "selfconj", "2", "3"])).trim(), "true");
}
