use std::fs;
use std::process::{Command, Output};

use cyclores::cli::{table_records, OutputRecord};
use cyclores::DEFAULT_SEED;

fn cyclores(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclores"))
        .args(args)
        .env_remove("CYCLORES_SEED")
        .output()
        .expect("binary runs")
}

const TABLE: [&str; 9] = ["table", "--l", "5", "--p-min", "10", "--p-max", "400", "--d-list", "2,3,7,-11"];

#[test]
fn table_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let mut args = TABLE.to_vec();
    args.extend(["--output", path.to_str().unwrap()]);
    let out = cyclores(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let parsed: Vec<OutputRecord> = csv::Reader::from_path(&path)
        .unwrap()
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap();
    let expected = table_records(5, 10, 400, &[2, 3, 7, -11], DEFAULT_SEED).unwrap();
    assert_eq!(parsed, expected);
    assert!(parsed.iter().all(|r| r.matches));
}

#[test]
fn table_json_round_trip() {
    let mut args = vec!["--format", "json"];
    args.extend(TABLE);
    let out = cyclores(&args);
    assert!(out.status.success());
    let parsed: Vec<OutputRecord> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed, table_records(5, 10, 400, &[2, 3, 7, -11], DEFAULT_SEED).unwrap());
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let path = dir.path().join(name);
        let mut args = vec!["--seed", "17"];
        args.extend(TABLE);
        args.extend(["--output", path.to_str().unwrap()]);
        assert!(cyclores(&args).status.success());
        files.push(fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert!(!files[0].is_empty());
}

#[test]
fn classify_example_output() {
    let out = cyclores(&["classify", "--l", "3", "--p", "7", "--d", "2"]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "p,l,gamma,D,t,S,ind_class,oracle_class,match\n7,3,3,2,2,1,2,2,true\n"
    );
}

#[test]
fn bad_input_exits_with_usage_code() {
    let out = cyclores(&["classify", "--l", "3", "--p", "11", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = cyclores(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}
