use std::fs;
use std::process::{Command, Output};

fn wilfcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wilfcheck"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn info_examples() {
    let o = wilfcheck(&["info", "gens=14,22,23;tail=56", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!((v["W0"].as_i64(), v["L"].as_i64()), (Some(-1), Some(13)));
    assert_eq!(v["profile"], serde_json::json!([2, 0, 3]));

    let v = json(&wilfcheck(&["info", "gens=1", "--format", "json"]));
    assert_eq!((v["W0"].as_i64(), v["g"].as_i64()), (Some(0), Some(0)));

    let a = json(&wilfcheck(&["info", "gaps=1,3", "--format", "json"]));
    let b = json(&wilfcheck(&["info", "gens=2,5", "--format", "json"]));
    assert_eq!(a, b);
    assert_eq!((a["W"].as_i64(), a["W0"].as_i64()), (Some(0), Some(0)));
}

#[test]
fn info_json_is_a_schema_record() {
    let o = wilfcheck(&["info", "gens=7,11;tail=25", "--format", "json"]);
    let rec: wilfcheck_core::ReportRecord = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(rec.report.c_size, 1);
    assert_eq!(rec.semigroup().to_gens_notation(), "gens=7,11,26,27,30,31");
}

#[test]
fn info_human_lists_levels() {
    let text = stdout(&wilfcheck(&["info", "gens=7,11;tail=25"]));
    assert!(text.contains("compressed  22 = 11 + 11"), "{text}");
    assert!(text.contains("W0 = 5"));
    assert!(text.contains("profile     (0,1,1)"));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec!["info", "gens=4,6"],
        vec!["info", "gaps=2,3"],
        vec!["info", "nonsense"],
        vec!["verify", "--max-genus", "-1"],
        vec!["verify", "--max-genus", "3", "--laws", "no_such_law"],
        vec!["verify", "--max-genus", "3", "--workers", "0"],
        vec!["hunt", "--max-genus", "5", "--where", "bogus < 1"],
        vec!["hunt", "--max-genus", "5", "--where", "w0 <"],
        vec!["oracle", "--max-genus", "13"],
        vec!["count"],
    ] {
        let o = wilfcheck(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn count_and_oracle() {
    let count = stdout(&wilfcheck(&["count", "--max-genus", "8"]));
    assert!(count.ends_with("8\t67\n"));
    assert_eq!(count, stdout(&wilfcheck(&["oracle", "--max-genus", "8"])));
    assert_eq!(
        count,
        stdout(&wilfcheck(&["count", "--max-genus", "8", "--workers", "3"]))
    );
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        wilfcheck(&["verify", "--max-genus", "0"]).status.code(),
        Some(0)
    );
    assert_eq!(
        wilfcheck(&["verify", "--max-genus", "10", "--laws", "all"])
            .status
            .code(),
        Some(0)
    );

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("violations.jsonl");
    let o = wilfcheck(&[
        "verify",
        "--max-genus",
        "43",
        "--from",
        "gens=14,22,23;tail=55",
        "--laws",
        "w0_nonneg,W0_NONNEG_WHEN_L_LE_12",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let lines = fs::read_to_string(&out).unwrap();
    let records = wilfcheck_core::campaign::read_violations(lines.as_bytes()).unwrap();
    assert_eq!(records.len(), 1);
    assert!(records[0].reproduces());
}

#[test]
fn hunt_outputs() {
    let o = wilfcheck(&["hunt", "--max-genus", "2", "--where", "g == 2"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = wilfcheck(&["hunt", "--max-genus", "1", "--where", "w == 0"]);
    let gaps: Vec<String> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["gaps"].to_string())
        .collect();
    assert_eq!(gaps, ["[]", "[1]"]);

    let o = wilfcheck(&["hunt", "--max-genus", "18", "--where", "w0 < 0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = wilfcheck(&[
        "hunt",
        "--max-genus",
        "12",
        "--where",
        "L <= 12 && q >= 4 && a1 == 2",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    let recs = wilfcheck_core::records::read_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(o.status.code(), Some(if recs.is_empty() { 0 } else { 1 }));
    assert!(recs.iter().all(|r| r.report.q == 4));
}

#[test]
fn enumerate_streams_every_semigroup() {
    let text = stdout(&wilfcheck(&["enumerate", "--max-genus", "7"]));
    let recs = wilfcheck_core::records::read_jsonl(text.as_bytes()).unwrap();
    assert_eq!(recs.len(), 1 + 1 + 2 + 4 + 7 + 12 + 23 + 39);
    assert_eq!(recs[0].gaps, Vec::<u32>::new());
    assert_eq!(recs[1].gaps, vec![1]);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.csv");
    let o = wilfcheck(&[
        "enumerate",
        "--max-genus",
        "7",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success() && o.stdout.is_empty());
    let csv = wilfcheck_core::records::read_csv(fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(csv, recs);
}

#[test]
fn checkpointed_verify_resumes() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    let ck = ck.to_str().unwrap();
    let whole = stdout(&wilfcheck(&[
        "verify",
        "--max-genus",
        "15",
        "--laws",
        "wilf,w_ge_w0",
    ]));
    let first = wilfcheck(&[
        "verify",
        "--max-genus",
        "15",
        "--laws",
        "wilf,w_ge_w0",
        "--checkpoint",
        ck,
        "--stop-after",
        "2000",
    ]);
    assert!(stdout(&first).contains("status checkpointed"));
    let resumed = stdout(&wilfcheck(&[
        "verify",
        "--max-genus",
        "15",
        "--laws",
        "wilf,w_ge_w0",
        "--checkpoint",
        ck,
        "--workers",
        "2",
    ]));
    let table = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("status"))
            .map(String::from)
            .collect::<Vec<_>>()
    };
    assert_eq!(table(&resumed), table(&whole));
    let mismatch = wilfcheck(&[
        "verify",
        "--max-genus",
        "15",
        "--laws",
        "wilf",
        "--checkpoint",
        ck,
    ]);
    assert_eq!(mismatch.status.code(), Some(2));
}
