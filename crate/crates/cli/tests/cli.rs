//! End-to-end tests of the command-line surface: every subcommand, the
//! documented exit codes, and byte-identical shard merging.

use std::ops::ControlFlow;
use std::path::Path;
use std::process::{Command, Output};

fn sdsearch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdsearch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_desk_codes(dir: &Path, length: usize) -> usize {
    let classes = sdsearch_core::equiv::classify_self_dual(length).unwrap();
    for (i, class) in classes.iter().enumerate() {
        std::fs::write(
            dir.join(format!("y{i}.code")),
            class.representative.to_file_string(),
        )
        .unwrap();
    }
    classes.len()
}

#[test]
fn verify_suite_runs_and_reports() {
    let out = sdsearch(&["verify", "golay"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS golay-pipeline"));
    assert!(text.contains("all checks passed"));
    // unknown suite is an input error
    let bad = sdsearch(&["verify", "nonsense"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn classify_masses_add_up() {
    let out = sdsearch(&["classify", "--length", "8"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# 2 classes, mass 135 of 135 codes"));
    let additive = sdsearch(&["classify", "--length", "2", "--additive"]);
    assert!(additive.status.success());
    assert!(stdout(&additive).contains("with Galois conjugation"));
    let linear = sdsearch(&["classify", "--length", "2", "--additive", "--linear"]);
    assert!(stdout(&linear).contains("without Galois conjugation"));
}

#[test]
fn orbits_then_extend_d8_desk() {
    let tmp = tempfile::tempdir().unwrap();
    let codes = tmp.path().join("codes");
    std::fs::create_dir(&codes).unwrap();
    write_desk_codes(&codes, 8);
    let reps = tmp.path().join("reps.txt");
    let out = sdsearch(&[
        "orbits",
        "--codes",
        codes.to_str().unwrap(),
        "--group",
        "d8",
        "--scale",
        "8",
        "--out",
        reps.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // 7 desk-scale orbits, matching the brute-force count
    assert!(stdout(&out).contains("total: 7 representatives"));
    let verdicts = tmp.path().join("verdicts.jsonl");
    let out = sdsearch(&[
        "extend",
        "--reps",
        reps.to_str().unwrap(),
        "--group",
        "d8",
        "--threshold",
        "4",
        "--out",
        verdicts.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&verdicts).unwrap();
    let base_lines = text.lines().filter(|l| l.contains("\"base\"")).count();
    assert_eq!(base_lines, 7);
    // every record parses as a verdict
    for line in text.lines() {
        let v: sdsearch_core::shard::VerdictRecord = serde_json::from_str(line).unwrap();
        assert!(!v.source.is_empty());
    }
}

#[test]
fn extend_shards_partition_the_records() {
    let tmp = tempfile::tempdir().unwrap();
    let codes = tmp.path().join("codes");
    std::fs::create_dir(&codes).unwrap();
    write_desk_codes(&codes, 8);
    let reps = tmp.path().join("reps.txt");
    sdsearch(&[
        "orbits",
        "--codes",
        codes.to_str().unwrap(),
        "--group",
        "d8",
        "--scale",
        "8",
        "--out",
        reps.to_str().unwrap(),
    ]);
    let mut merged: Vec<String> = Vec::new();
    for i in 0..3 {
        let shard_out = tmp.path().join(format!("v{i}.jsonl"));
        let out = sdsearch(&[
            "extend",
            "--reps",
            reps.to_str().unwrap(),
            "--group",
            "d8",
            "--threshold",
            "4",
            "--shard",
            &format!("{i}/3"),
            "--out",
            shard_out.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        merged.extend(
            std::fs::read_to_string(&shard_out)
                .unwrap()
                .lines()
                .map(String::from),
        );
    }
    let single_out = tmp.path().join("single.jsonl");
    sdsearch(&[
        "extend",
        "--reps",
        reps.to_str().unwrap(),
        "--group",
        "d8",
        "--threshold",
        "4",
        "--out",
        single_out.to_str().unwrap(),
    ]);
    let mut single: Vec<String> = std::fs::read_to_string(&single_out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    merged.sort();
    single.sort();
    assert_eq!(merged, single, "merged shards differ from the single run");
}

#[test]
fn s3_histogram_and_shard_merge() {
    let tmp = tempfile::tempdir().unwrap();
    let dataset = tmp.path().join("ds.txt");
    let mut text = String::new();
    sdsearch_core::gf4::for_each_trace_self_dual(3, |c| {
        text.push_str(&sdsearch_core::io::format_additive_record(c));
        text.push('\n');
        ControlFlow::Continue(())
    });
    std::fs::write(&dataset, text).unwrap();
    let out = sdsearch(&["s3", "--dataset", dataset.to_str().unwrap()]);
    assert!(out.status.success());
    let full = stdout(&out);
    assert!(full.contains("# histogram of lift distances"));
    assert!(full.contains("135 records"));
    assert!(full.contains("0 contradictions"));
    // shard merge is byte-identical after sorting
    let mut merged: Vec<String> = Vec::new();
    for i in 0..4 {
        let out = sdsearch(&[
            "s3",
            "--dataset",
            dataset.to_str().unwrap(),
            "--shard",
            &format!("{i}/4"),
        ]);
        merged.extend(
            stdout(&out)
                .lines()
                .filter(|l| !l.starts_with('#'))
                .map(String::from),
        );
    }
    let mut single: Vec<String> = full
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(String::from)
        .collect();
    merged.sort();
    single.sort();
    assert_eq!(merged, single);
}

#[test]
fn s3_rejects_malformed_records_with_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let dataset = tmp.path().join("bad.txt");
    std::fs::write(&dataset, "2 2\n11\nw0\n\n1 1\nz\n").unwrap();
    let out = sdsearch(&["s3", "--dataset", dataset.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("malformed"));
}

#[test]
fn ingest_summaries() {
    let tmp = tempfile::tempdir().unwrap();
    // empty directory: empty summary, success
    let empty = tmp.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let out = sdsearch(&["ingest", empty.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 files"));
    // a directory with one valid and one invalid code
    let dir = tmp.path().join("codes");
    std::fs::create_dir(&dir).unwrap();
    std::fs::write(
        dir.join("good.code"),
        sdsearch_core::gf2::families::extended_hamming8().to_file_string(),
    )
    .unwrap();
    std::fs::write(dir.join("bad.code"), "4 1\n1000\n").unwrap();
    let out = sdsearch(&["ingest", dir.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("2 files, 1 accepted"));
    assert!(text.contains("not self-dual"));
    assert!(text.contains("[8,4,4]: 1 codes"));
}
