//! End-to-end checks of the command-line surface: output bytes, exit
//! codes, formats, and file output.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thompson-clt"))
}

fn run(args: &[&str]) -> (String, String, i32) {
    let output = bin().args(args).output().expect("binary runs");
    (
        String::from_utf8(output.stdout).expect("stdout is utf-8"),
        String::from_utf8(output.stderr).expect("stderr is utf-8"),
        output.status.code().expect("no signal"),
    )
}

fn run_with_stdin(args: &[&str], input: &str) -> (String, String, i32) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input.as_bytes())
        .expect("stdin accepts input");
    let output = child.wait_with_output().expect("binary runs");
    (
        String::from_utf8(output.stdout).expect("stdout is utf-8"),
        String::from_utf8(output.stderr).expect("stderr is utf-8"),
        output.status.code().expect("no signal"),
    )
}

#[test]
fn normalize_prints_the_normal_form() {
    let (stdout, _, code) = run(&["normalize", "g3^-1 g6 g0^-1 g2 g4^-1"]);
    assert_eq!(stdout, "g7 g3 g0^-1 g2^-1 g4^-1\n");
    assert_eq!(code, 0);
}

#[test]
fn normalize_empty_word() {
    let (stdout, _, code) = run(&["normalize", ""]);
    assert_eq!(stdout, "\n");
    assert_eq!(code, 0);
}

#[test]
fn normalize_verbose_appends_the_trace() {
    let (stdout, _, code) = run(&["normalize", "--verbose", "g3^-1 g6 g0^-1 g2 g4^-1"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("g7 g3 g0^-1 g2^-1 g4^-1"));
    let trace: Vec<&str> = lines.collect();
    assert!(!trace.is_empty());
    assert!(trace[0].starts_with("step 1: separate at pair "));
    assert!(trace.iter().all(|l| l.contains(" -> ")));
}

#[test]
fn normalize_rejects_malformed_words_with_offset() {
    let (_, stderr, code) = run(&["normalize", "g_3 oops"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("byte 1"), "stderr was: {stderr}");
}

#[test]
fn tau_prints_images_then_cycles() {
    let (stdout, _, code) = run(&["tau", "g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1"]);
    assert_eq!(stdout, "[2,4,8,6,5,1,3,7]\n(1,2,4,6)(3,8,7)\n");
    assert_eq!(code, 0);
}

#[test]
fn partition_prints_sorted_pairs() {
    let (stdout, _, code) = run(&["partition", "g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1"]);
    assert_eq!(stdout, "[[1,8],[2,5],[3,6],[4,7]]\n");
    assert_eq!(code, 0);
    let (stdout, _, _) = run(&["partition", "g5 g5^-1"]);
    assert_eq!(stdout, "[[1,2]]\n");
}

#[test]
fn partition_rejects_non_neutral_words_naming_the_oracle() {
    let (_, stderr, code) = run(&["partition", "g0 g1"]);
    assert_eq!(code, 3);
    assert!(
        stderr.contains("piecewise-linear evaluation oracle"),
        "stderr was: {stderr}"
    );
}

#[test]
fn complete_partition_mode_reads_stdin() {
    let input = r#"{"d":6,"mode":"partition","signs":[1,-1,-1,-1,1,1],
        "partition":[[1,4],[2,5],[3,6]],"known":{"1":2,"5":1,"6":0}}"#;
    let (stdout, _, code) = run_with_stdin(&["complete", "-"], input);
    assert_eq!(stdout, "g2 g2^-1 g0^-1 g1^-1 g1 g0\n");
    assert_eq!(code, 0);
}

#[test]
fn complete_spaced_mode_reads_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spaced.json");
    std::fs::write(
        &path,
        r#"{"d":8,"mode":"spaced","tau":[4,1,6,7,8,3,2,5],
            "known":{"1":0,"2":75,"6":25,"7":50}}"#,
    )
    .unwrap();
    let (stdout, _, code) = run(&["complete", path.to_str().unwrap()]);
    assert_eq!(stdout, "g0 g75 g25^-1 g49^-1 g73^-1 g25 g50 g0^-1\n");
    assert_eq!(code, 0);
}

#[test]
fn complete_rejects_malformed_and_inconsistent_input() {
    let (_, stderr, code) = run_with_stdin(&["complete", "-"], "{not json");
    assert_eq!(code, 2);
    assert!(stderr.contains("malformed"), "stderr was: {stderr}");

    let (_, _, code) = run_with_stdin(
        &["complete", "-"],
        r#"{"d":2,"mode":"sideways","known":{}}"#,
    );
    assert_eq!(code, 2);

    // Shape-valid data that no neutral word realizes.
    let (_, stderr, code) = run_with_stdin(
        &["complete", "-"],
        r#"{"d":4,"mode":"partition","signs":[1,1,-1,-1],
            "partition":[[1,3],[2,4]],"known":{"1":0,"2":0}}"#,
    );
    assert_eq!(code, 3);
    assert!(stderr.contains("error"), "stderr was: {stderr}");
}

#[test]
fn census_text_output_is_exact() {
    let (stdout, _, code) = run(&["census", "--d", "2", "--n", "5"]);
    assert_eq!(
        stdout,
        "d: 2\nn: 5\ntotal: 10\ntau id: 5\ntau (1,2): 5\npartition [[1,2]]: 10\n"
    );
    assert_eq!(code, 0);
}

#[test]
fn census_naive_flag_agrees_with_the_join() {
    let (mitm, _, _) = run(&["census", "--d", "4", "--n", "3"]);
    let (naive, _, code) = run(&["census", "--d", "4", "--n", "3", "--naive"]);
    assert_eq!(mitm, naive);
    assert_eq!(code, 0);
}

#[test]
fn census_json_carries_schema_fields() {
    let (stdout, _, code) = run(&["census", "--d", "2", "--n", "5", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["kind"], "census");
    assert_eq!(doc["total"], "10");
    assert_eq!(doc["by_tau"].as_array().unwrap().len(), 2);
    assert_eq!(doc["by_tau"][0]["count"], "5");
    assert_eq!(doc["by_partition"][0]["pairs"][0][1], 2);
}

#[test]
fn census_csv_quotes_cycle_strings() {
    let (stdout, _, code) = run(&["census", "--d", "4", "--n", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("d,n,tau_cycles,count"));
    assert!(stdout.contains("\"(2,3)\""), "stdout was: {stdout}");
    let mut reader = csv::Reader::from_reader(stdout.as_bytes());
    for record in reader.records() {
        assert_eq!(record.unwrap().len(), 4);
    }
}

#[test]
fn census_out_writes_the_file_and_keeps_stdout_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("census.json");
    let (stdout, _, code) = run(&[
        "census",
        "--d",
        "2",
        "--n",
        "3",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let (direct, _, _) = run(&["census", "--d", "2", "--n", "3", "--format", "json"]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn census_budget_errors_exit_1() {
    let (_, stderr, code) = run(&[
        "census",
        "--d",
        "6",
        "--n",
        "60",
        "--budget-halfwords",
        "1000",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("1728000"), "stderr was: {stderr}");
    let (_, stderr, code) = run(&[
        "census",
        "--d",
        "4",
        "--n",
        "8",
        "--naive",
        "--budget-candidates",
        "1000",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("65536"), "stderr was: {stderr}");
}

#[test]
fn moments_text_is_exact_and_labels_the_float() {
    let (stdout, _, code) = run(&["moments", "--d", "2", "--n", "10"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "d: 2\nn: 10\nmoment: 1/1 (approximately 1.000000)\nlimit: 1\n\
         lower envelope: 4/5 (approximately 0.800000)\n\
         upper envelope: 1/1 (approximately 1.000000)\nlower bound applies: true\n"
    );
}

#[test]
fn moments_csv_row() {
    let (stdout, _, code) = run(&["moments", "--d", "2", "--n", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(
        lines,
        [
            "d,n,moment_num,moment_den,lower_num,lower_den,upper_num,upper_den",
            "2,10,1,1,4,5,1,1"
        ]
    );
}

#[test]
fn moments_json_rationals_are_strings() {
    let (stdout, _, code) = run(&["moments", "--d", "4", "--n", "20", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("valid json");
    assert_eq!(doc["moment"]["num"], "283");
    assert_eq!(doc["moment"]["den"], "100");
    assert_eq!(doc["limit"], "3");
    assert_eq!(doc["lower_bound_applies"], true);
}

#[test]
fn bounds_values() {
    let (stdout, _, code) = run(&["bounds", "--d", "4", "--n", "40"]);
    assert_eq!(stdout, "d: 4\nn: 40\nlower: 276\nupper: 1035\n");
    assert_eq!(code, 0);
    let (stdout, _, _) = run(&["bounds", "--d", "4", "--n", "40", "--format", "csv"]);
    assert_eq!(stdout, "d,n,lower,upper\n4,40,276,1035\n");
}

#[test]
fn confluence_reports_zero_counterexamples() {
    let (stdout, _, code) = run(&[
        "confluence",
        "--kind",
        "order",
        "--max-len",
        "3",
        "--max-index",
        "6",
    ]);
    assert_eq!(code, 0);
    assert!(stdout.contains("0 counterexamples"), "stdout was: {stdout}");
    assert!(stdout.contains("words checked: 2955"), "stdout was: {stdout}");
}

#[test]
fn json_outputs_match_their_schemas() {
    let cases: [(&str, &[&str]); 4] = [
        ("census", &["census", "--d", "4", "--n", "3"]),
        ("moment", &["moments", "--d", "4", "--n", "20"]),
        ("bounds", &["bounds", "--d", "4", "--n", "40"]),
        (
            "confluence",
            &["confluence", "--kind", "separate", "--max-len", "2", "--max-index", "3"],
        ),
    ];
    for (name, args) in cases {
        let path = format!(
            "{}/../../schemas/{name}.schema.json",
            env!("CARGO_MANIFEST_DIR")
        );
        let schema: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let mut full_args = args.to_vec();
        full_args.extend(["--format", "json"]);
        let (stdout, _, code) = run(&full_args);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        let object = doc.as_object().unwrap();
        for key in schema["required"].as_array().unwrap() {
            assert!(
                object.contains_key(key.as_str().unwrap()),
                "{name} output lacks required key {key}"
            );
        }
        let allowed = schema["properties"].as_object().unwrap();
        for key in object.keys() {
            assert!(allowed.contains_key(key), "{name} output has stray key {key}");
        }
        assert_eq!(doc["schema_version"], 1);
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["census", "--d", "4", "--n", "5", "--format", "json"];
    let (first, _, _) = run(&args);
    let (second, _, _) = run(&args);
    assert_eq!(first, second);
    assert!(!first.is_empty());
}
