use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const WORKED: &str = "0,1;1,0;1,1;-1,1;-3,-1;-1,-3;5,-1;7,5";

fn lintomo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lintomo")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(dir: &Path, grid: &str, dirs: &str, extra: &[&str]) -> (std::path::PathBuf, std::path::PathBuf) {
    let (img, sums) = (dir.join("f.csv"), dir.join("sums.json"));
    let mut args = vec!["generate", "--grid", grid, "--dirs", dirs, "--seed", "3", "--image-out", p(&img), "--sums-out", p(&sums)];
    args.extend_from_slice(extra);
    let out = lintomo(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    (img, sums)
}

#[test]
fn round_trip_exact() {
    let dir = tempfile::tempdir().unwrap();
    let (_, sums) = generate(dir.path(), "21,16", WORKED, &["--rational"]);
    let g = dir.path().join("g.csv");
    let out = lintomo(&["reconstruct", "--sums", p(&sums), "--out", p(&g)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = lintomo(&["verify", "--sums", p(&sums), "--image", p(&g)]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}

#[test]
fn nonvalid_reconstruction_matches_original() {
    let dir = tempfile::tempdir().unwrap();
    let (img, sums) = generate(dir.path(), "6,5", "1,1;2,-1;3,2", &[]);
    let out = lintomo(&["reconstruct", "--sums", p(&sums)]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), fs::read_to_string(img).unwrap());
}

#[test]
fn project_matches_generated_sums() {
    let dir = tempfile::tempdir().unwrap();
    let (img, sums) = generate(dir.path(), "7,6", "1,1;2,-1", &[]);
    let out = lintomo(&["project", "--image", p(&img), "--dirs", "1,1;2,-1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout), fs::read_to_string(sums).unwrap());
}

#[test]
fn float_mode_and_pgm_output() {
    let dir = tempfile::tempdir().unwrap();
    let (_, sums) = generate(dir.path(), "12,9", "1,-1;2,1;1,2", &["--float"]);
    let g = dir.path().join("g.pgm");
    let out = lintomo(&["--float", "reconstruct", "--sums", p(&sums), "--out", p(&g)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let bytes = fs::read(g).unwrap();
    assert!(bytes.starts_with(b"P5\n12 9\n255\n"));
    assert_eq!(bytes.len(), "P5\n12 9\n255\n".len() + 12 * 9);
}

#[test]
fn trace_lists_every_assignment() {
    let dir = tempfile::tempdir().unwrap();
    let (_, sums) = generate(dir.path(), "12,9", "1,-1;2,1;1,2", &[]);
    let out = lintomo(&["reconstruct", "--sums", p(&sums), "--trace", "--out", p(&dir.path().join("g.csv"))]);
    assert_eq!(code(&out), 0);
    let err = String::from_utf8_lossy(&out.stderr);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines[0], "p,q,direction,value");
    assert_eq!(lines.len(), 1 + 12 * 9);
    assert!(lines.iter().any(|l| l.contains(",free,")));
    assert!(lines.iter().any(|l| l.contains("(2,1)")));
}

#[test]
fn free_values_are_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let (_, sums) = generate(dir.path(), "12,9", "1,-1;2,1;1,2", &[]);
    let free = dir.path().join("free.json");
    fs::write(&free, r#"{"0,1": "7/2"}"#).unwrap();
    let out = lintomo(&["reconstruct", "--sums", p(&sums), "--free-values", p(&free)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8_lossy(&out.stdout);
    assert_eq!(csv.lines().nth(1).unwrap().split(',').next(), Some("7/2"));
    fs::write(&free, r#"{"11,8": 1}"#).unwrap();
    let out = lintomo(&["reconstruct", "--sums", p(&sums), "--free-values", p(&free)]);
    assert_eq!(code(&out), 3);
}

#[test]
fn inconsistent_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let (img, sums) = generate(dir.path(), "5,5", "1,0;0,1", &[]);
    let text = fs::read_to_string(&sums).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let v = doc["sums"]["1,0"]["values"][0].as_i64().unwrap();
    doc["sums"]["1,0"]["values"][0] = serde_json::json!(v + 1);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, doc.to_string()).unwrap();
    assert_eq!(code(&lintomo(&["reconstruct", "--sums", p(&bad)])), 2);
    assert_eq!(code(&lintomo(&["oracle", "--sums", p(&bad)])), 2);
    assert_eq!(code(&lintomo(&["verify", "--sums", p(&bad), "--image", p(&img)])), 2);
}

#[test]
fn invalid_arguments_exit_3() {
    assert_eq!(code(&lintomo(&["plan", "--grid", "0,4", "--dirs", "1,1"])), 3);
    assert_eq!(code(&lintomo(&["plan", "--grid", "4,4", "--dirs", "2,4"])), 3);
    assert_eq!(code(&lintomo(&["plan", "--grid", "4", "--dirs", "1,1"])), 3);
    assert_eq!(code(&lintomo(&["reconstruct", "--sums", "/nonexistent/sums.json"])), 3);
    assert_eq!(code(&lintomo(&["frobnicate"])), 3);
    assert_eq!(code(&lintomo(&["generate", "--grid", "3,3", "--count", "9", "--max-component", "1"])), 3);
    assert_eq!(code(&lintomo(&["--help"])), 0);
    assert_eq!(code(&lintomo(&["--version"])), 0);
}

#[test]
fn plan_reports_order_and_stream() {
    let out = lintomo(&["plan", "--grid", "12,7", "--dirs", "3,-2;4,-3;1,-2", "--stream"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let expected = serde_json::json!([[0, 5], [0, 6], [4, 2], [7, 0], [3, 3], [6, 1], [2, 4]]);
    assert_eq!(doc["order"], expected);
    assert_eq!(doc["stream"]["order"], expected);
    let out = lintomo(&["plan", "--grid", "21,16", "--dirs", WORKED, "--side", "rows"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["order"][0], serde_json::json!([1, 0]));
    assert_eq!(doc["order"][18], serde_json::json!([6, 0]));
}

#[test]
fn ghost_and_oracle_reports() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("domain.pbm");
    let dirs = "5,-2;4,-3;3,-4;6,1;3,2;2,5";
    let out = lintomo(&["ghost", "--grid", "26,19", "--dirs", dirs, "--domain-map", p(&map)]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((doc["M"].as_i64(), doc["N"].as_i64(), doc["free_dimension"].as_u64()), (Some(23), Some(17), Some(6)));
    assert!(fs::read_to_string(&map).unwrap().starts_with("P1\n26 19\n"));

    let (_, sums) = generate(dir.path(), "26,19", dirs, &[]);
    let out = lintomo(&["oracle", "--sums", p(&sums), "--report"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["null_dimension"], 6);
    assert_eq!(doc["consistent"], true);
    let unique = doc["unique_points"].as_u64().unwrap();
    assert_eq!(unique as i64, 26 * 19 - doc_domain(&fs::read_to_string(&map).unwrap()));
}

fn doc_domain(pbm: &str) -> i64 {
    pbm.lines().skip(2).flat_map(|l| l.split_whitespace()).filter(|&c| c == "1").count() as i64
}

#[test]
fn bench_reports() {
    let out = lintomo(&["bench", "--base-m", "16", "--n", "16", "--doublings", "2", "--report", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);
    let out = lintomo(&["bench", "--sweep-d", "--base-m", "64", "--n", "64", "--dirs", "1,1;1,-1;2,1;1,2;2,-1;1,-2;3,1;1,3"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 6);
    assert_eq!(doc["pass"], true);
}
