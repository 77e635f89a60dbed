use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gtm(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtm")).args(args).env("GTM_CACHE_DIR", cache).output().expect("gtm runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn cache_roundtrip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hankel", "--N", "20", "--format", "csv"];
    let first = gtm(dir.path(), &args);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    assert!(stderr(&first).contains("grid computed"));
    let second = gtm(dir.path(), &args);
    assert!(stderr(&second).contains("grid cache hit"), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);
    let header = String::from_utf8_lossy(&first.stdout).lines().next().unwrap().to_string();
    assert_eq!(header, "n,l,degree,singular,doublyMonic,detString");

    // a different strategy is a different key but the same data
    let block = gtm(dir.path(), &["hankel", "--N", "20", "--format", "csv", "--strategy", "block"]);
    assert!(stderr(&block).contains("grid computed"));
    assert_eq!(first.stdout, block.stdout);
}

#[test]
fn corrupt_cache_entry_is_evicted_and_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["series", "--N", "12", "--format", "json"];
    let first = gtm(dir.path(), &args);
    let payload = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap().to_string_lossy().starts_with("series-"))
        .expect("payload written");
    fs::write(&payload, b"{\"coefficients\": []}").unwrap();
    let second = gtm(dir.path(), &args);
    assert_eq!(code(&second), 0);
    assert!(stderr(&second).contains("evicted"), "{}", stderr(&second));
    assert_eq!(first.stdout, second.stdout);
    let third = gtm(dir.path(), &args);
    assert!(stderr(&third).contains("cache hit"));
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn unwritable_cache_only_warns() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"x").unwrap();
    let out = gtm(&blocker, &["series", "--N", "4"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("cache write failed"), "{}", stderr(&out));
}

#[test]
fn out_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cf.json");
    let out = gtm(
        dir.path(),
        &["--no-cache", "--format", "json", "--out", path.to_str().unwrap(), "cf", "--u", "2", "--terms", "6"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let data: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(data["certifiedCount"], 6);
    let manifest: Value = serde_json::from_slice(&fs::read(dir.path().join("cf.json.manifest.json")).unwrap()).unwrap();
    for key in ["commandLine", "parameters", "version", "coefficientTableHash", "timestamp", "outputs"] {
        assert!(manifest.get(key).is_some(), "manifest lacks {key}");
    }
    assert_eq!(manifest["coefficientTableHash"], data["coefficientTableHash"]);
    assert_eq!(manifest["parameters"]["u"], "2");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| code(&gtm(dir.path(), args));
    assert_eq!(run(&["series", "--N", "4"]), 0);
    assert_eq!(run(&["tlc", "numeric", "--u", "-1", "--N", "8"]), 1);
    assert_eq!(run(&["tlc", "numeric", "--u", "2", "--N", "8"]), 0);
    assert_eq!(run(&["tlc", "finite", "--p", "3", "--u", "2"]), 1);
    assert_eq!(run(&["tlc", "bad", "--u", "1", "--K", "5"]), 1);
    assert_eq!(run(&["tlc", "numeric", "--u", "1"]), 2);
    assert_eq!(run(&["tlc", "finite", "--p", "9", "--u", "2"]), 2);
    assert_eq!(run(&["series", "--domain", "R"]), 2);
    assert_eq!(run(&["series", "--P", "t +"]), 2);
    assert_eq!(run(&["cf", "--domain", "Zu"]), 2);
    assert_eq!(run(&["verify", "nope"]), 2);
    assert_eq!(run(&["frobnicate"]), 2);
    // the block strategy only exists for the t + u family
    assert_eq!(run(&["hankel", "--P", "t^2+u", "--N", "8", "--strategy", "block"]), 2);
    assert_eq!(run(&["verify", "mirror", "--D", "6"]), 0);
    assert_eq!(run(&["--help"]), 0);
}

#[test]
fn precision_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = gtm(dir.path(), &["cf", "--u", "2", "--N", "8", "--terms", "20", "--format", "json"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["certifiedCount"].as_u64().unwrap() < 20);
    let out = gtm(dir.path(), &["cf", "--u", "2", "--N", "64", "--terms", "20", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certifiedCount"], 20);
    assert_eq!(v["terms"][1]["beta"], "2");
}

fn logged_ms(stderr: &str, what: &str) -> f64 {
    let line = stderr.lines().find(|l| l.contains(what)).unwrap_or_else(|| panic!("no {what:?} in {stderr}"));
    let tail = &line[line.rfind(" in ").unwrap() + 4..];
    tail.trim_end_matches(" ms").parse().unwrap()
}

#[test]
fn cache_hit_is_much_faster_than_symbolic_grid() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["hankel", "--domain", "Zu", "--N", "24", "--format", "csv"];
    let cold = logged_ms(&stderr(&gtm(dir.path(), &args)), "grid computed");
    let warm = logged_ms(&stderr(&gtm(dir.path(), &args)), "grid cache hit");
    assert!(cold > 10.0 * warm, "cold {cold} ms, warm {warm} ms");
}

#[test]
fn formats() {
    let dir = tempfile::tempdir().unwrap();
    let csv = gtm(dir.path(), &["series", "--u", "-1", "--N", "4", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout), "k,coefficient\n1,1\n2,-1\n3,-1\n4,1\n");
    let table = gtm(dir.path(), &["cf", "--terms", "2"]);
    let text = String::from_utf8_lossy(&table.stdout);
    assert!(text.starts_with("i  beta"), "{text}");
    assert!(text.contains("t - u"));
    let report = gtm(dir.path(), &["tlc", "threshold", "--P", "t^3+u", "--d", "3", "--format", "json"]);
    let v: Value = serde_json::from_slice(&report.stdout).unwrap();
    assert_eq!(v["threshold"], "3/2");
    let grid = gtm(dir.path(), &["hankel", "--N", "10", "--format", "json"]);
    let v: Value = serde_json::from_slice(&grid.stdout).unwrap();
    assert_eq!(v["deficiency"]["deficiencyExact"], false);
    assert_eq!(v["cells"].as_array().unwrap().len(), 30);
}
