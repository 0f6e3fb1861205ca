use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn tdvrp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdvrp"))
        .args(args)
        .current_dir(dir)
        .env_remove("TDVRP_MAPS_API_KEY")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = tdvrp(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn fails_with(dir: &Path, args: &[&str], code: i32) -> String {
    let out = tdvrp(dir, args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stderr).unwrap()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn same_seed_gives_identical_result_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-matrix", "--seed", "4", "--out", "m.json"]);
    ok(d, &["solve", "--matrix", "m.json", "--seed", "11", "--out", "a.json"]);
    ok(d, &["solve", "--matrix", "m.json", "--seed", "11", "--out", "b.json"]);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());
    let result = json(&d.join("a.json"));
    assert_eq!(result["route"].as_array().unwrap().len(), 30);
    assert_eq!(result["seed"], 11);
    assert_eq!(result["rng"], "ChaCha8");
    assert_eq!(result["params"]["l_delete"], 6);
}

#[test]
fn generated_files_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-instance", "--random", "9", "--seed", "2", "--out", "i1.json"]);
    let again = ok(d, &["gen-instance", "--random", "9", "--seed", "2"]);
    assert_eq!(fs::read_to_string(d.join("i1.json")).unwrap(), again);
    ok(d, &["gen-matrix", "--instance", "i1.json", "--seed", "2", "--out", "m1.json"]);
    let again = ok(d, &["gen-matrix", "--instance", "i1.json", "--seed", "2"]);
    assert_eq!(fs::read_to_string(d.join("m1.json")).unwrap(), again);
    let other = ok(d, &["gen-matrix", "--instance", "i1.json", "--seed", "3"]);
    assert_ne!(other, again);
}

#[test]
fn two_clients_on_constant_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-instance", "--random", "3", "--out", "i.json"]);
    fs::write(
        d.join("m.json"),
        r#"{"version":1,"n_nodes":3,"n_layers":2,"step_seconds":60,"closed":true,
           "times":[[[0,100,100],[100,0,100],[100,100,0]],[[0,100,100],[100,0,100],[100,100,0]]]}"#,
    )
    .unwrap();
    let stdout = ok(d, &["solve", "--instance", "i.json", "--matrix", "m.json", "--out", "r.json"]);
    let r = json(&d.join("r.json"));
    assert_eq!(r["total_cost_s"], 300);
    assert_eq!(r["departures_s"], serde_json::json!([0, 100, 200]));
    let route: Vec<u64> = r["route"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert!(route == [1, 2] || route == [2, 1]);
    assert!(stdout.contains("total: 0:05 (300 s)"), "{stdout}");
}

#[test]
fn identical_layers_compare_to_zero_gap() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-matrix", "--profile", "flat", "--jitter", "0.2", "--layers", "4", "--out", "m.json"]);
    let stdout = ok(d, &["compare", "--matrix", "m.json", "--n-seeds", "3", "--n-grasp", "5", "--out", "c.csv"]);
    let csv = fs::read_to_string(d.join("c.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let gap = header.iter().position(|&h| h == "gap_percent").unwrap();
    let own = header.iter().position(|&h| h == "gap_own_percent").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert_eq!(row[gap], "0.000");
        assert_eq!(row[own], "0.000");
    }
    assert!(stdout.contains("mean"), "{stdout}");
}

#[test]
fn recorded_fetch_reproduces_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (inst, rec) = (fixture("triangle_instance.json"), fixture("triangle_recording.jsonl"));
    let args = [
        "fetch", "--backend", "recorded", "--recording", &rec, "--instance", &inst, "--layers", "2", "--step",
        "3600", "--start-epoch", "1700000000", "--cache", "cache.jsonl",
    ];
    let first = ok(d, &[&args[..], &["--out", "a.json"]].concat());
    assert!(first.contains("2 requests issued, 0 from cache"), "{first}");
    let m = json(&d.join("a.json"));
    assert_eq!(
        m["times"],
        serde_json::json!([
            [[0, 600, 480], [660, 0, 900], [500, 840, 0]],
            [[0, 1200, 950], [1300, 0, 1800], [1000, 1700, 0]]
        ])
    );
    assert_eq!(m["step_seconds"], 3600);

    let second = ok(d, &[&args[..], &["--out", "b.json"]].concat());
    assert!(second.contains("0 requests issued, 2 from cache"), "{second}");
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());

    // 0-2-1-0 leaves node 1 at 1320 s, still in layer 0: 480 + 840 + 660
    ok(d, &["solve", "--instance", &inst, "--matrix", "a.json", "--out", "r.json"]);
    let r = json(&d.join("r.json"));
    assert_eq!(r["route"], serde_json::json!([2, 1]));
    assert_eq!(r["total_cost_s"], 1980);
}

#[test]
fn recording_with_gaps_is_a_backend_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (inst, rec) = (fixture("triangle_instance.json"), fixture("triangle_recording.jsonl"));
    // the recording only covers two layers
    let err = fails_with(
        d,
        &[
            "fetch", "--backend", "recorded", "--recording", &rec, "--instance", &inst, "--layers", "3",
            "--step", "3600", "--start-epoch", "1700000000",
        ],
        3,
    );
    assert!(err.contains("incomplete"), "{err}");
}

#[test]
fn paris_plan_under_free_quota() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(dir.path(), &["fetch", "--plan-only", "--layers", "6"]);
    assert!(stdout.contains("5580 elements wanted"), "{stdout}");
    assert!(stdout.contains("days_needed 3"), "{stdout}");
    let paid = ok(dir.path(), &["fetch", "--plan-only", "--layers", "6", "--tier", "paid"]);
    assert!(paid.contains("days_needed 1"), "{paid}");
}

#[test]
fn synthetic_fetch_matches_generator() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["fetch", "--backend", "synthetic", "--seed", "5", "--start-epoch", "0", "--out", "f.json"]);
    ok(d, &["gen-matrix", "--seed", "5", "--out", "g.json"]);
    assert_eq!(fs::read(d.join("f.json")).unwrap(), fs::read(d.join("g.json")).unwrap());
}

#[test]
fn geojson_for_bundled_instance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-instance", "--out", "paris.json"]);
    ok(d, &["gen-matrix", "--out", "m.json"]);
    ok(d, &["solve", "--matrix", "m.json", "--n-grasp", "3", "--n-improve", "2", "--out", "r.json"]);
    ok(d, &["export-geojson", "--result", "r.json", "--out", "route.geojson"]);
    let fc = json(&d.join("route.geojson"));
    assert_eq!(fc["type"], "FeatureCollection");
    let features = fc["features"].as_array().unwrap();
    let points: Vec<&Value> = features.iter().filter(|f| f["geometry"]["type"] == "Point").collect();
    assert_eq!(points.len(), 31);
    let nodes = json(&d.join("paris.json"))["nodes"].as_array().unwrap().clone();
    for p in &points {
        let id = p["properties"]["id"].as_u64().unwrap() as usize;
        let c = p["geometry"]["coordinates"].as_array().unwrap();
        assert_eq!(c[0], nodes[id]["lon"]);
        assert_eq!(c[1], nodes[id]["lat"]);
    }
    assert_eq!(points[0]["properties"]["label"], "0 (Depot)");
    let line = features.iter().find(|f| f["geometry"]["type"] == "LineString").unwrap();
    let coords = line["geometry"]["coordinates"].as_array().unwrap();
    assert_eq!(coords.len(), 32);
    assert_eq!(coords[0], coords[31]);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.json"), "{\n  \"version\": 1,\n  \"n_nodes\": oops\n}\n").unwrap();
    let err = fails_with(d, &["solve", "--matrix", "bad.json"], 2);
    assert!(err.contains("bad.json") && err.contains("line 3"), "{err}");

    ok(d, &["gen-instance", "--random", "4", "--out", "small.json"]);
    ok(d, &["gen-matrix", "--out", "m.json"]);
    let err = fails_with(d, &["solve", "--instance", "small.json", "--matrix", "m.json"], 2);
    assert!(err.contains("4 nodes") && err.contains("31"), "{err}");

    let err = fails_with(d, &["solve", "--matrix", "m.json", "--l-delete", "31"], 2);
    assert!(err.contains("l_delete = 31 exceeds the 30 clients"), "{err}");
    fails_with(d, &["solve", "--matrix", "missing.json"], 2);
    fails_with(d, &["gen-matrix", "--peak", "1-2-3"], 2);
    fails_with(d, &["compare", "--matrix", "m.json", "--n-seeds", "0"], 2);

    let err = fails_with(d, &["fetch", "--backend", "live", "--layers", "1"], 2);
    assert!(err.contains("TDVRP_MAPS_API_KEY"), "{err}");
    fails_with(d, &["no-such-command"], 2);
}

#[test]
fn export_rejects_out_of_range_route() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen-instance", "--random", "3", "--out", "i.json"]);
    ok(d, &["gen-matrix", "--out", "m.json"]);
    ok(d, &["solve", "--matrix", "m.json", "--n-grasp", "2", "--n-improve", "1", "--out", "r.json"]);
    let err = fails_with(d, &["export-geojson", "--result", "r.json", "--instance", "i.json"], 2);
    assert!(err.contains("only has 3 nodes"), "{err}");
}
