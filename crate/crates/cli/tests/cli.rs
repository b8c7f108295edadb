use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn thinlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("THINLAB_OUT")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn manifest(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn expander_manifest_end_to_end() {
    let d = TempDir::new().unwrap();
    let m = manifest(&d, "e.toml", "kind = \"expander\"\n[params]\nq_list = [2, 3, 5, 7]\n");
    let o = thinlab(&["run", "--manifest", &m, "--out", "out"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let result = json(&d.path().join("out/result.json"));
    let rows = result["tables"]["expander"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row["gap"].as_f64().unwrap() > 0.0);
        assert_eq!(row["onto"], Value::Bool(true));
    }
    let bundle = json(&d.path().join("out/bundle.json"));
    assert_eq!(bundle["status"], "ok");
    assert_eq!(bundle["errors"].as_array().unwrap().len(), 0);
}

#[test]
fn bundle_lists_exactly_the_emitted_files() {
    for format in ["json", "csv"] {
        let d = TempDir::new().unwrap();
        let o = thinlab(
            &[
                "ball",
                "--gens",
                "unipotent-pair:2",
                "--radius",
                "3",
                "--relations",
                "4",
                "--out",
                "out",
                "--format",
                format,
            ],
            d.path(),
        );
        assert_eq!(code(&o), 0);
        let bundle = json(&d.path().join("out/bundle.json"));
        let mut listed: Vec<String> = bundle["files"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_str().unwrap().to_string())
            .collect();
        let mut present: Vec<String> = std::fs::read_dir(d.path().join("out"))
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        listed.sort();
        present.sort();
        assert_eq!(listed, present, "{format}");
    }
}

#[test]
fn empty_modulus_list_is_rejected() {
    let d = TempDir::new().unwrap();
    let m = manifest(&d, "e.toml", "kind = \"expander\"\n[params]\nq_list = []\n");
    let o = thinlab(&["run", "--manifest", &m, "--out", "out"], d.path());
    assert_eq!(code(&o), 2);
    assert!(!d.path().join("out").exists());
}

#[test]
fn atlas_contains_dwork_matrices_verbatim() {
    let d = TempDir::new().unwrap();
    let m = manifest(
        &d,
        "m.toml",
        "kind = \"monodromy\"\n[params]\nranks = [2, 3, 4, 5, 6, 7, 8, 9]\n",
    );
    let o = thinlab(&["run", "--manifest", &m, "--out", "out"], d.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let result = json(&d.path().join("out/result.json"));
    let atlas = result["result"]["atlas"].as_array().unwrap();
    let dwork = atlas.iter().find(|r| r["name"] == "dwork-4").unwrap();
    let a: Vec<Vec<i64>> = serde_json::from_value(dwork["matrices"]["a"].clone()).unwrap();
    let c: Vec<Vec<i64>> = serde_json::from_value(dwork["matrices"]["c"].clone()).unwrap();
    assert_eq!(a, [[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]]);
    assert_eq!(c, [[1, 0, 0, 5], [0, 1, 0, -5], [0, 0, 1, 5], [0, 0, 0, 1]]);
    assert_eq!(dwork["known_status"], "thin");
    let cy = atlas
        .iter()
        .filter(|r| r["name"].as_str().unwrap().starts_with("calabi-yau"))
        .count();
    assert_eq!(cy, 14);
}

#[test]
fn partial_failure_is_recorded() {
    let d = TempDir::new().unwrap();
    let o = thinlab(&["expander", "--q", "5,4", "--out", "out"], d.path());
    assert_eq!(code(&o), 1);
    let bundle = json(&d.path().join("out/bundle.json"));
    assert_eq!(bundle["status"], "partial");
    let errors = bundle["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 1);
    assert_eq!(errors[0]["item"], "q=4");
    assert_eq!(errors[0]["category"], "invalid");
}

#[test]
fn total_failure_differs_from_partial() {
    let d = TempDir::new().unwrap();
    let o = thinlab(&["expander", "--q", "4,8", "--out", "out"], d.path());
    assert_eq!(code(&o), 2);
    assert_eq!(json(&d.path().join("out/bundle.json"))["status"], "failed");
}

#[test]
fn element_cap_names_the_cap() {
    let d = TempDir::new().unwrap();
    let o = thinlab(
        &["expander", "--q", "7", "--cap-elements", "10", "--out", "out"],
        d.path(),
    );
    assert_eq!(code(&o), 3);
    let bundle = json(&d.path().join("out/bundle.json"));
    assert_eq!(bundle["errors"][0]["cap"], "max_elements");

    let d = TempDir::new().unwrap();
    let o = thinlab(
        &["ball", "--radius", "12", "--cap-elements", "50", "--out", "out"],
        d.path(),
    );
    assert_eq!(code(&o), 3);
    assert_eq!(
        json(&d.path().join("out/bundle.json"))["errors"][0]["cap"],
        "max_elements"
    );
}

#[test]
fn iteration_cap_is_structured() {
    let d = TempDir::new().unwrap();
    let m = manifest(
        &d,
        "e.toml",
        "kind = \"expander\"\n[caps]\nmax_iterations = 5\n[params]\nq_list = [11]\n",
    );
    let o = thinlab(&["run", "--manifest", &m, "--out", "out"], d.path());
    assert_eq!(code(&o), 3);
    assert_eq!(
        json(&d.path().join("out/bundle.json"))["errors"][0]["cap"],
        "max_iterations"
    );
}

#[test]
fn wall_clock_cap_is_structured() {
    let d = TempDir::new().unwrap();
    let m = manifest(
        &d,
        "z.toml",
        "kind = \"zaremba\"\n[caps]\nwall_clock_secs = 0.01\n[params]\na = 2\nq_max = 200000\n",
    );
    let o = thinlab(&["run", "--manifest", &m, "--out", "out"], d.path());
    assert_eq!(code(&o), 3);
    let bundle = json(&d.path().join("out/bundle.json"));
    assert_eq!(bundle["status"], "failed");
    assert_eq!(bundle["errors"][0]["cap"], "wall_clock_secs");
}

#[test]
fn csv_matches_json_within_tolerance() {
    let d = TempDir::new().unwrap();
    let args = ["rotation", "--m", "3", "--n", "3", "--Lmax", "8"];
    let o = thinlab(&[&args[..], &["--out", "j"]].concat(), d.path());
    assert_eq!(code(&o), 0);
    let o = thinlab(&[&args[..], &["--out", "c", "--format", "csv"]].concat(), d.path());
    assert_eq!(code(&o), 0);
    let rows = json(&d.path().join("j/result.json"))["result"]["table"]["rows"].clone();
    let mut reader = csv::Reader::from_path(d.path().join("c/rotation.csv")).unwrap();
    let header = reader.headers().unwrap().clone();
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    for (rec, row) in reader.records().zip(rows.as_array().unwrap()) {
        let rec = rec.unwrap();
        for name in ["lambda_max", "lambda_min"] {
            let x: f64 = rec[col(name)].parse().unwrap();
            let y = row[name].as_f64().unwrap();
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{name}: {x} vs {y}");
        }
    }
}

#[test]
fn environment_sets_default_output() {
    let d = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_thinlab"))
        .args(["zaremba", "--A", "2", "--Q", "50"])
        .current_dir(d.path())
        .env("THINLAB_OUT", d.path().join("from-env"))
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(d.path().join("from-env/bundle.json").exists());
}

#[test]
fn json_manifest_and_kind_mismatch() {
    let d = TempDir::new().unwrap();
    let m = manifest(&d, "a.json", r#"{"kind": "apollonian", "params": {"bound": 60}}"#);
    let o = thinlab(&["apollonian", "--manifest", &m, "--out", "out"], d.path());
    assert_eq!(code(&o), 0);
    let o = thinlab(&["zaremba", "--manifest", &m, "--out", "out2"], d.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn subcommand_flags() {
    let d = TempDir::new().unwrap();
    let runs: [&[&str]; 6] = [
        &["zaremba", "--A", "2", "--Q", "50", "--cross-check"],
        &["apollonian", "--root", "-1,2,2,3", "--bound", "50", "--cross-check"],
        &["rotation", "--m", "4", "--n", "4", "--Lmax", "3"],
        &["cartan", "--gram", "2,1,0,0;1,2,0,0;0,0,2,0;0,0,0,-2", "--height", "1"],
        &[
            "walk",
            "--gens",
            "hypergeometric:dwork:4:A,C",
            "--lengths",
            "3,6",
            "--trials",
            "4",
            "--seed",
            "2",
        ],
        &["monodromy", "--family", "dwork", "--ranks", "4", "--no-calabi-yau"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let out = format!("out{i}");
        let o = thinlab(&[args, &["--out", out.as_str()][..]].concat(), d.path());
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn library_errors_become_failed_bundles() {
    let d = TempDir::new().unwrap();
    let o = thinlab(
        &["cartan", "--gram", "1,0;0,1", "--height", "1", "--out", "out"],
        d.path(),
    );
    assert_eq!(code(&o), 2);
    let bundle = json(&d.path().join("out/bundle.json"));
    assert_eq!(bundle["status"], "failed");
    assert!(bundle["errors"][0]["message"].as_str().unwrap().contains("signature"));
}

#[test]
fn provenance_records_seed_and_timestamp() {
    let d = TempDir::new().unwrap();
    let o = thinlab(
        &[
            "walk",
            "--lengths",
            "4",
            "--trials",
            "3",
            "--seed",
            "17",
            "--threads",
            "1",
            "--out",
            "out",
        ],
        d.path(),
    );
    assert_eq!(code(&o), 0);
    let p = json(&d.path().join("out/provenance.json"));
    assert_eq!(p["seed"], 17);
    assert_eq!(p["threads"], 1);
    assert!(p["timestamp_unix"].as_u64().unwrap() > 0);
    let bundle = std::fs::read_to_string(d.path().join("out/bundle.json")).unwrap();
    assert!(!bundle.contains("timestamp"));
}
