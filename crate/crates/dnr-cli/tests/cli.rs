//! End-to-end checks of the command-line surface: file formats, error
//! paths, and the shapes of every emitted artifact.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dnr() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dnr"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = dnr().args(args).output().expect("spawning dnr");
    assert!(
        out.status.success(),
        "dnr {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn tmpdir(tag: &str) -> tempfile::TempDir {
    tempfile::Builder::new().prefix(tag).tempdir().unwrap()
}

#[test]
fn report_on_the_builtin_case_reproduces_the_reference_shape() {
    let out = tmpdir("report");
    run_ok(&["report", "-i", "ieee33", "-o", out.path().to_str().unwrap(), "--all"]);
    let csv = fs::read_to_string(out.path().join("report.csv")).unwrap();
    let mut lines = csv.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with(
        "component,nodes_gc,nodes_g0,edges_gc,edges_g0,interactions,logical_qubits,logical_rotation_gates"
    ));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..5], &["c0", "32", "9", "36", "13"]);

    // deviation flags for the builtin case
    let dev: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("table_deviation.json")).unwrap())
            .unwrap();
    assert!(dev["qubit_ratio"].as_f64().unwrap() > 1.0);
    assert!(dev["interaction_ratio"].as_f64().unwrap() >= 1.0);

    // trade-off table has three distances per profile for six profiles
    let tradeoff = fs::read_to_string(out.path().join("tradeoff.csv")).unwrap();
    assert_eq!(tradeoff.lines().count(), 1 + 18);
}

#[test]
fn decompose_fixture_shapes_match_their_design() {
    for (file, gc_nodes, g0_nodes, gc_edges, g0_edges) in [
        ("synthetic_mv_small.json", 7, 3, 7, 3),
        ("synthetic_mv_medium.json", 13, 3, 13, 3),
        ("synthetic_mv_large.json", 14, 4, 15, 5),
    ] {
        let out = tmpdir("dec");
        run_ok(&[
            "decompose",
            "-i",
            fixture(file).to_str().unwrap(),
            "-o",
            out.path().to_str().unwrap(),
        ]);
        let dec: serde_json::Value = serde_json::from_str(
            &fs::read_to_string(out.path().join("decomposition.json")).unwrap(),
        )
        .unwrap();
        let c = &dec["components"][0];
        assert_eq!(c["nodes_gc"], gc_nodes, "{file}");
        assert_eq!(c["nodes_g0"], g0_nodes, "{file}");
        assert_eq!(c["edges_gc"], gc_edges, "{file}");
        assert_eq!(c["edges_g0"], g0_edges, "{file}");
    }
}

#[test]
fn solve_classical_two_block_network() {
    // two triangles sharing a node: component optima are 10 W and 2 W
    let net = r#"{
        "nodes": [
            {"id": "r", "current_a": 0.0, "root": true},
            {"id": "a", "current_a": 1.0},
            {"id": "c", "current_a": 1.0},
            {"id": "d", "current_a": 1.0},
            {"id": "e", "current_a": 1.0}
        ],
        "edges": [
            {"u": "r", "v": "a", "resistance_ohm": 1.0},
            {"u": "a", "v": "c", "resistance_ohm": 1.0},
            {"u": "c", "v": "r", "resistance_ohm": 1.0},
            {"u": "c", "v": "d", "resistance_ohm": 1.0},
            {"u": "d", "v": "e", "resistance_ohm": 1.0},
            {"u": "e", "v": "c", "resistance_ohm": 1.0}
        ]
    }"#;
    let dir = tmpdir("solve");
    let input = dir.path().join("two_blocks.json");
    fs::write(&input, net).unwrap();
    let out = tmpdir("solveout");
    run_ok(&[
        "solve-classical",
        "-i",
        input.to_str().unwrap(),
        "-o",
        out.path().to_str().unwrap(),
    ]);
    let solved: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("solve.json")).unwrap()).unwrap();
    let comps = solved["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    // near triangle: c draws its own 1 A plus the far triangle's 2 A
    assert_eq!(comps[0]["loss_w"], 10.0);
    assert_eq!(comps[0]["n_configurations"], 3);
    assert_eq!(comps[1]["loss_w"], 2.0);
    assert_eq!(solved["fixed_loss_w"], 0.0);
    assert_eq!(solved["total_loss_w"], 12.0);
}

#[test]
fn csv_directory_input_is_accepted() {
    let dir = tmpdir("csvin");
    fs::write(
        dir.path().join("nodes.csv"),
        "id,current_a,root\nr,0.0,true\na,1.0,false\nb,1.0,false\n",
    )
    .unwrap();
    fs::write(
        dir.path().join("edges.csv"),
        "u,v,resistance_ohm,switchable\nr,a,1.0,true\nr,b,1.0,true\na,b,1.0,true\n",
    )
    .unwrap();
    let out = tmpdir("csvout");
    run_ok(&[
        "solve-classical",
        "-i",
        dir.path().to_str().unwrap(),
        "-o",
        out.path().to_str().unwrap(),
    ]);
    let solved: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("solve.json")).unwrap()).unwrap();
    assert_eq!(solved["total_loss_w"], 2.0);
}

#[test]
fn weights_file_is_honoured() {
    let dir = tmpdir("weights");
    let weights = dir.path().join("weights.json");
    fs::write(
        &weights,
        r#"{"lambda_vertex": 9.0, "lambda_edge": 9.0, "lambda_cycle": 9.0,
           "lambda_path": 9.0, "lambda_implies": 9.0, "lambda_loss": 1.0}"#,
    )
    .unwrap();
    let out = tmpdir("weightsout");
    run_ok(&[
        "build-hubo",
        "-i",
        fixture("synthetic_mv_small.json").to_str().unwrap(),
        "-o",
        out.path().to_str().unwrap(),
        "--weights",
        weights.to_str().unwrap(),
    ]);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("hubo_c0.json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["weights"]["lambda_vertex"], 9.0);
    // accounting identity from the sidecar
    let c = &sidecar["family_term_counts"];
    assert_eq!(
        c["family_sum"].as_u64().unwrap(),
        c["assembled"].as_u64().unwrap() + c["merged_or_cancelled"].as_u64().unwrap()
    );
}

#[test]
fn empty_profiles_file_is_a_usage_error() {
    let dir = tmpdir("profiles");
    let profiles = dir.path().join("profiles.json");
    fs::write(&profiles, "[]").unwrap();
    let out = tmpdir("qreout");
    let result = dnr()
        .args([
            "qre",
            "-i",
            fixture("synthetic_mv_small.json").to_str().unwrap(),
            "-o",
            out.path().to_str().unwrap(),
            "--profiles",
            profiles.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("no hardware profiles"), "{stderr}");
    assert!(!out.path().join("qre.csv").exists(), "no partial outputs");
}

#[test]
fn error_paths_name_the_module_and_entity() {
    let dir = tmpdir("err");
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"nodes": [{"id": "r", "current_a": 0.0, "root": true},
                      {"id": "a", "current_a": 1.0}],
            "edges": [{"u": "a", "v": "a", "resistance_ohm": 1.0}]}"#,
    )
    .unwrap();
    let out = tmpdir("errout");
    let result = dnr()
        .args([
            "decompose",
            "-i",
            bad.to_str().unwrap(),
            "-o",
            out.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("network:"), "{stderr}");
    assert!(stderr.contains("self-loop"), "{stderr}");
    assert!(stderr.contains('a'), "{stderr}");
}

#[test]
fn counts_command_is_deterministic() {
    let out1 = tmpdir("counts1");
    let out2 = tmpdir("counts2");
    for out in [&out1, &out2] {
        run_ok(&[
            "counts",
            "-i",
            fixture("synthetic_mv_large.json").to_str().unwrap(),
            "-o",
            out.path().to_str().unwrap(),
        ]);
    }
    let a = fs::read(out1.path().join("counts.csv")).unwrap();
    let b = fs::read(out2.path().join("counts.csv")).unwrap();
    assert_eq!(a, b);
    let a = fs::read(out1.path().join("counts_c0.json")).unwrap();
    let b = fs::read(out2.path().join("counts_c0.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn json_report_format_is_available() {
    let out = tmpdir("jsonfmt");
    run_ok(&[
        "report",
        "-i",
        fixture("synthetic_mv_small.json").to_str().unwrap(),
        "-o",
        out.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(rows[0]["nodes_gc"], 7);
    assert_eq!(rows[0]["nodes_g0"], 3);
}
