use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chgeom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn classify_vertical() {
    let o = run(&["classify", "--group", &data("vertical.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "Parabolic");
}

#[test]
fn classify_each_generator() {
    let o = run(&["classify", "--group", &data("lattice.json")]);
    assert_eq!(stdout(&o), "g1: Parabolic\ng2: Parabolic\n");
    assert_eq!(stdout(&run(&["classify", "--group", &data("boost.json")])).trim(), "Loxodromic");
    assert_eq!(stdout(&run(&["classify", "--group", &data("screw.json")])).trim(), "Parabolic");
}

#[test]
fn mu_density_line() {
    let o = run(&["mu-density", "--points", &data("line4.csv"), "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("dense: true\n"));
}

#[test]
fn dirichlet_sides_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sides.csv");
    let o = run(&[
        "dirichlet-sides",
        "--group",
        &data("lattice.json"),
        "--center",
        "0,0,1",
        "--L",
        "4",
        "--rays",
        "4000",
        "--seed",
        "7",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert!(header.contains(&"face_count"));
    assert!(csv.lines().count() > 5);
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sides.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "dirichlet-sides");
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["kappa"], 2.0);
    assert_eq!(manifest["parameters"]["rays"], 4000);
    assert_eq!(manifest["parameters"]["delta_eq"], 1e-7);
}

#[test]
fn csv_bytes_do_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let jobs: Vec<Vec<String>> = vec![
        ["dirichlet-sides", "--group", &data("vertical.json"), "--center", "0.7-0.2i,0,2", "--rays", "3000", "--seed", "3"]
            .map(String::from)
            .to_vec(),
        ["dirichlet-sides", "--group", &data("lattice.json"), "--center", "0,0,1", "--L", "3", "--rays", "3000"]
            .map(String::from)
            .to_vec(),
        ["cr-audit", "--points", &data("vertical_shift.csv"), "--quads", "5000", "--seed", "11"].map(String::from).to_vec(),
        ["cusp-audit", "--group", &data("vertical.json"), "--samples", "2000"].map(String::from).to_vec(),
    ];
    for (j, job) in jobs.iter().enumerate() {
        let mut outputs = vec![];
        for threads in ["1", "4", "8"] {
            let out = dir.path().join(format!("job{j}_{threads}.csv"));
            let mut args: Vec<&str> = job.iter().map(|s| s.as_str()).collect();
            args.extend(["--threads", threads, "--out", out.to_str().unwrap()]);
            let o = run(&args);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            outputs.push(std::fs::read(&out).unwrap());
        }
        assert!(!outputs[0].is_empty());
        assert_eq!(outputs[0], outputs[1], "job {j}");
        assert_eq!(outputs[0], outputs[2], "job {j}");
    }
}

#[test]
fn malformed_group_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "generators": [{"type": "heis", "xi": [[0, 0], [1, 0]], "v": 1}]}"#).unwrap();
    let o = run(&["classify", "--group", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("generators[0].xi"), "{}", stderr(&o));

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["classify", "--group", bad.to_str().unwrap()]).status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["classify", "--group", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn non_j_unitary_input_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("scaled.json");
    std::fs::write(
        &bad,
        r#"{"n": 2, "generators": [{"type": "matrix", "entries": [
            [[2, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]]]}]}"#,
    )
    .unwrap();
    let o = run(&["classify", "--group", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    std::fs::write(&bad, r#"{"n": 2, "generators": [{"type": "heis", "A": [[[2, 0]]], "xi": [[0, 0]], "v": 1}]}"#).unwrap();
    assert_eq!(run(&["classify", "--group", bad.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn bad_arguments_are_validation_errors() {
    assert_eq!(run(&["classify", "--group", &data("vertical.json"), "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let o = run(&["dirichlet-sides", "--group", &data("vertical.json"), "--center", "0,0,-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--center"));
    let o = run(&["mu-density", "--points", &data("line4.csv"), "--mu", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    // loxodromic generators have no two-sided center search
    let o = run(&["center-search", "--group", &data("boost.json"), "--center", "0,0,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_defaults() {
    let o = run(&["dirichlet-sides", "--help"]);
    let h = stdout(&o);
    for flag in ["--rays", "--seed", "--kappa", "--t-max", "--delta-eq", "--delta-strict", "--bisect-tol", "--L", "--dedup-tol"] {
        let line = h.lines().find(|l| l.contains(flag)).unwrap_or_else(|| panic!("{flag} missing"));
        assert!(line.contains("[default:"), "{line}");
    }
    let h = stdout(&run(&["cr-audit", "--help"]));
    assert!(h.contains("--quads") && h.contains("[default: 100000]"));
}

#[test]
fn group_subcommands() {
    let o = run(&["invariant-subgroup", "--group", &data("lattice.json"), "--samples", "300"]);
    let s = stdout(&o);
    assert!(s.contains("include center: true"), "{s}");
    assert!(s.contains("cocompact: true"), "{s}");

    let o = run(&["cusp-audit", "--group", &data("vertical.json"), "--samples", "1000"]);
    assert!(stdout(&o).starts_with("violations: 0\n"), "{}", stdout(&o));

    let o = run(&["limitset", "--group", &data("boost.json"), "--center", "0,0,1", "--L", "6"]);
    assert!(stdout(&o).starts_with("limit set clusters: 2\n"), "{}", stdout(&o));

    let o = run(&["center-search", "--group", &data("screw.json"), "--center", "0,0,1", "--rays", "1000"]);
    let s = stdout(&o);
    assert!(s.starts_with("found: true"), "{s}");
    assert!(s.contains("faces: 2 (stable: true"), "{s}");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("orbit.csv");
    let o = run(&["orbit", "--group", &data("vertical.json"), "--center", "0,0,1", "--L", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // identity plus g^±1, g^±2, g^±3
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 1 + 7);
}

#[test]
fn cr_audit_of_an_isometry() {
    let o = run(&["cr-audit", "--points", &data("vertical_shift.csv"), "--quads", "5000", "--alphas", "1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let first = stdout(&o).lines().next().unwrap().to_string();
    let m: f64 = first.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(first.starts_with("alpha 1.00") && (m - 1.0).abs() < 1e-9, "{first}");
    let o = run(&["cr-audit", "--points", &data("line4.csv")]);
    assert_eq!(o.status.code(), Some(2));
}
