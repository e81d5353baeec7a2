use std::process::{Command, Output};

use crystalft_cli::record::{read_records, Format};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystalft"))
        .args(args)
        .env_remove("CRYSTALFT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// CSV payload with the timestamp column dropped.
fn without_timestamp(csv: &str) -> Vec<String> {
    csv.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
}

#[test]
fn list_has_table_rows() {
    let o = run(&["lattice", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert!(rows.contains(&"srs 3 10"), "{out}");
    assert!(rows.contains(&"bst 12 3"), "{out}");
    let names: Vec<&str> = rows.iter().map(|r| r.split(' ').next().unwrap()).collect();
    for n in ["pcu", "dia", "srs", "bst", "cdq", "hms", "ctn"] {
        assert!(names.contains(&n), "{n} missing");
        assert_eq!(run(&["lattice", "stats", "--name", n]).status.code(), Some(0));
    }
}

#[test]
fn bundled_symbol_validates() {
    let o = run(&["symbol", "validate", "cubic.dsym"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid: d=3 size=1"));
}

#[test]
fn symbol_files_round_trip_through_dual() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["symbol", "dual", "truncated_square"]);
    assert_eq!(o.status.code(), Some(0));
    let path = dir.path().join("dual.dsym");
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = run(&["symbol", "validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["symbol", "selfdual", path.to_str().unwrap()]);
    assert_eq!(stdout(&o).lines().next(), Some("self-dual: no"));
    assert_eq!(stdout(&run(&["symbol", "selfdual", "cubic"])).lines().next(), Some("self-dual: yes"));
}

#[test]
fn invalid_symbol_is_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.dsym");
    // r0 is not an involution.
    std::fs::write(&path, "d=2 size=3\nr0: 1 2 0\nr1: 0 1 2\nr2: 0 1 2\nm01: [4 4 4]\nm12: [4 4 4]\n").unwrap();
    let o = run(&["symbol", "validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    assert_eq!(run(&["symbol", "validate", "no-such-symbol"]).status.code(), Some(1));
}

#[test]
fn enumerate_counts_and_streams() {
    let o = run(&["symbol", "enumerate", "--n", "3", "--k", "3", "--boundary", "loop", "--count-only"]);
    assert_eq!(stdout(&o).trim(), "125");
    let o = run(&["symbol", "enumerate", "--n", "3", "--k", "3"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 125);
    assert!(lines.contains(&"m12: [6 4 4 2]".to_string()));
    let o = run(&["symbol", "enumerate", "--n", "3", "--k", "2", "--boundary", "loop"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec![],
        vec!["simulate", "--lattice", "pcu", "--L", "4", "--trials", "10"],
        vec!["simulate", "--lattice", "pcu", "--L", "1", "--pz", "0.01", "--trials", "10"],
        vec!["simulate", "--lattice", "pcu", "--L", "4", "--pz", "0.01", "--trials", "0"],
        vec!["simulate", "--lattice", "pcu", "--L", "4", "--pz", "0.01", "--regime", "pz", "--p", "0.01", "--trials", "5"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_documents_flags() {
    let cases: [(&[&str], &[&str]); 7] = [
        (&[], &["--threads", "symbol", "complex", "lattice", "simulate", "threshold"]),
        (&["symbol"], &["validate", "dual", "selfdual", "enumerate"]),
        (&["symbol", "enumerate"], &["--n", "--k", "--boundary", "--count-only"]),
        (&["complex"], &["check", "foliate"]),
        (&["lattice"], &["build", "stats", "list"]),
        (&["simulate"], &["--lattice", "--L", "--pz", "--px", "--pm", "--trials", "--seed", "--out", "--format"]),
        (&["threshold"], &["--lattice", "--regime", "--Ls", "--pmin", "--pmax", "--points", "--trials"]),
    ];
    for (cmd, flags) in cases {
        let mut args = cmd.to_vec();
        args.push("--help");
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{cmd:?}");
        let text = stdout(&o);
        for f in flags {
            assert!(text.contains(f), "{cmd:?} help lacks {f}");
        }
    }
}

#[test]
fn simulate_emits_one_row() {
    let args = ["simulate", "--lattice", "pcu", "--L", "4", "--pz", "0.005", "--px", "0", "--pm", "0", "--trials", "1000", "--seed", "1"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let recs = read_records(Format::Csv, o.stdout.as_slice()).unwrap();
    assert_eq!(recs.len(), 1);
    let r = &recs[0];
    assert_eq!((r.lattice.as_str(), r.l, r.trials, r.seed), ("pcu", 4, 1000, 1));
    assert_eq!((r.p_z, r.p_x, r.p_m), (0.005, 0.0, 0.0));
    assert!(r.ci_lo <= r.rate && r.rate <= r.ci_hi);
    // Progress goes to stderr only.
    assert!(String::from_utf8_lossy(&o.stderr).contains("L=4"));
}

#[test]
fn simulate_is_reproducible_across_thread_counts() {
    let base = ["simulate", "--lattice", "dia", "--L", "3,4", "--regime", "sym", "--p", "0.004", "--trials", "3000", "--seed", "9"];
    let a = run(&base);
    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let b = run(&one);
    let c = Command::new(env!("CARGO_BIN_EXE_crystalft"))
        .args(base)
        .env("CRYSTALFT_THREADS", "3")
        .output()
        .unwrap();
    for o in [&a, &b, &c] {
        assert_eq!(o.status.code(), Some(0));
    }
    let want = without_timestamp(&stdout(&a));
    assert_eq!(want.len(), 3);
    assert_eq!(want, without_timestamp(&stdout(&b)));
    assert_eq!(want, without_timestamp(&stdout(&c)));
}

#[test]
fn simulate_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = run(&[
        "simulate", "--lattice", "srs", "--L", "2,3", "--pz", "0.01", "--trials", "200", "--format", "json", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let recs = read_records(Format::Json, std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(recs.iter().map(|r| r.l).collect::<Vec<_>>(), vec![2, 3]);
}

#[test]
fn unwritable_output_names_the_path() {
    let o = run(&["simulate", "--lattice", "pcu", "--L", "2", "--pz", "0.01", "--trials", "5", "--out", "/nonexistent/dir/r.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dir/r.csv"));
}

#[test]
fn out_of_range_rate_is_domain_error() {
    let o = run(&["simulate", "--lattice", "pcu", "--L", "2", "--pz", "0.7", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lattice_build_writes_graph() {
    let o = run(&["lattice", "build", "--name", "pcu", "--L", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let g: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(g["L"], 3);
    assert_eq!(g["num_vertices"], 27);
    assert_eq!(g["num_plain"], 81);
}

#[test]
fn foliated_file_checks() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let o = run(&["complex", "foliate", "422", "--layers", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["complex", "check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dims"], serde_json::json!([2, 10, 10, 2]));
    let o = run(&["complex", "foliate", "toric:3", "--layers", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn threshold_pcu_near_table_value() {
    let o = run(&[
        "threshold", "--lattice", "pcu", "--regime", "pz", "--Ls", "4,6", "--pmin", "0.004", "--pmax", "0.011",
        "--points", "8", "--trials", "20000", "--bootstrap", "20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let p_th = v["p_th"].as_f64().unwrap();
    assert!((p_th - 0.0076).abs() < 0.001, "p_th = {p_th}");
    assert_eq!(v["points"].as_array().unwrap().len(), 16);
}
