//! Acceptance checks for the CLI surface: determinism (criterion 11),
//! output shape, and the documented exit codes.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_grover-su2"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn bath_file(contents: &str) -> temppath::TempPath {
    temppath::TempPath::new(contents)
}

/// Tiny self-cleaning temp file helper.
mod temppath {
    use std::path::PathBuf;

    pub struct TempPath {
        pub path: PathBuf,
    }

    impl TempPath {
        pub fn new(contents: &str) -> Self {
            let mut path = std::env::temp_dir();
            let unique = format!(
                "grover-su2-test-{}-{:?}.txt",
                std::process::id(),
                std::thread::current().id()
            );
            path.push(unique);
            std::fs::write(&path, contents).expect("temp file");
            Self { path }
        }

        pub fn as_str(&self) -> &str {
            self.path.to_str().expect("utf-8 temp path")
        }
    }

    impl Drop for TempPath {
        fn drop(&mut self) {
            let _ = std::fs::remove_file(&self.path);
        }
    }
}

#[test]
fn criterion_11_identical_seeds_give_byte_identical_output() {
    let configs: Vec<Vec<&str>> = vec![
        vec![
            "sweep",
            "--model",
            "ideal",
            "--n",
            "1024",
            "--marked",
            "7",
            "--steps-max",
            "40",
        ],
        vec![
            "sweep",
            "--model",
            "decohered",
            "--n",
            "64",
            "--ensemble",
            "random",
            "--env-dim",
            "32",
            "--seed",
            "42",
            "--steps-max",
            "20",
        ],
        vec![
            "sweep", "--model", "general", "--n", "256", "--marked", "3", "--seed", "9",
            "--format", "json",
        ],
        vec![
            "sweep",
            "--model",
            "minimal-coupling",
            "--n",
            "100",
            "--r",
            "0.7",
            "--delta",
            "0.3",
            "--steps-max",
            "12",
        ],
        vec![
            "check",
            "--model",
            "decohered",
            "--n",
            "32",
            "--ensemble",
            "random",
            "--seed",
            "1234",
        ],
    ];
    for config in configs {
        let first = run(&config);
        let second = run(&config);
        assert!(first.status.success(), "{config:?}: {:?}", first);
        assert_eq!(
            first.stdout, second.stdout,
            "non-deterministic output for {config:?}"
        );
        assert_eq!(first.stderr, second.stderr);
    }

    let bath = bath_file("# omega g_k g_kprime\n1.0 0.25 0.15\n2.0 0.1 0.1\n");
    let config = vec![
        "sweep",
        "--model",
        "bath",
        "--bath-file",
        bath.as_str(),
        "--steps-max",
        "15",
    ];
    let first = run(&config);
    let second = run(&config);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    println!("acceptance criterion 11 (determinism): PASS");
}

#[test]
fn csv_shape_matches_contract() {
    let out = run(&["sweep", "--model", "ideal", "--n", "4", "--steps-max", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data_rows: Vec<&str> = text.lines().filter(|line| !line.starts_with('#')).collect();
    assert_eq!(data_rows.len(), 4, "steps_max + 1 data rows");
    assert!(text
        .lines()
        .all(|l| l.starts_with('#') || l.split(',').count() == 4));
    // the forced entries of the n=4 trace
    assert!(data_rows[0].starts_with("0,2.5e-1,2.5e-1,"));
    assert!(data_rows[1].starts_with("1,1e0,1e0,"));
    // every emitted probability lies in [0, 1]
    for row in &data_rows {
        for field in row.split(',').skip(1).filter(|f| !f.is_empty()) {
            let v: f64 = field.parse().unwrap();
            assert!((0.0..=1.0).contains(&v), "{row}");
        }
    }
}

#[test]
fn json_wraps_meta_and_rows() {
    let out = run(&[
        "sweep",
        "--model",
        "ideal",
        "--n",
        "16",
        "--steps-max",
        "5",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["model"], "ideal");
    assert_eq!(doc["meta"]["n"], 16);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 6);
    let row = &doc["rows"][0];
    assert_eq!(row["l"], 0);
    assert!((row["closed_form_probability"].as_f64().unwrap() - 0.0625).abs() < 1e-15);
}

#[test]
fn invalid_configs_exit_one() {
    let cases: Vec<Vec<&str>> = vec![
        // missing --n
        vec!["sweep", "--model", "ideal"],
        // n too small for the collective state
        vec!["sweep", "--model", "ideal", "--n", "1"],
        // marked out of range
        vec!["sweep", "--model", "ideal", "--n", "8", "--marked", "8"],
        // decohered needs n >= 3
        vec!["sweep", "--model", "decohered", "--n", "2"],
        // r outside [0, 1]
        vec![
            "sweep",
            "--model",
            "minimal-coupling",
            "--n",
            "16",
            "--r",
            "1.5",
        ],
        // flag not applicable to the model
        vec!["sweep", "--model", "ideal", "--n", "16", "--r", "0.5"],
        // bath without a file
        vec!["sweep", "--model", "bath"],
        // unknown flag (clap error)
        vec!["sweep", "--model", "ideal", "--n", "16", "--bogus"],
        // orthonormal ensembles pin env-dim to n
        vec![
            "sweep",
            "--model",
            "decohered",
            "--n",
            "8",
            "--ensemble",
            "orthonormal",
            "--env-dim",
            "4",
        ],
    ];
    for config in cases {
        let out = run(&config);
        assert_eq!(
            out.status.code(),
            Some(1),
            "expected exit 1 for {config:?}, stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn infeasible_oracle_exits_three_on_check_and_skips_on_sweep() {
    let check = run(&[
        "check",
        "--model",
        "ideal",
        "--n",
        "4096",
        "--oracle-budget",
        "100",
    ]);
    assert_eq!(check.status.code(), Some(3));

    let sweep = run(&[
        "sweep",
        "--model",
        "ideal",
        "--n",
        "4096",
        "--steps-max",
        "5",
        "--oracle-budget",
        "100",
    ]);
    assert_eq!(sweep.status.code(), Some(0));
    let text = String::from_utf8(sweep.stdout).unwrap();
    assert!(
        text.contains("# oracle: skipped (cost 4096 amplitudes > budget 100)"),
        "skip marker missing:\n{text}"
    );
    // oracle and difference columns are empty, not fabricated
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        assert!(
            line.ends_with(",,"),
            "row should have empty oracle cells: {line}"
        );
    }
}

#[test]
fn check_reports_cover_every_model() {
    let bath = bath_file("1.0 0.25 0.15\n");
    let configs: Vec<Vec<String>> = vec![
        vec!["check", "--model", "ideal", "--n", "256"],
        vec!["check", "--model", "general", "--n", "256", "--seed", "5"],
        vec![
            "check", "--model", "multi", "--n", "4096", "--marked", "1,2,3,4",
        ],
        vec![
            "check",
            "--model",
            "decohered",
            "--n",
            "32",
            "--ensemble",
            "phase-matched",
        ],
        vec!["check", "--model", "necoherence", "--n", "256"],
        vec![
            "check",
            "--model",
            "minimal-coupling",
            "--n",
            "100",
            "--r",
            "0.9",
            "--delta",
            "0.2",
        ],
        vec![
            "check",
            "--model",
            "bath",
            "--bath-file",
            bath.as_str(),
            "--steps-max",
            "20",
        ],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for config in configs {
        let args: Vec<&str> = config.iter().map(String::as_str).collect();
        let out = run(&args);
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?} failed:\n{text}\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(text.contains("overall: PASS"), "{args:?}:\n{text}");
        assert!(
            text.contains("vs limit"),
            "{args:?} missing tolerances:\n{text}"
        );
    }
}

#[test]
fn orthonormal_ensemble_sweep_is_the_classical_constant() {
    let out = run(&[
        "sweep",
        "--model",
        "decohered",
        "--n",
        "8",
        "--ensemble",
        "orthonormal",
        "--steps-max",
        "6",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let closed: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((closed - 0.125).abs() < 1e-14, "{line}");
    }
}

#[test]
fn single_mode_bath_sweep_recurs_and_fit_is_flagged() {
    // omega * t0 = 2 pi / 8: |F| recurs every 8 steps, so the decay fit
    // must refuse and the column must be periodic
    let bath = bath_file("0.7853981633974483 0.25 0.15\n");
    let out = run(&[
        "sweep",
        "--model",
        "bath",
        "--bath-file",
        bath.as_str(),
        "--steps-max",
        "16",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("# gamma_fit_status: unreliable"),
        "fit should be flagged unreliable:\n{text}"
    );
    let f: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    for (l, v) in f.iter().enumerate() {
        assert!(*v > 0.0 && *v <= 1.0, "|F| out of (0,1] at {l}");
    }
    assert!((f[8] - 1.0).abs() < 1e-12, "recurrence at l=8: {}", f[8]);
    assert!((f[16] - 1.0).abs() < 1e-12);
    assert!(f[4] < 1.0);
}

#[test]
fn crosscheck_reference_configurations_pass() {
    // ideal at n=1024, a random ensemble at n=64 with seed 7, and a
    // single-mode bath with coupling difference 0.1
    let ideal = run(&["check", "--model", "ideal", "--n", "1024"]);
    assert_eq!(ideal.status.code(), Some(0));

    let decohered = run(&[
        "check",
        "--model",
        "decohered",
        "--n",
        "64",
        "--ensemble",
        "random",
        "--seed",
        "7",
    ]);
    assert_eq!(decohered.status.code(), Some(0));
    let text = String::from_utf8(decohered.stdout).unwrap();
    assert!(text.contains("vs limit 1e-10 ... PASS"), "{text}");

    let bath = bath_file("1.0 0.25 0.15\n");
    let bath_out = run(&["check", "--model", "bath", "--bath-file", bath.as_str()]);
    assert_eq!(bath_out.status.code(), Some(0));
    let text = String::from_utf8(bath_out.stdout).unwrap();
    assert!(text.contains("vs limit 1e-6 ... PASS"), "{text}");
}

#[test]
fn sweep_writes_files_identically_to_stdout() {
    let mut path = std::env::temp_dir();
    path.push(format!("grover-su2-out-{}.csv", std::process::id()));
    let to_file = run(&[
        "sweep",
        "--model",
        "ideal",
        "--n",
        "64",
        "--steps-max",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    let from_file = std::fs::read(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    let to_stdout = run(&[
        "sweep",
        "--model",
        "ideal",
        "--n",
        "64",
        "--steps-max",
        "10",
    ]);
    assert_eq!(from_file, to_stdout.stdout);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}
