use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn isowave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isowave"))
        .current_dir(dir)
        .env_remove("ISOWAVE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

const SMALL: &str =
    "seed = 11\n[grid]\nnk = 4\nnm = 4\n[triads]\ncount = 50\n[scan]\nnx = 3\nny = 2\n";

fn workspace(config: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.toml"), config).unwrap();
    dir
}

#[test]
fn empty_scenario_is_a_usage_error() {
    let dir = workspace("");
    let out = isowave(dir.path(), &["-c", "run.toml", "run"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no scenario"));
}

#[test]
fn unknown_key_is_a_config_error_with_line() {
    let dir = workspace("[grid]\nnk = 4\nsmoothing = 1\n");
    let out = isowave(dir.path(), &["-c", "run.toml", "dispersion"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("smoothing"), "{err}");
}

#[test]
fn computation_failure_exits_one_with_diagnostic() {
    // an amplitude this large drives the layer depth negative
    let dir = workspace("[hamlab]\nmodel = \"nonlinear_sw\"\nnx = 8\nny = 8\namplitude = 5.0\nsteps = 200\ndt = 0.5\n");
    let out = isowave(
        dir.path(),
        &["-c", "run.toml", "-o", "out", "hamlab", "run"],
    );
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let diag = fs::read_to_string(dir.path().join("out/error.txt")).unwrap();
    assert!(diag.contains("exit status: 1"), "{diag}");
}

#[test]
fn runs_are_byte_identical() {
    let dir = workspace(SMALL);
    for (sub, file) in [
        (&["triads", "dump"][..], "triads.csv"),
        (&["collision", "scan"][..], "collision.csv"),
    ] {
        let mut bodies = Vec::new();
        for (i, threads) in ["1", "3"].iter().enumerate() {
            let out_dir = format!("out{i}");
            let mut args = vec!["-c", "run.toml", "-o", &out_dir, "--threads", threads];
            args.extend_from_slice(sub);
            let out = isowave(dir.path(), &args);
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            bodies.push(fs::read(dir.path().join(&out_dir).join(file)).unwrap());
        }
        assert_eq!(bodies[0], bodies[1], "{file}");
    }
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = workspace(SMALL);
    let out = isowave(dir.path(), &["-c", "run.toml", "-o", "a", "dispersion"]);
    assert!(out.status.success());
    let manifest = fs::read_to_string(dir.path().join("a/manifest.toml")).unwrap();
    assert!(manifest.contains("dispersion.csv"));
    // re-run from the emitted config
    fs::copy(
        dir.path().join("a/config.toml"),
        dir.path().join("again.toml"),
    )
    .unwrap();
    let out = isowave(dir.path(), &["-c", "again.toml", "-o", "b", "run"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        fs::read(dir.path().join("a/dispersion.csv")).unwrap(),
        fs::read(dir.path().join("b/dispersion.csv")).unwrap()
    );
    let csv = fs::read_to_string(dir.path().join("a/dispersion.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("k,m,omega"));
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn gm_compare_reports_asymptotic_slopes() {
    let dir = workspace("[physics]\nf = 1e-4\n");
    let out = isowave(dir.path(), &["-c", "run.toml", "-o", "gm", "gm", "compare"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let slopes = fs::read_to_string(dir.path().join("gm/gm_slopes.csv")).unwrap();
    let gm: Vec<f64> = slopes
        .lines()
        .find(|l| l.starts_with("gm,"))
        .unwrap()
        .split(',')
        .skip(1)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(
        (gm[0] + 2.0).abs() < 0.1 && (gm[1] + 1.5).abs() < 0.075,
        "{gm:?}"
    );
}

#[test]
fn hamlab_writes_energy_log_and_snapshots() {
    let dir = workspace(
        "[hamlab]\nmodel = \"linear_sw\"\nnx = 8\nny = 8\nsteps = 4\nsnapshot_every = 2\n",
    );
    let out = isowave(dir.path(), &["-c", "run.toml", "-o", "h", "hamlab", "run"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let log = fs::read_to_string(dir.path().join("h/energy.csv")).unwrap();
    assert_eq!(log.lines().count(), 6);
    let snap = fs::read_to_string(dir.path().join("h/mass_0001.txt")).unwrap();
    let lines: Vec<&str> = snap.lines().collect();
    assert!(lines[1].starts_with("x_axis,") && lines[3].starts_with("rho_axis,"));
    assert_eq!(lines.len(), 4 + 64);
}

#[test]
fn defaults_parse_back() {
    let dir = workspace("");
    let out = isowave(dir.path(), &["defaults"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        isowave_cli::config::parse_config(&text).unwrap(),
        isowave_cli::config::RunConfig::default()
    );
}
