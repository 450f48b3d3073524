use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use polydyn::cli::{exit_code, io};
use polydyn::error::Error;

fn polydyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polydyn"))
        .args(args)
        .env_remove(polydyn::cli::THREADS_ENV)
        .output()
        .unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn centers_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let r = polydyn(&["centers", "--d", "2", "--n", "3", "--exact", "--out", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,residual"));
    assert_eq!(lines.count(), 3);
    assert!(!text.contains('\r'));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "centers");
    for key in ["parameters", "version", "wall_time_s", "threads", "outputs", "failures"] {
        assert!(manifest.get(key).is_some(), "{key}");
    }
}

#[test]
fn multiplier_example() {
    let r = polydyn(&["multiplier", "--d", "2", "--n", "2", "--w", "0.4+0i"]);
    assert_eq!(r.status.code(), Some(0));
    let rows = io::read_points(r.stdout.as_slice()).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].coords[0].re + 0.9).abs() < 1e-12);
    assert!(rows[0].coords[0].im.abs() < 1e-12);
}

#[test]
fn ratefit_example() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("disc.csv");
    let series: Vec<(u32, f64)> = (6..=12).map(|n| (n, 0.3 * f64::from(n) / 2f64.powi(n as i32))).collect();
    io::write_series(fs::File::create(&input).unwrap(), &series).unwrap();
    let r = polydyn(&["ratefit", "--in", path_str(&input), "--model", "n_over_dn", "--d", "2"]);
    assert_eq!(r.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!((json["C_hat"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    assert!((json["r2"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(json["n_min"], 6);
    assert_eq!(json["n_max"], 12);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(polydyn(&["centers", "--d", "2"]).status.code(), Some(1));
    assert_eq!(polydyn(&["nonsense"]).status.code(), Some(1));
    assert_eq!(polydyn(&["centers", "--d", "1", "--n", "3"]).status.code(), Some(1));
    assert_eq!(polydyn(&["multiplier", "--d", "2", "--n", "2", "--w", "abc"]).status.code(), Some(1));
    assert_eq!(polydyn(&["--help"]).status.code(), Some(0));
}

#[test]
fn count_failures_exit_two() {
    let count = Error::CountMismatch {
        found: 3,
        expected: 4,
        context: String::new(),
    };
    let transversal = Error::TransversalityViolation {
        sigma_min: 0.0,
        threshold: 1e-10,
    };
    assert_eq!(exit_code(&count), 2);
    assert_eq!(exit_code(&transversal), 2);
    assert_eq!(exit_code(&Error::Domain(String::new())), 1);
}

#[test]
fn output_is_independent_of_threads() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["centers", "--d", "2", "--n", "9"],
        vec!["preimages", "--d", "3", "--n", "4", "--z", "-1+1i"],
        vec!["cubic-centers", "--n0", "2", "--n1", "1"],
        vec!["harmonic", "--d", "2", "--k", "256", "--t-min", "1e-4"],
    ] {
        let mut csv = Vec::new();
        for t in ["1", "4"] {
            let out = dir.path().join(format!("{}-{t}.csv", args[0]));
            let mut full = vec!["--threads", t];
            full.extend(&args);
            full.extend(["--out", path_str(&out)]);
            let r = polydyn(&full);
            assert_eq!(r.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
            csv.push(fs::read(&out).unwrap());
        }
        assert_eq!(csv[0], csv[1], "{args:?}");
    }
}

#[test]
fn env_var_sets_threads() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let r = Command::new(env!("CARGO_BIN_EXE_polydyn"))
        .args(["centers", "--d", "2", "--n", "4", "--out", path_str(&out)])
        .env(polydyn::cli::THREADS_ENV, "3")
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("c.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["threads"], 3);
}

#[test]
fn emitted_csv_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cm.csv");
    let r = polydyn(&["cubic-multiplier", "--n0", "2", "--n1", "1", "--w0", "0.3", "--w1", "-0.2", "--out", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let bytes = fs::read(&out).unwrap();
    let rows = io::read_points(bytes.as_slice()).unwrap();
    assert_eq!(rows.len(), 36);
    let mut again = Vec::new();
    io::write_points(&mut again, &rows).unwrap();
    assert_eq!(again, bytes);
    assert!(String::from_utf8(bytes).unwrap().starts_with("re,im,re2,im2,residual\n"));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let svg = dir.path().join("c.svg");
    let r = polydyn(&["centers", "--d", "2", "--n", "5", "--out", path_str(&out), "--plot", path_str(&svg)]);
    assert_eq!(r.status.code(), Some(0));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}
