use std::path::{Path, PathBuf};
use std::process::Command;

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

fn fixture(name: &str) -> PathBuf {
    Path::new(FIXTURES).join(format!("{name}.conf"))
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_photocorr")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn sidecar(p: &Path) -> serde_json::Value {
    let mut s = p.as_os_str().to_owned();
    s.push(".json");
    serde_json::from_str(&std::fs::read_to_string(PathBuf::from(s)).unwrap()).unwrap()
}

#[test]
fn spectrum_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let (code, err) = run(&[
        "spectrum", "--config", fixture("fig2f").to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "-1.5:1.5:7",
    ]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "varpi,omega,S");
    assert_eq!(lines.len(), 8);
    let mantissa = lines[1].split(',').next().unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.trim_start_matches('-').replace('.', "").len(), 12);
    let meta = sidecar(&out);
    assert_eq!(meta["command"], "spectrum");
    assert_eq!(meta["rows"], 7);
}

#[test]
fn g2map_is_independent_of_the_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = fixture("fig2f");
    let mut outputs = Vec::new();
    for w in ["1", "3"] {
        let out = dir.path().join(format!("m{w}.csv"));
        let (code, err) = run(&[
            "g2map", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "-1.2:1.2:4,-1.2:1.2:4",
            "--workers", w,
        ]);
        assert_eq!(code, 0, "{err}");
        outputs.push(std::fs::read_to_string(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].starts_with("varpi1,varpi2,g2,I0,I1,I2,R,B,S\n"));
    assert_eq!(outputs[0].lines().count(), 17);
}

#[test]
fn decompose_and_quantifiers_fill_their_channels() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, cols) in [("decompose", [3usize, 4, 5]), ("quantifiers", [6, 7, 8])] {
        let out = dir.path().join(format!("{cmd}.csv"));
        let (code, err) = run(&[
            cmd, "--config", fixture("fig2f").to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "0.3:0.6:2,-1.7:-0.4:2",
        ]);
        assert_eq!(code, 0, "{err}");
        let text = std::fs::read_to_string(&out).unwrap();
        for line in text.lines().skip(1) {
            let f: Vec<&str> = line.split(',').collect();
            assert!(cols.iter().all(|&c| !f[c].is_empty()), "{cmd}: {line}");
        }
    }
}

#[test]
fn g2tau_and_gaussian_check_run_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let (code, err) = run(&["g2tau", "--config", fixture("fig3a").to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "0:2:5"]);
    assert_eq!(code, 0, "{err}");
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("tau,g2\n"));
    let out = dir.path().join("g.csv");
    let (code, err) = run(&["gaussian-check", "--set", "draws=3", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines().skip(1) {
        let r: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((3.5..=4.5).contains(&r));
    }
}

#[test]
fn fixtures_all_run_a_small_spectrum_or_map() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig2a", "fig2b", "fig2f", "fig3a", "fig3b"] {
        let out = dir.path().join(format!("{name}.csv"));
        let (code, err) =
            run(&["spectrum", "--config", fixture(name).to_str().unwrap(), "--out", out.to_str().unwrap(), "--grid", "-1:1:3"]);
        assert_eq!(code, 0, "{name}: {err}");
    }
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = out.to_str().unwrap();
    let cfg = fixture("fig2f");
    let c = cfg.to_str().unwrap();
    for args in [
        vec!["spectrum", "--config", "/nonexistent.conf", "--out", o],
        vec!["spectrum", "--config", c, "--set", "no_such_key=1", "--out", o],
        vec!["spectrum", "--config", c, "--set", "gamma_sigma=-1", "--out", o],
        vec!["g2map", "--config", c, "--grid", "1:0", "--out", o],
        vec!["launch", "--config", c, "--out", o],
        vec!["spectrum", "--config", c],
    ] {
        let (code, err) = run(&args);
        assert_eq!(code, 1, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    assert!(!out.exists());
}

#[test]
fn numerical_failures_exit_with_two_and_leave_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let (code, err) = run(&[
        "spectrum", "--config", fixture("fig2f").to_str().unwrap(), "--set", "epsilon=0.5", "--out", out.to_str().unwrap(),
        "--grid", "-1:1:3",
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn overrides_reach_the_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let (code, err) = run(&[
        "spectrum", "--config", fixture("fig2a").to_str().unwrap(), "--set", "big_gamma=3", "--out", out.to_str().unwrap(),
        "--grid", "0:1:2",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(sidecar(&out)["sensor"]["big_gamma"], 3.0);
}
