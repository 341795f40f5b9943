// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn topotel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topotel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SWEEP: &str = "\
time = 0, 2, 11
sweep Q2 = 1, 4, 4
sweep B2 = 0.5, 1.5, 3
outputs = qfi, fi, f_avg, concurrence_out
";

#[test]
fn sweep_is_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.cfg", SWEEP);
    let mut outs = Vec::new();
    for threads in ["1", "3", "1"] {
        let out = dir.path().join(format!("run{}", outs.len()));
        let o = topotel(&["sweep", "--config", &cfg, "--threads", threads, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outs.push(std::fs::read(out.join("sweep.csv")).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    assert_eq!(outs[0], outs[2]);
    let text = String::from_utf8(outs[0].clone()).unwrap();
    assert_eq!(text.lines().count(), 3 + 4 * 3 * 11);
}

#[test]
fn figure_is_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (d, n) in [(&a, "1"), (&b, "4")] {
        let o = topotel(&["figure", "comparison", "--threads", n, "--out", d.to_str().unwrap()]);
        assert!(o.status.success());
    }
    for f in ["comparison.csv", "comparison.manifest.json"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn figure_overrides_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "o.cfg", "t = 0\n");
    let out = dir.path().join("f");
    let o = topotel(&["figure", "conQ2", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(out.join("conQ2.csv")).unwrap();
    for line in csv.lines().skip(3) {
        assert!(line.ends_with(",1"), "{line}");
    }
    let manifest = std::fs::read_to_string(out.join("conQ2.manifest.json")).unwrap();
    assert!(manifest.contains("\"defaulted\": true"));
}

#[test]
fn config_errors_exit_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "time = 0, 1, 3\noutputs = qfi, bogus\n");
    let o = topotel(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2") && err.contains("bogus"), "{err}");

    assert_eq!(topotel(&["sweep"]).status.code(), Some(1));
    assert_eq!(topotel(&["figure", "fig9"]).status.code(), Some(1));
    assert_eq!(topotel(&["sweep", "--threads", "0"]).status.code(), Some(1));
}

#[test]
fn dynamics_rejects_sweeps_and_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.cfg", SWEEP);
    assert_eq!(topotel(&["dynamics", "--config", &cfg]).status.code(), Some(1));

    let o = topotel(&["dynamics"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# topotel"));
    assert_eq!(text.lines().count(), 3 + 101);
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "j.cfg", "time = 0, 1, 2\nB1 = 0\noutputs = alpha1\n");
    let o = topotel(&["sweep", "--config", &cfg, "--format", "json"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"config_hash\""));
    assert!(text.contains("\"rows\""));
}

#[test]
fn help_exits_zero() {
    assert_eq!(topotel(&["--help"]).status.code(), Some(0));
}

#[test]
fn validate_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = topotel(&["validate", "--seed", "7", "--out", dir.path().to_str().unwrap()]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 12, "{text}");
    assert!(dir.path().join("validation.json").exists());
}
