use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use gaitfuse::report::PLOT_HEADER;
use gaitfuse::synth::TruthSidecar;
use gaitfuse::temporal::stance_swing;
use gaitfuse::GaitReport;

fn gaitfuse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaitfuse")).args(args).output().expect("spawn")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, profile: &str, duration: &str, seed: &str) -> std::path::PathBuf {
    let out = dir.join(format!("{profile}-{seed}.csv"));
    let o = gaitfuse(&["generate", "--profile", profile, "--duration", duration, "--seed", seed, "--output", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn normal_log_analyzes_with_complementary_phases() {
    let dir = tempfile::tempdir().unwrap();
    let log = generate(dir.path(), "normal", "20", "1");
    let report = dir.path().join("report.toml");
    let plot = dir.path().join("plot.csv");
    let o = gaitfuse(&["analyze", "--input", s(&log), "--output", s(&report), "--plot-data", s(&plot)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let r = GaitReport::from_toml(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r.cycles.len() > 30);
    for c in &r.cycles {
        let (st, sw) = stance_swing(c);
        assert_eq!(st + sw, 100.0);
    }
    let t = &r.parameters.temporal;
    assert!((t.stance_left.unwrap().mean + t.swing_left.unwrap().mean - 100.0).abs() < 1e-9);
    assert!((t.stance_right.unwrap().mean + t.swing_right.unwrap().mean - 100.0).abs() < 1e-9);
    r.check_consistency().unwrap();

    let plot = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(plot.lines().next(), Some(PLOT_HEADER));
    assert_eq!(plot.lines().count(), 1 + r.meta.frames_left + r.meta.frames_right);
}

#[test]
fn malformed_csv_exits_two_with_the_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let log = generate(dir.path(), "normal", "5", "1");
    let mut text = std::fs::read_to_string(&log).unwrap();
    let bad = dir.path().join("bad.csv");
    let lines: Vec<&str> = text.lines().collect();
    let mut broken: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    broken[4] = "123.0,L,0.1,oops".into();
    text = broken.join("\n");
    std::fs::write(&bad, text).unwrap();
    let o = gaitfuse(&["analyze", "--input", s(&bad), "--output", s(&dir.path().join("r.toml"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("MalformedRow line 5"));
}

#[test]
fn bad_config_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let log = generate(dir.path(), "normal", "5", "1");
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "zv_variance_threshold1 = -1\n").unwrap();
    let o = gaitfuse(&["analyze", "--input", s(&log), "--config", s(&cfg), "--output", s(&dir.path().join("r.toml"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let log = generate(dir.path(), "normal", "10", "1");
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "# gate\nzv_variance_threshold1 = 6.0\nzv_variance_threshold2 = 3.0\n").unwrap();
    let report = dir.path().join("r.toml");
    let o = gaitfuse(&["analyze", "--input", s(&log), "--config", s(&cfg), "--output", s(&report)]);
    assert_eq!(o.status.code(), Some(0));
    let r = GaitReport::from_toml(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r.config.zv_variance_threshold1, 6.0);
    assert_eq!(r.config.zv_variance_threshold2, 3.0);
}

#[test]
fn generate_is_byte_identical_per_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let (x, y) = (generate(a.path(), "normal", "10", "42"), generate(b.path(), "normal", "10", "42"));
    assert_eq!(std::fs::read(&x).unwrap(), std::fs::read(&y).unwrap());
    let truth = |p: &Path| std::fs::read(format!("{}.truth.toml", p.display())).unwrap();
    assert_eq!(truth(&x), truth(&y));
    let z = generate(a.path(), "normal", "10", "43");
    assert_ne!(std::fs::read(&x).unwrap(), std::fs::read(&z).unwrap());
}

#[test]
fn too_short_duration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = gaitfuse(&["generate", "--profile", "normal", "--duration", "0.5", "--seed", "1", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DurationTooShort"));
}

#[test]
fn unknown_profile_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = gaitfuse(&["generate", "--profile", "marathon", "--duration", "10", "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stroke_left_truth_has_longer_left_stance() {
    let dir = tempfile::tempdir().unwrap();
    let log = generate(dir.path(), "stroke-left", "60", "7");
    let sidecar = TruthSidecar::from_toml(&std::fs::read_to_string(format!("{}.truth.toml", log.display())).unwrap()).unwrap();
    let t = &sidecar.truth.temporal;
    assert!(t.stance_left.unwrap().mean > t.stance_right.unwrap().mean);
    assert_eq!(sidecar.profile.seed, 7);
}

#[test]
fn stream_command_writes_the_same_report_as_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let log = generate(dir.path(), "stroke-right", "15", "5");
    let file_report = dir.path().join("file.toml");
    assert!(gaitfuse(&["analyze", "--input", s(&log), "--output", s(&file_report)]).status.success());

    let out_dir = dir.path().join("stream");
    let mut child = Command::new(env!("CARGO_BIN_EXE_gaitfuse"))
        .args(["stream", "--listen", "127.0.0.1:0", "--output-dir", s(&out_dir)])
        .env("RUST_LOG", "info")
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    let addr = loop {
        line.clear();
        assert!(stderr.read_line(&mut line).unwrap() > 0, "server exited");
        if let Some(rest) = line.split("listening on ").nth(1) {
            break rest.trim().to_string();
        }
    };

    let mut conn = TcpStream::connect(&addr).unwrap();
    conn.write_all(&std::fs::read(&log).unwrap()).unwrap();
    conn.write_all(b"#flush\n").unwrap();
    let mut ack = String::new();
    BufReader::new(conn.try_clone().unwrap()).read_line(&mut ack).unwrap();
    child.kill().unwrap();
    let _ = child.wait();

    let path = ack.strip_prefix("OK ").unwrap_or_else(|| panic!("{ack}")).trim();
    assert_eq!(std::fs::read(path).unwrap(), std::fs::read(&file_report).unwrap());
}
