use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotlike")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn decide_reports_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["decide", "-s", "-1,1,2,-1,1,2"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "NOT_REALIZABLE: obstruction at d²x6 term U^3V^1 x2");

    let o = run(&["decide", "-s", "-1,1,2,-1,1,3"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next().unwrap(), "REALIZABLE: 2 arrows added");

    let o = run(&["decide", "-s", "4 | 2,2 | -4"], dir.path());
    assert!(stdout(&o).starts_with("REALIZABLE"));
}

#[test]
fn decide_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["decide", "-s", "1,1", "--json"], dir.path());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decision"], "NOT_REALIZABLE");
    assert_eq!(v["obstructions"][0]["reason"], "no-adjacent-arrow");
    assert_eq!(v["obstructions"][0]["source"], "x2");
}

#[test]
fn realize_verify_render() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["realize", "-s", "-1,1,2,-1,1,3", "-o", "g.json", "--colors"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["verify", "g.json", "--check", "d2,degree,homology"], dir.path());
    let text = stdout(&o);
    assert!(o.status.success());
    assert_eq!(text.matches(": PASS").count(), 3, "{text}");

    let o = run(&["render", "g.json", "-o", "g.svg"], dir.path());
    assert!(o.status.success());
    let svg = std::fs::read_to_string(dir.path().join("g.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 17);
    assert!(svg.contains("stroke-dasharray"));

    let o = run(&["realize", "-s", "1,1", "-o", "h.json"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("NOT_REALIZABLE"));
    assert!(!dir.path().join("h.json").exists());
}

#[test]
fn symmetric_realization_passes_symmetry_check() {
    let dir = tempfile::tempdir().unwrap();
    run(&["realize", "-s", "2,-1,1,-2", "-o", "s.json"], dir.path());
    let o = run(&["verify", "s.json", "--check", "symmetry"], dir.path());
    assert!(stdout(&o).starts_with("symmetry: PASS"));
}

#[test]
fn census_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["census", "--n", "1", "--max", "2", "--out", "c.csv", "--oracle"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("16 sequences, 10 REALIZABLE"));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(csv.lines().count(), 17);
    let again = run(&["census", "--n", "1", "--max", "2", "--out", "d.csv"], dir.path());
    assert!(again.status.success());
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("d.csv")).unwrap());
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["decide", "-s", "1,0,2"][..],
        &["decide", "-s", "1,2,3"],
        &["verify", "missing.json"],
        &["census", "--n", "0", "--max", "2", "--out", "x.csv"],
        &["frobnicate"],
    ] {
        let o = run(args, dir.path());
        assert!(!o.status.success(), "{args:?}");
    }
    std::fs::write(dir.path().join("bad.json"), r#"{"ring":"R1","generators":[],"arrows":[],"x":0}"#).unwrap();
    assert!(!run(&["verify", "bad.json"], dir.path()).status.success());
    std::fs::write(dir.path().join("ok.json"), r#"{"ring":"R1","generators":[],"arrows":[]}"#).unwrap();
    assert!(!run(&["verify", "ok.json", "--check", "nope"], dir.path()).status.success());
}
