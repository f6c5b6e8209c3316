use std::path::PathBuf;
use std::process::{Command, Output};

use treejoint::io::ResultFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treejoint"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treejoint-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

const INCONSISTENT: &str = "version = 1\nvariables = [\"a\", \"b\", \"c\"]\n\
    [[edge]]\nu = \"a\"\nv = \"b\"\ndist = [\"1/4\", \"1/4\", \"1/4\", \"1/4\"]\n\
    [[edge]]\nu = \"b\"\nv = \"c\"\ndist = [\"1\", \"0\", \"0\", \"0\"]\n";

#[test]
fn canonical_of_bundled_star() {
    let o = run(&["canonical", "fig4_star"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("joint: (16/405, "), "{}", stdout(&o));
}

#[test]
fn bounds_show_singleton() {
    let o = run(&["bounds", "fig4_star", "--choices", "star_choices"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "Y11: [3/20, 3/20]"));
    assert!(text.lines().any(|l| l == "kind: \"star\""));
}

#[test]
fn json_and_text_carry_the_same_rationals() {
    for args in [&["build", "fig4_star", "--policy", "midpoint"][..], &["demo"][..]] {
        let text = ResultFile::parse_text(&stdout(&run(args))).unwrap();
        let mut with_json = vec!["--json"];
        with_json.extend_from_slice(args);
        let json = ResultFile::parse_json(&stdout(&run(&with_json))).unwrap();
        assert_eq!(text.rationals(), json.rationals());
        assert_eq!(text.sections, json.sections);
    }
}

#[test]
fn validation_failures_exit_one() {
    let path = scratch("inconsistent.toml", INCONSISTENT);
    let o = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("ok: false"));
    assert_eq!(run(&["canonical", path.to_str().unwrap()]).status.code(), Some(1));
    let o = run(&["oracle", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("feasible: false"));
}

#[test]
fn input_errors_exit_two() {
    let bad = scratch("bad.toml", "version = 1\nvariables = [\n");
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("line 2, column 14"), "{}", stdout(&o));
    assert_eq!(run(&["validate", "no-such-file.toml"]).status.code(), Some(2));
    assert_eq!(
        run(&["bounds", "fig4_star", "--schedule", "chain"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["oracle", "fig4_star", "--scan", "9:0"]).status.code(), Some(2));
}

#[test]
fn out_of_box_choice_exits_one() {
    let choices = scratch("choices.toml", "version = 1\n[steps]\n0 = [\"1/4\", \"1/5\"]\n");
    let o = run(&["build", "fig4_star", "--choices", choices.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("outside"));
}

#[test]
fn verify_accepts_built_joint_and_rejects_uniform() {
    let built = ResultFile::parse_text(&stdout(&run(&["demo"]))).unwrap();
    let joint = built.find("joint").unwrap();
    let treejoint::io::Value::Vector(probs) = joint.get("joint").unwrap() else {
        panic!()
    };
    let j = treejoint::JointDist::new(vec!["0".into(), "1".into(), "2".into(), "3".into()], probs.clone()).unwrap();
    let good = scratch("good-joint.toml", &treejoint::io::format_joint(&j));
    assert_eq!(
        run(&["verify", "fig4_star", "--joint", good.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let uniform = treejoint::JointDist::uniform(&["0", "1", "2", "3"]).unwrap();
    let bad = scratch("uniform-joint.toml", &treejoint::io::format_joint(&uniform));
    let o = run(&["verify", "fig4_star", "--joint", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[violation 0]"));
}

#[test]
fn oracle_scan_stays_in_box() {
    let o = run(&["oracle", "fig4_star", "--scan", "2:3", "--choices", "star_choices"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("dimension: 8"));
    assert!(text.contains("scanned: [3/20, 3/20]"));
    assert!(text.contains("within-box: true"));
}

#[test]
fn demo_last_line_is_the_built_joint() {
    let o = run(&["demo"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(
        text.lines().last().unwrap(),
        "joint: (1/20, 1/20, 0, 1/10, 1/10, 0, 1/20, 1/10, 1/20, 3/20, 3/20, 1/20, 1/20, 1/10, 0, 0)"
    );
}
