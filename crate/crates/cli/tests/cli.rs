use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subfib")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn doctrine() -> String {
    fixture("heyting_doctrine.json").to_str().unwrap().to_string()
}

#[test]
fn trans_on_the_chain_composes() {
    let o = run(&["derive", "trans", "--model", &doctrine(), "--premises", "x0|0 <= x0|m", "x0|m <= x0|1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("x0 |- x0|0 <= x0|1 [witness="), "{out}");
    assert!(out.contains("# trans"));
}

#[test]
fn transcripts_are_deterministic() {
    let args = ["derive", "fun-sub", "--model", &doctrine(), "--premises", "x0|m <= x0|1", "x0|m <= x0|1"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    // Fun(1, m) = m <= Fun(m, 1) = 1
    assert!(stdout(&a).lines().last().unwrap().starts_with("x0 |- x0|m <= x0|1"));
}

#[test]
fn mismatched_premises_exit_one() {
    let o = run(&["derive", "trans", "--model", &doctrine(), "--premises", "x0|m <= x0|1", "x0|m <= x0|1"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("middle types"));
}

#[test]
fn unknown_names_exit_two() {
    let o = run(&["derive", "trans", "--model", &doctrine(), "--premises", "x0|q <= x0|1", "x0|0 <= x0|m"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("x0|q"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["check", "everything", "--model", "x.json"])), 2);
    assert_eq!(code(&run(&[])), 2);
}

#[test]
fn lam_needs_the_pullback_stage() {
    let term = "<x0>x0[]|m<=1|1> :< x0|1";
    let o = run(&["derive", "lam", "--model", &doctrine(), "--premises", "x0|m", "x0|1", term]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(stderr(&o).contains("pullback property unavailable"), "{}", stderr(&o));
    let sub = fixture("subobject2.json");
    let o = run(&["derive", "lam", "--model", sub.to_str().unwrap(), "--premises", "x0|m", "x0|1", term]);
    assert_eq!(code(&o), 2);
}

#[test]
fn fun_structure_stage_two_is_opt_in() {
    let m = doctrine();
    let o = run(&["check", "fun-structure", "--model", &m]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("FAIL stage2.pullback"), "{out}");
    assert!(!out.contains("FAIL stage1"));
    assert_eq!(code(&run(&["check", "fun-structure", "--model", &m, "--require-stage2"])), 1);
    let sub = fixture("subobject2.json");
    assert_eq!(code(&run(&["check", "fun-structure", "--model", sub.to_str().unwrap(), "--require-stage2"])), 0);
}

#[test]
fn failing_suites_exit_one() {
    let o = run(&["check", "gcwf", "--model", &doctrine()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL eta-cartesian"));
}

#[test]
fn dangling_reference_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    let text = r#"{"version": 1, "categories": {"c": {"objects": ["a"],
        "morphisms": [{"name": "1", "dom": "a", "cod": "a"}],
        "identities": {"a": "1"}, "composition": [["1", "1", "nowhere"]]}}}"#;
    std::fs::write(&p, text).unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("nowhere"), "{}", stderr(&o));
}

#[test]
fn invalid_category_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    // the composite e.e is never given
    let text = r#"{"version": 1, "categories": {"c": {"objects": ["a"],
        "morphisms": [{"name": "1", "dom": "a", "cod": "a"}, {"name": "e", "dom": "a", "cod": "a"}],
        "identities": {"a": "1"}, "composition": []}}}"#;
    std::fs::write(&p, text).unwrap();
    let o = run(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("FAIL"));
}

#[test]
fn constructions_from_models() {
    let dir = tempfile::tempdir().unwrap();
    let kp = fixture("kernel_pair_finset1.json");
    let kp = kp.to_str().unwrap();
    for (what, file) in [("comma", "comma.json"), ("t-gcwf", "t.json"), ("vop", "vop.json")] {
        let out = dir.path().join(file);
        let out = out.to_str().unwrap();
        let o = run(&["build", what, "--model", kp, "-o", out]);
        assert_eq!(code(&o), 0, "{what}: {}", stderr(&o));
        assert_eq!(code(&run(&["validate", out])), 0, "{what}");
    }
    let t = dir.path().join("t.json");
    assert_eq!(code(&run(&["check", "gcwf", "--model", t.to_str().unwrap()])), 0);
    let c = dir.path().join("comma.json");
    assert_eq!(code(&run(&["check", "monad-laws", "--model", c.to_str().unwrap()])), 0);
}

#[test]
fn kernel_pair_over_two_has_no_pullbacks() {
    let o = run(&["build", "kernel-pair", "2"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no pullback"));
}

#[test]
fn graph_marks_vertical_edges() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.dot");
    let o = run(&["graph", fixture("kernel_pair_finset1.json").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let dot = std::fs::read_to_string(&out).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("style=dashed"));
    let edges = dot.lines().filter(|l| l.contains("->")).count();
    let solid = dot.lines().filter(|l| l.contains("->") && !l.contains("dashed")).count();
    assert!(edges > solid && solid > 0);

    let o = run(&["graph", fixture("finset2.json").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let dot = std::fs::read_to_string(&out).unwrap();
    // sets of size 0, 1, 2: n^m maps m -> n, less the identities
    let maps: u32 = (0..3u32).flat_map(|m| (0..3u32).map(move |n| n.pow(m))).sum();
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count() as u32, maps - 3);
    assert!(!dot.contains("dashed"));
}
