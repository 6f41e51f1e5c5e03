use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcrossed")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_passes_on_shipped_files() {
    let o = run(&["check", &data("categories/trivial.cat")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result: pass\n"));
}

#[test]
fn corrupted_category_exits_with_two() {
    let text = std::fs::read_to_string(data("categories/z3.cat")).unwrap();
    let bad = text.replace("1 2 = ", "1 2 = 2*");
    assert_ne!(bad, text);
    let path = std::env::temp_dir().join(format!("corrupted-{}.cat", std::process::id()));
    std::fs::write(&path, bad).unwrap();
    let o = run(&["check", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("failure: "), "{out}");
    assert!(out.ends_with("result: fail\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "/no/such/file.cat"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
    let o = run(&["verlinde", &data("categories/s3_z3.cat"), "--alpha", "r", "--beta", "f"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["tau", &data("categories/z3.cat"), &data("categories/z3.cat")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 1);
}

#[test]
fn tau_of_the_plus_two_unknot() {
    let o = run(&["tau", &data("categories/z3.cat"), &data("links/lens_p2.link"), "--terms"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    // -1/√3 with √3 = 2z - z³
    assert!(out.starts_with("tau=-2*z^1 + z^3 (den 3)\n"), "{out}");
    assert!(out.contains("sigma=1\n"));
    assert!(out.contains("label0,term\n0,1\n"));
}

#[test]
fn json_output_parses() {
    let o = run(&["--json", "tau", &data("categories/z3.cat"), &data("links/hopf.link")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["components"], 2);
    assert_eq!(v["f_value"], "3");
    let o = run(&["--json", "gauss", &data("categories/z3.cat")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["global_dim"], "3");
}

#[test]
fn csv_outputs() {
    let out = stdout(&run(&["smatrix", &data("categories/z3.cat")]));
    assert_eq!(out.lines().count(), 4);
    assert!(out.starts_with(",0,1,2\n0,1,1,1\n"));
    let out = stdout(&run(&["omega", &data("categories/s3_z3.cat"), "r"]));
    assert_eq!(out, "label,coefficient\nr_0,1\nr_1,1\nr_2,1\n");
    let out = stdout(&run(&["eval-diagram", &data("categories/z3.cat"), &data("diagrams/hopf_z3.dgm")]));
    assert!(out.ends_with("value=-1 + z^2\n"));
}

#[test]
fn kirby_fuzz_reports() {
    let o = run(&["kirby-fuzz", &data("categories/z2_bichar.cat"), "--seed", "2", "--steps", "25"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("pairs=25\n"));
    assert!(out.ends_with("result: pass\n"));
}
