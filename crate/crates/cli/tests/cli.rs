use std::process::{Command, Output};

fn dms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dms")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn surface_summary() {
    let o = dms(&["surface", "hexagon"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("n = 3, aleph = 4"));
    assert!(s.contains("triangulations: 14"));
    assert!(s.contains("d(f_3) = aa* - c*c"));
}

#[test]
fn twist_of_a_neighbouring_arc() {
    let o = dms(&["twist", "hexagon", "b1", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 (0:0/2/-) 2"));
    let o = dms(&["twist", "hexagon", "[1,-1]", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("= 2 shift 0"));
}

#[test]
fn json_output_parses() {
    let o = dms(&["--json", "hom", "hexagon", "1", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dims"]["total"], 1);
    assert_eq!(v["int_categorical"], "1/2");
    assert_eq!(v["int_endpoints"], "1/2");
}

#[test]
fn both_fields_agree() {
    let o = dms(&["--field", "both", "hom", "annulus(1,2)", "1", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_is_deterministic() {
    let args = ["--json", "--seed", "3", "verify", "con0", "--samples", "30"];
    let a = dms(&args);
    let b = dms(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["pass"], true);
    let c = dms(&["--json", "--seed", "4", "verify", "con0", "--samples", "30"]);
    let w: serde_json::Value = serde_json::from_str(&stdout(&c)).unwrap();
    assert_ne!(v["config_hash"], w["config_hash"]);
}

#[test]
fn dot_export() {
    let path = std::env::temp_dir().join(format!("dms-eg-{}.dot", std::process::id()));
    let o = dms(&["--dot", path.to_str().unwrap(), "eg", "hexagon", "--radius", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("7 hearts"));
    let dot = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["surface", "disk(3)"][..],
        &["string", "hexagon", "1 (0:0/0/-) 1"],
        &["twist", "hexagon", "b4", "1"],
        &["verify", "nonsense"],
        &["surface", "torus"],
    ] {
        let o = dms(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
