use std::path::PathBuf;
use std::process::{Command, Output};

fn dgalois(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgalois")).args(args).output().expect("run dgalois")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgalois-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn weyl_summary_and_json() {
    let o = dgalois(&["weyl", "--type", "E", "--rank", "6"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("orbit 27, group order 51840"), "{}", stdout(&o));

    let o = dgalois(&["weyl", "--type", "A", "--rank", "3", "--enumerate", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["group_order"], 24);
    assert_eq!(v["cycle_types"].as_array().unwrap().len(), 5);
}

#[test]
fn b4_has_no_strictly_transitive_sets() {
    let o = dgalois(&["weyl", "--type", "B", "--rank", "4", "--find-transitive", "--max-set", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("none exist"), "{}", stdout(&o));
}

#[test]
fn build_then_verify_round_trip() {
    let sys = scratch("sp4.json");
    let report = scratch("sp4-report.json");
    let sys_s = sys.to_str().unwrap();
    let o = dgalois(&["build", "--group", "sp4", "--action", "conjugation", "--order", "2", "--points", "1,4,9", "--out", sys_s]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let o = dgalois(&["verify", sys_s, "--report", report.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all checks passed"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["passed"], true);

    for m in ["rationalize-eigenvalue", "zero-nilpotent", "shift-point-into-bad-set", "flip-action-sign"] {
        let o = dgalois(&["verify", sys_s, "--mutate", m]);
        assert_eq!(code(&o), 1, "{m}");
        assert!(stdout(&o).contains("verification FAILED"), "{m}");
    }
}

#[test]
fn build_is_deterministic() {
    let args = ["build", "--group", "sl2", "--action", "transpose-inverse", "--points", "4,9,16"];
    assert_eq!(dgalois(&args).stdout, dgalois(&args).stdout);
}

#[test]
fn reproduce_fixtures() {
    let o = dgalois(&["reproduce", "--fixture", "sl2-toric"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("all checks passed"));
    let o = dgalois(&["reproduce", "--example", "section5", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes_for_bad_input_and_caps() {
    assert_eq!(code(&dgalois(&["weyl", "--type", "G", "--rank", "2"])), 2);
    assert_eq!(code(&dgalois(&["build", "--group", "sl2", "--points", "1,2"])), 2);
    assert_eq!(code(&dgalois(&["verify", "/nonexistent/system.json"])), 2);
    assert_eq!(code(&dgalois(&["reproduce", "--fixture", "nope"])), 2);
    assert_eq!(code(&dgalois(&["weyl", "--bogus"])), 2);
    let o = dgalois(&["weyl", "--type", "E", "--rank", "7", "--enumerate", "--cap", "1000"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("DGALOIS_ENUM_MAX_MIB"));
}
