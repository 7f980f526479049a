use std::process::{Command, Output};

use serde_json::Value;

fn data() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/workspace.json").to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cospans"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let json = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), json)
}

#[test]
fn passing_and_failing_verdicts_set_the_exit_code() {
    let ws = data();
    let (code, r) = report(&["-i", &ws, "check-left-adjoint", "--cospan", "rw"]);
    assert_eq!((code, r["verdict"].as_str()), (0, Some("pass")));
    let (code, r) = report(&["-i", &ws, "derive-adjoint", "--cospan", "ww"]);
    assert_eq!((code, r["verdict"].as_str()), (1, Some("fail")));
    assert!(!r["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_with_two() {
    let ws = data();
    assert_eq!(
        run(&["-i", &ws, "mirror", "--cospan", "nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["-i", &ws, "mirror", "--cospan", "A"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["compose", "--left", "x"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));

    let dir = std::env::temp_dir().join(format!("cospans-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"A\": {\"set\": {\"elements\": [\"x\", \"x\"]}}\n}\n",
    )
    .unwrap();
    let out = run(&["-i", bad.to_str().unwrap(), "self-duality", "--object", "A"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn compose_matches_the_library() {
    let ws = data();
    let (_, r) = report(&["-i", &ws, "compose", "--left", "ww", "--right", "rw"]);
    let loaded = cospans::json::Workspace::load(&[&ws]).unwrap();
    let expected =
        cospans::cospan::hcompose(loaded.cospan("ww").unwrap(), loaded.cospan("rw").unwrap())
            .unwrap();
    assert_eq!(
        r["witnesses"]["composite"],
        cospans::json::cospan_json(&expected)
    );
}

#[test]
fn timing_is_opt_in() {
    let ws = data();
    let (_, r) = report(&["-i", &ws, "tensor", "--left", "rw", "--right", "ww"]);
    assert!(r.get("timing").is_none());
    let (_, r) = report(&[
        "-i", &ws, "--timing", "tensor", "--left", "rw", "--right", "ww",
    ]);
    assert!(r["timing"]["total"].is_number());
}

#[test]
fn out_flag_writes_the_report() {
    let ws = data();
    let path = std::env::temp_dir().join(format!("cospans-out-{}.json", std::process::id()));
    let out = run(&[
        "-i",
        &ws,
        "--out",
        path.to_str().unwrap(),
        "mirror",
        "--cospan",
        "rw",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "mirror");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn algebra_commands_carry_the_truncation_note() {
    let ws = data();
    for args in [
        vec!["-i", ws.as_str(), "check-rigid", "--algebra", "fold"],
        vec!["-i", ws.as_str(), "check-frobenius", "--object", "B"],
        vec!["-i", ws.as_str(), "pushout-algebra", "--f", "f", "--g", "g"],
    ] {
        let (code, r) = report(&args);
        assert_eq!(code, 0, "{args:?}");
        let notes = r["diagnostics"].as_array().unwrap();
        assert!(notes
            .iter()
            .any(|d| d.as_str().unwrap().contains("2-isomorphism")));
    }
}

#[test]
fn envelope_commands() {
    let ws = data();
    let (code, r) = report(&["-i", &ws, "envbm-hom", "--dom", "X", "--cod", "Y"]);
    assert_eq!(code, 0);
    assert_eq!(r["witnesses"]["count"], 1);
    let (code, _) = report(&[
        "-i",
        &ws,
        "envbm-compose",
        "--left",
        "id_Y",
        "--right",
        "act_l",
    ]);
    assert_eq!(code, 0);
    let (code, r) = report(&["envbm-generate", "--max-size", "2"]);
    assert_eq!((code, r["witnesses"]["bound"].as_u64()), (0, Some(2)));
}

#[test]
fn text_format() {
    let ws = data();
    let out = run(&[
        "-i",
        &ws,
        "--format",
        "text",
        "forgetful-bc-check",
        "--f",
        "f",
        "--g",
        "g",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("command: forgetful-bc-check\nverdict: pass\n"));
}
