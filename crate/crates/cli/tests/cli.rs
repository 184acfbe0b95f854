use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn run_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> (Value, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mvtop"));
    cmd.args(args).current_dir(dir).env_remove("MVTOP_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&text).unwrap_or(Value::Null);
    (json, out.status.code().unwrap())
}

fn run(args: &[&str]) -> (Value, i32) {
    run_in(Path::new("."), args, &[])
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn check_commands() {
    let (r, code) = run(&["check", "continuity", "--map", "antipodal_pairing"]);
    assert_eq!((code, r["status"].as_str()), (0, Some("holds")));

    let dir = tempfile::tempdir().unwrap();
    let bad =
        r#"{"points": ["0","1","2"], "min_open": {"0": ["0","1"], "1": ["1","2"], "2": ["2"]}}"#;
    write(dir.path(), "bad.json", bad);
    let (r, code) = run_in(dir.path(), &["check", "space", "--space", "bad.json"], &[]);
    assert_eq!(code, 2);
    assert_eq!(r["result"]["kind"], "NotTransitive");

    let (r, code) = run(&["check", "connected", "--space", "discrete:2"]);
    assert_eq!(code, 1);
    assert_eq!(r["result"]["witness"]["from"], serde_json::json!(["0"]));

    let (r, code) = run(&["check", "homeomorphism", "--map", "antipode"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["inverse"]["a"], serde_json::json!(["c"]));
    let (_, code) = run(&["check", "homeomorphism", "--map", "antipodal_pairing"]);
    assert_eq!(code, 1);
    let (_, code) = run(&[
        "check",
        "section",
        "--map",
        "antipode",
        "--section",
        "antipode",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn schema_errors_name_the_location() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "s.json",
        "{\"points\": [\"a\"],\n \"min_open\": {\"a\": \"a\"}}",
    );
    let (r, code) = run_in(dir.path(), &["check", "space", "--space", "s.json"], &[]);
    assert_eq!(code, 2);
    assert_eq!(r["result"]["kind"], "Schema");
    assert!(r["result"]["message"].as_str().unwrap().contains("line 2"));
    let (r, code) = run(&["check", "space", "--space", "torus"]);
    assert_eq!(
        (code, r["result"]["kind"].as_str()),
        (2, Some("UnknownModel"))
    );
}

#[test]
fn homotopy_commands() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(
        p,
        "id.json",
        r#"{"dom": "sierpinski", "cod": "sierpinski", "values": {"0": ["0"], "1": ["1"]}}"#,
    );
    write(
        p,
        "c0.json",
        r#"{"dom": "sierpinski", "cod": "sierpinski", "values": {"0": ["0"], "1": ["0"]}}"#,
    );
    write(
        p,
        "d0.json",
        r#"{"dom": "discrete:2", "cod": "discrete:2", "values": {"0": ["0"], "1": ["0"]}}"#,
    );
    write(
        p,
        "d1.json",
        r#"{"dom": "discrete:2", "cod": "discrete:2", "values": {"0": ["1"], "1": ["1"]}}"#,
    );

    let (r, code) = run_in(
        p,
        &[
            "homotopy",
            "--f",
            "id.json",
            "--g",
            "c0.json",
            "--emit-certificate",
            "c.json",
        ],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(r["result"]["certificate_length"], 2);
    let cert: mvtop_core::io::ChainDoc =
        serde_json::from_str(&std::fs::read_to_string(p.join("c.json")).unwrap()).unwrap();
    let chain = cert.build().unwrap();
    assert_eq!(chain.len(), 2);
    let step = |f, g| mvtop_core::one_step(f, g).unwrap();
    assert!(step(&chain[0], &chain[1]) || step(&chain[1], &chain[0]));

    let (r, code) = run_in(p, &["homotopy", "--f", "d0.json", "--g", "d1.json"], &[]);
    assert_eq!(
        (code, r["result"]["status"].as_str()),
        (1, Some("not-homotopic"))
    );

    let (_, code) = run(&["homotopy", "--contractible", "sierpinski"]);
    assert_eq!(code, 0);
    let (_, code) = run(&[
        "homotopy",
        "--null",
        "antipodal_pairing",
        "--singleton-constants",
    ]);
    assert_eq!(code, 0);
    let (_, code) = run(&["homotopy", "--f", "antipode"]);
    assert_eq!(code, 2);
}

#[test]
fn invariant_commands() {
    let (r, code) = run(&["invariant", "tmc", "--space", "circle4"]);
    assert_eq!(code, 0);
    let res = &r["result"];
    assert_eq!(
        (
            res["lower"].as_u64(),
            res["upper"].as_u64(),
            res["decided"].as_bool()
        ),
        (Some(4), Some(4), Some(true))
    );
    assert_eq!(res["cover"].as_array().unwrap().len(), 4);

    let (r, code) = run(&["invariant", "catm", "--space", "sierpinski"]);
    assert_eq!((code, r["result"]["upper"].as_u64()), (0, Some(1)));

    let (r, code) = run(&["invariant", "dm", "--f", "antipode", "--g", "antipode"]);
    assert_eq!((code, r["result"]["upper"].as_u64()), (0, Some(1)));

    let (r, code) = run(&["invariant", "tmc", "--space", "discrete:2"]);
    assert_eq!(code, 2);
    assert_eq!(
        (r["result"]["from"].as_str(), r["result"]["to"].as_str()),
        (Some("{0}"), Some("{1}"))
    );

    let (r, code) = run(&[
        "invariant",
        "tmc-map",
        "--map",
        "antipodal_pairing",
        "--mode",
        "literal",
    ]);
    assert_eq!((code, r["result"]["upper"].as_u64()), (0, Some(2)));
    assert_eq!(r["result"]["fibration_certificate"]["kind"], "none");

    let (r, code) = run(&["invariant", "msecat", "--map", "antipode"]);
    assert_eq!((code, r["result"]["upper"].as_u64()), (0, Some(1)));
}

#[test]
fn budget_comes_from_the_environment() {
    let here = Path::new(".");
    let (r, code) = run_in(
        here,
        &["invariant", "catm", "--space", "circle4"],
        &[("MVTOP_BUDGET", "0")],
    );
    assert_eq!(code, 3);
    assert_eq!(r["status"], "unknown");
    assert_eq!(r["budget"]["limit"], 0);
    assert_eq!(r["result"]["upper"], 2);
    let (_, code) = run_in(
        here,
        &[
            "invariant",
            "catm",
            "--space",
            "circle4",
            "--budget",
            "1000",
        ],
        &[("MVTOP_BUDGET", "0")],
    );
    assert_eq!(code, 0);
}

#[test]
fn models_emit_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "sierpinski",
        "circle4",
        "fence:4",
        "cone:discrete:2",
        "antipodal_pairing",
    ] {
        let out = Command::new(env!("CARGO_BIN_EXE_mvtop"))
            .args(["models", "emit", name])
            .output()
            .unwrap();
        assert!(out.status.success());
        let text = String::from_utf8(out.stdout).unwrap();
        let file = dir.path().join("m.json");
        std::fs::write(&file, &text).unwrap();
        let what = if name.contains("antipodal") {
            "continuity"
        } else {
            "space"
        };
        let flag = if what == "space" { "--space" } else { "--map" };
        let (_, code) = run(&["check", what, flag, file.to_str().unwrap()]);
        assert_eq!(code, 0, "{name}");
        if what == "space" {
            let doc: mvtop_core::io::SpaceDoc = serde_json::from_str(&text).unwrap();
            let again = serde_json::to_string(&mvtop_core::io::SpaceDoc::of(&doc.build().unwrap()))
                .unwrap();
            assert_eq!(again, text.trim());
        }
    }
    let (r, code) = run(&["models", "list"]);
    assert_eq!(code, 0);
    assert!(r["result"]["spaces"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["name"] == "circle4"));
}

#[test]
fn fibration_suites() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(
        p,
        "gen.json",
        r#"{"rho": "antipode", "generate": {"count": 10, "max_points": 3, "max_k": 2, "seed": 1}}"#,
    );
    let (r, code) = run_in(p, &["fibration", "check", "--suite", "gen.json"], &[]);
    assert_eq!((code, r["result"]["found"].as_u64()), (0, Some(10)));
    assert_eq!(r["result"]["certificate"]["kind"], "homeomorphism");

    // A constant map whose value can move: the square has no filler.
    write(
        p,
        "stuck.json",
        r#"{"rho": {"dom": "point", "cod": "sierpinski", "values": {"0": ["0", "1"]}},
            "squares": [{"w": "point", "k": 1, "alpha": {"0": ["0"]}, "beta": {"0,0": ["0", "1"], "0,1": ["1"]}}]}"#,
    );
    let (r, code) = run_in(p, &["fibration", "check", "--suite", "stuck.json"], &[]);
    assert_eq!((code, r["result"]["not_found"].as_u64()), (1, Some(1)));

    write(
        p,
        "bad.json",
        r#"{"rho": "antipode", "squares": [{"w": "point", "k": 1, "alpha": {"0": ["a"]}, "beta": {"0,0": ["b"], "0,1": ["b"]}}]}"#,
    );
    let (r, code) = run_in(p, &["fibration", "check", "--suite", "bad.json"], &[]);
    assert_eq!(
        (code, r["result"]["kind"].as_str()),
        (2, Some("NotCommuting"))
    );
}
