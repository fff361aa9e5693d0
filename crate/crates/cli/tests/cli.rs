use std::process::{Command, Output};

use serde_json::Value;

fn hilb2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilb2"))
        .args(args)
        .env_remove("HILB2_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn classify_rows() {
    let o = hilb2(&[
        "classify",
        "--catalog",
        "simply-connected",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["results"].as_array().unwrap().len(), 1);
    assert_eq!(v["results"][0]["degree"], 1);

    let v = json(&hilb2(&[
        "classify",
        "--presentation",
        "< a | a^2 >",
        "--format",
        "json",
    ]));
    let degrees: Vec<u64> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["degree"].as_u64().unwrap())
        .collect();
    assert_eq!(degrees, vec![1, 2]);

    let v = json(&hilb2(&[
        "classify",
        "--presentation",
        "< a b | a^4, a^2 b^-2, b^-1 a b a >",
        "--format",
        "json",
    ]));
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
}

#[test]
fn classify_json_has_no_floats() {
    fn check(v: &Value) {
        match v {
            Value::Number(n) => assert!(n.is_u64() || n.is_i64(), "{n}"),
            Value::Array(a) => a.iter().for_each(check),
            Value::Object(m) => m.values().for_each(check),
            _ => {}
        }
    }
    check(&json(&hilb2(&[
        "classify",
        "--catalog",
        "a4",
        "--format",
        "json",
    ])));
}

#[test]
fn classify_errors() {
    let o = hilb2(&["classify", "--presentation", "< a | a^ >"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = hilb2(&["classify", "--catalog", "no-such-surface"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hilb2(&["--group-cap", "3", "classify", "--catalog", "cyclic-7"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn env_cap_applies() {
    let o = Command::new(env!("CARGO_BIN_EXE_hilb2"))
        .args(["classify", "--catalog", "cyclic-7"])
        .env("HILB2_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn classify_from_file() {
    let dir = std::env::temp_dir().join(format!("hilb2-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("surface.json");
    std::fs::write(
        &path,
        r#"{"name":"file","pi1_smooth":"< a | a^3 >","singular_points":[{"label":"p","ade":"A2","local_loops":["a"]}],"hodge":[1,0,1]}"#,
    )
    .unwrap();
    let o = hilb2(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2 covers"), "{text}");
    assert!(text.lines().last().unwrap().ends_with(" p"), "{text}");
}

#[test]
fn construct_reports() {
    let o = hilb2(&[
        "construct",
        "--group",
        "Z2",
        "--base-size",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json(&o)["results"][0];
    assert_eq!(
        (r["j_order"].as_u64(), r["h_order"].as_u64()),
        (Some(8), Some(4))
    );
    let fibers: Vec<(u64, u64)> = r["fibers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            (
                f["big_fiber"].as_u64().unwrap(),
                f["h_orbits"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(fibers, vec![(4, 2), (8, 2), (4, 2)]);

    let r = &json(&hilb2(&[
        "construct",
        "--group",
        "1",
        "--base-size",
        "2",
        "--format",
        "json",
    ]))["results"][0];
    assert_eq!(r["j_order"], 2);
    let big: Vec<u64> = r["fibers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["big_fiber"].as_u64().unwrap())
        .collect();
    assert_eq!(big, vec![1, 2, 1]);

    let o = hilb2(&["construct", "--group", "S3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("not abelian"));
    assert_eq!(
        hilb2(&["construct", "--group", "W7"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_scales_and_fault() {
    let o = hilb2(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    let passes = stdout(&o).lines().filter(|l| l.starts_with("PASS")).count();
    assert!(passes >= 30, "{passes} checks");

    let o = hilb2(&["verify", "--max-group-order", "1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = hilb2(&["verify", "--max-group-order", "2", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("FAIL")).count(),
        1
    );
}

#[test]
fn hodge_lines() {
    let first = |args: &[&str]| stdout(&hilb2(args)).lines().next().unwrap().to_string();
    assert_eq!(first(&["hodge", "1,0,1"]), "(1,0,1,0,1) ISV: yes");
    assert_eq!(first(&["hodge", "1,2,1"]), "(1,2,2,2,1) ISV: no");
    assert_eq!(first(&["hodge", "1,0,0"]), "(1,0,0,0,0) ISV: no");
    let o = hilb2(&["hodge", "1,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let v = json(&hilb2(&["hodge", "1,0,1", "--format", "json"]));
    assert_eq!(
        v["results"][0]["hilbert_square"],
        serde_json::json!([1, 0, 1, 0, 1])
    );
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(hilb2(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        hilb2(&["hodge", "1,0,1", "--format", "yaml"]).status.code(),
        Some(2)
    );
    assert_eq!(hilb2(&["--help"]).status.code(), Some(0));
}
