use std::process::{Command, Output};

fn coxperc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxperc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn table_csv() {
    let out = coxperc(&["table", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "lemma,rho,gamma_star\nbasic,18,15\ngeneral,15,13\nra_compact,15,12\n"
    );
}

#[test]
fn certify_json() {
    let out = coxperc(&["certify", "builtin:dodecahedron", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "certified");
    assert!(v["schema_version"].is_string());
    let b1 = v["b1"].as_f64().unwrap();
    assert!((b1 - (91.0 + 3881f64.sqrt()) / 20.0).abs() < 1e-9);
}

#[test]
fn simulate_is_reproducible() {
    let args = [
        "simulate",
        "builtin:cube_three_thirds",
        "--p-grid",
        "0:1:6",
        "--samples",
        "16",
        "--seed",
        "9",
        "--radius",
        "3",
        "--csv",
    ];
    let a = coxperc(&args);
    let mut more = args.to_vec();
    more.extend(["--workers", "1"]);
    let b = coxperc(&more);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("0,0,"));
    assert!(lines[6].starts_with("1,1,"));
}

#[test]
fn exit_codes() {
    assert_eq!(coxperc(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(coxperc(&["growth", "builtin:nope"]).status.code(), Some(1));
    assert_eq!(
        coxperc(&["certify", "builtin:lanner_535"]).status.code(),
        Some(2)
    );
    let capped = coxperc(&[
        "bounds",
        "builtin:dodecahedron",
        "--radius",
        "6",
        "--max-ball-size",
        "1000",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    let grid = coxperc(&["simulate", "builtin:dodecahedron", "--p-grid", "0:1"]);
    assert_eq!(grid.status.code(), Some(1));
}

#[test]
fn oracle_and_growth_text() {
    let out = coxperc(&["oracle", "builtin:dodecahedron", "--nmax", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("decomposition holds"));
    let out = coxperc(&["growth", "builtin:dodecahedron", "--coeffs", "4"]);
    assert!(stdout(&out).contains("sphere sizes: 1, 12, 102, 812, 6402"));
}
