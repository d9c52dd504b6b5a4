use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcrystal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn normalize_examples() {
    assert_eq!(ok(&["normalize", "x[0]*x[1]"]), "q^2*x[1]x[0]");
    assert_eq!(ok(&["normalize", "x[1]x[0]"]), "x[1]x[0]");
    assert_eq!(ok(&["normalize", "x[0]*x[2]"]), "q^2*x[2]x[0] + (-1+q^2)*x[1]x[1]");
    assert_eq!(ok(&["normalize", "-x[0]"]), "-x[0]");
}

#[test]
fn printed_elements_parse_back() {
    for input in [
        "x[0]*x[2]",
        "x[-1]x[2]x[0] + q^-1*x[1]",
        "(q - q^-1)^2 * x[0]x[1]x[2]",
        "[3]*g*x[1]x[1]",
    ] {
        let once = ok(&["normalize", input]);
        assert_eq!(ok(&["normalize", &once]), once, "{input}");
    }
}

#[test]
fn omega_pair_and_act_examples() {
    assert_eq!(ok(&["omega", "--kind", "psi", "-p", "0", "x[1]x[0]"]), "q^2*x[1]");
    assert_eq!(ok(&["omega", "--kind", "psi", "-p", "-1", "x[1]x[0]"]), "g^-1*x[0]");
    assert_eq!(ok(&["pair", "x[1]x[1]", "x[1]x[1]"]), "1+q^2 (≡1 mod q^2)");
    assert_eq!(ok(&["act", "--gen", "x+", "-k", "0", "--h", "1", "x[0]"]), "v");
    assert_eq!(ok(&["act", "--gen", "K", "--h", "2", "1"]), "q^2*v");
    assert_eq!(ok(&["act", "--gen", "F1", "--h", "2", "1"]), "x[0]v");
    assert_eq!(
        ok(&["act", "--gen", "tilde-omega", "-k", "-1", "--h", "1", "x[1]x[0]"]),
        "x[0]v"
    );
    assert_eq!(
        ok(&[
            "act",
            "--gen",
            "x-",
            "-k",
            "0",
            "--h",
            "1",
            "--h",
            "3",
            "--component",
            "2",
            "x[2]"
        ]),
        "q^2*x[2]x[0]v2 + (-1+q^2)*x[1]x[1]v2"
    );
}

#[test]
fn gram_lists_basis_and_entries() {
    let out = ok(&["gram", "--length", "2", "--degree", "2", "--window", "0:2"]);
    assert!(out.contains("x[2]x[0], x[1]x[1]"), "{out}");
    assert!(out.contains("x[1]x[1]: 0 | 1+q^2"), "{out}");
}

#[test]
fn exit_codes() {
    let o = run(&["normalize", "x[0]*(x[1]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 10"));
    let o = run(&["act", "--gen", "x+", "-k", "0", "--h", "0", "x[0]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not in reduced category"));
    assert_eq!(
        run(&["verify", "form", "--control", "swapped-map"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "crystal", "--window", "2:1"]).status.code(), Some(2));
}

#[test]
fn verify_examples() {
    ok(&[
        "verify",
        "crystal",
        "--h",
        "1",
        "--max-length",
        "3",
        "--window",
        "-2:2",
        "--m",
        "-3:3",
    ]);
    ok(&["verify", "relations", "--window", "-2:2"]);
    let o = run(&["verify", "crystal", "--control", "scaled-lattice"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL lattice-stability"));
    assert_eq!(
        run(&["verify", "crystal", "--h", "2", "--control", "diagonal-split"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["verify", "form", "--control", "perturbed-gram"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["verify", "module", "--max-length", "2", "--control", "swapped-map"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn json_reports_are_stable() {
    let args = [
        "--format",
        "json",
        "verify",
        "form",
        "--max-length",
        "2",
        "--samples",
        "30",
        "--seed",
        "11",
    ];
    let a = ok(&args);
    assert_eq!(a, ok(&args));
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["suite"], "form");
    assert_eq!(v["seed"], 11);
    assert_eq!(v["bounds"]["max_length"], 2);
    let results = v["results"].as_array().unwrap();
    assert!(results
        .iter()
        .all(|r| r["status"] == "pass" && r["witnesses"].as_array().unwrap().is_empty()));
    assert!(results.iter().any(|r| r["name"] == "adjointness"));
}

#[test]
fn verify_all_passes_on_small_bounds() {
    let out = ok(&[
        "--format",
        "json",
        "verify",
        "all",
        "--max-length",
        "2",
        "--samples",
        "20",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let suites: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["suite"].as_str().unwrap())
        .collect();
    assert_eq!(suites, ["confluence", "relations", "form", "module", "crystal"]);
}
