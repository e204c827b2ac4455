use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_realbrauer"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn point_z8_degree_zero() {
    let (code, out, _) = run(&[
        "cohomology",
        "--groupoid",
        &fixture("point.json"),
        "--coeff",
        "Z8",
        "--degree",
        "0",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "HR^0 = Z/8"), "{out}");
}

#[test]
fn z2_group_degree_two_with_oracle() {
    let (code, out, _) = run(&[
        "cohomology",
        "--groupoid",
        &fixture("z2group.json"),
        "--coeff",
        "Z2",
        "--degree",
        "2",
        "--oracle",
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "HR^2 = Z/2"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("oracle: OK")), "{out}");
}

#[test]
fn circle_coefficients_with_oracle() {
    for (file, expected) in [
        ("z2group.json", "Z/2"),
        ("z4group.json", "Z/2"),
        ("z2xz2group.json", "Z/2 + Z/2"),
    ] {
        let (code, out, _) = run(&[
            "cohomology",
            "--groupoid",
            &fixture(file),
            "--coeff",
            "S1",
            "--degree",
            "1",
            "--oracle",
        ]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains(&format!("HR^1 = {expected}\n")), "{out}");
        assert!(out.contains("oracle: OK"), "{out}");
    }
}

#[test]
fn types_table_is_addition() {
    let (code, out, _) = run(&["types", "table"]);
    assert_eq!(code, 0);
    assert!(out.contains("  3 | 3 4 5 6 7 0 1 2\n"), "{out}");
    assert!(out.contains("equals addition mod 8 = yes"));
}

#[test]
fn types_classify_fixtures() {
    for (file, expected) in [
        ("model_k6.json", "type = K6 = [0;1,-]"),
        ("model_k1.json", "type = K1 = [1;0,+]"),
    ] {
        let (code, out, _) = run(&["types", "classify", "--in", &fixture(file)]);
        assert_eq!(code, 0);
        assert!(out.contains(expected), "{out}");
    }
}

#[test]
fn brauer_of_point_and_z2() {
    let (code, out, _) = run(&["brauer", "--groupoid", &fixture("point.json")]);
    assert_eq!(code, 0);
    assert!(
        out.contains("total order = 8\n") && out.contains("cyclic = yes\n"),
        "{out}"
    );
    let (code, out, _) = run(&["brauer", "--groupoid", &fixture("z2group.json"), "--table"]);
    assert_eq!(code, 0);
    assert!(out.contains("total order = 32\n"), "{out}");
    assert!(out.contains("extension group = Z/4 (non-split)\n"), "{out}");
}

#[test]
fn brauer_warns_on_swap_double() {
    let (code, out, _) = run(&["brauer", "--groupoid", &fixture("swap_double_point.json")]);
    assert_eq!(code, 0);
    assert!(
        out.contains("warning: the involution exchanges connected components"),
        "{out}"
    );
}

#[test]
fn ext_square_of_grading_is_half() {
    let g = fixture("z2group.json");
    let a = fixture("ext_grading.json");
    let (code, out, _) = run(&["ext", "mul", "--groupoid", &g, "--in", &a, "--in", &a]);
    assert_eq!(code, 0);
    assert!(out.contains("result class = [0|1/2]"), "{out}");
    let (code, out, _) = run(&["ext", "inv", "--groupoid", &g, "--in", &a]);
    assert_eq!(code, 0);
    assert!(out.contains("result class = [1|1/2]"), "{out}");
}

#[test]
fn fold_agrees() {
    for file in ["point.json", "z2group.json", "pair2.json"] {
        for coeff in ["Z2", "Z4", "Z"] {
            let (code, out, _) = run(&["fold", "--groupoid", &fixture(file), "--coeff", coeff, "--degree", "2"]);
            assert_eq!(code, 0, "{file} {coeff}: {out}");
            assert!(out.contains("oracle: OK (folding)"));
        }
    }
}

#[test]
fn nerve_and_validate() {
    let (code, out, _) = run(&["nerve", "--groupoid", &fixture("z2group.json"), "--degree", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("N_2: 4 simplices, 4 fixed, 0 free orbits"), "{out}");
    let (code, out, _) = run(&["validate", "--groupoid", &fixture("orientifold_z2.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("fixed objects = 0\n") && out.contains("valid\n"), "{out}");
}

#[test]
fn reports_are_deterministic_and_pinned() {
    let dir = tempfile::tempdir().unwrap();
    let (r1, r2) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let args = |r: &PathBuf| {
        vec![
            "cohomology".to_string(),
            "--groupoid".into(),
            fixture("point.json"),
            "--coeff".into(),
            "Z8".into(),
            "--degree".into(),
            "0".into(),
            "--oracle".into(),
            "--report".into(),
            r.to_string_lossy().into_owned(),
        ]
    };
    let a1: Vec<String> = args(&r1);
    let a2: Vec<String> = args(&r2);
    let (_, out1, _) = run(&a1.iter().map(String::as_str).collect::<Vec<_>>());
    let (_, out2, _) = run(&a2.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out1, out2);
    let j1 = std::fs::read_to_string(&r1).unwrap();
    assert_eq!(j1, std::fs::read_to_string(&r2).unwrap());
    let v: serde_json::Value = serde_json::from_str(&j1).unwrap();
    assert_eq!(
        v["fingerprint"],
        "sha256:4f303c027b04705f7d69f75280f27db9ffdd7e0df6a7153d052507b33061089c"
    );
    assert_eq!(v["results"]["group"]["torsion"][0], 8);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&[
        "cohomology",
        "--groupoid",
        "/nonexistent.json",
        "--coeff",
        "Z2",
        "--degree",
        "0",
    ]);
    assert_eq!(code, 1, "{err}");
    let (code, _, _) = run(&[
        "cohomology",
        "--groupoid",
        &fixture("point.json"),
        "--coeff",
        "Q",
        "--degree",
        "0",
    ]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&[
        "cohomology",
        "--groupoid",
        &fixture("z4group.json"),
        "--coeff",
        "Zm(4,+1)",
        "--degree",
        "3",
        "--oracle",
        "--budget",
        "100",
    ]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("budget"));
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("cohomology"));
}
