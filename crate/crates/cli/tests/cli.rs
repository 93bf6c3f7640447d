use std::process::{Command, Output};

fn oddkh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oddkh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn reduced_odd_table_of_9_46() {
    let o = oddkh(&[
        "compute",
        "--gen",
        "pretzel 3 3 -3",
        "--theory",
        "odd",
        "--reduced",
        "--ring",
        "Z",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j\\i | -6 | -5 | -4 | -3 | -2 | -1 |   0");
    assert_eq!(lines[2], "  0 |    |    |    |    |    |    |   2");
    assert_eq!(lines[3], " -2 |    |    |    |    |    |  1 | 1_3");
    assert_eq!(lines[5], " -6 |    |    |    |  2 |    |    |");
}

#[test]
fn unknot_over_rationals() {
    let o = oddkh(&["compute", "--pd", "PD[]", "--theory", "even", "--ring", "Q"]);
    assert_eq!(stdout(&o), "j\\i | 0\n----+--\n  1 | 1\n -1 | 1\n");
}

#[test]
fn json_output_of_10_140() {
    let o = oddkh(&[
        "compute",
        "--gen",
        "pretzel 3 4 -3",
        "--theory",
        "odd",
        "--reduced",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    let entries = v["entries"].as_array().unwrap();
    let want = serde_json::json!({"i": -1, "j": -4, "rank": 0, "torsion": [3]});
    assert!(entries.contains(&want));
}

#[test]
fn several_formats_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hopf.txt");
    let o = oddkh(&[
        "compute",
        "--corpus-name",
        "hopf",
        "--format",
        "latex,json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("\\begin{tabular}"));
    let json = &text[text.find("\n{").unwrap() + 1..];
    let t = oddkh::render::table_from_json(json).unwrap();
    assert_eq!(t.get(2, 6).rank, 1);
}

#[test]
fn custom_corpus_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mine.tsv");
    std::fs::write(
        &path,
        "# two knots\nt\tbraid 2 1 1 1\nf\tbraid 3 1 -2 1 -2\n",
    )
    .unwrap();
    let o = oddkh(&[
        "invariant",
        "jones",
        "--corpus-name",
        "f",
        "--corpus",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "q^5 + q^-5\n");
    let missing = oddkh(&[
        "compute",
        "--corpus-name",
        "x",
        "--corpus",
        path.to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn invariant_reports() {
    assert_eq!(
        stdout(&oddkh(&["invariant", "jones", "--pd", "PD[]"])),
        "q + q^-1\n"
    );
    assert_eq!(
        stdout(&oddkh(&["invariant", "qa", "--gen", "pretzel 3 3 -3"])),
        "not quasi-alternating (odd-thick)\n"
    );
    let tb = stdout(&oddkh(&["invariant", "tb", "--gen", "torus 4 -5"]));
    assert!(tb.contains("even Z: -20"), "{tb}");
    assert!(tb.contains("even Q: -18"), "{tb}");
    assert_eq!(
        stdout(&oddkh(&[
            "invariant",
            "zero-omitting",
            "--corpus-name",
            "12n_475"
        ])),
        "zero-omitting: true\n"
    );
    let profile = stdout(&oddkh(&[
        "invariant",
        "torsion-profile",
        "--gen",
        "pretzel 3 3 -3",
    ]));
    assert!(profile.contains("Z/3 (off-diagonal)"), "{profile}");
    let width = stdout(&oddkh(&[
        "invariant",
        "width",
        "--gen",
        "pretzel 3 3 -3",
        "--theory",
        "even",
    ]));
    assert!(width.ends_with("thin\n"), "{width}");
}

#[test]
fn exit_codes() {
    assert_eq!(
        oddkh(&["compute", "--pd", "PD[X[1,2"]).status.code(),
        Some(2)
    );
    assert_eq!(oddkh(&["compute"]).status.code(), Some(2));
    assert_eq!(
        oddkh(&["compute", "--gen", "torus 3 5", "--max-crossings", "5"])
            .status
            .code(),
        Some(3)
    );
    let capped = Command::new(env!("CARGO_BIN_EXE_oddkh"))
        .args(["compute", "--gen", "torus 3 5"])
        .env("ODDKH_MEMORY_CAP_MB", "0")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let slow = oddkh(&["compute", "--gen", "pretzel 5 5 -5", "--time-limit", "0"]);
    assert_eq!(slow.status.code(), Some(3));
}

#[test]
fn selftest_detects_injected_fault() {
    let o = oddkh(&["selftest", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("[FAIL]  1"));
    let ok = oddkh(&["selftest", "--only", "3,4"]);
    assert!(ok.status.success());
    assert_eq!(stdout(&ok).matches("[PASS]").count(), 2);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_oddkh"))
            .args([
                "compute",
                "--gen",
                "pretzel 3 4 -3",
                "--seed",
                "7",
                "--format",
                "json,table",
            ])
            .env("ODDKH_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn dumps_are_json() {
    let cube = oddkh(&["cube", "--corpus-name", "hopf"]);
    assert!(cube.status.success());
    serde_json::from_slice::<serde_json::Value>(&cube.stdout).unwrap();
    let complex = oddkh(&["complex", "--corpus-name", "hopf", "--theory", "even"]);
    serde_json::from_slice::<serde_json::Value>(&complex.stdout).unwrap();
    assert_eq!(
        oddkh(&["complex", "--pd", "PD[]", "--reduced"])
            .status
            .code(),
        Some(2)
    );
}
